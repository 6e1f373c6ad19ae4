//! Differential testing of the relations: random well-typed words, every
//! applicable one-step rewrite, classes compared through the oracle.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::GAlgebra;
use crate::error::Error;
use crate::ktheory::class_with;
use crate::levelone::S1Element;
use crate::normalizer::{is_complex, FusionRule, Normalizer};
use crate::oracle::Oracle;
use crate::path::Endpoint;
use crate::words::{applicable_rewrites, rewrite_one, same_object, Generator, Rewrite, SumOfProducts, Term, Vocabulary};
use crate::workspace::Workspace;

#[derive(Clone, Debug)]
pub struct FuzzConfig {
    pub seed: u64,
    pub count: usize,
    pub max_length: usize,
    pub max_dim: usize,
    pub max_group_order: usize,
    pub rule: FusionRule,
    /// Keep the (original, rewritten) element pairs of every agreeing comparison.
    pub collect_pairs: bool,
}

impl Default for FuzzConfig {
    fn default() -> FuzzConfig {
        FuzzConfig {
            seed: 0,
            count: 200,
            max_length: 6,
            max_dim: 6,
            max_group_order: 4,
            rule: FusionRule::Auto,
            collect_pairs: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Mismatch {
    pub word: String,
    pub rewrite: String,
    pub rewritten: String,
    pub left: String,
    pub right: String,
    /// The smallest word found that still fails under the same rule.
    pub reproducer: String,
    pub reproducer_rewrite: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct FuzzReport {
    pub seed: u64,
    pub rule: String,
    pub words: usize,
    pub comparisons: usize,
    pub per_rule: BTreeMap<String, usize>,
    pub undecided: usize,
    pub mismatches: Vec<Mismatch>,
    #[serde(skip)]
    pub pairs: Vec<(S1Element, S1Element)>,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "fuzz-relations seed={} rule={}", self.seed, self.rule);
        let _ = writeln!(out, "words: {}  comparisons: {}  undecided: {}", self.words, self.comparisons, self.undecided);
        for (rule, n) in &self.per_rule {
            let _ = writeln!(out, "  rule ({rule}): {n}");
        }
        for (k, m) in self.mismatches.iter().enumerate() {
            let _ = writeln!(out, "mismatch {}: {}", k + 1, m.word);
            let _ = writeln!(out, "  rewrite: {}", m.rewrite);
            let _ = writeln!(out, "  rewritten: {}", m.rewritten);
            let _ = writeln!(out, "  classes: {} vs {}", m.left, m.right);
            let _ = writeln!(out, "  reproducer: {} with {}", m.reproducer, m.reproducer_rewrite);
        }
        let _ = writeln!(out, "{}", if self.passed() { "PASS" } else { "FAIL" });
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["passed"] = self.passed().into();
        v
    }
}

/// Letters the generator may draw, with their weights.
fn alphabet(ws: &Workspace, eligible: &dyn Fn(&GAlgebra) -> bool) -> Vec<(Generator, u32)> {
    let mut out = Vec::new();
    let mut push = |g: Generator, w: u32| {
        if eligible(g.source()) && eligible(g.target()) {
            out.push((g, w));
        }
    };
    for h in ws.homs() {
        push(Generator::Hom(h.clone()), 2);
    }
    for e in ws.corners() {
        push(Generator::Corner(e.clone()), 2);
        push(Generator::CornerInv(e.clone()), 4);
    }
    for s in ws.sequences() {
        push(Generator::Split(s.clone()), 4);
    }
    for h in ws.homotopies() {
        push(Generator::Endpoint(h.clone(), Endpoint::Start), 1);
        push(Generator::Endpoint(h.clone(), Endpoint::End), 1);
    }
    for (_, a) in ws.algebras() {
        push(Generator::Identity(a.clone()), 1);
    }
    out
}

fn walk(rng: &mut ChaCha8Rng, letters: &[(Generator, u32)], from: &Arc<GAlgebra>, length: usize) -> Vec<Generator> {
    let mut out: Vec<Generator> = Vec::with_capacity(length);
    let mut at = from.clone();
    for _ in 0..length {
        let options: Vec<&(Generator, u32)> = letters.iter().filter(|(g, _)| same_object(g.source(), &at)).collect();
        if options.is_empty() {
            break;
        }
        let pick = WeightedIndex::new(options.iter().map(|(_, w)| *w)).expect("positive weights");
        let g = options[pick.sample(rng)].0.clone();
        at = g.target().clone();
        out.push(g);
    }
    out
}

fn random_word(rng: &mut ChaCha8Rng, letters: &[(Generator, u32)], sources: &[Arc<GAlgebra>], max_length: usize) -> SumOfProducts {
    let source = sources[rng.gen_range(0..sources.len())].clone();
    let length = rng.gen_range(1..=max_length);
    let first = walk(rng, letters, &source, length);
    let target = first.last().map_or(source.clone(), |g| g.target().clone());
    let mut terms = vec![Term { negative: false, letters: first }];
    if rng.gen_bool(0.3) {
        for _ in 0..16 {
            let length = rng.gen_range(1..=max_length);
            let other = walk(rng, letters, &source, length);
            let end = other.last().map_or(&source, |g| g.target());
            if !other.is_empty() && same_object(end, &target) {
                terms.push(Term { negative: rng.gen_bool(0.5), letters: other });
                break;
            }
        }
    }
    SumOfProducts { source, target, terms }
}

struct Checker<'a> {
    normalizer: Normalizer,
    oracles: HashMap<String, Oracle>,
    vocab: &'a Vocabulary,
}

enum Outcome {
    Agree(S1Element, S1Element),
    Undecided,
    Disagree(String, String),
}

impl Checker<'_> {
    fn oracle(&mut self, b: &Arc<GAlgebra>) -> Result<&Oracle, Error> {
        if !self.oracles.contains_key(b.name()) {
            let o = Oracle::new(b)?;
            self.oracles.insert(b.name().to_string(), o);
        }
        Ok(&self.oracles[b.name()])
    }

    fn key(&mut self, w: &SumOfProducts) -> Result<(S1Element, String), String> {
        let z = self.normalizer.phi_expanded(w).map_err(|e| format!("error: {e}"))?;
        let oracle = self.oracle(&w.target).map_err(|e| format!("error: {e}"))?;
        let class = class_with(oracle, &z).map_err(|e| format!("error: {e}"))?;
        let key = match class.key() {
            Ok(k) => k.to_string(),
            Err(e) => return Err(format!("indeterminate: {e}")),
        };
        Ok((z, key))
    }

    fn compare(&mut self, w: &SumOfProducts, r: &Rewrite) -> Result<Outcome, Error> {
        let w2 = rewrite_one(w, r)?;
        let left = self.key(w);
        let right = self.key(&w2);
        Ok(match (left, right) {
            (Ok((a, ka)), Ok((b, kb))) if ka == kb => Outcome::Agree(a, b),
            (Err(e), _) | (_, Err(e)) if e.starts_with("indeterminate") => Outcome::Undecided,
            (l, r) => {
                let show = |x: Result<(S1Element, String), String>| x.map_or_else(|e| e, |(_, k)| k);
                Outcome::Disagree(show(l), show(r))
            }
        })
    }

    fn fails(&mut self, w: &SumOfProducts, r: &Rewrite) -> bool {
        matches!(self.compare(w, r), Ok(Outcome::Disagree(..)))
    }

    /// Greedy shrinking: a single term first, then the shortest failing prefix.
    fn minimize(&mut self, w: &SumOfProducts, r: &Rewrite) -> (SumOfProducts, Rewrite) {
        let (mut w, mut r) = (w.clone(), r.clone());
        if w.terms.len() > 1 {
            let term = w.terms[r.term()].clone();
            let target = term.letters.last().map_or(w.source.clone(), |g| g.target().clone());
            let single = SumOfProducts { source: w.source.clone(), target, terms: vec![Term { negative: false, letters: term.letters }] };
            let r1 = r.with_term(0);
            if self.fails(&single, &r1) {
                (w, r) = (single, r1);
            }
        }
        if w.terms.len() == 1 {
            let n = w.terms[0].letters.len();
            for len in r.position()..n {
                let letters = w.terms[0].letters[..len].to_vec();
                let target = letters.last().map_or(w.source.clone(), |g| g.target().clone());
                let cut = SumOfProducts { source: w.source.clone(), target, terms: vec![Term { negative: false, letters }] };
                let still = applicable_rewrites(&cut, self.vocab).into_iter().find(|c| c.to_string() == r.to_string());
                if let Some(c) = still {
                    if self.fails(&cut, &c) {
                        (w, r) = (cut, c);
                        break;
                    }
                }
            }
        }
        (w, r)
    }
}

/// Runs the relation suite over `config.count` random words.
pub fn fuzz_relations(ws: &Workspace, config: &FuzzConfig) -> Result<FuzzReport, Error> {
    let decidable: HashMap<String, bool> = ws.algebras().map(|(n, a)| (n.to_string(), Oracle::new(a).is_ok())).collect();
    let eligible = |a: &GAlgebra| {
        a.dim() <= config.max_dim && a.group().order() <= config.max_group_order && decidable.get(a.name()).copied().unwrap_or(false)
    };
    let letters = alphabet(ws, &eligible);
    let sources: Vec<Arc<GAlgebra>> = ws.algebras().map(|(_, a)| a.clone()).filter(|a| is_complex(a) && eligible(a)).collect();
    if sources.is_empty() || letters.is_empty() {
        return Err(Error::Workspace("no decidable copy of ℂ with outgoing letters to start words from".into()));
    }
    let vocab = ws.vocabulary();
    let mut checker = Checker { normalizer: Normalizer::new(config.rule).memoized(), oracles: HashMap::new(), vocab: &vocab };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut report = FuzzReport { seed: config.seed, rule: format!("{:?}", config.rule).to_lowercase(), ..FuzzReport::default() };
    for _ in 0..config.count {
        let w = random_word(&mut rng, &letters, &sources, config.max_length);
        report.words += 1;
        for r in applicable_rewrites(&w, &vocab) {
            report.comparisons += 1;
            *report.per_rule.entry(r.rule().to_string()).or_default() += 1;
            match checker.compare(&w, &r)? {
                Outcome::Agree(a, b) => {
                    if config.collect_pairs {
                        report.pairs.push((a, b));
                    }
                }
                Outcome::Undecided => report.undecided += 1,
                Outcome::Disagree(left, right) => {
                    let rewritten = rewrite_one(&w, &r)?.to_string();
                    let (small, small_r) = checker.minimize(&w, &r);
                    report.mismatches.push(Mismatch {
                        word: w.to_string(),
                        rewrite: r.to_string(),
                        rewritten,
                        left,
                        right,
                        reproducer: small.to_string(),
                        reproducer_rewrite: small_r.to_string(),
                    });
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(rule: FusionRule) -> FuzzConfig {
        FuzzConfig { seed: 7, count: 12, rule, ..FuzzConfig::default() }
    }

    #[test]
    fn default_corpus_passes() {
        let report = fuzz_relations(&Workspace::default_corpus(), &small(FusionRule::Auto)).unwrap();
        assert!(report.passed(), "{}", report.to_text());
        assert!(report.comparisons > 0);
    }

    #[test]
    fn reruns_are_identical() {
        let ws = Workspace::default_corpus();
        let a = fuzz_relations(&ws, &small(FusionRule::Auto)).unwrap().to_text();
        let b = fuzz_relations(&ws, &small(FusionRule::Auto)).unwrap().to_text();
        assert_eq!(a, b);
    }

    #[test]
    fn broken_fusion_is_detected() {
        let report = fuzz_relations(&Workspace::default_corpus(), &small(FusionRule::Broken)).unwrap();
        assert!(!report.passed());
        let m = &report.mismatches[0];
        assert!(m.reproducer.len() <= m.word.len());
    }
}
