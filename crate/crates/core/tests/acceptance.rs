//! End-to-end acceptance run: one line per criterion, nonzero exit on any failure.

mod common;

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gkcalc_core::algebra::GAlgebra;
use gkcalc_core::corner::CornerEmbedding;
use gkcalc_core::fuzz::{fuzz_relations, FuzzConfig};
use gkcalc_core::ktheory::{averaging_embedding, class_with, k_functor, kgroup};
use gkcalc_core::levelone::{LevelOne, S1Element};
use gkcalc_core::normalizer::{fuse, standard_form, FusionRule, Normalizer};
use gkcalc_core::oracle::{InvariantVector, Oracle};
use gkcalc_core::witness::homotopy_witness;
use gkcalc_core::words::{Generator, MorphismWord};
use gkcalc_core::workspace::Workspace;
use gkcalc_core::Error;

use common::{algebra, corpus, extra, random_s1, random_trivial, trace_character};

type Outcome = Result<String, String>;

/// Oracles by algebra name plus the Equal pairs awaiting witnesses.
struct Ledger {
    oracles: HashMap<String, Arc<Oracle>>,
    pairs: Vec<(S1Element, S1Element)>,
}

impl Ledger {
    fn oracle(&mut self, b: &Arc<GAlgebra>) -> Arc<Oracle> {
        self.oracles.entry(b.name().to_string()).or_insert_with(|| Arc::new(Oracle::new(b).expect("fixture is decidable"))).clone()
    }

    fn key(&mut self, z: &S1Element) -> Result<InvariantVector, String> {
        let oracle = self.oracle(z.target());
        let class = class_with(&oracle, z).map_err(|e| e.to_string())?;
        class.key().cloned().map_err(|e| e.to_string())
    }

    /// Key equality, cross-checked against the trace character; Equal pairs are queued.
    fn same_class(&mut self, a: &S1Element, b: &S1Element, what: &str) -> Result<(), String> {
        let (ka, kb) = (self.key(a)?, self.key(b)?);
        let oracle = self.oracle(a.target());
        let chars_agree = trace_character(&oracle, a) == trace_character(&oracle, b);
        if (ka == kb) != chars_agree {
            return Err(format!("{what}: key and trace character disagree ({ka} vs {kb})"));
        }
        if ka != kb {
            return Err(format!("{what}: {ka} vs {kb}"));
        }
        self.pairs.push((a.clone(), b.clone()));
        Ok(())
    }
}

fn decidable_algebras(ws: &Workspace) -> Vec<Arc<GAlgebra>> {
    ws.algebras().map(|(_, a)| a.clone()).filter(|a| Oracle::new(a).is_ok()).collect()
}

fn criterion_1(ledger: &mut Ledger) -> Outcome {
    let start = Instant::now();
    let config = FuzzConfig { seed: 2026, count: 200, collect_pairs: true, ..FuzzConfig::default() };
    let report = fuzz_relations(&corpus(), &config).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    if !report.passed() {
        return Err(format!("{} mismatches\n{}", report.mismatches.len(), report.to_text()));
    }
    if report.undecided > 0 {
        return Err(format!("{} comparisons undecided", report.undecided));
    }
    if elapsed > Duration::from_secs(120) {
        return Err(format!("took {elapsed:?}"));
    }
    let rules: Vec<String> = report.per_rule.iter().map(|(r, n)| format!("{r}:{n}")).collect();
    ledger.pairs.extend(report.pairs);
    Ok(format!("{} words, {} rewrites ({}), {:.1}s", report.words, report.comparisons, rules.join(" "), elapsed.as_secs_f64()))
}

fn criterion_2(ledger: &mut Ledger, rng: &mut ChaCha8Rng) -> Outcome {
    let algebras: Vec<Arc<GAlgebra>> = [corpus(), extra()].iter().flat_map(decidable_algebras).collect();
    let normalizer = Normalizer::default();
    let trials = 120;
    for t in 0..trials {
        let b = algebras[t % algebras.len()].clone();
        let z = random_s1(rng, &ledger.oracle(&b));
        let word = z.to_word("z").map_err(|e| e.to_string())?;
        let back = normalizer.phi(&word).map_err(|e| e.to_string())?;
        ledger.same_class(&back, &z, &format!("round trip over {}", b.name()))?;
    }
    Ok(format!("{trials} elements over {} algebras", algebras.len()))
}

/// Every letter of a workspace, each with its source algebra.
fn letters(ws: &Workspace) -> Vec<Generator> {
    let mut out: Vec<Generator> = ws.homs().map(|h| Generator::Hom(h.clone())).collect();
    for e in ws.corners() {
        out.push(Generator::Corner(e.clone()));
        out.push(Generator::CornerInv(e.clone()));
    }
    out.extend(ws.sequences().map(|s| Generator::Split(s.clone())));
    out.extend(ws.algebras().map(|(_, a)| Generator::Identity(a.clone())));
    out
}

fn kind(g: &Generator) -> &'static str {
    match g {
        Generator::Hom(_) => "hom",
        Generator::Corner(_) => "corner",
        Generator::CornerInv(_) => "corner_inverse",
        Generator::Split(_) => "split",
        Generator::Identity(_) => "identity",
        Generator::Endpoint(..) => "endpoint",
    }
}

fn criterion_3(ledger: &mut Ledger, rng: &mut ChaCha8Rng) -> Outcome {
    let letters: Vec<Generator> = [corpus(), extra()].iter().flat_map(letters).collect();
    let normalizer = Normalizer::default();
    let trials = 110;
    let mut kinds: BTreeMap<&'static str, usize> = BTreeMap::new();
    for t in 0..trials {
        // resample until to_word stays at desk scale: (N k)² dim B ≤ 600
        let (g, x) = loop {
            let g = letters.choose(rng).expect("letters exist").clone();
            let z = random_s1(rng, &ledger.oracle(g.source()));
            let x = fuse(&z, &LevelOne::chi(&g), FusionRule::Auto).map_err(|e| e.to_string())?;
            let side = x.size() * x.corner_size();
            if side * side * x.target().dim() <= 600 {
                break (g, x);
            }
        };
        *kinds.entry(kind(&g)).or_default() += 1;
        let (s, cert) = standard_form(&x).map_err(|e| e.to_string())?;
        let what = format!("trial {t} ({})", g.label());
        if !s.is_standard() {
            return Err(format!("{what}: negative part is not of the form λ(0 ⊕ 1)"));
        }
        cert.verify(&x, &s).map_err(|e| format!("{what}: {e}"))?;
        let (again, _) = standard_form(&s.as_level_one()).map_err(|e| e.to_string())?;
        ledger.same_class(&again, &s, &format!("{what}: idempotence"))?;
        let via_word = normalizer.phi(&x.to_word("x").map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ledger.same_class(&s, &via_word, &format!("{what}: S(x) vs x"))?;
    }
    let mix: Vec<String> = kinds.iter().map(|(k, n)| format!("{k}:{n}")).collect();
    Ok(format!("{trials} level-one morphisms ({})", mix.join(" ")))
}

fn criterion_4(ledger: &mut Ledger) -> Outcome {
    let (ws, ex) = (corpus(), extra());
    let fixtures = [
        (algebra(&ws, "C"), 1, vec![vec![vec![1]]]),
        (algebra(&ex, "M3"), 1, vec![vec![vec![1]]]),
        (algebra(&ws, "CM2"), 2, vec![vec![vec![1], vec![0]], vec![vec![0], vec![1]]]),
        (algebra(&ws, "Cz"), 2, vec![vec![vec![1, 1]], vec![vec![1, -1]]]),
    ];
    let normalizer = Normalizer::default();
    let mut summary = Vec::new();
    for (b, rank, characters) in fixtures {
        let k = kgroup(&b).map_err(|e| e.to_string())?;
        if k.rank() != rank {
            return Err(format!("{}: rank {} instead of {rank}", b.name(), k.rank()));
        }
        let oracle = ledger.oracle(&b);
        let mut found: Vec<Vec<Vec<i64>>> = Vec::new();
        for (n, g) in k.generators.iter().enumerate() {
            let unit: Vec<i64> = (0..rank).map(|m| i64::from(m == n)).collect();
            if g.key.flatten() != unit {
                return Err(format!("{}: generator {n} has key {}", b.name(), g.key));
            }
            let chars: Vec<Vec<i64>> = trace_character(&oracle, &g.element)
                .iter()
                .map(|row| row.iter().map(|x| x.as_integer().expect("integer trace")).collect())
                .collect();
            found.push(chars);
            let back = normalizer.phi(&g.element.to_word("g").map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            ledger.same_class(&back, &g.element, &format!("{} generator {n} through the pipeline", b.name()))?;
        }
        found.sort();
        let mut expect = characters.clone();
        expect.sort();
        if found != expect {
            return Err(format!("{}: generator characters {found:?}, expected {expect:?}", b.name()));
        }
        if b.name() == "M3" {
            let rank_one = k.generators[0].element.plus().block(oracle.presentation(), 0).rank() == 1;
            if !rank_one {
                return Err("M3: generator is not a rank-one idempotent".into());
            }
        }
        summary.push(format!("{}={}", b.name(), k.summary()));
    }
    Ok(summary.join(", "))
}

fn criterion_5(ledger: &mut Ledger, rng: &mut ChaCha8Rng) -> Outcome {
    let algebras: Vec<Arc<GAlgebra>> = [corpus(), extra()].iter().flat_map(decidable_algebras).collect();
    let mut checks = 0;
    for b in &algebras {
        let oracle = ledger.oracle(b);
        for _ in 0..4 {
            let (x, y, w) = (random_s1(rng, &oracle), random_s1(rng, &oracle), random_s1(rng, &oracle));
            let sum = |a: &S1Element, c: &S1Element| a.direct_sum(c).expect("same target");
            let (kx, ky) = (ledger.key(&x)?, ledger.key(&y)?);
            if ledger.key(&sum(&x, &y))? != &kx + &ky {
                return Err(format!("{}: key is not additive", b.name()));
            }
            ledger.same_class(&sum(&x, &y), &sum(&y, &x), &format!("{}: commutativity", b.name()))?;
            ledger.same_class(&sum(&sum(&x, &y), &w), &sum(&x, &sum(&y, &w)), &format!("{}: associativity", b.name()))?;
            let empty = S1Element::empty(b);
            let cancel = sum(&x, &x.negate());
            if !ledger.key(&cancel)?.is_zero() {
                return Err(format!("{}: x ⊕ negate(x) has nonzero key", b.name()));
            }
            ledger.same_class(&cancel, &empty, &format!("{}: inverse", b.name()))?;
            let t = random_trivial(rng, &oracle);
            if !ledger.key(&t)?.is_zero() {
                return Err(format!("{}: trivial element has nonzero key", b.name()));
            }
            ledger.same_class(&t, &empty, &format!("{}: trivial", b.name()))?;
            checks += 1;
        }
    }
    Ok(format!("{checks} triples over {} algebras", algebras.len()))
}

/// Generator classes of `b` followed by a few random elements.
fn sample_classes(ledger: &mut Ledger, b: &Arc<GAlgebra>, rng: &mut ChaCha8Rng) -> Result<Vec<S1Element>, String> {
    let mut xs: Vec<S1Element> = kgroup(b).map_err(|e| e.to_string())?.generators.into_iter().map(|g| g.element).collect();
    let oracle = ledger.oracle(b);
    xs.extend((0..3).map(|_| random_s1(rng, &oracle)));
    Ok(xs)
}

fn criterion_6(ledger: &mut Ledger, rng: &mut ChaCha8Rng) -> Outcome {
    let normalizer = Normalizer::default();
    let hom = |h: &gkcalc_core::hom::GHom| Generator::Hom(Arc::new(h.clone()));
    let mut checked = 0;
    let mut names = Vec::new();
    for ws in [corpus(), extra()] {
        for seq in ws.sequences() {
            let m = seq.i.target().clone();
            for x in sample_classes(ledger, &m, rng)? {
                let step = |z: &S1Element, g: &Generator| normalizer.z_product(z, g).map_err(|e: Error| e.to_string());
                let left = step(&step(&x, &Generator::Split(seq.clone()))?, &hom(&seq.i))?;
                let right = step(&step(&x, &hom(&seq.f))?, &hom(&seq.s))?;
                let y = left.direct_sum(&right).map_err(|e| e.to_string())?;
                ledger.same_class(&x, &y, &format!("sequence {}", seq.name()))?;
                checked += 1;
            }
            names.push(seq.name().to_string());
        }
    }
    Ok(format!("{checked} classes over sequences {}", names.join(", ")))
}

fn criterion_7(ledger: &mut Ledger, rng: &mut ChaCha8Rng) -> Outcome {
    let normalizer = Normalizer::default();
    let (ws, ex) = (corpus(), extra());
    let mut corners: Vec<Arc<CornerEmbedding>> = ws.corners().chain(ex.corners()).cloned().collect();
    for base in [algebra(&ws, "Cz"), algebra(&ex, "Cw")] {
        let e = averaging_embedding(&format!("avg_{}", base.name()), &base).map_err(|e| e.to_string())?;
        corners.push(Arc::new(e));
    }
    let mut checked = 0;
    for e in &corners {
        let (into, back) = (Generator::Corner(e.clone()), Generator::CornerInv(e.clone()));
        let step = |z: &S1Element, g: &Generator| normalizer.z_product(z, g).map_err(|e: Error| e.to_string());
        for x in sample_classes(ledger, e.base(), rng)? {
            let y = step(&step(&x, &into)?, &back)?;
            ledger.same_class(&x, &y, &format!("{}: (x⊙e)⊙e⁻¹", e.name()))?;
            checked += 1;
        }
        for x in sample_classes(ledger, e.algebra(), rng)? {
            let y = step(&step(&x, &back)?, &into)?;
            ledger.same_class(&x, &y, &format!("{}: (x⊙e⁻¹)⊙e", e.name()))?;
            checked += 1;
        }
    }
    let names: Vec<&str> = corners.iter().map(|e| e.name()).collect();
    Ok(format!("{checked} classes over corners {}", names.join(", ")))
}

fn criterion_8(ledger: &mut Ledger, rng: &mut ChaCha8Rng) -> Outcome {
    let (ws, ex) = (corpus(), extra());
    let homs: Vec<_> = ws
        .homs()
        .chain(ex.homs())
        .filter(|h| Oracle::new(h.source()).is_ok() && Oracle::new(h.target()).is_ok())
        .cloned()
        .collect();
    let normalizer = Normalizer::default();
    let trials = 60;
    for t in 0..trials {
        let f = homs[t % homs.len()].clone();
        let z = random_s1(rng, &ledger.oracle(f.source()));
        let word = MorphismWord::compose(z.to_word("z").map_err(|e| e.to_string())?, MorphismWord::generator(Generator::Hom(f.clone())))
            .map_err(|e| e.to_string())?;
        let left = normalizer.phi(&word).map_err(|e| e.to_string())?;
        ledger.same_class(&left, &k_functor(&f, &z), &format!("functoriality along {}", f.name()))?;
    }
    Ok(format!("{trials} (element, hom) pairs over {} homs", homs.len()))
}

fn criterion_9(ledger: &mut Ledger) -> Outcome {
    let pairs = std::mem::take(&mut ledger.pairs);
    let mut moves = 0;
    let mut trivial = 0;
    for (n, (a, b)) in pairs.iter().enumerate() {
        let oracle = ledger.oracle(a.target());
        let w = homotopy_witness(&oracle, a, b).map_err(|e| format!("pair {n} over {}: {e}", a.target().name()))?;
        w.verify(&oracle).map_err(|e| format!("pair {n}: {e}"))?;
        moves += w.moves.len();
        trivial += usize::from(w.moves.is_empty());
    }
    Ok(format!("{} witnesses replayed ({trivial} identical pairs, {moves} moves)", pairs.len()))
}

fn main() {
    let mut ledger = Ledger { oracles: HashMap::new(), pairs: Vec::new() };
    let mut rng = ChaCha8Rng::seed_from_u64(20261014);
    let names = [
        "relation invariance",
        "surjectivity round trip",
        "standard form contract",
        "K-group fixtures",
        "group laws",
        "split-exact decomposition",
        "corner invertibility",
        "functoriality",
        "witness soundness",
    ];
    let mut failed = 0;
    for (n, name) in names.iter().enumerate() {
        let start = Instant::now();
        let outcome = match n {
            0 => criterion_1(&mut ledger),
            1 => criterion_2(&mut ledger, &mut rng),
            2 => criterion_3(&mut ledger, &mut rng),
            3 => criterion_4(&mut ledger),
            4 => criterion_5(&mut ledger, &mut rng),
            5 => criterion_6(&mut ledger, &mut rng),
            6 => criterion_7(&mut ledger, &mut rng),
            7 => criterion_8(&mut ledger, &mut rng),
            _ => criterion_9(&mut ledger),
        };
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail}; {secs:.1}s)", n + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({why})", n + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", names.len());
        std::process::exit(1);
    }
}
