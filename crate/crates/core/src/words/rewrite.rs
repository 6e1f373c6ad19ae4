//! Single-step rewriting by the defining relations.
//!
//! Rule tags: (b) composition of adjacent homomorphisms, (c) identities,
//! (d) corner invertibility, (f) split-exactness, (g) homotopy endpoints.

use std::fmt;
use std::sync::Arc;

use crate::corner::CornerEmbedding;
use crate::error::WordError;
use crate::path::Endpoint;
use crate::splitexact::SplitExact;

use super::{same_object, Generator, SumOfProducts, Term};

/// The corners and split-exact sequences available for insertion rules.
#[derive(Clone, Debug, Default)]
pub struct Vocabulary {
    pub sequences: Vec<Arc<SplitExact>>,
    pub corners: Vec<Arc<CornerEmbedding>>,
}

#[derive(Clone, Debug)]
pub enum Rewrite {
    /// φ · ψ → the composite letter, labelled `(φ.ψ)`.
    ComposeHoms { term: usize, at: usize },
    RemoveIdentity { term: usize, at: usize },
    InsertIdentity { term: usize, gap: usize },
    /// e · e⁻¹ → 1_A or e⁻¹ · e → 1_{M_n ⊗ A}.
    CancelCorner { term: usize, at: usize },
    InsertCorner { term: usize, gap: usize, corner: Arc<CornerEmbedding>, inverse_first: bool },
    /// 1_M → Δ_s · i + f · s, at a gap or replacing an identity letter.
    SplitUnit { term: usize, gap: usize, seq: Arc<SplitExact>, replace: bool },
    /// 1_J → i · Δ_s, at a gap or replacing an identity letter.
    IdealUnit { term: usize, gap: usize, seq: Arc<SplitExact>, replace: bool },
    /// i · Δ_s → 1_J.
    CancelIdeal { term: usize, at: usize, seq: Arc<SplitExact> },
    /// h@0 ↔ h@1.
    SwapEndpoint { term: usize, at: usize },
}

impl Rewrite {
    pub fn rule(&self) -> &'static str {
        match self {
            Rewrite::ComposeHoms { .. } => "b",
            Rewrite::RemoveIdentity { .. } | Rewrite::InsertIdentity { .. } => "c",
            Rewrite::CancelCorner { .. } | Rewrite::InsertCorner { .. } => "d",
            Rewrite::SplitUnit { .. } | Rewrite::IdealUnit { .. } | Rewrite::CancelIdeal { .. } => "f",
            Rewrite::SwapEndpoint { .. } => "g",
        }
    }

    pub fn term(&self) -> usize {
        match self {
            Rewrite::ComposeHoms { term, .. }
            | Rewrite::RemoveIdentity { term, .. }
            | Rewrite::InsertIdentity { term, .. }
            | Rewrite::CancelCorner { term, .. }
            | Rewrite::InsertCorner { term, .. }
            | Rewrite::SplitUnit { term, .. }
            | Rewrite::IdealUnit { term, .. }
            | Rewrite::CancelIdeal { term, .. }
            | Rewrite::SwapEndpoint { term, .. } => *term,
        }
    }

    pub fn position(&self) -> usize {
        match self {
            Rewrite::ComposeHoms { at, .. }
            | Rewrite::RemoveIdentity { at, .. }
            | Rewrite::CancelCorner { at, .. }
            | Rewrite::CancelIdeal { at, .. }
            | Rewrite::SwapEndpoint { at, .. } => *at,
            Rewrite::InsertIdentity { gap, .. }
            | Rewrite::InsertCorner { gap, .. }
            | Rewrite::SplitUnit { gap, .. }
            | Rewrite::IdealUnit { gap, .. } => *gap,
        }
    }

    /// Moves the site to another term index.
    pub fn with_term(&self, t: usize) -> Rewrite {
        let mut r = self.clone();
        match &mut r {
            Rewrite::ComposeHoms { term, .. }
            | Rewrite::RemoveIdentity { term, .. }
            | Rewrite::InsertIdentity { term, .. }
            | Rewrite::CancelCorner { term, .. }
            | Rewrite::InsertCorner { term, .. }
            | Rewrite::SplitUnit { term, .. }
            | Rewrite::IdealUnit { term, .. }
            | Rewrite::CancelIdeal { term, .. }
            | Rewrite::SwapEndpoint { term, .. } => *term = t,
        }
        r
    }
}

impl fmt::Display for Rewrite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (t, p) = (self.term(), self.position());
        match self {
            Rewrite::ComposeHoms { .. } => write!(f, "(b) compose letters {p},{} of term {t}", p + 1),
            Rewrite::RemoveIdentity { .. } => write!(f, "(c) remove identity letter {p} of term {t}"),
            Rewrite::InsertIdentity { .. } => write!(f, "(c) insert identity at gap {p} of term {t}"),
            Rewrite::CancelCorner { .. } => write!(f, "(d) cancel corner pair at letters {p},{} of term {t}", p + 1),
            Rewrite::InsertCorner { corner, inverse_first, .. } => {
                let pair = if *inverse_first { "e^-1 . e" } else { "e . e^-1" };
                write!(f, "(d) insert {pair} for {} at gap {p} of term {t}", corner.name())
            }
            Rewrite::SplitUnit { seq, replace, .. } => {
                let how = if *replace { "replace identity letter" } else { "expand gap" };
                write!(f, "(f) {how} {p} of term {t} by Delta[{0}] . i + f . s of {0}", seq.name())
            }
            Rewrite::IdealUnit { seq, replace, .. } => {
                let how = if *replace { "replace identity letter" } else { "expand gap" };
                write!(f, "(f) {how} {p} of term {t} by i . Delta[{}]", seq.name())
            }
            Rewrite::CancelIdeal { seq, .. } => write!(f, "(f) cancel i . Delta[{}] at letters {p},{} of term {t}", seq.name(), p + 1),
            Rewrite::SwapEndpoint { .. } => write!(f, "(g) swap homotopy endpoint at letter {p} of term {t}"),
        }
    }
}

fn is_letter_of(g: &Generator, hom: &crate::hom::GHom) -> bool {
    match g {
        Generator::Hom(h) => {
            h.name() == hom.name() && same_object(h.source(), hom.source()) && same_object(h.target(), hom.target())
        }
        _ => false,
    }
}

fn hom_letter(h: &crate::hom::GHom) -> Generator {
    Generator::Hom(Arc::new(h.clone()))
}

/// Every rewrite applicable somewhere in `w`, in a fixed order.
pub fn applicable_rewrites(w: &SumOfProducts, vocab: &Vocabulary) -> Vec<Rewrite> {
    let mut out = Vec::new();
    for (t, term) in w.terms.iter().enumerate() {
        let letters = &term.letters;
        for at in 0..letters.len() {
            let g = &letters[at];
            if let Some(next) = letters.get(at + 1) {
                if g.is_hom_letter() && next.is_hom_letter() {
                    out.push(Rewrite::ComposeHoms { term: t, at });
                }
                match (g, next) {
                    (Generator::Corner(a), Generator::CornerInv(b)) | (Generator::CornerInv(a), Generator::Corner(b))
                        if a.name() == b.name() =>
                    {
                        out.push(Rewrite::CancelCorner { term: t, at })
                    }
                    (_, Generator::Split(s)) if is_letter_of(g, &s.i) => {
                        out.push(Rewrite::CancelIdeal { term: t, at, seq: s.clone() })
                    }
                    _ => {}
                }
            }
            if let Generator::Identity(a) = g {
                out.push(Rewrite::RemoveIdentity { term: t, at });
                for s in &vocab.sequences {
                    if same_object(s.i.target(), a) {
                        out.push(Rewrite::SplitUnit { term: t, gap: at, seq: s.clone(), replace: true });
                    }
                    if same_object(s.i.source(), a) {
                        out.push(Rewrite::IdealUnit { term: t, gap: at, seq: s.clone(), replace: true });
                    }
                }
            }
            if let Generator::Endpoint(..) = g {
                out.push(Rewrite::SwapEndpoint { term: t, at });
            }
        }
        for gap in 0..=letters.len() {
            let obj = w.object_at(t, gap);
            out.push(Rewrite::InsertIdentity { term: t, gap });
            for e in &vocab.corners {
                if same_object(e.base(), obj) {
                    out.push(Rewrite::InsertCorner { term: t, gap, corner: e.clone(), inverse_first: false });
                }
                if same_object(e.algebra(), obj) {
                    out.push(Rewrite::InsertCorner { term: t, gap, corner: e.clone(), inverse_first: true });
                }
            }
            for s in &vocab.sequences {
                if same_object(s.i.target(), obj) {
                    out.push(Rewrite::SplitUnit { term: t, gap, seq: s.clone(), replace: false });
                }
                if same_object(s.i.source(), obj) {
                    out.push(Rewrite::IdealUnit { term: t, gap, seq: s.clone(), replace: false });
                }
            }
        }
    }
    out
}

/// Applies one rewrite, failing if its pattern does not match at the site.
pub fn rewrite_one(w: &SumOfProducts, r: &Rewrite) -> Result<SumOfProducts, WordError> {
    let not_applicable = || WordError::NotApplicable { rule: r.rule().to_string(), term: r.term(), position: r.position() };
    let term = w.terms.get(r.term()).ok_or_else(not_applicable)?;
    let letters = &term.letters;
    let splice = |at: usize, remove: usize, insert: Vec<Generator>| -> Vec<Generator> {
        let mut v = letters[..at].to_vec();
        v.extend(insert);
        v.extend_from_slice(&letters[at + remove..]);
        v
    };
    let replace_term = |new_terms: Vec<Vec<Generator>>| -> SumOfProducts {
        let mut terms: Vec<Term> = w.terms[..r.term()].to_vec();
        terms.extend(new_terms.into_iter().map(|letters| Term { negative: term.negative, letters }));
        terms.extend_from_slice(&w.terms[r.term() + 1..]);
        SumOfProducts { source: w.source.clone(), target: w.target.clone(), terms }
    };
    let gap_ok = |gap: usize| gap <= letters.len();
    let out = match r {
        Rewrite::ComposeHoms { at, .. } => {
            let (a, b) = (letters.get(*at).ok_or_else(not_applicable)?, letters.get(at + 1).ok_or_else(not_applicable)?);
            if !a.is_hom_letter() || !b.is_hom_letter() {
                return Err(not_applicable());
            }
            let (ha, hb) = (a.as_hom().ok_or_else(not_applicable)?, b.as_hom().ok_or_else(not_applicable)?);
            let composite = ha.then(&hb).renamed(&format!("({}.{})", ha.name(), hb.name()));
            replace_term(vec![splice(*at, 2, vec![Generator::Hom(Arc::new(composite))])])
        }
        Rewrite::RemoveIdentity { at, .. } => match letters.get(*at) {
            Some(Generator::Identity(_)) => replace_term(vec![splice(*at, 1, vec![])]),
            _ => return Err(not_applicable()),
        },
        Rewrite::InsertIdentity { gap, .. } => {
            if !gap_ok(*gap) {
                return Err(not_applicable());
            }
            let obj = w.object_at(r.term(), *gap).clone();
            replace_term(vec![splice(*gap, 0, vec![Generator::Identity(obj)])])
        }
        Rewrite::CancelCorner { at, .. } => {
            let id = match (letters.get(*at), letters.get(at + 1)) {
                (Some(Generator::Corner(a)), Some(Generator::CornerInv(b))) if a.name() == b.name() => a.base().clone(),
                (Some(Generator::CornerInv(a)), Some(Generator::Corner(b))) if a.name() == b.name() => a.algebra().clone(),
                _ => return Err(not_applicable()),
            };
            replace_term(vec![splice(*at, 2, vec![Generator::Identity(id)])])
        }
        Rewrite::InsertCorner { gap, corner, inverse_first, .. } => {
            if !gap_ok(*gap) {
                return Err(not_applicable());
            }
            let obj = w.object_at(r.term(), *gap);
            let (e, inv) = (Generator::Corner(corner.clone()), Generator::CornerInv(corner.clone()));
            let pair = match inverse_first {
                false if same_object(corner.base(), obj) => vec![e, inv],
                true if same_object(corner.algebra(), obj) => vec![inv, e],
                _ => return Err(not_applicable()),
            };
            replace_term(vec![splice(*gap, 0, pair)])
        }
        Rewrite::SplitUnit { gap, seq, replace, .. } => {
            let remove = unit_site(w, r.term(), *gap, *replace, seq.i.target()).ok_or_else(not_applicable)?;
            let first = vec![Generator::Split(seq.clone()), hom_letter(&seq.i)];
            let second = vec![hom_letter(&seq.f), hom_letter(&seq.s)];
            replace_term(vec![splice(*gap, remove, first), splice(*gap, remove, second)])
        }
        Rewrite::IdealUnit { gap, seq, replace, .. } => {
            let remove = unit_site(w, r.term(), *gap, *replace, seq.i.source()).ok_or_else(not_applicable)?;
            replace_term(vec![splice(*gap, remove, vec![hom_letter(&seq.i), Generator::Split(seq.clone())])])
        }
        Rewrite::CancelIdeal { at, seq, .. } => match (letters.get(*at), letters.get(at + 1)) {
            (Some(g), Some(Generator::Split(s))) if is_letter_of(g, &seq.i) && s.name() == seq.name() => {
                replace_term(vec![splice(*at, 2, vec![Generator::Identity(seq.i.source().clone())])])
            }
            _ => return Err(not_applicable()),
        },
        Rewrite::SwapEndpoint { at, .. } => match letters.get(*at) {
            Some(Generator::Endpoint(h, end)) => {
                let other = match end {
                    Endpoint::Start => Endpoint::End,
                    Endpoint::End => Endpoint::Start,
                };
                replace_term(vec![splice(*at, 1, vec![Generator::Endpoint(h.clone(), other)])])
            }
            _ => return Err(not_applicable()),
        },
    };
    debug_assert!(out.is_well_typed(), "rewrite produced an ill-typed word");
    Ok(out)
}

/// For a unit rule at `gap`: the number of letters to remove (1 when replacing
/// an identity letter), provided the object there is `obj`.
fn unit_site(w: &SumOfProducts, term: usize, gap: usize, replace: bool, obj: &crate::algebra::GAlgebra) -> Option<usize> {
    let letters = &w.terms[term].letters;
    if replace {
        match letters.get(gap) {
            Some(Generator::Identity(a)) if same_object(a, obj) => Some(1),
            _ => None,
        }
    } else if gap <= letters.len() && same_object(w.object_at(term, gap), obj) {
        Some(0)
    } else {
        None
    }
}
