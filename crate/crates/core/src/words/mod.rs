//! Free morphism words over the generator set: typed trees, expansion and rewriting.

mod parse;
mod rewrite;

use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::algebra::GAlgebra;
use crate::corner::CornerEmbedding;
use crate::error::WordError;
use crate::hom::GHom;
use crate::homotopy::Homotopy;
use crate::path::Endpoint;
use crate::splitexact::SplitExact;

pub use parse::{parse, Registry};
pub use rewrite::{applicable_rewrites, rewrite_one, Rewrite, Vocabulary};

/// Registry objects are identified by name.
pub fn same_object(a: &GAlgebra, b: &GAlgebra) -> bool {
    a.name() == b.name()
}

#[derive(Clone, Debug)]
pub enum Generator {
    Hom(Arc<GHom>),
    /// A corner embedding used as a homomorphism letter.
    Corner(Arc<CornerEmbedding>),
    /// The synthetic inverse e⁻¹ : M_n ⊗ A → A.
    CornerInv(Arc<CornerEmbedding>),
    /// The synthetic Δ_s : M → J of a split-exact sequence.
    Split(Arc<SplitExact>),
    Identity(Arc<GAlgebra>),
    /// A homotopy evaluated at one end.
    Endpoint(Arc<Homotopy>, Endpoint),
}

impl Generator {
    pub fn source(&self) -> &Arc<GAlgebra> {
        match self {
            Generator::Hom(h) => h.source(),
            Generator::Corner(e) => e.base(),
            Generator::CornerInv(e) => e.algebra(),
            Generator::Split(s) => s.i.target(),
            Generator::Identity(a) => a,
            Generator::Endpoint(h, _) => h.source(),
        }
    }

    pub fn target(&self) -> &Arc<GAlgebra> {
        match self {
            Generator::Hom(h) => h.target(),
            Generator::Corner(e) => e.algebra(),
            Generator::CornerInv(e) => e.base(),
            Generator::Split(s) => s.i.source(),
            Generator::Identity(a) => a,
            Generator::Endpoint(h, _) => h.target(),
        }
    }

    /// The underlying homomorphism of hom-like letters.
    pub fn as_hom(&self) -> Option<GHom> {
        match self {
            Generator::Hom(h) => Some((**h).clone()),
            Generator::Corner(e) => Some(e.embedding().clone()),
            Generator::Identity(a) => Some(GHom::identity(a)),
            Generator::Endpoint(h, end) => Some((**h.endpoint(*end)).clone()),
            Generator::CornerInv(_) | Generator::Split(_) => None,
        }
    }

    /// Letters that rule (b) may compose: everything hom-like except identities.
    pub fn is_hom_letter(&self) -> bool {
        matches!(self, Generator::Hom(_) | Generator::Corner(_) | Generator::Endpoint(..))
    }

    /// Surface syntax of the letter.
    pub fn label(&self) -> String {
        match self {
            Generator::Hom(h) => h.name().to_string(),
            Generator::Corner(e) => e.name().to_string(),
            Generator::CornerInv(e) => format!("{}^-1", e.name()),
            Generator::Split(s) => format!("Delta[{}]", s.name()),
            Generator::Identity(a) => format!("1[{}]", a.name()),
            Generator::Endpoint(h, end) => format!("{}@{}", h.name(), end.index()),
        }
    }

    pub(crate) fn kind(&self) -> &'static str {
        match self {
            Generator::Hom(_) => "hom",
            Generator::Corner(_) => "corner",
            Generator::CornerInv(_) => "corner_inverse",
            Generator::Split(_) => "split",
            Generator::Identity(_) => "identity",
            Generator::Endpoint(..) => "endpoint",
        }
    }
}

impl PartialEq for Generator {
    fn eq(&self, o: &Generator) -> bool {
        self.kind() == o.kind()
            && self.label() == o.label()
            && same_object(self.source(), o.source())
            && same_object(self.target(), o.target())
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum WordNode {
    Gen(Generator),
    /// Left-to-right composition: first the left word, then the right one.
    Compose(Box<MorphismWord>, Box<MorphismWord>),
    Plus(Vec<MorphismWord>),
    Neg(Box<MorphismWord>),
}

/// A well-typed word; every node records its source and target.
#[derive(Clone, Debug)]
pub struct MorphismWord {
    node: WordNode,
    source: Arc<GAlgebra>,
    target: Arc<GAlgebra>,
}

impl PartialEq for MorphismWord {
    fn eq(&self, o: &MorphismWord) -> bool {
        self.node == o.node && same_object(&self.source, &o.source) && same_object(&self.target, &o.target)
    }
}

impl MorphismWord {
    pub fn generator(g: Generator) -> MorphismWord {
        let (source, target) = (g.source().clone(), g.target().clone());
        MorphismWord { node: WordNode::Gen(g), source, target }
    }

    pub fn compose(left: MorphismWord, right: MorphismWord) -> Result<MorphismWord, WordError> {
        Self::compose_at(left, right, 0)
    }

    pub(crate) fn compose_at(left: MorphismWord, right: MorphismWord, pos: usize) -> Result<MorphismWord, WordError> {
        if !same_object(&left.target, &right.source) {
            return Err(WordError::TypeMismatch {
                pos,
                left_target: left.target.name().to_string(),
                right_source: right.source.name().to_string(),
            });
        }
        let (source, target) = (left.source.clone(), right.target.clone());
        Ok(MorphismWord { node: WordNode::Compose(Box::new(left), Box::new(right)), source, target })
    }

    pub fn plus(terms: Vec<MorphismWord>) -> Result<MorphismWord, WordError> {
        Self::plus_at(terms, 0)
    }

    pub(crate) fn plus_at(terms: Vec<MorphismWord>, pos: usize) -> Result<MorphismWord, WordError> {
        let first = terms.first().ok_or(WordError::Syntax { pos, found: "empty sum".into() })?;
        let (source, target) = (first.source.clone(), first.target.clone());
        for t in &terms[1..] {
            if !same_object(&t.source, &source) || !same_object(&t.target, &target) {
                return Err(WordError::SumMismatch {
                    pos,
                    first: format!("{} → {}", source.name(), target.name()),
                    second: format!("{} → {}", t.source.name(), t.target.name()),
                });
            }
        }
        Ok(MorphismWord { node: WordNode::Plus(terms), source, target })
    }

    pub fn neg(w: MorphismWord) -> MorphismWord {
        let (source, target) = (w.source.clone(), w.target.clone());
        MorphismWord { node: WordNode::Neg(Box::new(w)), source, target }
    }

    /// Composes a chain of letters left to right.
    pub fn chain(letters: &[Generator]) -> Result<MorphismWord, WordError> {
        let mut it = letters.iter().cloned().map(MorphismWord::generator);
        let first = it.next().ok_or(WordError::Syntax { pos: 0, found: "empty product".into() })?;
        it.try_fold(first, MorphismWord::compose)
    }

    pub fn node(&self) -> &WordNode {
        &self.node
    }

    pub fn source(&self) -> &Arc<GAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GAlgebra> {
        &self.target
    }

    /// The typed tree in the interchange format.
    pub fn to_json(&self) -> Value {
        let body = match &self.node {
            WordNode::Gen(g) => json!({ "gen": g.label(), "kind": g.kind() }),
            WordNode::Compose(a, b) => json!({ "compose": [a.to_json(), b.to_json()] }),
            WordNode::Plus(ts) => json!({ "plus": ts.iter().map(MorphismWord::to_json).collect::<Vec<_>>() }),
            WordNode::Neg(a) => json!({ "neg": a.to_json() }),
        };
        json!({ "source": self.source.name(), "target": self.target.name(), "node": body })
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        // 0: sum position, 1: composition operand
        match &self.node {
            WordNode::Gen(g) => write!(f, "{g}"),
            WordNode::Compose(a, b) => {
                if prec > 1 {
                    write!(f, "(")?;
                }
                a.fmt_prec(f, 1)?;
                write!(f, " . ")?;
                b.fmt_prec(f, 1)?;
                if prec > 1 {
                    write!(f, ")")?;
                }
                Ok(())
            }
            WordNode::Plus(ts) => {
                if prec > 0 {
                    write!(f, "(")?;
                }
                for (k, t) in ts.iter().enumerate() {
                    if k > 0 {
                        write!(f, " + ")?;
                    }
                    t.fmt_prec(f, 1)?;
                }
                if prec > 0 {
                    write!(f, ")")?;
                }
                Ok(())
            }
            WordNode::Neg(a) => {
                write!(f, "-")?;
                a.fmt_prec(f, 2)
            }
        }
    }
}

impl fmt::Display for MorphismWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// A signed product of letters; an empty product is the identity of the source.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub negative: bool,
    pub letters: Vec<Generator>,
}

/// A bracket-free word: the ordered signed sum of its products.
#[derive(Clone, Debug)]
pub struct SumOfProducts {
    pub source: Arc<GAlgebra>,
    pub target: Arc<GAlgebra>,
    pub terms: Vec<Term>,
}

impl PartialEq for SumOfProducts {
    fn eq(&self, o: &SumOfProducts) -> bool {
        self.terms == o.terms && same_object(&self.source, &o.source) && same_object(&self.target, &o.target)
    }
}

impl SumOfProducts {
    /// The object between letters `gap - 1` and `gap` of a term.
    pub fn object_at(&self, term: usize, gap: usize) -> &Arc<GAlgebra> {
        if gap == 0 {
            &self.source
        } else {
            self.terms[term].letters[gap - 1].target()
        }
    }

    /// Whether every term is a type-correct chain from source to target.
    pub fn is_well_typed(&self) -> bool {
        self.terms.iter().all(|t| {
            let mut at = self.source.clone();
            for g in &t.letters {
                if !same_object(&at, g.source()) {
                    return false;
                }
                at = g.target().clone();
            }
            same_object(&at, &self.target)
        })
    }

    /// Back to a tree; empty products become identity letters.
    pub fn to_word(&self) -> Result<MorphismWord, WordError> {
        let mut words = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let w = if t.letters.is_empty() {
                MorphismWord::generator(Generator::Identity(self.source.clone()))
            } else {
                MorphismWord::chain(&t.letters)?
            };
            words.push(if t.negative { MorphismWord::neg(w) } else { w });
        }
        if words.len() == 1 {
            return Ok(words.pop().expect("one term"));
        }
        MorphismWord::plus(words)
    }
}

impl fmt::Display for SumOfProducts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            let sign = match (k, t.negative) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            let body = if t.letters.is_empty() {
                format!("1[{}]", self.source.name())
            } else {
                t.letters.iter().map(Generator::label).collect::<Vec<_>>().join(" . ")
            };
            write!(f, "{sign}{body}")?;
        }
        Ok(())
    }
}

/// Multiplies out all brackets, distributing composition over sums.
pub fn expand(w: &MorphismWord) -> SumOfProducts {
    let terms = match &w.node {
        WordNode::Gen(g) => vec![Term { negative: false, letters: vec![g.clone()] }],
        WordNode::Compose(a, b) => {
            let (ea, eb) = (expand(a), expand(b));
            let mut out = Vec::with_capacity(ea.terms.len() * eb.terms.len());
            for x in &ea.terms {
                for y in &eb.terms {
                    let letters = x.letters.iter().chain(&y.letters).cloned().collect();
                    out.push(Term { negative: x.negative != y.negative, letters });
                }
            }
            out
        }
        WordNode::Plus(ts) => ts.iter().flat_map(|t| expand(t).terms).collect(),
        WordNode::Neg(a) => expand(a)
            .terms
            .into_iter()
            .map(|t| Term { negative: !t.negative, letters: t.letters })
            .collect(),
    };
    SumOfProducts { source: w.source.clone(), target: w.target.clone(), terms }
}
