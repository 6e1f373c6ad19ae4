//! Workspace files: a JSON registry of groups, algebras, homomorphisms,
//! corner embeddings, split-exact sequences, homotopies and stored words.
//!
//! Sections are read in the order groups, algebras, homs, homotopies,
//! sequences, words; within a section an entry may refer to earlier entries
//! only. Scalars are exact strings such as `"1/2-3i"` or plain integers.
//!
//! ```json
//! {
//!   "groups": { "Z2": { "cyclic": 2 } },
//!   "algebras": {
//!     "C": { "complex": { "group": "Z2" } },
//!     "M2": { "corner": { "base": "C", "size": 2, "rep": [[[1,0],[0,1]], [[1,0],[0,-1]]], "embedding": "e" } }
//!   },
//!   "homs": { "p": { "matrix": { "source": "C", "target": "M2", "matrix": [[1],[0],[0],[0]] } } }
//! }
//! ```

use std::sync::Arc;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::algebra::{trivial_rep, GAlgebra, MatrixRep, Presentation};
use crate::corner::{adapted_regular_rep, CornerEmbedding};
use crate::error::{Error, ValidationError};
use crate::group::FiniteGroup;
use crate::hom::GHom;
use crate::homotopy::Homotopy;
use crate::matrix::Matrix;
use crate::path::PathRing;
use crate::scalar::Scalar;
use crate::splitexact::{check_splitexact, SplitExact};
use crate::words::{parse, MorphismWord, Registry, Vocabulary};
use crate::QMatrix;

pub const DEFAULT_MAX_DIM: usize = 64;
pub const MAX_DIM_VAR: &str = "GKCALC_MAX_DIM";

/// The built-in corpus used when no workspace file is given.
pub const DEFAULT_CORPUS: &str = include_str!("../fixtures/default.json");

/// Reads the dimension cap from the environment.
pub fn max_dim_from_env() -> Result<usize, Error> {
    match std::env::var(MAX_DIM_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| Error::Workspace(format!("{MAX_DIM_VAR}={v:?} is not a dimension"))),
        Err(_) => Ok(DEFAULT_MAX_DIM),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarText {
    Int(i64),
    Text(String),
}

impl ScalarText {
    fn value(&self) -> Result<Scalar, String> {
        match self {
            ScalarText::Int(n) => Ok(Scalar::int(*n)),
            ScalarText::Text(t) => t.parse().map_err(|e: crate::error::ParseScalarError| e.to_string()),
        }
    }
}

impl From<&Scalar> for ScalarText {
    fn from(x: &Scalar) -> ScalarText {
        match x.as_integer() {
            Some(n) => ScalarText::Int(n),
            None => ScalarText::Text(x.to_string()),
        }
    }
}

pub type MatrixText = Vec<Vec<ScalarText>>;

/// A path-ring entry as a list of `[coefficient, power of c, power of s]`.
pub type PathText = Vec<(ScalarText, u32, u32)>;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Trivial,
    Cyclic(usize),
    MulTable(Vec<Vec<usize>>),
    Product([String; 2]),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationSpec {
    pub blocks: Vec<usize>,
    /// Rows are block coordinates, columns the algebra basis.
    pub iso: MatrixText,
    #[serde(default)]
    pub reps: Vec<Option<Vec<MatrixText>>>,
}

/// One row of an explicit product table: (i, j, [(k, coefficient)]).
pub type ProductEntry = (usize, usize, Vec<(usize, ScalarText)>);

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum AlgebraSpec {
    Complex {
        group: String,
    },
    /// (M_n(ℂ), ad rep) ⊗ base; `rep` defaults to the trivial representation.
    Matrix {
        base: String,
        size: usize,
        #[serde(default)]
        rep: Option<Vec<MatrixText>>,
    },
    /// Like `matrix`, and registers the corner embedding base → this algebra.
    Corner {
        base: String,
        size: usize,
        #[serde(default)]
        rep: Option<Vec<MatrixText>>,
        embedding: String,
    },
    /// End(ℓ²(G)) ⊗ base with the regular representation, plus its corner embedding.
    Averaging {
        base: String,
        embedding: String,
    },
    DirectSum([String; 2]),
    Unitization(String),
    Explicit {
        group: String,
        basis: Vec<String>,
        /// `[i, j, [[k, coefficient], ...]]` for every nonzero product b_i b_j.
        products: Vec<ProductEntry>,
        #[serde(default)]
        unit: Option<Vec<ScalarText>>,
        #[serde(default)]
        action: Vec<MatrixText>,
        #[serde(default)]
        presentation: Option<PresentationSpec>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum HomSpec {
    Matrix { source: String, target: String, matrix: MatrixText },
    /// First `first`, then `then`.
    Compose { first: String, then: String },
    /// Inclusion of summand 0 or 1 of a direct sum.
    Inclusion { sum: String, summand: usize },
    Projection { sum: String, summand: usize },
    Identity(String),
    Zero { source: String, target: String },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomotopySpec {
    pub source: String,
    pub target: String,
    pub matrix: Vec<Vec<PathText>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceSpec {
    pub i: String,
    pub f: String,
    pub s: String,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkspaceFile {
    #[serde(default)]
    pub meta: IndexMap<String, String>,
    #[serde(default)]
    pub groups: IndexMap<String, GroupSpec>,
    #[serde(default)]
    pub algebras: IndexMap<String, AlgebraSpec>,
    #[serde(default)]
    pub homs: IndexMap<String, HomSpec>,
    #[serde(default)]
    pub homotopies: IndexMap<String, HomotopySpec>,
    #[serde(default)]
    pub sequences: IndexMap<String, SequenceSpec>,
    #[serde(default)]
    pub words: IndexMap<String, String>,
}

/// A loaded and fully validated registry.
#[derive(Clone, Debug, Default)]
pub struct Workspace {
    pub meta: IndexMap<String, String>,
    groups: IndexMap<String, Arc<FiniteGroup>>,
    algebras: IndexMap<String, Arc<GAlgebra>>,
    summands: IndexMap<String, [Arc<GAlgebra>; 2]>,
    homs: IndexMap<String, Arc<GHom>>,
    corners: IndexMap<String, Arc<CornerEmbedding>>,
    homotopies: IndexMap<String, Arc<Homotopy>>,
    sequences: IndexMap<String, Arc<SplitExact>>,
    words: IndexMap<String, MorphismWord>,
}

fn at(path: String) -> impl Fn(String) -> Error {
    move |e| Error::Workspace(format!("{path}: {e}"))
}

fn matrix_of(m: &MatrixText) -> Result<QMatrix, String> {
    let rows: Vec<Vec<Scalar>> = m.iter().map(|r| r.iter().map(ScalarText::value).collect()).collect::<Result<_, _>>()?;
    if rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err("ragged matrix".into());
    }
    Ok(Matrix::from_rows(rows))
}

fn sized_matrix(m: &MatrixText, rows: usize, cols: usize) -> Result<QMatrix, String> {
    if m.is_empty() && rows * cols == 0 {
        return Ok(QMatrix::zeros(rows, cols));
    }
    let out = matrix_of(m)?;
    if out.rows() != rows || out.cols() != cols {
        return Err(format!("expected a {rows}×{cols} matrix, found {}×{}", out.rows(), out.cols()));
    }
    Ok(out)
}

fn rep_of(m: &[MatrixText], n: usize) -> Result<MatrixRep, String> {
    m.iter().map(|x| sized_matrix(x, n, n)).collect()
}

impl Workspace {
    pub fn from_json(text: &str, max_dim: usize) -> Result<Workspace, Error> {
        let file: WorkspaceFile = serde_json::from_str(text).map_err(|e| Error::Workspace(format!("schema: {e}")))?;
        Workspace::from_file(&file, max_dim)
    }

    pub fn default_corpus() -> Workspace {
        Workspace::from_json(DEFAULT_CORPUS, DEFAULT_MAX_DIM).expect("built-in corpus is valid")
    }

    pub fn from_file(file: &WorkspaceFile, max_dim: usize) -> Result<Workspace, Error> {
        let mut ws = Workspace { meta: file.meta.clone(), ..Workspace::default() };
        for (name, spec) in &file.groups {
            let g = ws.load_group(name, spec).map_err(at(format!("groups.{name}")))?;
            ws.groups.insert(name.clone(), Arc::new(g));
        }
        for (name, spec) in &file.algebras {
            let err = at(format!("algebras.{name}"));
            if ws.algebras.contains_key(name) {
                return Err(err("duplicate algebra name".into()));
            }
            let a = ws.load_algebra(name, spec).map_err(&err)?;
            if a.dim() > max_dim {
                return Err(ValidationError::TooLarge { name: name.clone(), dim: a.dim(), cap: max_dim }.into());
            }
            ws.algebras.insert(name.clone(), a);
        }
        for (name, spec) in &file.homs {
            let err = at(format!("homs.{name}"));
            if ws.homs.contains_key(name) || ws.corners.contains_key(name) {
                return Err(err("name already used".into()));
            }
            let h = ws.load_hom(name, spec).map_err(err)?;
            ws.homs.insert(name.clone(), Arc::new(h));
        }
        for (name, spec) in &file.homotopies {
            let h = ws.load_homotopy(name, spec).map_err(at(format!("homotopies.{name}")))?;
            ws.homotopies.insert(name.clone(), Arc::new(h));
        }
        for (name, spec) in &file.sequences {
            let err = at(format!("sequences.{name}"));
            let hom = |h: &str| ws.hom(h).ok_or_else(|| err(format!("unknown hom {h:?}")));
            let (i, f, s) = (hom(&spec.i)?, hom(&spec.f)?, hom(&spec.s)?);
            let seq = check_splitexact(name, &i, &f, &s).map_err(|e| err(e.to_string()))?;
            ws.sequences.insert(name.clone(), Arc::new(seq));
        }
        for (name, text) in &file.words {
            let w = parse(text, &ws).map_err(|e| at(format!("words.{name}"))(e.to_string()))?;
            ws.words.insert(name.clone(), w);
        }
        Ok(ws)
    }

    fn group_ref(&self, name: &str) -> Result<Arc<FiniteGroup>, String> {
        self.groups.get(name).cloned().ok_or_else(|| format!("unknown group {name:?}"))
    }

    fn algebra_ref(&self, name: &str) -> Result<Arc<GAlgebra>, String> {
        self.algebras.get(name).cloned().ok_or_else(|| format!("unknown algebra {name:?}"))
    }

    fn load_group(&self, name: &str, spec: &GroupSpec) -> Result<FiniteGroup, String> {
        let g = match spec {
            GroupSpec::Trivial => FiniteGroup::trivial(),
            GroupSpec::Cyclic(n) if *n >= 1 => FiniteGroup::cyclic(*n),
            GroupSpec::Cyclic(_) => return Err("cyclic group order must be ≥ 1".into()),
            GroupSpec::MulTable(t) => FiniteGroup::from_table(name, t.clone()).map_err(|e| e.to_string())?,
            GroupSpec::Product([a, b]) => FiniteGroup::product(&*self.group_ref(a)?, &*self.group_ref(b)?),
        };
        Ok(g.with_name(name))
    }

    fn rep_or_trivial(&self, base: &GAlgebra, size: usize, rep: &Option<Vec<MatrixText>>) -> Result<MatrixRep, String> {
        match rep {
            Some(r) => rep_of(r, size),
            None => Ok(trivial_rep(base.group(), size)),
        }
    }

    fn load_algebra(&mut self, name: &str, spec: &AlgebraSpec) -> Result<Arc<GAlgebra>, String> {
        let e = |x: ValidationError| x.to_string();
        let a = match spec {
            AlgebraSpec::Complex { group } => GAlgebra::complex(self.group_ref(group)?).renamed(name),
            AlgebraSpec::Matrix { base, size, rep } => {
                let b = self.algebra_ref(base)?;
                let w = self.rep_or_trivial(&b, *size, rep)?;
                GAlgebra::matrix_algebra(name, *size, &b, &w).map_err(e)?
            }
            AlgebraSpec::Corner { base, size, rep, embedding } => {
                let b = self.algebra_ref(base)?;
                let w = self.rep_or_trivial(&b, *size, rep)?;
                let corner = CornerEmbedding::with_algebra_name(embedding, name, &b, *size, w).map_err(e)?;
                return self.add_corner(corner);
            }
            AlgebraSpec::Averaging { base, embedding } => {
                let b = self.algebra_ref(base)?;
                let group = b.group().clone();
                let corner = CornerEmbedding::with_algebra_name(embedding, name, &b, group.order(), adapted_regular_rep(&group)).map_err(e)?;
                return self.add_corner(corner);
            }
            AlgebraSpec::DirectSum([x, y]) => {
                let (a, b) = (self.algebra_ref(x)?, self.algebra_ref(y)?);
                let sum = GAlgebra::direct_sum(name, &a, &b).map_err(e)?;
                self.summands.insert(name.to_string(), [a, b]);
                sum
            }
            AlgebraSpec::Unitization(base) => self.algebra_ref(base)?.unitization().renamed(name),
            AlgebraSpec::Explicit { group, basis, products, unit, action, presentation } => {
                let group = self.group_ref(group)?;
                let dim = basis.len();
                let mut table = vec![Vec::new(); dim * dim];
                for (i, j, terms) in products {
                    if *i >= dim || *j >= dim {
                        return Err(format!("product ({i}, {j}) outside the basis"));
                    }
                    let terms: Vec<(usize, Scalar)> =
                        terms.iter().map(|(k, v)| Ok((*k, v.value()?))).collect::<Result<_, String>>()?;
                    table[i * dim + j] = terms.into_iter().filter(|(_, v)| !num_traits::Zero::is_zero(v)).collect();
                }
                let unit = unit.as_ref().map(|u| u.iter().map(ScalarText::value).collect::<Result<Vec<_>, _>>()).transpose()?;
                let action = rep_of(action, dim)?;
                let presentation = presentation.as_ref().map(|p| self.load_presentation(p, dim)).transpose()?;
                GAlgebra::new(name, basis.clone(), group, table, unit, action, presentation).map_err(e)?
            }
        };
        Ok(Arc::new(a))
    }

    fn add_corner(&mut self, corner: CornerEmbedding) -> Result<Arc<GAlgebra>, String> {
        if self.corners.contains_key(corner.name()) {
            return Err(format!("duplicate corner embedding {:?}", corner.name()));
        }
        let alg = corner.algebra().clone();
        self.corners.insert(corner.name().to_string(), Arc::new(corner));
        Ok(alg)
    }

    fn load_presentation(&self, p: &PresentationSpec, dim: usize) -> Result<Presentation, String> {
        let total: usize = p.blocks.iter().map(|n| n * n).sum();
        let iso = sized_matrix(&p.iso, total, dim)?;
        let iso_inverse = iso.inverse().ok_or("presentation matrix is not invertible")?;
        let reps = if p.reps.is_empty() {
            vec![None; p.blocks.len()]
        } else if p.reps.len() == p.blocks.len() {
            p.reps
                .iter()
                .zip(&p.blocks)
                .map(|(r, &n)| r.as_ref().map(|r| rep_of(r, n)).transpose())
                .collect::<Result<_, _>>()?
        } else {
            return Err("one representation entry per block is required".into());
        };
        Ok(Presentation { blocks: p.blocks.clone(), iso, iso_inverse, reps })
    }

    fn load_hom(&self, name: &str, spec: &HomSpec) -> Result<GHom, String> {
        let e = |x: ValidationError| x.to_string();
        let summand = |sum: &str, k: usize| -> Result<(Arc<GAlgebra>, Arc<GAlgebra>, usize), String> {
            let parts = self.summands.get(sum).ok_or_else(|| format!("{sum:?} is not a direct sum"))?;
            if k > 1 {
                return Err(format!("summand index {k} must be 0 or 1"));
            }
            let offset = if k == 0 { 0 } else { parts[0].dim() };
            Ok((self.algebra_ref(sum)?, parts[k].clone(), offset))
        };
        match spec {
            HomSpec::Matrix { source, target, matrix } => {
                let (s, t) = (self.algebra_ref(source)?, self.algebra_ref(target)?);
                let m = sized_matrix(matrix, t.dim(), s.dim())?;
                GHom::new(name, s, t, m).map_err(e)
            }
            HomSpec::Compose { first, then } => {
                let (a, b) = (self.hom(first).ok_or(format!("unknown hom {first:?}"))?, self.hom(then).ok_or(format!("unknown hom {then:?}"))?);
                if a.target().name() != b.source().name() {
                    return Err(format!("cannot compose {} with {}", a.target().name(), b.source().name()));
                }
                Ok(a.then(&b).renamed(name))
            }
            HomSpec::Inclusion { sum, summand: k } => {
                let (total, part, offset) = summand(sum, *k)?;
                let m = QMatrix::from_fn(total.dim(), part.dim(), |i, j| if i == j + offset { Scalar::int(1) } else { Scalar::int(0) });
                GHom::new(name, part, total, m).map_err(e)
            }
            HomSpec::Projection { sum, summand: k } => {
                let (total, part, offset) = summand(sum, *k)?;
                let m = QMatrix::from_fn(part.dim(), total.dim(), |i, j| if j == i + offset { Scalar::int(1) } else { Scalar::int(0) });
                GHom::new(name, total, part, m).map_err(e)
            }
            HomSpec::Identity(a) => Ok(GHom::identity(&self.algebra_ref(a)?).renamed(name)),
            HomSpec::Zero { source, target } => Ok(GHom::zero(&self.algebra_ref(source)?, &self.algebra_ref(target)?).renamed(name)),
        }
    }

    fn load_homotopy(&self, name: &str, spec: &HomotopySpec) -> Result<Homotopy, String> {
        let (s, t) = (self.algebra_ref(&spec.source)?, self.algebra_ref(&spec.target)?);
        let entry = |terms: &PathText| -> Result<PathRing, String> {
            terms.iter().try_fold(PathRing::default(), |acc, (c, ce, se)| Ok(acc + PathRing::term(c.value()?, *ce, *se)))
        };
        let rows: Vec<Vec<PathRing>> =
            spec.matrix.iter().map(|r| r.iter().map(&entry).collect::<Result<_, _>>()).collect::<Result<_, _>>()?;
        if rows.len() != t.dim() || rows.iter().any(|r| r.len() != s.dim()) {
            return Err(format!("expected a {}×{} matrix", t.dim(), s.dim()));
        }
        Homotopy::new(name, s, t, Matrix::from_rows(rows)).map_err(|e| e.to_string())
    }

    pub fn algebras(&self) -> impl Iterator<Item = (&str, &Arc<GAlgebra>)> {
        self.algebras.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn homs(&self) -> impl Iterator<Item = &Arc<GHom>> {
        self.homs.values()
    }

    pub fn corners(&self) -> impl Iterator<Item = &Arc<CornerEmbedding>> {
        self.corners.values()
    }

    pub fn sequences(&self) -> impl Iterator<Item = &Arc<SplitExact>> {
        self.sequences.values()
    }

    pub fn homotopies(&self) -> impl Iterator<Item = &Arc<Homotopy>> {
        self.homotopies.values()
    }

    pub fn words(&self) -> impl Iterator<Item = (&str, &MorphismWord)> {
        self.words.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn group_count(&self) -> usize {
        self.groups.len()
    }

    pub fn vocabulary(&self) -> Vocabulary {
        Vocabulary { sequences: self.sequences.values().cloned().collect(), corners: self.corners.values().cloned().collect() }
    }

    pub fn parse_word(&self, text: &str) -> Result<MorphismWord, Error> {
        Ok(parse(text, self)?)
    }
}

impl Registry for Workspace {
    fn algebra(&self, name: &str) -> Option<Arc<GAlgebra>> {
        self.algebras.get(name).cloned()
    }

    fn hom(&self, name: &str) -> Option<Arc<GHom>> {
        self.homs.get(name).cloned()
    }

    fn corner(&self, name: &str) -> Option<Arc<CornerEmbedding>> {
        self.corners.get(name).cloned()
    }

    fn sequence(&self, name: &str) -> Option<Arc<SplitExact>> {
        self.sequences.get(name).cloned()
    }

    fn homotopy(&self, name: &str) -> Option<Arc<Homotopy>> {
        self.homotopies.get(name).cloned()
    }

    fn word(&self, name: &str) -> Option<MorphismWord> {
        self.words.get(name).cloned()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_corpus_loads() {
        let ws = Workspace::default_corpus();
        assert!(ws.hom("gen_p").is_some());
        assert!(ws.hom("phi").is_some());
        assert!(ws.sequences().count() >= 2);
        assert!(ws.corners().count() >= 2);
    }

    #[test]
    fn non_associative_table_is_rejected_with_triple() {
        let text = r#"{
            "groups": {"1": "trivial"},
            "algebras": {"X": {"explicit": {"group": "1", "basis": ["a", "b"],
                "products": [[0, 0, [[1, 1]]], [1, 0, [[0, 1]]]]}}}
        }"#;
        let err = Workspace::from_json(text, 64).unwrap_err().to_string();
        assert!(err.contains("algebras.X") && err.contains("triple"), "{err}");
    }

    #[test]
    fn non_equivariant_hom_is_rejected() {
        let text = r#"{
            "groups": {"Z2": {"cyclic": 2}},
            "algebras": {
                "C": {"complex": {"group": "Z2"}},
                "CC": {"explicit": {"group": "Z2", "basis": ["x", "y"],
                    "products": [[0, 0, [[0, 1]]], [1, 1, [[1, 1]]]],
                    "action": [[[1, 0], [0, 1]], [[0, 1], [1, 0]]]}}
            },
            "homs": {"h": {"matrix": {"source": "C", "target": "CC", "matrix": [[1], [0]]}}}
        }"#;
        let err = Workspace::from_json(text, 64).unwrap_err().to_string();
        assert!(err.contains("homs.h") && err.contains("equivariant"), "{err}");
    }

    #[test]
    fn dimension_cap_applies() {
        let text = r#"{"groups": {"1": "trivial"}, "algebras": {"C": {"complex": {"group": "1"}},
            "M3": {"matrix": {"base": "C", "size": 3}}}}"#;
        assert!(matches!(Workspace::from_json(text, 8), Err(Error::Validation(ValidationError::TooLarge { .. }))));
        assert!(Workspace::from_json(text, 9).is_ok());
    }

    #[test]
    fn unknown_reference_names_its_location() {
        let text = r#"{"algebras": {"C": {"complex": {"group": "G"}}}}"#;
        let err = Workspace::from_json(text, 64).unwrap_err().to_string();
        assert!(err.contains("algebras.C") && err.contains("\"G\""), "{err}");
    }
}
