//! Classes in K^G(B), their group structure and functoriality.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebra::GAlgebra;
use crate::amatrix::AlgMatrix;
use crate::error::{Error, Indeterminate};
use crate::hom::GHom;
use crate::levelone::S1Element;
use crate::matrix::Matrix;
use crate::oracle::{InvariantVector, Oracle};
use crate::rational::Rational;
use crate::scalar::Scalar;
use crate::words::MorphismWord;
use crate::QMatrix;

pub use crate::corner::averaging_embedding;

/// A class: the oracle key when decidable, always with a representative.
#[derive(Clone, Debug)]
pub struct KClass {
    key: Result<InvariantVector, Indeterminate>,
    representative: S1Element,
}

impl KClass {
    pub fn target(&self) -> &Arc<GAlgebra> {
        self.representative.target()
    }

    pub fn key(&self) -> Result<&InvariantVector, &Indeterminate> {
        self.key.as_ref()
    }

    pub fn is_decidable(&self) -> bool {
        self.key.is_ok()
    }

    pub fn representative(&self) -> &S1Element {
        &self.representative
    }

    /// Class of the direct sum.
    pub fn add(&self, o: &KClass) -> Result<KClass, Error> {
        let key = match (&self.key, &o.key) {
            (Ok(a), Ok(b)) => Ok(a + b),
            (Err(e), _) | (_, Err(e)) => Err(e.clone()),
        };
        Ok(KClass { key, representative: self.representative.direct_sum(&o.representative)? })
    }

    /// Class of the swapped pair.
    pub fn neg(&self) -> KClass {
        KClass { key: self.key.as_ref().map(|k| -k).map_err(Clone::clone), representative: self.representative.negate() }
    }

    pub fn is_zero(&self) -> Result<bool, Indeterminate> {
        self.key.as_ref().map(InvariantVector::is_zero).map_err(Clone::clone)
    }
}

/// The class of the empty element.
pub fn zero_class(target: &Arc<GAlgebra>) -> Result<KClass, Error> {
    class_of(&S1Element::empty(target))
}

pub fn class_with(oracle: &Oracle, x: &S1Element) -> Result<KClass, Error> {
    let key = oracle.difference(x.plus(), x.minus(), x.rep())?;
    Ok(KClass { key: Ok(key), representative: x.clone() })
}

/// Computes the key through the oracle of the element's algebra; an
/// out-of-scope algebra yields an undecided class rather than an error.
pub fn class_of(x: &S1Element) -> Result<KClass, Error> {
    match Oracle::new(x.target()) {
        Ok(o) => class_with(&o, x),
        Err(e) => {
            x.check()?;
            Ok(KClass { key: Err(e), representative: x.clone() })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    NotEqual,
    Indeterminate(Indeterminate),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Equal => write!(f, "Equal"),
            Verdict::NotEqual => write!(f, "NotEqual"),
            Verdict::Indeterminate(r) => write!(f, "Indeterminate ({r})"),
        }
    }
}

pub fn compare(a: &KClass, b: &KClass) -> Verdict {
    match (&a.key, &b.key) {
        (Ok(x), Ok(y)) if x == y => Verdict::Equal,
        (Ok(_), Ok(_)) => Verdict::NotEqual,
        (Err(e), _) | (_, Err(e)) => Verdict::Indeterminate(e.clone()),
    }
}

/// Decides x ≡ y over their common algebra.
pub fn equiv(x: &S1Element, y: &S1Element) -> Result<Verdict, Error> {
    if x.target().name() != y.target().name() {
        return Err(Error::Workspace(format!("cannot compare classes over {} and {}", x.target().name(), y.target().name())));
    }
    Ok(compare(&class_of(x)?, &class_of(y)?))
}

/// K^G(f) on representatives: f̂ applied to both idempotents.
pub fn k_functor(f: &GHom, x: &S1Element) -> S1Element {
    x.map(f)
}

/// The word representing an S₁ element.
pub fn psi_inverse(x: &S1Element) -> Result<MorphismWord, Error> {
    x.to_word("z")
}

/// One free generator: a block and an irreducible character.
#[derive(Clone, Debug)]
pub struct KGenerator {
    pub block: usize,
    pub irreducible: usize,
    pub element: S1Element,
    pub key: InvariantVector,
}

/// A free abelian presentation with explicit generators.
#[derive(Clone, Debug)]
pub struct KGroup {
    pub algebra: String,
    pub generators: Vec<KGenerator>,
}

impl KGroup {
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// "0", "Z" or "Z^r".
    pub fn summary(&self) -> String {
        match self.rank() {
            0 => "0".into(),
            1 => "Z".into(),
            r => format!("Z^{r}"),
        }
    }
}

impl fmt::Display for KGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.rank();
        write!(f, "{}, {n} generator{}", self.summary(), if n == 1 { "" } else { "s" })
    }
}

/// Left regular representation as matrices: g·e_h = e_{gh}.
fn regular_rep(group: &crate::group::FiniteGroup) -> Vec<QMatrix> {
    let n = group.order();
    group
        .elements()
        .map(|g| {
            let perm = group.regular_permutation(g);
            QMatrix::from_fn(n, n, |i, j| if perm[j] == i { Scalar::one() } else { Scalar::zero() })
        })
        .collect()
}

/// Σ_g c_g R_g.
fn group_sum(reps: &[QMatrix], coeffs: &[Scalar]) -> QMatrix {
    let n = reps[0].rows();
    let mut out = QMatrix::zeros(n, n);
    for (r, c) in reps.iter().zip(coeffs) {
        if !c.is_zero() {
            out = out.add(&r.scale(c));
        }
    }
    out
}

/// The G-average of a linear map: |G|⁻¹ Σ_g R_g m R_g⁻¹.
pub(crate) fn average(reps: &[QMatrix], inv: &[QMatrix], m: &QMatrix) -> QMatrix {
    let mut out = QMatrix::zeros(m.rows(), m.cols());
    for (r, ri) in reps.iter().zip(inv) {
        out = out.add(&r.mul(m).mul(ri));
    }
    out.scale(&Scalar::from(Rational::new(1, reps.len() as i64)))
}

/// A projection onto the column span of `basis` (columns independent).
pub(crate) fn projection_onto(basis: &QMatrix) -> QMatrix {
    let t = basis.transpose().rref();
    let k = basis.cols();
    let rows = t.pivots.clone();
    let square = basis.submatrix(&rows, &(0..k).collect::<Vec<_>>());
    let inv = square.inverse().expect("pivot rows give an invertible square");
    let mut select = QMatrix::zeros(k, basis.rows());
    for (a, &r) in rows.iter().enumerate() {
        select.set(a, r, Scalar::one());
    }
    basis.mul(&inv).mul(&select)
}

/// Free generators of K^G(B): one per simple block and irreducible character,
/// realized inside M_|G|(B) with the regular representation.
pub fn kgroup(b: &Arc<GAlgebra>) -> Result<KGroup, Error> {
    let oracle = Oracle::new(b)?;
    let group = b.group();
    let table = oracle.table();
    let pres = oracle.presentation();
    let u = regular_rep(group);
    let u_inv: Vec<QMatrix> = group.elements().map(|g| u[group.inv(g)].clone()).collect();
    let n = group.order();
    let mut generators = Vec::new();
    for (k, &nk) in pres.blocks.iter().enumerate() {
        let reps: Vec<QMatrix> = group.elements().map(|g| oracle.ambient_rep(&u, k, g)).collect();
        let inv: Vec<QMatrix> = group.elements().map(|g| oracle.ambient_rep(&u, k, group.inv(g))).collect();
        let d = n * nk;
        for (i, ir) in table.irreducibles.iter().enumerate() {
            let want = ir.degree * ir.orbit;
            let central = group_sum(&reps, &ir.idempotent);
            let mut shapers = vec![QMatrix::identity(d)];
            for g in group.elements().skip(1) {
                shapers.push(QMatrix::identity(d).add(&reps[g]));
                shapers.push(QMatrix::identity(d).sub(&reps[g]));
            }
            let mut found = None;
            'search: for z in &shapers {
                let m = central.mul(z);
                for j in 0..d {
                    let x = m.column(j);
                    if x.iter().all(Scalar::is_zero) {
                        continue;
                    }
                    let orbit: Vec<Vec<Scalar>> = reps.iter().map(|r| r.mul_vec(&x)).collect();
                    let span = Matrix::from_columns(d, &orbit).column_basis();
                    if span.len() == want {
                        found = Some(QMatrix::from_columns(d, &span));
                        break 'search;
                    }
                }
            }
            let basis = found.ok_or_else(|| {
                Indeterminate::Characters(format!("no irreducible copy of character {i} found in block {k} of {}", b.name()))
            })?;
            let proj = average(&reps, &inv, &projection_onto(&basis));
            let mut blocks: Vec<QMatrix> = pres.blocks.iter().map(|&m| QMatrix::zeros(n * m, n * m)).collect();
            blocks[k] = proj;
            blocks.push(QMatrix::zeros(n, n));
            let plus = AlgMatrix::from_blocks(b, pres, n, &blocks);
            let element = S1Element::from_parts(b, plus, AlgMatrix::zeros(b, n), u.clone(), u_inv.clone());
            let key = class_with(&oracle, &element)?.key.expect("decided by construction");
            let mut expect = InvariantVector::zero(pres.blocks.len(), table.len());
            expect.blocks[k][i] = 1;
            if key != expect {
                return Err(Error::Internal(format!("generator for block {k}, character {i} has key {key}")));
            }
            generators.push(KGenerator { block: k, irreducible: i, element, key });
        }
    }
    Ok(KGroup { algebra: b.name().to_string(), generators })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::trivial_rep;
    use crate::group::FiniteGroup;

    fn c(g: FiniteGroup) -> Arc<GAlgebra> {
        Arc::new(GAlgebra::complex(Arc::new(g)))
    }

    #[test]
    fn kgroup_of_c_is_z() {
        let k = kgroup(&c(FiniteGroup::trivial())).unwrap();
        assert_eq!(k.to_string(), "Z, 1 generator");
    }

    #[test]
    fn kgroup_of_c_with_z2_is_z2() {
        let k = kgroup(&c(FiniteGroup::cyclic(2))).unwrap();
        assert_eq!(k.rank(), 2);
    }

    #[test]
    fn kgroup_of_sum_has_one_generator_per_block() {
        let g = Arc::new(FiniteGroup::trivial());
        let cc = GAlgebra::complex(g.clone());
        let m2 = GAlgebra::matrix_algebra("M2", 2, &cc, &trivial_rep(&g, 2)).unwrap();
        let sum = Arc::new(GAlgebra::direct_sum("CM2", &cc, &m2).unwrap());
        assert_eq!(kgroup(&sum).unwrap().summary(), "Z^2");
    }

    #[test]
    fn negation_cancels() {
        let b = c(FiniteGroup::cyclic(2));
        let k = kgroup(&b).unwrap();
        let x = class_of(&k.generators[1].element).unwrap();
        assert!(x.add(&x.neg()).unwrap().is_zero().unwrap());
    }

    #[test]
    fn distinct_ranks_are_not_equal() {
        let b = c(FiniteGroup::trivial());
        let g = kgroup(&b).unwrap().generators[0].element.clone();
        let two = g.direct_sum(&g).unwrap();
        assert_eq!(equiv(&g, &two).unwrap(), Verdict::NotEqual);
        assert_eq!(equiv(&g, &g.pad(2)).unwrap(), Verdict::Equal);
    }

    #[test]
    fn zero_hom_kills_classes() {
        let b = c(FiniteGroup::trivial());
        let g = kgroup(&b).unwrap().generators[0].element.clone();
        let image = k_functor(&GHom::zero(&b, &b), &g);
        assert!(class_of(&image).unwrap().is_zero().unwrap());
    }
}
