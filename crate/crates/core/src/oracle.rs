//! Idempotent invariants over semisimple algebras with block-preserving inner actions.
//!
//! Through a presentation B ≅ ⊕_k M_{n_k}, an idempotent P ∈ M_N(B⁺) splits
//! into blocks π_k⁺(P) plus its scalar quotient. Under ad(u) ⊗ β each block
//! image is a G-representation with character g ↦ tr((u_g ⊗ w_{k,g}) π_k⁺(P)),
//! decomposed into multiplicities of the irreducible characters.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{check_rep, GAlgebra, Presentation};
use crate::amatrix::AlgMatrix;
use crate::characters::{class_function, CharacterTable};
use crate::error::{Error, Indeterminate, ValidationError};
use crate::scalar::Scalar;
use crate::QMatrix;

/// Per simple block, the multiplicity of each irreducible character.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InvariantVector {
    pub blocks: Vec<Vec<i64>>,
}

impl InvariantVector {
    pub fn zero(blocks: usize, irreducibles: usize) -> InvariantVector {
        InvariantVector { blocks: vec![vec![0; irreducibles]; blocks] }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().flatten().all(|&x| x == 0)
    }

    pub fn flatten(&self) -> Vec<i64> {
        self.blocks.iter().flatten().copied().collect()
    }

    fn zip(&self, o: &InvariantVector, f: impl Fn(i64, i64) -> i64) -> InvariantVector {
        assert_eq!(self.blocks.len(), o.blocks.len(), "invariant shapes");
        InvariantVector {
            blocks: self.blocks.iter().zip(&o.blocks).map(|(a, b)| a.iter().zip(b).map(|(x, y)| f(*x, *y)).collect()).collect(),
        }
    }
}

impl Add for &InvariantVector {
    type Output = InvariantVector;
    fn add(self, o: &InvariantVector) -> InvariantVector {
        self.zip(o, |a, b| a + b)
    }
}

impl Sub for &InvariantVector {
    type Output = InvariantVector;
    fn sub(self, o: &InvariantVector) -> InvariantVector {
        self.zip(o, |a, b| a - b)
    }
}

impl Neg for &InvariantVector {
    type Output = InvariantVector;
    fn neg(self) -> InvariantVector {
        InvariantVector { blocks: self.blocks.iter().map(|b| b.iter().map(|x| -x).collect()).collect() }
    }
}

impl fmt::Display for InvariantVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| b.iter().map(i64::to_string).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "[{}]", parts.join(" | "))
    }
}

/// Decision data for one algebra: its presentation, per-block representations
/// and the character table of the group.
#[derive(Clone, Debug)]
pub struct Oracle {
    algebra: Arc<GAlgebra>,
    presentation: Presentation,
    block_reps: Vec<Vec<QMatrix>>,
    table: CharacterTable,
}

impl Oracle {
    /// Establishes the oracle scope for `algebra`, or explains why it is out of scope.
    pub fn new(algebra: &Arc<GAlgebra>) -> Result<Oracle, Indeterminate> {
        let p = algebra
            .presentation()
            .ok_or_else(|| Indeterminate::NoPresentation(algebra.name().to_string()))?
            .clone();
        let group = algebra.group();
        let mut block_reps = Vec::with_capacity(p.blocks.len());
        for (k, &nk) in p.blocks.iter().enumerate() {
            let off = p.offset(k);
            let members: Vec<Vec<Scalar>> = (0..nk * nk).map(|c| p.iso_inverse.column(off + c)).collect();
            let mut trivial_here = true;
            for g in group.elements() {
                for x in &members {
                    let moved = p.iso.mul_vec(&algebra.act(g, x));
                    let inside = off..off + nk * nk;
                    if moved.iter().enumerate().any(|(r, v)| !inside.contains(&r) && !v.is_zero()) {
                        return Err(Indeterminate::BlockPermuting { algebra: algebra.name().to_string(), g });
                    }
                    if moved != p.iso.mul_vec(x) {
                        trivial_here = false;
                    }
                }
            }
            let rep = match &p.reps[k] {
                Some(w) => w.clone(),
                None if trivial_here => vec![QMatrix::identity(nk); group.order()],
                None => return Err(Indeterminate::NotInner { algebra: algebra.name().to_string(), block: k }),
            };
            block_reps.push(rep);
        }
        let table = CharacterTable::new(group)?;
        Ok(Oracle { algebra: algebra.clone(), presentation: p, block_reps, table })
    }

    pub fn algebra(&self) -> &Arc<GAlgebra> {
        &self.algebra
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn table(&self) -> &CharacterTable {
        &self.table
    }

    pub fn block_rep(&self, k: usize) -> &[QMatrix] {
        &self.block_reps[k]
    }

    pub fn block_count(&self) -> usize {
        self.presentation.blocks.len()
    }

    pub fn irreducible_count(&self) -> usize {
        self.table.len()
    }

    /// Multiplicities of the G-representation on the image of an idempotent,
    /// given the representation `rep` acting on its ambient space.
    fn multiplicities(&self, block: &QMatrix, rep: impl Fn(usize) -> QMatrix) -> Result<Vec<i64>, Indeterminate> {
        let chi = class_function(&self.table, |g| rep(g).mul(block).trace());
        self.table.multiplicities(&chi)
    }

    /// The representation on block k of M_N(B⁺): u_g ⊗ w_{k,g} (the scalar quotient uses u_g).
    pub fn ambient_rep(&self, rep: &[QMatrix], k: usize, g: usize) -> QMatrix {
        if k == self.block_count() {
            rep[g].clone()
        } else {
            rep[g].kron(&self.block_reps[k][g])
        }
    }

    /// Checks that `p` is an idempotent invariant under ad(rep) ⊗ β⁺.
    pub fn check_element(&self, p: &AlgMatrix<Scalar>, rep: &[QMatrix]) -> Result<(), Error> {
        if p.algebra().name() != self.algebra.name() {
            return Err(ValidationError::Shape {
                context: "oracle".into(),
                detail: format!("matrix over {} given to the oracle of {}", p.algebra().name(), self.algebra.name()),
            }
            .into());
        }
        if !p.is_idempotent() {
            return Err(ValidationError::Idempotent(format!("matrix of size {} over {} is not idempotent", p.size(), self.algebra.name())).into());
        }
        let inv = check_rep(self.algebra.group(), p.size(), rep)?;
        if !p.is_invariant(rep, &inv) {
            return Err(ValidationError::Idempotent(format!("idempotent over {} is not G-invariant", self.algebra.name())).into());
        }
        Ok(())
    }

    /// The invariant of the simple blocks and, separately, of the scalar quotient.
    pub fn invariant_with_unit(&self, p: &AlgMatrix<Scalar>, rep: &[QMatrix]) -> Result<(InvariantVector, Vec<i64>), Error> {
        self.check_element(p, rep)?;
        let mut blocks = Vec::with_capacity(self.block_count());
        for k in 0..self.block_count() {
            let b = p.block(&self.presentation, k);
            blocks.push(self.multiplicities(&b, |g| self.ambient_rep(rep, k, g))?);
        }
        let scalar = p.scalar_part();
        let unit = self.multiplicities(&scalar, |g| rep[g].clone())?;
        Ok((InvariantVector { blocks }, unit))
    }

    pub fn invariant(&self, p: &AlgMatrix<Scalar>, rep: &[QMatrix]) -> Result<InvariantVector, Error> {
        Ok(self.invariant_with_unit(p, rep)?.0)
    }

    /// invariant(P₊) − invariant(P₋); their scalar quotients must agree.
    pub fn difference(&self, plus: &AlgMatrix<Scalar>, minus: &AlgMatrix<Scalar>, rep: &[QMatrix]) -> Result<InvariantVector, Error> {
        let (a, ua) = self.invariant_with_unit(plus, rep)?;
        let (b, ub) = self.invariant_with_unit(minus, rep)?;
        if ua != ub {
            return Err(Error::Internal(format!("scalar quotients differ: {ua:?} vs {ub:?}")));
        }
        Ok(&a - &b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::trivial_rep;
    use crate::group::FiniteGroup;
    use num_traits::One;

    fn complex(g: FiniteGroup) -> Arc<GAlgebra> {
        Arc::new(GAlgebra::complex(Arc::new(g)))
    }

    #[test]
    fn zero_idempotent_has_zero_invariant() {
        let c = complex(FiniteGroup::cyclic(2));
        let o = Oracle::new(&c).unwrap();
        let z = AlgMatrix::<Scalar>::zeros(&c, 3);
        let rep = trivial_rep(c.group(), 3);
        assert!(o.invariant(&z, &rep).unwrap().is_zero());
    }

    #[test]
    fn identity_of_m2_over_c_has_rank_two() {
        let c = complex(FiniteGroup::trivial());
        let o = Oracle::new(&c).unwrap();
        let mut p = AlgMatrix::<Scalar>::zeros(&c, 2);
        p.entry_mut(0, 0)[0] = Scalar::one();
        p.entry_mut(1, 1)[0] = Scalar::one();
        let v = o.invariant(&p, &trivial_rep(c.group(), 2)).unwrap();
        assert_eq!(v.blocks, vec![vec![2]]);
    }

    #[test]
    fn corner_projection_with_diagonal_sign_action() {
        // u = diag(1, -1): tr(u_g e11) = (1, 1), one copy of the trivial character
        let c = complex(FiniteGroup::cyclic(2));
        let o = Oracle::new(&c).unwrap();
        let s = QMatrix::from_rows(vec![vec![Scalar::one(), Scalar::zero()], vec![Scalar::zero(), -Scalar::one()]]);
        let rep = vec![QMatrix::identity(2), s];
        let mut p = AlgMatrix::<Scalar>::zeros(&c, 2);
        p.entry_mut(0, 0)[0] = Scalar::one();
        assert_eq!(o.invariant(&p, &rep).unwrap().blocks, vec![vec![1, 0]]);
        let mut q = AlgMatrix::<Scalar>::zeros(&c, 2);
        q.entry_mut(1, 1)[0] = Scalar::one();
        assert_eq!(o.invariant(&q, &rep).unwrap().blocks, vec![vec![0, 1]]);
    }

    #[test]
    fn non_idempotent_is_rejected() {
        let c = complex(FiniteGroup::trivial());
        let o = Oracle::new(&c).unwrap();
        let mut p = AlgMatrix::<Scalar>::zeros(&c, 1);
        p.entry_mut(0, 0)[0] = Scalar::int(2);
        assert!(o.invariant(&p, &trivial_rep(c.group(), 1)).is_err());
    }

    #[test]
    fn swap_action_on_direct_sum_is_block_permuting() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let c = GAlgebra::complex(g.clone());
        let cc = GAlgebra::direct_sum("CC", &c, &c).unwrap();
        let swap = QMatrix::from_rows(vec![vec![Scalar::zero(), Scalar::one()], vec![Scalar::one(), Scalar::zero()]]);
        let alg = GAlgebra::new(
            "CCswap",
            cc.basis().to_vec(),
            g,
            cc.table().clone(),
            None,
            vec![QMatrix::identity(2), swap],
            cc.presentation().cloned().map(|mut p| {
                p.reps = vec![None, None];
                p
            }),
        );
        let alg = Arc::new(alg.unwrap());
        assert!(matches!(Oracle::new(&alg), Err(Indeterminate::BlockPermuting { g: 1, .. })));
    }
}
