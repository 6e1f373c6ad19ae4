//! Very special corner embeddings A → (M_n(ℂ), ad w) ⊗ A, a ↦ e₁₁ ⊗ a.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebra::{GAlgebra, MatrixRep};
use crate::error::ValidationError;
use crate::group::FiniteGroup;
use crate::hom::GHom;
use crate::scalar::Scalar;
use crate::QMatrix;

#[derive(Clone, Debug)]
pub struct CornerEmbedding {
    name: String,
    n: usize,
    rep: MatrixRep,
    embedding: GHom,
}

impl CornerEmbedding {
    /// `rep` implements γ_g = ad(rep[g]) and must be an honest representation
    /// fixing the corner e₁₁.
    pub fn new(name: &str, base: &Arc<GAlgebra>, n: usize, rep: MatrixRep) -> Result<CornerEmbedding, ValidationError> {
        Self::with_algebra_name(name, &format!("{name}.M"), base, n, rep)
    }

    pub fn with_algebra_name(
        name: &str,
        algebra: &str,
        base: &Arc<GAlgebra>,
        n: usize,
        rep: MatrixRep,
    ) -> Result<CornerEmbedding, ValidationError> {
        let amp = Arc::new(GAlgebra::matrix_algebra(algebra, n, base, &rep)?);
        let d = base.dim();
        let mut m = QMatrix::zeros(amp.dim(), d);
        for j in 0..d {
            m.set(j, j, Scalar::one());
        }
        let embedding = GHom::new(name, base.clone(), amp, m)?;
        Ok(CornerEmbedding { name: name.to_string(), n, rep, embedding })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn rep(&self) -> &MatrixRep {
        &self.rep
    }

    pub fn base(&self) -> &Arc<GAlgebra> {
        self.embedding.source()
    }

    /// The amplified algebra M_n(ℂ) ⊗ A.
    pub fn algebra(&self) -> &Arc<GAlgebra> {
        self.embedding.target()
    }

    pub fn embedding(&self) -> &GHom {
        &self.embedding
    }

    pub fn is_identity(&self) -> bool {
        self.n == 1
    }
}

/// The regular representation of G written in the basis (constant vector,
/// e₀ − e_h for h ≠ 0), so that the constant line is the first coordinate.
pub fn adapted_regular_rep(group: &FiniteGroup) -> MatrixRep {
    let n = group.order();
    let change = QMatrix::from_fn(n, n, |i, j| {
        if i == 0 || j == 0 {
            Scalar::one()
        } else if i == j {
            -Scalar::one()
        } else {
            Scalar::zero()
        }
    });
    let change_inv = change.inverse().expect("basis change is invertible");
    group
        .elements()
        .map(|g| {
            let perm = group.regular_permutation(g);
            let lambda = QMatrix::from_fn(n, n, |i, j| if perm[j] == i { Scalar::one() } else { Scalar::zero() });
            change_inv.mul(&lambda).mul(&change)
        })
        .collect()
}

/// A → End(ℓ²(G)) ⊗ A with γ = ad of the regular representation.
pub fn averaging_embedding(name: &str, base: &Arc<GAlgebra>) -> Result<CornerEmbedding, ValidationError> {
    let group = base.group().clone();
    CornerEmbedding::new(name, base, group.order(), adapted_regular_rep(&group))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_group_gives_identity_embedding() {
        let c = Arc::new(GAlgebra::complex(Arc::new(FiniteGroup::trivial())));
        let e = averaging_embedding("e", &c).unwrap();
        assert!(e.is_identity());
        assert!(e.embedding().matrix().is_identity());
    }

    #[test]
    fn z2_regular_rep_is_conjugate_to_swap() {
        let g = FiniteGroup::cyclic(2);
        let rep = adapted_regular_rep(&g);
        // T⁻¹ [[0,1],[1,0]] T with T = [[1,1],[1,-1]] is diag(1,-1)
        let expect = QMatrix::from_rows(vec![vec![Scalar::one(), Scalar::zero()], vec![Scalar::zero(), -Scalar::one()]]);
        assert_eq!(rep[1], expect);
    }

    #[test]
    fn averaging_embedding_is_equivariant_for_z3() {
        let g = Arc::new(FiniteGroup::cyclic(3));
        let c = Arc::new(GAlgebra::complex(g));
        let e = averaging_embedding("e", &c).unwrap();
        assert_eq!(e.size(), 3);
        e.embedding().check().unwrap();
    }

    #[test]
    fn corner_moved_by_gamma_is_rejected() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let c = Arc::new(GAlgebra::complex(g));
        let swap = QMatrix::from_rows(vec![vec![Scalar::zero(), Scalar::one()], vec![Scalar::one(), Scalar::zero()]]);
        let r = CornerEmbedding::new("e", &c, 2, vec![QMatrix::identity(2), swap]);
        assert!(matches!(r, Err(ValidationError::NotEquivariant { .. })));
    }
}
