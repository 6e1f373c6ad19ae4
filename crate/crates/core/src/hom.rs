//! Equivariant algebra homomorphisms.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebra::{GAlgebra, MatrixRep, Vector};
use crate::error::ValidationError;
use crate::field::Ring;
use crate::scalar::Scalar;
use crate::QMatrix;

#[derive(Clone, Debug)]
pub struct GHom {
    name: String,
    source: Arc<GAlgebra>,
    target: Arc<GAlgebra>,
    /// target.dim × source.dim; column j is the image of basis element j.
    matrix: QMatrix,
}

impl GHom {
    /// Builds a homomorphism after checking multiplicativity and equivariance.
    pub fn new(name: &str, source: Arc<GAlgebra>, target: Arc<GAlgebra>, matrix: QMatrix) -> Result<GHom, ValidationError> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(ValidationError::Shape {
                context: name.into(),
                detail: format!(
                    "matrix is {}×{}, expected {}×{}",
                    matrix.rows(),
                    matrix.cols(),
                    target.dim(),
                    source.dim()
                ),
            });
        }
        if source.group() != target.group() {
            return Err(ValidationError::GroupMismatch(format!("{}: {} vs {}", name, source.name(), target.name())));
        }
        let hom = GHom { name: name.to_string(), source, target, matrix };
        hom.check()?;
        Ok(hom)
    }

    pub(crate) fn from_parts(name: &str, source: Arc<GAlgebra>, target: Arc<GAlgebra>, matrix: QMatrix) -> GHom {
        GHom { name: name.to_string(), source, target, matrix }
    }

    pub fn check(&self) -> Result<(), ValidationError> {
        let (s, t) = (&self.source, &self.target);
        let images: Vec<Vector> = (0..s.dim()).map(|j| self.matrix.column(j)).collect();
        for i in 0..s.dim() {
            for j in 0..s.dim() {
                let lhs = self.apply(&s.mul(&s.basis_vector(i), &s.basis_vector(j)));
                if lhs != t.mul(&images[i], &images[j]) {
                    return Err(ValidationError::NotMultiplicative { name: self.name.clone(), i, j });
                }
            }
        }
        for g in s.group().elements() {
            let lhs = self.matrix.mul(s.action(g));
            let rhs = t.action(g).mul(&self.matrix);
            if lhs != rhs {
                let basis = (0..s.dim()).find(|&j| lhs.column(j) != rhs.column(j)).unwrap_or(0);
                return Err(ValidationError::NotEquivariant { name: self.name.clone(), g, basis });
            }
        }
        Ok(())
    }

    pub fn identity(a: &Arc<GAlgebra>) -> GHom {
        GHom::from_parts(&format!("id[{}]", a.name()), a.clone(), a.clone(), QMatrix::identity(a.dim()))
    }

    pub fn zero(a: &Arc<GAlgebra>, b: &Arc<GAlgebra>) -> GHom {
        GHom::from_parts("0", a.clone(), b.clone(), QMatrix::zeros(b.dim(), a.dim()))
    }

    /// Left-to-right composite: first `self`, then `next`.
    pub fn then(&self, next: &GHom) -> GHom {
        assert_eq!(self.target.name(), next.source.name(), "composable homomorphisms");
        GHom::from_parts(
            &format!("{}.{}", self.name, next.name),
            self.source.clone(),
            next.target.clone(),
            next.matrix.mul(&self.matrix),
        )
    }

    /// φ⁺: A⁺ → B⁺, sending the adjoined unit to the adjoined unit.
    pub fn unitize(&self, source_plus: &Arc<GAlgebra>, target_plus: &Arc<GAlgebra>) -> GHom {
        assert_eq!(source_plus.dim(), self.source.dim() + 1);
        assert_eq!(target_plus.dim(), self.target.dim() + 1);
        GHom::from_parts(&format!("{}+", self.name), source_plus.clone(), target_plus.clone(), self.matrix.direct_sum(&QMatrix::identity(1)))
    }

    pub fn renamed(mut self, name: &str) -> GHom {
        self.name = name.to_string();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Arc<GAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GAlgebra> {
        &self.target
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[Scalar]) -> Vector {
        self.matrix.mul_vec(x)
    }

    pub fn is_injective(&self) -> bool {
        self.matrix.rank() == self.source.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// Whether the image is a two-sided ideal of the target.
    pub fn image_is_ideal(&self) -> bool {
        let t = &self.target;
        let image = self.matrix.clone();
        let rank = image.rank();
        for j in 0..self.source.dim() {
            let x = image.column(j);
            for k in 0..t.dim() {
                let b = t.basis_vector(k);
                for prod in [t.mul(&x, &b), t.mul(&b, &x)] {
                    if image.hstack(&QMatrix::from_columns(t.dim(), &[prod])).rank() != rank {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// The amplification ŝ = (s ⊗ id_m)⁺ ⊗ id_n : M_n(M_m(A)⁺) → M_n(M_m(X)⁺).
///
/// `w_m` and `w_n` implement the actions on the matrix factors; the result is
/// validated as an equivariant homomorphism between the explicitly built algebras.
pub fn hat(s: &GHom, m: usize, n: usize, w_m: &MatrixRep, w_n: &MatrixRep) -> Result<GHom, ValidationError> {
    let build = |alg: &GAlgebra| -> Result<Arc<GAlgebra>, ValidationError> {
        let inner = GAlgebra::matrix_algebra(&format!("M{m}({})", alg.name()), m, alg, w_m)?;
        let plus = inner.unitization();
        Ok(Arc::new(GAlgebra::matrix_algebra(&format!("M{n}({})", plus.name()), n, &plus, w_n)?))
    };
    let domain = build(s.source())?;
    let range = build(s.target())?;
    let (da, dx) = (s.source().dim(), s.target().dim());
    let (inner_a, inner_x) = (m * m * da + 1, m * m * dx + 1);
    let mut matrix = QMatrix::zeros(range.dim(), domain.dim());
    for rc in 0..n * n {
        for pq in 0..m * m {
            for j in 0..da {
                for i in 0..dx {
                    let v = s.matrix().get(i, j);
                    if !v.is_zero() {
                        matrix.set(rc * inner_x + pq * dx + i, rc * inner_a + pq * da + j, v.clone());
                    }
                }
            }
        }
        matrix.set(rc * inner_x + inner_x - 1, rc * inner_a + inner_a - 1, Scalar::one());
    }
    GHom::new(&format!("hat({})", s.name()), domain, range, matrix)
}

pub(crate) fn sub_vectors(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x.sub_ref(y)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::trivial_rep;
    use crate::group::FiniteGroup;

    fn setup() -> (Arc<GAlgebra>, Arc<GAlgebra>) {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let c = Arc::new(GAlgebra::complex(g.clone()));
        let s = QMatrix::from_rows(vec![vec![Scalar::one(), Scalar::zero()], vec![Scalar::zero(), Scalar::int(-1)]]);
        let m2 = Arc::new(GAlgebra::matrix_algebra("M2", 2, &c, &[QMatrix::identity(2), s]).unwrap());
        (c, m2)
    }

    fn e11(m2: &GAlgebra) -> QMatrix {
        QMatrix::from_columns(m2.dim(), &[m2.basis_vector(0)])
    }

    #[test]
    fn corner_projection_is_equivariant_hom() {
        let (c, m2) = setup();
        let p = GHom::new("p1", c.clone(), m2.clone(), e11(&m2)).unwrap();
        assert!(p.is_injective());
        assert!(!p.image_is_ideal());
    }

    #[test]
    fn rejects_non_multiplicative_and_non_equivariant() {
        let (c, m2) = setup();
        let twice = e11(&m2).scale(&Scalar::int(2));
        assert!(matches!(GHom::new("x", c.clone(), m2.clone(), twice), Err(ValidationError::NotMultiplicative { .. })));
        // e12 + e21 + ... : the idempotent (1/2)[[1,1],[1,1]] is not invariant under ad diag(1,-1)
        let half = Scalar::frac(1, 2);
        let p = QMatrix::from_columns(4, &[vec![half.clone(), half.clone(), half.clone(), half]]);
        assert!(matches!(GHom::new("y", c, m2, p), Err(ValidationError::NotEquivariant { g: 1, basis: 0, .. })));
    }

    #[test]
    fn hat_trivial_sizes_is_unitization() {
        let (c, m2) = setup();
        let p = GHom::new("p1", c.clone(), m2.clone(), e11(&m2)).unwrap();
        let g = c.group().clone();
        let h = hat(&p, 1, 1, &trivial_rep(&g, 1), &trivial_rep(&g, 1)).unwrap();
        let cp = Arc::new(c.unitization());
        let mp = Arc::new(m2.unitization());
        assert_eq!(h.matrix(), p.unitize(&cp, &mp).matrix());
    }

    #[test]
    fn hat_of_identity_is_identity_and_zero_keeps_scalars() {
        let (c, m2) = setup();
        let g = c.group().clone();
        let w = trivial_rep(&g, 2);
        let id = hat(&GHom::identity(&m2), 2, 1, &w, &trivial_rep(&g, 1)).unwrap();
        assert!(id.matrix().is_identity());
        let z = hat(&GHom::zero(&c, &m2), 1, 2, &trivial_rep(&g, 1), &w).unwrap();
        // column of E11 ⊗ (λ·1⁺) maps to E11 ⊗ 1⁺ in the range
        let unit_col = z.matrix().column(1);
        assert_eq!(unit_col.iter().filter(|x| !x.is_zero()).count(), 1);
        assert!(unit_col[4].is_one());
        assert!(z.matrix().column(0).iter().all(Scalar::is_zero));
    }
}
