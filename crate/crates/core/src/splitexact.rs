//! Split-exact sequences J →i M →f A with split s.

use num_traits::{One, Zero};

use crate::algebra::Vector;
use crate::error::ValidationError;
use crate::hom::{sub_vectors, GHom};
use crate::matrix::SpanSolver;
use crate::scalar::Scalar;
use crate::QMatrix;

#[derive(Clone, Debug)]
pub struct SplitExact {
    name: String,
    pub i: GHom,
    pub f: GHom,
    pub s: GHom,
    ideal: SpanSolver<Scalar>,
}

/// Verifies f∘s = id, injectivity of i and im(i) = ker(f); every failure is reported.
pub fn check_splitexact(name: &str, i: &GHom, f: &GHom, s: &GHom) -> Result<SplitExact, ValidationError> {
    let mut failures = Vec::new();
    if i.target().name() != f.source().name() || s.target().name() != f.source().name() || s.source().name() != f.target().name() {
        return Err(ValidationError::SplitExact(vec![format!(
            "not composable: i: {} → {}, f: {} → {}, s: {} → {}",
            i.source().name(),
            i.target().name(),
            f.source().name(),
            f.target().name(),
            s.source().name(),
            s.target().name()
        )]));
    }
    if !f.matrix().mul(s.matrix()).is_identity() {
        failures.push("split law fails: f∘s ≠ id".to_string());
    }
    let rank_i = i.matrix().rank();
    if rank_i < i.source().dim() {
        failures.push(format!("i is not injective (rank {rank_i} < {})", i.source().dim()));
    }
    let ker_f = f.matrix().nullspace().len();
    let fi_zero = f.matrix().mul(i.matrix()).is_zero();
    if !fi_zero || rank_i != ker_f {
        failures.push(format!("exactness fails: rank(im i) = {rank_i}, dim(ker f) = {ker_f}, f∘i = 0: {fi_zero}"));
    }
    if !failures.is_empty() {
        return Err(ValidationError::SplitExact(failures));
    }
    let cols: Vec<Vector> = (0..i.source().dim()).map(|j| i.matrix().column(j)).collect();
    let ideal = SpanSolver::new(i.target().dim(), &cols).expect("injective i");
    Ok(SplitExact { name: name.to_string(), i: i.clone(), f: f.clone(), s: s.clone(), ideal })
}

impl SplitExact {
    pub fn name(&self) -> &str {
        &self.name
    }

    /// m − s(f(m)), which lies in i(J).
    pub fn complement(&self, m: &[Scalar]) -> Vector {
        sub_vectors(m, &self.s.apply(&self.f.apply(m)))
    }

    /// u(m) = i⁻¹(m − s f m), the linear projection onto the ideal.
    pub fn projection(&self, m: &[Scalar]) -> Vector {
        self.ideal.coordinates_unchecked(&self.complement(m))
    }

    pub fn projection_matrix(&self) -> QMatrix {
        let d = self.i.target().dim();
        let cols: Vec<Vector> = (0..d).map(|k| {
            let mut e = vec![Scalar::zero(); d];
            e[k] = Scalar::one();
            self.projection(&e)
        }).collect();
        QMatrix::from_columns(self.i.source().dim(), &cols)
    }

    /// Coordinates in J of an element of i(J), or `None` if outside it.
    pub fn ideal_coordinates(&self, m: &[Scalar]) -> Option<Vector> {
        self.ideal.coordinates(m)
    }
}
