//! Homotopies A → B[t] in the trigonometric path model.

use std::sync::Arc;

use num_traits::Zero;

use crate::algebra::GAlgebra;
use crate::amatrix::unitized_product;
use crate::error::{ValidationError, WordError};
use crate::hom::GHom;
use crate::matrix::Matrix;
use crate::path::{Endpoint, PathRing};
use crate::scalar::Scalar;

/// An equivariant homomorphism from A into B ⊗ ℚ(i)[c, s]/(c² + s² − 1).
#[derive(Clone, Debug)]
pub struct Homotopy {
    name: String,
    source: Arc<GAlgebra>,
    target: Arc<GAlgebra>,
    matrix: Matrix<PathRing>,
    ends: [Arc<GHom>; 2],
}

fn path_product(alg: &GAlgebra, x: &[PathRing], y: &[PathRing]) -> Vec<PathRing> {
    let pad = |v: &[PathRing]| v.iter().cloned().chain([PathRing::zero()]).collect::<Vec<_>>();
    let mut out = unitized_product(alg, &pad(x), &pad(y));
    out.pop();
    out
}

impl Homotopy {
    /// Validates multiplicativity and equivariance symbolically, then both endpoints.
    pub fn new(name: &str, source: Arc<GAlgebra>, target: Arc<GAlgebra>, matrix: Matrix<PathRing>) -> Result<Homotopy, ValidationError> {
        let bad = |detail: String| ValidationError::Homotopy(format!("{name}: {detail}"));
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(bad(format!("matrix must be {}×{}", target.dim(), source.dim())));
        }
        if source.group() != target.group() {
            return Err(ValidationError::GroupMismatch(format!("{name}: {} vs {}", source.name(), target.name())));
        }
        let images: Vec<Vec<PathRing>> = (0..source.dim()).map(|j| matrix.column(j)).collect();
        for i in 0..source.dim() {
            for j in 0..source.dim() {
                let prod: Vec<PathRing> = source
                    .mul(&source.basis_vector(i), &source.basis_vector(j))
                    .iter()
                    .map(|x| PathRing::constant(x.clone()))
                    .collect();
                if matrix.mul_vec(&prod) != path_product(&target, &images[i], &images[j]) {
                    return Err(bad(format!("not multiplicative at basis pair ({i}, {j})")));
                }
            }
        }
        let lift = |m: &Matrix<Scalar>| m.map(|x| PathRing::constant(x.clone()));
        for g in source.group().elements() {
            if matrix.mul(&lift(source.action(g))) != lift(target.action(g)).mul(&matrix) {
                return Err(bad(format!("not equivariant at group element {g}")));
            }
        }
        let end = |e: Endpoint| -> Result<Arc<GHom>, ValidationError> {
            let m = matrix.map(|x| x.at(e));
            Ok(Arc::new(GHom::new(&format!("{name}@{}", e.index()), source.clone(), target.clone(), m)?))
        };
        let ends = [end(Endpoint::Start)?, end(Endpoint::End)?];
        Ok(Homotopy { name: name.to_string(), source, target, matrix, ends })
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

    pub fn matrix(&self) -> &Matrix<PathRing> {
        &self.matrix
    }

    pub fn endpoint(&self, end: Endpoint) -> &Arc<GHom> {
        &self.ends[end.index() as usize]
    }

    /// Evaluation at t = 0 or t = 1 (in units of π/2); other parameters are refused.
    pub fn evaluate(&self, t: u32) -> Result<&Arc<GHom>, WordError> {
        Endpoint::from_index(t).map(|e| self.endpoint(e)).ok_or_else(|| WordError::NotEndpoint(self.name.clone()))
    }
}
