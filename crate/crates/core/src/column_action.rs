//! Recovering a module action on A^n from an action on M_n(A) that fixes the corner.

use crate::algebra::{trivial_rep, GAlgebra, Vector};
use crate::error::ValidationError;
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::QMatrix;

#[derive(Clone, Debug)]
pub struct ColumnAction {
    /// Per group element, the action on the first column A^n (n·dim A square).
    pub gamma: Vec<QMatrix>,
    /// Rank of T ↦ (left multiplication by T on the first column); full rank
    /// means Γ is determined by γ.
    pub determining_rank: usize,
}

fn column_indices(n: usize, d: usize) -> Vec<usize> {
    (0..n).flat_map(|r| (0..d).map(move |j| r * n * d + j)).collect()
}

/// Left multiplication by basis element t of M_n(A), restricted to the first column.
fn left_mult_on_column(amp: &GAlgebra, cols: &[usize], t: usize) -> QMatrix {
    let pos: std::collections::HashMap<usize, usize> = cols.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let mut m = QMatrix::zeros(cols.len(), cols.len());
    for (k, &c) in cols.iter().enumerate() {
        for (out, v) in amp.basis_product(t, c) {
            if let Some(&row) = pos.get(out) {
                m.set(row, k, v.clone());
            }
        }
    }
    m
}

pub fn derive_column_action(base: &GAlgebra, n: usize, big_action: &[QMatrix]) -> Result<ColumnAction, ValidationError> {
    let group = base.group();
    let d = base.dim();
    let err = |m: String| ValidationError::ColumnAction(m);
    let amp = GAlgebra::matrix_algebra("M_n(A)", n, base, &trivial_rep(group, n))?;
    let dim = amp.dim();
    let probe = GAlgebra::from_parts("M_n(A)", amp.basis().to_vec(), group.clone(), amp.table().clone(), None, big_action.to_vec(), None);
    probe.check_action()?;

    for g in group.elements() {
        for j in 0..d {
            let image = big_action[g].column(j);
            if image[d..].iter().any(|x| !num_traits::Zero::is_zero(x)) {
                return Err(err(format!("group element {g} moves e11⊗{} out of the corner", base.basis()[j])));
            }
        }
    }

    let cols = column_indices(n, d);
    let gamma: Vec<QMatrix> = group
        .elements()
        .map(|g| big_action[g].submatrix(&cols, &cols))
        .collect();
    for g in group.elements() {
        let outside: Vec<usize> = (0..dim).filter(|c| !cols.contains(c)).collect();
        if !big_action[g].submatrix(&outside, &cols).is_zero() {
            return Err(err(format!("group element {g} does not preserve the first column")));
        }
    }

    let mults: Vec<QMatrix> = (0..dim).map(|t| left_mult_on_column(&amp, &cols, t)).collect();
    let stacked: Vec<Vector> = mults.iter().map(|m| m.data().to_vec()).collect();
    let system = Matrix::from_columns(cols.len() * cols.len(), &stacked);
    let determining_rank = system.rank();
    if determining_rank < dim {
        return Err(err(format!("left multiplication on the first column has rank {determining_rank} < {dim}")));
    }
    for g in group.elements() {
        let gi = gamma[g].inverse().ok_or_else(|| err(format!("restriction at {g} is singular")))?;
        for t in 0..dim {
            let target = gamma[g].mul(&mults[t]).mul(&gi);
            let rebuilt: Vec<Scalar> = system
                .solve(target.data())
                .ok_or_else(|| err(format!("ad(γ_{g}) of basis {t} is not a left multiplication")))?;
            if rebuilt != big_action[g].column(t) {
                return Err(err(format!("reconstructed action differs from the input at g = {g}, basis {t}")));
            }
        }
    }
    Ok(ColumnAction { gamma, determining_rank })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use num_traits::{One, Zero};
    use std::sync::Arc;

    fn c2() -> GAlgebra {
        GAlgebra::complex(Arc::new(FiniteGroup::cyclic(2)))
    }

    #[test]
    fn n_one_returns_gamma() {
        let c = c2();
        let ca = derive_column_action(&c, 1, c.actions()).unwrap();
        assert_eq!(ca.gamma, c.actions().to_vec());
    }

    #[test]
    fn conjugation_by_diagonal_unitary() {
        let c = c2();
        let u = QMatrix::from_rows(vec![vec![Scalar::one(), Scalar::zero()], vec![Scalar::zero(), -Scalar::one()]]);
        let m2 = GAlgebra::matrix_algebra("M2", 2, &c, &[QMatrix::identity(2), u.clone()]).unwrap();
        let ca = derive_column_action(&c, 2, m2.actions()).unwrap();
        assert_eq!(ca.gamma[1], u);
        assert_eq!(ca.determining_rank, 4);
    }

    #[test]
    fn corner_moving_action_is_rejected() {
        let c = c2();
        let swap = QMatrix::from_rows(vec![vec![Scalar::zero(), Scalar::one()], vec![Scalar::one(), Scalar::zero()]]);
        let m2 = GAlgebra::matrix_algebra("M2", 2, &c, &[QMatrix::identity(2), swap]).unwrap();
        assert!(matches!(derive_column_action(&c, 2, m2.actions()), Err(ValidationError::ColumnAction(_))));
    }
}
