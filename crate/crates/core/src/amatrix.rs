//! Square matrices with entries in the unitization Y⁺ of a G-algebra Y.
//!
//! Each entry is stored as `dim(Y) + 1` coordinates, the adjoined unit last.
//! The G-action on M_N(Y⁺) is ad(u_g) ⊗ β⁺_g for a scalar representation u.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebra::{GAlgebra, Presentation};
use crate::matrix::Matrix;
use crate::path::{Coeff, Endpoint, PathRing};
use crate::scalar::Scalar;
use crate::QMatrix;

#[derive(Clone)]
pub struct AlgMatrix<R> {
    algebra: Arc<GAlgebra>,
    n: usize,
    data: Vec<R>,
}

impl<R: PartialEq> PartialEq for AlgMatrix<R> {
    fn eq(&self, o: &Self) -> bool {
        self.n == o.n && self.algebra.name() == o.algebra.name() && self.data == o.data
    }
}

/// Accumulates x·y into `out` for x, y ∈ Y⁺ given by their nonzero coordinates.
fn mul_add_entry<R: Coeff>(alg: &GAlgebra, out: &mut [R], x: &[(usize, &R)], y: &[(usize, &R)]) {
    let d = alg.dim();
    for &(i, xi) in x {
        for &(j, yj) in y {
            let c = xi.mul_ref(yj);
            if i == d {
                out[j].add_mul(&c, &R::one());
            } else if j == d {
                out[i].add_mul(&c, &R::one());
            } else {
                for (k, v) in alg.basis_product(i, j) {
                    out[*k] = out[*k].add_ref(&c.scale_by(v));
                }
            }
        }
    }
}

/// x·y in Y⁺ for coefficient vectors of length dim(Y) + 1.
pub fn unitized_product<R: Coeff>(alg: &GAlgebra, x: &[R], y: &[R]) -> Vec<R> {
    let mut out = vec![R::zero(); alg.dim() + 1];
    let nx: Vec<(usize, &R)> = x.iter().enumerate().filter(|(_, v)| !v.is_zero()).collect();
    let ny: Vec<(usize, &R)> = y.iter().enumerate().filter(|(_, v)| !v.is_zero()).collect();
    mul_add_entry(alg, &mut out, &nx, &ny);
    out
}

impl<R: Coeff> AlgMatrix<R> {
    pub fn zeros(algebra: &Arc<GAlgebra>, n: usize) -> Self {
        let stride = algebra.dim() + 1;
        AlgMatrix { algebra: algebra.clone(), n, data: vec![R::zero(); n * n * stride] }
    }

    pub fn identity(algebra: &Arc<GAlgebra>, n: usize) -> Self {
        Self::from_scalars(algebra, &Matrix::identity(n))
    }

    /// Entries λ_ij · 1⁺.
    pub fn from_scalars(algebra: &Arc<GAlgebra>, m: &Matrix<R>) -> Self {
        assert!(m.is_square());
        let mut out = Self::zeros(algebra, m.rows());
        let d = algebra.dim();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.entry_mut(i, j)[d] = m.get(i, j).clone();
            }
        }
        out
    }

    /// A 1×1 matrix holding the given element of Y (no unit part).
    pub fn from_element(algebra: &Arc<GAlgebra>, y: &[R]) -> Self {
        let mut out = Self::zeros(algebra, 1);
        out.entry_mut(0, 0)[..y.len()].clone_from_slice(y);
        out
    }

    pub fn from_fn(algebra: &Arc<GAlgebra>, n: usize, mut f: impl FnMut(usize, usize) -> Vec<R>) -> Self {
        let mut out = Self::zeros(algebra, n);
        for i in 0..n {
            for j in 0..n {
                let v = f(i, j);
                assert_eq!(v.len(), algebra.dim() + 1, "entry length");
                out.entry_mut(i, j).clone_from_slice(&v);
            }
        }
        out
    }

    pub fn algebra(&self) -> &Arc<GAlgebra> {
        &self.algebra
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn stride(&self) -> usize {
        self.algebra.dim() + 1
    }

    pub fn entry(&self, i: usize, j: usize) -> &[R] {
        let s = self.stride();
        let at = (i * self.n + j) * s;
        &self.data[at..at + s]
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut [R] {
        let s = self.stride();
        let at = (i * self.n + j) * s;
        &mut self.data[at..at + s]
    }

    pub fn entry_is_zero(&self, i: usize, j: usize) -> bool {
        self.entry(i, j).iter().all(R::is_zero)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(R::is_zero)
    }

    /// The image in M_N(ℂ) under Y⁺ → ℂ.
    pub fn scalar_part(&self) -> Matrix<R> {
        let d = self.algebra.dim();
        Matrix::from_fn(self.n, self.n, |i, j| self.entry(i, j)[d].clone())
    }

    /// The entries with their unit parts removed.
    pub fn algebra_part(&self) -> Self {
        let mut out = self.clone();
        let d = self.algebra.dim();
        for i in 0..self.n {
            for j in 0..self.n {
                out.entry_mut(i, j)[d] = R::zero();
            }
        }
        out
    }

    /// Whether every entry lies in Y.
    pub fn is_in_algebra(&self) -> bool {
        self.scalar_part().is_zero()
    }

    /// Whether every entry is a multiple of the adjoined unit.
    pub fn is_scalar(&self) -> bool {
        let d = self.algebra.dim();
        (0..self.n).all(|i| (0..self.n).all(|j| self.entry(i, j)[..d].iter().all(R::is_zero)))
    }

    fn zip(&self, o: &Self, f: impl Fn(&R, &R) -> R) -> Self {
        assert_eq!(self.n, o.n, "matrix sizes");
        assert_eq!(self.stride(), o.stride(), "entry algebras");
        AlgMatrix { algebra: self.algebra.clone(), n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| f(a, b)).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, R::add_ref)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, R::sub_ref)
    }

    pub fn neg(&self) -> Self {
        AlgMatrix { algebra: self.algebra.clone(), n: self.n, data: self.data.iter().map(|x| -x.clone()).collect() }
    }

    pub fn scale(&self, x: &R) -> Self {
        AlgMatrix { algebra: self.algebra.clone(), n: self.n, data: self.data.iter().map(|v| v.mul_ref(x)).collect() }
    }

    fn nonzeros(&self) -> Vec<Vec<(usize, &R)>> {
        let s = self.stride();
        self.data.chunks(s).map(|e| e.iter().enumerate().filter(|(_, v)| !v.is_zero()).collect()).collect()
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n, "matrix sizes");
        assert_eq!(self.stride(), o.stride(), "entry algebras");
        let n = self.n;
        let s = self.stride();
        let (a, b) = (self.nonzeros(), o.nonzeros());
        let mut out = Self::zeros(&self.algebra, n);
        for i in 0..n {
            for k in 0..n {
                let x = &a[i * n + k];
                if x.is_empty() {
                    continue;
                }
                for j in 0..n {
                    let y = &b[k * n + j];
                    if y.is_empty() {
                        continue;
                    }
                    let at = (i * n + j) * s;
                    mul_add_entry(&self.algebra, &mut out.data[at..at + s], x, y);
                }
            }
        }
        out
    }

    pub fn is_idempotent(&self) -> bool {
        self.mul(self) == *self
    }

    /// m·P for a scalar matrix m.
    pub fn left_scalar_mul(&self, m: &Matrix<R>) -> Self {
        assert_eq!(m.cols(), self.n);
        let n = self.n;
        let mut out = Self::zeros(&self.algebra, n);
        for i in 0..n {
            for k in 0..n {
                let c = m.get(i, k);
                if c.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let src: Vec<R> = self.entry(k, j).to_vec();
                    let dst = out.entry_mut(i, j);
                    for (t, v) in src.iter().enumerate() {
                        if !v.is_zero() {
                            dst[t].add_mul(c, v);
                        }
                    }
                }
            }
        }
        out
    }

    /// P·m for a scalar matrix m.
    pub fn right_scalar_mul(&self, m: &Matrix<R>) -> Self {
        assert_eq!(m.rows(), self.n);
        let n = self.n;
        let mut out = Self::zeros(&self.algebra, n);
        for i in 0..n {
            for k in 0..n {
                if self.entry_is_zero(i, k) {
                    continue;
                }
                let src: Vec<R> = self.entry(i, k).to_vec();
                for j in 0..n {
                    let c = m.get(k, j);
                    if c.is_zero() {
                        continue;
                    }
                    let dst = out.entry_mut(i, j);
                    for (t, v) in src.iter().enumerate() {
                        if !v.is_zero() {
                            dst[t].add_mul(v, c);
                        }
                    }
                }
            }
        }
        out
    }

    /// β⁺_g applied entrywise.
    pub fn act_entries(&self, g: usize) -> Self {
        let a = self.algebra.action(g);
        if a.is_identity() {
            return self.clone();
        }
        let d = self.algebra.dim();
        let mut out = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                let e = self.entry(i, j);
                let moved: Vec<R> = (0..d)
                    .map(|r| {
                        let mut acc = R::zero();
                        for (c, v) in e[..d].iter().enumerate() {
                            let m = a.get(r, c);
                            if !v.is_zero() && !m.is_zero() {
                                acc = acc.add_ref(&v.scale_by(m));
                            }
                        }
                        acc
                    })
                    .collect();
                out.entry_mut(i, j)[..d].clone_from_slice(&moved);
            }
        }
        out
    }

    /// u_g β⁺_g(P) u_g⁻¹.
    pub fn act(&self, g: usize, u: &QMatrix, u_inv: &QMatrix) -> Self {
        let lift = |m: &QMatrix| m.map(|x| R::from_scalar(x));
        self.act_entries(g).left_scalar_mul(&lift(u)).right_scalar_mul(&lift(u_inv))
    }

    pub fn is_invariant(&self, rep: &[QMatrix], rep_inv: &[QMatrix]) -> bool {
        rep.iter().zip(rep_inv).enumerate().all(|(g, (u, ui))| self.act(g, u, ui) == *self)
    }

    /// φ⁺ entrywise for a linear map given by a (target.dim × source.dim) matrix.
    pub fn map_entries(&self, target: &Arc<GAlgebra>, matrix: &QMatrix) -> Self {
        let d = self.algebra.dim();
        let e = target.dim();
        assert_eq!((matrix.rows(), matrix.cols()), (e, d), "map shape");
        let mut out = AlgMatrix::<R>::zeros(target, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let src = self.entry(i, j);
                let dst = out.entry_mut(i, j);
                for (c, v) in src[..d].iter().enumerate() {
                    if v.is_zero() {
                        continue;
                    }
                    for (r, slot) in dst[..e].iter_mut().enumerate() {
                        let m = matrix.get(r, c);
                        if !m.is_zero() {
                            *slot = slot.add_ref(&v.scale_by(m));
                        }
                    }
                }
                dst[e] = src[d].clone();
            }
        }
        out
    }

    pub fn direct_sum(&self, o: &Self) -> Self {
        assert_eq!(self.stride(), o.stride(), "entry algebras");
        let (n, m) = (self.n, o.n);
        let mut out = Self::zeros(&self.algebra, n + m);
        for i in 0..n {
            for j in 0..n {
                out.entry_mut(i, j).clone_from_slice(self.entry(i, j));
            }
        }
        for i in 0..m {
            for j in 0..m {
                out.entry_mut(n + i, n + j).clone_from_slice(o.entry(i, j));
            }
        }
        out
    }

    /// The principal submatrix on the given coordinates, in the given order.
    pub fn restrict(&self, coords: &[usize]) -> Self {
        let k = coords.len();
        let mut out = Self::zeros(&self.algebra, k);
        for (a, &i) in coords.iter().enumerate() {
            for (b, &j) in coords.iter().enumerate() {
                out.entry_mut(a, b).clone_from_slice(self.entry(i, j));
            }
        }
        out
    }

    /// Blocks [[a, b], [c, d]] of equal size.
    pub fn from_quadrants(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let n = a.n;
        let mut out = Self::zeros(&a.algebra, 2 * n);
        for (blk, (r0, c0)) in [(a, (0, 0)), (b, (0, n)), (c, (n, 0)), (d, (n, n))] {
            for i in 0..n {
                for j in 0..n {
                    out.entry_mut(r0 + i, c0 + j).clone_from_slice(blk.entry(i, j));
                }
            }
        }
        out
    }

    /// π_k⁺ entrywise: b + λ ↦ π_k(b) + λ I, an (N n_k)-square matrix with
    /// row index i·n_k + p. The last "block" (index = number of blocks) is the
    /// ℂ quotient, i.e. the scalar part.
    pub fn block(&self, p: &Presentation, k: usize) -> Matrix<R> {
        if k == p.blocks.len() {
            return self.scalar_part();
        }
        let d = self.algebra.dim();
        let nk = p.blocks[k];
        let off = p.offset(k);
        let n = self.n;
        let mut out = Matrix::zeros(n * nk, n * nk);
        for i in 0..n {
            for j in 0..n {
                let e = self.entry(i, j);
                for a in 0..nk {
                    for b in 0..nk {
                        let row = off + a * nk + b;
                        let mut acc = R::zero();
                        for (c, v) in e[..d].iter().enumerate() {
                            let m = p.iso.get(row, c);
                            if !v.is_zero() && !m.is_zero() {
                                acc = acc.add_ref(&v.scale_by(m));
                            }
                        }
                        if a == b {
                            acc = acc.add_ref(&e[d]);
                        }
                        out.set(i * nk + a, j * nk + b, acc);
                    }
                }
            }
        }
        out
    }

    /// Inverse of [`AlgMatrix::block`] over all blocks plus the ℂ quotient.
    pub fn from_blocks(algebra: &Arc<GAlgebra>, p: &Presentation, n: usize, blocks: &[Matrix<R>]) -> Self {
        assert_eq!(blocks.len(), p.blocks.len() + 1, "one matrix per block plus the scalar quotient");
        let d = algebra.dim();
        let scalar = &blocks[p.blocks.len()];
        let mut out = Self::zeros(algebra, n);
        for i in 0..n {
            for j in 0..n {
                let lambda = scalar.get(i, j).clone();
                // block coordinates of the Y-part: block entry minus λ on the diagonal
                let mut coords = Vec::with_capacity(d);
                for (k, &nk) in p.blocks.iter().enumerate() {
                    for a in 0..nk {
                        for b in 0..nk {
                            let mut v = blocks[k].get(i * nk + a, j * nk + b).clone();
                            if a == b {
                                v = v.sub_ref(&lambda);
                            }
                            coords.push(v);
                        }
                    }
                }
                let dst = out.entry_mut(i, j);
                for (r, slot) in dst[..d].iter_mut().enumerate() {
                    let mut acc = R::zero();
                    for (c, v) in coords.iter().enumerate() {
                        let m = p.iso_inverse.get(r, c);
                        if !v.is_zero() && !m.is_zero() {
                            acc = acc.add_ref(&v.scale_by(m));
                        }
                    }
                    *slot = acc;
                }
                dst[d] = lambda;
            }
        }
        out
    }

    pub fn coords(&self) -> &[R] {
        &self.data
    }
}

impl AlgMatrix<Scalar> {
    pub fn lift(&self) -> AlgMatrix<PathRing> {
        AlgMatrix { algebra: self.algebra.clone(), n: self.n, data: self.data.iter().map(|x| PathRing::constant(x.clone())).collect() }
    }

    /// Whether this is a diagonal matrix of 0s and adjoined units.
    pub fn is_standard_pattern(&self) -> bool {
        if !self.is_scalar() {
            return false;
        }
        let m = self.scalar_part();
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let v = m.get(i, j);
                if i == j {
                    v.is_zero() || v.is_one()
                } else {
                    v.is_zero()
                }
            })
        })
    }
}

impl AlgMatrix<PathRing> {
    pub fn at(&self, end: Endpoint) -> AlgMatrix<Scalar> {
        AlgMatrix { algebra: self.algebra.clone(), n: self.n, data: self.data.iter().map(|x| x.at(end)).collect() }
    }
}

impl<R: Coeff + fmt::Display> fmt::Debug for AlgMatrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "AlgMatrix over {}⁺, size {}", self.algebra.name(), self.n)?;
        let basis = self.algebra.basis();
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n)
                .map(|j| {
                    let terms: Vec<String> = self
                        .entry(i, j)
                        .iter()
                        .enumerate()
                        .filter(|(_, v)| !v.is_zero())
                        .map(|(c, v)| format!("({v})·{}", basis.get(c).map(String::as_str).unwrap_or("1+")))
                        .collect();
                    if terms.is_empty() {
                        "0".to_string()
                    } else {
                        terms.join(" + ")
                    }
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::trivial_rep;
    use crate::group::FiniteGroup;

    fn m2_z2() -> Arc<GAlgebra> {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let c = GAlgebra::complex(g);
        let s = QMatrix::from_rows(vec![vec![Scalar::one(), Scalar::zero()], vec![Scalar::zero(), -Scalar::one()]]);
        Arc::new(GAlgebra::matrix_algebra("M2", 2, &c, &[QMatrix::identity(2), s]).unwrap())
    }

    #[test]
    fn unit_behaves_as_identity() {
        let a = m2_z2();
        let mut x = AlgMatrix::<Scalar>::zeros(&a, 2);
        x.entry_mut(0, 1)[1] = Scalar::int(3);
        x.entry_mut(1, 1)[4] = Scalar::int(2);
        let id = AlgMatrix::identity(&a, 2);
        assert_eq!(id.mul(&x), x);
        assert_eq!(x.mul(&id), x);
    }

    #[test]
    fn blocks_round_trip_and_multiply() {
        let a = m2_z2();
        let p = a.presentation().unwrap().clone();
        let mut x = AlgMatrix::<Scalar>::zeros(&a, 2);
        x.entry_mut(0, 0)[0] = Scalar::one();
        x.entry_mut(0, 1)[2] = Scalar::frac(1, 2);
        x.entry_mut(1, 0)[4] = Scalar::i();
        x.entry_mut(1, 1)[3] = Scalar::int(-1);
        let blocks: Vec<QMatrix> = (0..=p.blocks.len()).map(|k| x.block(&p, k)).collect();
        assert_eq!(AlgMatrix::from_blocks(&a, &p, 2, &blocks), x);
        let xx = x.mul(&x);
        for k in 0..=p.blocks.len() {
            assert_eq!(xx.block(&p, k), blocks[k].mul(&blocks[k]));
        }
    }

    #[test]
    fn invariance_under_adjoint_action() {
        let a = m2_z2();
        let g = a.group().clone();
        let rep = trivial_rep(&g, 1);
        let e11 = AlgMatrix::from_element(&a, &a.basis_vector(0));
        assert!(e11.is_invariant(&rep, &rep));
        let e12 = AlgMatrix::from_element(&a, &a.basis_vector(1));
        assert!(!e12.is_invariant(&rep, &rep));
    }

    #[test]
    fn map_entries_keeps_unit() {
        let a = m2_z2();
        let zero = QMatrix::zeros(a.dim(), a.dim());
        let x = AlgMatrix::<Scalar>::identity(&a, 2).add(&AlgMatrix::from_fn(&a, 2, |_, _| {
            let mut v = a.basis_vector(0);
            v.push(Scalar::zero());
            v
        }));
        assert_eq!(x.map_entries(&a, &zero), AlgMatrix::identity(&a, 2));
    }
}
