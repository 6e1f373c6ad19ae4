//! Finite-dimensional algebras over ℚ(i) with a finite group acting by automorphisms.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::ValidationError;
use crate::field::Ring;
use crate::group::FiniteGroup;
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::QMatrix;

pub type Vector = Vec<Scalar>;

/// Sparse product table: entry `i * dim + j` lists the nonzero coordinates of b_i b_j.
pub type ProductTable = Vec<Vec<(usize, Scalar)>>;

/// An isomorphism onto ⊕_k M_{n_k}(ℚ(i)), with optional implementing representations.
#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    pub blocks: Vec<usize>,
    /// Rows are block coordinates (block k, entry (p, q)) in order; columns the algebra basis.
    pub iso: QMatrix,
    pub iso_inverse: QMatrix,
    /// Per block, per group element, an invertible w with π_k(β_g(b)) = w π_k(b) w⁻¹.
    pub reps: Vec<Option<Vec<QMatrix>>>,
}

impl Presentation {
    pub fn offset(&self, block: usize) -> usize {
        self.blocks[..block].iter().map(|n| n * n).sum()
    }

    pub fn total_dim(&self) -> usize {
        self.blocks.iter().map(|n| n * n).sum()
    }

    /// π_k(x) as an n_k × n_k matrix.
    pub fn block_of(&self, block: usize, x: &[Scalar]) -> QMatrix {
        let n = self.blocks[block];
        let off = self.offset(block);
        let mut m = QMatrix::zeros(n, n);
        for p in 0..n {
            for q in 0..n {
                let row = off + p * n + q;
                let mut acc = Scalar::zero();
                for (c, v) in x.iter().enumerate() {
                    if !v.is_zero() {
                        acc.add_mul(self.iso.get(row, c), v);
                    }
                }
                m.set(p, q, acc);
            }
        }
        m
    }

    /// The algebra element with the given block components.
    pub fn from_blocks(&self, blocks: &[QMatrix]) -> Vector {
        let mut coords = Vec::with_capacity(self.total_dim());
        for (k, m) in blocks.iter().enumerate() {
            assert_eq!(m.rows(), self.blocks[k], "block size");
            coords.extend(m.data().iter().cloned());
        }
        self.iso_inverse.mul_vec(&coords)
    }
}

#[derive(Clone, Debug)]
pub struct GAlgebra {
    name: String,
    basis: Vec<String>,
    group: Arc<FiniteGroup>,
    table: ProductTable,
    unit: Option<Vector>,
    action: Vec<QMatrix>,
    presentation: Option<Presentation>,
}

/// How the equivariant corner of a matrix algebra acts: γ_g = ad(w_g).
pub type MatrixRep = Vec<QMatrix>;

pub fn check_rep(group: &FiniteGroup, n: usize, w: &[QMatrix]) -> Result<Vec<QMatrix>, ValidationError> {
    if w.len() != group.order() {
        return Err(ValidationError::BadGamma { g: w.len(), reason: format!("expected {} matrices", group.order()) });
    }
    let mut inverses = Vec::with_capacity(w.len());
    for (g, m) in w.iter().enumerate() {
        if m.rows() != n || m.cols() != n {
            return Err(ValidationError::BadGamma { g, reason: format!("not {n}×{n}") });
        }
        inverses.push(m.inverse().ok_or(ValidationError::BadGamma { g, reason: "not invertible".into() })?);
    }
    for g in group.elements() {
        for h in group.elements() {
            if w[g].mul(&w[h]) != w[group.mul(g, h)] {
                return Err(ValidationError::BadGamma {
                    g,
                    reason: format!("w_g w_h ≠ w_gh for h = {h}"),
                });
            }
        }
    }
    Ok(inverses)
}

pub fn trivial_rep(group: &FiniteGroup, n: usize) -> MatrixRep {
    vec![QMatrix::identity(n); group.order()]
}

/// Conjugation by w on M_n, as an n² × n² matrix on row-major matrix units.
pub fn adjoint_matrix(w: &QMatrix, w_inv: &QMatrix) -> QMatrix {
    w.kron(&w_inv.transpose())
}

impl GAlgebra {
    /// Builds and fully validates an algebra.
    ///
    /// When `unit` is `None` a two-sided unit is searched for; `action` may be
    /// empty for the trivial action.
    pub fn new(
        name: &str,
        basis: Vec<String>,
        group: Arc<FiniteGroup>,
        table: ProductTable,
        unit: Option<Vector>,
        action: Vec<QMatrix>,
        presentation: Option<Presentation>,
    ) -> Result<GAlgebra, ValidationError> {
        let dim = basis.len();
        if table.len() != dim * dim || table.iter().flatten().any(|(k, _)| *k >= dim) {
            return Err(ValidationError::Shape {
                context: name.into(),
                detail: format!("product table must have {dim}×{dim} entries over {dim} coordinates"),
            });
        }
        let action = if action.is_empty() { vec![QMatrix::identity(dim); group.order()] } else { action };
        let mut alg = GAlgebra::from_parts(name, basis, group, table, None, action, None);
        alg.check_associative()?;
        alg.check_action()?;
        alg.unit = match unit {
            Some(u) => {
                alg.check_unit(&u)?;
                Some(u)
            }
            None => alg.find_unit(),
        };
        alg.check_quadratik()?;
        if let Some(p) = presentation {
            alg.check_presentation(&p)?;
            alg.presentation = Some(p);
        }
        Ok(alg)
    }

    /// Assembles an algebra without validation; for outputs of verified constructors.
    pub(crate) fn from_parts(
        name: &str,
        basis: Vec<String>,
        group: Arc<FiniteGroup>,
        table: ProductTable,
        unit: Option<Vector>,
        action: Vec<QMatrix>,
        presentation: Option<Presentation>,
    ) -> GAlgebra {
        GAlgebra { name: name.to_string(), basis, group, table, unit, action, presentation }
    }

    /// ℂ with the (necessarily trivial) action of `group`.
    pub fn complex(group: Arc<FiniteGroup>) -> GAlgebra {
        let order = group.order();
        let table = vec![vec![(0, Scalar::one())]];
        let pres = Presentation {
            blocks: vec![1],
            iso: QMatrix::identity(1),
            iso_inverse: QMatrix::identity(1),
            reps: vec![Some(trivial_rep(&group, 1))],
        };
        GAlgebra::from_parts(
            "C",
            vec!["1".into()],
            group,
            table,
            Some(vec![Scalar::one()]),
            vec![QMatrix::identity(1); order],
            Some(pres),
        )
    }

    /// (M_n(ℂ), ad w) ⊗ (A, α); basis E_rc ⊗ a_j at index (r n + c) dim A + j.
    pub fn matrix_algebra(name: &str, n: usize, base: &GAlgebra, w: &[QMatrix]) -> Result<GAlgebra, ValidationError> {
        if n == 0 {
            return Err(ValidationError::Shape { context: name.into(), detail: "matrix size must be ≥ 1".into() });
        }
        let group = base.group.clone();
        let w_inv = check_rep(&group, n, w)?;
        let d = base.dim();
        let dim = n * n * d;
        let idx = |r: usize, c: usize, j: usize| (r * n + c) * d + j;
        let mut table: ProductTable = vec![Vec::new(); dim * dim];
        for r in 0..n {
            for c in 0..n {
                for c2 in 0..n {
                    for i in 0..d {
                        for j in 0..d {
                            let prod: Vec<(usize, Scalar)> =
                                base.basis_product(i, j).iter().map(|(k, v)| (idx(r, c2, *k), v.clone())).collect();
                            table[idx(r, c, i) * dim + idx(c, c2, j)] = prod;
                        }
                    }
                }
            }
        }
        let action = group
            .elements()
            .map(|g| adjoint_matrix(&w[g], &w_inv[g]).kron(&base.action[g]))
            .collect();
        let unit = base.unit.as_ref().map(|u| {
            let mut v = vec![Scalar::zero(); dim];
            for r in 0..n {
                for (j, x) in u.iter().enumerate() {
                    v[idx(r, r, j)] = x.clone();
                }
            }
            v
        });
        let basis = (0..n)
            .flat_map(|r| (0..n).flat_map(move |c| (0..d).map(move |j| (r, c, j))))
            .map(|(r, c, j)| format!("E{}{}*{}", r + 1, c + 1, base.basis[j]))
            .collect();
        let presentation = base.presentation.as_ref().map(|p| matrix_presentation(n, w, p, d));
        Ok(GAlgebra::from_parts(name, basis, group, table, unit, action, presentation))
    }

    pub fn direct_sum(name: &str, a: &GAlgebra, b: &GAlgebra) -> Result<GAlgebra, ValidationError> {
        if a.group != b.group {
            return Err(ValidationError::GroupMismatch(format!("{} vs {}", a.name, b.name)));
        }
        let (da, db) = (a.dim(), b.dim());
        let dim = da + db;
        let mut table: ProductTable = vec![Vec::new(); dim * dim];
        for i in 0..da {
            for j in 0..da {
                table[i * dim + j] = a.basis_product(i, j).to_vec();
            }
        }
        for i in 0..db {
            for j in 0..db {
                table[(da + i) * dim + da + j] =
                    b.basis_product(i, j).iter().map(|(k, v)| (da + k, v.clone())).collect();
            }
        }
        let action = a.group.elements().map(|g| a.action[g].direct_sum(&b.action[g])).collect();
        let unit = match (&a.unit, &b.unit) {
            (Some(x), Some(y)) => Some(x.iter().chain(y).cloned().collect()),
            _ => None,
        };
        let basis = a
            .basis
            .iter()
            .map(|s| format!("{s}@1"))
            .chain(b.basis.iter().map(|s| format!("{s}@2")))
            .collect();
        let presentation = match (&a.presentation, &b.presentation) {
            (Some(p), Some(q)) => Some(Presentation {
                blocks: p.blocks.iter().chain(&q.blocks).copied().collect(),
                iso: p.iso.direct_sum(&q.iso),
                iso_inverse: p.iso_inverse.direct_sum(&q.iso_inverse),
                reps: p.reps.iter().chain(&q.reps).cloned().collect(),
            }),
            _ => None,
        };
        Ok(GAlgebra::from_parts(name, basis, a.group.clone(), table, unit, action, presentation))
    }

    /// A⁺: the adjoined unit is the last basis element.
    pub fn unitization(&self) -> GAlgebra {
        let d = self.dim();
        let dim = d + 1;
        let mut table: ProductTable = vec![Vec::new(); dim * dim];
        for i in 0..d {
            for j in 0..d {
                table[i * dim + j] = self.basis_product(i, j).to_vec();
            }
        }
        for i in 0..dim {
            table[d * dim + i] = vec![(i, Scalar::one())];
            table[i * dim + d] = vec![(i, Scalar::one())];
        }
        let action = self.action.iter().map(|a| a.direct_sum(&QMatrix::identity(1))).collect();
        let mut unit = vec![Scalar::zero(); dim];
        unit[d] = Scalar::one();
        let mut basis = self.basis.clone();
        basis.push("1+".into());
        let presentation = match (&self.presentation, &self.unit) {
            (Some(p), Some(u)) => Some(unitized_presentation(p, u, &self.group)),
            _ => None,
        };
        GAlgebra::from_parts(&format!("{}+", self.name), basis, self.group.clone(), table, Some(unit), action, presentation)
    }

    pub fn with_presentation(mut self, p: Presentation) -> Result<GAlgebra, ValidationError> {
        self.check_presentation(&p)?;
        self.presentation = Some(p);
        Ok(self)
    }

    pub fn renamed(mut self, name: &str) -> GAlgebra {
        self.name = name.to_string();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn unit(&self) -> Option<&Vector> {
        self.unit.as_ref()
    }

    pub fn action(&self, g: usize) -> &QMatrix {
        &self.action[g]
    }

    pub fn actions(&self) -> &[QMatrix] {
        &self.action
    }

    pub fn table(&self) -> &ProductTable {
        &self.table
    }

    pub fn presentation(&self) -> Option<&Presentation> {
        self.presentation.as_ref()
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.table[i * self.dim() + j]
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        let mut v = vec![Scalar::zero(); self.dim()];
        v[i] = Scalar::one();
        v
    }

    pub fn zero_vector(&self) -> Vector {
        vec![Scalar::zero(); self.dim()]
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let d = self.dim();
        let mut out = vec![Scalar::zero(); d];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi.mul_ref(yj);
                for (k, v) in &self.table[i * d + j] {
                    out[*k].add_mul(&c, v);
                }
            }
        }
        out
    }

    pub fn act(&self, g: usize, x: &[Scalar]) -> Vector {
        self.action[g].mul_vec(x)
    }

    pub fn is_trivial_action(&self) -> bool {
        self.action.iter().all(QMatrix::is_identity)
    }

    pub fn check_associative(&self) -> Result<(), ValidationError> {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                let ij = self.basis_product(i, j);
                for k in 0..d {
                    let mut left = vec![Scalar::zero(); d];
                    for (m, v) in ij {
                        for (n, w) in self.basis_product(*m, k) {
                            left[*n].add_mul(v, w);
                        }
                    }
                    let mut right = vec![Scalar::zero(); d];
                    for (m, v) in self.basis_product(j, k) {
                        for (n, w) in self.basis_product(i, *m) {
                            right[*n].add_mul(v, w);
                        }
                    }
                    if left != right {
                        return Err(ValidationError::NotAssociative { algebra: self.name.clone(), i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn check_action(&self) -> Result<(), ValidationError> {
        let d = self.dim();
        let group = &self.group;
        if self.action.len() != group.order() || self.action.iter().any(|a| a.rows() != d || a.cols() != d) {
            return Err(ValidationError::Shape {
                context: self.name.clone(),
                detail: format!("need {} action matrices of size {d}×{d}", group.order()),
            });
        }
        for g in group.elements() {
            let a = &self.action[g];
            if a.inverse().is_none() {
                return Err(ValidationError::ActionNotInvertible { algebra: self.name.clone(), g });
            }
            let cols: Vec<Vector> = (0..d).map(|i| a.column(i)).collect();
            for i in 0..d {
                for j in 0..d {
                    let lhs = a.mul_vec(&self.mul(&self.basis_vector(i), &self.basis_vector(j)));
                    if lhs != self.mul(&cols[i], &cols[j]) {
                        return Err(ValidationError::ActionNotMultiplicative { algebra: self.name.clone(), g, i, j });
                    }
                }
            }
        }
        for g in group.elements() {
            for h in group.elements() {
                if self.action[g].mul(&self.action[h]) != self.action[group.mul(g, h)] {
                    return Err(ValidationError::ActionNotHomomorphism { algebra: self.name.clone(), g, h });
                }
            }
        }
        Ok(())
    }

    fn check_unit(&self, u: &[Scalar]) -> Result<(), ValidationError> {
        if u.len() != self.dim() {
            return Err(ValidationError::Shape { context: self.name.clone(), detail: "unit length".into() });
        }
        for i in 0..self.dim() {
            let b = self.basis_vector(i);
            if self.mul(u, &b) != b || self.mul(&b, u) != b {
                return Err(ValidationError::BadUnit { algebra: self.name.clone(), i });
            }
        }
        Ok(())
    }

    /// Solves u·b_i = b_i = b_i·u for all i.
    pub fn find_unit(&self) -> Option<Vector> {
        let d = self.dim();
        if d == 0 {
            return Some(Vec::new());
        }
        // Unknown u = Σ u_m b_m; equations indexed by (side, i, coordinate).
        let mut rows = Vec::with_capacity(2 * d * d);
        let mut rhs = Vec::with_capacity(2 * d * d);
        for left in [true, false] {
            for i in 0..d {
                let mut block = vec![vec![Scalar::zero(); d]; d];
                for m in 0..d {
                    let prod = if left { self.basis_product(m, i) } else { self.basis_product(i, m) };
                    for (k, v) in prod {
                        block[*k][m] = block[*k][m].add_ref(v);
                    }
                }
                for (k, row) in block.into_iter().enumerate() {
                    rows.push(row);
                    rhs.push(if k == i { Scalar::one() } else { Scalar::zero() });
                }
            }
        }
        Matrix::from_rows(rows).solve(&rhs)
    }

    pub fn product_span_rank(&self) -> usize {
        let d = self.dim();
        let cols: Vec<Vector> = (0..d * d)
            .map(|ij| {
                let mut v = vec![Scalar::zero(); d];
                for (k, c) in &self.table[ij] {
                    v[*k] = c.clone();
                }
                v
            })
            .collect();
        if cols.is_empty() {
            return 0;
        }
        Matrix::from_columns(d, &cols).rank()
    }

    pub fn check_quadratik(&self) -> Result<(), ValidationError> {
        if self.unit.is_some() {
            return Ok(());
        }
        let rank = self.product_span_rank();
        if rank < self.dim() {
            return Err(ValidationError::NotQuadratik { algebra: self.name.clone(), rank, dim: self.dim() });
        }
        Ok(())
    }

    pub fn check_presentation(&self, p: &Presentation) -> Result<(), ValidationError> {
        let bad = |reason: String| ValidationError::BadPresentation { algebra: self.name.clone(), reason };
        let d = self.dim();
        if p.total_dim() != d || p.iso.rows() != d || p.iso.cols() != d {
            return Err(bad(format!("blocks {:?} do not match dimension {d}", p.blocks)));
        }
        let inv = p.iso.inverse().ok_or_else(|| bad("isomorphism is singular".into()))?;
        if inv != p.iso_inverse {
            return Err(bad("stored inverse is wrong".into()));
        }
        let images: Vec<Vec<QMatrix>> = (0..d)
            .map(|i| (0..p.blocks.len()).map(|k| p.block_of(k, &self.basis_vector(i))).collect())
            .collect();
        for i in 0..d {
            for j in 0..d {
                let prod = self.mul(&self.basis_vector(i), &self.basis_vector(j));
                for k in 0..p.blocks.len() {
                    if p.block_of(k, &prod) != images[i][k].mul(&images[j][k]) {
                        return Err(bad(format!("not multiplicative at ({i}, {j}) in block {k}")));
                    }
                }
            }
        }
        if p.reps.len() != p.blocks.len() {
            return Err(bad("one representation slot per block required".into()));
        }
        for (k, rep) in p.reps.iter().enumerate() {
            let Some(w) = rep else { continue };
            let w_inv = check_rep(&self.group, p.blocks[k], w).map_err(|e| bad(format!("block {k}: {e}")))?;
            for g in self.group.elements() {
                for i in 0..d {
                    let moved = p.block_of(k, &self.act(g, &self.basis_vector(i)));
                    if moved != w[g].mul(&images[i][k]).mul(&w_inv[g]) {
                        return Err(bad(format!("block {k}: representation disagrees with action at g = {g}, basis {i}")));
                    }
                }
            }
        }
        Ok(())
    }
}

fn matrix_presentation(n: usize, w: &[QMatrix], p: &Presentation, base_dim: usize) -> Presentation {
    let blocks: Vec<usize> = p.blocks.iter().map(|b| n * b).collect();
    let dim = n * n * base_dim;
    let mut iso = QMatrix::zeros(dim, dim);
    let mut out_off = 0;
    for (k, &nk) in p.blocks.iter().enumerate() {
        let in_off = p.offset(k);
        let big = n * nk;
        for r in 0..n {
            for c in 0..n {
                for a in 0..nk {
                    for b in 0..nk {
                        let row = out_off + (r * nk + a) * big + (c * nk + b);
                        for j in 0..base_dim {
                            let v = p.iso.get(in_off + a * nk + b, j);
                            if !v.is_zero() {
                                iso.set(row, (r * n + c) * base_dim + j, v.clone());
                            }
                        }
                    }
                }
            }
        }
        out_off += big * big;
    }
    let iso_inverse = iso.inverse().expect("Kronecker of isomorphisms is invertible");
    let reps = p
        .reps
        .iter()
        .map(|r| r.as_ref().map(|wk| w.iter().zip(wk).map(|(a, b)| a.kron(b)).collect()))
        .collect();
    Presentation { blocks, iso, iso_inverse, reps }
}

fn unitized_presentation(p: &Presentation, unit: &[Scalar], group: &FiniteGroup) -> Presentation {
    let d = p.total_dim();
    let mut iso = QMatrix::zeros(d + 1, d + 1);
    let unit_image = p.iso.mul_vec(unit);
    for r in 0..d {
        for c in 0..d {
            iso.set(r, c, p.iso.get(r, c).clone());
        }
        iso.set(r, d, unit_image[r].clone());
    }
    iso.set(d, d, Scalar::one());
    let iso_inverse = iso.inverse().expect("unitized presentation is invertible");
    let mut blocks = p.blocks.clone();
    blocks.push(1);
    let mut reps = p.reps.clone();
    reps.push(Some(trivial_rep(group, 1)));
    Presentation { blocks, iso, iso_inverse, reps }
}
