//! Level-one morphisms A → B in matrix form and their S₁ specialization.
//!
//! A level-one morphism is given by a corner J = M_k ⊗ B of the target, an
//! injective ideal embedding ι: J → X and two splits σ±: A → M_N(X⁺), both
//! equivariant for ad(u) ⊗ α⁺ and agreeing modulo M_N(ι(J)).

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebra::{check_rep, trivial_rep, GAlgebra, ProductTable};
use crate::amatrix::{unitized_product, AlgMatrix};
use crate::corner::CornerEmbedding;
use crate::error::{Error, ValidationError, WordError};
use crate::field::Ring;
use crate::hom::GHom;
use crate::matrix::SpanSolver;
use crate::scalar::Scalar;
use crate::splitexact::check_splitexact;
use crate::words::{Generator, MorphismWord};
use crate::QMatrix;

#[derive(Clone, Debug)]
pub struct LevelOne {
    source: Arc<GAlgebra>,
    target: Arc<GAlgebra>,
    corner: Option<Arc<CornerEmbedding>>,
    ambient: Arc<GAlgebra>,
    ideal: Arc<GHom>,
    rep: Vec<QMatrix>,
    rep_inv: Vec<QMatrix>,
    plus: Vec<AlgMatrix<Scalar>>,
    minus: Vec<AlgMatrix<Scalar>>,
}

fn kron_reps(a: &[QMatrix], b: &[QMatrix]) -> Vec<QMatrix> {
    a.iter().zip(b).map(|(x, y)| x.kron(y)).collect()
}

fn sum_reps(a: &[QMatrix], b: &[QMatrix]) -> Vec<QMatrix> {
    a.iter().zip(b).map(|(x, y)| x.direct_sum(y)).collect()
}

/// Σ_j a_j · images[j].
fn combine(images: &[AlgMatrix<Scalar>], a: &[Scalar], ambient: &Arc<GAlgebra>, n: usize) -> AlgMatrix<Scalar> {
    let mut out = AlgMatrix::zeros(ambient, n);
    for (img, x) in images.iter().zip(a) {
        if !x.is_zero() {
            out = out.add(&img.scale(x));
        }
    }
    out
}

/// Coordinates in J of elements of ι(J) ⊆ X.
pub(crate) struct IdealSolver {
    solver: Option<SpanSolver<Scalar>>,
    dim: usize,
    identity: bool,
}

impl IdealSolver {
    pub(crate) fn new(ideal: &GHom) -> IdealSolver {
        let dim = ideal.source().dim();
        if ideal.matrix().is_identity() {
            return IdealSolver { solver: None, dim, identity: true };
        }
        let cols: Vec<Vec<Scalar>> = (0..dim).map(|j| ideal.matrix().column(j)).collect();
        IdealSolver { solver: SpanSolver::new(ideal.target().dim(), &cols), dim, identity: false }
    }

    pub(crate) fn coordinates(&self, x: &[Scalar]) -> Option<Vec<Scalar>> {
        if x.iter().all(Scalar::is_zero) {
            return Some(vec![Scalar::zero(); self.dim]);
        }
        if self.identity {
            return Some(x.to_vec());
        }
        self.solver.as_ref()?.coordinates(x)
    }
}

impl LevelOne {
    /// Builds and validates a level-one morphism.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        source: Arc<GAlgebra>,
        target: Arc<GAlgebra>,
        corner: Option<Arc<CornerEmbedding>>,
        ideal: Arc<GHom>,
        rep: Vec<QMatrix>,
        plus: Vec<AlgMatrix<Scalar>>,
        minus: Vec<AlgMatrix<Scalar>>,
    ) -> Result<LevelOne, ValidationError> {
        let n = rep.first().map_or(0, QMatrix::rows);
        let rep_inv = check_rep(source.group(), n, &rep)?;
        let x = LevelOne { source, target, corner, ambient: ideal.target().clone(), ideal, rep, rep_inv, plus, minus };
        x.check()?;
        Ok(x)
    }

    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_parts(
        source: Arc<GAlgebra>,
        target: Arc<GAlgebra>,
        corner: Option<Arc<CornerEmbedding>>,
        ideal: Arc<GHom>,
        rep: Vec<QMatrix>,
        rep_inv: Vec<QMatrix>,
        plus: Vec<AlgMatrix<Scalar>>,
        minus: Vec<AlgMatrix<Scalar>>,
    ) -> LevelOne {
        LevelOne { source, target, corner, ambient: ideal.target().clone(), ideal, rep, rep_inv, plus, minus }
    }

    /// Structural invariants: ideal embedding, multiplicativity, equivariance
    /// and σ₊ − σ₋ landing in M_N(ι(J)).
    pub fn check(&self) -> Result<(), ValidationError> {
        let ctx = "level-one morphism";
        let shape = |detail: String| ValidationError::Shape { context: ctx.into(), detail };
        if self.ideal.source().name() != self.ideal_algebra().name() {
            return Err(shape(format!("ideal embedding starts at {}, expected {}", self.ideal.source().name(), self.ideal_algebra().name())));
        }
        if !self.ideal.is_injective() || !self.ideal.image_is_ideal() {
            return Err(shape(format!("{} is not an injective ideal embedding", self.ideal.name())));
        }
        let d = self.source.dim();
        let n = self.size();
        if self.plus.len() != d || self.minus.len() != d {
            return Err(shape(format!("splits need one image per basis element of {}", self.source.name())));
        }
        if self.plus.iter().chain(&self.minus).any(|m| m.size() != n || m.algebra().name() != self.ambient.name()) {
            return Err(shape(format!("split images must be {n}×{n} over {}⁺", self.ambient.name())));
        }
        let solver = IdealSolver::new(&self.ideal);
        for j in 0..d {
            let diff = self.plus[j].sub(&self.minus[j]);
            if !diff.is_in_algebra() || !self.entries_in_ideal(&diff, &solver) {
                return Err(ValidationError::Idempotent(format!("σ₊ − σ₋ leaves the ideal at basis element {j}")));
            }
        }
        for (label, images) in [("σ₊", &self.plus), ("σ₋", &self.minus)] {
            for i in 0..d {
                for j in 0..d {
                    let prod = self.source.mul(&self.source.basis_vector(i), &self.source.basis_vector(j));
                    if combine(images, &prod, &self.ambient, n) != images[i].mul(&images[j]) {
                        return Err(ValidationError::NotMultiplicative { name: label.into(), i, j });
                    }
                }
            }
            for g in self.source.group().elements() {
                for j in 0..d {
                    let moved = self.source.act(g, &self.source.basis_vector(j));
                    if combine(images, &moved, &self.ambient, n) != images[j].act(g, &self.rep[g], &self.rep_inv[g]) {
                        return Err(ValidationError::NotEquivariant { name: label.into(), g, basis: j });
                    }
                }
            }
        }
        Ok(())
    }

    fn entries_in_ideal(&self, m: &AlgMatrix<Scalar>, solver: &IdealSolver) -> bool {
        let dx = self.ambient.dim();
        (0..m.size()).all(|r| (0..m.size()).all(|c| solver.coordinates(&m.entry(r, c)[..dx]).is_some()))
    }

    /// χ of a generator.
    pub fn chi(g: &Generator) -> LevelOne {
        match g {
            Generator::Hom(h) => LevelOne::from_hom(h),
            Generator::Corner(e) => LevelOne::from_hom(e.embedding()),
            Generator::Identity(a) => LevelOne::from_hom(&GHom::identity(a)),
            Generator::Endpoint(h, end) => LevelOne::from_hom(h.endpoint(*end)),
            Generator::CornerInv(e) => LevelOne::corner_inverse(e),
            Generator::Split(seq) => {
                let m = seq.i.target();
                let basis: Vec<AlgMatrix<Scalar>> =
                    (0..m.dim()).map(|j| AlgMatrix::from_element(m, &m.basis_vector(j))).collect();
                let back = seq.f.then(&seq.s);
                let minus = (0..m.dim()).map(|j| AlgMatrix::from_element(m, &back.matrix().column(j))).collect();
                let one = trivial_rep(m.group(), 1);
                LevelOne::from_parts(m.clone(), seq.i.source().clone(), None, Arc::new(seq.i.clone()), one.clone(), one, basis, minus)
            }
        }
    }

    /// φ: A → B with J = X = B, splits (φ, 0).
    pub fn from_hom(phi: &GHom) -> LevelOne {
        let (a, b) = (phi.source(), phi.target());
        let plus = (0..a.dim()).map(|j| AlgMatrix::from_element(b, &phi.matrix().column(j))).collect();
        let minus = (0..a.dim()).map(|_| AlgMatrix::zeros(b, 1)).collect();
        let one = trivial_rep(a.group(), 1);
        LevelOne::from_parts(a.clone(), b.clone(), None, Arc::new(GHom::identity(b)), one.clone(), one, plus, minus)
    }

    /// e⁻¹: M_k ⊗ A → A with X = J = M_k ⊗ A and splits (id, 0).
    pub fn corner_inverse(e: &Arc<CornerEmbedding>) -> LevelOne {
        let j = e.algebra();
        let plus = (0..j.dim()).map(|i| AlgMatrix::from_element(j, &j.basis_vector(i))).collect();
        let minus = (0..j.dim()).map(|_| AlgMatrix::zeros(j, 1)).collect();
        let one = trivial_rep(j.group(), 1);
        LevelOne::from_parts(j.clone(), e.base().clone(), Some(e.clone()), Arc::new(GHom::identity(j)), one.clone(), one, plus, minus)
    }

    pub fn source(&self) -> &Arc<GAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GAlgebra> {
        &self.target
    }

    pub fn corner(&self) -> Option<&Arc<CornerEmbedding>> {
        self.corner.as_ref()
    }

    /// J: the corner algebra M_k ⊗ B, or B itself for the trivial corner.
    pub fn ideal_algebra(&self) -> &Arc<GAlgebra> {
        self.corner.as_ref().map_or(&self.target, |e| e.algebra())
    }

    pub fn corner_size(&self) -> usize {
        self.corner.as_ref().map_or(1, |e| e.size())
    }

    pub fn corner_rep(&self) -> Vec<QMatrix> {
        self.corner.as_ref().map_or_else(|| trivial_rep(self.target.group(), 1), |e| e.rep().clone())
    }

    pub fn ambient(&self) -> &Arc<GAlgebra> {
        &self.ambient
    }

    pub fn ideal(&self) -> &Arc<GHom> {
        &self.ideal
    }

    pub fn size(&self) -> usize {
        self.rep.first().map_or(0, QMatrix::rows)
    }

    pub fn rep(&self) -> &[QMatrix] {
        &self.rep
    }

    pub fn rep_inv(&self) -> &[QMatrix] {
        &self.rep_inv
    }

    pub fn plus(&self) -> &[AlgMatrix<Scalar>] {
        &self.plus
    }

    pub fn minus(&self) -> &[AlgMatrix<Scalar>] {
        &self.minus
    }

    pub fn apply_plus(&self, a: &[Scalar]) -> AlgMatrix<Scalar> {
        combine(&self.plus, a, &self.ambient, self.size())
    }

    pub fn apply_minus(&self, a: &[Scalar]) -> AlgMatrix<Scalar> {
        combine(&self.minus, a, &self.ambient, self.size())
    }

    /// Swaps the splits.
    pub fn negate(&self) -> LevelOne {
        let mut out = self.clone();
        std::mem::swap(&mut out.plus, &mut out.minus);
        out
    }

    /// Block sum; both summands must share source, target, corner and ideal embedding.
    pub fn add(&self, o: &LevelOne) -> Result<LevelOne, Error> {
        let same = self.source.name() == o.source.name()
            && self.target.name() == o.target.name()
            && self.ambient.name() == o.ambient.name()
            && self.ideal.name() == o.ideal.name()
            && self.ideal_algebra().name() == o.ideal_algebra().name();
        if !same {
            return Err(ValidationError::Shape {
                context: "level-one sum".into(),
                detail: format!(
                    "summands differ: {} → {} via {} and {} → {} via {}",
                    self.source.name(),
                    self.target.name(),
                    self.ambient.name(),
                    o.source.name(),
                    o.target.name(),
                    o.ambient.name()
                ),
            }
            .into());
        }
        let zip = |a: &[AlgMatrix<Scalar>], b: &[AlgMatrix<Scalar>]| a.iter().zip(b).map(|(x, y)| x.direct_sum(y)).collect();
        Ok(LevelOne {
            plus: zip(&self.plus, &o.plus),
            minus: zip(&self.minus, &o.minus),
            rep: sum_reps(&self.rep, &o.rep),
            rep_inv: sum_reps(&self.rep_inv, &o.rep_inv),
            ..self.clone()
        })
    }

    /// Prepends one coordinate carrying the zero splits and the trivial representation.
    pub fn pad_front(&self) -> LevelOne {
        let one = trivial_rep(self.source.group(), 1);
        let zero = |m: &AlgMatrix<Scalar>| AlgMatrix::zeros(m.algebra(), 1).direct_sum(m);
        LevelOne {
            plus: self.plus.iter().map(zero).collect(),
            minus: self.minus.iter().map(zero).collect(),
            rep: sum_reps(&one, &self.rep),
            rep_inv: sum_reps(&one, &self.rep_inv),
            ..self.clone()
        }
    }

    /// Whether ad(u_g) fixes E₁₁, as needed for a corner embedding at coordinate 0.
    fn fixes_first_corner(&self) -> bool {
        let n = self.size();
        n > 0
            && self.rep.iter().zip(&self.rep_inv).all(|(u, ui)| {
                (0..n).all(|r| (0..n).all(|c| {
                    let v = u.get(r, 0).mul_ref(ui.get(0, c));
                    if r == 0 && c == 0 {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                }))
            })
    }

    /// The word (σ₊ ⊕ id) · Δ_{σ₋ ⊕ id} · e⁻¹ through the middle algebra
    /// M = M_N(ι(J)) + (σ₋ ⊕ id)(A) ⊆ M_N(X⁺) ⊕ A.
    ///
    /// `name` prefixes the synthesized letters and objects.
    pub fn to_word(&self, name: &str) -> Result<MorphismWord, Error> {
        if !self.fixes_first_corner() {
            return self.pad_front().to_word(name);
        }
        let n = self.size();
        let k = self.corner_size();
        let nk = n * k;
        let b = &self.target;
        let (db, da, dx) = (b.dim(), self.source.dim(), self.ambient.dim());
        let big_corner = Arc::new(CornerEmbedding::new(&format!("{name}.e"), b, nk, kron_reps(&self.rep, &self.corner_rep()))?);
        let jn = big_corner.algebra().clone();
        let djn = jn.dim();
        let solver = IdealSolver::new(&self.ideal);
        let breach = |what: &str| Error::Internal(format!("{name}: {what} leaves the ideal"));

        // M_N(ι(J)) → J_N coordinates
        let to_jn = |m: &AlgMatrix<Scalar>| -> Result<Vec<Scalar>, Error> {
            let mut out = vec![Scalar::zero(); djn];
            for r in 0..n {
                for c in 0..n {
                    let e = m.entry(r, c);
                    if !e[dx].is_zero() {
                        return Err(breach("a unit part"));
                    }
                    let j = solver.coordinates(&e[..dx]).ok_or_else(|| breach("an entry"))?;
                    for p in 0..k {
                        for q in 0..k {
                            for l in 0..db {
                                let v = &j[(p * k + q) * db + l];
                                if !v.is_zero() {
                                    out[((r * k + p) * nk + c * k + q) * db + l] = v.clone();
                                }
                            }
                        }
                    }
                }
            }
            Ok(out)
        };
        // J_N basis element as (row r, column c, element of X)
        let from_jn = |idx: usize| -> (usize, usize, Vec<Scalar>) {
            let (rc, l) = (idx / db, idx % db);
            let (big_r, big_c) = (rc / nk, rc % nk);
            let (r, p, c, q) = (big_r / k, big_r % k, big_c / k, big_c % k);
            (r, c, self.ideal.matrix().column((p * k + q) * db + l))
        };

        let dm = djn + da;
        let mut table: ProductTable = vec![Vec::new(); dm * dm];
        for i in 0..djn {
            for j in 0..djn {
                table[i * dm + j] = jn.basis_product(i, j).to_vec();
            }
        }
        let sparse = |v: Vec<Scalar>| -> Vec<(usize, Scalar)> {
            v.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect()
        };
        let unit_x = |x: &[Scalar]| -> Vec<Scalar> { x.iter().cloned().chain([Scalar::zero()]).collect() };
        for a in 0..da {
            let s = &self.minus[a];
            if s.is_zero() {
                continue;
            }
            for i in 0..djn {
                let (r, c, x) = from_jn(i);
                let x = unit_x(&x);
                // ι_N(e_i) · σ₋(a): row r picks up x · σ₋(a)[c, c']
                let mut left = AlgMatrix::zeros(&self.ambient, n);
                let mut right = AlgMatrix::zeros(&self.ambient, n);
                for t in 0..n {
                    if !s.entry_is_zero(c, t) {
                        left.entry_mut(r, t).clone_from_slice(&unitized_product(&self.ambient, &x, s.entry(c, t)));
                    }
                    if !s.entry_is_zero(t, r) {
                        right.entry_mut(t, c).clone_from_slice(&unitized_product(&self.ambient, s.entry(t, r), &x));
                    }
                }
                table[i * dm + djn + a] = sparse(to_jn(&left)?);
                table[(djn + a) * dm + i] = sparse(to_jn(&right)?);
            }
        }
        for a in 0..da {
            for c in 0..da {
                table[(djn + a) * dm + djn + c] =
                    self.source.basis_product(a, c).iter().map(|(t, v)| (djn + t, v.clone())).collect();
            }
        }
        let action = self.source.group().elements().map(|g| jn.action(g).direct_sum(self.source.action(g))).collect();
        let basis = jn.basis().iter().cloned().chain(self.source.basis().iter().map(|s| format!("s({s})"))).collect();
        let middle = Arc::new(GAlgebra::from_parts(&format!("{name}.mid"), basis, self.source.group().clone(), table, None, action, None));

        let mut plus_matrix = QMatrix::zeros(dm, da);
        for a in 0..da {
            let diff = to_jn(&self.plus[a].sub(&self.minus[a]))?;
            for (r, v) in diff.into_iter().enumerate() {
                plus_matrix.set(r, a, v);
            }
            plus_matrix.set(djn + a, a, Scalar::one());
        }
        let inject = QMatrix::identity(djn).vstack(&QMatrix::zeros(da, djn));
        let split = QMatrix::zeros(djn, da).vstack(&QMatrix::identity(da));
        let plus_hom = GHom::from_parts(&format!("{name}.plus"), self.source.clone(), middle.clone(), plus_matrix);
        let i = GHom::from_parts(&format!("{name}.i"), jn.clone(), middle.clone(), inject);
        let f = GHom::from_parts(&format!("{name}.f"), middle.clone(), self.source.clone(), split.transpose());
        let s = GHom::from_parts(&format!("{name}.s"), self.source.clone(), middle, split);
        let seq = Arc::new(check_splitexact(name, &i, &f, &s)?);
        let letters = [Generator::Hom(Arc::new(plus_hom)), Generator::Split(seq), Generator::CornerInv(big_corner)];
        MorphismWord::chain(&letters).map_err(|e: WordError| Error::Internal(format!("{name}: {e}")))
    }
}

/// An element of S₁: a pair of G-invariant idempotents in M_N(B⁺) with equal
/// scalar parts, for the action ad(u) ⊗ β⁺.
#[derive(Clone, Debug)]
pub struct S1Element {
    target: Arc<GAlgebra>,
    rep: Vec<QMatrix>,
    rep_inv: Vec<QMatrix>,
    plus: AlgMatrix<Scalar>,
    minus: AlgMatrix<Scalar>,
}

impl PartialEq for S1Element {
    fn eq(&self, o: &S1Element) -> bool {
        self.target.name() == o.target.name() && self.rep == o.rep && self.plus == o.plus && self.minus == o.minus
    }
}

impl S1Element {
    pub fn new(target: &Arc<GAlgebra>, plus: AlgMatrix<Scalar>, minus: AlgMatrix<Scalar>, rep: Vec<QMatrix>) -> Result<S1Element, ValidationError> {
        let n = plus.size();
        let rep_inv = check_rep(target.group(), n, &rep)?;
        let x = S1Element { target: target.clone(), rep, rep_inv, plus, minus };
        x.check()?;
        Ok(x)
    }

    pub(crate) fn from_parts(
        target: &Arc<GAlgebra>,
        plus: AlgMatrix<Scalar>,
        minus: AlgMatrix<Scalar>,
        rep: Vec<QMatrix>,
        rep_inv: Vec<QMatrix>,
    ) -> S1Element {
        S1Element { target: target.clone(), rep, rep_inv, plus, minus }
    }

    /// The trivial element p∇p.
    pub fn trivial(target: &Arc<GAlgebra>, p: AlgMatrix<Scalar>, rep: Vec<QMatrix>) -> Result<S1Element, ValidationError> {
        S1Element::new(target, p.clone(), p, rep)
    }

    /// The element of size 0.
    pub fn empty(target: &Arc<GAlgebra>) -> S1Element {
        let rep = vec![QMatrix::zeros(0, 0); target.group().order()];
        S1Element::from_parts(target, AlgMatrix::zeros(target, 0), AlgMatrix::zeros(target, 0), rep.clone(), rep)
    }

    pub fn check(&self) -> Result<(), ValidationError> {
        let name = self.target.name();
        let n = self.size();
        let ok_shape = self.minus.size() == n
            && self.rep.iter().all(|u| u.rows() == n && u.cols() == n)
            && self.plus.algebra().name() == name
            && self.minus.algebra().name() == name;
        if !ok_shape {
            return Err(ValidationError::Shape { context: "S1 element".into(), detail: format!("idempotents and representation must be {n}×{n} over {name}⁺") });
        }
        for (label, p) in [("P+", &self.plus), ("P-", &self.minus)] {
            if !p.is_idempotent() {
                return Err(ValidationError::Idempotent(format!("{label} over {name} is not idempotent")));
            }
            if !p.is_invariant(&self.rep, &self.rep_inv) {
                return Err(ValidationError::Idempotent(format!("{label} over {name} is not G-invariant")));
            }
        }
        if self.plus.scalar_part() != self.minus.scalar_part() {
            return Err(ValidationError::Idempotent(format!("P+ − P- over {name} has a nonzero scalar part")));
        }
        Ok(())
    }

    pub fn target(&self) -> &Arc<GAlgebra> {
        &self.target
    }

    pub fn size(&self) -> usize {
        self.plus.size()
    }

    pub fn rep(&self) -> &[QMatrix] {
        &self.rep
    }

    pub fn rep_inv(&self) -> &[QMatrix] {
        &self.rep_inv
    }

    pub fn plus(&self) -> &AlgMatrix<Scalar> {
        &self.plus
    }

    pub fn minus(&self) -> &AlgMatrix<Scalar> {
        &self.minus
    }

    /// Standard form: P₋ is a diagonal matrix of 0s and units.
    pub fn is_standard(&self) -> bool {
        self.minus.is_standard_pattern()
    }

    pub fn negate(&self) -> S1Element {
        S1Element { plus: self.minus.clone(), minus: self.plus.clone(), ..self.clone() }
    }

    pub fn direct_sum(&self, o: &S1Element) -> Result<S1Element, ValidationError> {
        if self.target.name() != o.target.name() {
            return Err(ValidationError::Shape {
                context: "S1 sum".into(),
                detail: format!("targets differ: {} vs {}", self.target.name(), o.target.name()),
            });
        }
        Ok(S1Element {
            target: self.target.clone(),
            plus: self.plus.direct_sum(&o.plus),
            minus: self.minus.direct_sum(&o.minus),
            rep: sum_reps(&self.rep, &o.rep),
            rep_inv: sum_reps(&self.rep_inv, &o.rep_inv),
        })
    }

    /// Appends `extra` zero coordinates with the trivial representation.
    pub fn pad(&self, extra: usize) -> S1Element {
        let z = S1Element {
            target: self.target.clone(),
            plus: AlgMatrix::zeros(&self.target, extra),
            minus: AlgMatrix::zeros(&self.target, extra),
            rep: trivial_rep(self.target.group(), extra),
            rep_inv: trivial_rep(self.target.group(), extra),
        };
        self.direct_sum(&z).expect("same target")
    }

    /// Principal restriction to the given coordinates.
    pub fn restrict(&self, coords: &[usize]) -> S1Element {
        let sub = |m: &QMatrix| m.submatrix(coords, coords);
        S1Element {
            target: self.target.clone(),
            plus: self.plus.restrict(coords),
            minus: self.minus.restrict(coords),
            rep: self.rep.iter().map(sub).collect(),
            rep_inv: self.rep_inv.iter().map(sub).collect(),
        }
    }

    /// Coordinate components coupled through P₊, P₋ or the representation, by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.size();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for i in 0..n {
            for j in 0..n {
                let coupled = !self.plus.entry_is_zero(i, j)
                    || !self.minus.entry_is_zero(i, j)
                    || self.rep.iter().any(|u| !u.get(i, j).is_zero());
                if coupled {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; n];
        for i in 0..n {
            let r = find(&mut parent, i);
            if slot[r] == usize::MAX {
                slot[r] = groups.len();
                groups.push(Vec::new());
            }
            groups[slot[r]].push(i);
        }
        groups
    }

    /// Drops every decoupled component on which P₊ = P₋; such a component is a trivial summand.
    pub fn compact(&self) -> S1Element {
        let keep: Vec<usize> = self
            .components()
            .into_iter()
            .filter(|c| self.plus.restrict(c) != self.minus.restrict(c))
            .flatten()
            .collect();
        if keep.len() == self.size() {
            return self.clone();
        }
        let mut keep = keep;
        keep.sort_unstable();
        self.restrict(&keep)
    }

    /// φ̂ applied to both idempotents.
    pub fn map(&self, f: &GHom) -> S1Element {
        assert_eq!(f.source().name(), self.target.name(), "hom starts at the element's algebra");
        S1Element {
            target: f.target().clone(),
            plus: self.plus.map_entries(f.target(), f.matrix()),
            minus: self.minus.map_entries(f.target(), f.matrix()),
            rep: self.rep.clone(),
            rep_inv: self.rep_inv.clone(),
        }
    }

    /// The level-one morphism ℂ → B with trivial corner, X = B and σ±(1) = P±.
    pub fn as_level_one(&self) -> LevelOne {
        let c = Arc::new(GAlgebra::complex(self.target.group().clone()));
        LevelOne::from_parts(
            c,
            self.target.clone(),
            None,
            Arc::new(GHom::identity(&self.target)),
            self.rep.clone(),
            self.rep_inv.clone(),
            vec![self.plus.clone()],
            vec![self.minus.clone()],
        )
    }

    pub fn to_word(&self, name: &str) -> Result<MorphismWord, Error> {
        self.as_level_one().to_word(name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn m2(group: FiniteGroup) -> (Arc<GAlgebra>, Arc<GAlgebra>) {
        let g = Arc::new(group);
        let c = Arc::new(GAlgebra::complex(g.clone()));
        let m2 = Arc::new(GAlgebra::matrix_algebra("M2", 2, &c, &trivial_rep(&g, 2)).unwrap());
        (c, m2)
    }

    fn corner_hom(c: &Arc<GAlgebra>, m2: &Arc<GAlgebra>) -> GHom {
        GHom::new("p", c.clone(), m2.clone(), QMatrix::from_columns(4, &[m2.basis_vector(0)])).unwrap()
    }

    #[test]
    fn chi_of_hom_has_zero_minus_split() {
        let (c, m2) = m2(FiniteGroup::trivial());
        let x = LevelOne::from_hom(&corner_hom(&c, &m2));
        x.check().unwrap();
        assert!(x.minus()[0].is_zero());
        assert_eq!(x.plus()[0].entry(0, 0)[0], Scalar::one());
    }

    #[test]
    fn chi_of_corner_inverse_is_identity_split() {
        let (_, m2) = m2(FiniteGroup::cyclic(2));
        let e = Arc::new(CornerEmbedding::new("e", &m2, 2, trivial_rep(m2.group(), 2)).unwrap());
        let x = LevelOne::chi(&Generator::CornerInv(e.clone()));
        x.check().unwrap();
        assert_eq!(x.target().name(), "M2");
        assert_eq!(x.source().name(), e.algebra().name());
    }

    #[test]
    fn negate_twice_is_identity() {
        let (c, m2) = m2(FiniteGroup::trivial());
        let x = LevelOne::from_hom(&corner_hom(&c, &m2));
        let y = x.negate().negate();
        assert_eq!(x.plus(), y.plus());
        assert_eq!(x.minus(), y.minus());
    }

    #[test]
    fn sizes_add() {
        let (c, m2) = m2(FiniteGroup::trivial());
        let x = LevelOne::from_hom(&corner_hom(&c, &m2));
        let y = x.add(&x).unwrap().add(&x).unwrap();
        assert_eq!(y.size(), 3);
        y.check().unwrap();
    }

    #[test]
    fn compaction_drops_trivial_components() {
        let (_, m2) = m2(FiniteGroup::trivial());
        let mut p = AlgMatrix::zeros(&m2, 3);
        p.entry_mut(0, 0)[0] = Scalar::one();
        p.entry_mut(2, 2)[4] = Scalar::one();
        let mut q = AlgMatrix::zeros(&m2, 3);
        q.entry_mut(2, 2)[4] = Scalar::one();
        let x = S1Element::new(&m2, p, q, trivial_rep(m2.group(), 3)).unwrap();
        let y = x.compact();
        assert_eq!(y.size(), 1);
        assert_eq!(y.plus().entry(0, 0)[0], Scalar::one());
    }

    #[test]
    fn to_word_is_well_typed() {
        let (c, m2) = m2(FiniteGroup::trivial());
        let mut p = AlgMatrix::zeros(&m2, 1);
        p.entry_mut(0, 0)[0] = Scalar::one();
        let z = S1Element::new(&m2, p, AlgMatrix::zeros(&m2, 1), trivial_rep(m2.group(), 1)).unwrap();
        let w = z.to_word("z").unwrap();
        assert_eq!(w.source().name(), c.name());
        assert_eq!(w.target().name(), "M2");
    }

    #[test]
    fn rejects_unequal_scalar_parts() {
        let (_, m2) = m2(FiniteGroup::trivial());
        let p = AlgMatrix::identity(&m2, 1);
        let q = AlgMatrix::zeros(&m2, 1);
        assert!(S1Element::new(&m2, p, q, trivial_rep(m2.group(), 1)).is_err());
    }
}
