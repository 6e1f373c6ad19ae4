//! Standard form, fusion with a level-one morphism, and the word pipeline Φ.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::algebra::GAlgebra;
use crate::amatrix::AlgMatrix;
use crate::error::{Error, ValidationError};
use crate::hom::GHom;
use crate::levelone::{IdealSolver, LevelOne, S1Element};
use crate::path::{Endpoint, PathRing};
use crate::scalar::Scalar;
use crate::words::{expand, Generator, MorphismWord, SumOfProducts};
use crate::QMatrix;

pub(crate) fn is_complex(a: &GAlgebra) -> bool {
    a.dim() == 1 && a.basis_product(0, 0) == [(0, Scalar::one())]
}

fn kron_reps(a: &[QMatrix], b: &[QMatrix]) -> Vec<QMatrix> {
    a.iter().zip(b).map(|(x, y)| x.kron(y)).collect()
}

fn double_reps(a: &[QMatrix]) -> Vec<QMatrix> {
    a.iter().map(|x| x.direct_sum(x)).collect()
}

/// U_t = [[c p + p^⊥, s p], [−s p, c p + p^⊥]] over the path ring.
pub fn rotation_unitary(p: &AlgMatrix<Scalar>) -> Result<AlgMatrix<PathRing>, ValidationError> {
    if !p.is_idempotent() {
        return Err(ValidationError::Idempotent("rotation needs an idempotent".into()));
    }
    let n = p.size();
    let lp = p.lift();
    let perp = AlgMatrix::<PathRing>::identity(p.algebra(), n).sub(&lp);
    let diag = lp.scale(&PathRing::c()).add(&perp);
    let off = lp.scale(&PathRing::s());
    Ok(AlgMatrix::from_quadrants(&diag, &off, &off.neg(), &diag))
}

/// U_{−t}, the inverse of [`rotation_unitary`].
fn rotation_inverse(u: &AlgMatrix<PathRing>) -> AlgMatrix<PathRing> {
    let mut out = u.clone();
    let n = u.size() / 2;
    let s = u.stride();
    for i in 0..u.size() {
        for j in 0..u.size() {
            if (i < n) != (j < n) {
                for t in 0..s {
                    out.entry_mut(i, j)[t] = u.entry(i, j)[t].reverse();
                }
            }
        }
    }
    out
}

/// Data certifying that the standard form is homotopic to the input after
/// adding the trivial element p^⊥∇p^⊥.
#[derive(Clone, Debug)]
pub struct StandardFormCertificate {
    /// p^⊥ = 1 − σ₋(1).
    pub trivial: AlgMatrix<Scalar>,
    pub unitary: AlgMatrix<PathRing>,
    pub unitary_inverse: AlgMatrix<PathRing>,
    /// (σ₊(1) ⊕ p^⊥, p ⊕ p^⊥).
    pub start: (AlgMatrix<Scalar>, AlgMatrix<Scalar>),
    /// (t₊, t₋) in M_2N(X⁺), before reading back into the target.
    pub end: (AlgMatrix<Scalar>, AlgMatrix<Scalar>),
}

fn coords_json(m: &AlgMatrix<Scalar>) -> Value {
    let n = m.size();
    Value::Array((0..n).map(|i| Value::Array((0..n).map(|j| json!(m.entry(i, j).iter().map(|x| x.to_string()).collect::<Vec<_>>())).collect())).collect())
}

impl StandardFormCertificate {
    /// Replays the certificate against the input and the claimed output.
    pub fn verify(&self, x: &LevelOne, out: &S1Element) -> Result<(), Error> {
        let fail = |what: &str| Err(Error::Internal(format!("standard form certificate: {what}")));
        let n2 = self.unitary.size();
        let id = AlgMatrix::<PathRing>::identity(x.ambient(), n2);
        if self.unitary.mul(&self.unitary_inverse) != id || self.unitary_inverse.mul(&self.unitary) != id {
            return fail("U is not invertible");
        }
        if self.unitary.at(Endpoint::Start) != AlgMatrix::identity(x.ambient(), n2) {
            return fail("U does not start at the identity");
        }
        let (s, p) = (&x.plus()[0], &x.minus()[0]);
        let perp = AlgMatrix::identity(x.ambient(), p.size()).sub(p);
        if perp != self.trivial || self.start != (s.direct_sum(&perp), p.direct_sum(&perp)) {
            return fail("start does not match the input plus the trivial element");
        }
        for (a, b) in [(&self.start.0, &self.end.0), (&self.start.1, &self.end.1)] {
            let path = self.unitary.mul(&a.lift()).mul(&self.unitary_inverse);
            if path.at(Endpoint::Start) != *a || path.at(Endpoint::End) != *b {
                return fail("path endpoints differ from the recorded pair");
            }
            if path.mul(&path) != path {
                return fail("path is not idempotent");
            }
        }
        let solver = IdealSolver::new(x.ideal());
        if readback(&self.end.0, x, &solver)? != *out.plus() || readback(&self.end.1, x, &solver)? != *out.minus() {
            return fail("readback differs from the output");
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let n = self.unitary.size();
        let unitary: Vec<Vec<Vec<String>>> = (0..n)
            .map(|i| (0..n).map(|j| self.unitary.entry(i, j).iter().map(|x| x.to_string()).collect()).collect())
            .collect();
        json!({
            "trivial": coords_json(&self.trivial),
            "unitary": unitary,
            "start": [coords_json(&self.start.0), coords_json(&self.start.1)],
            "end": [coords_json(&self.end.0), coords_json(&self.end.1)],
        })
    }
}

/// M_n(ι(J)⁺) → M_{nk}(B⁺): entry λ + ι(E_pq ⊗ b) goes to row r·k + p, column c·k + q.
fn readback(t: &AlgMatrix<Scalar>, x: &LevelOne, solver: &IdealSolver) -> Result<AlgMatrix<Scalar>, Error> {
    let b = x.target();
    let k = x.corner_size();
    let (db, dx) = (b.dim(), x.ambient().dim());
    let n = t.size();
    let mut out = AlgMatrix::zeros(b, n * k);
    for r in 0..n {
        for c in 0..n {
            if t.entry_is_zero(r, c) {
                continue;
            }
            let e = t.entry(r, c);
            let j = solver
                .coordinates(&e[..dx])
                .ok_or_else(|| Error::Internal(format!("standard form entry ({r}, {c}) leaves ι(J)")))?;
            for p in 0..k {
                for q in 0..k {
                    let dst = out.entry_mut(r * k + p, c * k + q);
                    dst[..db].clone_from_slice(&j[(p * k + q) * db..(p * k + q + 1) * db]);
                    if p == q {
                        dst[db] = e[dx].clone();
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Rewrites a level-one morphism out of ℂ into an S₁ element with P₋ = 0 ⊕ 1.
pub fn standard_form(x: &LevelOne) -> Result<(S1Element, StandardFormCertificate), Error> {
    if !is_complex(x.source()) {
        return Err(ValidationError::Shape {
            context: "standard form".into(),
            detail: format!("source must be ℂ, got {}", x.source().name()),
        }
        .into());
    }
    let (s, p) = (&x.plus()[0], &x.minus()[0]);
    let n = p.size();
    let ambient = x.ambient();
    let one = AlgMatrix::identity(ambient, n);
    let perp = one.sub(p);
    let a = perp.mul(s).mul(&perp);
    let b = perp.mul(s).mul(p).neg();
    let c = p.mul(s).mul(&perp).neg();
    let d = p.mul(s).mul(p).add(&perp);
    let t_plus = AlgMatrix::from_quadrants(&a, &b, &c, &d);
    let t_minus = AlgMatrix::zeros(ambient, n).direct_sum(&one);
    let unitary = rotation_unitary(p)?;
    let unitary_inverse = rotation_inverse(&unitary);
    let solver = IdealSolver::new(x.ideal());
    let plus = readback(&t_plus, x, &solver)?;
    let minus = readback(&t_minus, x, &solver)?;
    let w = x.corner_rep();
    let w_inv: Vec<QMatrix> = w.iter().map(|m| m.inverse().expect("corner representation is invertible")).collect();
    let rep = kron_reps(&double_reps(x.rep()), &w);
    let rep_inv = kron_reps(&double_reps(x.rep_inv()), &w_inv);
    let out = S1Element::from_parts(x.target(), plus, minus, rep, rep_inv);
    let cert = StandardFormCertificate {
        trivial: perp.clone(),
        unitary,
        unitary_inverse,
        start: (s.direct_sum(&perp), p.direct_sum(&perp)),
        end: (t_plus, t_minus),
    };
    Ok((out, cert))
}

/// Which formula combines an S₁ element with a level-one morphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FusionRule {
    /// Simplified when the element is standard, full otherwise.
    #[default]
    Auto,
    /// t± = ŝ±(P₊) ⊕ ŝ∓(P₋).
    Full,
    /// t± = ŝ±(P₊); requires a standard element.
    Simplified,
    /// A deliberately wrong formula (t± = ŝ∓(P₊)) for exercising the fuzz harness.
    Broken,
}

/// ŝ entrywise: a + λ ↦ σ(a) + λ·1, with row index i·N_y + a.
fn amplify(p: &AlgMatrix<Scalar>, y: &LevelOne, images: &[AlgMatrix<Scalar>]) -> AlgMatrix<Scalar> {
    let n = p.size();
    let ny = y.size();
    let da = y.source().dim();
    let ambient = y.ambient();
    let mut out = AlgMatrix::zeros(ambient, n * ny);
    let unit = AlgMatrix::<Scalar>::identity(ambient, ny);
    for i in 0..n {
        for j in 0..n {
            if p.entry_is_zero(i, j) {
                continue;
            }
            let e = p.entry(i, j);
            let mut block = unit.scale(&e[da]);
            for (l, v) in e[..da].iter().enumerate() {
                if !v.is_zero() {
                    block = block.add(&images[l].scale(v));
                }
            }
            for a in 0..ny {
                for b in 0..ny {
                    out.entry_mut(i * ny + a, j * ny + b).clone_from_slice(block.entry(a, b));
                }
            }
        }
    }
    out
}

/// The level-one morphism ℂ → B representing x · y.
pub fn fuse(x: &S1Element, y: &LevelOne, rule: FusionRule) -> Result<LevelOne, Error> {
    if x.target().name() != y.source().name() {
        return Err(ValidationError::Shape {
            context: "fusion".into(),
            detail: format!("element over {} cannot be multiplied with a morphism out of {}", x.target().name(), y.source().name()),
        }
        .into());
    }
    let rule = match rule {
        FusionRule::Auto if x.is_standard() => FusionRule::Simplified,
        FusionRule::Auto => FusionRule::Full,
        r => r,
    };
    let (sp, sm) = (y.plus(), y.minus());
    let mut rep = kron_reps(x.rep(), y.rep());
    let mut rep_inv = kron_reps(x.rep_inv(), y.rep_inv());
    let (t_plus, t_minus) = match rule {
        FusionRule::Full => {
            rep = double_reps(&rep);
            rep_inv = double_reps(&rep_inv);
            (
                amplify(x.plus(), y, sp).direct_sum(&amplify(x.minus(), y, sm)),
                amplify(x.plus(), y, sm).direct_sum(&amplify(x.minus(), y, sp)),
            )
        }
        FusionRule::Simplified => {
            if !x.is_standard() {
                return Err(Error::Internal("simplified fusion needs a standard element".into()));
            }
            (amplify(x.plus(), y, sp), amplify(x.plus(), y, sm))
        }
        FusionRule::Broken => (amplify(x.plus(), y, sm), amplify(x.plus(), y, sp)),
        FusionRule::Auto => unreachable!("resolved above"),
    };
    let c = Arc::new(GAlgebra::complex(x.target().group().clone()));
    Ok(LevelOne::from_parts(
        c,
        y.target().clone(),
        y.corner().cloned(),
        y.ideal().clone(),
        rep,
        rep_inv,
        vec![t_plus],
        vec![t_minus],
    ))
}

/// Runs words through the fold x ↦ x ⊙ a starting from χ(1_ℂ).
#[derive(Debug, Default)]
pub struct Normalizer {
    rule: FusionRule,
    memo: Option<RefCell<HashMap<String, S1Element>>>,
}

fn letter_key(g: &Generator) -> String {
    format!("{}:{}:{}:{}", g.kind(), g.label(), g.source().name(), g.target().name())
}

impl Normalizer {
    pub fn new(rule: FusionRule) -> Normalizer {
        Normalizer { rule, memo: None }
    }

    /// Caches products by their letter prefix; only sound while letter names are unique.
    pub fn memoized(mut self) -> Normalizer {
        self.memo = Some(RefCell::new(HashMap::new()));
        self
    }

    pub fn rule(&self) -> FusionRule {
        self.rule
    }

    /// The standard form of χ(1_ℂ), compacted to ([1], [0]).
    pub fn seed(&self, c: &Arc<GAlgebra>) -> Result<S1Element, Error> {
        let (z, _) = standard_form(&LevelOne::from_hom(&GHom::identity(c)))?;
        Ok(z.compact())
    }

    /// x ⊙ g = S(P(x, χ(g))), compacted.
    pub fn z_product(&self, x: &S1Element, g: &Generator) -> Result<S1Element, Error> {
        let fused = fuse(x, &LevelOne::chi(g), self.rule)?;
        let (z, _) = standard_form(&fused)?;
        Ok(z.compact())
    }

    /// The left fold of one product of letters out of ℂ.
    pub fn product(&self, source: &Arc<GAlgebra>, letters: &[Generator]) -> Result<S1Element, Error> {
        let Some(memo) = &self.memo else {
            let mut z = self.seed(source)?;
            for g in letters {
                z = self.z_product(&z, g)?;
            }
            return Ok(z);
        };
        let mut key = format!("{}|", source.name());
        let mut z = match memo.borrow().get(&key) {
            Some(z) => z.clone(),
            None => self.seed(source)?,
        };
        memo.borrow_mut().entry(key.clone()).or_insert_with(|| z.clone());
        for g in letters {
            key.push('|');
            key.push_str(&letter_key(g));
            let cached = memo.borrow().get(&key).cloned();
            z = match cached {
                Some(v) => v,
                None => {
                    let v = self.z_product(&z, g)?;
                    memo.borrow_mut().insert(key.clone(), v.clone());
                    v
                }
            };
        }
        Ok(z)
    }

    /// `product` without the memo, also returning each step's verified certificate.
    pub fn traced_product(
        &self,
        source: &Arc<GAlgebra>,
        letters: &[Generator],
    ) -> Result<(S1Element, Vec<(String, StandardFormCertificate)>), Error> {
        let mut z = self.seed(source)?;
        let mut steps = Vec::with_capacity(letters.len());
        for g in letters {
            let fused = fuse(&z, &LevelOne::chi(g), self.rule)?;
            let (out, cert) = standard_form(&fused)?;
            cert.verify(&fused, &out)?;
            steps.push((g.label(), cert));
            z = out.compact();
        }
        Ok((z, steps))
    }

    /// Φ of a bracket-free word: signed products folded and ⊕-summed in order.
    pub fn phi_expanded(&self, w: &SumOfProducts) -> Result<S1Element, Error> {
        if !is_complex(&w.source) {
            return Err(ValidationError::Shape { context: "pipeline".into(), detail: format!("word must start at ℂ, got {}", w.source.name()) }.into());
        }
        let mut total = S1Element::empty(&w.target);
        for t in &w.terms {
            let z = self.product(&w.source, &t.letters)?;
            let z = if t.negative { z.negate() } else { z };
            total = total.direct_sum(&z)?;
        }
        Ok(total)
    }

    pub fn phi(&self, w: &MorphismWord) -> Result<S1Element, Error> {
        self.phi_expanded(&expand(w))
    }
}

/// Φ with the default fusion rule.
pub fn phi(w: &MorphismWord) -> Result<S1Element, Error> {
    Normalizer::default().phi(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::trivial_rep;
    use crate::group::FiniteGroup;

    fn setup() -> (Arc<GAlgebra>, Arc<GAlgebra>) {
        let g = Arc::new(FiniteGroup::trivial());
        let c = Arc::new(GAlgebra::complex(g.clone()));
        let m2 = Arc::new(GAlgebra::matrix_algebra("M2", 2, &c, &trivial_rep(&g, 2)).unwrap());
        (c, m2)
    }

    #[test]
    fn rotation_of_zero_is_identity() {
        let (c, _) = setup();
        let u = rotation_unitary(&AlgMatrix::zeros(&c, 2)).unwrap();
        assert_eq!(u, AlgMatrix::identity(&c, 4));
    }

    #[test]
    fn rotation_of_unit_at_quarter_turn() {
        let (c, _) = setup();
        let u = rotation_unitary(&AlgMatrix::identity(&c, 1)).unwrap();
        assert_eq!(u.at(Endpoint::Start), AlgMatrix::identity(&c, 2));
        let end = u.at(Endpoint::End).scalar_part();
        let expect = QMatrix::from_rows(vec![vec![Scalar::zero(), Scalar::one()], vec![-Scalar::one(), Scalar::zero()]]);
        assert_eq!(end, expect);
        assert_eq!(u.mul(&rotation_inverse(&u)), AlgMatrix::identity(&c, 2));
    }

    #[test]
    fn rotation_rejects_non_idempotent() {
        let (c, _) = setup();
        assert!(rotation_unitary(&AlgMatrix::identity(&c, 1).scale(&Scalar::int(2))).is_err());
    }

    #[test]
    fn seed_is_the_unit_of_c() {
        let (c, _) = setup();
        let z = Normalizer::default().seed(&c).unwrap();
        assert_eq!(z.size(), 1);
        assert_eq!(z.plus().entry(0, 0), &[Scalar::one(), Scalar::zero()]);
        assert!(z.minus().is_zero());
    }

    #[test]
    fn standard_form_of_unit_pair_is_zero_class_shape() {
        // σ₊ = σ₋ = unit embedding: t₋ = t₊ = diag(0, 1)
        let (c, _) = setup();
        let one = AlgMatrix::from_element(&c, &[Scalar::one()]);
        let x = LevelOne::from_parts(
            c.clone(),
            c.clone(),
            None,
            Arc::new(GHom::identity(&c)),
            trivial_rep(c.group(), 1),
            trivial_rep(c.group(), 1),
            vec![one.clone()],
            vec![one],
        );
        let (z, cert) = standard_form(&x).unwrap();
        cert.verify(&x, &z).unwrap();
        let diag01 = AlgMatrix::from_scalars(&c, &QMatrix::from_rows(vec![vec![Scalar::zero(), Scalar::zero()], vec![Scalar::zero(), Scalar::one()]]));
        assert_eq!(z.plus(), &diag01);
        assert_eq!(z.minus(), &diag01);
    }

    #[test]
    fn standard_form_certificate_replays() {
        let (c, m2) = setup();
        let e11 = GHom::new("p", c.clone(), m2.clone(), QMatrix::from_columns(4, &[m2.basis_vector(0)])).unwrap();
        let x = LevelOne::from_hom(&e11);
        let (z, cert) = standard_form(&x).unwrap();
        cert.verify(&x, &z).unwrap();
        z.check().unwrap();
        assert!(z.is_standard());
    }

    #[test]
    fn full_and_simplified_fusion_agree_after_compaction() {
        let (c, m2) = setup();
        let e11 = GHom::new("p", c.clone(), m2.clone(), QMatrix::from_columns(4, &[m2.basis_vector(0)])).unwrap();
        let n = Normalizer::default();
        let seed = n.seed(&c).unwrap();
        let y = LevelOne::from_hom(&e11);
        let a = standard_form(&fuse(&seed, &y, FusionRule::Full).unwrap()).unwrap().0.compact();
        let b = standard_form(&fuse(&seed, &y, FusionRule::Simplified).unwrap()).unwrap().0.compact();
        assert_eq!(a, b);
    }
}
