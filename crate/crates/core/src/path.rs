//! The trigonometric path ring ℚ(i)[c, s]/(c² + s² − 1).
//!
//! Elements are kept in the normal form p(s) + c·q(s). Evaluation at
//! (c, s) = (1, 0) is the start of a path (t = 0), at (0, 1) its end (t = π/2).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::field::Ring;
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PathRing {
    /// coefficients of s^k without a c factor
    plain: Vec<Scalar>,
    /// coefficients of c·s^k
    with_c: Vec<Scalar>,
}

fn trim(v: &mut Vec<Scalar>) {
    while v.last().is_some_and(Scalar::is_zero) {
        v.pop();
    }
}

fn poly_add(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let n = a.len().max(b.len());
    let zero = Scalar::zero();
    let mut out: Vec<Scalar> = (0..n).map(|k| a.get(k).unwrap_or(&zero).add_ref(b.get(k).unwrap_or(&zero))).collect();
    trim(&mut out);
    out
}

fn poly_mul(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Scalar::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j].add_mul(x, y);
        }
    }
    trim(&mut out);
    out
}

fn poly_neg(a: &[Scalar]) -> Vec<Scalar> {
    a.iter().map(|x| -x.clone()).collect()
}

/// The monomial c^a s^b expressed in normal form.
fn monomial(a: u32, b: u32) -> PathRing {
    // c^(2m) = (1 − s²)^m
    let m = a / 2;
    let mut base = vec![Scalar::one()];
    for _ in 0..m {
        base = poly_mul(&base, &[Scalar::one(), Scalar::zero(), -Scalar::one()]);
    }
    let mut shifted = vec![Scalar::zero(); b as usize];
    shifted.extend(base);
    trim(&mut shifted);
    if a % 2 == 0 {
        PathRing { plain: shifted, with_c: Vec::new() }
    } else {
        PathRing { plain: Vec::new(), with_c: shifted }
    }
}

fn eval_poly(p: &[Scalar], s: &Scalar) -> Scalar {
    p.iter().rev().fold(Scalar::zero(), |acc, x| acc.mul_ref(s).add_ref(x))
}

/// One term of a serialized path-ring element: coeff · c^c_exp · s^s_exp.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathTerm {
    #[serde(default)]
    pub c: u32,
    #[serde(default)]
    pub s: u32,
    pub coeff: Scalar,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Endpoint {
    Start,
    End,
}

impl Endpoint {
    pub fn from_index(k: u32) -> Option<Endpoint> {
        match k {
            0 => Some(Endpoint::Start),
            1 => Some(Endpoint::End),
            _ => None,
        }
    }

    pub fn index(self) -> u32 {
        match self {
            Endpoint::Start => 0,
            Endpoint::End => 1,
        }
    }
}

impl PathRing {
    pub fn constant(x: Scalar) -> PathRing {
        let mut plain = vec![x];
        trim(&mut plain);
        PathRing { plain, with_c: Vec::new() }
    }

    pub fn c() -> PathRing {
        monomial(1, 0)
    }

    pub fn s() -> PathRing {
        monomial(0, 1)
    }

    pub fn term(coeff: Scalar, c_exp: u32, s_exp: u32) -> PathRing {
        let m = monomial(c_exp, s_exp);
        m.scale(&coeff)
    }

    pub fn from_terms(terms: &[PathTerm]) -> PathRing {
        terms.iter().fold(PathRing::zero(), |acc, t| acc + PathRing::term(t.coeff.clone(), t.c, t.s))
    }

    /// Normal-form terms, c-free ones first, by ascending power of s.
    pub fn terms(&self) -> Vec<PathTerm> {
        let plain = self.plain.iter().enumerate().map(|(k, x)| (0, k, x));
        let with_c = self.with_c.iter().enumerate().map(|(k, x)| (1, k, x));
        plain
            .chain(with_c)
            .filter(|(_, _, x)| !x.is_zero())
            .map(|(c, s, x)| PathTerm { c, s: s as u32, coeff: x.clone() })
            .collect()
    }

    pub fn scale(&self, x: &Scalar) -> PathRing {
        if x.is_zero() {
            return PathRing::zero();
        }
        PathRing {
            plain: self.plain.iter().map(|y| y.mul_ref(x)).collect(),
            with_c: self.with_c.iter().map(|y| y.mul_ref(x)).collect(),
        }
    }

    /// Evaluation at a rational point of the circle (caller guarantees c² + s² = 1).
    pub fn eval(&self, c: &Scalar, s: &Scalar) -> Scalar {
        eval_poly(&self.plain, s).add_ref(&c.mul_ref(&eval_poly(&self.with_c, s)))
    }

    pub fn at(&self, end: Endpoint) -> Scalar {
        match end {
            Endpoint::Start => self.eval(&Scalar::one(), &Scalar::zero()),
            Endpoint::End => self.eval(&Scalar::zero(), &Scalar::one()),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.with_c.is_empty() && self.plain.len() <= 1
    }

    pub fn constant_value(&self) -> Option<Scalar> {
        if !self.is_constant() {
            return None;
        }
        Some(self.plain.first().cloned().unwrap_or_else(Scalar::zero))
    }

    /// t ↦ −t, i.e. s ↦ −s.
    pub fn reverse(&self) -> PathRing {
        let flip = |p: &[Scalar]| -> Vec<Scalar> {
            p.iter().enumerate().map(|(k, x)| if k % 2 == 1 { -x.clone() } else { x.clone() }).collect()
        };
        PathRing { plain: flip(&self.plain), with_c: flip(&self.with_c) }
    }
}

impl Zero for PathRing {
    fn zero() -> PathRing {
        PathRing::default()
    }
    fn is_zero(&self) -> bool {
        self.plain.is_empty() && self.with_c.is_empty()
    }
}

impl One for PathRing {
    fn one() -> PathRing {
        PathRing::constant(Scalar::one())
    }
}

impl Add for PathRing {
    type Output = PathRing;
    fn add(self, o: PathRing) -> PathRing {
        self.add_ref(&o)
    }
}

impl Sub for PathRing {
    type Output = PathRing;
    fn sub(self, o: PathRing) -> PathRing {
        self.sub_ref(&o)
    }
}

impl Mul for PathRing {
    type Output = PathRing;
    fn mul(self, o: PathRing) -> PathRing {
        self.mul_ref(&o)
    }
}

impl Neg for PathRing {
    type Output = PathRing;
    fn neg(self) -> PathRing {
        PathRing { plain: poly_neg(&self.plain), with_c: poly_neg(&self.with_c) }
    }
}

impl Ring for PathRing {
    fn add_ref(&self, o: &PathRing) -> PathRing {
        PathRing { plain: poly_add(&self.plain, &o.plain), with_c: poly_add(&self.with_c, &o.with_c) }
    }

    fn sub_ref(&self, o: &PathRing) -> PathRing {
        PathRing {
            plain: poly_add(&self.plain, &poly_neg(&o.plain)),
            with_c: poly_add(&self.with_c, &poly_neg(&o.with_c)),
        }
    }

    fn mul_ref(&self, o: &PathRing) -> PathRing {
        // (p1 + c q1)(p2 + c q2) = p1 p2 + (1 − s²) q1 q2 + c (p1 q2 + q1 p2)
        let qq = poly_mul(&self.with_c, &o.with_c);
        let one_minus_s2 = [Scalar::one(), Scalar::zero(), -Scalar::one()];
        let plain = poly_add(&poly_mul(&self.plain, &o.plain), &poly_mul(&qq, &one_minus_s2));
        let with_c = poly_add(&poly_mul(&self.plain, &o.with_c), &poly_mul(&self.with_c, &o.plain));
        PathRing { plain, with_c }
    }

    fn add_mul(&mut self, a: &PathRing, b: &PathRing) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        *self = self.add_ref(&a.mul_ref(b));
    }
}

impl fmt::Display for PathRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, t) in terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})", t.coeff)?;
            if t.c > 0 {
                write!(f, "*c")?;
            }
            if t.s > 0 {
                write!(f, "*s^{}", t.s)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PathRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Coefficients usable in algebra-valued matrices.
pub trait Coeff: Ring {
    fn from_scalar(x: &Scalar) -> Self;
    fn scale_by(&self, x: &Scalar) -> Self;
}

impl Coeff for Scalar {
    fn from_scalar(x: &Scalar) -> Scalar {
        x.clone()
    }
    fn scale_by(&self, x: &Scalar) -> Scalar {
        self.mul_ref(x)
    }
}

impl Coeff for PathRing {
    fn from_scalar(x: &Scalar) -> PathRing {
        PathRing::constant(x.clone())
    }
    fn scale_by(&self, x: &Scalar) -> PathRing {
        self.scale(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pythagoras_reduces_to_one() {
        let c = PathRing::c();
        let s = PathRing::s();
        assert!((c.mul_ref(&c) + s.mul_ref(&s)).is_one());
    }

    #[test]
    fn endpoints() {
        let x = PathRing::term(Scalar::int(3), 2, 0) + PathRing::term(Scalar::int(5), 1, 1) + PathRing::s();
        assert_eq!(x.at(Endpoint::Start), Scalar::int(3));
        assert_eq!(x.at(Endpoint::End), Scalar::int(1));
    }

    #[test]
    fn evaluation_is_a_ring_hom_at_pythagorean_point() {
        let (c, s) = (Scalar::frac(3, 5), Scalar::frac(4, 5));
        let x = PathRing::term(Scalar::gaussian(1, 2), 3, 1) + PathRing::s();
        let y = PathRing::term(Scalar::int(-2), 1, 2) + PathRing::one();
        assert_eq!(x.mul_ref(&y).eval(&c, &s), x.eval(&c, &s).mul_ref(&y.eval(&c, &s)));
    }

    #[test]
    fn terms_round_trip() {
        let x = PathRing::term(Scalar::int(2), 3, 2) - PathRing::c();
        assert_eq!(PathRing::from_terms(&x.terms()), x);
    }
}
