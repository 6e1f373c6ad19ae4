//! Gaussian rationals a + b·i with a, b ∈ ℚ.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{Inv, One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseScalarError;
use crate::field::{Field, Ring};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    pub re: Rational,
    pub im: Rational,
}

impl Scalar {
    pub fn new(re: Rational, im: Rational) -> Scalar {
        Scalar { re, im }
    }

    pub fn real(re: Rational) -> Scalar {
        Scalar { re, im: Rational::zero() }
    }

    pub fn int(n: i64) -> Scalar {
        Scalar::real(Rational::from_integer(n))
    }

    pub fn frac(n: i64, d: i64) -> Scalar {
        Scalar::real(Rational::new(n, d))
    }

    pub fn gaussian(re: i64, im: i64) -> Scalar {
        Scalar::new(Rational::from_integer(re), Rational::from_integer(im))
    }

    pub fn i() -> Scalar {
        Scalar::gaussian(0, 1)
    }

    pub fn conj(&self) -> Scalar {
        Scalar::new(self.re.clone(), self.im.neg_ref())
    }

    /// |z|², always rational.
    pub fn norm_sqr(&self) -> Rational {
        self.re.mul_ref(&self.re).add_ref(&self.im.mul_ref(&self.im))
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// The value as an integer if it is one (real with unit denominator).
    pub fn as_integer(&self) -> Option<i64> {
        if self.im.is_zero() {
            self.re.to_i64()
        } else {
            None
        }
    }

    pub fn is_gaussian_integer(&self) -> bool {
        self.re.is_integer() && self.im.is_integer()
    }

    pub fn scale(&self, r: &Rational) -> Scalar {
        Scalar::new(self.re.mul_ref(r), self.im.mul_ref(r))
    }
}

impl Zero for Scalar {
    fn zero() -> Scalar {
        Scalar::new(Rational::zero(), Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for Scalar {
    fn one() -> Scalar {
        Scalar::int(1)
    }
}

impl Ring for Scalar {
    fn add_ref(&self, o: &Scalar) -> Scalar {
        Scalar::new(self.re.add_ref(&o.re), self.im.add_ref(&o.im))
    }

    fn sub_ref(&self, o: &Scalar) -> Scalar {
        Scalar::new(self.re.sub_ref(&o.re), self.im.sub_ref(&o.im))
    }

    fn mul_ref(&self, o: &Scalar) -> Scalar {
        if self.im.is_zero() && o.im.is_zero() {
            return Scalar::real(self.re.mul_ref(&o.re));
        }
        let re = self.re.mul_ref(&o.re).sub_ref(&self.im.mul_ref(&o.im));
        let im = self.re.mul_ref(&o.im).add_ref(&self.im.mul_ref(&o.re));
        Scalar::new(re, im)
    }

    fn add_mul(&mut self, a: &Scalar, b: &Scalar) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let p = a.mul_ref(b);
        self.re = self.re.add_ref(&p.re);
        self.im = self.im.add_ref(&p.im);
    }
}

impl Field for Scalar {
    fn inv(&self) -> Option<Scalar> {
        let n = self.norm_sqr().recip()?;
        Some(self.conj().scale(&n))
    }
}

impl Inv for Scalar {
    type Output = Option<Scalar>;
    fn inv(self) -> Option<Scalar> {
        Field::inv(&self)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        self.add_ref(&o)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        self.sub_ref(&o)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        self.mul_ref(&o)
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, o: Scalar) -> Scalar {
        self.div_ref(&o).expect("division by zero")
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(self.re.neg_ref(), self.im.neg_ref())
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Scalar {
        Scalar::int(n)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Scalar {
        Scalar::real(r)
    }
}

/// Canonical text: `0`, `3/4`, `i`, `-i`, `1/2*i`, `1-2*i`, `-1/2+3/4*i`.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        let im_abs = self.im.abs();
        let im_text = if im_abs.is_one() { "i".to_string() } else { format!("{im_abs}*i") };
        if self.re.is_zero() {
            if self.im.is_negative() {
                write!(f, "-{im_text}")
            } else {
                write!(f, "{im_text}")
            }
        } else {
            let sign = if self.im.is_negative() { '-' } else { '+' };
            write!(f, "{}{sign}{im_text}", self.re)
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_imag(body: &str) -> Option<Rational> {
    let coeff = body.strip_suffix('i')?.trim_end();
    let coeff = coeff.strip_suffix('*').unwrap_or(coeff).trim();
    match coeff {
        "" | "+" => Some(Rational::one()),
        "-" => Some(-Rational::one()),
        c => Rational::parse(c),
    }
}

impl FromStr for Scalar {
    type Err = ParseScalarError;

    fn from_str(text: &str) -> Result<Scalar, ParseScalarError> {
        let err = || ParseScalarError(text.to_string());
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(err());
        }
        if !t.ends_with('i') {
            return Rational::parse(&t).map(Scalar::real).ok_or_else(err);
        }
        // The split point is the last sign that is not at position 0.
        let split = t
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(k, _)| k)
            .last();
        match split {
            Some(k) => {
                let re = Rational::parse(&t[..k]).ok_or_else(err)?;
                let im = parse_imag(&t[k..]).ok_or_else(err)?;
                Ok(Scalar::new(re, im))
            }
            None => parse_imag(&t).map(|im| Scalar::new(Rational::zero(), im)).ok_or_else(err),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Scalar, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(i64),
        }
        match Raw::deserialize(d)? {
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
            Raw::Int(n) => Ok(Scalar::int(n)),
        }
    }
}
