//! Scalar coefficients: exact rationals or double-precision complex numbers.
//!
//! Every polynomial, vector field and signature carries one [`Backend`].
//! Arithmetic between the two backends is never implicit; use
//! [`Coefficient::to_float`] to move an exact value onto the float backend.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Coefficient {
    Rational(BigRational),
    Complex(Complex64),
}

impl Coefficient {
    pub fn zero(backend: Backend) -> Self {
        Self::from_int(backend, 0)
    }

    pub fn one(backend: Backend) -> Self {
        Self::from_int(backend, 1)
    }

    pub fn from_int(backend: Backend, v: i64) -> Self {
        match backend {
            Backend::Exact => Coefficient::Rational(BigRational::from_integer(BigInt::from(v))),
            Backend::Float => Coefficient::Complex(Complex64::new(v as f64, 0.0)),
        }
    }

    pub fn rational(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(Coefficient::Rational(BigRational::new(
            BigInt::from(numer),
            BigInt::from(denom),
        )))
    }

    pub fn complex(re: f64, im: f64) -> Result<Self> {
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Coefficient::Complex(Complex64::new(re, im)))
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        Self::complex(z.re, z.im)
    }

    pub fn backend(&self) -> Backend {
        match self {
            Coefficient::Rational(_) => Backend::Exact,
            Coefficient::Complex(_) => Backend::Float,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coefficient::Rational(q) => q.is_zero(),
            Coefficient::Complex(z) => z.re == 0.0 && z.im == 0.0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coefficient::Rational(q) => q.is_one(),
            Coefficient::Complex(z) => z.re == 1.0 && z.im == 0.0,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Coefficient::Rational(_) => true,
            Coefficient::Complex(z) => z.re.is_finite() && z.im.is_finite(),
        }
    }

    /// Complex value of the coefficient (rationals are rounded to `f64`).
    pub fn to_complex(&self) -> Complex64 {
        match self {
            Coefficient::Rational(q) => Complex64::new(rational_to_f64(q), 0.0),
            Coefficient::Complex(z) => *z,
        }
    }

    pub fn to_float(&self) -> Coefficient {
        Coefficient::Complex(self.to_complex())
    }

    pub fn to_backend(&self, backend: Backend) -> Result<Coefficient> {
        match (self, backend) {
            (Coefficient::Rational(_), Backend::Exact) | (Coefficient::Complex(_), Backend::Float) => {
                Ok(self.clone())
            }
            (Coefficient::Rational(_), Backend::Float) => Ok(self.to_float()),
            (Coefficient::Complex(_), Backend::Exact) => Err(Error::BackendMismatch),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Coefficient::Rational(q) => Some(q),
            Coefficient::Complex(_) => None,
        }
    }

    pub fn abs(&self) -> f64 {
        match self {
            Coefficient::Rational(q) => rational_to_f64(&q.abs()),
            Coefficient::Complex(z) => z.norm(),
        }
    }

    pub fn same_backend(&self, other: &Coefficient) -> bool {
        self.backend() == other.backend()
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Coefficient> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Coefficient::Rational(q) => Coefficient::Rational(q.recip()),
            Coefficient::Complex(z) => Coefficient::Complex(z.inv()),
        })
    }

    pub fn checked_div(&self, rhs: &Coefficient) -> Result<Coefficient> {
        if !self.same_backend(rhs) {
            return Err(Error::BackendMismatch);
        }
        let inv = rhs
            .inv()
            .ok_or_else(|| Error::BadParameter("division by zero".into()))?;
        Ok(self * &inv)
    }

    pub fn powi(&self, exp: i64) -> Coefficient {
        if exp < 0 {
            let inv = self.inv().expect("negative power of zero");
            return inv.powi(-exp);
        }
        let mut acc = Coefficient::one(self.backend());
        let mut base = self.clone();
        let mut e = exp as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn scale_int(&self, v: i64) -> Coefficient {
        self * &Coefficient::from_int(self.backend(), v)
    }

    /// Sort key used for canonical orderings: (real part, imaginary part).
    pub fn sort_key(&self) -> (f64, f64) {
        let z = self.to_complex();
        (z.re, z.im)
    }

    /// Finds `p/q` with `q <= max_denom` and `|z - p/q| <= tol`, if any, for
    /// a value whose imaginary part is within `tol` of zero.
    pub fn reconstruct_rational(z: Complex64, max_denom: i64, tol: f64) -> Option<BigRational> {
        if z.im.abs() > tol || !z.re.is_finite() {
            return None;
        }
        for q in 1..=max_denom {
            let p = (z.re * q as f64).round();
            if p.abs() > 9.0e15 {
                return None;
            }
            if (z.re - p / q as f64).abs() <= tol {
                return Some(BigRational::new(BigInt::from(p as i64), BigInt::from(q)));
            }
        }
        None
    }
}

pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => q.to_f64().unwrap_or(f64::NAN),
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Coefficient> for &Coefficient {
            type Output = Coefficient;

            /// Panics if the operands live on different backends.
            fn $method(self, rhs: &Coefficient) -> Coefficient {
                match (self, rhs) {
                    (Coefficient::Rational(a), Coefficient::Rational(b)) => Coefficient::Rational(a $op b),
                    (Coefficient::Complex(a), Coefficient::Complex(b)) => Coefficient::Complex(a $op b),
                    _ => panic!("coefficient backend mismatch"),
                }
            }
        }

        impl $trait<Coefficient> for Coefficient {
            type Output = Coefficient;

            fn $method(self, rhs: Coefficient) -> Coefficient {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Div<&Coefficient> for &Coefficient {
    type Output = Coefficient;

    /// Panics on backend mismatch or division by zero.
    fn div(self, rhs: &Coefficient) -> Coefficient {
        self.checked_div(rhs).expect("coefficient division")
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;

    fn neg(self) -> Coefficient {
        match self {
            Coefficient::Rational(q) => Coefficient::Rational(-q),
            Coefficient::Complex(z) => Coefficient::Complex(-z),
        }
    }
}

impl Neg for Coefficient {
    type Output = Coefficient;

    fn neg(self) -> Coefficient {
        -&self
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Coefficient::Complex(z) => {
                if z.im == 0.0 {
                    write!(f, "{}", z.re)
                } else if z.im < 0.0 {
                    write!(f, "({}-{}i)", z.re, -z.im)
                } else {
                    write!(f, "({}+{}i)", z.re, z.im)
                }
            }
        }
    }
}

impl FromStr for Coefficient {
    type Err = Error;

    /// Parses `"p"` or `"p/q"` as an exact rational.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational numerator in {s:?}")))?;
        let den: BigInt = den
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational denominator in {s:?}")))?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(Coefficient::Rational(BigRational::new(num, den)))
    }
}

impl Serialize for Coefficient {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Coefficient::Rational(_) => serializer.serialize_str(&self.to_string()),
            Coefficient::Complex(z) => [z.re, z.im].serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for Coefficient {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Pair([f64; 2]),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Text(s) => s.parse().map_err(de::Error::custom),
            Repr::Pair([re, im]) => Coefficient::complex(re, im).map_err(de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_are_reduced() {
        let c = Coefficient::rational(6, -4).unwrap();
        assert_eq!(c.to_string(), "-3/2");
        let d: Coefficient = "12/8".parse().unwrap();
        assert_eq!(d, Coefficient::rational(3, 2).unwrap());
    }

    #[test]
    fn non_finite_complex_rejected() {
        assert_eq!(Coefficient::complex(f64::NAN, 0.0), Err(Error::NonFinite));
        assert!(serde_json::from_str::<Coefficient>("[1.0, 2.0]").is_ok());
    }

    #[test]
    fn json_forms() {
        let q = Coefficient::rational(-7, 3).unwrap();
        assert_eq!(serde_json::to_string(&q).unwrap(), "\"-7/3\"");
        let z = Coefficient::complex(0.5, -1.0).unwrap();
        assert_eq!(serde_json::to_string(&z).unwrap(), "[0.5,-1.0]");
        let back: Coefficient = serde_json::from_str("\"-7/3\"").unwrap();
        assert_eq!(back, q);
    }

    #[test]
    fn powers() {
        let two = Coefficient::from_int(Backend::Exact, 2);
        assert_eq!(two.powi(10), Coefficient::from_int(Backend::Exact, 1024));
        assert_eq!(two.powi(-2), Coefficient::rational(1, 4).unwrap());
    }

    #[test]
    fn rational_reconstruction() {
        let q = Coefficient::reconstruct_rational(Complex64::new(-1.0 / 3.0, 0.0), 64, 1e-10);
        assert_eq!(q, Some(BigRational::new((-1).into(), 3.into())));
        assert!(Coefficient::reconstruct_rational(Complex64::new(2f64.sqrt(), 0.0), 64, 1e-10).is_none());
    }

    #[test]
    #[should_panic(expected = "backend mismatch")]
    fn mixed_arithmetic_panics() {
        let _ = &Coefficient::from_int(Backend::Exact, 1) + &Coefficient::from_int(Backend::Float, 1);
    }
}
