//! Sparse Laurent polynomials in one variable `t`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::coeff::{Backend, Coefficient};
use crate::error::{Error, Result};

/// A Laurent polynomial `sum c_m t^m` with finitely many nonzero terms.
///
/// The term map never stores a zero coefficient, so the zero polynomial is
/// the empty map. All coefficients share the polynomial's backend.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPoly {
    backend: Backend,
    terms: BTreeMap<i64, Coefficient>,
}

impl LaurentPoly {
    pub fn zero(backend: Backend) -> Self {
        LaurentPoly {
            backend,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(backend: Backend) -> Self {
        Self::monomial(0, Coefficient::one(backend))
    }

    /// `c t^exp`.
    pub fn monomial(exp: i64, c: Coefficient) -> Self {
        let backend = c.backend();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { backend, terms }
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, summing
    /// repeated exponents.
    pub fn from_terms<I>(backend: Backend, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, Coefficient)>,
    {
        let mut map: BTreeMap<i64, Coefficient> = BTreeMap::new();
        for (e, c) in terms {
            if c.backend() != backend {
                return Err(Error::BackendMismatch);
            }
            if !c.is_finite() {
                return Err(Error::NonFinite);
            }
            match map.get_mut(&e) {
                Some(slot) => *slot = &*slot + &c,
                None => {
                    map.insert(e, c);
                }
            }
        }
        map.retain(|_, c| !c.is_zero());
        Ok(LaurentPoly { backend, terms: map })
    }

    /// Convenience constructor from integer coefficients.
    pub fn from_ints(backend: Backend, terms: &[(i64, i64)]) -> Self {
        Self::from_terms(
            backend,
            terms.iter().map(|&(e, c)| (e, Coefficient::from_int(backend, c))),
        )
        .expect("integer coefficients are valid on either backend")
    }

    /// `(t - a_1)(t - a_2)...(t - a_n)`.
    pub fn from_roots(backend: Backend, roots: &[Coefficient]) -> Result<Self> {
        let mut acc = Self::one(backend);
        for a in roots {
            if a.backend() != backend {
                return Err(Error::BackendMismatch);
            }
            let lin = Self::from_terms(backend, [(1, Coefficient::one(backend)), (0, -a)])?;
            acc = &acc * &lin;
        }
        Ok(acc)
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &Coefficient)> + '_ {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn coeff(&self, exp: i64) -> Coefficient {
        self.terms
            .get(&exp)
            .cloned()
            .unwrap_or_else(|| Coefficient::zero(self.backend))
    }

    fn check_backend(&self, other: &LaurentPoly) -> Result<()> {
        if self.backend == other.backend {
            Ok(())
        } else {
            Err(Error::BackendMismatch)
        }
    }

    pub fn checked_add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_backend(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_backend(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_backend(other)?;
        Ok(self * other)
    }

    pub fn scale(&self, c: &Coefficient) -> Result<LaurentPoly> {
        if c.backend() != self.backend {
            return Err(Error::BackendMismatch);
        }
        Ok(self.map_coefficients(|x| x * c))
    }

    fn map_coefficients(&self, f: impl Fn(&Coefficient) -> Coefficient) -> LaurentPoly {
        let mut terms = BTreeMap::new();
        for (&e, c) in &self.terms {
            let v = f(c);
            if !v.is_zero() {
                terms.insert(e, v);
            }
        }
        LaurentPoly {
            backend: self.backend,
            terms,
        }
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i64) -> LaurentPoly {
        LaurentPoly {
            backend: self.backend,
            terms: self.terms.iter().map(|(&e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Applies an injective map to the exponents and rescales each term.
    pub(crate) fn remap_terms(&self, f: impl Fn(i64, &Coefficient) -> (i64, Coefficient)) -> LaurentPoly {
        let mut terms = BTreeMap::new();
        for (&e, c) in &self.terms {
            let (e2, c2) = f(e, c);
            if !c2.is_zero() {
                let prev = terms.insert(e2, c2);
                debug_assert!(prev.is_none(), "exponent map must be injective");
            }
        }
        LaurentPoly {
            backend: self.backend,
            terms,
        }
    }

    pub fn pow(&self, exp: u32) -> LaurentPoly {
        let mut acc = LaurentPoly::one(self.backend);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// The degree operator `t d/dt`: `c t^m -> m c t^m`.
    pub fn theta(&self) -> LaurentPoly {
        self.remap_terms(|e, c| (e, c.scale_int(e)))
    }

    /// `(deg1, deg2)`: the highest and lowest exponents present.
    pub fn deg_bounds(&self) -> Result<(i64, i64)> {
        match (self.terms.keys().next_back(), self.terms.keys().next()) {
            (Some(&hi), Some(&lo)) => Ok((hi, lo)),
            _ => Err(Error::UndefinedDegree),
        }
    }

    pub fn deg1(&self) -> Result<i64> {
        self.deg_bounds().map(|(hi, _)| hi)
    }

    pub fn deg2(&self) -> Result<i64> {
        self.deg_bounds().map(|(_, lo)| lo)
    }

    pub fn leading_coefficient(&self) -> Result<&Coefficient> {
        self.terms
            .values()
            .next_back()
            .ok_or(Error::UndefinedDegree)
    }

    pub fn lowest_coefficient(&self) -> Result<&Coefficient> {
        self.terms.values().next().ok_or(Error::UndefinedDegree)
    }

    /// Returns `(p / lambda, lambda)` where `lambda` is the coefficient of the
    /// highest power of `t`.
    pub fn monic_normalize(&self) -> Result<(LaurentPoly, Coefficient)> {
        let lead = self.leading_coefficient()?.clone();
        let inv = lead.inv().expect("stored coefficients are nonzero");
        let mut monic = self.map_coefficients(|c| c * &inv);
        // Pin the leading coefficient to exactly one on the float backend.
        if let Some((_, c)) = monic.terms.iter_mut().next_back() {
            *c = Coefficient::one(self.backend);
        }
        Ok((monic, lead))
    }

    pub fn evaluate(&self, x: &Coefficient) -> Result<Coefficient> {
        if x.backend() != self.backend {
            return Err(Error::BackendMismatch);
        }
        if self.is_zero() {
            return Ok(Coefficient::zero(self.backend));
        }
        let (_, lo) = self.deg_bounds()?;
        if x.is_zero() {
            if lo < 0 {
                return Err(Error::PoleAtZero);
            }
            return Ok(self.coeff(0));
        }
        let mut acc = Coefficient::zero(self.backend);
        for (&e, c) in &self.terms {
            acc = &acc + &(c * &x.powi(e));
        }
        Ok(acc)
    }

    /// Same polynomial on the float backend.
    pub fn to_float(&self) -> LaurentPoly {
        LaurentPoly {
            backend: Backend::Float,
            terms: self
                .terms
                .iter()
                .map(|(&e, c)| (e, c.to_float()))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    pub fn to_backend(&self, backend: Backend) -> Result<LaurentPoly> {
        match (self.backend, backend) {
            (a, b) if a == b => Ok(self.clone()),
            (Backend::Exact, Backend::Float) => Ok(self.to_float()),
            _ => Err(Error::BackendMismatch),
        }
    }

    /// Largest coefficient modulus; zero for the zero polynomial.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(Coefficient::abs).fold(0.0, f64::max)
    }

    /// Drops coefficients with modulus at most `rel_tol * max_abs()`.
    /// Exact polynomials are returned unchanged.
    pub fn chop(&self, rel_tol: f64) -> LaurentPoly {
        if self.backend == Backend::Exact {
            return self.clone();
        }
        let cutoff = rel_tol * self.max_abs();
        LaurentPoly {
            backend: self.backend,
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| c.abs() > cutoff)
                .map(|(&e, c)| (e, c.clone()))
                .collect(),
        }
    }

    /// Max-coefficient distance, computed in complex arithmetic.
    pub fn distance(&self, other: &LaurentPoly) -> f64 {
        let mut exps: Vec<i64> = self.terms.keys().chain(other.terms.keys()).copied().collect();
        exps.sort_unstable();
        exps.dedup();
        exps.into_iter()
            .map(|e| (self.coeff(e).to_complex() - other.coeff(e).to_complex()).norm())
            .fold(0.0, f64::max)
    }

    /// Dense coefficient vector of `t^(-deg2) p`, lowest power first.
    pub(crate) fn dense_shifted(&self) -> Result<(i64, Vec<Coefficient>)> {
        let (hi, lo) = self.deg_bounds()?;
        let mut out = vec![Coefficient::zero(self.backend); (hi - lo + 1) as usize];
        for (&e, c) in &self.terms {
            out[(e - lo) as usize] = c.clone();
        }
        Ok((lo, out))
    }
}

fn merge(a: &LaurentPoly, b: &LaurentPoly, negate_b: bool) -> LaurentPoly {
    assert_eq!(a.backend, b.backend, "polynomial backend mismatch");
    let mut terms = a.terms.clone();
    for (&e, c) in &b.terms {
        let c = if negate_b { -c } else { c.clone() };
        match terms.get_mut(&e) {
            Some(slot) => {
                let v = &*slot + &c;
                if v.is_zero() {
                    terms.remove(&e);
                } else {
                    *slot = v;
                }
            }
            None => {
                terms.insert(e, c);
            }
        }
    }
    LaurentPoly {
        backend: a.backend,
        terms,
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;

    /// Panics on backend mismatch; see [`LaurentPoly::checked_add`].
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        merge(self, rhs, false)
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        merge(self, rhs, true)
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;

    /// Panics on backend mismatch; see [`LaurentPoly::checked_mul`].
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.backend, rhs.backend, "polynomial backend mismatch");
        let mut terms: BTreeMap<i64, Coefficient> = BTreeMap::new();
        for (&ea, ca) in &self.terms {
            for (&eb, cb) in &rhs.terms {
                let prod = ca * cb;
                match terms.get_mut(&(ea + eb)) {
                    Some(slot) => *slot = &*slot + &prod,
                    None => {
                        terms.insert(ea + eb, prod);
                    }
                }
            }
        }
        terms.retain(|_, c| !c.is_zero());
        LaurentPoly {
            backend: self.backend,
            terms,
        }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        self.map_coefficients(|c| -c)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*t")?,
                _ => write!(f, "{c}*t^{e}")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct LaurentRepr {
    terms: Vec<(i64, Coefficient)>,
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        LaurentRepr {
            terms: self.terms.iter().map(|(&e, c)| (e, c.clone())).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    /// An empty term list deserializes to the exact zero polynomial.
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = LaurentRepr::deserialize(deserializer)?;
        let backend = repr
            .terms
            .first()
            .map(|(_, c)| c.backend())
            .unwrap_or(Backend::Exact);
        let mut seen = std::collections::BTreeSet::new();
        for (e, _) in &repr.terms {
            if !seen.insert(*e) {
                return Err(de::Error::custom(format!("repeated exponent {e}")));
            }
        }
        LaurentPoly::from_terms(backend, repr.terms).map_err(de::Error::custom)
    }
}
