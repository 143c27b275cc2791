//! Parameter space of the `s(mu)` subalgebras and the `z(m)` subalgebras.
//!
//! A signature `mu = (n, k, r, a)` consists of an exponent vector
//! `r in Gamma(n, k)` and a point `a` of `V(r)` with nonzero coordinates.
//! From it we build `P = prod (t - a_i)` and
//! `Q = t^(-|r|) prod_{i<=k} (t - a_i)^(r_i + 1)`, which satisfy
//! `[P D, Q D] = c Q D` with `c = (-1)^(n+1) |r| a_1 ... a_n`.

use std::fmt;

use num_complex::Complex64;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::coeff::{Backend, Coefficient};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::witt::{bracket, VectorField};

/// Default relative tolerance for float membership tests.
pub const DEFAULT_MU_TOL: f64 = 1e-8;
/// Relative residual allowed in the bracket identity on float signatures.
pub const BRACKET_TOL: f64 = 1e-8;

/// An element of `Gamma(n, k)`: `k` positive entries followed by `n - k`
/// entries equal to `-1`, with total at least `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RVector {
    k: usize,
    r: Vec<i64>,
}

fn gamma_violation(n: usize, k: usize, r: &[i64]) -> Option<String> {
    if r.len() != n {
        return Some(format!("expected {n} entries, got {}", r.len()));
    }
    if k == 0 || k > n {
        return Some(format!("need 1 <= k <= n, got k = {k}"));
    }
    if let Some(i) = r[..k].iter().position(|&x| x < 1) {
        return Some(format!("entry {} must be a positive integer", i + 1));
    }
    if let Some(i) = r[k..].iter().position(|&x| x != -1) {
        return Some(format!("entry {} must equal -1", k + i + 1));
    }
    let total: i64 = r.iter().sum();
    if total < k as i64 {
        return Some(format!("|r| = {total} < k = {k}"));
    }
    None
}

pub fn gamma_contains(n: usize, k: usize, r: &[i64]) -> bool {
    gamma_violation(n, k, r).is_none()
}

impl RVector {
    pub fn new(k: usize, r: Vec<i64>) -> Result<Self> {
        let n = r.len();
        match gamma_violation(n, k, &r) {
            Some(reason) => Err(Error::NotInGamma { n, k, r, reason }),
            None => Ok(RVector { k, r }),
        }
    }

    /// Infers `k` as the number of leading positive entries.
    pub fn from_entries(r: Vec<i64>) -> Result<Self> {
        let k = r.iter().take_while(|&&x| x >= 1).count();
        Self::new(k, r)
    }

    pub fn n(&self) -> usize {
        self.r.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn entries(&self) -> &[i64] {
        &self.r
    }

    /// `|r| = r_1 + ... + r_n`.
    pub fn abs(&self) -> i64 {
        self.r.iter().sum()
    }
}

impl fmt::Display for RVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.r.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::BadTolerance(tol))
    }
}

fn check_point(r: &RVector, a: &[Coefficient]) -> Result<Backend> {
    if a.len() != r.n() {
        return Err(Error::BadParameter(format!(
            "point has {} coordinates, r has {}",
            a.len(),
            r.n()
        )));
    }
    let backend = a[0].backend();
    if a.iter().any(|x| x.backend() != backend) {
        return Err(Error::BackendMismatch);
    }
    Ok(backend)
}

fn max_modulus(a: &[Coefficient]) -> f64 {
    a.iter().map(Coefficient::abs).fold(0.0, f64::max)
}

/// Relative residual of the weighted power sums `sum_j r_j a_j^i`,
/// `i = 1..n-1`: each sum is divided by `sum_j |r_j| max|a|^i`.
pub fn power_sum_residual(r: &[i64], a: &[Complex64]) -> f64 {
    let m = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if m == 0.0 {
        return 0.0;
    }
    let weight: f64 = r.iter().map(|&x| x.abs() as f64).sum();
    let mut powers: Vec<Complex64> = a.to_vec();
    let mut worst: f64 = 0.0;
    for i in 1..r.len() {
        let s: Complex64 = r.iter().zip(&powers).map(|(&rj, p)| p * rj as f64).sum();
        worst = worst.max(s.norm() / (weight * m.powi(i as i32)));
        for (p, z) in powers.iter_mut().zip(a) {
            *p *= z;
        }
    }
    worst
}

/// Membership in `V(r)`: the weighted power sums vanish for `i = 1..n-1`.
pub fn vr_contains(r: &RVector, a: &[Coefficient], tol: f64) -> Result<bool> {
    check_tol(tol)?;
    let backend = check_point(r, a)?;
    match backend {
        Backend::Exact => {
            let mut powers: Vec<Coefficient> = a.to_vec();
            for _ in 1..r.n() {
                let mut s = Coefficient::zero(backend);
                for (&rj, p) in r.entries().iter().zip(&powers) {
                    s = &s + &p.scale_int(rj);
                }
                if !s.is_zero() {
                    return Ok(false);
                }
                for (p, x) in powers.iter_mut().zip(a) {
                    *p = &*p * x;
                }
            }
            Ok(true)
        }
        Backend::Float => {
            let z: Vec<Complex64> = a.iter().map(Coefficient::to_complex).collect();
            Ok(power_sum_residual(r.entries(), &z) <= tol)
        }
    }
}

/// Membership in `V(r)^x`: in `V(r)` with every coordinate nonzero.
pub fn vr_cross_contains(r: &RVector, a: &[Coefficient], tol: f64) -> Result<bool> {
    if !vr_contains(r, a, tol)? {
        return Ok(false);
    }
    Ok(match a[0].backend() {
        Backend::Exact => a.iter().all(|x| !x.is_zero()),
        Backend::Float => {
            let m = max_modulus(a);
            m > 0.0 && a.iter().all(|x| x.abs() > tol * m)
        }
    })
}

/// The product form of the defining equations:
/// `r_i prod_{j != i} (a_j - a_i) = |r| prod_{j != i} a_j` for every `i`.
pub fn check_product_condition(r: &RVector, a: &[Coefficient], tol: f64) -> Result<bool> {
    check_tol(tol)?;
    let backend = check_point(r, a)?;
    if let Some(i) = a.iter().position(Coefficient::is_zero) {
        return Err(Error::RequiresNonzero(i));
    }
    let abs_r = Coefficient::from_int(backend, r.abs());
    for (i, ai) in a.iter().enumerate() {
        let mut lhs = Coefficient::from_int(backend, r.entries()[i]);
        let mut rhs = abs_r.clone();
        for (j, aj) in a.iter().enumerate() {
            if j != i {
                lhs = &lhs * &(aj - ai);
                rhs = &rhs * aj;
            }
        }
        let holds = match backend {
            Backend::Exact => lhs == rhs,
            Backend::Float => {
                let scale = lhs.abs().max(rhs.abs());
                (&lhs - &rhs).abs() <= tol * scale
            }
        };
        if !holds {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A validated signature `mu = (n, k, r, a)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MuSignature {
    r: RVector,
    a: Vec<Coefficient>,
}

pub fn make_mu(n: usize, k: usize, r: Vec<i64>, a: Vec<Coefficient>, tol: f64) -> Result<MuSignature> {
    check_tol(tol)?;
    if r.len() != n {
        return Err(Error::NotInGamma {
            n,
            k,
            reason: format!("expected {n} entries, got {}", r.len()),
            r,
        });
    }
    let r = RVector::new(k, r)?;
    MuSignature::new(r, a, tol)
}

impl MuSignature {
    pub fn new(r: RVector, a: Vec<Coefficient>, tol: f64) -> Result<Self> {
        check_tol(tol)?;
        let backend = check_point(&r, &a)?;
        if !vr_contains(&r, &a, tol)? {
            return Err(Error::NotInVCross("weighted power sums do not vanish".into()));
        }
        if !vr_cross_contains(&r, &a, tol)? {
            return Err(Error::NotInVCross("a coordinate is zero".into()));
        }
        let m = max_modulus(&a);
        for i in 0..a.len() {
            for j in (i + 1)..a.len() {
                let same = match backend {
                    Backend::Exact => a[i] == a[j],
                    Backend::Float => (&a[i] - &a[j]).abs() <= tol * m,
                };
                if same {
                    return Err(Error::RepeatedCoordinate(i, j));
                }
            }
        }
        Ok(MuSignature { r, a })
    }

    pub fn r(&self) -> &RVector {
        &self.r
    }

    pub fn a(&self) -> &[Coefficient] {
        &self.a
    }

    pub fn n(&self) -> usize {
        self.r.n()
    }

    pub fn k(&self) -> usize {
        self.r.k()
    }

    pub fn backend(&self) -> Backend {
        self.a[0].backend()
    }

    pub fn to_float(&self) -> MuSignature {
        MuSignature {
            r: self.r.clone(),
            a: self.a.iter().map(Coefficient::to_float).collect(),
        }
    }

    /// `(n, k, r, c a)`, again a valid signature for `c != 0`. Mixing an
    /// exact signature with a float factor gives a float signature.
    pub fn scaled(&self, c: &Coefficient, tol: f64) -> Result<MuSignature> {
        let base = if c.backend() == self.backend() { self.clone() } else { self.to_float() };
        let c = c.to_backend(base.backend())?;
        let a = base.a.iter().map(|x| x * &c).collect();
        MuSignature::new(self.r.clone(), a, tol)
    }

    /// `(n, n, s r, a)` for `n = k`.
    pub fn with_r_multiplied(&self, s: i64, tol: f64) -> Result<MuSignature> {
        if self.k() != self.n() || s < 1 {
            return Err(Error::BadParameter("r multiplication needs n = k and s >= 1".into()));
        }
        let r = RVector::new(self.k(), self.r.entries().iter().map(|x| x * s).collect())?;
        MuSignature::new(r, self.a.clone(), tol)
    }
}

#[derive(Serialize, Deserialize)]
struct MuRepr {
    n: usize,
    k: usize,
    r: Vec<i64>,
    a: Vec<Coefficient>,
}

impl Serialize for MuSignature {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MuRepr {
            n: self.n(),
            k: self.k(),
            r: self.r.entries().to_vec(),
            a: self.a.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MuSignature {
    /// Validates with [`DEFAULT_MU_TOL`].
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = MuRepr::deserialize(deserializer)?;
        make_mu(repr.n, repr.k, repr.r, repr.a, DEFAULT_MU_TOL).map_err(de::Error::custom)
    }
}

/// `P = (t - a_1)...(t - a_n)`.
pub fn build_p(mu: &MuSignature) -> LaurentPoly {
    LaurentPoly::from_roots(mu.backend(), &mu.a).expect("signature coordinates share a backend")
}

/// `Q = t^(-|r|) (t - a_1)^(r_1+1) ... (t - a_k)^(r_k+1)`.
pub fn build_q(mu: &MuSignature) -> LaurentPoly {
    let backend = mu.backend();
    let mut q = LaurentPoly::one(backend);
    for (ai, &ri) in mu.a.iter().zip(mu.r.entries()).take(mu.k()) {
        let lin = LaurentPoly::from_roots(backend, std::slice::from_ref(ai)).expect("same backend");
        q = &q * &lin.pow((ri + 1) as u32);
    }
    let q = q.shift(-mu.r.abs());
    debug_assert_eq!(q.deg1().ok(), Some(mu.n() as i64));
    debug_assert_eq!(q.deg2().ok(), Some(-mu.r.abs()));
    q
}

/// `c = (-1)^(n+1) |r| a_1 ... a_n`.
pub fn c_mu(mu: &MuSignature) -> Coefficient {
    let backend = mu.backend();
    let sign = if mu.n() % 2 == 1 { 1 } else { -1 };
    let mut c = Coefficient::from_int(backend, sign * mu.r.abs());
    for a in &mu.a {
        c = &c * a;
    }
    c
}

/// `F(t) = -|r| prod_j (t - a_j) + sum_l r_l t prod_{j != l} (t - a_j)`,
/// the factor with `[P D, Q D] = F Q D`; constant and equal to `c` on
/// `V(r)^x`.
pub fn bracket_factor(mu: &MuSignature) -> LaurentPoly {
    let backend = mu.backend();
    let mut f = build_p(mu)
        .scale(&Coefficient::from_int(backend, -mu.r.abs()))
        .expect("same backend");
    for l in 0..mu.n() {
        let others: Vec<Coefficient> = mu
            .a
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != l)
            .map(|(_, x)| x.clone())
            .collect();
        let term = LaurentPoly::from_roots(backend, &others)
            .expect("same backend")
            .shift(1)
            .scale(&Coefficient::from_int(backend, mu.r.entries()[l]))
            .expect("same backend");
        f = &f + &term;
    }
    f
}

/// `z(m) = span{D, t^m D}` or `s(mu) = span{P D, Q D}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SubalgebraDescriptor {
    Zm {
        m: i64,
    },
    Smu {
        mu: MuSignature,
        #[serde(rename = "P")]
        p: LaurentPoly,
        #[serde(rename = "Q")]
        q: LaurentPoly,
        c: Coefficient,
    },
}

impl SubalgebraDescriptor {
    pub fn zm(m: i64) -> Result<Self> {
        if m == 0 {
            return Err(Error::BadParameter("z(m) needs m != 0".into()));
        }
        Ok(SubalgebraDescriptor::Zm { m })
    }

    /// The defining basis: `(D, t^m D)` or `(P D, Q D)`.
    pub fn basis(&self, backend: Backend) -> [VectorField; 2] {
        match self {
            SubalgebraDescriptor::Zm { m } => [
                VectorField::new(LaurentPoly::one(backend)),
                VectorField::new(LaurentPoly::monomial(*m, Coefficient::one(backend))),
            ],
            SubalgebraDescriptor::Smu { p, q, .. } => {
                [VectorField::new(p.clone()), VectorField::new(q.clone())]
            }
        }
    }
}

/// Builds `s(mu)` and certifies `[P D, Q D] = c Q D` (exactly, or with
/// relative residual at most [`BRACKET_TOL`] on the float backend).
pub fn build_subalgebra(mu: &MuSignature) -> Result<SubalgebraDescriptor> {
    let p = build_p(mu);
    let q = build_q(mu);
    let c = c_mu(mu);
    let residual = bracket_residual(&p, &q, &c)?;
    let ok = match mu.backend() {
        Backend::Exact => residual == 0.0,
        Backend::Float => residual <= BRACKET_TOL,
    };
    if !ok {
        return Err(Error::VerificationFailed(format!(
            "[P D, Q D] - c Q D has relative residual {residual:e}"
        )));
    }
    Ok(SubalgebraDescriptor::Smu {
        mu: mu.clone(),
        p,
        q,
        c,
    })
}

/// `max|[P D, Q D] - c Q D| / max|Q|`; exactly zero when the identity holds
/// over the rationals.
pub fn bracket_residual(p: &LaurentPoly, q: &LaurentPoly, c: &Coefficient) -> Result<f64> {
    let lhs = bracket(&VectorField::new(p.clone()), &VectorField::new(q.clone()))?;
    let rhs = q.scale(c)?;
    let diff = lhs.poly.checked_sub(&rhs)?;
    if diff.is_zero() {
        return Ok(0.0);
    }
    Ok(diff.max_abs() / q.max_abs())
}

fn quantize(x: f64, quantum: f64) -> i64 {
    (x / quantum).round() as i64
}

/// Sorts the pairs `(r_i, a_i)` by `r_i` descending, then by `a_i`
/// (real part, imaginary part) ascending. Float coordinates are compared
/// on a grid of `1e-9 * max|a|` so that rounding noise does not reorder
/// values that agree in theory.
pub fn canonicalize_mu(mu: &MuSignature) -> MuSignature {
    let quantum = 1e-9 * max_modulus(&mu.a).max(f64::MIN_POSITIVE);
    let mut idx: Vec<usize> = (0..mu.n()).collect();
    let r = mu.r.entries();
    idx.sort_by(|&i, &j| {
        r[j].cmp(&r[i]).then_with(|| match (&mu.a[i], &mu.a[j]) {
            (Coefficient::Rational(x), Coefficient::Rational(y)) => x.cmp(y),
            (x, y) => {
                let (zx, zy) = (x.to_complex(), y.to_complex());
                quantize(zx.re, quantum)
                    .cmp(&quantize(zy.re, quantum))
                    .then(quantize(zx.im, quantum).cmp(&quantize(zy.im, quantum)))
                    .then(zx.re.total_cmp(&zy.re))
                    .then(zx.im.total_cmp(&zy.im))
            }
        })
    });
    MuSignature {
        r: RVector {
            k: mu.k(),
            r: idx.iter().map(|&i| r[i]).collect(),
        },
        a: idx.iter().map(|&i| mu.a[i].clone()).collect(),
    }
}

fn coordinates_match(x: &Coefficient, y: &Coefficient, tol: f64) -> bool {
    match (x, y) {
        (Coefficient::Rational(p), Coefficient::Rational(q)) => p == q,
        _ => {
            let (zx, zy) = (x.to_complex(), y.to_complex());
            (zx - zy).norm() <= tol * zx.norm().max(zy.norm()).max(1.0)
        }
    }
}

/// Equality of subalgebras: `z(m) = z(m')` iff `m = m'`; `s(mu) = s(mu')`
/// iff the signatures agree up to a permutation of the pairs `(r_i, a_i)`;
/// a `z` never equals an `s`.
pub fn descriptors_equal(d1: &SubalgebraDescriptor, d2: &SubalgebraDescriptor, tol: f64) -> bool {
    match (d1, d2) {
        (SubalgebraDescriptor::Zm { m: a }, SubalgebraDescriptor::Zm { m: b }) => a == b,
        (SubalgebraDescriptor::Smu { mu: x, .. }, SubalgebraDescriptor::Smu { mu: y, .. }) => {
            mu_equivalent(x, y, tol)
        }
        _ => false,
    }
}

/// Whether two signatures are related by the permutation action.
pub fn mu_equivalent(x: &MuSignature, y: &MuSignature, tol: f64) -> bool {
    if x.n() != y.n() || x.k() != y.k() {
        return false;
    }
    let mut rx = x.r.entries().to_vec();
    let mut ry = y.r.entries().to_vec();
    rx.sort_unstable();
    ry.sort_unstable();
    if rx != ry {
        return false;
    }
    let mut used = vec![false; y.n()];
    for (i, ax) in x.a.iter().enumerate() {
        let ri = x.r.entries()[i];
        let hit = (0..y.n()).find(|&j| !used[j] && y.r.entries()[j] == ri && coordinates_match(ax, &y.a[j], tol));
        match hit {
            Some(j) => used[j] = true,
            None => return false,
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Backend = Backend::Exact;

    fn ints(v: &[i64]) -> Vec<Coefficient> {
        v.iter().map(|&x| Coefficient::from_int(Q, x)).collect()
    }

    fn rv(r: &[i64]) -> RVector {
        RVector::from_entries(r.to_vec()).unwrap()
    }

    fn mu(r: &[i64], a: &[i64]) -> MuSignature {
        MuSignature::new(rv(r), ints(a), DEFAULT_MU_TOL).unwrap()
    }

    fn poly(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_ints(Q, terms)
    }

    #[test]
    fn gamma_membership() {
        assert!(gamma_contains(4, 2, &[2, 2, -1, -1]));
        assert!(!gamma_contains(4, 2, &[1, 2, -1, -1]));
        assert!(gamma_contains(1, 1, &[1]));
        assert!(!gamma_contains(2, 1, &[1, 1]));
        assert!(!gamma_contains(2, 3, &[1, 1]));
        assert!(!gamma_contains(3, 2, &[2, 0, -1]));
    }

    #[test]
    fn vr_membership() {
        let r = rv(&[2, 2, -1, -1]);
        assert!(vr_contains(&r, &ints(&[1, 0, 1, 1]), DEFAULT_MU_TOL).unwrap());
        assert!(!vr_cross_contains(&r, &ints(&[1, 0, 1, 1]), DEFAULT_MU_TOL).unwrap());
        let r = rv(&[1, 1]);
        assert!(vr_contains(&r, &ints(&[1, -1]), DEFAULT_MU_TOL).unwrap());
        assert!(!vr_contains(&r, &ints(&[1, 1]), DEFAULT_MU_TOL).unwrap());
        assert!(vr_cross_contains(&r, &ints(&[1, -1]), DEFAULT_MU_TOL).unwrap());
        assert!(vr_cross_contains(&rv(&[2, 1, -1]), &ints(&[2, -1, 3]), DEFAULT_MU_TOL).unwrap());
        assert!(matches!(
            vr_contains(&r, &ints(&[1, -1]), 0.0),
            Err(Error::BadTolerance(_))
        ));
    }

    #[test]
    fn product_condition() {
        let r = rv(&[1, 1]);
        assert!(check_product_condition(&r, &ints(&[1, -1]), DEFAULT_MU_TOL).unwrap());
        assert!(!check_product_condition(&r, &ints(&[1, 1]), DEFAULT_MU_TOL).unwrap());
        assert!(check_product_condition(&rv(&[2, 1, -1]), &ints(&[2, -1, 3]), DEFAULT_MU_TOL).unwrap());
        assert_eq!(
            check_product_condition(&r, &ints(&[0, 1]), DEFAULT_MU_TOL),
            Err(Error::RequiresNonzero(0))
        );
    }

    #[test]
    fn make_mu_errors() {
        assert!(make_mu(2, 2, vec![1, 1], ints(&[1, -1]), DEFAULT_MU_TOL).is_ok());
        assert!(matches!(
            make_mu(4, 2, vec![2, 2, -1, -1], ints(&[1, 0, 1, 1]), DEFAULT_MU_TOL),
            Err(Error::NotInVCross(_))
        ));
        assert!(matches!(
            make_mu(3, 2, vec![1, 1, -1], ints(&[1, 2, 3]), DEFAULT_MU_TOL),
            Err(Error::NotInGamma { .. })
        ));
        // (1, 1) does not even satisfy the power-sum equation.
        assert!(matches!(
            make_mu(2, 2, vec![1, 1], ints(&[1, 1]), DEFAULT_MU_TOL),
            Err(Error::NotInVCross(_))
        ));
    }

    #[test]
    fn p_q_c_examples() {
        let m = mu(&[1, 1], &[1, -1]);
        assert_eq!(build_p(&m), poly(&[(2, 1), (0, -1)]));
        assert_eq!(build_q(&m), poly(&[(2, 1), (0, -2), (-2, 1)]));
        assert_eq!(c_mu(&m), Coefficient::from_int(Q, 2));

        let m = mu(&[1], &[1]);
        assert_eq!(build_p(&m), poly(&[(1, 1), (0, -1)]));
        assert_eq!(build_q(&m), poly(&[(1, 1), (0, -2), (-1, 1)]));
        assert_eq!(c_mu(&m), Coefficient::one(Q));

        let m = mu(&[5], &[3]);
        assert_eq!(c_mu(&m), Coefficient::from_int(Q, 15));
    }

    #[test]
    fn build_subalgebra_certifies() {
        for m in [mu(&[1, 1], &[1, -1]), mu(&[1], &[1]), mu(&[2, 1, -1], &[2, -1, 3])] {
            let d = build_subalgebra(&m).unwrap();
            let SubalgebraDescriptor::Smu { p, q, c, .. } = d else { panic!() };
            assert_eq!(bracket_residual(&p, &q, &c).unwrap(), 0.0);
        }
    }

    #[test]
    fn bracket_factor_is_constant() {
        let m = mu(&[2, 1, -1], &[2, -1, 3]);
        let f = bracket_factor(&m);
        assert_eq!(f, LaurentPoly::monomial(0, c_mu(&m)));
    }

    #[test]
    fn canonical_order() {
        let m = mu(&[1, 2], &[-4, 2]);
        // r = (1, 2) is not sorted; canonical form puts r = 2 first
        let c = canonicalize_mu(&m);
        assert_eq!(c.r().entries(), &[2, 1]);
        assert_eq!(c.a(), ints(&[2, -4]).as_slice());
        assert_eq!(canonicalize_mu(&c), c);
    }

    #[test]
    fn descriptor_equality() {
        let z3 = SubalgebraDescriptor::zm(3).unwrap();
        assert!(descriptors_equal(&z3, &SubalgebraDescriptor::zm(3).unwrap(), 1e-9));
        assert!(!descriptors_equal(&z3, &SubalgebraDescriptor::zm(-3).unwrap(), 1e-9));
        let s = build_subalgebra(&mu(&[1, 1], &[1, -1])).unwrap();
        assert!(!descriptors_equal(&SubalgebraDescriptor::zm(1).unwrap(), &s, 1e-9));
        let swapped = build_subalgebra(&mu(&[1, 1], &[-1, 1])).unwrap();
        assert!(descriptors_equal(&s, &swapped, 1e-9));
        let float = build_subalgebra(&mu(&[1, 1], &[-1, 1]).to_float()).unwrap();
        assert!(descriptors_equal(&s, &float, 1e-9));
    }

    #[test]
    fn mu_json() {
        let m = mu(&[2, 1, -1], &[2, -1, 3]);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"n":3,"k":2,"r":[2,1,-1],"a":["2","-1","3"]}"#);
        assert_eq!(serde_json::from_str::<MuSignature>(&s).unwrap(), m);
        assert!(serde_json::from_str::<MuSignature>(r#"{"n":2,"k":2,"r":[1,1],"a":["1","1"]}"#).is_err());
        let d = SubalgebraDescriptor::zm(3).unwrap();
        assert_eq!(serde_json::to_string(&d).unwrap(), r#"{"kind":"Zm","m":3}"#);
    }
}
