//! Recognizes a two-dimensional subalgebra of the Witt algebra from any
//! basis and returns its canonical descriptor `z(m)` or `s(mu)`.
//!
//! Pipeline: closure check, eigenbasis `[X, Y] = c Y` with `Y` spanning the
//! derived algebra, then either the `z(m)` branch (span inside the
//! nonnegative or nonpositive part) or factoring `X = F(t)` and
//! `Y = t^(-|r|) G(t)` to recover `(n, k, r, a)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coeff::{Backend, Coefficient};
use crate::error::{Error, Result};
use crate::family::{
    bracket_residual, build_subalgebra, canonicalize_mu, descriptors_equal, make_mu, MuSignature,
    SubalgebraDescriptor, DEFAULT_MU_TOL,
};
use crate::laurent::LaurentPoly;
use crate::roots::{roots_with_multiplicity, DEFAULT_ROOT_TOL};
use crate::witt::{bracket, is_in_span, VectorField, DEFAULT_SPAN_TOL};

/// Absolute distance within which a root of `G` is identified with a root
/// of `F` (both monic).
pub const ROOT_MATCH_TOL: f64 = 1e-7;
/// Relative coefficient residual allowed when `G` is rebuilt from the
/// fitted multiplicities on the float backend.
pub const REBUILD_TOL: f64 = 1e-6;

fn default_tol() -> f64 {
    DEFAULT_SPAN_TOL
}

/// A pair of vector fields spanning a candidate subalgebra.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpanInput {
    #[serde(rename = "A")]
    pub a: LaurentPoly,
    #[serde(rename = "B")]
    pub b: LaurentPoly,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

impl SpanInput {
    pub fn new(a: VectorField, b: VectorField) -> Self {
        SpanInput {
            a: a.poly,
            b: b.poly,
            tol: DEFAULT_SPAN_TOL,
        }
    }

    pub fn backend(&self) -> Result<Backend> {
        if self.a.backend() != self.b.backend() {
            return Err(Error::BackendMismatch);
        }
        Ok(self.a.backend())
    }

    fn fields(&self) -> (VectorField, VectorField) {
        (VectorField::new(self.a.clone()), VectorField::new(self.b.clone()))
    }

    fn check(&self) -> Result<Backend> {
        let backend = self.backend()?;
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::BadTolerance(self.tol));
        }
        Ok(backend)
    }
}

fn independent(a: &VectorField, b: &VectorField, tol: f64) -> Result<bool> {
    if a.is_zero() || b.is_zero() {
        return Ok(false);
    }
    Ok(is_in_span(b, std::slice::from_ref(a), tol)?.is_none()
        && is_in_span(a, std::slice::from_ref(b), tol)?.is_none())
}

/// Coordinates `(alpha, beta)` with `[A, B] = alpha A + beta B`.
pub fn closure_check(input: &SpanInput) -> Result<(Coefficient, Coefficient)> {
    let backend = input.check()?;
    let (a, b) = input.fields();
    if !independent(&a, &b, input.tol)? {
        return Err(Error::NotIndependent);
    }
    let c = bracket(&a, &b)?;
    let abelian = match backend {
        Backend::Exact => c.is_zero(),
        Backend::Float => c.poly.max_abs() <= 1e-9 * a.poly.max_abs() * b.poly.max_abs(),
    };
    if abelian {
        return Err(Error::AbelianContradiction);
    }
    match is_in_span(&c, &[a, b], input.tol)? {
        Some(x) => Ok((x[0].clone(), x[1].clone())),
        None => Err(Error::NotClosed),
    }
}

fn without_exponent(p: &LaurentPoly, e: i64) -> LaurentPoly {
    LaurentPoly::from_terms(p.backend(), p.terms().filter(|&(x, _)| x != e).map(|(x, c)| (x, c.clone())))
        .expect("terms come from a valid polynomial")
}

/// A basis `{X, Y}` with `[X, Y] = c Y`: `Y` is the monic bracket `[A, B]`;
/// `X` is `A` or `B`, shifted by a multiple of `Y` to remove the
/// `t^deg2(Y)` term and made monic.
pub fn eigen_basis(input: &SpanInput) -> Result<(VectorField, VectorField, Coefficient)> {
    closure_check(input)?;
    let tol = input.tol;
    let (a, b) = input.fields();
    let derived = bracket(&a, &b)?.poly.chop(tol);
    let (y, _) = derived.monic_normalize()?;
    let y = VectorField::new(y);
    let x = if is_in_span(&a, std::slice::from_ref(&y), tol)?.is_none() { a } else { b };

    let d2 = y.poly.deg2()?;
    let lam = x.poly.coeff(d2).checked_div(y.poly.lowest_coefficient()?)?;
    let noise = x.poly.max_abs().max(lam.abs() * y.poly.max_abs());
    let shifted = x.poly.checked_sub(&y.poly.scale(&lam)?)?;
    let shifted = without_exponent(&shifted, d2);
    let shifted = match shifted.backend() {
        Backend::Exact => shifted,
        Backend::Float => LaurentPoly::from_terms(
            Backend::Float,
            shifted
                .terms()
                .filter(|(_, c)| c.abs() > tol * noise)
                .map(|(e, c)| (e, c.clone())),
        )?,
    };
    if shifted.is_zero() {
        return Err(Error::NotIndependent);
    }
    let (xm, _) = shifted.monic_normalize()?;
    let x = VectorField::new(xm);

    let xy = bracket(&x, &y)?;
    let c = match is_in_span(&xy, std::slice::from_ref(&y), tol)? {
        Some(v) => v[0].clone(),
        None => return Err(Error::NotClosed),
    };
    let vanishing = match c.backend() {
        Backend::Exact => c.is_zero(),
        Backend::Float => c.abs() <= 1e-9,
    };
    if vanishing {
        return Err(Error::AbelianContradiction);
    }
    Ok((x, y, c))
}

/// Recovered `(n, k, r)` reported alongside a descriptor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Recovered {
    pub n: usize,
    pub k: usize,
    pub r: Vec<i64>,
}

/// Evidence for a classification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    /// `c` in `[X, Y] = c Y`.
    pub eigenvalue: Coefficient,
    /// `(alpha, beta)` with `[A, B] = alpha A + beta B`.
    pub closure: [Coefficient; 2],
    /// Relative residual of `[P D, Q D] = c Q D` for the returned descriptor.
    pub residual: f64,
    pub recovered: Option<Recovered>,
}

pub fn classify(input: &SpanInput) -> Result<SubalgebraDescriptor> {
    classify_with_certificate(input).map(|(d, _)| d)
}

pub fn classify_with_certificate(input: &SpanInput) -> Result<(SubalgebraDescriptor, Certificate)> {
    let (alpha, beta) = closure_check(input)?;
    let (x, y, c) = eigen_basis(input)?;
    let (a, b) = (&input.a, &input.b);
    let nonneg = a.deg2()? >= 0 && b.deg2()? >= 0;
    let nonpos = a.deg1()? <= 0 && b.deg1()? <= 0;
    let mut cert = Certificate {
        eigenvalue: c.clone(),
        closure: [alpha, beta],
        residual: 0.0,
        recovered: None,
    };
    if nonneg || nonpos {
        let m = y.poly.deg1()?;
        let is_d = x.poly.len() == 1 && x.poly.deg1()? == 0;
        if y.poly.len() != 1 || !is_d || m == 0 {
            return Err(Error::StructureViolation(format!(
                "span lies in one half but is not spanned by D and a monomial: X = {}, Y = {}",
                x.poly, y.poly
            )));
        }
        return Ok((SubalgebraDescriptor::zm(m)?, cert));
    }

    let mu = recover_mu(&x.poly, &y.poly, input.tol)?;
    cert.recovered = Some(Recovered {
        n: mu.n(),
        k: mu.k(),
        r: mu.r().entries().to_vec(),
    });
    let desc = build_subalgebra(&mu).map_err(|e| Error::ValidationFailed(Box::new(e)))?;
    if let SubalgebraDescriptor::Smu { p, q, c, .. } = &desc {
        cert.residual = bracket_residual(p, q, c)?;
    }
    Ok((desc, cert))
}

fn structure(msg: impl Into<String>) -> Error {
    Error::StructureViolation(msg.into())
}

/// Factors `X = F` and `Y = t^(-|r|) G` into a canonical signature.
fn recover_mu(x: &LaurentPoly, y: &LaurentPoly, tol: f64) -> Result<MuSignature> {
    if x.deg2()? != 0 {
        return Err(structure(format!("X = {x} does not have deg2 = 0 after normalization")));
    }
    let n = x.deg1()?;
    if n <= 0 || y.deg1()? != n {
        return Err(structure(format!(
            "expected deg1(X) = deg1(Y) > 0, got {} and {}",
            n,
            y.deg1()?
        )));
    }
    let n = n as usize;
    let abs_r = -y.deg2()?;
    if abs_r <= 0 {
        return Err(structure(format!("deg2(Y) = {} is not negative", -abs_r)));
    }

    let f = roots_with_multiplicity(x, DEFAULT_ROOT_TOL)?;
    if f.roots.iter().any(|&(_, m)| m > 1) || f.roots.len() != n {
        return Err(structure("F has a multiple root"));
    }
    let a: Vec<Complex64> = f.roots.iter().map(|&(z, _)| z).collect();
    let g = y.shift(abs_r);
    let mult = match g.backend() {
        Backend::Exact => exact_multiplicities(&g, &a)?,
        Backend::Float => fitted_multiplicities(&g, &a)?,
    };

    let mut r = Vec::with_capacity(n);
    for &m in &mult {
        match m {
            0 => r.push(-1),
            1 => return Err(structure("G has a simple root")),
            m => r.push(m as i64 - 1),
        }
    }
    if r.iter().sum::<i64>() != abs_r {
        return Err(structure(format!(
            "recovered r sums to {}, but deg2(Y) = {}",
            r.iter().sum::<i64>(),
            -abs_r
        )));
    }
    let k = r.iter().filter(|&&v| v > 0).count();
    if abs_r < k as i64 {
        return Err(structure(format!("|r| = {abs_r} < k = {k}")));
    }
    // Image under omega: X - Y has no positive powers of t.
    let diff = x.checked_sub(y)?.chop(tol);
    if !diff.is_zero() && diff.deg1()? > 0 {
        return Err(structure("X - Y has positive powers of t"));
    }

    let coords = exact_roots(x, &a).unwrap_or_else(|| a.iter().map(|&z| Coefficient::Complex(z)).collect());
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| r[j].cmp(&r[i]));
    let r_sorted: Vec<i64> = idx.iter().map(|&i| r[i]).collect();
    let a_sorted: Vec<Coefficient> = idx.iter().map(|&i| coords[i].clone()).collect();
    let mu = make_mu(n, k, r_sorted, a_sorted, DEFAULT_MU_TOL).map_err(|e| Error::ValidationFailed(Box::new(e)))?;
    Ok(canonicalize_mu(&mu))
}

/// Multiplicities from the square-free decomposition of a rational `G`,
/// matched to the roots of `F`.
fn exact_multiplicities(g: &LaurentPoly, a: &[Complex64]) -> Result<Vec<usize>> {
    let fac = roots_with_multiplicity(g, DEFAULT_ROOT_TOL)?;
    if fac.zero_order != 0 {
        return Err(structure("G vanishes at t = 0"));
    }
    let mut mult = vec![0usize; a.len()];
    for &(z, m) in &fac.roots {
        let (best, dist) = a
            .iter()
            .enumerate()
            .map(|(i, ai)| (i, (ai - z).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("F has roots");
        if dist > ROOT_MATCH_TOL {
            return Err(structure(format!("root {z} of G is not a root of F")));
        }
        mult[best] += m;
    }
    Ok(mult)
}

/// Multiplicities on the float backend: least-squares fit of
/// `G'/G = sum m_i / (t - a_i)` at sample points, rounded, then certified by
/// rebuilding `G` from the rounded multiplicities.
fn fitted_multiplicities(g: &LaurentPoly, a: &[Complex64]) -> Result<Vec<usize>> {
    let n = a.len();
    let radius = 0.5 + 1.5 * a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let samples = 2 * n + 6;
    let dg = g.theta();
    let mut rows = Vec::with_capacity(samples);
    let mut rhs = Vec::with_capacity(samples);
    for s in 0..samples {
        let t = Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * (s as f64 + 0.5) / samples as f64);
        let tc = Coefficient::Complex(t);
        let gv = g.evaluate(&tc)?.to_complex();
        // theta(G)(t) = t G'(t)
        let dv = dg.evaluate(&tc)?.to_complex() / t;
        rhs.push(dv / gv);
        rows.push(a.iter().map(|ai| Complex64::new(1.0, 0.0) / (t - ai)).collect::<Vec<_>>());
    }
    let mat = DMatrix::from_fn(samples, n, |i, j| rows[i][j]);
    let b = DVector::from_vec(rhs);
    let sol = mat
        .svd(true, true)
        .solve(&b, 1e-13)
        .map_err(|e| structure(format!("multiplicity fit failed: {e}")))?;
    let mut mult = Vec::with_capacity(n);
    for z in sol.iter() {
        let m = z.re.round();
        if m < 0.0 || (z - Complex64::new(m, 0.0)).norm() > 0.25 {
            return Err(structure(format!("G is not a product of powers of (t - a_i): fit gave {z}")));
        }
        mult.push(m as usize);
    }
    let mut rebuilt = LaurentPoly::one(Backend::Float);
    for (ai, &m) in a.iter().zip(&mult) {
        let lin = LaurentPoly::from_roots(Backend::Float, &[Coefficient::Complex(*ai)])?;
        rebuilt = &rebuilt * &lin.pow(m as u32);
    }
    let residual = rebuilt.distance(g) / g.max_abs();
    if residual > REBUILD_TOL {
        return Err(structure(format!(
            "G differs from prod (t - a_i)^m_i by relative {residual:e}"
        )));
    }
    Ok(mult)
}

/// Exact rational roots of a rational `F`, when all of them are rational.
fn exact_roots(f: &LaurentPoly, a: &[Complex64]) -> Option<Vec<Coefficient>> {
    if f.backend() != Backend::Exact {
        return None;
    }
    a.iter()
        .map(|&z| {
            let q = Coefficient::Rational(Coefficient::reconstruct_rational(z, 10_000, 1e-9)?);
            f.evaluate(&q).ok()?.is_zero().then_some(q)
        })
        .collect()
}

/// `A' = m00 A + m01 B`, `B' = m10 A + m11 B`.
pub fn change_basis(input: &SpanInput, m: [[i64; 2]; 2]) -> Result<SpanInput> {
    let backend = input.backend()?;
    let comb = |p: i64, q: i64| -> Result<LaurentPoly> {
        input
            .a
            .scale(&Coefficient::from_int(backend, p))?
            .checked_add(&input.b.scale(&Coefficient::from_int(backend, q))?)
    };
    Ok(SpanInput {
        a: comb(m[0][0], m[0][1])?,
        b: comb(m[1][0], m[1][1])?,
        tol: input.tol,
    })
}

/// Builds `s(mu)`, optionally changes basis, classifies, and compares with
/// the canonical form of `mu`.
pub fn roundtrip_check(mu: &MuSignature, change: Option<[[i64; 2]; 2]>) -> bool {
    let run = || -> Result<bool> {
        let built = build_subalgebra(mu)?;
        let [p, q] = built.basis(mu.backend());
        let mut input = SpanInput::new(p, q);
        if let Some(m) = change {
            if m[0][0] * m[1][1] - m[0][1] * m[1][0] == 0 {
                return Err(Error::BadParameter("basis change is singular".into()));
            }
            input = change_basis(&input, m)?;
        }
        let got = classify(&input)?;
        let want = build_subalgebra(&canonicalize_mu(mu))?;
        Ok(descriptors_equal(&got, &want, 1e-6))
    };
    run().unwrap_or(false)
}
