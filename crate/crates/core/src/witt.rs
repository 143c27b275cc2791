//! The Witt algebra: Laurent vector fields `F(t) D` with `D = t d/dt`.
//!
//! The basis element `L_m` is the field `-t^m D`, so
//! `[L_m, L_n] = (m - n) L_{m+n}`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coeff::{Backend, Coefficient};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::linalg::solve_span;

pub const DEFAULT_SPAN_TOL: f64 = 1e-9;

/// `poly(t) D`. The zero field is the zero polynomial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VectorField {
    pub poly: LaurentPoly,
}

impl VectorField {
    pub fn new(poly: LaurentPoly) -> Self {
        VectorField { poly }
    }

    pub fn zero(backend: Backend) -> Self {
        VectorField::new(LaurentPoly::zero(backend))
    }

    /// `L_m = -t^m D`.
    pub fn l(backend: Backend, m: i64) -> Self {
        VectorField::new(LaurentPoly::monomial(m, Coefficient::from_int(backend, -1)))
    }

    pub fn backend(&self) -> Backend {
        self.poly.backend()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn scale(&self, c: &Coefficient) -> Result<Self> {
        Ok(VectorField::new(self.poly.scale(c)?))
    }

    pub fn checked_add(&self, other: &VectorField) -> Result<Self> {
        Ok(VectorField::new(self.poly.checked_add(&other.poly)?))
    }

    pub fn checked_sub(&self, other: &VectorField) -> Result<Self> {
        Ok(VectorField::new(self.poly.checked_sub(&other.poly)?))
    }

    pub fn to_float(&self) -> Self {
        VectorField::new(self.poly.to_float())
    }

    /// Coordinates `x_m` with `self = sum x_m L_m`.
    pub fn to_l_basis(&self) -> BTreeMap<i64, Coefficient> {
        self.poly.terms().map(|(e, c)| (e, -c)).collect()
    }

    pub fn from_l_basis(backend: Backend, coords: &BTreeMap<i64, Coefficient>) -> Result<Self> {
        let poly = LaurentPoly::from_terms(backend, coords.iter().map(|(&m, c)| (m, -c)))?;
        Ok(VectorField::new(poly))
    }
}

/// The field as coordinates in the basis `L_m`: `{"L": [[m, x_m], ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LBasisView {
    #[serde(rename = "L")]
    pub coords: Vec<(i64, Coefficient)>,
}

impl LBasisView {
    pub fn of(x: &VectorField) -> Self {
        LBasisView {
            coords: x.to_l_basis().into_iter().collect(),
        }
    }

    /// Rebuilds the field; an empty view is the exact zero field.
    pub fn to_field(&self) -> Result<VectorField> {
        let backend = self.coords.first().map_or(Backend::Exact, |(_, c)| c.backend());
        let poly = LaurentPoly::from_terms(backend, self.coords.iter().map(|(m, c)| (*m, -c)))?;
        Ok(VectorField::new(poly))
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) D", self.poly)
    }
}

/// `[F D, G D] = (F theta(G) - G theta(F)) D`.
pub fn bracket(x: &VectorField, y: &VectorField) -> Result<VectorField> {
    if x.backend() != y.backend() {
        return Err(Error::BackendMismatch);
    }
    let (f, g) = (&x.poly, &y.poly);
    let poly = &(f * &g.theta()) - &(g * &f.theta());
    Ok(VectorField::new(poly))
}

/// The involutive automorphism `t^l D -> -t^(-l) D`.
pub fn omega(x: &VectorField) -> VectorField {
    VectorField::new(x.poly.remap_terms(|e, c| (-e, -c)))
}

/// The map `t^l D -> s t^(s l) D`. With `D = t d/dt` it satisfies
/// `[tau_s x, tau_s y] = s^2 tau_s [x, y]`, so it sends subalgebras to
/// subalgebras; [`tau_hom`] is the bracket-preserving rescaling.
pub fn tau(s: i64, x: &VectorField) -> Result<VectorField> {
    if s < 1 {
        return Err(Error::BadParameter(format!("tau requires s >= 1, got {s}")));
    }
    Ok(VectorField::new(x.poly.remap_terms(|e, c| (s * e, c.scale_int(s)))))
}

/// The injective homomorphism `t^l D -> t^(s l) D / s`, equal to
/// `tau_s / s^2`.
pub fn tau_hom(s: i64, x: &VectorField) -> Result<VectorField> {
    if s < 1 {
        return Err(Error::BadParameter(format!("tau requires s >= 1, got {s}")));
    }
    let inv = Coefficient::rational(1, s)?.to_backend(x.backend())?;
    Ok(VectorField::new(x.poly.remap_terms(|e, c| (s * e, c * &inv))))
}

/// Coordinates of `x` in `basis`, if `x` lies in the span. Exact data is
/// solved exactly; float data by least squares with residual at most
/// `tol * max|coefficient of x|`.
pub fn is_in_span(x: &VectorField, basis: &[VectorField], tol: f64) -> Result<Option<Vec<Coefficient>>> {
    let backend = x.backend();
    if basis.iter().any(|b| b.backend() != backend) {
        return Err(Error::BackendMismatch);
    }
    if !(tol > 0.0 && tol.is_finite()) && backend == Backend::Float {
        return Err(Error::BadTolerance(tol));
    }
    let mut exps: Vec<i64> = x
        .poly
        .terms()
        .map(|(e, _)| e)
        .chain(basis.iter().flat_map(|b| b.poly.terms().map(|(e, _)| e)))
        .collect();
    exps.sort_unstable();
    exps.dedup();
    let columns: Vec<Vec<Coefficient>> = basis
        .iter()
        .map(|b| exps.iter().map(|&e| b.poly.coeff(e)).collect())
        .collect();
    let target: Vec<Coefficient> = exps.iter().map(|&e| x.poly.coeff(e)).collect();
    Ok(solve_span(backend, &columns, &target, tol))
}
