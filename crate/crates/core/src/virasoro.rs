//! The Virasoro algebra `Vir = Witt + C K` with
//! `[L_m, L_n] = (m - n) L_{m+n} + (m^3 - m)/12 delta_{m,-n} K`, and its
//! finite-dimensional subalgebras.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::coeff::{Backend, Coefficient};
use crate::error::{Error, Result};
use crate::family::{build_p, build_q, c_mu, MuSignature, SubalgebraDescriptor, BRACKET_TOL};
use crate::laurent::LaurentPoly;
use crate::linalg::solve_span;
use crate::witt::{bracket, VectorField};

/// Relative residual accepted by [`span_closes`] on the float backend.
pub const CLOSURE_TOL: f64 = 1e-9;

/// `X + kappa K`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VirasoroElement {
    pub field: VectorField,
    #[serde(rename = "K")]
    pub central: Coefficient,
}

impl VirasoroElement {
    pub fn new(field: VectorField, central: Coefficient) -> Result<Self> {
        if field.backend() != central.backend() {
            return Err(Error::BackendMismatch);
        }
        Ok(VirasoroElement { field, central })
    }

    pub fn from_field(field: VectorField) -> Self {
        let central = Coefficient::zero(field.backend());
        VirasoroElement { field, central }
    }

    /// The central element `K`.
    pub fn k(backend: Backend) -> Self {
        VirasoroElement {
            field: VectorField::zero(backend),
            central: Coefficient::one(backend),
        }
    }

    pub fn l(backend: Backend, m: i64) -> Self {
        Self::from_field(VectorField::l(backend, m))
    }

    pub fn backend(&self) -> Backend {
        self.field.backend()
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_zero() && self.central.is_zero()
    }

    /// `self + c K`.
    pub fn plus_k(&self, c: &Coefficient) -> Result<Self> {
        if !c.same_backend(&self.central) {
            return Err(Error::BackendMismatch);
        }
        Ok(VirasoroElement {
            field: self.field.clone(),
            central: &self.central + c,
        })
    }

    pub fn scale(&self, c: &Coefficient) -> Result<Self> {
        if !c.same_backend(&self.central) {
            return Err(Error::BackendMismatch);
        }
        Ok(VirasoroElement {
            field: self.field.scale(c)?,
            central: &self.central * c,
        })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        Self::new(self.field.checked_add(&other.field)?, &self.central + &other.central)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        Self::new(self.field.checked_sub(&other.field)?, &self.central - &other.central)
    }

    /// The image under `Vir -> Witt`, dropping `K`.
    pub fn project(&self) -> VectorField {
        self.field.clone()
    }
}

impl fmt::Display for VirasoroElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {} K", self.field, self.central)
    }
}

/// `(m^3 - m)/12` when `m + n = 0`, else `0`.
pub fn cocycle(m: i64, n: i64) -> Coefficient {
    if m + n != 0 {
        return Coefficient::zero(Backend::Exact);
    }
    let v = BigRational::new((m * m * m - m).into(), 12.into());
    Coefficient::Rational(v)
}

/// Witt bracket of the fields plus `sum_m x_m y_{-m} (m^3 - m)/12` on `K`,
/// with `x_m`, `y_m` the `L_m` coordinates.
pub fn vir_bracket(x: &VirasoroElement, y: &VirasoroElement) -> Result<VirasoroElement> {
    let backend = x.backend();
    if y.backend() != backend || x.central.backend() != backend || y.central.backend() != backend {
        return Err(Error::BackendMismatch);
    }
    let field = bracket(&x.field, &y.field)?;
    let xs = x.field.to_l_basis();
    let ys = y.field.to_l_basis();
    let mut central = Coefficient::zero(backend);
    for (&m, xm) in &xs {
        if let Some(yn) = ys.get(&-m) {
            let w = cocycle(m, -m).to_backend(backend)?;
            if !w.is_zero() {
                central = &central + &(&(xm * yn) * &w);
            }
        }
    }
    Ok(VirasoroElement { field, central })
}

/// `beta_0 = kappa / lambda` from `[P D, Q D] = lambda Q D + kappa K`,
/// `lambda = c_mu`.
pub fn beta0(mu: &MuSignature) -> Result<Coefficient> {
    let p = VirasoroElement::from_field(VectorField::new(build_p(mu)));
    let q = VirasoroElement::from_field(VectorField::new(build_q(mu)));
    let lambda = c_mu(mu);
    let br = vir_bracket(&p, &q)?;
    let expect = q.field.poly.scale(&lambda)?;
    let diff = br.field.poly.checked_sub(&expect)?;
    let ok = match mu.backend() {
        Backend::Exact => diff.is_zero(),
        Backend::Float => diff.is_zero() || diff.max_abs() <= BRACKET_TOL * q.field.poly.max_abs(),
    };
    if !ok {
        return Err(Error::VerificationFailed("[P D, Q D] is not c Q D".into()));
    }
    br.central.checked_div(&lambda)
}

/// Coordinates of `v` in `basis`, if `v` lies in their span. Exact data is
/// solved exactly.
pub fn vir_in_span(v: &VirasoroElement, basis: &[VirasoroElement]) -> Result<Option<Vec<Coefficient>>> {
    let backend = v.backend();
    if basis.iter().any(|b| b.backend() != backend) {
        return Err(Error::BackendMismatch);
    }
    let exps: BTreeSet<i64> = basis
        .iter()
        .chain(std::iter::once(v))
        .flat_map(|b| b.field.poly.terms().map(|(e, _)| e))
        .collect();
    let coords = |e: &VirasoroElement| -> Vec<Coefficient> {
        exps.iter()
            .map(|&x| e.field.poly.coeff(x))
            .chain(std::iter::once(e.central.clone()))
            .collect()
    };
    let columns: Vec<Vec<Coefficient>> = basis.iter().map(coords).collect();
    Ok(solve_span(backend, &columns, &coords(v), CLOSURE_TOL))
}

/// Whether every bracket of two basis elements lies in the span.
pub fn span_closes(basis: &[VirasoroElement]) -> Result<bool> {
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            let br = vir_bracket(&basis[i], &basis[j])?;
            if vir_in_span(&br, basis)?.is_none() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `span{L_{-m}, L_0 + beta K, L_m}`; closes only for `beta = (m^2 - 1)/24`.
pub fn three_dim_basis(m: i64, beta: &Coefficient) -> Result<Vec<VirasoroElement>> {
    let b = beta.backend();
    Ok(vec![
        VirasoroElement::l(b, -m),
        VirasoroElement::l(b, 0).plus_k(beta)?,
        VirasoroElement::l(b, m),
    ])
}

/// `span{P D + alpha K, Q D + beta K}`; closes only for `beta = beta_0`.
pub fn two_dim_mu_basis(mu: &MuSignature, alpha: &Coefficient, beta: &Coefficient) -> Result<Vec<VirasoroElement>> {
    let b = mu.backend();
    let p = VirasoroElement::from_field(VectorField::new(build_p(mu)));
    let q = VirasoroElement::from_field(VectorField::new(build_q(mu)));
    Ok(vec![p.plus_k(&alpha.to_backend(b)?)?, q.plus_k(&beta.to_backend(b)?)?])
}

/// `(m^2 - 1)/24`.
pub fn dim3_beta(m: i64) -> Coefficient {
    Coefficient::Rational(BigRational::new((m * m - 1).into(), 24.into()))
}

/// The finite-dimensional subalgebras of the Virasoro algebra.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FiniteSubalgebraDescriptor {
    /// `C X`.
    Dim1 { x: VirasoroElement },
    /// `C X + C K`.
    Dim2a { x: VectorField },
    /// `span{L_0 + alpha K, L_m}`.
    Dim2b { m: i64, alpha: Coefficient },
    /// `span{P D + alpha K, Q D + beta0 K}`.
    Dim2c {
        mu: MuSignature,
        alpha: Coefficient,
        beta0: Coefficient,
    },
    /// `span{L_{-m}, L_0 + (m^2 - 1)/24 K, L_m}`.
    Dim3a { m: i64 },
    /// `z(m) + C K`.
    Dim3b { m: i64 },
    /// `s(mu) + C K`.
    Dim3c { mu: MuSignature },
    /// `span{L_0, L_{-m}, L_m, K}`.
    Dim4 { m: i64 },
}

fn nonzero_m(m: i64) -> Result<()> {
    if m == 0 {
        Err(Error::BadParameter("m must be nonzero".into()))
    } else {
        Ok(())
    }
}

impl FiniteSubalgebraDescriptor {
    pub fn dim(&self) -> usize {
        use FiniteSubalgebraDescriptor::*;
        match self {
            Dim1 { .. } => 1,
            Dim2a { .. } | Dim2b { .. } | Dim2c { .. } => 2,
            Dim3a { .. } | Dim3b { .. } | Dim3c { .. } => 3,
            Dim4 { .. } => 4,
        }
    }

    /// `(m^2 - 1)/24` for `Dim3a`, recomputed from `m`.
    pub fn dim3_beta(&self) -> Option<Coefficient> {
        match self {
            FiniteSubalgebraDescriptor::Dim3a { m } => Some(dim3_beta(*m)),
            _ => None,
        }
    }

    pub fn basis(&self) -> Result<Vec<VirasoroElement>> {
        use FiniteSubalgebraDescriptor::*;
        const E: Backend = Backend::Exact;
        match self {
            Dim1 { x } => {
                if x.is_zero() {
                    return Err(Error::BadParameter("C X needs X != 0".into()));
                }
                Ok(vec![x.clone()])
            }
            Dim2a { x } => {
                if x.is_zero() {
                    return Err(Error::BadParameter("C X + C K needs X != 0".into()));
                }
                Ok(vec![VirasoroElement::from_field(x.clone()), VirasoroElement::k(x.backend())])
            }
            Dim2b { m, alpha } => {
                nonzero_m(*m)?;
                let b = alpha.backend();
                Ok(vec![VirasoroElement::l(b, 0).plus_k(alpha)?, VirasoroElement::l(b, *m)])
            }
            Dim2c { mu, alpha, beta0 } => two_dim_mu_basis(mu, alpha, beta0),
            Dim3a { m } => {
                nonzero_m(*m)?;
                three_dim_basis(*m, &dim3_beta(*m))
            }
            Dim3b { m } => {
                nonzero_m(*m)?;
                Ok(vec![VirasoroElement::l(E, 0), VirasoroElement::l(E, *m), VirasoroElement::k(E)])
            }
            Dim3c { mu } => {
                let b = mu.backend();
                Ok(vec![
                    VirasoroElement::from_field(VectorField::new(build_p(mu))),
                    VirasoroElement::from_field(VectorField::new(build_q(mu))),
                    VirasoroElement::k(b),
                ])
            }
            Dim4 { m } => {
                nonzero_m(*m)?;
                Ok(vec![
                    VirasoroElement::l(E, 0),
                    VirasoroElement::l(E, -*m),
                    VirasoroElement::l(E, *m),
                    VirasoroElement::k(E),
                ])
            }
        }
    }

    pub fn verify_closure(&self) -> Result<bool> {
        span_closes(&self.basis()?)
    }
}

/// `z(m) -> span{L_0 + alpha K, L_m}`, `s(mu) -> span{P D + alpha K,
/// Q D + beta_0 K}`.
pub fn lift_descriptor(base: &SubalgebraDescriptor, alpha: &Coefficient) -> Result<FiniteSubalgebraDescriptor> {
    match base {
        SubalgebraDescriptor::Zm { m } => {
            nonzero_m(*m)?;
            Ok(FiniteSubalgebraDescriptor::Dim2b {
                m: *m,
                alpha: alpha.clone(),
            })
        }
        SubalgebraDescriptor::Smu { mu, .. } => Ok(FiniteSubalgebraDescriptor::Dim2c {
            mu: mu.clone(),
            alpha: alpha.to_backend(mu.backend())?,
            beta0: beta0(mu)?,
        }),
    }
}

/// `span{L_{-m}, L_0 + (m^2 - 1)/24 K, L_m}`, verified to close.
pub fn lift_3dim(m: i64) -> Result<FiniteSubalgebraDescriptor> {
    nonzero_m(m)?;
    let d = FiniteSubalgebraDescriptor::Dim3a { m };
    if !d.verify_closure()? {
        return Err(Error::VerificationFailed(format!("three-dimensional lift for m = {m} does not close")));
    }
    Ok(d)
}

/// A family of finite-dimensional subalgebras with its parameter slots.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyTemplate {
    pub dim: usize,
    pub family: String,
    pub span: String,
    pub parameters: Vec<String>,
}

impl FamilyTemplate {
    fn new(dim: usize, family: &str, span: &str, parameters: &[&str]) -> Self {
        FamilyTemplate {
            dim,
            family: family.into(),
            span: span.into(),
            parameters: parameters.iter().map(|s| s.to_string()).collect(),
        }
    }

    /// Instances of the family over a fixed grid of small parameters.
    pub fn instances(&self, mus: &[MuSignature]) -> Result<Vec<FiniteSubalgebraDescriptor>> {
        use FiniteSubalgebraDescriptor::*;
        const E: Backend = Backend::Exact;
        let ms = [-4, -3, -2, -1, 1, 2, 3, 4];
        let alphas = [
            Coefficient::zero(E),
            Coefficient::from_int(E, 7),
            Coefficient::rational(-1, 2)?,
        ];
        let fields = [
            VectorField::l(E, 3),
            VectorField::new(LaurentPoly::from_ints(E, &[(2, 1), (0, -1)])),
            VectorField::new(LaurentPoly::from_ints(E, &[(-1, 2), (0, 1), (5, -3)])),
        ];
        let out = match self.family.as_str() {
            "Dim1" => fields
                .iter()
                .flat_map(|f| {
                    alphas.iter().map(move |a| Dim1 {
                        x: VirasoroElement::from_field(f.clone()).plus_k(a).expect("exact"),
                    })
                })
                .chain(std::iter::once(Dim1 { x: VirasoroElement::k(E) }))
                .collect(),
            "Dim2a" => fields.iter().map(|f| Dim2a { x: f.clone() }).collect(),
            "Dim2b" => ms
                .iter()
                .flat_map(|&m| alphas.iter().map(move |a| Dim2b { m, alpha: a.clone() }))
                .collect(),
            "Dim2c" => {
                let mut v = Vec::new();
                for mu in mus {
                    for a in &alphas {
                        v.push(lift_descriptor(
                            &SubalgebraDescriptor::Smu {
                                mu: mu.clone(),
                                p: build_p(mu),
                                q: build_q(mu),
                                c: c_mu(mu),
                            },
                            a,
                        )?);
                    }
                }
                v
            }
            "Dim3a" => ms.iter().map(|&m| Dim3a { m }).collect(),
            "Dim3b" => ms.iter().map(|&m| Dim3b { m }).collect(),
            "Dim3c" => mus.iter().map(|mu| Dim3c { mu: mu.clone() }).collect(),
            "Dim4" => ms.iter().map(|&m| Dim4 { m }).collect(),
            other => return Err(Error::BadParameter(format!("unknown family {other}"))),
        };
        Ok(out)
    }
}

/// The families of subalgebras of dimension `dim` (at most 4).
pub fn catalog(dim: usize) -> Result<Vec<FamilyTemplate>> {
    let t = FamilyTemplate::new;
    match dim {
        1 => Ok(vec![t(1, "Dim1", "C X", &["X in Vir, X != 0"])]),
        2 => Ok(vec![
            t(2, "Dim2a", "C X + C K", &["X in Witt, X != 0"]),
            t(2, "Dim2b", "span{L_0 + alpha K, L_m}", &["m != 0", "alpha"]),
            t(
                2,
                "Dim2c",
                "span{P_mu D + alpha K, Q_mu D + beta_0 K}",
                &["mu", "alpha", "beta_0 = beta0(mu), determined by mu"],
            ),
        ]),
        3 => Ok(vec![
            t(3, "Dim3a", "span{L_-m, L_0 + (m^2-1)/24 K, L_m}", &["m != 0"]),
            t(3, "Dim3b", "span{L_0, L_m, K}", &["m != 0"]),
            t(3, "Dim3c", "span{P_mu D, Q_mu D, K}", &["mu"]),
        ]),
        4 => Ok(vec![t(4, "Dim4", "span{L_0, L_-m, L_m, K}", &["m != 0"])]),
        _ => Err(Error::BadParameter(format!(
            "finite-dimensional subalgebras have dimension 1..=4, got {dim}"
        ))),
    }
}
