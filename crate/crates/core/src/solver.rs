//! Points of `V(r)^x` up to scaling.
//!
//! Closed forms cover `n <= 3`; the roots-of-unity family and `s`-fold
//! inflation give structured signatures for any `n`; everything else goes
//! through a seeded multistart Newton solver in the chart `a_n = 1`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::coeff::{Backend, Coefficient};
use crate::error::{Error, Result};
use crate::family::{power_sum_residual, vr_cross_contains, MuSignature, RVector, DEFAULT_MU_TOL};
use crate::linalg::{lu_solve, numerical_rank};

/// Relative singular-value cutoff used when reporting Jacobian ranks.
pub const RANK_TOL: f64 = 1e-9;

/// One point of `V(r)^x` normalized so that `a_n = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectiveSolution {
    pub a: Vec<Coefficient>,
    pub residual: f64,
    pub jacobian_rank: usize,
}

impl ProjectiveSolution {
    fn from_point(r: &RVector, a: Vec<Coefficient>) -> Result<Self> {
        let z: Vec<Complex64> = a.iter().map(Coefficient::to_complex).collect();
        let residual = match a[0].backend() {
            Backend::Exact => 0.0,
            Backend::Float => power_sum_residual(r.entries(), &z),
        };
        let jacobian_rank = jacobian_rank(r, &a, RANK_TOL)?;
        Ok(ProjectiveSolution {
            a,
            residual,
            jacobian_rank,
        })
    }

    pub fn coordinates(&self) -> Vec<Complex64> {
        self.a.iter().map(Coefficient::to_complex).collect()
    }

    /// The signature `(n, k, r, a)` carried by this point.
    pub fn to_mu(&self, r: &RVector, tol: f64) -> Result<MuSignature> {
        MuSignature::new(r.clone(), self.a.clone(), tol)
    }
}

/// Deduplicated projective points of `V(r)^x`.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionSet {
    pub r: RVector,
    pub solutions: Vec<ProjectiveSolution>,
    pub complete: bool,
    pub reason: String,
}

impl SolutionSet {
    pub fn count(&self) -> usize {
        self.solutions.len()
    }

    /// `(n - 1)!`, the upper bound on the number of projective points.
    pub fn bound(&self) -> u64 {
        factorial(self.r.n() - 1)
    }

    /// Whether the two sets contain the same points up to projective
    /// distance `tol`.
    pub fn matches(&self, other: &SolutionSet, tol: f64) -> bool {
        if self.r != other.r || self.count() != other.count() {
            return false;
        }
        let mut used = vec![false; other.count()];
        for s in &self.solutions {
            let a = s.coordinates();
            let hit = (0..other.count())
                .find(|&j| !used[j] && projective_distance(&a, &other.solutions[j].coordinates()) <= tol);
            match hit {
                Some(j) => used[j] = true,
                None => return false,
            }
        }
        true
    }
}

#[derive(Serialize, Deserialize)]
struct SolutionSetRepr {
    r: Vec<i64>,
    k: usize,
    count: usize,
    bound: u64,
    complete: bool,
    reason: String,
    solutions: Vec<ProjectiveSolution>,
}

impl Serialize for SolutionSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SolutionSetRepr {
            r: self.r.entries().to_vec(),
            k: self.r.k(),
            count: self.count(),
            bound: self.bound(),
            complete: self.complete,
            reason: self.reason.clone(),
            solutions: self.solutions.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SolutionSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = SolutionSetRepr::deserialize(deserializer)?;
        let r = RVector::new(repr.k, repr.r).map_err(de::Error::custom)?;
        if repr.count != repr.solutions.len() {
            return Err(de::Error::custom("count does not match the number of solutions"));
        }
        Ok(SolutionSet {
            r,
            solutions: repr.solutions,
            complete: repr.complete,
            reason: repr.reason,
        })
    }
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// `(n - 1)!` when every positive entry satisfies `r_i >= n - k + 1`.
pub fn expected_exact_count(r: &RVector) -> Option<u64> {
    let threshold = (r.n() - r.k() + 1) as i64;
    r.entries()[..r.k()]
        .iter()
        .all(|&x| x >= threshold)
        .then(|| factorial(r.n() - 1))
}

/// Distance between two points after scaling each to `a_n = 1`, relative
/// to the larger modulus.
pub fn projective_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let (la, lb) = (a[a.len() - 1], b[b.len() - 1]);
    if la == Complex64::zero() || lb == Complex64::zero() {
        return f64::INFINITY;
    }
    let mut worst: f64 = 0.0;
    for (x, y) in a.iter().zip(b) {
        let (x, y) = (x / la, y / lb);
        worst = worst.max((x - y).norm() / x.norm().max(y.norm()).max(1.0));
    }
    worst
}

/// Rank of the `(n-1) x n` matrix `(i r_j a_j^(i-1))`.
pub fn jacobian_rank(r: &RVector, a: &[Coefficient], tol: f64) -> Result<usize> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::BadTolerance(tol));
    }
    if a.len() != r.n() {
        return Err(Error::BadParameter(format!(
            "point has {} coordinates, r has {}",
            a.len(),
            r.n()
        )));
    }
    let z: Vec<Complex64> = a.iter().map(Coefficient::to_complex).collect();
    let n = r.n();
    Ok(numerical_rank(
        n - 1,
        n,
        |i, j| z[j].powi(i as i32) * ((i + 1) as f64 * r.entries()[j] as f64),
        tol,
    ))
}

fn quantum_key(z: &[Complex64]) -> Vec<(i64, i64)> {
    let q = 1e-9;
    z.iter()
        .map(|c| ((c.re / q).round() as i64, (c.im / q).round() as i64))
        .collect()
}

fn point_order(a: &[Complex64], b: &[Complex64]) -> Ordering {
    quantum_key(a).cmp(&quantum_key(b)).then_with(|| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    })
}

fn normalize_last(a: &[Coefficient]) -> Result<Vec<Coefficient>> {
    let last = a[a.len() - 1].clone();
    a.iter().map(|x| x.checked_div(&last)).collect()
}

fn finish(r: RVector, points: Vec<Vec<Coefficient>>, complete: bool, reason: String) -> Result<SolutionSet> {
    let mut solutions = points
        .into_iter()
        .map(|a| ProjectiveSolution::from_point(&r, normalize_last(&a)?))
        .collect::<Result<Vec<_>>>()?;
    solutions.sort_by(|x, y| point_order(&x.coordinates(), &y.coordinates()));
    let bound = factorial(r.n() - 1);
    if solutions.len() as u64 > bound {
        return Err(Error::BoundExceeded {
            found: solutions.len(),
            bound: bound as usize,
        });
    }
    Ok(SolutionSet {
        r,
        solutions,
        complete,
        reason,
    })
}

/// Square root of a nonnegative integer when it is a perfect square.
fn exact_sqrt(v: i64) -> Option<i64> {
    if v < 0 {
        return None;
    }
    let s = v.sqrt();
    (s * s == v).then_some(s)
}

/// The explicit points of `V(r)^x` for `n <= 3`.
pub fn closed_form(r: &RVector) -> Result<SolutionSet> {
    let n = r.n();
    let e = r.entries();
    let reason = "closed form".to_string();
    match n {
        1 => finish(r.clone(), vec![vec![Coefficient::one(Backend::Exact)]], true, reason),
        2 => {
            let a = vec![
                Coefficient::from_int(Backend::Exact, e[1]),
                Coefficient::from_int(Backend::Exact, -e[0]),
            ];
            finish(r.clone(), vec![a], true, reason)
        }
        3 => {
            // positions sorted by r descending; the formulas below use sorted r
            let mut order: Vec<usize> = (0..3).collect();
            order.sort_by(|&i, &j| e[j].cmp(&e[i]));
            let (r1, r2, r3) = (e[order[0]], e[order[1]], e[order[2]]);
            let place = |sorted: [Coefficient; 3]| {
                let mut a = vec![Coefficient::zero(Backend::Exact); 3];
                for (slot, v) in order.iter().zip(sorted) {
                    a[*slot] = v;
                }
                a
            };
            let points = if (r2, r3) == (1, -1) {
                let q = |v: i64| Coefficient::from_int(Backend::Exact, v);
                vec![place([q(2), q(1 - r1), q(r1 + 1)])]
            } else {
                let disc = -r1 * r2 * r3 * r.abs();
                let third = r1 + r2;
                match exact_sqrt(disc) {
                    Some(s) => [1, -1]
                        .iter()
                        .map(|&sign| {
                            let q = |num: i64, den: i64| {
                                Coefficient::Rational(BigRational::new(num.into(), den.into()))
                            };
                            place([
                                q(-r3 * r1 + sign * s, r1),
                                q(-r3 * r2 - sign * s, r2),
                                q(third, 1),
                            ])
                        })
                        .collect(),
                    None => {
                        let s = if disc >= 0 {
                            Complex64::new((disc as f64).sqrt(), 0.0)
                        } else {
                            Complex64::new(0.0, (-disc as f64).sqrt())
                        };
                        [1.0, -1.0]
                            .iter()
                            .map(|&sign| {
                                let c = |z: Complex64| Coefficient::Complex(z);
                                place([
                                    c(Complex64::new(-r3 as f64, 0.0) + s * (sign / r1 as f64)),
                                    c(Complex64::new(-r3 as f64, 0.0) - s * (sign / r2 as f64)),
                                    c(Complex64::new(third as f64, 0.0)),
                                ])
                            })
                            .collect()
                    }
                }
            };
            let valid: Vec<Vec<Coefficient>> = points
                .into_iter()
                .filter(|a| vr_cross_contains(r, a, DEFAULT_MU_TOL).unwrap_or(false))
                .collect();
            finish(r.clone(), valid, true, reason)
        }
        _ => Err(Error::UseNumeric(n)),
    }
}

fn snap(z: Complex64) -> Complex64 {
    let clean = |x: f64| if x.abs() < 1e-15 { 0.0 } else { x };
    Complex64::new(clean(z.re), clean(z.im))
}

/// `r = (r_value, ..., r_value)`, `k = n`, `a = (zeta, zeta^2, ..., zeta^n)`
/// with `zeta = exp(2 pi i / n)`. Exact for `n <= 2`.
pub fn roots_of_unity_solution(n: usize, r_value: i64) -> Result<MuSignature> {
    if n < 1 || r_value < 1 {
        return Err(Error::BadParameter(format!(
            "need n >= 1 and r >= 1, got n = {n}, r = {r_value}"
        )));
    }
    let r = RVector::new(n, vec![r_value; n])?;
    let a: Vec<Coefficient> = if n <= 2 {
        (1..=n)
            .map(|j| Coefficient::from_int(Backend::Exact, if n == 2 && j == 1 { -1 } else { 1 }))
            .collect()
    } else {
        (1..=n)
            .map(|j| {
                let z = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64);
                Coefficient::Complex(snap(z))
            })
            .collect()
    };
    MuSignature::new(r, a, DEFAULT_MU_TOL)
}

/// Positive rational `s`-th root, when it exists (only used for `s = 2`).
fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if !q.is_positive() {
        return None;
    }
    let (n, d) = (q.numer(), q.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (&sn * &sn == *n && &sd * &sd == *d).then(|| BigRational::new(sn, sd))
}

/// Replaces each `a_i` by the `s` roots of `t^s = a_i` and each `r_i` by
/// `s` copies of itself.
pub fn inflate(mu: &MuSignature, s: usize) -> Result<MuSignature> {
    if s < 1 {
        return Err(Error::BadParameter("inflation needs s >= 1".into()));
    }
    if s == 1 {
        return Ok(mu.clone());
    }
    let r: Vec<i64> = mu
        .r()
        .entries()
        .iter()
        .flat_map(|&x| std::iter::repeat_n(x, s))
        .collect();
    let exact_roots: Option<Vec<Coefficient>> = (s == 2 && mu.backend() == Backend::Exact)
        .then(|| {
            mu.a()
                .iter()
                .map(|x| {
                    let root = rational_sqrt(x.as_rational()?)?;
                    Some([Coefficient::Rational(root.clone()), Coefficient::Rational(-root)])
                })
                .collect::<Option<Vec<_>>>()
                .map(|v| v.into_iter().flatten().collect())
        })
        .flatten();
    let a = match exact_roots {
        Some(a) => a,
        None => mu
            .a()
            .iter()
            .flat_map(|x| {
                let z = x.to_complex();
                let (rho, theta) = z.to_polar();
                let m = rho.powf(1.0 / s as f64);
                (0..s).map(move |j| {
                    Coefficient::Complex(snap(Complex64::from_polar(m, (theta + 2.0 * PI * j as f64) / s as f64)))
                })
            })
            .collect(),
    };
    let r = RVector::new(mu.k() * s, r)?;
    MuSignature::new(r, a, DEFAULT_MU_TOL)
}

/// Options for [`solve_numeric`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Number of random starts; `None` means `max(200, 50 (n-1)!)`.
    pub starts: Option<usize>,
    pub seed: u64,
    pub newton_tol: f64,
    pub dedup_tol: f64,
    pub max_iter: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            starts: None,
            seed: 42,
            newton_tol: 1e-10,
            dedup_tol: 1e-6,
            max_iter: 200,
        }
    }
}

impl SolveOptions {
    pub fn starts_for(&self, n: usize) -> usize {
        self.starts
            .unwrap_or_else(|| (50 * factorial(n.saturating_sub(1)) as usize).max(200))
    }
}

fn power_sums(r: &[i64], a: &[Complex64]) -> DVector<Complex64> {
    let n = r.len();
    let mut powers = a.to_vec();
    let mut f = DVector::zeros(n - 1);
    for i in 0..n - 1 {
        f[i] = r.iter().zip(&powers).map(|(&rj, p)| p * rj as f64).sum();
        for (p, z) in powers.iter_mut().zip(a) {
            *p *= z;
        }
    }
    f
}

/// Damped Newton on the first `n - 1` coordinates with `a_n = 1` fixed.
fn newton(r: &[i64], mut a: Vec<Complex64>, max_iter: usize) -> Vec<Complex64> {
    let n = r.len();
    let mut f = power_sums(r, &a);
    let mut nf = f.norm();
    for _ in 0..max_iter {
        if power_sum_residual(r, &a) <= 1e-15 {
            break;
        }
        let jac = DMatrix::from_fn(n - 1, n - 1, |i, j| a[j].powi(i as i32) * ((i + 1) as f64 * r[j] as f64));
        let Some(delta) = lu_solve(jac, -&f) else { break };
        let mut lambda = 1.0;
        let mut accepted = false;
        while lambda >= 1e-6 {
            let mut trial = a.clone();
            for j in 0..n - 1 {
                trial[j] += delta[j] * lambda;
            }
            let ft = power_sums(r, &trial);
            let nt = ft.norm();
            if nt.is_finite() && nt < nf {
                a = trial;
                f = ft;
                nf = nt;
                accepted = true;
                break;
            }
            lambda /= 2.0;
        }
        let scale = a.iter().map(|z| z.norm()).fold(1.0, f64::max);
        if !accepted || delta.norm() * lambda <= 1e-16 * scale || scale > 1e8 {
            break;
        }
    }
    a
}

fn random_start(n: usize, seed: u64, index: usize) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let mut a: Vec<Complex64> = (0..n - 1)
        .map(|_| {
            let rho = rng.gen_range(0.2..=5.0);
            let theta = rng.gen_range(0.0..2.0 * PI);
            Complex64::from_polar(rho, theta)
        })
        .collect();
    a.push(Complex64::one());
    a
}

/// Permutations `p` of the positions with `r[p[i]] == r[i]` for all `i`.
fn stabilizer(r: &[i64]) -> Vec<Vec<usize>> {
    let mut groups: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (i, &x) in r.iter().enumerate() {
        groups.entry(x).or_default().push(i);
    }
    let mut perms: Vec<Vec<usize>> = vec![(0..r.len()).collect()];
    for idx in groups.values() {
        let mut next = Vec::new();
        for base in &perms {
            for arrangement in permutations(idx) {
                let mut p = base.clone();
                for (slot, &src) in idx.iter().zip(&arrangement) {
                    p[*slot] = src;
                }
                next.push(p);
            }
        }
        perms = next;
    }
    perms
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Whether `a` (with `a_n = 1`) is a nonzero, repetition-free, smooth point
/// with residual at most `newton_tol`.
fn acceptable(r: &RVector, a: &[Complex64], opts: &SolveOptions) -> bool {
    let m = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if !m.is_finite() || a.iter().any(|z| z.norm() <= opts.dedup_tol) {
        return false;
    }
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            if (a[i] - a[j]).norm() <= opts.dedup_tol * m {
                return false;
            }
        }
    }
    if power_sum_residual(r.entries(), a) > opts.newton_tol {
        return false;
    }
    let c: Vec<Coefficient> = a.iter().map(|&z| Coefficient::Complex(z)).collect();
    jacobian_rank(r, &c, RANK_TOL).map(|k| k == r.n() - 1).unwrap_or(false)
}

fn dedup_points(mut pts: Vec<Vec<Complex64>>, tol: f64) -> Vec<Vec<Complex64>> {
    pts.sort_by(|x, y| point_order(x, y));
    let mut kept: Vec<Vec<Complex64>> = Vec::new();
    for p in pts {
        if !kept.iter().any(|q| projective_distance(q, &p) <= tol) {
            kept.push(p);
        }
    }
    kept
}

/// Exact coordinates if every coordinate is within `1e-10` of a rational
/// with denominator at most 64 and the rational point lies in `V(r)^x`.
fn reconstruct(r: &RVector, a: &[Complex64]) -> Option<Vec<Coefficient>> {
    let exact: Vec<Coefficient> = a
        .iter()
        .map(|&z| Coefficient::reconstruct_rational(z, 64, 1e-10).map(Coefficient::Rational))
        .collect::<Option<_>>()?;
    if exact.iter().any(Coefficient::is_zero) {
        return None;
    }
    vr_cross_contains(r, &exact, DEFAULT_MU_TOL)
        .ok()
        .filter(|&ok| ok)
        .map(|_| exact)
}

/// Result of a numeric search together with the best residual seen, which
/// is the diagnostic reported for empty searches.
#[derive(Clone, Debug)]
pub struct NumericSearch {
    pub set: Option<SolutionSet>,
    pub best_residual: f64,
    pub starts: usize,
}

/// Runs the multistart search without turning an empty result into an
/// error.
pub fn search_numeric(r: &RVector, opts: &SolveOptions) -> Result<NumericSearch> {
    for t in [opts.newton_tol, opts.dedup_tol] {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::BadTolerance(t));
        }
    }
    let n = r.n();
    let starts = opts.starts_for(n);
    if n == 1 {
        let set = finish(r.clone(), vec![vec![Coefficient::one(Backend::Exact)]], true, "n = 1".into())?;
        return Ok(NumericSearch {
            set: Some(set),
            best_residual: 0.0,
            starts,
        });
    }
    let results: Vec<(Vec<Complex64>, f64, bool)> = (0..starts)
        .into_par_iter()
        .map(|i| {
            let a = newton(r.entries(), random_start(n, opts.seed, i), opts.max_iter);
            let res = power_sum_residual(r.entries(), &a);
            let ok = acceptable(r, &a, opts);
            (a, res, ok)
        })
        .collect();
    let best_residual = results
        .iter()
        .map(|(_, res, _)| *res)
        .filter(|x| x.is_finite())
        .fold(f64::INFINITY, f64::min);
    let found: Vec<Vec<Complex64>> = results.into_iter().filter(|(_, _, ok)| *ok).map(|(a, _, _)| a).collect();
    let found = dedup_points(found, opts.dedup_tol);

    // complete each point's orbit under the stabilizer of r and conjugation
    let perms = stabilizer(r.entries());
    let mut orbit = Vec::new();
    for p in &found {
        for perm in &perms {
            let b: Vec<Complex64> = perm.iter().map(|&j| p[j]).collect();
            let last = b[n - 1];
            let b: Vec<Complex64> = b.iter().map(|z| z / last).collect();
            orbit.push(b.iter().map(|z| z.conj()).collect());
            orbit.push(b);
        }
    }
    let points = dedup_points(orbit, opts.dedup_tol);
    if points.is_empty() {
        return Ok(NumericSearch {
            set: None,
            best_residual,
            starts,
        });
    }
    let coords: Vec<Vec<Coefficient>> = points
        .iter()
        .map(|p| reconstruct(r, p).unwrap_or_else(|| p.iter().map(|&z| Coefficient::Complex(z)).collect()))
        .collect();
    let (complete, reason) = match expected_exact_count(r) {
        Some(m) if m == coords.len() as u64 => (true, format!("all {m} = (n-1)! points found")),
        Some(m) => (false, format!("found {} of {m} points", coords.len())),
        None => (false, format!("found {} points; no exact count known", coords.len())),
    };
    let set = finish(r.clone(), coords, complete, reason)?;
    Ok(NumericSearch {
        set: Some(set),
        best_residual,
        starts,
    })
}

/// Seeded multistart damped Newton search for `V(r)^x` in the chart
/// `a_n = 1`.
pub fn solve_numeric(r: &RVector, opts: &SolveOptions) -> Result<SolutionSet> {
    let search = search_numeric(r, opts)?;
    search.set.ok_or(Error::NoConvergence { starts: search.starts })
}

/// Every `r` in `Gamma(n, k)` with positive entries in `1..=n-k`, sorted
/// descending.
pub fn sweep_cases(n: usize) -> Vec<RVector> {
    fn descending(len: usize, max: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == len {
            out.push(prefix.clone());
            return;
        }
        let cap = prefix.last().copied().unwrap_or(max);
        for v in (1..=cap).rev() {
            prefix.push(v);
            descending(len, max, prefix, out);
            prefix.pop();
        }
    }
    let mut cases = Vec::new();
    for k in 1..=n {
        let max = (n - k) as i64;
        let mut heads = Vec::new();
        descending(k, max, &mut Vec::new(), &mut heads);
        for mut r in heads {
            r.extend(std::iter::repeat_n(-1, n - k));
            if let Ok(rv) = RVector::new(k, r) {
                cases.push(rv);
            }
        }
    }
    cases
}

/// One line of the sweep report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub n: usize,
    pub k: usize,
    pub r: Vec<i64>,
    pub count: usize,
    pub bound: u64,
    pub complete: bool,
    /// Smallest power-sum residual reached by any start.
    pub best_residual: f64,
    /// No point found: a candidate counterexample to nonemptiness.
    pub empty: bool,
    pub solutions: Vec<ProjectiveSolution>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SweepReport {
    pub entries: Vec<SweepEntry>,
}

impl SweepReport {
    pub fn empty_cases(&self) -> usize {
        self.entries.iter().filter(|e| e.empty).count()
    }

    pub fn summary_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:>3} {:>3}  {:<24} {:>6} {:>6}  {:<8} {}", "n", "k", "r", "found", "bound", "complete", "status");
        for e in &self.entries {
            let r: Vec<String> = e.r.iter().map(i64::to_string).collect();
            let _ = writeln!(
                out,
                "{:>3} {:>3}  {:<24} {:>6} {:>6}  {:<8} {}",
                e.n,
                e.k,
                format!("({})", r.join(",")),
                e.count,
                e.bound,
                e.complete,
                if e.empty {
                    format!("EMPTY (best residual {:.2e})", e.best_residual)
                } else {
                    "ok".to_string()
                }
            );
        }
        let _ = writeln!(out, "{} cases, {} empty", self.entries.len(), self.empty_cases());
        out
    }
}

/// Runs [`search_numeric`] on every case of [`sweep_cases`] for `n` in
/// `n_lo..=n_hi`. Entries come out in enumeration order.
pub fn sweep_conjecture(n_lo: usize, n_hi: usize, opts: &SolveOptions) -> Result<SweepReport> {
    if n_lo < 4 || n_lo > n_hi {
        return Err(Error::BadParameter(format!("sweep needs 4 <= n_lo <= n_hi, got {n_lo}..{n_hi}")));
    }
    let cases: Vec<RVector> = (n_lo..=n_hi).flat_map(sweep_cases).collect();
    let entries = cases
        .par_iter()
        .map(|r| {
            let search = search_numeric(r, opts)?;
            let solutions = search.set.map(|s| s.solutions).unwrap_or_default();
            Ok(SweepEntry {
                n: r.n(),
                k: r.k(),
                r: r.entries().to_vec(),
                count: solutions.len(),
                bound: factorial(r.n() - 1),
                complete: expected_exact_count(r) == Some(solutions.len() as u64),
                best_residual: search.best_residual,
                empty: solutions.is_empty(),
                solutions,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport { entries })
}

/// Convenience: `BigRational` from a pair of integers.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Backend = Backend::Exact;

    fn rv(r: &[i64]) -> RVector {
        RVector::from_entries(r.to_vec()).unwrap()
    }

    fn q(n: i64, d: i64) -> Coefficient {
        Coefficient::Rational(ratio(n, d))
    }

    #[test]
    fn closed_form_n2() {
        let s = closed_form(&rv(&[1, 1])).unwrap();
        assert_eq!(s.count(), 1);
        assert_eq!(s.solutions[0].a, vec![q(-1, 1), q(1, 1)]);
        let s = closed_form(&rv(&[3, -1])).unwrap();
        assert_eq!(s.solutions[0].a, vec![q(1, 3), q(1, 1)]);
    }

    #[test]
    fn closed_form_special_case() {
        let s = closed_form(&rv(&[2, 1, -1])).unwrap();
        assert_eq!(s.count(), 1);
        assert_eq!(s.solutions[0].a, vec![q(2, 3), q(-1, 3), q(1, 1)]);
        assert_eq!(s.solutions[0].jacobian_rank, 2);
    }

    #[test]
    fn closed_form_complex_pair() {
        let s = closed_form(&rv(&[2, 2, 1])).unwrap();
        assert_eq!(s.count(), 2);
        let root5 = 5f64.sqrt();
        let expect = [
            [Complex64::new(-0.25, -root5 / 4.0), Complex64::new(-0.25, root5 / 4.0)],
            [Complex64::new(-0.25, root5 / 4.0), Complex64::new(-0.25, -root5 / 4.0)],
        ];
        for (sol, e) in s.solutions.iter().zip(expect) {
            let z = sol.coordinates();
            assert!((z[0] - e[0]).norm() < 1e-12 && (z[1] - e[1]).norm() < 1e-12, "{z:?}");
            assert!(sol.residual < 1e-14);
        }
        assert!(s.complete);
    }

    #[test]
    fn closed_form_exact_and_unsorted() {
        // r = (1, 3, -1) is r = (3, 1, -1) with the first two positions swapped
        let s = closed_form(&rv(&[1, 3, -1])).unwrap();
        assert_eq!(s.solutions[0].a, vec![q(-2, 4), q(2, 4), q(1, 1)]);
        assert!(matches!(closed_form(&rv(&[2, 2, -1, -1])), Err(Error::UseNumeric(4))));
    }

    #[test]
    fn closed_forms_validate() {
        for n in 1..=3usize {
            for k in 1..=n {
                for code in 0..4i64.pow(k as u32) {
                    let mut r: Vec<i64> = (0..k).map(|i| 1 + (code / 4i64.pow(i as u32)) % 4).collect();
                    r.extend(std::iter::repeat_n(-1, n - k));
                    let Ok(r) = RVector::new(k, r) else { continue };
                    let s = closed_form(&r).unwrap();
                    assert!(s.count() >= 1, "{r}");
                    for sol in &s.solutions {
                        sol.to_mu(&r, DEFAULT_MU_TOL).unwrap();
                        assert_eq!(sol.jacobian_rank, n - 1);
                    }
                }
            }
        }
    }

    #[test]
    fn roots_of_unity() {
        let mu = roots_of_unity_solution(4, 1).unwrap();
        let i = Coefficient::complex(0.0, 1.0).unwrap();
        let minus_i = Coefficient::complex(0.0, -1.0).unwrap();
        assert_eq!(
            mu.a(),
            &[i, Coefficient::complex(-1.0, 0.0).unwrap(), minus_i, Coefficient::complex(1.0, 0.0).unwrap()]
        );
        assert_eq!(roots_of_unity_solution(1, 1).unwrap().a(), &[Coefficient::one(Q)]);
        assert_eq!(roots_of_unity_solution(2, 3).unwrap().a(), &[q(-1, 1), q(1, 1)]);
        assert!(matches!(roots_of_unity_solution(0, 1), Err(Error::BadParameter(_))));
        for n in 1..=6 {
            for r in 1..=3 {
                roots_of_unity_solution(n, r).unwrap();
            }
        }
    }

    #[test]
    fn inflation() {
        let base = MuSignature::new(rv(&[1]), vec![Coefficient::one(Q)], DEFAULT_MU_TOL).unwrap();
        assert_eq!(inflate(&base, 1).unwrap(), base);
        let m = inflate(&base, 2).unwrap();
        assert_eq!(m.r().entries(), &[1, 1]);
        assert_eq!(m.a(), &[q(1, 1), q(-1, 1)]);
        let four = MuSignature::new(rv(&[1]), vec![q(4, 1)], DEFAULT_MU_TOL).unwrap();
        assert_eq!(inflate(&four, 2).unwrap().a(), &[q(2, 1), q(-2, 1)]);
        let m = inflate(&roots_of_unity_solution(3, 2).unwrap(), 3).unwrap();
        assert_eq!(m.n(), 9);
        assert!(matches!(inflate(&base, 0), Err(Error::BadParameter(_))));
    }

    #[test]
    fn jacobian_ranks() {
        assert_eq!(jacobian_rank(&rv(&[1, 1]), &[q(1, 1), q(-1, 1)], RANK_TOL).unwrap(), 1);
        assert_eq!(jacobian_rank(&rv(&[2, 1, -1]), &[q(2, 1), q(-1, 1), q(3, 1)], RANK_TOL).unwrap(), 2);
        let degenerate = [q(1, 1), q(0, 1), q(1, 1), q(1, 1)];
        assert!(jacobian_rank(&rv(&[2, 2, -1, -1]), &degenerate, RANK_TOL).unwrap() < 3);
        assert!(matches!(
            jacobian_rank(&rv(&[1, 1]), &[q(1, 1), q(-1, 1)], -1.0),
            Err(Error::BadTolerance(_))
        ));
    }

    #[test]
    fn expected_counts() {
        assert_eq!(expected_exact_count(&rv(&[2, 2, 1])), Some(2));
        assert_eq!(expected_exact_count(&rv(&[2, 2, -1, -1])), None);
        assert_eq!(expected_exact_count(&rv(&[7])), Some(1));
    }

    #[test]
    fn numeric_matches_closed_form() {
        let opts = SolveOptions::default();
        for r in [rv(&[1, 1]), rv(&[2, 2, 1]), rv(&[2, 1, -1]), rv(&[3, 2, 2])] {
            let numeric = solve_numeric(&r, &opts).unwrap();
            let closed = closed_form(&r).unwrap();
            assert!(numeric.matches(&closed, 1e-6), "{r}: {numeric:?}");
        }
    }

    #[test]
    fn numeric_reconstructs_rationals() {
        let s = solve_numeric(&rv(&[2, 1, -1]), &SolveOptions::default()).unwrap();
        assert_eq!(s.solutions[0].a, vec![q(2, 3), q(-1, 3), q(1, 1)]);
    }

    #[test]
    fn numeric_n4() {
        let s = solve_numeric(&rv(&[2, 2, -1, -1]), &SolveOptions::default()).unwrap();
        assert!(s.count() >= 1 && s.count() <= 6);
        for sol in &s.solutions {
            assert_eq!(sol.jacobian_rank, 3);
            assert!(sol.residual <= 1e-10);
        }
        let s = solve_numeric(&rv(&[4, 4, 4, 4]), &SolveOptions::default()).unwrap();
        assert_eq!(s.count(), 6);
        assert!(s.complete);
    }

    #[test]
    fn numeric_is_deterministic() {
        let r = rv(&[3, 2, -1, -1]);
        let opts = SolveOptions {
            starts: Some(300),
            ..SolveOptions::default()
        };
        let a = serde_json::to_string(&solve_numeric(&r, &opts).unwrap()).unwrap();
        let b = serde_json::to_string(&solve_numeric(&r, &opts).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sweep_enumeration() {
        let four: Vec<Vec<i64>> = sweep_cases(4).iter().map(|r| r.entries().to_vec()).collect();
        assert_eq!(four, vec![vec![2, 2, -1, -1]]);
        let five: Vec<Vec<i64>> = sweep_cases(5).iter().map(|r| r.entries().to_vec()).collect();
        assert_eq!(
            five,
            vec![
                vec![3, 3, -1, -1, -1],
                vec![3, 2, -1, -1, -1],
                vec![2, 2, 2, -1, -1],
                vec![2, 2, 1, -1, -1],
            ]
        );
    }

    #[test]
    fn solution_set_json() {
        let s = closed_form(&rv(&[2, 1, -1])).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.starts_with(r#"{"r":[2,1,-1],"k":2,"count":1,"bound":2,"complete":true"#), "{json}");
        assert_eq!(serde_json::from_str::<SolutionSet>(&json).unwrap(), s);
    }
}
