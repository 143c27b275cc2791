//! Root finding with multiplicities.
//!
//! Exact polynomials are split by Yun's square-free decomposition over the
//! rationals and each square-free factor is solved numerically, so
//! multiplicities are exact. Float polynomials are solved directly and
//! nearby roots are merged only when the Taylor coefficients at the cluster
//! centre confirm a root of that multiplicity.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::coeff::{rational_to_f64, Backend, Coefficient};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;

pub const DEFAULT_ROOT_TOL: f64 = 1e-8;
pub const MAX_ITERATIONS: usize = 1000;

/// `p = leading * t^zero_order * prod (t - root)^mult`.
#[derive(Clone, Debug)]
pub struct RootFactorization {
    pub leading: Coefficient,
    pub zero_order: i64,
    pub roots: Vec<(Complex64, usize)>,
    /// Relative max-coefficient residual of the reconstruction.
    pub residual: f64,
}

impl RootFactorization {
    pub fn nonzero_degree(&self) -> usize {
        self.roots.iter().map(|(_, m)| m).sum()
    }
}

pub fn roots_with_multiplicity(p: &LaurentPoly, tol: f64) -> Result<RootFactorization> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::BadTolerance(tol));
    }
    let (zero_order, dense) = p.dense_shifted()?;
    let leading = p.leading_coefficient()?.clone();
    let dense_c: Vec<Complex64> = dense.iter().map(Coefficient::to_complex).collect();

    let mut roots = match p.backend() {
        Backend::Exact => {
            let q: Vec<BigRational> = dense
                .iter()
                .map(|c| c.as_rational().expect("exact backend").clone())
                .collect();
            let mut out = Vec::new();
            for (factor, mult) in square_free_decomposition(&q) {
                let fc: Vec<Complex64> = factor
                    .iter()
                    .map(|x| Complex64::new(rational_to_f64(x), 0.0))
                    .collect();
                let (found, _) = aberth(&fc, MAX_ITERATIONS);
                out.extend(found.into_iter().map(|z| (polish(&fc, z), mult)));
            }
            out
        }
        Backend::Float => {
            let (raw, _) = aberth(&dense_c, MAX_ITERATIONS);
            cluster(&dense_c, raw, tol)
        }
    };
    roots.sort_by(|a, b| {
        (a.0.re, a.0.im)
            .partial_cmp(&(b.0.re, b.0.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let residual = reconstruction_residual(&dense_c, leading.to_complex(), &roots);
    let limit = 100.0 * tol;
    if !(residual <= limit) {
        return Err(Error::UncertifiedFactoring { residual, limit });
    }
    Ok(RootFactorization {
        leading,
        zero_order,
        roots,
        residual,
    })
}

fn reconstruction_residual(dense: &[Complex64], lead: Complex64, roots: &[(Complex64, usize)]) -> f64 {
    let mut acc = vec![lead];
    for &(z, m) in roots {
        for _ in 0..m {
            acc = mul_linear(&acc, z);
        }
    }
    let scale = dense.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if acc.len() != dense.len() {
        return f64::INFINITY;
    }
    acc.iter()
        .zip(dense)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
        / scale
}

/// Multiplies a dense polynomial (lowest power first) by `(t - z)`.
fn mul_linear(p: &[Complex64], z: Complex64) -> Vec<Complex64> {
    let mut out = vec![Complex64::zero(); p.len() + 1];
    for (i, c) in p.iter().enumerate() {
        out[i + 1] += c;
        out[i] -= c * z;
    }
    out
}

fn horner(p: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut val = Complex64::zero();
    let mut der = Complex64::zero();
    for c in p.iter().rev() {
        der = der * z + val;
        val = val * z + c;
    }
    (val, der)
}

fn polish(p: &[Complex64], mut z: Complex64) -> Complex64 {
    for _ in 0..3 {
        let (v, d) = horner(p, z);
        if d.norm() == 0.0 {
            break;
        }
        let step = v / d;
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        z -= step;
    }
    z
}

/// Simultaneous (Aberth-Ehrlich) iteration for all roots of a dense
/// polynomial given lowest power first. Returns the approximations and
/// whether every correction fell below machine precision.
pub fn aberth(p: &[Complex64], max_iter: usize) -> (Vec<Complex64>, bool) {
    let mut hi = p.len();
    while hi > 0 && p[hi - 1].norm() == 0.0 {
        hi -= 1;
    }
    let p = &p[..hi];
    if p.len() <= 1 {
        return (Vec::new(), true);
    }
    let deg = p.len() - 1;
    let lead = p[deg];
    let monic: Vec<Complex64> = p.iter().map(|c| c / lead).collect();
    if deg == 1 {
        return (vec![-monic[0]], true);
    }

    // Start on a circle whose radius is the geometric mean of the root moduli.
    let radius = {
        let r = monic[0].norm().powf(1.0 / deg as f64);
        if r > 0.0 && r.is_finite() {
            r
        } else {
            1.0
        }
    };
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / deg as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect();

    for _ in 0..max_iter {
        let mut done = true;
        for k in 0..deg {
            let (v, d) = horner(&monic, z[k]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / d;
            let mut repulsion = Complex64::zero();
            for j in 0..deg {
                if j != k {
                    let diff = z[k] - z[j];
                    if diff.norm() > 0.0 {
                        repulsion += diff.inv();
                    }
                }
            }
            let step = ratio / (Complex64::one() - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                continue;
            }
            z[k] -= step;
            if step.norm() > 4.0 * f64::EPSILON * z[k].norm().max(f64::MIN_POSITIVE) {
                done = false;
            }
        }
        if done {
            return (z, true);
        }
    }
    (z, false)
}

/// Groups approximate roots that sit within `sqrt(tol)` (relative) of each
/// other, keeping a group as one multiple root only when the Taylor
/// coefficients of `p` at the centroid vanish to order `m - 1` within `tol`.
fn cluster(p: &[Complex64], raw: Vec<Complex64>, tol: f64) -> Vec<(Complex64, usize)> {
    let n = raw.len();
    let radius = tol.sqrt();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut i = i;
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let scale = raw[i].norm().max(raw[j].norm()).max(1.0);
            if (raw[i] - raw[j]).norm() <= radius * scale {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<Complex64>> = Default::default();
    for (i, z) in raw.iter().enumerate() {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(*z);
    }

    let mut out = Vec::new();
    for members in groups.into_values() {
        let m = members.len();
        if m == 1 {
            out.push((members[0], 1));
            continue;
        }
        let mean = members.iter().sum::<Complex64>() / m as f64;
        let centre = refine_multiple(p, mean, m);
        if vanishes_to_order(p, centre, m, tol) {
            out.push((centre, m));
        } else {
            out.extend(members.into_iter().map(|z| (z, 1)));
        }
    }
    out
}

/// Newton on `p^(m-1)`, which has a simple root where `p` has a root of
/// multiplicity `m`.
fn refine_multiple(p: &[Complex64], start: Complex64, m: usize) -> Complex64 {
    let mut d = p.to_vec();
    for _ in 1..m {
        d = d
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * i as f64)
            .collect();
    }
    let mut z = start;
    for _ in 0..20 {
        let (v, dv) = horner(&d, z);
        if dv.norm() == 0.0 {
            break;
        }
        let step = v / dv;
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        z -= step;
        if step.norm() <= f64::EPSILON * z.norm() {
            break;
        }
    }
    if (z - start).norm() <= 10.0 * (start.norm().max(1.0)) * 1e-3 {
        z
    } else {
        start
    }
}

/// Checks `|p^(j)(c) / j!| <= tol * bound_j` for `j < order`, where `bound_j`
/// is the same Taylor coefficient computed with absolute values.
fn vanishes_to_order(p: &[Complex64], c: Complex64, order: usize, tol: f64) -> bool {
    let mut shifted = p.to_vec();
    let mut bound: Vec<f64> = p.iter().map(|x| x.norm()).collect();
    let cabs = c.norm();
    for j in 0..order {
        // Synthetic division: remainder is the j-th Taylor coefficient.
        let deg = shifted.len() - 1;
        let mut q = vec![Complex64::zero(); deg];
        let mut qb = vec![0.0; deg];
        let mut acc = shifted[deg];
        let mut accb = bound[deg];
        for i in (0..deg).rev() {
            q[i] = acc;
            qb[i] = accb;
            acc = shifted[i] + acc * c;
            accb = bound[i] + accb * cabs;
        }
        if acc.norm() > tol * accb.max(f64::MIN_POSITIVE) {
            return false;
        }
        if j + 1 < order && q.is_empty() {
            return false;
        }
        shifted = q;
        bound = qb;
    }
    true
}

// ---- dense rational polynomials (lowest power first) ----

fn trim(p: &mut Vec<BigRational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn degree(p: &[BigRational]) -> usize {
    p.len().saturating_sub(1)
}

fn derivative(p: &[BigRational]) -> Vec<BigRational> {
    let mut d: Vec<BigRational> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer((i as i64).into()))
        .collect();
    trim(&mut d);
    d
}

fn make_monic(p: &[BigRational]) -> Vec<BigRational> {
    let lead = p.last().expect("nonzero polynomial").clone();
    p.iter().map(|c| c / &lead).collect()
}

fn div_rem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead = b.last().expect("nonzero divisor");
    let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let factor = r.last().unwrap() / lead;
        for (i, c) in b.iter().enumerate() {
            r[i + shift] -= &factor * c;
        }
        q[shift] = factor;
        r.pop();
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

fn gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = div_rem(&x, &y);
        x = y;
        y = r;
    }
    make_monic(&x)
}

fn sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out: Vec<BigRational> = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x - y
        })
        .collect();
    trim(&mut out);
    out
}

/// Yun's algorithm: returns monic square-free factors with their
/// multiplicities, skipping constant factors.
pub(crate) fn square_free_decomposition(p: &[BigRational]) -> Vec<(Vec<BigRational>, usize)> {
    let mut f = p.to_vec();
    trim(&mut f);
    if degree(&f) == 0 {
        return Vec::new();
    }
    let f = make_monic(&f);
    let df = derivative(&f);
    let a0 = gcd(&f, &df);
    let mut b = div_rem(&f, &a0).0;
    let c = div_rem(&df, &a0).0;
    let mut d = sub(&c, &derivative(&b));
    let mut out = Vec::new();
    let mut i = 1;
    while degree(&b) > 0 {
        let a = gcd(&b, &d);
        let b_next = div_rem(&b, &a).0;
        let c_next = div_rem(&d, &a).0;
        d = sub(&c_next, &derivative(&b_next));
        if degree(&a) > 0 {
            out.push((a, i));
        }
        b = b_next;
        i += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_ints(Backend::Exact, terms)
    }

    fn close(a: Complex64, re: f64, im: f64) -> bool {
        (a - Complex64::new(re, im)).norm() < 1e-9
    }

    #[test]
    fn simple_roots() {
        let f = roots_with_multiplicity(&exact(&[(2, 1), (0, -1)]), DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(f.roots.len(), 2);
        assert!(close(f.roots[0].0, -1.0, 0.0) && f.roots[0].1 == 1);
        assert!(close(f.roots[1].0, 1.0, 0.0) && f.roots[1].1 == 1);
        assert_eq!(f.zero_order, 0);
    }

    #[test]
    fn order_at_zero_is_reported_separately() {
        // t^-1 (t - 1)^2 = t - 2 + t^-1
        let f = roots_with_multiplicity(&exact(&[(1, 1), (0, -2), (-1, 1)]), DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(f.zero_order, -1);
        assert_eq!(f.roots.len(), 1);
        assert!(close(f.roots[0].0, 1.0, 0.0));
        assert_eq!(f.roots[0].1, 2);
    }

    #[test]
    fn repeated_roots_exact() {
        // (t^2 - 1)^2
        let f = roots_with_multiplicity(&exact(&[(4, 1), (2, -2), (0, 1)]), DEFAULT_ROOT_TOL).unwrap();
        let mults: Vec<usize> = f.roots.iter().map(|r| r.1).collect();
        assert_eq!(mults, vec![2, 2]);
        assert!(close(f.roots[0].0, -1.0, 0.0));
        assert!(close(f.roots[1].0, 1.0, 0.0));
    }

    #[test]
    fn repeated_roots_float() {
        // (t - 2)^3 (t + 1)
        let p = &exact(&[(1, 1), (0, -2)]).pow(3) * &exact(&[(1, 1), (0, 1)]);
        let f = roots_with_multiplicity(&p.to_float(), DEFAULT_ROOT_TOL).unwrap();
        let mut got: Vec<(i64, usize)> = f.roots.iter().map(|(z, m)| (z.re.round() as i64, *m)).collect();
        got.sort();
        assert_eq!(got, vec![(-1, 1), (2, 3)]);
    }

    #[test]
    fn yun_decomposition() {
        // (t - 1)^2 (t + 2)^3 t-free
        let p = &exact(&[(1, 1), (0, -1)]).pow(2) * &exact(&[(1, 1), (0, 2)]).pow(3);
        let (_, dense) = p.dense_shifted().unwrap();
        let q: Vec<BigRational> = dense.iter().map(|c| c.as_rational().unwrap().clone()).collect();
        let sf = square_free_decomposition(&q);
        let summary: Vec<(usize, usize)> = sf.iter().map(|(f, m)| (degree(f), *m)).collect();
        assert_eq!(summary, vec![(1, 2), (1, 3)]);
    }

    #[test]
    fn bad_tolerance() {
        assert!(matches!(
            roots_with_multiplicity(&exact(&[(1, 1)]), 0.0),
            Err(Error::BadTolerance(_))
        ));
    }

    #[test]
    fn unit_roots_degree_twelve() {
        let p = exact(&[(12, 1), (0, -1)]).to_float();
        let f = roots_with_multiplicity(&p, DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(f.roots.len(), 12);
        assert!(f.roots.iter().all(|(z, m)| *m == 1 && (z.norm() - 1.0).abs() < 1e-12));
    }
}
