//! Small dense linear solves used for span membership and numerical rank.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use crate::coeff::{Backend, Coefficient};

/// Solves `sum_j x_j columns[j] = target`. Exact data is solved by Gaussian
/// elimination; float data by SVD least squares, accepted when the
/// max-norm residual is at most `tol * max|target|`.
pub(crate) fn solve_span(
    backend: Backend,
    columns: &[Vec<Coefficient>],
    target: &[Coefficient],
    tol: f64,
) -> Option<Vec<Coefficient>> {
    match backend {
        Backend::Exact => solve_exact(columns, target).map(|x| x.into_iter().map(Coefficient::Rational).collect()),
        Backend::Float => solve_float(columns, target, tol)
            .map(|x| x.into_iter().map(Coefficient::Complex).collect()),
    }
}

fn solve_exact(columns: &[Vec<Coefficient>], target: &[Coefficient]) -> Option<Vec<BigRational>> {
    let rows = target.len();
    let cols = columns.len();
    let get = |c: &Coefficient| c.as_rational().expect("exact backend").clone();
    let mut m: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| {
            let mut row: Vec<BigRational> = columns.iter().map(|col| get(&col[i])).collect();
            row.push(get(&target[i]));
            row
        })
        .collect();

    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let lead = m[r][c].clone();
        for v in m[r].iter_mut() {
            *v = &*v / &lead;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..=cols {
                    let delta = &f * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    Some(x)
}

fn solve_float(columns: &[Vec<Coefficient>], target: &[Coefficient], tol: f64) -> Option<Vec<Complex64>> {
    let rows = target.len();
    let cols = columns.len();
    let b = DVector::from_iterator(rows, target.iter().map(Coefficient::to_complex));
    let scale = b.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Some(vec![Complex64::zero(); cols]);
    }
    if cols == 0 || rows == 0 {
        return None;
    }
    let a = DMatrix::from_fn(rows, cols, |i, j| columns[j][i].to_complex());
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let x = svd.solve(&b, smax * 1e-13).ok()?;
    let residual = (&a * &x - &b).iter().map(|z| z.norm()).fold(0.0, f64::max);
    (residual <= tol * scale).then(|| x.iter().copied().collect())
}

/// Numerical rank: singular values above `rel_tol * sigma_max`.
pub(crate) fn numerical_rank(rows: usize, cols: usize, entries: impl Fn(usize, usize) -> Complex64, rel_tol: f64) -> usize {
    if rows == 0 || cols == 0 {
        return 0;
    }
    let a = DMatrix::from_fn(rows, cols, entries);
    let sv = a.singular_values();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * smax).count()
}

/// Solves the square complex system `a x = b` by LU.
pub(crate) fn lu_solve(a: DMatrix<Complex64>, b: DVector<Complex64>) -> Option<DVector<Complex64>> {
    a.lu().solve(&b)
}
