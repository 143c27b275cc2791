//! Signature corpus shared by the integration tests.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use virasoro_core::family::{MuSignature, RVector, DEFAULT_MU_TOL};
use virasoro_core::solver::{closed_form, inflate, roots_of_unity_solution, solve_numeric, SolveOptions};
use virasoro_core::{Backend, Coefficient, LaurentPoly, SolutionSet};

/// Every `r` in `Gamma(n, k)` for `n <= n_max` with positive entries at most
/// `max`, in all orders.
pub fn small_gamma(n_max: usize, max: i64) -> Vec<RVector> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        for k in 1..=n {
            let mut code = 0;
            while code < max.pow(k as u32) {
                let mut r: Vec<i64> = (0..k).map(|i| 1 + (code / max.pow(i as u32)) % max).collect();
                r.extend(std::iter::repeat_n(-1, n - k));
                if let Ok(rv) = RVector::new(k, r) {
                    out.push(rv);
                }
                code += 1;
            }
        }
    }
    out
}

pub fn mu_from(set: &SolutionSet) -> Vec<MuSignature> {
    set.solutions
        .iter()
        .map(|s| s.to_mu(&set.r, DEFAULT_MU_TOL).expect("solver points are valid signatures"))
        .collect()
}

/// `r` values at the counting threshold `r_i >= n - k + 1`.
pub fn counting_cases() -> Vec<Vec<i64>> {
    vec![
        vec![1, 1, 1],
        vec![2, 2, 1],
        vec![4, 3, 2],
        vec![3, 2, -1],
        vec![3, -1, -1],
        vec![1, 1, 1, 1],
        vec![2, 1, 1, 1],
        vec![3, 3, -1, -1],
        vec![2, 2, 2, -1],
        vec![4, -1, -1, -1],
        vec![1, 1, 1, 1, 1],
        vec![2, 1, 1, 1, 1],
        vec![2, 2, 2, 2, -1],
        vec![3, 3, 3, -1, -1],
        vec![5, -1, -1, -1, -1],
    ]
}

pub struct Corpus {
    pub mus: Vec<MuSignature>,
    pub sets: Vec<SolutionSet>,
}

/// Closed forms for `n <= 3` with entries at most 4 (plus rescaled copies),
/// roots of unity for `n <= 6`, `r <= 3`, inflations with `s <= 3`, and
/// numeric points for `n = 4, 5`.
pub fn corpus() -> Corpus {
    let mut mus = Vec::new();
    let mut sets = Vec::new();
    let scales = [
        Coefficient::from_int(Backend::Exact, 2),
        Coefficient::rational(-1, 3).unwrap(),
        Coefficient::complex(1.0, 1.0).unwrap(),
    ];
    for (i, r) in small_gamma(3, 4).into_iter().enumerate() {
        let set = closed_form(&r).unwrap();
        for mu in mu_from(&set) {
            if i % 7 == 0 {
                let s = &scales[(i / 7) % scales.len()];
                mus.push(mu.scaled(s, DEFAULT_MU_TOL).unwrap());
            }
            mus.push(mu);
        }
        sets.push(set);
    }
    for n in 1..=6 {
        for r in 1..=3 {
            mus.push(roots_of_unity_solution(n, r).unwrap());
        }
    }
    let exact = |r: &[i64], a: &[i64]| {
        MuSignature::new(
            RVector::from_entries(r.to_vec()).unwrap(),
            a.iter().map(|&x| Coefficient::from_int(Backend::Exact, x)).collect(),
            DEFAULT_MU_TOL,
        )
        .unwrap()
    };
    let bases = [
        exact(&[1], &[1]),
        exact(&[1], &[4]),
        exact(&[1, 1], &[1, -1]),
        exact(&[2, 1, -1], &[2, -1, 3]),
        roots_of_unity_solution(3, 1).unwrap(),
    ];
    for base in &bases {
        for s in 2..=3 {
            mus.push(inflate(base, s).unwrap());
        }
    }
    for r in [vec![2, 2, -1, -1], vec![3, 3, -1, -1], vec![2, 2, 1, -1, -1], vec![3, 3, 3, -1, -1]] {
        let set = solve_numeric(&RVector::from_entries(r).unwrap(), &SolveOptions::default()).unwrap();
        mus.extend(mu_from(&set).into_iter().take(4));
        sets.push(set);
    }
    Corpus { mus, sets }
}

pub fn random_poly(rng: &mut ChaCha8Rng, max_terms: usize, span: i64, coeff: i64) -> LaurentPoly {
    let terms: Vec<(i64, i64)> = (0..rng.gen_range(1..=max_terms))
        .map(|_| (rng.gen_range(-span..=span), rng.gen_range(-coeff..=coeff)))
        .collect();
    LaurentPoly::from_ints(Backend::Exact, &terms)
}

pub fn random_nonzero_poly(rng: &mut ChaCha8Rng, max_terms: usize, span: i64, coeff: i64) -> LaurentPoly {
    loop {
        let p = random_poly(rng, max_terms, span, coeff);
        if !p.is_zero() {
            return p;
        }
    }
}

/// Invertible integer 2x2 matrix with entries in `-5..=5`.
pub fn random_basis_change(rng: &mut ChaCha8Rng) -> [[i64; 2]; 2] {
    loop {
        let m = [
            [rng.gen_range(-5..=5), rng.gen_range(-5..=5)],
            [rng.gen_range(-5..=5), rng.gen_range(-5..=5)],
        ];
        if m[0][0] * m[1][1] - m[0][1] * m[1][0] != 0 {
            return m;
        }
    }
}

pub fn complex(z: &Coefficient) -> Complex64 {
    z.to_complex()
}
