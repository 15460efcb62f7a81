// Copyright 2026 The oplattice Authors
// SPDX-License-Identifier: Apache-2.0

//! Reference routines that share no code path with the library's spectral
//! machinery.

#![allow(dead_code)]

use oplattice::linalg::{c, identity, CMatrix, C64};

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
pub fn expm_taylor(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let norm = a.norm();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a / c(2f64.powi(squarings));
    let mut term = identity(n);
    let mut sum = identity(n);
    for k in 1..=30 {
        term = &term * &scaled / c(k as f64);
        sum += &term;
        if term.norm() < 1e-18 * sum.norm() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Characteristic polynomial coefficients `[c_0, …, c_n]` (monic, `c_n = 1`)
/// by the Faddeev–LeVerrier recursion.
pub fn char_poly(a: &CMatrix) -> Vec<C64> {
    let n = a.nrows();
    let mut coeffs = vec![C64::new(0.0, 0.0); n + 1];
    coeffs[n] = C64::new(1.0, 0.0);
    let mut m = CMatrix::zeros(n, n);
    for k in 1..=n {
        m = a * &m + identity(n) * coeffs[n - k + 1];
        let am = a * &m;
        coeffs[n - k] = -am.trace() / c(k as f64);
    }
    coeffs
}

/// Roots of a monic polynomial by Durand–Kerner iteration.
pub fn poly_roots(coeffs: &[C64]) -> Vec<C64> {
    let n = coeffs.len() - 1;
    let eval = |z: C64| {
        coeffs
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, &k| acc * z + k)
    };
    let radius = 1.0 + coeffs[..n].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let seed = C64::new(0.4, 0.9);
    let mut roots: Vec<C64> = (0..n).map(|k| seed.powu(k as u32) * radius).collect();
    for _ in 0..2000 {
        let mut delta = 0.0_f64;
        for i in 0..n {
            let mut denom = C64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * radius {
            break;
        }
    }
    roots
}

/// Eigenvalues of a Hermitian matrix as sorted real parts of the
/// characteristic roots.
pub fn eigenvalues_via_char_poly(a: &CMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = poly_roots(&char_poly(a)).iter().map(|z| z.re).collect();
    v.sort_by(f64::total_cmp);
    v
}
