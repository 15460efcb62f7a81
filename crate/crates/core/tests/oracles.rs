// Copyright 2026 The oplattice Authors
// SPDX-License-Identifier: Apache-2.0

mod common;

use oplattice::dynamics::{evolve_unitary, Propagator};
use oplattice::linalg::{eig_hermitian, operator_norm, pauli, CMatrix, C64};
use oplattice::random;

#[test]
fn eigenvalues_match_characteristic_roots() {
    let mut rng = random::rng(100);
    for n in 2..=6 {
        for _ in 0..10 {
            let h = random::hermitian(&mut rng, n);
            let eig = eig_hermitian(&h).unwrap();
            let oracle = common::eigenvalues_via_char_poly(h.matrix());
            for (a, b) in eig.eigenvalues.iter().zip(&oracle) {
                assert!((a - b).abs() < 1e-8, "n={n}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn pauli_spectra_from_characteristic_roots() {
    for s in pauli() {
        let roots = common::eigenvalues_via_char_poly(&s);
        assert!((roots[0] + 1.0).abs() < 1e-12 && (roots[1] - 1.0).abs() < 1e-12);
    }
}

#[test]
fn operator_norm_of_normal_matrices_is_spectral_radius() {
    let mut rng = random::rng(101);
    for n in [2, 5, 9] {
        let u = random::unitary(&mut rng, n);
        let z: Vec<C64> = (0..n).map(|_| random::complex_normal(&mut rng)).collect();
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(z.clone()));
        let a = u.matrix() * d * u.matrix().adjoint();
        let radius = z.iter().map(|w| w.norm()).fold(0.0, f64::max);
        assert!((operator_norm(&a) - radius).abs() < 1e-12 * radius.max(1.0));
    }
}

#[test]
fn evolution_matches_series_exponential() {
    let mut rng = random::rng(102);
    for n in [2, 4, 7] {
        let h = random::hermitian(&mut rng, n);
        let u = evolve_unitary(&h, 0.7).unwrap();
        let oracle = common::expm_taylor(&(h.matrix() * C64::new(0.0, -0.7)));
        assert!((u.matrix() - oracle).norm() < 1e-10);
    }
}

#[test]
fn propagator_with_hbar_matches_series_exponential() {
    let mut rng = random::rng(103);
    let h = random::hermitian(&mut rng, 4);
    let u = Propagator::new(&h, 0.3).unwrap().at(0.45);
    let oracle = common::expm_taylor(&(h.matrix() * C64::new(0.0, -1.5)));
    assert!((u.matrix() - oracle).norm() < 1e-10);
}
