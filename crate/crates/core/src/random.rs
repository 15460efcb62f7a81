// Copyright 2026 The oplattice Authors
// SPDX-License-Identifier: Apache-2.0

//! Seeded random fixtures: Gaussian matrices, Haar-like unitaries, density
//! operators and projectors of prescribed rank.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::lattice::Projector;
use crate::linalg::{c, CMatrix, CVector, HermitianOperator, UnitaryOperator, C64};
use crate::states::DensityState;

pub type FixtureRng = ChaCha8Rng;

pub fn rng(seed: u64) -> FixtureRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// `(G + G*)/2` for a Ginibre `G`.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> HermitianOperator {
    let g = ginibre(rng, n, n);
    HermitianOperator::new((&g + g.adjoint()) * c(0.5), 1e-12).expect("symmetrized")
}

/// Unitary from the QR factorization of a Ginibre matrix with the phases of
/// `R`'s diagonal removed.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> UnitaryOperator {
    let qr = ginibre(rng, n, n).qr();
    let (mut q, r) = qr.unpack();
    for k in 0..n {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0) };
        q.column_mut(k).iter_mut().for_each(|z| *z *= phase);
    }
    UnitaryOperator::new(q, 1e-10).expect("QR factor is unitary")
}

/// `n × k` matrix with orthonormal columns.
pub fn isometry<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> CMatrix {
    let u = unitary(rng, n).into_matrix();
    u.columns(0, k).into_owned()
}

pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVector {
    let v = CVector::from_fn(n, |_, _| complex_normal(rng));
    let norm = v.norm();
    v / c(norm)
}

pub fn projector<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> Projector {
    Projector::from_orthonormal_columns(&isometry(rng, n, rank))
}

/// Density operator `G G* / tr(G G*)` with `G` an `n × rank` Ginibre matrix.
pub fn density<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> DensityState {
    let g = ginibre(rng, n, rank);
    let m = &g * g.adjoint();
    let tr = crate::linalg::trace(&m).re;
    DensityState::new(m / c(tr), 1e-10).expect("positive by construction")
}
