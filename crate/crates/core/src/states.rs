// Copyright 2026 The oplattice Authors
// SPDX-License-Identifier: Apache-2.0

//! Density operators and unit vectors as quantum states: Born probabilities,
//! moments, Lüders collapse, sequential measurements, state reconstruction
//! from probability assignments, and two-valuedness witnesses.

use nalgebra::{DMatrix, DVector};

use crate::error::{check_dim, Error, Result};
use crate::lattice::Projector;
use crate::linalg::{
    c, check_square, eig_hermitian, fix_phase, hermiticity_defect, identity, outer, trace,
    trace_product, CMatrix, CVector, HermitianOperator, DEFAULT_TOL, I,
};

/// Smallest probability accepted as a collapse denominator.
pub const PROB_FLOOR: f64 = 1e-12;

/// Default bound on the post-fit residual of [`gleason_fit`].
pub const DEFAULT_FIT_TOL: f64 = 1e-7;

/// Probability margin required of a two-valuedness witness.
pub const KS_MARGIN: f64 = 0.01;

/// A positive operator with unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityState {
    matrix: CMatrix,
}

impl DensityState {
    pub fn new(m: CMatrix, tol: f64) -> Result<Self> {
        let n = check_square(&m)?;
        crate::linalg::check_finite(&m)?;
        let herm = hermiticity_defect(&m);
        if herm > tol * m.norm().max(1.0) {
            return Err(Error::NotDensity(format!("hermiticity defect {herm:.3e}")));
        }
        let tr = trace(&m).re;
        if (tr - 1.0).abs() > tol {
            return Err(Error::NotDensity(format!("trace {tr}")));
        }
        let h = HermitianOperator::from_trusted(m);
        let min = eig_hermitian(&h)?.eigenvalues[0];
        if min < -tol {
            return Err(Error::NotDensity(format!("negative eigenvalue {min:.3e}")));
        }
        debug_assert_eq!(h.dim(), n);
        Ok(Self {
            matrix: h.into_matrix(),
        })
    }

    pub(crate) fn from_trusted(m: CMatrix) -> Self {
        let sym = (&m + m.adjoint()) * c(0.5);
        Self { matrix: sym }
    }

    pub fn pure(psi: &PureStateVector) -> Self {
        Self::from_trusted(outer(psi.amplitudes()))
    }

    pub fn maximally_mixed(n: usize) -> Self {
        Self::from_trusted(identity(n) / c(n as f64))
    }

    /// Diagonal state with the given probabilities.
    pub fn diagonal(probabilities: &[f64]) -> Result<Self> {
        Self::new(crate::linalg::diag_real(probabilities), DEFAULT_TOL)
    }

    /// Convex combination `Σ w_k ρ_k`.
    pub fn mixture(terms: &[(f64, &DensityState)]) -> Result<Self> {
        let n = terms
            .first()
            .map(|(_, r)| r.dim())
            .ok_or_else(|| Error::NotDensity("empty mixture".into()))?;
        let mut acc = CMatrix::zeros(n, n);
        for (w, r) in terms {
            check_dim(n, r.dim())?;
            acc += r.matrix() * c(*w);
        }
        Self::new(acc, DEFAULT_TOL)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn as_observable(&self) -> HermitianOperator {
        HermitianOperator::from_trusted(self.matrix.clone())
    }

    /// `tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        trace_product(&self.matrix, &self.matrix).re
    }
}

/// A unit vector with its global phase fixed so that the first nonzero
/// amplitude is real positive; equal rays give equal vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct PureStateVector {
    amplitudes: CVector,
}

impl PureStateVector {
    pub fn new(v: CVector, tol: f64) -> Result<Self> {
        let norm = v.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > tol {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self::normalize_unchecked(v))
    }

    /// Normalize any nonzero vector.
    pub fn normalize(v: CVector) -> Result<Self> {
        let norm = v.norm();
        if !norm.is_finite() || norm <= 0.0 {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self::normalize_unchecked(v))
    }

    fn normalize_unchecked(v: CVector) -> Self {
        let norm = v.norm();
        let mut v = v / c(norm);
        fix_phase(&mut v);
        Self { amplitudes: v }
    }

    pub fn basis(n: usize, k: usize) -> Self {
        Self::normalize_unchecked(crate::linalg::basis_vector(n, k))
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::normalize(CVector::from_iterator(
            values.len(),
            values.iter().map(|&x| c(x)),
        ))
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn density(&self) -> DensityState {
        DensityState::pure(self)
    }
}

fn checked_probability(p: f64, what: &'static str) -> Result<f64> {
    let slack = DEFAULT_TOL * 10.0;
    if p < -slack || p > 1.0 + slack || !p.is_finite() {
        return Err(Error::Tolerance {
            what,
            value: if p < 0.0 { -p } else { p - 1.0 },
            tol: slack,
        });
    }
    Ok(p.clamp(0.0, 1.0))
}

/// `tr(ρP)`.
pub fn born_probability(rho: &DensityState, p: &Projector) -> Result<f64> {
    check_dim(rho.dim(), p.dim())?;
    checked_probability(
        trace_product(rho.matrix(), p.matrix()).re,
        "Born probability",
    )
}

/// `tr(ρA)`.
pub fn expectation(rho: &DensityState, a: &HermitianOperator) -> Result<f64> {
    check_dim(rho.dim(), a.dim())?;
    Ok(trace_product(rho.matrix(), a.matrix()).re)
}

/// `sqrt(tr(ρA²) − tr(ρA)²)`, with a slightly negative radicand clamped to zero.
pub fn std_deviation(rho: &DensityState, a: &HermitianOperator) -> Result<f64> {
    check_dim(rho.dim(), a.dim())?;
    let mean = expectation(rho, a)?;
    let a2 = a.matrix() * a.matrix();
    let second = trace_product(rho.matrix(), &a2).re;
    let var = second - mean * mean;
    let slack = DEFAULT_TOL * second.abs().max(1.0);
    if var < -slack {
        return Err(Error::Tolerance {
            what: "variance",
            value: -var,
            tol: slack,
        });
    }
    Ok(var.max(0.0).sqrt())
}

/// Lüders update `PρP / tr(ρP)`.
pub fn luders_collapse(rho: &DensityState, p: &Projector) -> Result<DensityState> {
    let prob = born_probability(rho, p)?;
    if prob <= PROB_FLOOR {
        return Err(Error::ZeroProbability { probability: prob });
    }
    let m = p.matrix() * rho.matrix() * p.matrix() / c(prob);
    Ok(DensityState::from_trusted(m))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SequentialProbability {
    /// Probability of the chain measured in the given order.
    pub forward: f64,
    /// Probability of the chain measured in reverse order.
    pub reversed: f64,
}

impl SequentialProbability {
    pub fn order_sensitivity(&self) -> f64 {
        (self.forward - self.reversed).abs()
    }
}

fn chain_probability<'a>(
    rho: &DensityState,
    chain: impl Iterator<Item = &'a Projector>,
) -> Result<f64> {
    let n = rho.dim();
    let mut k = identity(n);
    for p in chain {
        check_dim(n, p.dim())?;
        k = p.matrix() * k;
    }
    let v = trace(&(&k * rho.matrix() * k.adjoint())).re;
    checked_probability(v, "sequential probability")
}

/// `tr(Pₙ···P₁ ρ P₁···Pₙ)` where `chain[0]` is measured first, together with
/// the value for the reversed chain.
pub fn sequential_probability(
    rho: &DensityState,
    chain: &[Projector],
) -> Result<SequentialProbability> {
    Ok(SequentialProbability {
        forward: chain_probability(rho, chain.iter())?,
        reversed: chain_probability(rho, chain.iter().rev())?,
    })
}

/// Probability of `e` after a measurement found `f`:
/// `tr(P_F P_E P_F ρ) / tr(ρ P_F)`.
pub fn conditional_probability(rho: &DensityState, e: &Projector, f: &Projector) -> Result<f64> {
    let denom = born_probability(rho, f)?;
    if denom <= PROB_FLOOR {
        return Err(Error::ZeroProbability { probability: denom });
    }
    let num = chain_probability(rho, [f, e].into_iter())?;
    Ok((num / denom).clamp(0.0, 1.0))
}

/// `|⟨ψ|φ⟩|²`.
pub fn transition_probability(psi: &PureStateVector, phi: &PureStateVector) -> Result<f64> {
    check_dim(psi.dim(), phi.dim())?;
    Ok(psi.amplitudes().dotc(phi.amplitudes()).norm_sqr())
}

/// `‖ρ² − ρ‖_F ≤ tol`.
pub fn is_pure(rho: &DensityState, tol: f64) -> bool {
    let m = rho.matrix();
    (m * m - m).norm() <= tol
}

/// A probability assigned to a projector.
#[derive(Debug, Clone)]
pub struct Assignment {
    pub projector: Projector,
    pub probability: f64,
}

/// Rank-one frame `{e_j} ∪ {(e_j + e_k)/√2} ∪ {(e_j + i e_k)/√2}`, `j < k`:
/// `n²` projectors whose expectation values determine a Hermitian operator.
pub fn tomography_frame(n: usize) -> Vec<Projector> {
    let mut frame = Vec::with_capacity(n * n);
    for j in 0..n {
        frame.push(Projector::onto_vector(&crate::linalg::basis_vector(n, j)));
    }
    for j in 0..n {
        for k in j + 1..n {
            for phase in [c(1.0), I] {
                let mut v = CVector::zeros(n);
                v[j] = c(1.0);
                v[k] = phase;
                frame.push(Projector::onto_vector(&v));
            }
        }
    }
    frame
}

/// Exact probabilities of `rho` on each projector of a frame.
pub fn simulate_assignments(rho: &DensityState, frame: &[Projector]) -> Result<Vec<Assignment>> {
    frame
        .iter()
        .map(|p| {
            Ok(Assignment {
                projector: p.clone(),
                probability: born_probability(rho, p)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct GleasonFit {
    pub state: DensityState,
    /// Largest `|tr(T P_i) − p_i|` of the returned state.
    pub residual: f64,
    /// Same residual for the unconstrained least-squares solution.
    pub least_squares_residual: f64,
    /// Numerical rank of the assignment system.
    pub rank: usize,
    /// Largest eigenvalue mass removed by the positivity projection.
    pub clipped: f64,
    /// In dimension 2 probability assignments need not come from a density
    /// operator; the fit is still returned, flagged.
    pub dim2_warning: bool,
}

/// Real coordinates of a Hermitian `T` whose inner product with those of `P`
/// reproduces `tr(TP)`: diagonal entries, then `(Re, Im)` of the upper
/// triangle weighted by 2.
fn trace_functional_row(p: &CMatrix) -> Vec<f64> {
    let n = p.nrows();
    let mut row = Vec::with_capacity(n * n);
    for j in 0..n {
        row.push(p[(j, j)].re);
    }
    for j in 0..n {
        for k in j + 1..n {
            row.push(2.0 * p[(j, k)].re);
            row.push(2.0 * p[(j, k)].im);
        }
    }
    row
}

fn hermitian_from_params(n: usize, x: &DVector<f64>) -> CMatrix {
    let mut t = CMatrix::zeros(n, n);
    for j in 0..n {
        t[(j, j)] = c(x[j]);
    }
    let mut idx = n;
    for j in 0..n {
        for k in j + 1..n {
            let z = crate::linalg::C64::new(x[idx], x[idx + 1]);
            t[(j, k)] = z;
            t[(k, j)] = z.conj();
            idx += 2;
        }
    }
    t
}

/// Reconstruct the density operator behind a probability assignment by linear
/// least squares over Hermitian matrices, then project onto the positive
/// unit-trace set by clipping negative eigenvalues.
pub fn gleason_fit(assignments: &[Assignment], fit_tol: f64) -> Result<GleasonFit> {
    let first = assignments
        .first()
        .ok_or(Error::UnderdeterminedFrame { rank: 0, needed: 1 })?;
    let n = first.projector.dim();
    for a in assignments {
        check_dim(n, a.projector.dim())?;
    }
    let needed = n * n;
    let m = assignments.len();
    let rows: Vec<Vec<f64>> = assignments
        .iter()
        .map(|a| trace_functional_row(a.projector.matrix()))
        .collect();
    let system = DMatrix::from_fn(m, needed, |i, j| rows[i][j]);
    let rhs = DVector::from_iterator(m, assignments.iter().map(|a| a.probability));

    let svd = crate::linalg::checked_svd_real(&system);
    let smax = svd.singular_values.max();
    let cutoff = 1e-10 * smax.max(f64::MIN_POSITIVE);
    let rank = svd.singular_values.iter().filter(|&&s| s > cutoff).count();
    if rank < needed {
        return Err(Error::UnderdeterminedFrame { rank, needed });
    }
    let x = svd
        .solve(&rhs, cutoff)
        .map_err(|e| Error::Malformed(e.to_string()))?;
    let ls_residual = (&system * &x - &rhs).amax();

    let raw = HermitianOperator::from_trusted(hermitian_from_params(n, &x));
    let eig = eig_hermitian(&raw)?;
    let clipped = eig
        .eigenvalues
        .iter()
        .filter(|&&l| l < 0.0)
        .map(|l| -l)
        .sum::<f64>();
    let positive = eig.map(|l| c(l.max(0.0)));
    let tr = trace(&positive).re;
    if tr.is_nan() || tr <= 0.0 {
        return Err(Error::InconsistentAssignments {
            residual: ls_residual,
        });
    }
    let state = DensityState::from_trusted(positive / c(tr));
    let residual = assignments
        .iter()
        .map(|a| (trace_product(state.matrix(), a.projector.matrix()).re - a.probability).abs())
        .fold(0.0, f64::max);
    if residual > fit_tol {
        return Err(Error::InconsistentAssignments { residual });
    }
    Ok(GleasonFit {
        state,
        residual,
        least_squares_residual: ls_residual,
        rank,
        clipped,
        dim2_warning: n == 2,
    })
}

#[derive(Debug, Clone)]
pub struct KochenSpeckerWitness {
    pub projector: Projector,
    pub probability: f64,
}

/// Find a rank-one projector on which `rho` is neither 0 nor 1 (up to the
/// margin [`KS_MARGIN`]): no quantum state is two-valued on the projector
/// lattice. Candidates are the eigenvectors of `rho` and their balanced
/// superpositions, then seeded random rays.
pub fn kochen_specker_witness(rho: &DensityState, seed: u64) -> Result<KochenSpeckerWitness> {
    let n = rho.dim();
    if n < 3 {
        return Err(Error::BadDimension {
            dim: n,
            reason: "two-valuedness witnesses require dimension at least 3",
        });
    }
    let eig = eig_hermitian(&rho.as_observable())?;
    // largest weights first
    let basis: Vec<CVector> = (0..n).rev().map(|k| eig.vector(k)).collect();
    let mut candidates: Vec<CVector> = basis.clone();
    for j in 0..n {
        for k in j + 1..n {
            for phase in [c(1.0), I] {
                candidates.push(&basis[j] + &basis[k] * phase);
            }
        }
    }
    let accept = |p: f64| (KS_MARGIN..=1.0 - KS_MARGIN).contains(&p);
    let mut best = (f64::INFINITY, 0.0);
    let mut consider = |v: CVector| -> Result<Option<KochenSpeckerWitness>> {
        let projector = Projector::onto_vector(&v);
        let probability = born_probability(rho, &projector)?;
        let distance = (probability - 0.5).abs();
        if distance < best.0 {
            best = (distance, probability);
        }
        Ok(accept(probability).then_some(KochenSpeckerWitness {
            projector,
            probability,
        }))
    };
    for v in candidates {
        if let Some(w) = consider(v)? {
            return Ok(w);
        }
    }
    let mut rng = crate::random::rng(seed);
    for _ in 0..1000 {
        let v = CVector::from_fn(n, |_, _| crate::random::complex_normal(&mut rng));
        if let Some(w) = consider(v)? {
            return Ok(w);
        }
    }
    Err(Error::WitnessNotFound {
        best_probability: best.1,
    })
}
