// Copyright 2026 The oplattice Authors
// SPDX-License-Identifier: Apache-2.0

//! Symmetries and time evolution: Wigner (anti)unitaries, one-parameter
//! groups and their generators, the Heisenberg picture, Noether's
//! equivalences, time-ordered evolution and projective multipliers.

use std::cmp::Ordering;

use crate::error::{check_dim, Error, Result};
use crate::linalg::{
    c, check_square, eig_hermitian, identity, operator_norm, pauli, unitarity_defect, CMatrix,
    HermitianOperator, UnitaryOperator, C64, ONE,
};
use crate::spectral::{spectral_decompose, ProjectorValuedMeasure};
use crate::states::DensityState;

/// Cluster tolerance used when building propagators. Much tighter than the
/// default so that merged eigenvalues perturb `e^{-itH}` far below 1e-10.
pub const EVOLVE_CLUSTER_TOL: f64 = 1e-12;

/// Grid for the Noether and group-commutation checks. Incommensurate, so a
/// periodic group cannot pass by landing on a period.
pub const DEFAULT_GRID: [f64; 3] = [0.1, 0.37, 1.0];

/// Symmetric stencil used by `generator_from_group` in the examples and the
/// acceptance checks.
pub const DEFAULT_STENCIL: [f64; 4] = [-1e-3, -5e-4, 5e-4, 1e-3];

pub const DEFAULT_RECON_TOL: f64 = 1e-8;

pub const MAX_DYSON_ORDER: usize = 12;

// ---------------------------------------------------------------------------
// Wigner symmetries

/// A unitary `x ↦ Ux` or antiunitary `x ↦ U·conj(x)` operator.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryOperator {
    matrix: CMatrix,
    antiunitary: bool,
}

impl SymmetryOperator {
    pub fn new(matrix: CMatrix, antiunitary: bool, tol: f64) -> Result<Self> {
        let u = UnitaryOperator::new(matrix, tol)?;
        Ok(Self {
            matrix: u.into_matrix(),
            antiunitary,
        })
    }

    pub fn unitary(u: &UnitaryOperator) -> Self {
        Self {
            matrix: u.matrix().clone(),
            antiunitary: false,
        }
    }

    /// Complex conjugation in the standard basis.
    pub fn time_reversal(n: usize) -> Self {
        Self {
            matrix: identity(n),
            antiunitary: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn is_antiunitary(&self) -> bool {
        self.antiunitary
    }

    fn conj_if(&self, m: &CMatrix) -> CMatrix {
        if self.antiunitary {
            m.map(|z| z.conj())
        } else {
            m.clone()
        }
    }

    /// Apply to a vector (or to each column of a matrix).
    pub fn apply(&self, x: &CMatrix) -> Result<CMatrix> {
        check_dim(self.dim(), x.nrows())?;
        Ok(&self.matrix * self.conj_if(x))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SymmetryOperator) -> Result<Self> {
        check_dim(self.dim(), other.dim())?;
        Ok(Self {
            matrix: &self.matrix * self.conj_if(&other.matrix),
            antiunitary: self.antiunitary ^ other.antiunitary,
        })
    }

    pub fn inverse(&self) -> Self {
        let matrix = if self.antiunitary {
            self.matrix.transpose()
        } else {
            self.matrix.adjoint()
        };
        Self {
            matrix,
            antiunitary: self.antiunitary,
        }
    }

    /// `V A V⁻¹`, which is `U conj(A) U*` for an antiunitary `V`.
    pub fn conjugate(&self, a: &CMatrix) -> Result<CMatrix> {
        check_dim(self.dim(), check_square(a)?)?;
        Ok(&self.matrix * self.conj_if(a) * self.matrix.adjoint())
    }
}

/// `s(ρ) = VρV⁻¹`.
pub fn wigner_apply(v: &SymmetryOperator, rho: &DensityState) -> Result<DensityState> {
    Ok(DensityState::from_trusted(v.conjugate(rho.matrix())?))
}

/// `s*(A) = VAV⁻¹`.
pub fn wigner_apply_observable(
    v: &SymmetryOperator,
    a: &HermitianOperator,
) -> Result<HermitianOperator> {
    Ok(HermitianOperator::from_trusted(v.conjugate(a.matrix())?))
}

/// A unitary `T` with `THT⁻¹ = −H` forces `σ(H) = −σ(H)`. Returns `true` when
/// the spectra (as multisets) differ by more than `tol·max(1, ‖H‖)`, which
/// certifies that no such unitary exists.
pub fn unitary_reversal_obstructed(h: &HermitianOperator, tol: f64) -> Result<bool> {
    let eig = eig_hermitian(h)?;
    let mut neg: Vec<f64> = eig.eigenvalues.iter().map(|x| -x).collect();
    neg.sort_by(f64::total_cmp);
    let gap = eig
        .eigenvalues
        .iter()
        .zip(&neg)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let scale = eig.eigenvalues.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    Ok(gap > tol * scale)
}

// ---------------------------------------------------------------------------
// One-parameter groups

/// `t ↦ e^{-itH/ħ}`, evaluated through the spectral measure of `H`.
#[derive(Debug, Clone)]
pub struct Propagator {
    pvm: ProjectorValuedMeasure,
    hbar: f64,
}

impl Propagator {
    pub fn new(h: &HermitianOperator, hbar: f64) -> Result<Self> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::Malformed(format!(
                "hbar must be positive, got {hbar}"
            )));
        }
        Ok(Self {
            pvm: spectral_decompose(h, EVOLVE_CLUSTER_TOL)?,
            hbar,
        })
    }

    pub fn dim(&self) -> usize {
        self.pvm.dim()
    }

    pub fn at(&self, t: f64) -> UnitaryOperator {
        let s = t / self.hbar;
        UnitaryOperator::from_trusted(self.pvm.apply(|l| C64::from_polar(1.0, -s * l[0])))
    }
}

/// `e^{-itH}`.
pub fn evolve_unitary(h: &HermitianOperator, t: f64) -> Result<UnitaryOperator> {
    Ok(Propagator::new(h, 1.0)?.at(t))
}

/// `(t, e^{-itH})` for each `t`.
pub fn sample_group(h: &HermitianOperator, times: &[f64]) -> Result<Vec<(f64, UnitaryOperator)>> {
    let prop = Propagator::new(h, 1.0)?;
    Ok(times.iter().map(|&t| (t, prop.at(t))).collect())
}

/// Recover `H` from samples of `U_t = e^{-itH}` near `t = 0`.
///
/// With symmetric pairs `±h` the central difference `i(U_h − U_{−h})/2h` is
/// used, extrapolated in `h²` over the two smallest pairs. Otherwise the
/// one-sided `i(U_h − I)/h` is extrapolated in `h`. The estimate must
/// reproduce every sample to `recon_tol·max(1, |t|)`.
pub fn generator_from_group(
    samples: &[(f64, UnitaryOperator)],
    recon_tol: f64,
) -> Result<HermitianOperator> {
    let first = samples
        .first()
        .ok_or_else(|| Error::Malformed("no group samples".into()))?;
    let n = first.1.dim();
    for (t, u) in samples {
        check_dim(n, u.dim())?;
        if !t.is_finite() {
            return Err(Error::Malformed("non-finite sample time".into()));
        }
    }
    let find = |t: f64| {
        samples
            .iter()
            .find(|(s, _)| (s - t).abs() <= 1e-15 * t.abs().max(1e-300))
            .map(|(_, u)| u.matrix())
    };
    let mut positive: Vec<f64> = samples
        .iter()
        .map(|(t, _)| *t)
        .filter(|&t| t > 0.0)
        .collect();
    positive.sort_by(f64::total_cmp);
    positive.dedup();
    let symmetric: Vec<f64> = positive
        .iter()
        .copied()
        .filter(|&h| find(-h).is_some())
        .collect();
    let i = C64::new(0.0, 1.0);

    let estimate = if !symmetric.is_empty() {
        for &h in &symmetric {
            let defect = (find(h).unwrap() * find(-h).unwrap() - identity(n)).norm();
            if defect > recon_tol * (n as f64).sqrt() {
                return Err(Error::InconsistentGroup { defect });
            }
        }
        let central = |h: f64| (find(h).unwrap() - find(-h).unwrap()) * (i / (2.0 * h));
        if symmetric.len() >= 2 {
            let (h2, h1) = (symmetric[0], symmetric[1]);
            let r2 = (h1 / h2).powi(2);
            (central(h2) * c(r2) - central(h1)) / c(r2 - 1.0)
        } else {
            central(symmetric[0])
        }
    } else {
        if positive.is_empty() {
            return Err(Error::Malformed("no nonzero sample times".into()));
        }
        let forward = |h: f64| (find(h).unwrap() - identity(n)) * (i / h);
        if positive.len() >= 2 {
            let (h2, h1) = (positive[0], positive[1]);
            let r = h1 / h2;
            (forward(h2) * c(r) - forward(h1)) / c(r - 1.0)
        } else {
            forward(positive[0])
        }
    };
    let adj = estimate.adjoint();
    let hermitian = (&estimate + &adj) * c(0.5);
    let skew = (&estimate - &adj).norm() * 0.5;
    if skew > 1e-4 * hermitian.norm().max(1.0) {
        return Err(Error::NotHermitianResult { defect: skew });
    }
    let h = HermitianOperator::from_trusted(hermitian);
    let prop = Propagator::new(&h, 1.0)?;
    let mut worst = 0.0_f64;
    for (t, u) in samples {
        let defect = (prop.at(*t).matrix() - u.matrix()).norm() / t.abs().max(1.0);
        worst = worst.max(defect);
    }
    if worst > recon_tol {
        return Err(Error::InconsistentGroup { defect: worst });
    }
    Ok(h)
}

/// Heisenberg picture `A_t = U_t* A U_t` with `U_t = e^{-itH}`.
pub fn heisenberg_observable(
    a: &HermitianOperator,
    h: &HermitianOperator,
    t: f64,
) -> Result<HermitianOperator> {
    check_dim(h.dim(), a.dim())?;
    let u = evolve_unitary(h, t)?;
    let at = u.matrix().adjoint() * a.matrix() * u.matrix();
    Ok(HermitianOperator::from_trusted(at))
}

/// Outcome of checking the three equivalent forms of Noether's theorem.
#[derive(Debug, Clone, PartialEq)]
pub struct NoetherReport {
    /// `A_t = A` on the time grid.
    pub constant_of_motion: bool,
    /// `e^{-isA} U_t = U_t e^{-isA}` on the grid.
    pub dynamical_symmetry: bool,
    /// `e^{-isA} H e^{isA} = H` on the grid.
    pub h_invariance: bool,
    /// Normalized defects of the three conditions, in the same order.
    pub defects: [f64; 3],
    pub tol: f64,
}

impl NoetherReport {
    pub fn all(&self) -> bool {
        self.constant_of_motion && self.dynamical_symmetry && self.h_invariance
    }
}

/// Evaluate the three conditions on the grids. Defects are normalized by
/// `max(1, ‖A‖)`, `√n` and `max(1, ‖H‖)` respectively. Since the conditions
/// are equivalent, a disagreement means the tolerance is wrong for the
/// input and is reported as `EquivalenceViolation`.
pub fn noether_check(
    a: &HermitianOperator,
    h: &HermitianOperator,
    t_grid: &[f64],
    s_grid: &[f64],
    tol: f64,
) -> Result<NoetherReport> {
    check_dim(h.dim(), a.dim())?;
    if t_grid.is_empty() || s_grid.is_empty() {
        return Err(Error::Malformed("empty grid".into()));
    }
    let n = a.dim();
    let ph = Propagator::new(h, 1.0)?;
    let pa = Propagator::new(a, 1.0)?;
    let a_scale = a.matrix().norm().max(1.0);
    let h_scale = h.matrix().norm().max(1.0);
    let mut d = [0.0_f64; 3];
    for &t in t_grid {
        let u = ph.at(t);
        let at = u.matrix().adjoint() * a.matrix() * u.matrix();
        d[0] = d[0].max((at - a.matrix()).norm() / a_scale);
        for &s in s_grid {
            let w = pa.at(s);
            let comm = w.matrix() * u.matrix() - u.matrix() * w.matrix();
            d[1] = d[1].max(comm.norm() / (n as f64).sqrt());
        }
    }
    for &s in s_grid {
        let w = pa.at(s);
        let hs = w.matrix() * h.matrix() * w.matrix().adjoint();
        d[2] = d[2].max((hs - h.matrix()).norm() / h_scale);
    }
    let report = NoetherReport {
        constant_of_motion: d[0] <= tol,
        dynamical_symmetry: d[1] <= tol,
        h_invariance: d[2] <= tol,
        defects: d,
        tol,
    };
    let flags = [
        report.constant_of_motion,
        report.dynamical_symmetry,
        report.h_invariance,
    ];
    if flags.iter().any(|&f| f != flags[0]) {
        return Err(Error::EquivalenceViolation(format!(
            "flags {flags:?} with defects {d:?} at tol {tol:e}"
        )));
    }
    Ok(report)
}

/// Largest `‖e^{-itA}e^{-isB} − e^{-isB}e^{-itA}‖_F/√n` over the grid.
pub fn group_commutation_defect(
    a: &HermitianOperator,
    b: &HermitianOperator,
    grid: &[f64],
) -> Result<f64> {
    check_dim(a.dim(), b.dim())?;
    let n = a.dim() as f64;
    let pa = Propagator::new(a, 1.0)?;
    let pb = Propagator::new(b, 1.0)?;
    let mut worst = 0.0_f64;
    for &t in grid {
        let ua = pa.at(t);
        for &s in grid {
            let ub = pb.at(s);
            let comm = ua.matrix() * ub.matrix() - ub.matrix() * ua.matrix();
            worst = worst.max(comm.norm() / n.sqrt());
        }
    }
    Ok(worst)
}

/// Whether the one-parameter groups of `A` and `B` commute on the grid.
pub fn commuting_via_groups(
    a: &HermitianOperator,
    b: &HermitianOperator,
    grid: &[f64],
    tol: f64,
) -> Result<bool> {
    Ok(group_commutation_defect(a, b, grid)? <= tol)
}

// ---------------------------------------------------------------------------
// Time-ordered evolution

#[derive(Debug, Clone)]
pub struct DysonResult {
    /// Ordered product of midpoint exponentials.
    pub unitary: UnitaryOperator,
    /// Truncated time-ordered series.
    pub series: CMatrix,
    /// `‖unitary − series‖_F`.
    pub series_difference: f64,
    /// `‖U*U − I‖_F` of the product integral.
    pub unitarity_defect: f64,
    /// `‖U*U − I‖_F` of the truncated series.
    pub series_unitarity_defect: f64,
    /// Bound on the dropped series terms: `M^{K+1}/(K+1)!·e^M`, `M = ∫‖H‖`.
    pub truncation_bound: f64,
    pub order: usize,
    pub steps: usize,
}

fn interpolate(samples: &[(f64, HermitianOperator)], tau: f64) -> CMatrix {
    let k = samples.partition_point(|(s, _)| *s <= tau);
    if k == 0 {
        return samples[0].1.matrix().clone();
    }
    if k == samples.len() {
        return samples[k - 1].1.matrix().clone();
    }
    let (a, ha) = &samples[k - 1];
    let (b, hb) = &samples[k];
    let w = (tau - a) / (b - a);
    ha.matrix() * c(1.0 - w) + hb.matrix() * c(w)
}

/// Evolution from `t1` to `t2` under the time-dependent Hamiltonian sampled
/// at strictly increasing times, linearly interpolated between samples.
pub fn dyson_evolve(
    samples: &[(f64, HermitianOperator)],
    t1: f64,
    t2: f64,
    order: usize,
) -> Result<DysonResult> {
    if order > MAX_DYSON_ORDER {
        return Err(Error::OrderTooLarge(order));
    }
    let first = samples
        .first()
        .ok_or_else(|| Error::QuadratureTooCoarse("no samples".into()))?;
    let n = first.1.dim();
    for w in samples.windows(2) {
        check_dim(n, w[1].1.dim())?;
        if w[1].0.partial_cmp(&w[0].0) != Some(Ordering::Greater) {
            return Err(Error::Malformed(
                "sample times must increase strictly".into(),
            ));
        }
    }
    if t1.partial_cmp(&t2).is_none_or(|o| o == Ordering::Greater) {
        return Err(Error::Malformed(format!(
            "need t1 <= t2, got {t1} and {t2}"
        )));
    }
    let (lo, hi) = (first.0, samples[samples.len() - 1].0);
    if t1 < lo || t2 > hi {
        return Err(Error::QuadratureTooCoarse(format!(
            "[{t1}, {t2}] is not covered by samples on [{lo}, {hi}]"
        )));
    }

    let mut nodes = vec![t1];
    nodes.extend(
        samples
            .iter()
            .map(|(s, _)| *s)
            .filter(|&s| s > t1 && s < t2),
    );
    if t2 > t1 {
        nodes.push(t2);
    }
    let hs: Vec<CMatrix> = nodes.iter().map(|&t| interpolate(samples, t)).collect();
    let norms: Vec<f64> = hs.iter().map(operator_norm).collect();
    let mass: f64 = nodes
        .windows(2)
        .zip(norms.windows(2))
        .map(|(t, m)| 0.5 * (t[1] - t[0]) * (m[0] + m[1]))
        .sum();
    let needed = (order + 1) * (mass.ceil() as usize).max(1);
    if t2 > t1 && nodes.len() < needed {
        return Err(Error::QuadratureTooCoarse(format!(
            "{} nodes, need at least {needed}",
            nodes.len()
        )));
    }

    // product integral, later times on the left
    let mut u = identity(n);
    for w in nodes.windows(2) {
        let mid = interpolate(samples, 0.5 * (w[0] + w[1]));
        let step = evolve_unitary(&HermitianOperator::from_trusted(mid), w[1] - w[0])?;
        u = step.matrix() * u;
    }

    // series: S_k(τ) = ∫_{t1}^{τ} H(σ) S_{k−1}(σ) dσ, trapezoid on each node
    let mut prev: Vec<CMatrix> = vec![identity(n); nodes.len()];
    let mut series = identity(n);
    let mut coeff = ONE;
    for _ in 1..=order {
        let mut next = Vec::with_capacity(nodes.len());
        next.push(CMatrix::zeros(n, n));
        for j in 0..nodes.len() - 1 {
            let dt = nodes[j + 1] - nodes[j];
            let inc = (&hs[j] * &prev[j] + &hs[j + 1] * &prev[j + 1]) * c(0.5 * dt);
            next.push(&next[j] + inc);
        }
        coeff *= C64::new(0.0, -1.0);
        series += &next[nodes.len() - 1] * coeff;
        prev = next;
    }

    let factorial: f64 = (1..=order + 1).map(|k| k as f64).product();
    let truncation_bound = mass.powi(order as i32 + 1) / factorial * mass.exp();
    Ok(DysonResult {
        series_difference: (&u - &series).norm(),
        unitarity_defect: unitarity_defect(&u),
        series_unitarity_defect: unitarity_defect(&series),
        unitary: UnitaryOperator::from_trusted(u),
        series,
        truncation_bound,
        order,
        steps: nodes.len() - 1,
    })
}

// ---------------------------------------------------------------------------
// Projective representations

/// Multipliers `ω(g, g′)` of a projective representation of a finite group,
/// indexed by element position.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierTable {
    pub elements: Vec<String>,
    pub omega: Vec<Vec<C64>>,
}

impl MultiplierTable {
    pub fn new(elements: Vec<String>, omega: Vec<Vec<C64>>, tol: f64) -> Result<Self> {
        let m = elements.len();
        if omega.len() != m || omega.iter().any(|row| row.len() != m) {
            return Err(Error::Malformed(format!(
                "multiplier table must be {m}×{m}"
            )));
        }
        for row in &omega {
            for w in row {
                if (w.norm() - 1.0).abs() > tol {
                    return Err(Error::Tolerance {
                        what: "multiplier modulus",
                        value: w.norm(),
                        tol,
                    });
                }
            }
        }
        Ok(Self { elements, omega })
    }

    pub fn trivial(elements: Vec<String>) -> Self {
        let m = elements.len();
        Self {
            elements,
            omega: vec![vec![ONE; m]; m],
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

fn check_group_table(mult: &[Vec<usize>], m: usize) -> Result<()> {
    if mult.len() != m
        || mult
            .iter()
            .any(|row| row.len() != m || row.iter().any(|&k| k >= m))
    {
        return Err(Error::Malformed(format!(
            "group table must be {m}×{m} with entries < {m}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CocycleReport {
    /// Largest `|ω(g₁,g₂)ω(g₁g₂,g₃) − ω(g₁,g₂g₃)ω(g₂,g₃)|`.
    pub max_defect: f64,
    /// Largest spread of the values `ω(g, e)` and `ω(e, g)`.
    pub normalization_defect: f64,
    pub identity: Option<usize>,
}

/// Verify the cocycle identity for every triple.
pub fn cocycle_check(
    table: &MultiplierTable,
    mult: &[Vec<usize>],
    tol: f64,
) -> Result<CocycleReport> {
    let m = table.len();
    check_group_table(mult, m)?;
    let w = &table.omega;
    let mut max_defect = 0.0_f64;
    for g1 in 0..m {
        for g2 in 0..m {
            for g3 in 0..m {
                let lhs = w[g1][g2] * w[mult[g1][g2]][g3];
                let rhs = w[g1][mult[g2][g3]] * w[g2][g3];
                let defect = (lhs - rhs).norm();
                if defect > tol {
                    return Err(Error::NotACocycle { g1, g2, g3, defect });
                }
                max_defect = max_defect.max(defect);
            }
        }
    }
    let identity = (0..m).find(|&e| (0..m).all(|g| mult[e][g] == g && mult[g][e] == g));
    let normalization_defect = identity.map_or(0.0, |e| {
        let reference = w[e][e];
        (0..m)
            .flat_map(|g| [w[g][e], w[e][g]])
            .map(|z| (z - reference).norm())
            .fold(0.0, f64::max)
    });
    Ok(CocycleReport {
        max_defect,
        normalization_defect,
        identity,
    })
}

/// Read off `ω(g,g′) = tr(U_g U_{g′} U_{gg′}*)/n` and check that
/// `U_g U_{g′} U_{gg′}* = ω I` to `tol`.
pub fn multipliers_from_operators(
    elements: Vec<String>,
    ops: &[UnitaryOperator],
    mult: &[Vec<usize>],
    tol: f64,
) -> Result<MultiplierTable> {
    let m = ops.len();
    if elements.len() != m {
        return Err(Error::Malformed("one operator per group element".into()));
    }
    check_group_table(mult, m)?;
    let n = ops.first().map_or(0, |u| u.dim());
    for u in ops {
        check_dim(n, u.dim())?;
    }
    let mut omega = vec![vec![ONE; m]; m];
    for g in 0..m {
        for h in 0..m {
            let prod = ops[g].matrix() * ops[h].matrix() * ops[mult[g][h]].matrix().adjoint();
            let w = crate::linalg::trace(&prod) / c(n as f64);
            let defect = (prod - identity(n) * w).norm();
            if defect > tol {
                return Err(Error::NotProjective { defect });
            }
            omega[g][h] = w / w.norm();
        }
    }
    MultiplierTable::new(elements, omega, tol)
}

/// Phase rate `c` of a sampled projective one-parameter family: the
/// least-squares slope of the unwrapped `arg det(V_r)/n` against `r`.
/// Multiplying `V_r` by `e^{-icr}` gives the determinant-one representative.
/// Samples should be sorted and dense enough that consecutive phases differ
/// by less than π.
pub fn fit_phase_rate(samples: &[(f64, UnitaryOperator)]) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::Malformed("need at least two samples".into()));
    }
    let n = samples[0].1.dim() as f64;
    let mut phases = Vec::with_capacity(samples.len());
    let mut last = 0.0_f64;
    for (k, (_, u)) in samples.iter().enumerate() {
        let raw = u.matrix().determinant().arg();
        let mut p = raw;
        if k > 0 {
            let tau = std::f64::consts::TAU;
            p = raw + tau * ((last - raw) / tau).round();
        }
        last = p;
        phases.push(p / n);
    }
    let m = samples.len() as f64;
    let mean_r = samples.iter().map(|(r, _)| r).sum::<f64>() / m;
    let mean_p = phases.iter().sum::<f64>() / m;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for ((r, _), p) in samples.iter().zip(&phases) {
        sxy += (r - mean_r) * (p - mean_p);
        sxx += (r - mean_r) * (r - mean_r);
    }
    if sxx == 0.0 {
        return Err(Error::Malformed("sample parameters are all equal".into()));
    }
    Ok(sxy / sxx)
}

// ---------------------------------------------------------------------------
// SU(2)

#[derive(Debug, Clone)]
pub struct Su2Fixture {
    pub hbar: f64,
    /// `S_a = ħσ_a/2`.
    pub generators: [HermitianOperator; 3],
    /// Largest `‖[S_a,S_b] − iħS_c‖_F` over cyclic `(a,b,c)`.
    pub commutator_residual: f64,
    pub spectra: [Vec<f64>; 3],
    /// Largest `‖U(θ)U(θ′) − U(θ+θ′)‖_F` over the axes and a sample grid.
    pub group_law_residual: f64,
    /// Nelson operator `Σ S_a²`.
    pub nelson: HermitianOperator,
    pub nelson_eigenvalues: Vec<f64>,
}

pub fn su2_fixture(hbar: f64) -> Result<Su2Fixture> {
    let [sx, sy, sz] = pauli();
    let s = [sx, sy, sz].map(|p| HermitianOperator::from_trusted(p * c(hbar / 2.0)));
    let i = C64::new(0.0, 1.0);
    let mut commutator_residual = 0.0_f64;
    for a in 0..3 {
        let (b, cc) = ((a + 1) % 3, (a + 2) % 3);
        let comm = crate::linalg::commutator(s[a].matrix(), s[b].matrix());
        commutator_residual = commutator_residual.max((comm - s[cc].matrix() * (i * hbar)).norm());
    }
    let spectra = [0, 1, 2].map(|a| eig_hermitian(&s[a]).map(|e| e.eigenvalues));
    let [s0, s1, s2] = spectra;
    let spectra = [s0?, s1?, s2?];
    let grid = [0.3, 1.1, 2.9];
    let mut group_law_residual = 0.0_f64;
    for op in &s {
        let prop = Propagator::new(op, hbar)?;
        for &t in &grid {
            for &u in &grid {
                let lhs = prop.at(t).matrix() * prop.at(u).matrix();
                group_law_residual = group_law_residual.max((lhs - prop.at(t + u).matrix()).norm());
            }
        }
    }
    let nelson =
        HermitianOperator::from_trusted(s.iter().map(|op| op.matrix() * op.matrix()).sum());
    let nelson_eigenvalues = eig_hermitian(&nelson)?.eigenvalues;
    Ok(Su2Fixture {
        hbar,
        generators: s,
        commutator_residual,
        spectra,
        group_law_residual,
        nelson,
        nelson_eigenvalues,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diag_real, pauli_ops};
    use crate::random;

    #[test]
    fn sigma_z_evolution_is_diagonal() {
        let [_, _, sz] = pauli_ops();
        let t = 0.8;
        let u = evolve_unitary(&sz, t).unwrap();
        let mut expected = CMatrix::zeros(2, 2);
        expected[(0, 0)] = C64::from_polar(1.0, -t);
        expected[(1, 1)] = C64::from_polar(1.0, t);
        assert!((u.matrix() - expected).norm() < 1e-15);
        assert!((evolve_unitary(&sz, 0.0).unwrap().matrix() - identity(2)).norm() < 1e-15);
    }

    #[test]
    fn hbar_rescales_time() {
        let [sx, _, _] = pauli_ops();
        let a = Propagator::new(&sx, 2.0).unwrap().at(1.0);
        let b = evolve_unitary(&sx, 0.5).unwrap();
        assert!((a.matrix() - b.matrix()).norm() < 1e-15);
    }

    #[test]
    fn generator_recovery_from_stencil() {
        let [sx, _, _] = pauli_ops();
        let samples = sample_group(&sx, &DEFAULT_STENCIL).unwrap();
        let h = generator_from_group(&samples, DEFAULT_RECON_TOL).unwrap();
        assert!((h.matrix() - sx.matrix()).norm() < 1e-6);
    }

    #[test]
    fn one_sided_samples_also_work() {
        let mut rng = random::rng(5);
        let h = random::hermitian(&mut rng, 3);
        let samples = sample_group(&h, &[5e-4, 1e-3]).unwrap();
        let g = generator_from_group(&samples, 1e-5).unwrap();
        assert!((g.matrix() - h.matrix()).norm() < 1e-5);
    }

    #[test]
    fn identity_samples_give_zero_generator() {
        let samples: Vec<_> = DEFAULT_STENCIL
            .iter()
            .map(|&t| (t, UnitaryOperator::identity(3)))
            .collect();
        let h = generator_from_group(&samples, DEFAULT_RECON_TOL).unwrap();
        assert!(h.matrix().norm() < 1e-15);
    }

    #[test]
    fn corrupted_group_is_rejected() {
        let [sx, _, sz] = pauli_ops();
        let mut samples = sample_group(&sx, &DEFAULT_STENCIL).unwrap();
        samples[0].1 = evolve_unitary(&sz, 1e-3).unwrap();
        assert!(matches!(
            generator_from_group(&samples, DEFAULT_RECON_TOL),
            Err(Error::InconsistentGroup { .. })
        ));
    }

    #[test]
    fn spin_precession() {
        let [sx, sy, sz] = pauli_ops();
        let half = heisenberg_observable(&sx, &sz, std::f64::consts::FRAC_PI_2).unwrap();
        assert!((half.matrix() + sx.matrix()).norm() < 1e-14);
        let quarter = heisenberg_observable(&sx, &sz, std::f64::consts::FRAC_PI_4).unwrap();
        assert!((quarter.matrix() + sy.matrix()).norm() < 1e-14);
        let same = heisenberg_observable(&sz, &sz, 1.3).unwrap();
        assert!((same.matrix() - sz.matrix()).norm() < 1e-14);
        let zero = heisenberg_observable(&sx, &sz, 0.0).unwrap();
        assert!((zero.matrix() - sx.matrix()).norm() < 1e-15);
    }

    #[test]
    fn noether_examples() {
        let [sx, _, sz] = pauli_ops();
        let yes = noether_check(&sz, &sz, &DEFAULT_GRID, &DEFAULT_GRID, 1e-9).unwrap();
        assert!(yes.all());
        let no = noether_check(&sx, &sz, &DEFAULT_GRID, &DEFAULT_GRID, 1e-9).unwrap();
        assert!(!no.constant_of_motion && !no.dynamical_symmetry && !no.h_invariance);
        let mut rng = random::rng(2);
        let h = random::hermitian(&mut rng, 5);
        let a = HermitianOperator::from_trusted(h.matrix() * h.matrix());
        assert!(noether_check(&a, &h, &DEFAULT_GRID, &DEFAULT_GRID, 1e-10)
            .unwrap()
            .all());
    }

    #[test]
    fn group_commutation_examples() {
        let [sx, _, sz] = pauli_ops();
        let a = HermitianOperator::diagonal(&[1.0, 2.0, 3.0]);
        let b = HermitianOperator::diagonal(&[0.5, -1.0, 4.0]);
        assert!(commuting_via_groups(&a, &b, &DEFAULT_GRID, 1e-9).unwrap());
        assert!(!commuting_via_groups(&sx, &sz, &DEFAULT_GRID, 1e-9).unwrap());
    }

    #[test]
    fn time_reversal_on_pauli() {
        let k = SymmetryOperator::time_reversal(2);
        let [sx, sy, sz] = pauli();
        assert!((k.conjugate(&sy).unwrap() + &sy).norm() == 0.0);
        assert!((k.conjugate(&sz).unwrap() - &sz).norm() == 0.0);
        assert!((k.conjugate(&sx).unwrap() - &sx).norm() == 0.0);
        assert!(k.compose(&k).unwrap() == SymmetryOperator::unitary(&UnitaryOperator::identity(2)));
    }

    #[test]
    fn composition_matches_action() {
        let mut rng = random::rng(8);
        let a =
            SymmetryOperator::new(random::unitary(&mut rng, 3).into_matrix(), true, 1e-10).unwrap();
        let b =
            SymmetryOperator::new(random::unitary(&mut rng, 3).into_matrix(), true, 1e-10).unwrap();
        let u = SymmetryOperator::unitary(&random::unitary(&mut rng, 3));
        let x = random::ginibre(&mut rng, 3, 1);
        for (p, q) in [(&a, &b), (&a, &u), (&u, &a)] {
            let composed = p.compose(q).unwrap().apply(&x).unwrap();
            let stepwise = p.apply(&q.apply(&x).unwrap()).unwrap();
            assert!((composed - stepwise).norm() < 1e-13);
        }
        let back = a.inverse().apply(&a.apply(&x).unwrap()).unwrap();
        assert!((back - &x).norm() < 1e-13);
    }

    #[test]
    fn permutation_moves_basis_state() {
        let mut p = CMatrix::zeros(3, 3);
        p[(1, 0)] = ONE;
        p[(2, 1)] = ONE;
        p[(0, 2)] = ONE;
        let v = SymmetryOperator::new(p, false, 1e-12).unwrap();
        let rho = DensityState::diagonal(&[1.0, 0.0, 0.0]).unwrap();
        let out = wigner_apply(&v, &rho).unwrap();
        assert!((out.matrix() - diag_real(&[0.0, 1.0, 0.0])).norm() == 0.0);
    }

    #[test]
    fn time_reversal_reverses_evolution() {
        // real H is invariant under conjugation, so T U_t = U_{-t} T
        let h = HermitianOperator::from_real(2, &[1.0, 0.3, 0.3, -0.5]).unwrap();
        let k = SymmetryOperator::time_reversal(2);
        let ut = SymmetryOperator::unitary(&evolve_unitary(&h, 0.9).unwrap());
        let umt = SymmetryOperator::unitary(&evolve_unitary(&h, -0.9).unwrap());
        let lhs = k.compose(&ut).unwrap();
        let rhs = umt.compose(&k).unwrap();
        assert!((lhs.matrix() - rhs.matrix()).norm() < 1e-14);
        assert_eq!(lhs.is_antiunitary(), rhs.is_antiunitary());
    }

    #[test]
    fn positive_spectrum_has_no_unitary_reversal() {
        assert!(
            unitary_reversal_obstructed(&HermitianOperator::diagonal(&[0.0, 1.0, 2.0]), 1e-10)
                .unwrap()
        );
        assert!(!unitary_reversal_obstructed(&pauli_ops()[2], 1e-10).unwrap());
    }

    fn scalar_family(
        f: impl Fn(f64) -> f64,
        t1: f64,
        t2: f64,
        nodes: usize,
    ) -> Vec<(f64, HermitianOperator)> {
        let [_, _, sz] = pauli_ops();
        (0..nodes)
            .map(|k| {
                let tau = t1 + (t2 - t1) * k as f64 / (nodes - 1) as f64;
                (tau, sz.scale(f(tau)))
            })
            .collect()
    }

    #[test]
    fn dyson_commuting_family() {
        let samples = scalar_family(f64::cos, 0.0, 1.0, 1001);
        let r = dyson_evolve(&samples, 0.0, 1.0, 8).unwrap();
        let exact = evolve_unitary(&pauli_ops()[2], 1f64.sin()).unwrap();
        assert!((r.unitary.matrix() - exact.matrix()).norm() < 1e-6);
        assert!((&r.series - exact.matrix()).norm() < 1e-6);
        assert!(r.unitarity_defect < 1e-13);
    }

    #[test]
    fn dyson_constant_hamiltonian() {
        let mut rng = random::rng(4);
        let h = random::hermitian(&mut rng, 3).scale(0.3);
        let samples: Vec<_> = (0..201).map(|k| (k as f64 / 200.0, h.clone())).collect();
        let r = dyson_evolve(&samples, 0.0, 1.0, 10).unwrap();
        let exact = evolve_unitary(&h, 1.0).unwrap();
        assert!((r.unitary.matrix() - exact.matrix()).norm() < 1e-12);
        assert!((&r.series - exact.matrix()).norm() <= r.truncation_bound + 1e-4);
    }

    #[test]
    fn dyson_rejects_bad_input() {
        let samples = scalar_family(f64::cos, 0.0, 1.0, 5);
        assert!(matches!(
            dyson_evolve(&samples, 0.0, 1.0, 13),
            Err(Error::OrderTooLarge(13))
        ));
        assert!(matches!(
            dyson_evolve(&samples, 0.0, 1.0, 8),
            Err(Error::QuadratureTooCoarse(_))
        ));
        assert!(matches!(
            dyson_evolve(&samples, 0.0, 2.0, 2),
            Err(Error::QuadratureTooCoarse(_))
        ));
    }

    fn z2_table() -> Vec<Vec<usize>> {
        vec![vec![0, 1], vec![1, 0]]
    }

    #[test]
    fn cocycles() {
        let names = vec!["e".to_string(), "a".to_string()];
        let trivial = MultiplierTable::trivial(names.clone());
        assert_eq!(
            cocycle_check(&trivial, &z2_table(), 1e-12)
                .unwrap()
                .max_defect,
            0.0
        );

        // U_a = iσ_x squares to −I
        let [sx, _, _] = pauli();
        let ops = [
            UnitaryOperator::identity(2),
            UnitaryOperator::new(sx * C64::new(0.0, 1.0), 1e-12).unwrap(),
        ];
        let table = multipliers_from_operators(names.clone(), &ops, &z2_table(), 1e-12).unwrap();
        assert!((table.omega[1][1] + ONE).norm() < 1e-15);
        let report = cocycle_check(&table, &z2_table(), 1e-12).unwrap();
        assert!(report.normalization_defect < 1e-15);

        let mut bad = table.clone();
        bad.omega[0][1] = C64::from_polar(1.0, 0.3);
        assert!(matches!(
            cocycle_check(&bad, &z2_table(), 1e-12),
            Err(Error::NotACocycle { .. })
        ));
    }

    #[test]
    fn non_projective_family_is_rejected() {
        let [sx, _, _] = pauli();
        let ops = [
            UnitaryOperator::identity(2),
            UnitaryOperator::new(sx, 1e-12).unwrap(),
        ];
        let names = vec!["e".to_string(), "a".to_string()];
        // a·a = a is not the Z₂ law, and σ_x σ_x σ_x* = σ_x is not a phase
        let wrong = vec![vec![0, 1], vec![1, 1]];
        assert!(matches!(
            multipliers_from_operators(names, &ops, &wrong, 1e-12),
            Err(Error::NotProjective { .. })
        ));
    }

    #[test]
    fn phase_rate_is_recovered() {
        let mut rng = random::rng(9);
        let h = random::hermitian(&mut rng, 3);
        let trace_h = crate::linalg::trace(h.matrix()).re / 3.0;
        let c0 = 0.4;
        let samples: Vec<_> = (0..20)
            .map(|k| {
                let r = 0.05 * k as f64;
                let u = evolve_unitary(&h, r).unwrap().into_matrix() * C64::from_polar(1.0, c0 * r);
                (r, UnitaryOperator::new(u, 1e-10).unwrap())
            })
            .collect();
        let rate = fit_phase_rate(&samples).unwrap();
        assert!((rate - (c0 - trace_h)).abs() < 1e-10);
    }

    #[test]
    fn su2_values() {
        for hbar in [1.0, 0.5] {
            let f = su2_fixture(hbar).unwrap();
            assert!(f.commutator_residual <= 1e-12);
            for s in &f.spectra {
                assert!((s[0] + hbar / 2.0).abs() < 1e-14 && (s[1] - hbar / 2.0).abs() < 1e-14);
            }
            assert!(f.group_law_residual < 1e-12);
            let expected = 0.75 * hbar * hbar;
            assert!(f
                .nelson_eigenvalues
                .iter()
                .all(|l| (l - expected).abs() < 1e-14));
        }
    }
}
