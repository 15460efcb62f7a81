// Copyright 2026 The oplattice Authors
// SPDX-License-Identifier: Apache-2.0

//! Truncated position and momentum in the oscillator basis.
//!
//! `[X, P] = iħI` has no finite-dimensional solution: the trace of a
//! commutator vanishes. Corner truncation of the ladder matrices puts the
//! whole defect in the last basis vector, which makes it exactly computable.

use crate::algebras::commutant;
use crate::error::{Error, Result};
use crate::linalg::{
    c, commutator, identity, operator_norm, trace, CMatrix, HermitianOperator, C64,
};
use crate::states::{std_deviation, DensityState, PureStateVector};

/// Largest probability allowed on the top two truncation levels.
pub const TAIL_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct TruncatedCanonicalPair {
    pub n: usize,
    pub m: f64,
    pub omega: f64,
    pub hbar: f64,
    /// Truncated annihilation operator `a = Σ √k |k−1⟩⟨k|`.
    pub a: CMatrix,
    pub x: HermitianOperator,
    pub p: HermitianOperator,
}

/// `X = √(ħ/2mω)(a + a†)`, `P = i√(mωħ/2)(a† − a)` on `C^n`.
pub fn build_truncated_pair(
    n: usize,
    m: f64,
    omega: f64,
    hbar: f64,
) -> Result<TruncatedCanonicalPair> {
    if n < 2 {
        return Err(Error::BadDimension {
            dim: n,
            reason: "truncation needs at least two levels",
        });
    }
    for (name, v) in [("m", m), ("omega", omega), ("hbar", hbar)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::Malformed(format!(
                "{name} must be positive, got {v}"
            )));
        }
    }
    let mut a = CMatrix::zeros(n, n);
    for k in 1..n {
        a[(k - 1, k)] = c((k as f64).sqrt());
    }
    let ad = a.adjoint();
    let x = (&a + &ad) * c((hbar / (2.0 * m * omega)).sqrt());
    let p = (&ad - &a) * C64::new(0.0, (m * omega * hbar / 2.0).sqrt());
    Ok(TruncatedCanonicalPair {
        n,
        m,
        omega,
        hbar,
        a,
        x: HermitianOperator::from_trusted(x),
        p: HermitianOperator::from_trusted(p),
    })
}

impl TruncatedCanonicalPair {
    /// `[X, P]`.
    pub fn commutator(&self) -> CMatrix {
        commutator(self.x.matrix(), self.p.matrix())
    }

    /// `[X, P] − iħI`, which equals `−iħN|e_{N−1}⟩⟨e_{N−1}|`.
    pub fn ccr_defect(&self) -> CMatrix {
        self.commutator() - identity(self.n) * C64::new(0.0, self.hbar)
    }

    /// `a†a`.
    pub fn number_operator(&self) -> HermitianOperator {
        HermitianOperator::from_trusted(self.a.adjoint() * &self.a)
    }

    /// `P²/2m + mω²X²/2`.
    pub fn hamiltonian(&self) -> HermitianOperator {
        let x = self.x.matrix();
        let p = self.p.matrix();
        let h = p * p * c(0.5 / self.m) + x * x * c(0.5 * self.m * self.omega * self.omega);
        HermitianOperator::from_trusted(h)
    }

    /// `H₀ − ħω(a†a + ½)`: zero except on the top two levels.
    pub fn truncation_correction(&self) -> CMatrix {
        let number = self.number_operator();
        let ideal = (number.matrix() + identity(self.n) * c(0.5)) * c(self.hbar * self.omega);
        self.hamiltonian().matrix() - ideal
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UncertaintyReport {
    pub dx: f64,
    pub dp: f64,
    pub product: f64,
    /// `ħ/2`.
    pub bound: f64,
    /// Probability on the top two truncation levels.
    pub tail_weight: f64,
}

/// `ΔX·ΔP` in a pure state, gated on negligible weight near the truncation
/// edge.
pub fn heisenberg_uncertainty(
    pair: &TruncatedCanonicalPair,
    psi: &PureStateVector,
) -> Result<UncertaintyReport> {
    crate::error::check_dim(pair.n, psi.dim())?;
    let amp = psi.amplitudes();
    let tail_weight = amp
        .iter()
        .skip(pair.n.saturating_sub(2))
        .map(|z| z.norm_sqr())
        .sum::<f64>();
    if tail_weight > TAIL_TOL {
        return Err(Error::TailTooLarge {
            weight: tail_weight,
        });
    }
    let rho = DensityState::pure(psi);
    let dx = std_deviation(&rho, &pair.x)?;
    let dp = std_deviation(&rho, &pair.p)?;
    Ok(UncertaintyReport {
        dx,
        dp,
        product: dx * dp,
        bound: pair.hbar / 2.0,
        tail_weight,
    })
}

/// Diagnostic for the hypotheses of the Stone–von Neumann theorem on a
/// finite-dimensional candidate `(Q_h, M_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SvnReport {
    pub pairs: usize,
    pub dim: usize,
    pub hbar: f64,
    /// Largest `‖[Q_h, M_k] − iħδ_{hk}I‖_F`.
    pub ccr_residual: f64,
    /// Same, in operator norm.
    pub ccr_residual_operator: f64,
    /// Largest `‖[Q_h, Q_k]‖_F`.
    pub qq_residual: f64,
    /// Largest `‖[M_h, M_k]‖_F`.
    pub mm_residual: f64,
    /// Largest `|tr [Q_h, M_k]|`, zero up to rounding in finite dimension.
    pub commutator_trace: f64,
    /// `ħ√n`: no finite-dimensional pair can do better in Frobenius norm.
    pub frobenius_floor: f64,
    /// `ħ`: the same floor in operator norm.
    pub operator_floor: f64,
    /// Dimension of the commutant of `{Q_h, M_k}`, `None` for empty input.
    pub commutant_dim: Option<usize>,
    pub irreducible: Option<bool>,
    /// `‖S − S*‖_F` for `S = ΣQ² + ΣM²`. Self-adjointness is automatic for
    /// bounded operators; only Hermiticity is checked.
    pub casimir_hermiticity_defect: f64,
    pub tol: f64,
}

impl SvnReport {
    /// Exact CCR are impossible in finite dimension since the commutator is
    /// traceless while `iħI` is not.
    pub fn exact_ccr_possible(&self) -> bool {
        self.pairs == 0 || self.dim == 0
    }
}

pub fn svn_hypotheses_check(
    q: &[HermitianOperator],
    m: &[HermitianOperator],
    hbar: f64,
    tol: f64,
) -> Result<SvnReport> {
    if q.len() != m.len() {
        return Err(Error::Malformed(format!(
            "{} positions but {} momenta",
            q.len(),
            m.len()
        )));
    }
    let dim = q.first().map_or(0, |x| x.dim());
    for op in q.iter().chain(m) {
        crate::error::check_dim(dim, op.dim())?;
    }
    let mut report = SvnReport {
        pairs: q.len(),
        dim,
        hbar,
        ccr_residual: 0.0,
        ccr_residual_operator: 0.0,
        qq_residual: 0.0,
        mm_residual: 0.0,
        commutator_trace: 0.0,
        frobenius_floor: hbar * (dim as f64).sqrt(),
        operator_floor: if dim == 0 { 0.0 } else { hbar },
        commutant_dim: None,
        irreducible: None,
        casimir_hermiticity_defect: 0.0,
        tol,
    };
    if q.is_empty() {
        report.frobenius_floor = 0.0;
        report.operator_floor = 0.0;
        return Ok(report);
    }
    let ih = identity(dim) * C64::new(0.0, hbar);
    let mut casimir = CMatrix::zeros(dim, dim);
    for (h, qh) in q.iter().enumerate() {
        for (k, mk) in m.iter().enumerate() {
            let comm = commutator(qh.matrix(), mk.matrix());
            report.commutator_trace = report.commutator_trace.max(trace(&comm).norm());
            let defect = if h == k { comm - &ih } else { comm };
            report.ccr_residual = report.ccr_residual.max(defect.norm());
            report.ccr_residual_operator = report.ccr_residual_operator.max(operator_norm(&defect));
        }
        for k in h + 1..q.len() {
            report.qq_residual = report
                .qq_residual
                .max(commutator(qh.matrix(), q[k].matrix()).norm());
            report.mm_residual = report
                .mm_residual
                .max(commutator(m[h].matrix(), m[k].matrix()).norm());
        }
        casimir += qh.matrix() * qh.matrix() + m[h].matrix() * m[h].matrix();
    }
    report.casimir_hermiticity_defect = (&casimir - casimir.adjoint()).norm();
    let generators: Vec<CMatrix> = q.iter().chain(m).map(|x| x.matrix().clone()).collect();
    let comm_dim = commutant(&generators, dim)?.dimension();
    report.commutant_dim = Some(comm_dim);
    report.irreducible = Some(comm_dim == 1);
    Ok(report)
}
