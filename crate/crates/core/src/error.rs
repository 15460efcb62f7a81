// Copyright 2026 The oplattice Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad class of a failure, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// The input violates a precondition (shape, hermiticity, dimension, ...).
    Validation,
    /// A numerical check exceeded its tolerance or an iteration did not converge.
    Numerical,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("malformed matrix data: {0}")]
    Malformed(String),
    #[error("matrix is not Hermitian: defect {defect:.3e}")]
    NotHermitian { defect: f64 },
    #[error("matrix is not unitary: defect {defect:.3e}")]
    NotUnitary { defect: f64 },
    #[error("matrix is not an orthogonal projector: defect {defect:.3e}")]
    NotProjector { defect: f64 },
    #[error("matrix is not a density operator: {0}")]
    NotDensity(String),
    #[error("vector is not normalized: norm {norm}")]
    NotNormalized { norm: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("bad dimension {dim}: {reason}")]
    BadDimension { dim: usize, reason: &'static str },
    #[error("eigensolver did not converge")]
    ConvergenceFailure,
    #[error("numerical tolerance exceeded in {what}: {value:.3e} > {tol:.3e}")]
    Tolerance {
        what: &'static str,
        value: f64,
        tol: f64,
    },

    #[error("function has no sample at label {0:?}")]
    MissingSample(Vec<f64>),
    #[error("spectral measures of operators {i} and {j} do not commute: defect {defect:.3e}")]
    NonCommuting { i: usize, j: usize, defect: f64 },
    #[error("not a projector-valued measure: {0}")]
    NotPvm(String),

    #[error(
        "alternating product did not converge after {iterations} steps (residual {residual:.3e})"
    )]
    MaxIterExceeded { iterations: usize, residual: f64 },
    #[error("projectors are not ordered: defect {defect:.3e}")]
    NotComparable { defect: f64 },

    #[error("outcome has probability {probability:.3e}, at or below the floor")]
    ZeroProbability { probability: f64 },
    #[error("projector frame has rank {rank}, {needed} needed")]
    UnderdeterminedFrame { rank: usize, needed: usize },
    #[error("probability assignments are inconsistent: residual {residual:.3e}")]
    InconsistentAssignments { residual: f64 },
    #[error("no witness found (best probability {best_probability})")]
    WitnessNotFound { best_probability: f64 },

    #[error("not a *-algebra: {0}")]
    NotAnAlgebra(String),
    #[error("charge {index} is not central: defect {defect:.3e}")]
    NonCentralCharge { index: usize, defect: f64 },
    #[error("charges {i} and {j} do not commute")]
    NonCommutingCharges { i: usize, j: usize },

    #[error("samples are not a one-parameter group: defect {defect:.3e}")]
    InconsistentGroup { defect: f64 },
    #[error("recovered generator is not Hermitian: defect {defect:.3e}")]
    NotHermitianResult { defect: f64 },
    #[error("Noether conditions disagree: {0}")]
    EquivalenceViolation(String),
    #[error("Hamiltonian samples too coarse: {0}")]
    QuadratureTooCoarse(String),
    #[error("series order {0} exceeds the maximum of 12")]
    OrderTooLarge(usize),
    #[error("multipliers violate the cocycle identity at ({g1}, {g2}, {g3}): defect {defect:.3e}")]
    NotACocycle {
        g1: usize,
        g2: usize,
        g3: usize,
        defect: f64,
    },
    #[error("operator family is not projective: defect {defect:.3e}")]
    NotProjective { defect: f64 },

    #[error("state has weight {weight:.3e} on the top truncation levels")]
    TailTooLarge { weight: f64 },

    #[error("functional is not a state: {0}")]
    NotAState(String),
    #[error("structure constants do not define an associative *-algebra: {0}")]
    DegenerateAlgebra(String),
    #[error("input state is pure")]
    InputIsPure,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            ConvergenceFailure
            | Tolerance { .. }
            | MaxIterExceeded { .. }
            | EquivalenceViolation(_)
            | InconsistentAssignments { .. }
            | WitnessNotFound { .. } => ErrorClass::Numerical,
            _ => ErrorClass::Validation,
        }
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
