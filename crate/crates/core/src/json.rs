// Copyright 2026 The oplattice Authors
// SPDX-License-Identifier: Apache-2.0

//! JSON interchange formats. Complex numbers are `[re, im]` pairs and
//! matrices are row-major; finite doubles round-trip bit-exactly.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::algebras::MatrixStarAlgebra;
use crate::error::{Error, Result};
use crate::gns::{AbstractStarAlgebra, AlgebraicState};
use crate::lattice::Projector;
use crate::linalg::{check_finite, CMatrix, CVector, HermitianOperator, C64};
use crate::spectral::{Atom, ProjectorValuedMeasure};
use crate::states::{Assignment, DensityState};

pub type Complex = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Complex>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectorJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Complex>,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomJson {
    pub label: Vec<f64>,
    pub projector: MatrixJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PvmJson {
    pub dim: usize,
    pub atoms: Vec<AtomJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub dim: usize,
    pub basis: Vec<MatrixJson>,
}

/// `mult[i·m + j][k]` is the coefficient of `b_k` in `b_i b_j`;
/// `invol[i][k]` the coefficient of `b_k` in `b_i*`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbstractAlgebraJson {
    pub n_basis: usize,
    pub mult: Vec<Vec<Complex>>,
    pub invol: Vec<Vec<Complex>>,
    pub unit: Vec<Complex>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateJson {
    pub values: Vec<Complex>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssignmentJson {
    pub projector: MatrixJson,
    pub p: f64,
}

/// One sample of a time-dependent Hamiltonian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSampleJson {
    pub t: f64,
    pub h: MatrixJson,
}

pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
}

pub fn to_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize infallibly")
}

pub fn complex(z: C64) -> Complex {
    [z.re, z.im]
}

fn from_complex(z: &Complex) -> C64 {
    C64::new(z[0], z[1])
}

pub fn vector_to_json(v: &CVector) -> Vec<Complex> {
    v.iter().copied().map(complex).collect()
}

pub fn vector_from_json(v: &[Complex]) -> Result<CVector> {
    if v.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Malformed("non-finite vector entry".into()));
    }
    Ok(CVector::from_iterator(v.len(), v.iter().map(from_complex)))
}

impl From<&CMatrix> for MatrixJson {
    fn from(m: &CMatrix) -> Self {
        let mut data = Vec::with_capacity(m.len());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                data.push(complex(m[(i, j)]));
            }
        }
        Self {
            rows: m.nrows(),
            cols: m.ncols(),
            data,
        }
    }
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<CMatrix> {
        let expected = self
            .rows
            .checked_mul(self.cols)
            .ok_or_else(|| Error::Malformed("matrix shape overflows".into()))?;
        if self.data.len() != expected {
            return Err(Error::Malformed(format!(
                "{}×{} matrix needs {expected} entries, found {}",
                self.rows,
                self.cols,
                self.data.len()
            )));
        }
        let m = CMatrix::from_fn(self.rows, self.cols, |i, j| {
            from_complex(&self.data[i * self.cols + j])
        });
        check_finite(&m)?;
        Ok(m)
    }

    pub fn to_hermitian(&self, tol: f64) -> Result<HermitianOperator> {
        HermitianOperator::new(self.to_matrix()?, tol)
    }

    pub fn to_density(&self, tol: f64) -> Result<DensityState> {
        DensityState::new(self.to_matrix()?, tol)
    }

    pub fn to_projector(&self, tol: f64) -> Result<Projector> {
        Projector::new(self.to_matrix()?, tol)
    }
}

impl From<&Projector> for ProjectorJson {
    fn from(p: &Projector) -> Self {
        let m = MatrixJson::from(p.matrix());
        Self {
            rows: m.rows,
            cols: m.cols,
            data: m.data,
            rank: p.rank(),
        }
    }
}

impl ProjectorJson {
    pub fn matrix(&self) -> MatrixJson {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            data: self.data.clone(),
        }
    }

    /// Parse and check that the stated rank matches the trace.
    pub fn to_projector(&self, tol: f64) -> Result<Projector> {
        let p = self.matrix().to_projector(tol)?;
        if p.rank() != self.rank {
            return Err(Error::Malformed(format!(
                "stated rank {} but trace gives {}",
                self.rank,
                p.rank()
            )));
        }
        Ok(p)
    }
}

impl From<&ProjectorValuedMeasure> for PvmJson {
    fn from(pvm: &ProjectorValuedMeasure) -> Self {
        Self {
            dim: pvm.dim(),
            atoms: pvm
                .atoms()
                .iter()
                .map(|a| AtomJson {
                    label: a.label.clone(),
                    projector: MatrixJson::from(a.projector.matrix()),
                })
                .collect(),
        }
    }
}

impl PvmJson {
    pub fn to_pvm(&self, tol: f64) -> Result<ProjectorValuedMeasure> {
        let atoms = self
            .atoms
            .iter()
            .map(|a| {
                Ok(Atom {
                    label: a.label.clone(),
                    projector: a.projector.to_projector(tol)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        ProjectorValuedMeasure::new(self.dim, atoms, tol)
    }
}

impl From<&MatrixStarAlgebra> for AlgebraJson {
    fn from(alg: &MatrixStarAlgebra) -> Self {
        Self {
            dim: alg.dim(),
            basis: alg.basis().iter().map(MatrixJson::from).collect(),
        }
    }
}

impl AlgebraJson {
    pub fn to_algebra(&self) -> Result<MatrixStarAlgebra> {
        let basis = self
            .basis
            .iter()
            .map(MatrixJson::to_matrix)
            .collect::<Result<Vec<_>>>()?;
        MatrixStarAlgebra::from_matrices(self.dim, &basis)
    }
}

impl From<&AbstractStarAlgebra> for AbstractAlgebraJson {
    fn from(alg: &AbstractStarAlgebra) -> Self {
        let m = alg.n_basis();
        let mut mult = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                mult.push((0..m).map(|k| complex(alg.mult(i, j, k))).collect());
            }
        }
        let invol = (0..m)
            .map(|i| (0..m).map(|k| complex(alg.invol()[(i, k)])).collect())
            .collect();
        Self {
            n_basis: m,
            mult,
            invol,
            unit: vector_to_json(alg.unit()),
        }
    }
}

impl AbstractAlgebraJson {
    pub fn to_algebra(&self, tol: f64) -> Result<AbstractStarAlgebra> {
        let m = self.n_basis;
        let square = |rows: &[Vec<Complex>], n_rows: usize, what: &str| -> Result<()> {
            if rows.len() != n_rows || rows.iter().any(|r| r.len() != m) {
                return Err(Error::Malformed(format!(
                    "{what} must have {n_rows} rows of {m} entries"
                )));
            }
            Ok(())
        };
        square(&self.mult, m * m, "mult")?;
        square(&self.invol, m, "invol")?;
        let values = self
            .mult
            .iter()
            .chain(&self.invol)
            .flatten()
            .chain(&self.unit);
        if values.flatten().any(|x| !x.is_finite()) {
            return Err(Error::Malformed("non-finite structure constant".into()));
        }
        let mult = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| self.mult[i * m + j].iter().map(from_complex).collect())
                    .collect()
            })
            .collect();
        let invol = CMatrix::from_fn(m, m, |i, k| from_complex(&self.invol[i][k]));
        AbstractStarAlgebra::new(mult, invol, vector_from_json(&self.unit)?, tol)
    }
}

impl From<&AlgebraicState> for StateJson {
    fn from(s: &AlgebraicState) -> Self {
        Self {
            values: vector_to_json(s.values()),
        }
    }
}

impl StateJson {
    pub fn to_state(&self, alg: &AbstractStarAlgebra, tol: f64) -> Result<AlgebraicState> {
        AlgebraicState::new(alg, vector_from_json(&self.values)?, tol)
    }
}

impl From<&Assignment> for AssignmentJson {
    fn from(a: &Assignment) -> Self {
        Self {
            projector: MatrixJson::from(a.projector.matrix()),
            p: a.probability,
        }
    }
}

impl AssignmentJson {
    pub fn to_assignment(&self, tol: f64) -> Result<Assignment> {
        if !self.p.is_finite() {
            return Err(Error::Malformed("non-finite probability".into()));
        }
        Ok(Assignment {
            projector: self.projector.to_projector(tol)?,
            probability: self.p,
        })
    }
}

impl TimeSampleJson {
    pub fn to_sample(&self, tol: f64) -> Result<(f64, HermitianOperator)> {
        if !self.t.is_finite() {
            return Err(Error::Malformed("non-finite sample time".into()));
        }
        Ok((self.t, self.h.to_hermitian(tol)?))
    }
}
