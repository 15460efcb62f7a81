// Copyright 2026 The oplattice Authors
// SPDX-License-Identifier: Apache-2.0

//! The lattice of orthogonal projectors: orthocomplement, meet, join, the
//! alternating-product meet, compatibility and orthomodularity.
//!
//! Meets and joins are computed exactly from range bases. The alternating
//! product `(PQP)^n` is kept as an independent route to the meet.

use crate::error::{check_dim, Error, Result};
use crate::linalg::{
    c, check_finite, check_square, column_space, eig_hermitian, identity, null_space, trace, zeros,
    CMatrix, CVector, HermitianOperator, SVD_TOL,
};

/// An orthogonal projector `P = P² = P*` with its rank.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    matrix: CMatrix,
    rank: usize,
}

impl Projector {
    /// Validate `m` as an orthogonal projector. Defects are measured in
    /// Frobenius norm relative to `max(1, ‖m‖_F)`.
    pub fn new(m: CMatrix, tol: f64) -> Result<Self> {
        check_square(&m)?;
        check_finite(&m)?;
        let scale = m.norm().max(1.0);
        let herm = (&m - m.adjoint()).norm();
        let idem = (&m * &m - &m).norm();
        let defect = herm.max(idem);
        if defect > tol * scale {
            return Err(Error::NotProjector { defect });
        }
        let tr = trace(&m).re;
        let rank = tr.round();
        if (tr - rank).abs() > tol * scale {
            return Err(Error::NotProjector {
                defect: (tr - rank).abs(),
            });
        }
        let matrix = (&m + m.adjoint()) * c(0.5);
        Ok(Self {
            matrix,
            rank: rank as usize,
        })
    }

    /// `V V*` for a matrix `V` with orthonormal columns.
    pub fn from_orthonormal_columns(v: &CMatrix) -> Self {
        let m = v * v.adjoint();
        let matrix = (&m + m.adjoint()) * c(0.5);
        Self {
            matrix,
            rank: v.ncols(),
        }
    }

    /// Projector onto the ray of a nonzero vector.
    pub fn onto_vector(v: &CVector) -> Self {
        let u = v / c(v.norm());
        Self::from_orthonormal_columns(&CMatrix::from_column_slice(u.len(), 1, u.as_slice()))
    }

    /// Projector onto the span of the columns of `m` (orthonormalized).
    pub fn onto_span(m: &CMatrix) -> Self {
        let scale = m.norm().max(1.0);
        Self::from_orthonormal_columns(&column_space(m, SVD_TOL * scale))
    }

    /// Nearest projector to an approximately idempotent Hermitian matrix:
    /// eigenvectors with eigenvalue above 1/2 span the range.
    pub fn round(m: &CMatrix) -> Result<Self> {
        let h = HermitianOperator::from_trusted(m.clone());
        let eig = eig_hermitian(&h)?;
        let keep: Vec<usize> = (0..eig.dim())
            .filter(|&k| eig.eigenvalues[k] > 0.5)
            .collect();
        let v = CMatrix::from_fn(m.nrows(), keep.len(), |i, j| eig.eigenvectors[(i, keep[j])]);
        Ok(Self::from_orthonormal_columns(&v))
    }

    pub fn zero(n: usize) -> Self {
        Self {
            matrix: zeros(n),
            rank: 0,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: identity(n),
            rank: n,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn rank(&self) -> usize {
        self.rank
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

    /// Orthonormal basis of the range (eigenvalues above 1/2).
    pub fn range_basis(&self) -> CMatrix {
        self.eigen_split(true)
    }

    /// Orthonormal basis of the kernel (eigenvalues below 1/2).
    pub fn kernel_basis(&self) -> CMatrix {
        self.eigen_split(false)
    }

    fn eigen_split(&self, range: bool) -> CMatrix {
        let n = self.dim();
        if self.rank == 0 {
            return if range {
                CMatrix::zeros(n, 0)
            } else {
                identity(n)
            };
        }
        if self.rank == n {
            return if range {
                identity(n)
            } else {
                CMatrix::zeros(n, 0)
            };
        }
        let eig = eig_hermitian(&self.as_observable()).expect("projector spectrum is {0, 1}");
        let keep: Vec<usize> = (0..n)
            .filter(|&k| (eig.eigenvalues[k] > 0.5) == range)
            .collect();
        CMatrix::from_fn(n, keep.len(), |i, j| eig.eigenvectors[(i, keep[j])])
    }

    /// `L` (dim × rank) with `P ≈ L L*`, by diagonally pivoted Cholesky
    /// stopped after `rank` steps. `L*L = I` exactly when `P` is a projector.
    pub fn factor(&self) -> CMatrix {
        let p = &self.matrix;
        let n = self.dim();
        let mut l = CMatrix::zeros(n, self.rank);
        let mut d: Vec<f64> = (0..n).map(|i| p[(i, i)].re).collect();
        for k in 0..self.rank {
            let j = (0..n)
                .max_by(|&a, &b| d[a].total_cmp(&d[b]))
                .expect("rank > 0 implies dim > 0");
            let pivot = d[j].max(f64::MIN_POSITIVE).sqrt();
            for i in 0..n {
                let mut v = p[(i, j)];
                for m in 0..k {
                    v -= l[(i, m)] * l[(j, m)].conj();
                }
                l[(i, k)] = v / pivot;
            }
            for (i, di) in d.iter_mut().enumerate() {
                *di -= l[(i, k)].norm_sqr();
            }
        }
        l
    }

    /// Distance `‖P − Q‖_F`.
    pub fn distance(&self, other: &Projector) -> f64 {
        (&self.matrix - &other.matrix).norm()
    }
}

/// Orthocomplement `¬P = I − P`.
pub fn neg(p: &Projector) -> Projector {
    let n = p.dim();
    Projector {
        matrix: identity(n) - &p.matrix,
        rank: n - p.rank,
    }
}

/// `P ≤ Q`, i.e. `QP = P` within `tol`.
pub fn leq(p: &Projector, q: &Projector, tol: f64) -> Result<bool> {
    check_dim(p.dim(), q.dim())?;
    Ok(order_defect(p, q) <= tol)
}

fn order_defect(p: &Projector, q: &Projector) -> f64 {
    (q.matrix() * p.matrix() - p.matrix()).norm()
}

/// Projector onto `range(P) ∩ range(Q)`: the orthogonal complement of the span
/// of both kernels.
pub fn meet(p: &Projector, q: &Projector) -> Result<Projector> {
    check_dim(p.dim(), q.dim())?;
    let n = p.dim();
    let kp = p.kernel_basis();
    let kq = q.kernel_basis();
    let stacked = hstack(&kp, &kq, n);
    let span = column_space(&stacked, SVD_TOL * stacked.norm().max(1.0));
    // span has orthonormal columns, so the singular values of span* are 0 or 1
    let complement = null_space(&span.adjoint(), 0.5);
    Ok(Projector::from_orthonormal_columns(&complement))
}

/// Projector onto `range(P) + range(Q)`.
pub fn join(p: &Projector, q: &Projector) -> Result<Projector> {
    check_dim(p.dim(), q.dim())?;
    let n = p.dim();
    let stacked = hstack(&p.range_basis(), &q.range_basis(), n);
    let span = column_space(&stacked, SVD_TOL * stacked.norm().max(1.0));
    Ok(Projector::from_orthonormal_columns(&span))
}

fn hstack(a: &CMatrix, b: &CMatrix, n: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, a.ncols() + b.ncols());
    m.view_mut((0, 0), (n, a.ncols())).copy_from(a);
    m.view_mut((0, a.ncols()), (n, b.ncols())).copy_from(b);
    m
}

/// How the alternating product is advanced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JauchMode {
    /// `M_{k+1} = M_k · PQP`, so `M_k = (PQP)^k`. Every power is visited.
    Linear,
    /// `M_{k+1} = M_k²`, so `M_k = (PQP)^{2^k}`.
    Squaring,
}

#[derive(Debug, Clone)]
pub struct JauchMeet {
    /// Final iterate; a projector onto the intersection up to the stopping tolerance.
    pub matrix: CMatrix,
    pub iterations: usize,
    /// `‖M_{k+1} − M_k‖_F` at the last step.
    pub residual: f64,
    /// Frobenius norm of each iterate, starting with `M_1 = PQP`.
    pub norms: Vec<f64>,
}

/// Von Neumann alternating-product meet: iterate powers of `PQP` until two
/// successive iterates differ by at most `tol` in Frobenius norm.
pub fn jauch_meet(
    p: &Projector,
    q: &Projector,
    tol: f64,
    max_iter: usize,
    mode: JauchMode,
) -> Result<JauchMeet> {
    check_dim(p.dim(), q.dim())?;
    let pqp = p.matrix() * q.matrix() * p.matrix();
    let mut current = pqp.clone();
    let mut norms = vec![current.norm()];
    let mut residual = f64::INFINITY;
    for iteration in 1..=max_iter {
        let next = match mode {
            JauchMode::Linear => &current * &pqp,
            JauchMode::Squaring => &current * &current,
        };
        let step = (&next - &current).norm();
        if !step.is_finite() {
            // rounding above 1 is amplified by repeated squaring
            break;
        }
        residual = step;
        if residual <= tol {
            return Ok(JauchMeet {
                matrix: next,
                iterations: iteration,
                residual,
                norms,
            });
        }
        current = next;
        norms.push(current.norm());
    }
    Err(Error::MaxIterExceeded {
        iterations: max_iter,
        residual,
    })
}

/// Certificate for a compatible pair: `P = P₁ + P₃`, `Q = P₂ + P₃` with
/// `P₁ = P(I − Q)`, `P₂ = Q(I − P)`, `P₃ = PQ` pairwise orthogonal.
#[derive(Debug, Clone)]
pub struct CompatibleDecomposition {
    pub p1: Projector,
    pub p2: Projector,
    pub p3: Projector,
}

#[derive(Debug, Clone)]
pub struct Commutation {
    pub commutes: bool,
    /// `‖PQ − QP‖_F`.
    pub defect: f64,
    pub decomposition: Option<CompatibleDecomposition>,
}

pub fn commutes(p: &Projector, q: &Projector, tol: f64) -> Result<Commutation> {
    check_dim(p.dim(), q.dim())?;
    let pm = p.matrix();
    let qm = q.matrix();
    let defect = (pm * qm - qm * pm).norm();
    if defect > tol {
        return Ok(Commutation {
            commutes: false,
            defect,
            decomposition: None,
        });
    }
    let n = p.dim();
    let id = identity(n);
    let p3 = Projector::round(&(pm * qm))?;
    let p1 = Projector::round(&(pm * (&id - qm)))?;
    let p2 = Projector::round(&(qm * (&id - pm)))?;
    let cert_tol = tol.max(1e-12) * 10.0;
    let pairs = [(&p1, &p2), (&p1, &p3), (&p2, &p3)];
    for (a, b) in pairs {
        let overlap = (a.matrix() * b.matrix()).norm();
        if overlap > cert_tol {
            return Err(Error::Tolerance {
                what: "compatible decomposition orthogonality",
                value: overlap,
                tol: cert_tol,
            });
        }
    }
    let recon = (p1.matrix() + p3.matrix() - pm)
        .norm()
        .max((p2.matrix() + p3.matrix() - qm).norm());
    if recon > cert_tol {
        return Err(Error::Tolerance {
            what: "compatible decomposition reconstruction",
            value: recon,
            tol: cert_tol,
        });
    }
    Ok(Commutation {
        commutes: true,
        defect,
        decomposition: Some(CompatibleDecomposition { p1, p2, p3 }),
    })
}

/// For `P ≤ Q`, check `Q = P ∨ (¬P ∧ Q)`.
pub fn orthomodular_check(p: &Projector, q: &Projector, tol: f64) -> Result<bool> {
    check_dim(p.dim(), q.dim())?;
    let defect = order_defect(p, q);
    if defect > tol {
        return Err(Error::NotComparable { defect });
    }
    let rhs = join(p, &meet(&neg(p), q)?)?;
    Ok(rhs.distance(q) <= tol)
}

/// A projector is an atom of the lattice iff it has rank one.
pub fn is_atom(p: &Projector) -> bool {
    p.rank() == 1
}

/// Projectors onto `span(e₁)`, `span(e₂)` and `span(e₁ + e₂)` in C².
pub fn c2_triple() -> [Projector; 3] {
    let e1 = CVector::from_vec(vec![c(1.0), c(0.0)]);
    let e2 = CVector::from_vec(vec![c(0.0), c(1.0)]);
    let e12 = CVector::from_vec(vec![c(1.0), c(1.0)]);
    [
        Projector::onto_vector(&e1),
        Projector::onto_vector(&e2),
        Projector::onto_vector(&e12),
    ]
}
