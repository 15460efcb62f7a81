// Copyright 2026 The oplattice Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex matrices, validated observables and the Hermitian eigensolver.
//!
//! Everything downstream works with [`CMatrix`] (an `nalgebra` dense matrix of
//! `Complex64`). The wrappers [`HermitianOperator`] and [`UnitaryOperator`]
//! carry a validation certificate: once constructed, their invariants hold to
//! the tolerance they were checked against.
//!
//! Tolerances are relative and Frobenius-scaled unless stated otherwise; the
//! crate-wide default is [`DEFAULT_TOL`].

use std::cmp::Ordering;

use nalgebra::{ComplexField, DMatrix, DVector, Dyn, SymmetricEigen, SVD};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{check_dim, Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Default relative tolerance used by every check that does not take one explicitly.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Relative singular-value threshold for rank decisions.
pub const SVD_TOL: f64 = 1e-9;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn zeros(n: usize) -> CMatrix {
    CMatrix::zeros(n, n)
}

/// Build a square matrix from real row-major data.
pub fn real_matrix(n: usize, data: &[f64]) -> CMatrix {
    assert_eq!(data.len(), n * n);
    CMatrix::from_fn(n, n, |i, j| c(data[i * n + j]))
}

pub fn diag_real(values: &[f64]) -> CMatrix {
    let n = values.len();
    CMatrix::from_fn(n, n, |i, j| if i == j { c(values[i]) } else { ZERO })
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.norm()
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

/// `tr(A B)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> C64 {
    let n = a.nrows();
    let mut acc = ZERO;
    for i in 0..n {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Rank-one projector `|v⟩⟨v|` for a unit vector `v`.
pub fn outer(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

pub fn basis_vector(n: usize, k: usize) -> CVector {
    CVector::from_fn(n, |i, _| if i == k { ONE } else { ZERO })
}

pub fn check_finite(m: &CMatrix) -> Result<()> {
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let z = m[(i, j)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    Ok(())
}

pub fn check_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

/// `‖A − A*‖_F`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    (m - m.adjoint()).norm()
}

/// `max(‖U*U − I‖_F, ‖UU* − I‖_F)`.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let n = u.nrows();
    let id = identity(n);
    let a = (u.adjoint() * u - &id).norm();
    let b = (u * u.adjoint() - &id).norm();
    a.max(b)
}

/// Multiply `v` by the phase that makes its first non-negligible entry real positive.
pub fn fix_phase(v: &mut CVector) {
    let scale = v.norm();
    if scale == 0.0 {
        return;
    }
    if let Some(z) = v.iter().find(|z| z.norm() > 1e-9 * scale).copied() {
        let phase = z.conj() / z.norm();
        v.iter_mut().for_each(|x| *x *= phase);
    }
}

/// Column-major vectorization of a square matrix, used to treat linear maps on
/// matrices as ordinary matrices.
pub fn vectorize(m: &CMatrix) -> CVector {
    CVector::from_column_slice(m.as_slice())
}

pub fn unvectorize(v: &CVector, n: usize) -> CMatrix {
    CMatrix::from_column_slice(n, n, v.as_slice())
}

/// Complex SVD with both factors, checked against the input.
///
/// nalgebra's bidiagonalisation occasionally returns factors that do not
/// reproduce structured rank-deficient inputs. When the reconstruction
/// misses, the columns are rotated by a fixed unitary and the rotation is
/// folded back into `V*`.
pub fn checked_svd(m: &CMatrix) -> SVD<C64, Dyn, Dyn> {
    checked_svd_with(m, |seed, n| {
        crate::random::unitary(&mut crate::random::rng(seed), n).into_matrix()
    })
}

/// Real counterpart of [`checked_svd`], rotating by orthogonal matrices.
pub fn checked_svd_real(m: &DMatrix<f64>) -> SVD<f64, Dyn, Dyn> {
    checked_svd_with(m, |seed, n| {
        let mut rng = crate::random::rng(seed);
        let g = DMatrix::<f64>::from_fn(n, n, |_, _| rng.sample(StandardNormal));
        g.qr().q()
    })
}

fn checked_svd_with<T>(
    m: &DMatrix<T>,
    rotation: impl Fn(u64, usize) -> DMatrix<T>,
) -> SVD<T, Dyn, Dyn>
where
    T: ComplexField<RealField = f64>,
{
    let scale = m.norm().max(f64::MIN_POSITIVE);
    let limit = 1e-12 * scale * (1 + m.nrows().max(m.ncols())) as f64;
    let error = |svd: &SVD<T, Dyn, Dyn>| match svd.clone().recompose() {
        Ok(r) => (r - m).norm(),
        Err(_) => f64::INFINITY,
    };
    let first = m.clone().svd(true, true);
    let mut best_err = error(&first);
    let mut best = first;
    let mut seed = 0x5bd1_e995_u64;
    for _ in 0..6 {
        if best_err <= limit {
            break;
        }
        seed = seed.wrapping_add(1);
        let q = rotation(seed, m.ncols());
        let mut svd = (m * &q).svd(true, true);
        svd.v_t = svd.v_t.map(|vt| vt * q.adjoint());
        let err = error(&svd);
        if err < best_err {
            best = svd;
            best_err = err;
        }
    }
    best
}

/// Orthonormal basis (as columns) of the column space of `m`, keeping singular
/// values above `threshold`.
pub fn column_space(m: &CMatrix, threshold: f64) -> CMatrix {
    if m.ncols() == 0 || m.nrows() == 0 {
        return CMatrix::zeros(m.nrows(), 0);
    }
    let svd = checked_svd(m);
    let u = svd.u.expect("u requested");
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > threshold)
        .collect();
    CMatrix::from_fn(m.nrows(), keep.len(), |i, j| u[(i, keep[j])])
}

/// Orthonormal basis (as columns) of the null space of `m`: right singular
/// vectors whose singular value is at most `threshold`.
pub fn null_space(m: &CMatrix, threshold: f64) -> CMatrix {
    let cols = m.ncols();
    if cols == 0 {
        return CMatrix::zeros(0, 0);
    }
    // Thin SVD only yields min(rows, cols) right vectors; zero rows leave the
    // singular vectors unchanged and make V square.
    let padded = if m.nrows() < cols {
        let mut p = CMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = checked_svd(&padded);
    let v_t = svd.v_t.expect("v requested");
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= threshold)
        .collect();
    CMatrix::from_fn(cols, keep.len(), |i, j| v_t[(keep[j], i)].conj())
}

/// A validated self-adjoint operator. The stored matrix is the symmetrized
/// form `(A + A*)/2` of the input.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: CMatrix,
}

impl HermitianOperator {
    pub fn new(m: CMatrix, tol: f64) -> Result<Self> {
        validate_hermitian(m, tol)
    }

    /// Symmetrize without checking. Callers guarantee hermiticity by construction.
    pub(crate) fn from_trusted(m: CMatrix) -> Self {
        let sym = (&m + m.adjoint()) * c(0.5);
        Self { matrix: sym }
    }

    pub fn from_real(n: usize, data: &[f64]) -> Result<Self> {
        Self::new(real_matrix(n, data), DEFAULT_TOL)
    }

    pub fn diagonal(values: &[f64]) -> Self {
        Self::from_trusted(diag_real(values))
    }

    pub fn zero(n: usize) -> Self {
        Self::from_trusted(zeros(n))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_trusted(identity(n))
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

    pub fn scale(&self, s: f64) -> Self {
        Self::from_trusted(&self.matrix * c(s))
    }

    /// Hermitian linear combination `Σ w_k A_k` with real weights.
    pub fn combination(terms: &[(f64, &HermitianOperator)]) -> Result<Self> {
        let n = terms.first().map(|(_, a)| a.dim()).unwrap_or(0);
        let mut acc = zeros(n);
        for (w, a) in terms {
            check_dim(n, a.dim())?;
            acc += a.matrix() * c(*w);
        }
        Ok(Self::from_trusted(acc))
    }
}

/// Check `‖M − M*‖_F ≤ tol · max(1, ‖M‖_F)` and return the symmetrized operator.
pub fn validate_hermitian(m: CMatrix, tol: f64) -> Result<HermitianOperator> {
    check_square(&m)?;
    check_finite(&m)?;
    let defect = hermiticity_defect(&m);
    if defect > tol * frobenius(&m).max(1.0) {
        return Err(Error::NotHermitian { defect });
    }
    Ok(HermitianOperator::from_trusted(m))
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOperator {
    matrix: CMatrix,
}

impl UnitaryOperator {
    pub fn new(m: CMatrix, tol: f64) -> Result<Self> {
        check_square(&m)?;
        check_finite(&m)?;
        let defect = unitarity_defect(&m);
        if defect > tol {
            return Err(Error::NotUnitary { defect });
        }
        Ok(Self { matrix: m })
    }

    pub(crate) fn from_trusted(m: CMatrix) -> Self {
        Self { matrix: m }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_trusted(identity(n))
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

    pub fn adjoint(&self) -> Self {
        Self::from_trusted(self.matrix.adjoint())
    }

    pub fn compose(&self, other: &UnitaryOperator) -> Self {
        Self::from_trusted(&self.matrix * &other.matrix)
    }

    pub fn defect(&self) -> f64 {
        unitarity_defect(&self.matrix)
    }
}

/// Eigenvalues in ascending order with orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, k: usize) -> CVector {
        self.eigenvectors.column(k).into_owned()
    }

    /// `V diag(λ) V*`.
    pub fn reconstruct(&self) -> CMatrix {
        self.map(c)
    }

    /// `V diag(f(λ)) V*`.
    pub fn map(&self, f: impl Fn(f64) -> C64) -> CMatrix {
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let fk = f(lambda);
            scaled.column_mut(k).iter_mut().for_each(|z| *z *= fk);
        }
        scaled * v.adjoint()
    }

    /// `‖A V − V diag(λ)‖_F`.
    pub fn residual(&self, a: &CMatrix) -> f64 {
        let av = a * &self.eigenvectors;
        let mut vl = self.eigenvectors.clone();
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            vl.column_mut(k).iter_mut().for_each(|z| *z *= lambda);
        }
        (av - vl).norm()
    }

    /// `‖V*V − I‖_F`.
    pub fn orthonormality_defect(&self) -> f64 {
        let n = self.eigenvectors.ncols();
        (self.eigenvectors.adjoint() * &self.eigenvectors - identity(n)).norm()
    }
}

/// Hermitian eigendecomposition with ascending eigenvalues. Each eigenvector
/// has its first non-negligible component made real positive; exactly tied
/// eigenvalues are ordered by the lexicographic order of their vectors.
pub fn eig_hermitian(a: &HermitianOperator) -> Result<EigenSystem> {
    let n = a.dim();
    let max_iter = 100 * n + 1000;
    let eig = SymmetricEigen::try_new(a.matrix().clone(), f64::EPSILON, max_iter)
        .ok_or(Error::ConvergenceFailure)?;
    let mut pairs: Vec<(f64, CVector)> = (0..n)
        .map(|k| {
            let mut v = eig.eigenvectors.column(k).into_owned();
            fix_phase(&mut v);
            (eig.eigenvalues[k], v)
        })
        .collect();
    if pairs.iter().any(|(l, _)| !l.is_finite()) {
        return Err(Error::ConvergenceFailure);
    }
    pairs.sort_by(|(la, va), (lb, vb)| {
        la.partial_cmp(lb)
            .unwrap_or(Ordering::Equal)
            .then_with(|| lex_cmp(va, vb))
    });
    let eigenvalues = pairs.iter().map(|(l, _)| *l).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |i, j| pairs[j].1[i]);
    Ok(EigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

fn lex_cmp(a: &CVector, b: &CVector) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        let o =
            x.re.partial_cmp(&y.re)
                .unwrap_or(Ordering::Equal)
                .then(x.im.partial_cmp(&y.im).unwrap_or(Ordering::Equal));
        if o != Ordering::Equal {
            return o;
        }
    }
    Ordering::Equal
}

/// Largest singular value.
pub fn operator_norm(a: &CMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    checked_svd(a)
        .singular_values
        .iter()
        .fold(0.0_f64, |m, &s| m.max(s))
}

/// Pauli matrices `σ_x, σ_y, σ_z`.
pub fn pauli() -> [CMatrix; 3] {
    let sx = CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
    let sy = CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]);
    let sz = CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]);
    [sx, sy, sz]
}

pub fn pauli_ops() -> [HermitianOperator; 3] {
    pauli().map(HermitianOperator::from_trusted)
}
