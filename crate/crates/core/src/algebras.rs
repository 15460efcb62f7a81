// Copyright 2026 The oplattice Authors
// SPDX-License-Identifier: Apache-2.0

//! Unital *-subalgebras of `M_n`: commutants, double commutants, centers,
//! factors, and the block decomposition induced by central charges.
//!
//! A *-closed subspace has a basis of Hermitian matrices, and Hermitian
//! matrices form a real vector space isometric to `R^{n²}`. Algebras are
//! therefore stored as orthonormal real coordinate matrices, and every
//! commutation constraint `[H, X] = 0` becomes a real linear map whose null
//! space is extracted by SVD.

use nalgebra::{DMatrix, DVector};

use crate::error::{check_dim, Error, Result};
use crate::lattice::Projector;
use crate::linalg::{
    c, check_square, checked_svd_real, eig_hermitian, identity, CMatrix, HermitianOperator, C64, I,
    SVD_TOL,
};
use crate::spectral::{joint_pvm, spectral_decompose, DEFAULT_CLUSTER_TOL};
use crate::states::DensityState;

/// Membership residual bound, relative to `‖X‖_F`.
pub const MEMBERSHIP_TOL: f64 = 1e-8;

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Isometric real coordinates of a Hermitian matrix: the diagonal, then
/// `√2·Re` and `√2·Im` of the strict upper triangle.
pub fn hermitian_coords(a: &CMatrix) -> DVector<f64> {
    let n = a.nrows();
    let mut x = DVector::zeros(n * n);
    for j in 0..n {
        x[j] = a[(j, j)].re;
    }
    let mut idx = n;
    for j in 0..n {
        for k in j + 1..n {
            // average the two triangles so the map is the orthogonal
            // projection onto Hermitian matrices
            let z = (a[(j, k)] + a[(k, j)].conj()) * 0.5;
            x[idx] = SQRT2 * z.re;
            x[idx + 1] = SQRT2 * z.im;
            idx += 2;
        }
    }
    x
}

pub fn from_hermitian_coords(x: &[f64], n: usize) -> CMatrix {
    let mut a = CMatrix::zeros(n, n);
    for j in 0..n {
        a[(j, j)] = c(x[j]);
    }
    let mut idx = n;
    for j in 0..n {
        for k in j + 1..n {
            let z = C64::new(x[idx], x[idx + 1]) / SQRT2;
            a[(j, k)] = z;
            a[(k, j)] = z.conj();
            idx += 2;
        }
    }
    a
}

/// `(X + X*)/2` and `(X − X*)/(2i)`.
fn hermitian_parts(x: &CMatrix) -> (CMatrix, CMatrix) {
    let xa = x.adjoint();
    let re = (x + &xa) * c(0.5);
    let im = (x - &xa) * C64::new(0.0, -0.5);
    (re, im)
}

/// Orthonormal real basis of `span_R` of the given coordinate columns.
fn orthonormal_columns(cols: &DMatrix<f64>) -> DMatrix<f64> {
    if cols.ncols() == 0 {
        return cols.clone();
    }
    let svd = checked_svd_real(cols);
    let u = svd.u.expect("u requested");
    let smax = svd.singular_values.max();
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > SVD_TOL * smax.max(f64::MIN_POSITIVE))
        .collect();
    DMatrix::from_fn(cols.nrows(), keep.len(), |i, j| u[(i, keep[j])])
}

/// Coordinates of the complex span of `mats`, as a *-closed subspace: the
/// Hermitian parts of every matrix, normalized, then orthonormalized.
fn star_span_coords(n: usize, mats: &[CMatrix]) -> DMatrix<f64> {
    let mut cols: Vec<DVector<f64>> = Vec::with_capacity(2 * mats.len());
    for m in mats {
        // a part at rounding level relative to `m` is noise, not a direction
        let floor = SVD_TOL * m.norm();
        let (re, im) = hermitian_parts(m);
        for h in [re, im] {
            let x = hermitian_coords(&h);
            let norm = x.norm();
            if norm > floor && norm > 0.0 {
                cols.push(x / norm);
            }
        }
    }
    if cols.is_empty() {
        return DMatrix::zeros(n * n, 0);
    }
    orthonormal_columns(&DMatrix::from_columns(&cols))
}

/// A unital *-subalgebra of `M_dim`, stored through an orthonormal basis of
/// Hermitian matrices.
#[derive(Debug, Clone)]
pub struct MatrixStarAlgebra {
    dim: usize,
    coords: DMatrix<f64>,
    basis: Vec<CMatrix>,
}

impl MatrixStarAlgebra {
    fn from_coords(dim: usize, coords: DMatrix<f64>) -> Self {
        let basis = coords
            .column_iter()
            .map(|col| from_hermitian_coords(col.as_slice(), dim))
            .collect();
        Self { dim, coords, basis }
    }

    /// Span the given matrices (and their adjoints) and check that the span
    /// is a unital algebra.
    pub fn from_matrices(dim: usize, mats: &[CMatrix]) -> Result<Self> {
        for m in mats {
            check_dim(dim, check_square(m)?)?;
        }
        let alg = Self::from_coords(dim, star_span_coords(dim, mats));
        alg.verify()?;
        Ok(alg)
    }

    /// `M_n`.
    pub fn full(n: usize) -> Self {
        Self::from_coords(n, DMatrix::identity(n * n, n * n))
    }

    /// `C·I`.
    pub fn scalars(n: usize) -> Self {
        let x = hermitian_coords(&identity(n)) / (n as f64).sqrt();
        Self::from_coords(n, DMatrix::from_columns(&[x]))
    }

    /// Diagonal matrices.
    pub fn diagonal(n: usize) -> Self {
        let mut coords = DMatrix::zeros(n * n, n);
        for j in 0..n {
            coords[(j, j)] = 1.0;
        }
        Self::from_coords(n, coords)
    }

    /// `M_{k₁} ⊕ M_{k₂} ⊕ …` on the block-diagonal of `C^{Σk}`.
    pub fn block_diagonal(sizes: &[usize]) -> Self {
        let n: usize = sizes.iter().sum();
        let mut units = Vec::new();
        let mut offset = 0;
        for &k in sizes {
            for i in 0..k {
                for j in 0..k {
                    let mut e = CMatrix::zeros(n, n);
                    e[(offset + i, offset + j)] = c(1.0);
                    units.push(e);
                }
            }
            offset += k;
        }
        Self::from_coords(n, star_span_coords(n, &units))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the algebra as a complex vector space.
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Orthonormal Hermitian basis.
    pub fn basis(&self) -> &[CMatrix] {
        &self.basis
    }

    pub fn coords(&self) -> &DMatrix<f64> {
        &self.coords
    }

    /// `‖X − Π(X)‖_F` where `Π` is the orthogonal projection onto the algebra.
    pub fn membership_residual(&self, x: &CMatrix) -> f64 {
        let (re, im) = hermitian_parts(x);
        [re, im]
            .iter()
            .map(|h| {
                let v = hermitian_coords(h);
                let proj = &self.coords * (self.coords.transpose() * &v);
                (v - proj).norm_squared()
            })
            .sum::<f64>()
            .sqrt()
    }

    pub fn contains(&self, x: &CMatrix) -> bool {
        self.membership_residual(x) <= MEMBERSHIP_TOL * x.norm().max(f64::MIN_POSITIVE)
    }

    /// Check unit, *-closure (automatic for a Hermitian basis) and closure
    /// under products.
    pub fn verify(&self) -> Result<()> {
        let id = identity(self.dim);
        if !self.contains(&id) {
            return Err(Error::NotAnAlgebra(format!(
                "identity residual {:.3e}",
                self.membership_residual(&id)
            )));
        }
        for (i, a) in self.basis.iter().enumerate() {
            for b in &self.basis[i..] {
                // for Hermitian a, b: ba = (ab)*, so one product per pair suffices
                let ab = a * b;
                // near-orthogonal factors give a tiny product: judge by ‖a‖‖b‖
                let residual = self.membership_residual(&ab);
                if residual > MEMBERSHIP_TOL * ab.norm().max(a.norm() * b.norm()) {
                    return Err(Error::NotAnAlgebra(format!(
                        "product residual {residual:.3e}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Largest principal angle between the two algebras as subspaces, or
    /// `None` if their dimensions differ. Computed from the sine, which stays
    /// accurate for small angles.
    pub fn max_principal_angle(&self, other: &MatrixStarAlgebra) -> Option<f64> {
        if self.dim != other.dim || self.dimension() != other.dimension() {
            return None;
        }
        if self.dimension() == 0 {
            return Some(0.0);
        }
        let a = &self.coords;
        let b = &other.coords;
        let residual = b - a * (a.transpose() * b);
        let sine = checked_svd_real(&residual)
            .singular_values
            .iter()
            .fold(0.0_f64, |m, &s| m.max(s));
        Some(sine.min(1.0).asin())
    }
}

/// Largest singular value of `X ↦ i[H, X]`: the spectral spread of `H`.
/// Multiples of the identity (up to rounding) report zero.
fn spread(h: &CMatrix) -> Result<f64> {
    let eig = eig_hermitian(&HermitianOperator::from_trusted(h.clone()))?;
    let s = eig.eigenvalues[eig.dim() - 1] - eig.eigenvalues[0];
    Ok(if s <= SVD_TOL * h.norm() { 0.0 } else { s })
}

/// Restrict the subspace spanned by the columns of `b` to matrices commuting
/// with every Hermitian constraint. Each step solves the null space of the
/// constraint map restricted to the current subspace, so the result is the
/// joint null space of the stacked maps.
fn restrict_commuting(
    n: usize,
    mut b: DMatrix<f64>,
    constraints: &[CMatrix],
    threshold: f64,
) -> DMatrix<f64> {
    for h in constraints {
        if b.ncols() == 0 {
            break;
        }
        let images: Vec<DVector<f64>> = b
            .column_iter()
            .map(|col| {
                let x = from_hermitian_coords(col.as_slice(), n);
                let comm = (h * &x - &x * h) * I;
                hermitian_coords(&comm)
            })
            .collect();
        let m = DMatrix::from_columns(&images);
        let svd = checked_svd_real(&m);
        let v_t = svd.v_t.expect("v requested");
        let keep: Vec<usize> = (0..svd.singular_values.len())
            .filter(|&i| svd.singular_values[i] <= threshold)
            .collect();
        let null = DMatrix::from_fn(b.ncols(), keep.len(), |i, j| v_t[(keep[j], i)]);
        b = &b * null;
    }
    b
}

/// Hermitian matrices commuting with `h`, spanned block by block in the
/// eigenbasis of `h`.
fn spectral_commutant_coords(h: &CMatrix) -> Result<DMatrix<f64>> {
    let pvm = spectral_decompose(
        &HermitianOperator::from_trusted(h.clone()),
        DEFAULT_CLUSTER_TOL,
    )?;
    let mut cols = Vec::new();
    for atom in pvm.atoms() {
        let v = atom.projector.range_basis();
        let k = v.ncols();
        let mut push = |y: CMatrix| cols.push(hermitian_coords(&(&v * y * v.adjoint())));
        for i in 0..k {
            let mut e = CMatrix::zeros(k, k);
            e[(i, i)] = c(1.0);
            push(e);
            for j in i + 1..k {
                let mut s = CMatrix::zeros(k, k);
                s[(i, j)] = c(1.0 / SQRT2);
                s[(j, i)] = c(1.0 / SQRT2);
                push(s);
                let mut a = CMatrix::zeros(k, k);
                a[(i, j)] = C64::new(0.0, -1.0 / SQRT2);
                a[(j, i)] = C64::new(0.0, 1.0 / SQRT2);
                push(a);
            }
        }
    }
    Ok(DMatrix::from_columns(&cols))
}

/// Hermitian generators spanning the same *-algebra as `generators`, dropping
/// zero parts.
fn hermitian_generators(dim: usize, generators: &[CMatrix]) -> Result<Vec<CMatrix>> {
    let mut out = Vec::new();
    for g in generators {
        check_dim(dim, check_square(g)?)?;
        let (re, im) = hermitian_parts(g);
        for h in [re, im] {
            if h.norm() > 1e-300 {
                out.push(h);
            }
        }
    }
    Ok(out)
}

/// Weights for a generic combination of generators.
fn generic_weight(k: usize) -> f64 {
    1.0 + ((k as f64 + 1.0) * 0.618_033_988_749_894_8).fract()
}

/// `{X : XG = GX for every generator G and its adjoint}`.
pub fn commutant(generators: &[CMatrix], dim: usize) -> Result<MatrixStarAlgebra> {
    let mut hs = Vec::new();
    let mut scale = 0.0_f64;
    for h in hermitian_generators(dim, generators)? {
        let s = spread(&h)?;
        if s > 0.0 {
            scale = scale.max(s);
            hs.push(h);
        }
    }
    if hs.is_empty() || scale == 0.0 {
        return Ok(MatrixStarAlgebra::full(dim));
    }
    // seed with the commutant of a generic combination (a superset of the
    // answer), which keeps the subsequent SVDs small
    let mut seed = CMatrix::zeros(dim, dim);
    for (k, h) in hs.iter().enumerate() {
        seed += h * c(generic_weight(k));
    }
    let start = spectral_commutant_coords(&seed)?;
    let coords = restrict_commuting(dim, start, &hs, SVD_TOL * scale);
    let alg = MatrixStarAlgebra::from_coords(dim, coords);
    alg.verify().map_err(|e| match e {
        Error::NotAnAlgebra(msg) => Error::Tolerance {
            what: "commutant closure",
            value: parse_residual(&msg),
            tol: MEMBERSHIP_TOL,
        },
        other => other,
    })?;
    Ok(alg)
}

fn parse_residual(msg: &str) -> f64 {
    msg.rsplit(' ')
        .next()
        .and_then(|s| s.parse().ok())
        .unwrap_or(f64::NAN)
}

/// `(S')'`: the unital *-algebra generated by `generators`.
pub fn double_commutant(generators: &[CMatrix], dim: usize) -> Result<MatrixStarAlgebra> {
    let first = commutant(generators, dim)?;
    commutant(first.basis(), dim)
}

/// Span of all words in the generators and their adjoints, grown one letter
/// at a time until the dimension stops increasing (at most `dim²` letters).
/// An independent route to the generated algebra that uses only products.
pub fn word_closure(generators: &[CMatrix], dim: usize) -> Result<MatrixStarAlgebra> {
    let mut letters = Vec::with_capacity(2 * generators.len());
    for g in generators {
        check_dim(dim, check_square(g)?)?;
        letters.push(g.clone());
        letters.push(g.adjoint());
    }
    let mut span = star_span_coords(dim, &[identity(dim)]);
    for _ in 0..dim * dim {
        let current = MatrixStarAlgebra::from_coords(dim, span.clone());
        let mut words: Vec<CMatrix> = current.basis.clone();
        for g in &letters {
            for b in &current.basis {
                words.push(g * b);
            }
        }
        let next = star_span_coords(dim, &words);
        let grew = next.ncols() > span.ncols();
        span = next;
        if !grew {
            break;
        }
    }
    Ok(MatrixStarAlgebra::from_coords(dim, span))
}

/// `R ∩ R'`.
pub fn center(alg: &MatrixStarAlgebra) -> Result<MatrixStarAlgebra> {
    let n = alg.dim;
    let mut scale = 0.0_f64;
    let mut constraints = Vec::new();
    for b in &alg.basis {
        let s = spread(b)?;
        if s > 0.0 {
            scale = scale.max(s);
            constraints.push(b.clone());
        }
    }
    if scale == 0.0 {
        return Ok(alg.clone());
    }
    let mut generic = CMatrix::zeros(n, n);
    for (k, b) in constraints.iter().enumerate() {
        generic += b * c(generic_weight(k));
    }
    constraints.insert(0, generic);
    let coords = restrict_commuting(n, alg.coords.clone(), &constraints, SVD_TOL * scale);
    Ok(MatrixStarAlgebra::from_coords(n, coords))
}

/// Trivial center.
pub fn is_factor(alg: &MatrixStarAlgebra) -> Result<bool> {
    Ok(center(alg)?.dimension() == 1)
}

/// One coherent sector: a joint eigenspace of the charges.
#[derive(Debug, Clone)]
pub struct Sector {
    /// Joint charge eigenvalues.
    pub label: Vec<f64>,
    pub projector: Projector,
    /// Orthonormal basis of the sector (columns), used for compression.
    pub basis: CMatrix,
    /// Algebra generated by the compressed observables, acting on `C^k`.
    pub restricted: MatrixStarAlgebra,
    /// Dimension of the commutant of the compressed observables.
    pub commutant_dim: usize,
    /// Largest `‖V* Q V − q I‖_F` over the charges.
    pub charge_defect: f64,
}

impl Sector {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn irreducible(&self) -> bool {
        self.commutant_dim == 1
    }

    /// Whether the observables generate all of `B(H_q)`.
    pub fn is_full_matrix_algebra(&self) -> bool {
        self.restricted.dimension() == self.dim() * self.dim()
    }
}

#[derive(Debug, Clone)]
pub struct SectorDecomposition {
    pub dim: usize,
    pub sectors: Vec<Sector>,
}

impl SectorDecomposition {
    pub fn projectors(&self) -> Vec<&Projector> {
        self.sectors.iter().map(|s| &s.projector).collect()
    }

    pub fn labels(&self) -> Vec<Vec<f64>> {
        self.sectors.iter().map(|s| s.label.clone()).collect()
    }

    /// `‖Σ P_q − I‖_F` and the largest `‖P_q P_r‖_F`.
    pub fn residuals(&self) -> (f64, f64) {
        let mut sum = CMatrix::zeros(self.dim, self.dim);
        let mut overlap = 0.0_f64;
        for (i, s) in self.sectors.iter().enumerate() {
            sum += s.projector.matrix();
            for t in &self.sectors[i + 1..] {
                overlap = overlap.max((s.projector.matrix() * t.projector.matrix()).norm());
            }
        }
        ((sum - identity(self.dim)).norm(), overlap)
    }
}

/// Split `C^dim` into the joint eigenspaces of commuting central charges and
/// compress the observable algebra to each.
pub fn superselection_sectors(
    charges: &[HermitianOperator],
    observables: &[CMatrix],
    dim: usize,
    tol: f64,
) -> Result<SectorDecomposition> {
    for q in charges {
        check_dim(dim, q.dim())?;
    }
    for a in observables {
        check_dim(dim, check_square(a)?)?;
    }
    for (index, q) in charges.iter().enumerate() {
        for a in observables {
            let scale = (q.matrix().norm() * a.norm()).max(1.0);
            let defect = (q.matrix() * a - a * q.matrix()).norm();
            if defect > tol * scale {
                return Err(Error::NonCentralCharge { index, defect });
            }
        }
    }
    let joint = if charges.is_empty() {
        joint_pvm(
            &[HermitianOperator::identity(dim)],
            DEFAULT_CLUSTER_TOL,
            tol,
        )?
    } else {
        joint_pvm(charges, DEFAULT_CLUSTER_TOL, tol).map_err(|e| match e {
            Error::NonCommuting { i, j, .. } => Error::NonCommutingCharges { i, j },
            other => other,
        })?
    };
    let sectors = joint
        .atoms()
        .iter()
        .map(|atom| {
            let v = atom.projector.range_basis();
            let k = v.ncols();
            let compressed: Vec<CMatrix> =
                observables.iter().map(|a| v.adjoint() * a * &v).collect();
            let restricted = double_commutant(&compressed, k)?;
            let commutant_dim = commutant(&compressed, k)?.dimension();
            let charge_defect = charges
                .iter()
                .zip(&atom.label)
                .map(|(q, &label)| (v.adjoint() * q.matrix() * &v - identity(k) * c(label)).norm())
                .fold(0.0, f64::max);
            Ok(Sector {
                label: if charges.is_empty() {
                    Vec::new()
                } else {
                    atom.label.clone()
                },
                projector: atom.projector.clone(),
                basis: v,
                restricted,
                commutant_dim,
                charge_defect,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SectorDecomposition { dim, sectors })
}

/// `Σ_q P_q ρ P_q`: remove coherences between sectors.
pub fn decohere_across_sectors(
    rho: &DensityState,
    sd: &SectorDecomposition,
) -> Result<DensityState> {
    check_dim(sd.dim, rho.dim())?;
    let mut acc = CMatrix::zeros(sd.dim, sd.dim);
    for s in &sd.sectors {
        let p = s.projector.matrix();
        acc += p * rho.matrix() * p;
    }
    Ok(DensityState::from_trusted(acc))
}
