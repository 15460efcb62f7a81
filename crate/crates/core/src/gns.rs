// Copyright 2026 The oplattice Authors
// SPDX-License-Identifier: Apache-2.0

//! Abstract finite-dimensional *-algebras given by structure constants,
//! algebraic states on them, and the GNS construction.

use nalgebra::DMatrix;

use crate::algebras::commutant;
use crate::error::{check_dim, Error, Result};
use crate::linalg::{
    c, check_square, eig_hermitian, identity, trace_product, unitarity_defect, CMatrix, CVector,
    HermitianOperator, C64, ONE,
};
use crate::states::{is_pure, DensityState};

/// Gram eigenvalues at or below this fraction of the largest are null.
pub const GRAM_NULL_TOL: f64 = 1e-10;

/// Default tolerance for structure-constant identities.
pub const ALGEBRA_TOL: f64 = 1e-9;

/// `b_i b_j = Σ_k mult[i][j][k] b_k`, `b_i* = Σ_k invol[i][k] b_k` (the
/// involution is extended antilinearly), `𝟙 = Σ_k unit[k] b_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct AbstractStarAlgebra {
    n_basis: usize,
    mult: Vec<C64>,
    invol: CMatrix,
    unit: CVector,
}

impl AbstractStarAlgebra {
    /// Validate associativity, the unit and the involution axioms.
    pub fn new(mult: Vec<Vec<Vec<C64>>>, invol: CMatrix, unit: CVector, tol: f64) -> Result<Self> {
        let m = mult.len();
        if m == 0 {
            return Err(Error::DegenerateAlgebra("empty basis".into()));
        }
        if mult
            .iter()
            .any(|row| row.len() != m || row.iter().any(|v| v.len() != m))
        {
            return Err(Error::Malformed(format!(
                "structure constants must be {m}×{m}×{m}"
            )));
        }
        if invol.shape() != (m, m) || unit.len() != m {
            return Err(Error::Malformed(format!(
                "involution must be {m}×{m} and unit of length {m}"
            )));
        }
        let flat = mult.into_iter().flatten().flatten().collect();
        let alg = Self {
            n_basis: m,
            mult: flat,
            invol,
            unit,
        };
        alg.validate(tol)?;
        Ok(alg)
    }

    fn validate(&self, tol: f64) -> Result<()> {
        let m = self.n_basis;
        let scale = self.mult.iter().fold(1.0_f64, |s, z| s.max(z.norm()));
        let tol = tol * scale * scale;
        for i in 0..m {
            for j in 0..m {
                for l in 0..m {
                    let left = self.product(&self.product(&self.e(i), &self.e(j)), &self.e(l));
                    let right = self.product(&self.e(i), &self.product(&self.e(j), &self.e(l)));
                    let defect = (left - right).norm();
                    if defect > tol {
                        return Err(Error::DegenerateAlgebra(format!(
                            "associativity fails on ({i}, {j}, {l}) by {defect:.3e}"
                        )));
                    }
                }
            }
        }
        for j in 0..m {
            let b = self.e(j);
            let defect = (self.product(&self.unit, &b) - &b).norm()
                + (self.product(&b, &self.unit) - &b).norm();
            if defect > tol {
                return Err(Error::DegenerateAlgebra(format!(
                    "unit fails on b_{j} by {defect:.3e}"
                )));
            }
            let defect = (self.star(&self.star(&b)) - &b).norm();
            if defect > tol {
                return Err(Error::DegenerateAlgebra(format!(
                    "involution is not involutive on b_{j}"
                )));
            }
        }
        for i in 0..m {
            for j in 0..m {
                let (bi, bj) = (self.e(i), self.e(j));
                let left = self.star(&self.product(&bi, &bj));
                let right = self.product(&self.star(&bj), &self.star(&bi));
                let defect = (left - right).norm();
                if defect > tol {
                    return Err(Error::DegenerateAlgebra(format!(
                        "(b_{i} b_{j})* differs from b_{j}* b_{i}* by {defect:.3e}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Expand a concrete matrix basis by least squares.
    pub fn from_matrix_basis(basis: &[CMatrix], tol: f64) -> Result<Self> {
        let first = basis
            .first()
            .ok_or_else(|| Error::DegenerateAlgebra("empty basis".into()))?;
        let n = check_square(first)?;
        for b in basis {
            check_dim(n, check_square(b)?)?;
        }
        let m = basis.len();
        let stacked = CMatrix::from_fn(n * n, m, |r, k| basis[k][(r % n, r / n)]);
        let svd = crate::linalg::checked_svd(&stacked);
        let rank = svd.rank(crate::linalg::SVD_TOL * svd.singular_values.max());
        if rank < m {
            return Err(Error::DegenerateAlgebra(format!(
                "basis has rank {rank} but {m} elements"
            )));
        }
        let coords = |x: &CMatrix| -> Result<CVector> {
            let v = crate::linalg::vectorize(x);
            let sol = svd
                .solve(&v, 0.0)
                .map_err(|e| Error::Malformed(e.to_string()))?;
            let residual = (&stacked * &sol - &v).norm();
            if residual > tol * v.norm().max(1.0) {
                return Err(Error::NotAnAlgebra(format!(
                    "element outside the span by {residual:.3e}"
                )));
            }
            Ok(sol)
        };
        let mut mult = vec![vec![vec![C64::new(0.0, 0.0); m]; m]; m];
        for i in 0..m {
            for j in 0..m {
                let x = coords(&(&basis[i] * &basis[j]))?;
                mult[i][j] = x.iter().copied().collect();
            }
        }
        let mut invol = CMatrix::zeros(m, m);
        for (i, b) in basis.iter().enumerate() {
            let x = coords(&b.adjoint())?;
            invol.row_mut(i).copy_from(&x.transpose());
        }
        let unit = coords(&identity(n))?;
        Self::new(mult, invol, unit, tol)
    }

    /// `M_n` in the matrix-unit basis `E_ij`, indexed `i·n + j`.
    pub fn full_matrix(n: usize) -> Result<Self> {
        Self::from_matrix_basis(&matrix_units(n), ALGEBRA_TOL)
    }

    /// The one-dimensional algebra `C`.
    pub fn scalars() -> Self {
        Self {
            n_basis: 1,
            mult: vec![ONE],
            invol: CMatrix::from_element(1, 1, ONE),
            unit: CVector::from_element(1, ONE),
        }
    }

    pub fn n_basis(&self) -> usize {
        self.n_basis
    }

    pub fn mult(&self, i: usize, j: usize, k: usize) -> C64 {
        let m = self.n_basis;
        self.mult[(i * m + j) * m + k]
    }

    pub fn invol(&self) -> &CMatrix {
        &self.invol
    }

    pub fn unit(&self) -> &CVector {
        &self.unit
    }

    fn e(&self, i: usize) -> CVector {
        let mut v = CVector::zeros(self.n_basis);
        v[i] = ONE;
        v
    }

    /// Product in coordinates.
    pub fn product(&self, x: &CVector, y: &CVector) -> CVector {
        let m = self.n_basis;
        let mut out = CVector::zeros(m);
        for i in 0..m {
            if x[i] == C64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..m {
                let w = x[i] * y[j];
                if w == C64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..m {
                    out[k] += w * self.mult(i, j, k);
                }
            }
        }
        out
    }

    /// Involution in coordinates: `(Σ x_i b_i)* = Σ conj(x_i) b_i*`.
    pub fn star(&self, x: &CVector) -> CVector {
        self.invol.transpose() * x.map(|z| z.conj())
    }

    /// Matrix of left multiplication by `b_i`: column `j` holds `b_i b_j`.
    pub fn left_multiplication(&self, i: usize) -> CMatrix {
        let m = self.n_basis;
        CMatrix::from_fn(m, m, |k, j| self.mult(i, j, k))
    }
}

/// `E_ij` for `i, j < n`, ordered `i·n + j`.
pub fn matrix_units(n: usize) -> Vec<CMatrix> {
    let mut units = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut e = CMatrix::zeros(n, n);
            e[(i, j)] = ONE;
            units.push(e);
        }
    }
    units
}

/// A positive normalized functional, given by its values on the basis.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraicState {
    values: CVector,
}

impl AlgebraicState {
    pub fn new(alg: &AbstractStarAlgebra, values: CVector, tol: f64) -> Result<Self> {
        check_dim(alg.n_basis(), values.len())?;
        let state = Self { values };
        let norm = state.evaluate(alg.unit());
        if (norm - ONE).norm() > tol {
            return Err(Error::NotAState(format!("ω(1) = {norm}")));
        }
        let gram = state.gram(alg);
        let herm = (&gram - gram.adjoint()).norm() * 0.5;
        let scale = gram.norm().max(1.0);
        if herm > tol * scale {
            return Err(Error::NotAState(format!(
                "Gram matrix is not Hermitian by {herm:.3e}"
            )));
        }
        let eig = eig_hermitian(&HermitianOperator::from_trusted(
            (&gram + gram.adjoint()) * c(0.5),
        ))?;
        if eig.eigenvalues[0] < -tol * scale {
            return Err(Error::NotAState(format!(
                "Gram matrix has eigenvalue {:.3e}",
                eig.eigenvalues[0]
            )));
        }
        Ok(state)
    }

    /// `ω(a) = tr(ρ a)` on a concrete matrix basis.
    pub fn from_density(rho: &DensityState, basis: &[CMatrix]) -> Result<Self> {
        let values = basis
            .iter()
            .map(|b| {
                check_dim(rho.dim(), check_square(b)?)?;
                Ok(trace_product(rho.matrix(), b))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            values: CVector::from_vec(values),
        })
    }

    pub fn values(&self) -> &CVector {
        &self.values
    }

    pub fn evaluate(&self, x: &CVector) -> C64 {
        self.values.dot(x)
    }

    /// `G_ij = ω(b_i* b_j)`.
    pub fn gram(&self, alg: &AbstractStarAlgebra) -> CMatrix {
        let m = alg.n_basis();
        let stars: Vec<CVector> = (0..m).map(|i| alg.star(&alg.e(i))).collect();
        CMatrix::from_fn(m, m, |i, j| {
            self.evaluate(&alg.product(&stars[i], &alg.e(j)))
        })
    }
}

/// `(H_ω, π_ω, Ψ_ω)`.
#[derive(Debug, Clone)]
pub struct GNSTriple {
    pub rep_dim: usize,
    pub pi: Vec<CMatrix>,
    pub cyclic_vector: CVector,
}

impl GNSTriple {
    /// Apply a unitary change of basis of the representation space.
    pub fn rotated(&self, v: &CMatrix) -> Result<Self> {
        check_dim(self.rep_dim, check_square(v)?)?;
        Ok(Self {
            rep_dim: self.rep_dim,
            pi: self.pi.iter().map(|p| v * p * v.adjoint()).collect(),
            cyclic_vector: v * &self.cyclic_vector,
        })
    }
}

/// Quotient the algebra by the Gram null space and represent left
/// multiplication on what remains.
pub fn gns_construct(alg: &AbstractStarAlgebra, omega: &AlgebraicState) -> Result<GNSTriple> {
    check_dim(alg.n_basis(), omega.values.len())?;
    let gram = omega.gram(alg);
    let eig = eig_hermitian(&HermitianOperator::from_trusted(
        (&gram + gram.adjoint()) * c(0.5),
    ))?;
    let top = eig.eigenvalues.last().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return Err(Error::NotAState("Gram matrix vanishes".into()));
    }
    let keep: Vec<usize> = (0..eig.dim())
        .filter(|&k| eig.eigenvalues[k] > GRAM_NULL_TOL * top)
        .collect();
    let m = alg.n_basis();
    let r = keep.len();
    // J = Λ^{1/2} U*, J⁺ = U Λ^{-1/2}
    let j = CMatrix::from_fn(r, m, |a, b| {
        eig.eigenvectors[(b, keep[a])].conj() * eig.eigenvalues[keep[a]].sqrt()
    });
    let j_plus = CMatrix::from_fn(m, r, |a, b| {
        eig.eigenvectors[(a, keep[b])] / eig.eigenvalues[keep[b]].sqrt()
    });
    let pi = (0..m)
        .map(|i| &j * alg.left_multiplication(i) * &j_plus)
        .collect();
    Ok(GNSTriple {
        rep_dim: r,
        pi,
        cyclic_vector: &j * alg.unit(),
    })
}

/// Residuals of every GNS invariant, and the first one that fails.
#[derive(Debug, Clone, PartialEq)]
pub struct GnsCheck {
    pub homomorphism: f64,
    pub star: f64,
    pub expectation: f64,
    pub cyclic_rank: usize,
    pub first_violation: Option<&'static str>,
}

impl GnsCheck {
    pub fn valid(&self) -> bool {
        self.first_violation.is_none()
    }
}

pub fn verify_gns(
    triple: &GNSTriple,
    alg: &AbstractStarAlgebra,
    omega: &AlgebraicState,
    tol: f64,
) -> Result<GnsCheck> {
    let m = alg.n_basis();
    check_dim(m, triple.pi.len())?;
    check_dim(triple.rep_dim, triple.cyclic_vector.len())?;
    for p in &triple.pi {
        check_dim(triple.rep_dim, check_square(p)?)?;
    }
    let zero = CMatrix::zeros(triple.rep_dim, triple.rep_dim);
    let combine = |coeffs: &dyn Fn(usize) -> C64| {
        (0..m).fold(zero.clone(), |acc, k| acc + &triple.pi[k] * coeffs(k))
    };
    let mut homomorphism = 0.0_f64;
    for i in 0..m {
        for j in 0..m {
            let lhs = &triple.pi[i] * &triple.pi[j];
            let rhs = combine(&|k| alg.mult(i, j, k));
            homomorphism = homomorphism.max((lhs - rhs).norm());
        }
    }
    let mut star = 0.0_f64;
    for i in 0..m {
        let rhs = combine(&|k| alg.invol[(i, k)]);
        star = star.max((triple.pi[i].adjoint() - rhs).norm());
    }
    let psi = &triple.cyclic_vector;
    let expectation = (0..m)
        .map(|i| (psi.dotc(&(&triple.pi[i] * psi)) - omega.values[i]).norm())
        .fold(0.0, f64::max);
    let orbit = CMatrix::from_columns(&triple.pi.iter().map(|p| p * psi).collect::<Vec<_>>());
    let cyclic_rank = if triple.rep_dim == 0 {
        0
    } else {
        let svd = crate::linalg::checked_svd(&orbit);
        svd.rank(1e-8 * svd.singular_values.max())
    };
    let first_violation = if homomorphism > tol {
        Some("homomorphism")
    } else if star > tol {
        Some("star")
    } else if expectation > tol {
        Some("expectation")
    } else if cyclic_rank != triple.rep_dim {
        Some("cyclicity")
    } else {
        None
    };
    Ok(GnsCheck {
        homomorphism,
        star,
        expectation,
        cyclic_rank,
        first_violation,
    })
}

/// The unitary `W` with `W π₁(a)Ψ₁ = π₂(a)Ψ₂`, certified to `tol`.
pub fn intertwiner(t1: &GNSTriple, t2: &GNSTriple, tol: f64) -> Result<CMatrix> {
    check_dim(t1.rep_dim, t2.rep_dim)?;
    check_dim(t1.pi.len(), t2.pi.len())?;
    let orbit = |t: &GNSTriple| {
        DMatrix::from_columns(
            &t.pi
                .iter()
                .map(|p| p * &t.cyclic_vector)
                .collect::<Vec<_>>(),
        )
    };
    let (k1, k2) = (orbit(t1), orbit(t2));
    let pinv = k1
        .pseudo_inverse(1e-10 * crate::linalg::operator_norm(&orbit(t1)))
        .map_err(|e| Error::Malformed(e.to_string()))?;
    let w = k2 * pinv;
    let defect = unitarity_defect(&w);
    if defect > tol {
        return Err(Error::Tolerance {
            what: "intertwiner unitarity",
            value: defect,
            tol,
        });
    }
    let mut worst = 0.0_f64;
    for (p1, p2) in t1.pi.iter().zip(&t2.pi) {
        worst = worst.max((&w * p1 * w.adjoint() - p2).norm());
    }
    if worst > tol {
        return Err(Error::Tolerance {
            what: "intertwining relation",
            value: worst,
            tol,
        });
    }
    Ok(w)
}

/// Dimension of the commutant of `π_ω` on the GNS space.
pub fn gns_commutant_dim(triple: &GNSTriple) -> Result<usize> {
    Ok(commutant(&triple.pi, triple.rep_dim)?.dimension())
}

/// Pure iff the GNS representation is irreducible.
pub fn is_pure_state(alg: &AbstractStarAlgebra, omega: &AlgebraicState) -> Result<bool> {
    Ok(gns_commutant_dim(&gns_construct(alg, omega)?)? == 1)
}

/// `a ↦ tr(T π(a))`.
pub fn folium_state(triple: &GNSTriple, t: &DensityState) -> Result<AlgebraicState> {
    check_dim(triple.rep_dim, t.dim())?;
    let values = triple
        .pi
        .iter()
        .map(|p| trace_product(t.matrix(), p))
        .collect::<Vec<_>>();
    Ok(AlgebraicState {
        values: CVector::from_vec(values),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParadoxReport {
    pub dim: usize,
    pub rep_dim: usize,
    pub cyclic_vector_norm: f64,
    pub commutant_dim: usize,
    pub is_pure_state: bool,
    pub density_purity: f64,
}

/// A mixed density operator on `C^dim` becomes the vector state `Ψ_ρ` in its
/// GNS representation, yet the state is not pure: the representation is
/// reducible.
pub fn mixed_to_vector_paradox_demo(rho: &DensityState, dim: usize) -> Result<ParadoxReport> {
    check_dim(dim, rho.dim())?;
    if is_pure(rho, ALGEBRA_TOL) {
        return Err(Error::InputIsPure);
    }
    let units = matrix_units(dim);
    let alg = AbstractStarAlgebra::from_matrix_basis(&units, ALGEBRA_TOL)?;
    let omega = AlgebraicState::from_density(rho, &units)?;
    let triple = gns_construct(&alg, &omega)?;
    let commutant_dim = gns_commutant_dim(&triple)?;
    Ok(ParadoxReport {
        dim,
        rep_dim: triple.rep_dim,
        cyclic_vector_norm: triple.cyclic_vector.norm(),
        commutant_dim,
        is_pure_state: commutant_dim == 1,
        density_purity: rho.purity(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;

    fn m2() -> AbstractStarAlgebra {
        AbstractStarAlgebra::full_matrix(2).unwrap()
    }

    fn state(rho: &DensityState, n: usize) -> AlgebraicState {
        AlgebraicState::from_density(rho, &matrix_units(n)).unwrap()
    }

    #[test]
    fn matrix_units_have_expected_constants() {
        let a = m2();
        // E_01 E_10 = E_00
        assert_eq!(a.mult(1, 2, 0), ONE);
        assert!(a.mult(2, 1, 0).norm() < 1e-15);
        assert!((a.invol()[(1, 2)] - ONE).norm() < 1e-15);
    }

    #[test]
    fn pure_and_tracial_states_on_m2() {
        let a = m2();
        let pure = state(&DensityState::diagonal(&[1.0, 0.0]).unwrap(), 2);
        let t = gns_construct(&a, &pure).unwrap();
        assert_eq!(t.rep_dim, 2);
        assert!(verify_gns(&t, &a, &pure, 1e-10).unwrap().valid());
        assert!(is_pure_state(&a, &pure).unwrap());

        let tracial = state(&DensityState::maximally_mixed(2), 2);
        let t = gns_construct(&a, &tracial).unwrap();
        assert_eq!(t.rep_dim, 4);
        assert_eq!(gns_commutant_dim(&t).unwrap(), 4);
        assert!(!is_pure_state(&a, &tracial).unwrap());
    }

    #[test]
    fn scalar_algebra_has_one_dimensional_representation() {
        let a = AbstractStarAlgebra::scalars();
        let w = AlgebraicState::new(&a, CVector::from_element(1, ONE), 1e-12).unwrap();
        let t = gns_construct(&a, &w).unwrap();
        assert_eq!(t.rep_dim, 1);
        assert!((t.pi[0][(0, 0)] - ONE).norm() < 1e-15);
        assert!(is_pure_state(&a, &w).unwrap());
    }

    #[test]
    fn non_states_are_rejected() {
        let a = m2();
        let neg = CVector::from_vec(vec![c(1.5), ONE * 0.0, ONE * 0.0, c(-0.5)]);
        assert!(matches!(
            AlgebraicState::new(&a, neg, 1e-10),
            Err(Error::NotAState(_))
        ));
        let unnormalized = CVector::from_vec(vec![c(1.0), ONE * 0.0, ONE * 0.0, c(1.0)]);
        assert!(matches!(
            AlgebraicState::new(&a, unnormalized, 1e-10),
            Err(Error::NotAState(_))
        ));
    }

    #[test]
    fn non_associative_constants_are_rejected() {
        let a = m2();
        let m = a.n_basis();
        let mut mult: Vec<Vec<Vec<C64>>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| (0..m).map(|k| a.mult(i, j, k)).collect())
                    .collect()
            })
            .collect();
        mult[1][2][0] = c(2.0);
        let r = AbstractStarAlgebra::new(mult, a.invol().clone(), a.unit().clone(), 1e-10);
        assert!(matches!(r, Err(Error::DegenerateAlgebra(_))));
    }

    #[test]
    fn perturbed_cyclic_vector_fails_verification() {
        let a = m2();
        let w = state(&DensityState::diagonal(&[0.7, 0.3]).unwrap(), 2);
        let mut t = gns_construct(&a, &w).unwrap();
        t.cyclic_vector[0] += c(1e-3);
        let check = verify_gns(&t, &a, &w, 1e-10).unwrap();
        assert_eq!(check.first_violation, Some("expectation"));
    }

    #[test]
    fn rotated_triple_is_intertwined() {
        let a = AbstractStarAlgebra::full_matrix(3).unwrap();
        let mut rng = random::rng(13);
        let rho = random::density(&mut rng, 3, 2);
        let w = state(&rho, 3);
        let t = gns_construct(&a, &w).unwrap();
        assert_eq!(t.rep_dim, 6);
        let v = random::unitary(&mut rng, 6);
        let t2 = t.rotated(v.matrix()).unwrap();
        assert!(verify_gns(&t2, &a, &w, 1e-10).unwrap().valid());
        let u = intertwiner(&t, &t2, 1e-9).unwrap();
        assert!((u - v.matrix()).norm() < 1e-9);
    }

    #[test]
    fn folium_states() {
        let a = m2();
        let pure = state(&DensityState::diagonal(&[1.0, 0.0]).unwrap(), 2);
        let t = gns_construct(&a, &pure).unwrap();
        let psi = crate::states::PureStateVector::new(t.cyclic_vector.clone(), 1e-12).unwrap();
        let back = folium_state(&t, &psi.density()).unwrap();
        assert!((back.values() - pure.values()).norm() < 1e-12);
        let mixed = folium_state(&t, &DensityState::maximally_mixed(2)).unwrap();
        let tracial = state(&DensityState::maximally_mixed(2), 2);
        assert!((mixed.values() - tracial.values()).norm() < 1e-12);
        let mut rng = random::rng(1);
        let r = folium_state(&t, &random::density(&mut rng, 2, 2)).unwrap();
        assert!(AlgebraicState::new(&a, r.values().clone(), 1e-10).is_ok());
    }

    #[test]
    fn paradox_demo() {
        let r = mixed_to_vector_paradox_demo(&DensityState::maximally_mixed(2), 2).unwrap();
        assert_eq!((r.rep_dim, r.commutant_dim), (4, 4));
        assert!(!r.is_pure_state);
        assert!((r.cyclic_vector_norm - 1.0).abs() < 1e-12);
        let r =
            mixed_to_vector_paradox_demo(&DensityState::diagonal(&[0.9, 0.1]).unwrap(), 2).unwrap();
        assert_eq!(r.rep_dim, 4);
        assert!(!r.is_pure_state);
        assert!(matches!(
            mixed_to_vector_paradox_demo(&DensityState::diagonal(&[1.0, 0.0]).unwrap(), 2),
            Err(Error::InputIsPure)
        ));
    }
}
