// Copyright 2026 The oplattice Authors
// SPDX-License-Identifier: Apache-2.0

//! Finite projector-valued measures: spectral decomposition, functional
//! calculus and joint spectral measures of commuting observables.

use crate::error::{check_dim, Error, Result};
use crate::lattice::Projector;
use crate::linalg::{c, eig_hermitian, identity, zeros, CMatrix, HermitianOperator, C64};

/// Default relative clustering threshold for merging eigenvalues.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;

/// One spectral point: a label (a real number, or a tuple for joint measures)
/// and its projector.
#[derive(Debug, Clone)]
pub struct Atom {
    pub label: Vec<f64>,
    pub projector: Projector,
}

/// Residuals of the PVM axioms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PvmResiduals {
    /// Largest defect of `P = L L*`, `L*L = I`, `P = P*` over atoms, with
    /// `L` from [`Projector::factor`].
    pub projector: f64,
    /// Largest `‖P_a P_b‖_F` over distinct atoms.
    pub orthogonality: f64,
    /// `‖Σ P_a − I‖_F`.
    pub completeness: f64,
}

impl PvmResiduals {
    pub fn max(&self) -> f64 {
        self.projector
            .max(self.orthogonality)
            .max(self.completeness)
    }
}

#[derive(Debug, Clone)]
pub struct ProjectorValuedMeasure {
    dim: usize,
    atoms: Vec<Atom>,
}

impl ProjectorValuedMeasure {
    /// Assemble and validate a PVM from atoms.
    pub fn new(dim: usize, atoms: Vec<Atom>, tol: f64) -> Result<Self> {
        for a in &atoms {
            check_dim(dim, a.projector.dim())?;
        }
        for (i, a) in atoms.iter().enumerate() {
            for b in &atoms[..i] {
                if a.label == b.label {
                    return Err(Error::NotPvm(format!("duplicate label {:?}", a.label)));
                }
            }
        }
        let pvm = Self { dim, atoms };
        let r = pvm.residuals();
        if r.max() > tol * (dim as f64).sqrt().max(1.0) {
            return Err(Error::NotPvm(format!("axiom residuals {r:?}")));
        }
        Ok(pvm)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn labels(&self) -> Vec<Vec<f64>> {
        self.atoms.iter().map(|a| a.label.clone()).collect()
    }

    pub fn residuals(&self) -> PvmResiduals {
        // Work through factors P = L L*: ‖P_a P_b‖_F = ‖L_a* L_b‖_F once
        // L*L = I, and P is a projector iff P = L L* with L*L = I.
        let mut projector = 0.0_f64;
        let mut sum = zeros(self.dim);
        let factors: Vec<CMatrix> = self.atoms.iter().map(|a| a.projector.factor()).collect();
        for (a, l) in self.atoms.iter().zip(&factors) {
            let p = a.projector.matrix();
            let gram = l.adjoint() * l;
            projector = projector
                .max((p - l * l.adjoint()).norm())
                .max((gram - identity(l.ncols())).norm())
                .max((p - p.adjoint()).norm());
            sum += p;
        }
        let mut orthogonality = 0.0_f64;
        for (i, la) in factors.iter().enumerate() {
            for lb in &factors[i + 1..] {
                orthogonality = orthogonality.max((la.adjoint() * lb).norm());
            }
        }
        PvmResiduals {
            projector,
            orthogonality,
            completeness: (sum - identity(self.dim)).norm(),
        }
    }

    /// Sample a function at every label.
    pub fn sample(&self, f: impl Fn(&[f64]) -> C64) -> SampledFunction {
        SampledFunction(
            self.atoms
                .iter()
                .map(|a| (a.label.clone(), f(&a.label)))
                .collect(),
        )
    }

    /// `Σ f(a) P_a` for a function given pointwise.
    pub fn apply(&self, f: impl Fn(&[f64]) -> C64) -> CMatrix {
        func_calculus(self, &self.sample(f)).expect("sampled at every label")
    }

    /// `Σ λ P_λ` for a measure with scalar labels.
    pub fn reconstruct(&self) -> CMatrix {
        self.apply(|l| c(l[0]))
    }

    /// Push the measure forward along coordinate `k` of the labels.
    pub fn marginal(&self, k: usize) -> Result<ProjectorValuedMeasure> {
        let mut groups: Vec<(f64, CMatrix)> = Vec::new();
        for a in &self.atoms {
            let x = *a.label.get(k).ok_or_else(|| {
                Error::NotPvm(format!("label {:?} has no coordinate {k}", a.label))
            })?;
            match groups.iter_mut().find(|(l, _)| *l == x) {
                Some((_, m)) => *m += a.projector.matrix(),
                None => groups.push((x, a.projector.matrix().clone())),
            }
        }
        groups.sort_by(|a, b| a.0.total_cmp(&b.0));
        let atoms = groups
            .into_iter()
            .map(|(l, m)| {
                Ok(Atom {
                    label: vec![l],
                    projector: Projector::round(&m)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            dim: self.dim,
            atoms,
        })
    }
}

/// A function known only through its values at finitely many labels.
#[derive(Debug, Clone, Default)]
pub struct SampledFunction(pub Vec<(Vec<f64>, C64)>);

impl SampledFunction {
    pub fn lookup(&self, label: &[f64]) -> Option<C64> {
        self.0
            .iter()
            .find(|(l, _)| labels_match(l, label))
            .map(|(_, v)| *v)
    }
}

fn labels_match(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(x, y)| (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0))
}

/// Spectral measure of `a`. Sorted eigenvalues closer than
/// `cluster_tol · max(1, spread)` are chained into one spectral point whose
/// label is their mean.
pub fn spectral_decompose(
    a: &HermitianOperator,
    cluster_tol: f64,
) -> Result<ProjectorValuedMeasure> {
    let eig = eig_hermitian(a)?;
    let n = eig.dim();
    let values = &eig.eigenvalues;
    let spread = values[n - 1] - values[0];
    let threshold = cluster_tol * spread.max(1.0);
    let mut clusters: Vec<Vec<usize>> = vec![vec![0]];
    for k in 1..n {
        if values[k] - values[k - 1] <= threshold {
            clusters.last_mut().unwrap().push(k);
        } else {
            clusters.push(vec![k]);
        }
    }
    let atoms = clusters
        .into_iter()
        .map(|idx| {
            let label = idx.iter().map(|&k| values[k]).sum::<f64>() / idx.len() as f64;
            let v = CMatrix::from_fn(n, idx.len(), |i, j| eig.eigenvectors[(i, idx[j])]);
            Atom {
                label: vec![label],
                projector: Projector::from_orthonormal_columns(&v),
            }
        })
        .collect();
    Ok(ProjectorValuedMeasure { dim: n, atoms })
}

/// `Σ_a f(a) P_a`.
pub fn func_calculus(pvm: &ProjectorValuedMeasure, f: &SampledFunction) -> Result<CMatrix> {
    let mut acc = zeros(pvm.dim);
    for a in &pvm.atoms {
        let v = f
            .lookup(&a.label)
            .ok_or_else(|| Error::MissingSample(a.label.clone()))?;
        acc += a.projector.matrix() * v;
    }
    Ok(acc)
}

/// Largest `‖P_a Q_b − Q_b P_a‖_F` over atom pairs.
pub fn pvm_commutation_defect(
    p: &ProjectorValuedMeasure,
    q: &ProjectorValuedMeasure,
) -> Result<f64> {
    check_dim(p.dim, q.dim)?;
    let mut worst = 0.0_f64;
    for a in &p.atoms {
        for b in &q.atoms {
            let (x, y) = (a.projector.matrix(), b.projector.matrix());
            worst = worst.max((x * y - y * x).norm());
        }
    }
    Ok(worst)
}

/// Whether every pair of atoms commutes within `tol`.
pub fn pvm_commute(
    p: &ProjectorValuedMeasure,
    q: &ProjectorValuedMeasure,
    tol: f64,
) -> Result<bool> {
    Ok(pvm_commutation_defect(p, q)? <= tol)
}

/// Joint spectral measure of pairwise commuting observables. Atoms are labeled
/// by eigenvalue tuples; products of rank zero are dropped.
pub fn joint_pvm(
    ops: &[HermitianOperator],
    cluster_tol: f64,
    tol: f64,
) -> Result<ProjectorValuedMeasure> {
    let first = ops
        .first()
        .ok_or_else(|| Error::NotPvm("no operators given".into()))?;
    let dim = first.dim();
    for op in ops {
        check_dim(dim, op.dim())?;
    }
    let pvms = ops
        .iter()
        .map(|a| spectral_decompose(a, cluster_tol))
        .collect::<Result<Vec<_>>>()?;
    for i in 0..pvms.len() {
        for j in i + 1..pvms.len() {
            let defect = pvm_commutation_defect(&pvms[i], &pvms[j])?;
            if defect > tol {
                return Err(Error::NonCommuting { i, j, defect });
            }
        }
    }
    let mut atoms = vec![Atom {
        label: Vec::new(),
        projector: Projector::identity(dim),
    }];
    for pvm in &pvms {
        let mut next = Vec::new();
        for a in &atoms {
            for b in &pvm.atoms {
                let product = a.projector.matrix() * b.projector.matrix();
                if crate::linalg::trace(&product).re < 0.5 {
                    continue;
                }
                let mut label = a.label.clone();
                label.extend_from_slice(&b.label);
                next.push(Atom {
                    label,
                    projector: Projector::round(&product)?,
                });
            }
        }
        atoms = next;
    }
    Ok(ProjectorValuedMeasure { dim, atoms })
}
