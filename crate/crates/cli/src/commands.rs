// Copyright 2026 The oplattice Authors
// SPDX-License-Identifier: Apache-2.0

//! One function per subcommand. Each takes parsed inputs and returns the
//! JSON report.

use clap::ValueEnum;
use oplattice::algebras::{
    center, commutant, decohere_across_sectors, double_commutant, is_factor,
    superselection_sectors, word_closure, MEMBERSHIP_TOL,
};
use oplattice::ccr::{build_truncated_pair, heisenberg_uncertainty, svn_hypotheses_check};
use oplattice::dynamics::{
    dyson_evolve, generator_from_group, group_commutation_defect, heisenberg_observable,
    noether_check, sample_group, su2_fixture, Propagator, DEFAULT_GRID, DEFAULT_RECON_TOL,
    DEFAULT_STENCIL, MAX_DYSON_ORDER,
};
use oplattice::gns::{gns_commutant_dim, gns_construct, mixed_to_vector_paradox_demo, verify_gns};
use oplattice::json::{
    vector_to_json, AbstractAlgebraJson, AlgebraJson, AssignmentJson, MatrixJson, PvmJson,
    StateJson, TimeSampleJson,
};
use oplattice::lattice::{
    commutes, jauch_meet, join, leq, meet, neg, orthomodular_check, JauchMode,
};
use oplattice::linalg::{c, hermiticity_defect, identity, trace, unitarity_defect, C64};
use oplattice::spectral::{pvm_commute, spectral_decompose, SampledFunction, DEFAULT_CLUSTER_TOL};
use oplattice::states::{
    born_probability, expectation, gleason_fit, is_pure, kochen_specker_witness, luders_collapse,
    sequential_probability, simulate_assignments, std_deviation, tomography_frame, DEFAULT_FIT_TOL,
};
use oplattice::{random, DensityState, Error, HermitianOperator, Projector, PureStateVector};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::report::{matrix, projector, to_value, CliError, CliResult, Report};

/// Settings shared by every subcommand.
#[derive(Debug, Clone, Copy)]
pub struct Config {
    pub tol: f64,
    pub hbar: f64,
    pub seed: u64,
}

fn root_n(n: usize) -> f64 {
    (n as f64).sqrt().max(1.0)
}

// ---------------------------------------------------------------------------
// input documents

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairDoc {
    pub p: MatrixJson,
    pub q: MatrixJson,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureDoc {
    pub state: MatrixJson,
    pub projectors: Vec<MatrixJson>,
    #[serde(default)]
    pub observable: Option<MatrixJson>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CollapseDoc {
    pub state: MatrixJson,
    pub projector: MatrixJson,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignmentsDoc {
    pub assignments: Vec<AssignmentJson>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorsDoc {
    pub dim: usize,
    pub generators: Vec<MatrixJson>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectorsDoc {
    pub dim: usize,
    pub charges: Vec<MatrixJson>,
    pub observables: Vec<MatrixJson>,
    #[serde(default)]
    pub state: Option<MatrixJson>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DysonDoc {
    pub samples: Vec<TimeSampleJson>,
    #[serde(default)]
    pub t1: Option<f64>,
    #[serde(default)]
    pub t2: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GnsDoc {
    pub algebra: AbstractAlgebraJson,
    pub state: StateJson,
    /// Density operator the state came from, when there is one.
    #[serde(default)]
    pub density: Option<MatrixJson>,
}

// ---------------------------------------------------------------------------
// spectral and functional calculus

pub fn spectral(cfg: &Config, a: &HermitianOperator) -> CliResult<Value> {
    let pvm = spectral_decompose(a, DEFAULT_CLUSTER_TOL)?;
    let res = pvm.residuals();
    let reconstruction = (pvm.reconstruct() - a.matrix()).norm();
    let scale = a.matrix().norm().max(1.0);
    let mut r = Report::new("spectral", cfg.tol);
    r.set("dim", a.dim())
        .set("cluster_tol", DEFAULT_CLUSTER_TOL)
        .set("pvm", to_value(&PvmJson::from(&pvm)))
        .set(
            "residuals",
            json!({
                "reconstruction": reconstruction,
                "projector": res.projector,
                "orthogonality": res.orthogonality,
                "completeness": res.completeness,
            }),
        );
    r.checks
        .at_most("reconstruction", reconstruction, cfg.tol * scale);
    let limit = cfg.tol * root_n(a.dim());
    r.checks.at_most("projector", res.projector, limit);
    r.checks.at_most("orthogonality", res.orthogonality, limit);
    r.checks.at_most("completeness", res.completeness, limit);
    Ok(r.finish())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Function {
    /// e^x
    Exp,
    /// e^{itx}
    Cis,
    Abs,
    /// Defined on x ≥ 0 only.
    Sqrt,
    Sign,
    Square,
    /// Defined on x ≠ 0 only.
    Inverse,
}

impl Function {
    fn eval(self, x: f64, t: f64, tol: f64) -> Option<C64> {
        let v = match self {
            Function::Exp => c(x.exp()),
            Function::Cis => C64::new(0.0, t * x).exp(),
            Function::Abs => c(x.abs()),
            Function::Sqrt if x >= -tol => c(x.max(0.0).sqrt()),
            Function::Sqrt => return None,
            Function::Sign if x.abs() <= tol => c(0.0),
            Function::Sign => c(x.signum()),
            Function::Square => c(x * x),
            Function::Inverse if x.abs() <= tol => return None,
            Function::Inverse => c(1.0 / x),
        };
        Some(v)
    }

    fn name(self) -> &'static str {
        match self {
            Function::Exp => "exp",
            Function::Cis => "cis",
            Function::Abs => "abs",
            Function::Sqrt => "sqrt",
            Function::Sign => "sign",
            Function::Square => "square",
            Function::Inverse => "inverse",
        }
    }
}

pub fn funcalc(cfg: &Config, a: &HermitianOperator, f: Function, t: f64) -> CliResult<Value> {
    let pvm = spectral_decompose(a, DEFAULT_CLUSTER_TOL)?;
    let samples = pvm
        .atoms()
        .iter()
        .filter_map(|atom| {
            f.eval(atom.label[0], t, cfg.tol)
                .map(|v| (atom.label.clone(), v))
        })
        .collect();
    let f_sampled = SampledFunction(samples);
    let fa = oplattice::spectral::func_calculus(&pvm, &f_sampled)?;
    // f(A)* = f̄(A)
    let conj = SampledFunction(
        f_sampled
            .0
            .iter()
            .map(|(l, v)| (l.clone(), v.conj()))
            .collect(),
    );
    let fbar = oplattice::spectral::func_calculus(&pvm, &conj)?;
    let adjoint_residual = (fa.adjoint() - &fbar).norm();
    let scale = fa.norm().max(1.0);
    let values: Vec<Value> = f_sampled
        .0
        .iter()
        .map(|(l, v)| json!({ "label": l[0], "value": [v.re, v.im] }))
        .collect();
    let mut r = Report::new("funcalc", cfg.tol);
    r.set("function", f.name())
        .set("t", t)
        .set("values", values)
        .set("result", matrix(&fa))
        .set("hermitian", hermiticity_defect(&fa) <= cfg.tol * scale)
        .set("adjoint_residual", adjoint_residual);
    r.checks
        .at_most("adjoint_residual", adjoint_residual, cfg.tol * scale);
    Ok(r.finish())
}

// ---------------------------------------------------------------------------
// projector lattice

/// Lower bound on the stopping tolerance of the alternating-product meet.
const JAUCH_STOP_FLOOR: f64 = 1e-8;

pub fn lattice(cfg: &Config, p: &Projector, q: &Projector) -> CliResult<Value> {
    let n = p.dim();
    let m = meet(p, q)?;
    let j = join(p, q)?;
    let comm = commutes(p, q, cfg.tol)?;
    // the law needs an ordered pair; P ≤ P ∨ Q always is one
    let (orthomodular_pair, orthomodular) = if leq(p, q, cfg.tol)? {
        ("p <= q", orthomodular_check(p, q, cfg.tol)?)
    } else if leq(q, p, cfg.tol)? {
        ("q <= p", orthomodular_check(q, p, cfg.tol)?)
    } else {
        ("p <= p v q", orthomodular_check(p, &j, cfg.tol)?)
    };
    // squaring amplifies rounding, so tighter stopping can overshoot at small angles
    let stop = cfg.tol.max(JAUCH_STOP_FLOOR);
    let jauch = match jauch_meet(p, q, stop, 100_000, JauchMode::Squaring) {
        Ok(jm) => json!({
            "stop_tol": stop,
            "converged": true,
            "iterations": jm.iterations,
            "residual": jm.residual,
            "distance_to_meet": (jm.matrix - m.matrix()).norm(),
        }),
        Err(Error::MaxIterExceeded {
            iterations,
            residual,
        }) => json!({
            "stop_tol": stop,
            "converged": false,
            "iterations": iterations,
            "residual": residual,
        }),
        Err(e) => return Err(e.into()),
    };
    let below_p = (m.matrix() * p.matrix() - m.matrix()).norm();
    let below_q = (m.matrix() * q.matrix() - m.matrix()).norm();
    let above_p = (j.matrix() * p.matrix() - p.matrix()).norm();
    let above_q = (j.matrix() * q.matrix() - q.matrix()).norm();
    let mut r = Report::new("lattice", cfg.tol);
    r.set("dim", n)
        .set("neg_p", projector(&neg(p)))
        .set("neg_q", projector(&neg(q)))
        .set("meet", projector(&m))
        .set("join", projector(&j))
        .set("commutes", comm.commutes)
        .set("commutator_defect", comm.defect)
        .set("orthomodular", orthomodular)
        .set("orthomodular_pair", orthomodular_pair)
        .set("jauch", jauch);
    let limit = cfg.tol * root_n(n);
    r.checks.at_most("meet_below_p", below_p, limit);
    r.checks.at_most("meet_below_q", below_q, limit);
    r.checks.at_most("join_above_p", above_p, limit);
    r.checks.at_most("join_above_q", above_q, limit);
    r.checks.holds("orthomodular", orthomodular);
    Ok(r.finish())
}

// ---------------------------------------------------------------------------
// states

pub fn measure(cfg: &Config, doc: &MeasureDoc) -> CliResult<Value> {
    let rho = doc.state.to_density(cfg.tol)?;
    let projectors = doc
        .projectors
        .iter()
        .map(|p| p.to_projector(cfg.tol))
        .collect::<oplattice::Result<Vec<_>>>()?;
    let probabilities = projectors
        .iter()
        .map(|p| born_probability(&rho, p))
        .collect::<oplattice::Result<Vec<_>>>()?;
    let mut r = Report::new("measure", cfg.tol);
    r.set("dim", rho.dim())
        .set("purity", rho.purity())
        .set("pure", is_pure(&rho, cfg.tol))
        .set("probabilities", probabilities.clone());
    if !projectors.is_empty() {
        let seq = sequential_probability(&rho, &projectors)?;
        r.set(
            "sequential",
            json!({
                "forward": seq.forward,
                "reversed": seq.reversed,
                "order_sensitivity": seq.order_sensitivity(),
            }),
        );
    }
    if let Some(obs) = &doc.observable {
        let a = obs.to_hermitian(cfg.tol)?;
        r.set(
            "observable",
            json!({
                "expectation": expectation(&rho, &a)?,
                "std_deviation": std_deviation(&rho, &a)?,
            }),
        );
    }
    for (k, p) in probabilities.iter().enumerate() {
        r.checks.holds(
            &format!("probability_{k}_in_unit_interval"),
            (0.0..=1.0).contains(p),
        );
    }
    Ok(r.finish())
}

pub fn collapse(cfg: &Config, doc: &CollapseDoc) -> CliResult<Value> {
    let rho = doc.state.to_density(cfg.tol)?;
    let p = doc.projector.to_projector(cfg.tol)?;
    let probability = born_probability(&rho, &p)?;
    let post = luders_collapse(&rho, &p)?;
    let trace_defect = (trace(post.matrix()) - c(1.0)).norm();
    let support = (p.matrix() * post.matrix() * p.matrix() - post.matrix()).norm();
    let mut r = Report::new("collapse", cfg.tol);
    r.set("probability", probability)
        .set("post_state", matrix(post.matrix()))
        .set("trace_defect", trace_defect)
        .set("support_residual", support);
    r.checks.at_most("trace_defect", trace_defect, cfg.tol);
    r.checks
        .at_most("support_residual", support, cfg.tol * root_n(rho.dim()));
    Ok(r.finish())
}

pub fn gleason_from_assignments(cfg: &Config, doc: &AssignmentsDoc) -> CliResult<Value> {
    let assignments = doc
        .assignments
        .iter()
        .map(|a| a.to_assignment(cfg.tol))
        .collect::<oplattice::Result<Vec<_>>>()?;
    let fit = gleason_fit(&assignments, DEFAULT_FIT_TOL)?;
    let mut r = Report::new("gleason-fit", cfg.tol);
    r.set("fit_tol", DEFAULT_FIT_TOL)
        .set("state", matrix(fit.state.matrix()))
        .set("residual", fit.residual)
        .set("least_squares_residual", fit.least_squares_residual)
        .set("rank", fit.rank)
        .set("clipped", fit.clipped)
        .set("dim2_warning", fit.dim2_warning);
    r.checks.at_most("residual", fit.residual, DEFAULT_FIT_TOL);
    Ok(r.finish())
}

/// Tomography round trip on a seeded random density operator.
pub fn gleason_random(cfg: &Config, n: usize) -> CliResult<Value> {
    if n < 2 {
        return Err(Error::BadDimension {
            dim: n,
            reason: "tomography needs dimension at least 2",
        }
        .into());
    }
    let mut rng = random::rng(cfg.seed);
    let rho = random::density(&mut rng, n, n);
    let frame = tomography_frame(n);
    let assignments = simulate_assignments(&rho, &frame)?;
    let fit = gleason_fit(&assignments, DEFAULT_FIT_TOL)?;
    let recovery = (fit.state.matrix() - rho.matrix()).norm();
    let mut r = Report::new("gleason-fit", cfg.tol);
    r.set("seed", cfg.seed)
        .set("dim", n)
        .set("fit_tol", DEFAULT_FIT_TOL)
        .set("frame_size", frame.len())
        .set("source_state", matrix(rho.matrix()))
        .set("state", matrix(fit.state.matrix()))
        .set("residual", fit.residual)
        .set("rank", fit.rank)
        .set("recovery_error", recovery);
    r.checks.at_most("recovery_error", recovery, 1e-8);
    if n >= 3 {
        let w = kochen_specker_witness(&rho, cfg.seed)?;
        r.set(
            "kochen_specker_witness",
            json!({ "projector": projector(&w.projector), "probability": w.probability }),
        );
        r.checks.holds(
            "witness_is_not_two_valued",
            w.probability > 0.0 && w.probability < 1.0,
        );
    }
    Ok(r.finish())
}

// ---------------------------------------------------------------------------
// operator algebras

pub fn commutant_report(cfg: &Config, doc: &GeneratorsDoc) -> CliResult<Value> {
    let gens = doc
        .generators
        .iter()
        .map(|g| g.to_matrix())
        .collect::<oplattice::Result<Vec<_>>>()?;
    let once = commutant(&gens, doc.dim)?;
    let twice = double_commutant(&gens, doc.dim)?;
    let closure = word_closure(&gens, doc.dim)?;
    let z = center(&twice)?;
    let angle = twice.max_principal_angle(&closure);
    let mut r = Report::new("commutant", cfg.tol);
    r.set("dim", doc.dim)
        .set("membership_tol", MEMBERSHIP_TOL)
        .set(
            "commutant",
            json!({ "dimension": once.dimension(), "algebra": to_value(&AlgebraJson::from(&once)) }),
        )
        .set("double_commutant_dimension", twice.dimension())
        .set("word_closure_dimension", closure.dimension())
        .set("center_dimension", z.dimension())
        .set("is_factor", is_factor(&twice)?)
        .set("principal_angle", angle);
    r.checks
        .holds("double_commutant_matches_closure", angle.is_some());
    if let Some(a) = angle {
        r.checks.at_most("principal_angle", a, MEMBERSHIP_TOL);
    }
    Ok(r.finish())
}

pub fn sectors(cfg: &Config, doc: &SectorsDoc) -> CliResult<Value> {
    let charges = doc
        .charges
        .iter()
        .map(|q| q.to_hermitian(cfg.tol))
        .collect::<oplattice::Result<Vec<_>>>()?;
    let observables = doc
        .observables
        .iter()
        .map(|o| o.to_matrix())
        .collect::<oplattice::Result<Vec<_>>>()?;
    let sd = superselection_sectors(&charges, &observables, doc.dim, cfg.tol)?;
    let (completeness, overlap) = sd.residuals();
    let list: Vec<Value> = sd
        .sectors
        .iter()
        .map(|s| {
            json!({
                "label": s.label,
                "dim": s.dim(),
                "projector": projector(&s.projector),
                "restricted_dimension": s.restricted.dimension(),
                "commutant_dim": s.commutant_dim,
                "irreducible": s.irreducible(),
                "full_matrix_algebra": s.is_full_matrix_algebra(),
                "charge_defect": s.charge_defect,
            })
        })
        .collect();
    let mut r = Report::new("sectors", cfg.tol);
    r.set("dim", doc.dim).set("sectors", list).set(
        "residuals",
        json!({ "completeness": completeness, "overlap": overlap }),
    );
    let limit = cfg.tol * root_n(doc.dim);
    r.checks.at_most("completeness", completeness, limit);
    r.checks.at_most("overlap", overlap, limit);
    for (k, s) in sd.sectors.iter().enumerate() {
        r.checks
            .at_most(&format!("sector_{k}_charge_defect"), s.charge_defect, limit);
    }
    if let Some(state) = &doc.state {
        let rho = state.to_density(cfg.tol)?;
        let decohered = decohere_across_sectors(&rho, &sd)?;
        r.set(
            "decohered",
            json!({
                "state": matrix(decohered.matrix()),
                "purity_before": rho.purity(),
                "purity_after": decohered.purity(),
            }),
        );
    }
    Ok(r.finish())
}

// ---------------------------------------------------------------------------
// dynamics

pub fn evolve(
    cfg: &Config,
    h: &HermitianOperator,
    t: f64,
    observable: Option<&HermitianOperator>,
) -> CliResult<Value> {
    let n = h.dim();
    let prop = Propagator::new(h, cfg.hbar)?;
    let u = prop.at(t);
    let group_law = (prop.at(t).matrix() * prop.at(t).matrix() - prop.at(2.0 * t).matrix()).norm();
    let scaled = h.scale(1.0 / cfg.hbar);
    let samples = sample_group(&scaled, &DEFAULT_STENCIL)?;
    let recovered = generator_from_group(&samples, DEFAULT_RECON_TOL)?.scale(cfg.hbar);
    let stone_error = (recovered.matrix() - h.matrix()).norm();
    let mut r = Report::new("evolve", cfg.tol);
    r.set("hbar", cfg.hbar)
        .set("t", t)
        .set("unitary", matrix(u.matrix()))
        .set("unitarity_defect", unitarity_defect(u.matrix()))
        .set("group_law_residual", group_law)
        .set(
            "stone",
            json!({
                "stencil": DEFAULT_STENCIL,
                "recon_tol": DEFAULT_RECON_TOL,
                "generator": matrix(recovered.matrix()),
                "recovery_error": stone_error,
            }),
        );
    if let Some(a) = observable {
        let at = heisenberg_observable(a, &scaled, t)?;
        r.set("heisenberg_observable", matrix(at.matrix()));
    }
    r.checks.at_most(
        "unitarity_defect",
        unitarity_defect(u.matrix()),
        cfg.tol * root_n(n),
    );
    r.checks
        .at_most("group_law_residual", group_law, cfg.tol * root_n(n));
    r.checks.at_most(
        "stone_recovery_error",
        stone_error,
        1e-6 * h.matrix().norm().max(1.0),
    );
    Ok(r.finish())
}

pub fn noether(cfg: &Config, a: &HermitianOperator, h: &HermitianOperator) -> CliResult<Value> {
    let report = noether_check(a, h, &DEFAULT_GRID, &DEFAULT_GRID, cfg.tol)?;
    let group_defect = group_commutation_defect(a, h, &DEFAULT_GRID)?;
    let pa = spectral_decompose(a, DEFAULT_CLUSTER_TOL)?;
    let ph = spectral_decompose(h, DEFAULT_CLUSTER_TOL)?;
    let spectral = pvm_commute(&pa, &ph, cfg.tol)?;
    let mut r = Report::new("noether", cfg.tol);
    r.set("grid", DEFAULT_GRID.to_vec())
        .set("constant_of_motion", report.constant_of_motion)
        .set("dynamical_symmetry", report.dynamical_symmetry)
        .set("h_invariance", report.h_invariance)
        .set("conserved", report.all())
        .set(
            "defects",
            json!({
                "constant_of_motion": report.defects[0],
                "dynamical_symmetry": report.defects[1],
                "h_invariance": report.defects[2],
            }),
        )
        .set("group_commutation_defect", group_defect)
        .set("spectral_measures_commute", spectral);
    r.checks.holds("conditions_agree", true);
    Ok(r.finish())
}

pub fn dyson(
    cfg: &Config,
    doc: &DysonDoc,
    t1: Option<f64>,
    t2: Option<f64>,
    order: usize,
) -> CliResult<Value> {
    let samples = doc
        .samples
        .iter()
        .map(|s| s.to_sample(cfg.tol))
        .collect::<oplattice::Result<Vec<_>>>()?;
    let (first, last) = match (samples.first(), samples.last()) {
        (Some(f), Some(l)) => (f.0, l.0),
        _ => return Err(CliError::Malformed("no Hamiltonian samples".into())),
    };
    let t1 = t1.or(doc.t1).unwrap_or(first);
    let t2 = t2.or(doc.t2).unwrap_or(last);
    let res = dyson_evolve(&samples, t1, t2, order)?;
    let n = res.unitary.dim();
    let mut r = Report::new("dyson", cfg.tol);
    r.set("t1", t1)
        .set("t2", t2)
        .set("order", res.order)
        .set("steps", res.steps)
        .set("unitary", matrix(res.unitary.matrix()))
        .set("series", matrix(&res.series))
        .set("series_difference", res.series_difference)
        .set("unitarity_defect", res.unitarity_defect)
        .set("series_unitarity_defect", res.series_unitarity_defect)
        .set("truncation_bound", res.truncation_bound);
    if order + 2 <= MAX_DYSON_ORDER {
        let higher = dyson_evolve(&samples, t1, t2, order + 2)?;
        r.set("self_convergence", (&higher.series - &res.series).norm());
    }
    r.checks.at_most(
        "unitarity_defect",
        res.unitarity_defect,
        cfg.tol * root_n(n),
    );
    Ok(r.finish())
}

// ---------------------------------------------------------------------------
// canonical commutation relations

pub fn ccr(cfg: &Config, n: usize, mass: f64, omega: f64, hbar: f64) -> CliResult<Value> {
    let pair = build_truncated_pair(n, mass, omega, hbar)?;
    let defect = oplattice::linalg::operator_norm(&pair.ccr_defect());
    let expected = hbar * n as f64;
    let commutator_trace = trace(&pair.commutator()).norm();
    let svn = svn_hypotheses_check(
        std::slice::from_ref(&pair.x),
        std::slice::from_ref(&pair.p),
        hbar,
        cfg.tol,
    )?;
    let uncertainty = |k: usize| -> CliResult<Value> {
        if k >= n {
            return Ok(Value::Null);
        }
        match heisenberg_uncertainty(&pair, &PureStateVector::basis(n, k)) {
            Ok(u) => Ok(json!({
                "dx": u.dx,
                "dp": u.dp,
                "product": u.product,
                "bound": u.bound,
                "tail_weight": u.tail_weight,
            })),
            Err(Error::TailTooLarge { .. }) => Ok(Value::Null),
            Err(e) => Err(e.into()),
        }
    };
    let ground = uncertainty(0)?;
    let first = uncertainty(1)?;
    let mut r = Report::new("ccr", cfg.tol);
    r.set("n", n)
        .set("m", mass)
        .set("omega", omega)
        .set("hbar", hbar)
        .set("ccr_defect_norm", defect)
        .set("expected_defect_norm", expected)
        .set("commutator_trace", commutator_trace)
        .set("ground_state", ground.clone())
        .set("fock_1", first.clone())
        .set(
            "stone_von_neumann",
            json!({
                "ccr_residual": svn.ccr_residual,
                "ccr_residual_operator": svn.ccr_residual_operator,
                "frobenius_floor": svn.frobenius_floor,
                "operator_floor": svn.operator_floor,
                "commutator_trace": svn.commutator_trace,
                "commutant_dim": svn.commutant_dim,
                "irreducible": svn.irreducible,
                "exact_ccr_possible": svn.exact_ccr_possible(),
            }),
        );
    r.checks.at_most(
        "defect_norm_minus_hbar_n",
        (defect - expected).abs(),
        cfg.tol * expected,
    );
    r.checks.at_most(
        "commutator_trace",
        commutator_trace,
        cfg.tol * hbar * n as f64,
    );
    if let Some(p) = ground["product"].as_f64() {
        r.checks.at_most(
            "ground_state_saturates_bound",
            (p - hbar / 2.0).abs(),
            cfg.tol * hbar,
        );
    }
    if let Some(p) = first["product"].as_f64() {
        r.checks
            .at_most("fock_1_product", (p - 1.5 * hbar).abs(), cfg.tol * hbar);
    }
    Ok(r.finish())
}

pub fn spin(cfg: &Config, hbar: f64) -> CliResult<Value> {
    let fx = su2_fixture(hbar)?;
    let expected_spectrum = [-hbar / 2.0, hbar / 2.0];
    let spectrum_error = fx
        .spectra
        .iter()
        .flat_map(|s| s.iter().zip(expected_spectrum).map(|(a, b)| (a - b).abs()))
        .fold(0.0, f64::max);
    let casimir = 0.75 * hbar * hbar;
    let nelson_residual = (fx.nelson.matrix() - identity(2) * c(casimir)).norm();
    let mut r = Report::new("spin-ccr", cfg.tol);
    r.set("hbar", hbar)
        .set(
            "generators",
            fx.generators
                .iter()
                .map(|g| matrix(g.matrix()))
                .collect::<Vec<_>>(),
        )
        .set("spectra", fx.spectra.to_vec())
        .set("commutator_residual", fx.commutator_residual)
        .set("group_law_residual", fx.group_law_residual)
        .set("nelson_eigenvalues", fx.nelson_eigenvalues.clone())
        .set("casimir", casimir);
    r.checks.at_most(
        "commutator_residual",
        fx.commutator_residual,
        cfg.tol * hbar * hbar,
    );
    r.checks.at_most("spectrum", spectrum_error, cfg.tol * hbar);
    r.checks
        .at_most("group_law_residual", fx.group_law_residual, cfg.tol);
    r.checks
        .at_most("nelson_residual", nelson_residual, cfg.tol * hbar * hbar);
    Ok(r.finish())
}

// ---------------------------------------------------------------------------
// GNS

pub fn gns(cfg: &Config, doc: &GnsDoc) -> CliResult<Value> {
    let alg = doc.algebra.to_algebra(cfg.tol)?;
    let omega = doc.state.to_state(&alg, cfg.tol)?;
    let triple = gns_construct(&alg, &omega)?;
    let check = verify_gns(&triple, &alg, &omega, cfg.tol)?;
    let commutant_dim = gns_commutant_dim(&triple)?;
    let mut r = Report::new("gns", cfg.tol);
    r.set("n_basis", alg.n_basis())
        .set("rep_dim", triple.rep_dim)
        .set("pi", triple.pi.iter().map(matrix).collect::<Vec<_>>())
        .set(
            "cyclic_vector",
            to_value(&vector_to_json(&triple.cyclic_vector)),
        )
        .set(
            "residuals",
            json!({
                "homomorphism": check.homomorphism,
                "star": check.star,
                "expectation": check.expectation,
            }),
        )
        .set("cyclic_rank", check.cyclic_rank)
        .set("commutant_dim", commutant_dim)
        .set("pure_state", commutant_dim == 1);
    if let Some(d) = &doc.density {
        let rho: DensityState = d.to_density(cfg.tol)?;
        let density_pure = is_pure(&rho, cfg.tol);
        r.set("density_purity", rho.purity());
        r.checks.holds(
            "purity_agrees_with_density",
            density_pure == (commutant_dim == 1),
        );
        if !density_pure {
            let p = mixed_to_vector_paradox_demo(&rho, rho.dim())?;
            r.set(
                "paradox",
                json!({
                    "dim": p.dim,
                    "rep_dim": p.rep_dim,
                    "cyclic_vector_norm": p.cyclic_vector_norm,
                    "commutant_dim": p.commutant_dim,
                    "is_pure_state": p.is_pure_state,
                    "density_purity": p.density_purity,
                }),
            );
        }
    }
    r.checks
        .at_most("homomorphism", check.homomorphism, cfg.tol);
    r.checks.at_most("star", check.star, cfg.tol);
    r.checks.at_most("expectation", check.expectation, cfg.tol);
    r.checks
        .holds("cyclic", check.cyclic_rank == triple.rep_dim);
    Ok(r.finish())
}
