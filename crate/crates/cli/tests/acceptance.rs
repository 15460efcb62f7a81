// Copyright 2026 The oplattice Authors
// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite. Prints one `[PASS]`/`[FAIL]` line per criterion and
//! exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use oplattice::algebras::{
    center, commutant, double_commutant, is_factor, word_closure, MatrixStarAlgebra,
};
use oplattice::ccr::{build_truncated_pair, heisenberg_uncertainty};
use oplattice::dynamics::{
    commuting_via_groups, dyson_evolve, evolve_unitary, generator_from_group, noether_check,
    sample_group, su2_fixture, Propagator, DEFAULT_GRID, DEFAULT_RECON_TOL, DEFAULT_STENCIL,
};
use oplattice::gns::{
    gns_commutant_dim, gns_construct, matrix_units, mixed_to_vector_paradox_demo, verify_gns,
};
use oplattice::json::{parse, TimeSampleJson};
use oplattice::lattice::{jauch_meet, meet, JauchMode};
use oplattice::linalg::{c, diag_real, operator_norm, pauli, trace, CMatrix};
use oplattice::spectral::{func_calculus, pvm_commute, spectral_decompose, DEFAULT_CLUSTER_TOL};
use oplattice::states::{
    gleason_fit, is_pure, kochen_specker_witness, simulate_assignments, tomography_frame,
    DEFAULT_FIT_TOL, KS_MARGIN,
};
use oplattice::{
    random, AbstractStarAlgebra, AlgebraicState, DensityState, HermitianOperator, Projector,
    PureStateVector,
};
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn herm(m: CMatrix) -> HermitianOperator {
    HermitianOperator::new(m, 1e-9).expect("Hermitian by construction")
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_oplattice"))
        .args(args)
        .env_remove("OPLATTICE_TOL")
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn fixture(name: &str) -> String {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

fn spectral_roundtrip() -> Outcome {
    let start = Instant::now();
    let mut rng = random::rng(1);
    let (mut worst_recon, mut worst_pvm) = (0.0_f64, 0.0_f64);
    for k in 0..1000 {
        let n = 2 + k % 63;
        let a = random::hermitian(&mut rng, n);
        let pvm = spectral_decompose(&a, DEFAULT_CLUSTER_TOL).map_err(|e| e.to_string())?;
        let recon = (pvm.reconstruct() - a.matrix()).norm() / a.matrix().norm();
        let res = pvm.residuals();
        worst_recon = worst_recon.max(recon);
        worst_pvm = worst_pvm.max(res.completeness).max(res.orthogonality);
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(worst_recon <= 1e-10, || {
        format!("relative reconstruction {worst_recon:.3e}")
    })?;
    ensure(worst_pvm <= 1e-10, || {
        format!("PVM residual {worst_pvm:.3e}")
    })?;
    Ok(format!(
        "1000 matrices, max relative reconstruction {worst_recon:.2e}, max PVM residual {worst_pvm:.2e}, {secs:.2} s"
    ))
}

fn pauli_fixture() -> Outcome {
    let mut worst = 0.0_f64;
    for hbar in [1.0, 0.5, 2.7] {
        let fx = su2_fixture(hbar).map_err(|e| e.to_string())?;
        for s in &fx.spectra {
            ensure(s.len() == 2, || format!("spectrum {s:?}"))?;
            let err = (s[0] + hbar / 2.0).abs().max((s[1] - hbar / 2.0).abs());
            ensure(err <= 1e-12 * hbar, || {
                format!("spectrum {s:?} at hbar {hbar}")
            })?;
        }
        ensure(fx.commutator_residual <= 1e-12, || {
            format!("commutator residual {:.3e}", fx.commutator_residual)
        })?;
        worst = worst.max(fx.commutator_residual);
    }
    Ok(format!(
        "spectra ±ħ/2, max cyclic commutator residual {worst:.2e}"
    ))
}

fn c2_distributivity() -> Outcome {
    let args = ["demo", "--name", "c2-distributivity"];
    let (code1, first) = run_cli(&args);
    let (code2, second) = run_cli(&args);
    ensure(code1 == 0 && code2 == 0, || {
        format!("exit codes {code1}, {code2}")
    })?;
    ensure(first == second, || {
        "demo output differs between runs".into()
    })?;
    let report: Value = serde_json::from_slice(&first).map_err(|e| e.to_string())?;
    let lhs = report["lhs_minus_p1"]
        .as_f64()
        .ok_or("missing lhs_minus_p1")?;
    let rhs = report["rhs_norm"].as_f64().ok_or("missing rhs_norm")?;
    ensure(lhs <= 1e-12, || format!("‖P1∧(P2∨P3) − P1‖ = {lhs:.3e}"))?;
    ensure(rhs <= 1e-12, || format!("‖(P1∧P2)∨(P1∧P3)‖ = {rhs:.3e}"))?;
    ensure(
        report["lhs"]["rank"] == 1 && report["rhs"]["rank"] == 0,
        || "ranks".into(),
    )?;
    ensure(report["distributive"] == false, || {
        "reported distributive".into()
    })?;
    Ok(format!(
        "byte-identical reruns, residuals {lhs:.1e} and {rhs:.1e}"
    ))
}

fn jauch_meet_matches() -> Outcome {
    let mut rng = random::rng(4);
    let mut worst = 0.0_f64;
    for k in 0..500 {
        let n = 2 + k % 15;
        let rp = 1 + (7 * k) % n;
        let rq = 1 + (13 * k + 3) % n;
        let p = random::projector(&mut rng, n, rp);
        let q = random::projector(&mut rng, n, rq);
        let exact = meet(&p, &q).map_err(|e| e.to_string())?;
        let jm = jauch_meet(&p, &q, 1e-8, 10_000, JauchMode::Squaring)
            .map_err(|e| format!("pair {k} (n={n}): {e}"))?;
        let d = (jm.matrix - exact.matrix()).norm();
        ensure(d <= 1e-7, || {
            format!("pair {k} (n={n}, ranks {rp},{rq}): distance {d:.3e}")
        })?;
        worst = worst.max(d);
    }
    let mut worst_step = 0.0_f64;
    for theta in [PI / 7.0, PI / 4.0, 1.2] {
        let e1 = PureStateVector::from_real(&[1.0, 0.0]).map_err(|e| e.to_string())?;
        let v =
            PureStateVector::from_real(&[theta.cos(), theta.sin()]).map_err(|e| e.to_string())?;
        let p = Projector::onto_vector(e1.amplitudes());
        let q = Projector::onto_vector(v.amplitudes());
        let jm =
            jauch_meet(&p, &q, 1e-14, 100_000, JauchMode::Linear).map_err(|e| e.to_string())?;
        for (i, norm) in jm.norms.iter().enumerate() {
            let expected = theta.cos().powi(2 * (i as i32 + 1));
            worst_step = worst_step.max((norm - expected).abs());
        }
    }
    ensure(worst_step <= 1e-10, || {
        format!("cos²ⁿθ deviation {worst_step:.3e}")
    })?;
    Ok(format!(
        "500 pairs, max distance {worst:.2e}; C² iterate norms within {worst_step:.2e} of cos²ⁿθ"
    ))
}

fn gleason_roundtrip() -> Outcome {
    let mut rng = random::rng(5);
    let mut worst = 0.0_f64;
    for k in 0..200 {
        let n = 3 + k % 6;
        let rank = 1 + k % n;
        let rho = random::density(&mut rng, n, rank);
        let assignments =
            simulate_assignments(&rho, &tomography_frame(n)).map_err(|e| e.to_string())?;
        let fit = gleason_fit(&assignments, DEFAULT_FIT_TOL).map_err(|e| e.to_string())?;
        let err = (fit.state.matrix() - rho.matrix()).norm();
        ensure(err <= 1e-8, || {
            format!("state {k} (n={n}): recovery {err:.3e}")
        })?;
        worst = worst.max(err);
    }
    let mut found = 0;
    for k in 0..100u64 {
        let n = 3 + (k as usize) % 4;
        let rho = random::density(&mut rng, n, 1 + (k as usize) % n);
        if let Ok(w) = kochen_specker_witness(&rho, k) {
            if w.probability >= KS_MARGIN && w.probability <= 1.0 - KS_MARGIN {
                found += 1;
            }
        }
    }
    ensure(found == 100, || format!("witnesses for {found}/100 states"))?;
    Ok(format!(
        "200 states, max recovery error {worst:.2e}; witnesses 100/100"
    ))
}

fn conjugated_generators(rng: &mut random::FixtureRng, n: usize, kind: usize) -> Vec<CMatrix> {
    let u = random::unitary(rng, n).into_matrix();
    let mut gens = match kind {
        0 => vec![random::hermitian(rng, n).into_matrix()],
        1 => vec![
            random::hermitian(rng, n).into_matrix(),
            random::hermitian(rng, n).into_matrix(),
        ],
        _ => {
            let split = n / 2;
            let mut blocks = Vec::new();
            for _ in 0..2 {
                let mut m = CMatrix::zeros(n, n);
                let a = random::hermitian(rng, split).into_matrix();
                let b = random::hermitian(rng, n - split).into_matrix();
                m.view_mut((0, 0), (split, split)).copy_from(&a);
                m.view_mut((split, split), (n - split, n - split))
                    .copy_from(&b);
                blocks.push(m);
            }
            blocks
        }
    };
    for g in &mut gens {
        *g = &u * &*g * u.adjoint();
    }
    gens
}

fn commutant_dimensions() -> Outcome {
    for n in 2..=6 {
        let full = commutant(&matrix_units(n), n).map_err(|e| e.to_string())?;
        ensure(full.dimension() == 1, || {
            format!("commutant of M_{n} has dim {}", full.dimension())
        })?;
        let diag =
            commutant(MatrixStarAlgebra::diagonal(n).basis(), n).map_err(|e| e.to_string())?;
        ensure(diag.dimension() == n, || {
            format!("commutant of diagonals in M_{n}: {}", diag.dimension())
        })?;
    }
    let blocks = MatrixStarAlgebra::block_diagonal(&[2, 3]);
    let z = center(&blocks).map_err(|e| e.to_string())?;
    ensure(z.dimension() == 2, || {
        format!("center of M_2 ⊕ M_3 has dim {}", z.dimension())
    })?;
    ensure(!is_factor(&blocks).map_err(|e| e.to_string())?, || {
        "M_2 ⊕ M_3 reported a factor".into()
    })?;
    let mut rng = random::rng(6);
    let mut worst = 0.0_f64;
    for k in 0..100 {
        let n = 2 + k % 7;
        let gens = conjugated_generators(&mut rng, n, k % 3);
        let dc = double_commutant(&gens, n).map_err(|e| e.to_string())?;
        let wc = word_closure(&gens, n).map_err(|e| e.to_string())?;
        let angle = dc
            .max_principal_angle(&wc)
            .ok_or_else(|| format!("set {k}: dims {} vs {}", dc.dimension(), wc.dimension()))?;
        ensure(angle <= 1e-8, || {
            format!("set {k} (n={n}): principal angle {angle:.3e}")
        })?;
        worst = worst.max(angle);
    }
    Ok(format!(
        "fixtures exact; 100 generating sets, max principal angle {worst:.2e}"
    ))
}

fn superselection() -> Outcome {
    let (code, out) = run_cli(&["demo", "--name", "electric-charge-sectors"]);
    ensure(code == 0, || format!("exit code {code}"))?;
    let report: Value = serde_json::from_slice(&out).map_err(|e| e.to_string())?;
    let sectors = report["sectors"].as_array().ok_or("missing sectors")?;
    ensure(sectors.len() == 2, || format!("{} sectors", sectors.len()))?;
    let mut labels = Vec::new();
    for s in sectors {
        ensure(s["dim"] == 2, || format!("sector dim {}", s["dim"]))?;
        ensure(s["commutant_dim"] == 1, || {
            format!("sector commutant dim {}", s["commutant_dim"])
        })?;
        let defect = s["charge_defect"].as_f64().ok_or("missing charge_defect")?;
        ensure(defect <= 1e-12, || format!("charge defect {defect:.3e}"))?;
        labels.push(s["label"][0].as_f64().ok_or("missing label")?);
    }
    labels.sort_by(f64::total_cmp);
    ensure(
        (labels[0] + 1.0).abs() <= 1e-12 && (labels[1] - 1.0).abs() <= 1e-12,
        || format!("charges {labels:?}"),
    )?;
    Ok("two irreducible sectors of dim 2 with charges ±1".into())
}

fn noether_equivalence() -> Outcome {
    let mut rng = random::rng(8);
    let (mut all_true, mut all_false) = (0, 0);
    for k in 0..500 {
        let n = 2 + k % 7;
        let h = random::hermitian(&mut rng, n);
        let a = if k % 2 == 0 {
            // A = f(H)
            let pvm = spectral_decompose(&h, DEFAULT_CLUSTER_TOL).map_err(|e| e.to_string())?;
            let f = pvm.sample(|l| c(l[0] * l[0] - 0.5 * l[0] + (0.3 * l[0]).sin()));
            herm(func_calculus(&pvm, &f).map_err(|e| e.to_string())?)
        } else {
            random::hermitian(&mut rng, n)
        };
        let report = noether_check(&a, &h, &DEFAULT_GRID, &DEFAULT_GRID, 1e-9)
            .map_err(|e| format!("pair {k}: {e}"))?;
        if k % 2 == 0 {
            ensure(report.all(), || {
                format!("A = f(H) pair {k} not conserved: {:?}", report.defects)
            })?;
        }
        if report.all() {
            all_true += 1;
        } else {
            all_false += 1;
        }
    }
    Ok(format!(
        "500 pairs agree ({all_true} all-true, {all_false} all-false)"
    ))
}

fn stone_roundtrip() -> Outcome {
    let mut rng = random::rng(9);
    let (mut worst_gen, mut worst_law) = (0.0_f64, 0.0_f64);
    for k in 0..100 {
        let n = 2 + k % 7;
        let raw = random::hermitian(&mut rng, n);
        let target = 0.5 + 9.5 * (k as f64) / 99.0;
        let h = raw.scale(target / operator_norm(raw.matrix()));
        let samples = sample_group(&h, &DEFAULT_STENCIL).map_err(|e| e.to_string())?;
        let g = generator_from_group(&samples, DEFAULT_RECON_TOL)
            .map_err(|e| format!("case {k}: {e}"))?;
        worst_gen = worst_gen.max((g.matrix() - h.matrix()).norm());
        let prop = Propagator::new(&h, 1.0).map_err(|e| e.to_string())?;
        for &s in &DEFAULT_GRID {
            for &t in &DEFAULT_GRID {
                let d =
                    (prop.at(s).matrix() * prop.at(t).matrix() - prop.at(s + t).matrix()).norm();
                worst_law = worst_law.max(d);
            }
        }
    }
    ensure(worst_gen <= 1e-6, || {
        format!("generator error {worst_gen:.3e}")
    })?;
    ensure(worst_law <= 1e-10, || {
        format!("group law residual {worst_law:.3e}")
    })?;
    Ok(format!(
        "‖H‖ ≤ 10: generator error {worst_gen:.2e}, group law {worst_law:.2e}"
    ))
}

fn dyson() -> Outcome {
    let [_, _, sz] = pauli();
    // commuting family f(τ)σ_z with f = cos, ∫₀¹ f = sin 1
    let nodes = 1001;
    let samples: Vec<(f64, HermitianOperator)> = (0..nodes)
        .map(|k| {
            let t = k as f64 / (nodes - 1) as f64;
            (t, herm(&sz * c(t.cos())))
        })
        .collect();
    let res = dyson_evolve(&samples, 0.0, 1.0, 8).map_err(|e| e.to_string())?;
    let exact = evolve_unitary(&herm(sz.clone()), 1.0_f64.sin()).map_err(|e| e.to_string())?;
    let commuting = (res.unitary.matrix() - exact.matrix()).norm();
    ensure(commuting <= 1e-6, || {
        format!("commuting family error {commuting:.3e}")
    })?;

    let mut rng = random::rng(10);
    let h = random::hermitian(&mut rng, 3);
    let h = h.scale(1.0 / operator_norm(h.matrix()));
    let constant: Vec<(f64, HermitianOperator)> =
        (0..=100).map(|k| (k as f64 / 200.0, h.clone())).collect();
    let res_c = dyson_evolve(&constant, 0.0, 0.5, 8).map_err(|e| e.to_string())?;
    let reference = evolve_unitary(&h, 0.5).map_err(|e| e.to_string())?;
    let constant_err = (res_c.unitary.matrix() - reference.matrix()).norm();
    ensure(constant_err <= res_c.truncation_bound, || {
        format!(
            "constant H error {constant_err:.3e} above bound {:.3e}",
            res_c.truncation_bound
        )
    })?;

    #[derive(serde::Deserialize)]
    struct Doc {
        t1: f64,
        t2: f64,
        samples: Vec<TimeSampleJson>,
    }
    let doc: Doc = parse(&fixture("dyson-noncommuting.json")).map_err(|e| e.to_string())?;
    let samples = doc
        .samples
        .iter()
        .map(|s| s.to_sample(1e-10))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let s8 = dyson_evolve(&samples, doc.t1, doc.t2, 8).map_err(|e| e.to_string())?;
    let s10 = dyson_evolve(&samples, doc.t1, doc.t2, 10).map_err(|e| e.to_string())?;
    let self_conv = (&s8.series - &s10.series).norm();
    ensure(self_conv <= 1e-8, || {
        format!("order 8 vs 10 difference {self_conv:.3e}")
    })?;
    Ok(format!(
        "commuting {commuting:.2e}, constant {constant_err:.2e} (bound {:.2e}), order 8 vs 10 {self_conv:.2e}",
        res_c.truncation_bound
    ))
}

fn truncated_ccr() -> Outcome {
    let mut worst = [0.0_f64; 4];
    for hbar in [1.0, 0.5] {
        for n in 2..=64 {
            let pair = build_truncated_pair(n, 1.0, 1.0, hbar).map_err(|e| e.to_string())?;
            let defect = operator_norm(&pair.ccr_defect());
            worst[0] = worst[0].max((defect - hbar * n as f64).abs());
            worst[1] = worst[1].max(trace(&pair.commutator()).norm());
            if n >= 4 {
                let g = heisenberg_uncertainty(&pair, &PureStateVector::basis(n, 0))
                    .map_err(|e| e.to_string())?;
                let f = heisenberg_uncertainty(&pair, &PureStateVector::basis(n, 1))
                    .map_err(|e| e.to_string())?;
                worst[2] = worst[2].max((g.product - hbar / 2.0).abs());
                worst[3] = worst[3].max((f.product - 1.5 * hbar).abs());
            }
        }
    }
    ensure(worst[0] <= 1e-10, || {
        format!("defect norm vs ħN {:.3e}", worst[0])
    })?;
    ensure(worst[1] <= 1e-12, || {
        format!("commutator trace {:.3e}", worst[1])
    })?;
    ensure(worst[2] <= 1e-10, || {
        format!("ground state product {:.3e}", worst[2])
    })?;
    ensure(worst[3] <= 1e-10, || {
        format!("Fock |1⟩ product {:.3e}", worst[3])
    })?;
    Ok(format!(
        "N = 2..64: defect {:.1e}, trace {:.1e}, ground {:.1e}, |1⟩ {:.1e}",
        worst[0], worst[1], worst[2], worst[3]
    ))
}

fn gns_dimension_law() -> Outcome {
    let mut rng = random::rng(12);
    let mut worst = 0.0_f64;
    for n in 2..=4 {
        let alg = AbstractStarAlgebra::full_matrix(n).map_err(|e| e.to_string())?;
        for r in 1..=n {
            let rho = random::density(&mut rng, n, r);
            let omega =
                AlgebraicState::from_density(&rho, &matrix_units(n)).map_err(|e| e.to_string())?;
            let triple = gns_construct(&alg, &omega).map_err(|e| e.to_string())?;
            ensure(triple.rep_dim == n * r, || {
                format!("n={n}, r={r}: rep_dim {}", triple.rep_dim)
            })?;
            let check = verify_gns(&triple, &alg, &omega, 1e-10).map_err(|e| e.to_string())?;
            ensure(check.expectation <= 1e-10, || {
                format!("expectation residual {:.3e}", check.expectation)
            })?;
            worst = worst.max(check.expectation);
            let pure_by_commutant = gns_commutant_dim(&triple).map_err(|e| e.to_string())? == 1;
            ensure(pure_by_commutant == is_pure(&rho, 1e-9), || {
                format!("purity mismatch n={n}, r={r}")
            })?;
        }
    }
    for name in ["gns-m2-pure", "gns-m2-trace"] {
        let (code, out) = run_cli(&["demo", "--name", name]);
        ensure(code == 0, || format!("{name} exit code {code}"))?;
        let report: Value = serde_json::from_slice(&out).map_err(|e| e.to_string())?;
        let agrees = report["checks"]
            .as_array()
            .and_then(|cs| {
                cs.iter()
                    .find(|c| c["name"] == "purity_agrees_with_density")
            })
            .map(|c| c["pass"] == true);
        ensure(agrees == Some(true), || {
            format!("{name}: purity check {agrees:?}")
        })?;
    }
    let paradox = mixed_to_vector_paradox_demo(&DensityState::maximally_mixed(2), 2)
        .map_err(|e| e.to_string())?;
    ensure(paradox.commutant_dim == 4, || {
        format!("tracial commutant dim {}", paradox.commutant_dim)
    })?;
    Ok(format!(
        "rep_dim = n·r for n ≤ 4, expectation residual {worst:.2e}, tracial M_2 commutant dim 4"
    ))
}

fn cross_module() -> Outcome {
    let mut rng = random::rng(13);
    let mut agree = 0;
    let mut commuting = 0;
    for k in 0..200 {
        let n = 2 + k % 7;
        let (a, b) = if k % 2 == 0 {
            let u = random::unitary(&mut rng, n).into_matrix();
            let da: Vec<f64> = (0..n)
                .map(|i| (i as f64 * 0.7 + k as f64 * 0.13).sin() * 3.0)
                .collect();
            let db: Vec<f64> = (0..n)
                .map(|i| (i as f64 * 1.3 + k as f64 * 0.29).cos() * 2.0)
                .collect();
            (
                herm(&u * diag_real(&da) * u.adjoint()),
                herm(&u * diag_real(&db) * u.adjoint()),
            )
        } else {
            (
                random::hermitian(&mut rng, n),
                random::hermitian(&mut rng, n),
            )
        };
        let pa = spectral_decompose(&a, DEFAULT_CLUSTER_TOL).map_err(|e| e.to_string())?;
        let pb = spectral_decompose(&b, DEFAULT_CLUSTER_TOL).map_err(|e| e.to_string())?;
        let spectral = pvm_commute(&pa, &pb, 1e-9).map_err(|e| e.to_string())?;
        let groups =
            commuting_via_groups(&a, &b, &DEFAULT_GRID, 1e-9).map_err(|e| e.to_string())?;
        if spectral == groups {
            agree += 1;
        }
        if spectral {
            commuting += 1;
        }
    }
    ensure(agree == 200, || format!("agreement {agree}/200"))?;
    Ok(format!("200/200 pairs agree ({commuting} commuting)"))
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("spectral roundtrip", spectral_roundtrip),
        ("Pauli fixture", pauli_fixture),
        ("C² distributivity counterexample", c2_distributivity),
        ("Jauch meet equals exact meet", jauch_meet_matches),
        (
            "Gleason roundtrip and Kochen-Specker witnesses",
            gleason_roundtrip,
        ),
        ("commutant dimensions", commutant_dimensions),
        ("superselection sectors", superselection),
        ("Noether equivalence", noether_equivalence),
        ("Stone roundtrip", stone_roundtrip),
        ("Dyson evolution", dyson),
        ("truncated CCR", truncated_ccr),
        ("GNS dimension law", gns_dimension_law),
        ("cross-module commutation", cross_module),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {name}: {detail}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
