// Copyright 2026 The oplattice Authors
// SPDX-License-Identifier: Apache-2.0

//! Named demos backed by the JSON fixtures in `fixtures/`.

use clap::ValueEnum;
use oplattice::json::MatrixJson;
use oplattice::lattice::{join, meet};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::commands::{self, Config, GnsDoc, SectorsDoc};
use crate::report::{parse_json, projector, CliResult, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Demo {
    C2Distributivity,
    SpinCcr,
    ElectricChargeSectors,
    GnsM2Pure,
    GnsM2Trace,
    TruncatedOscillator,
}

impl Demo {
    pub fn name(self) -> &'static str {
        match self {
            Demo::C2Distributivity => "c2-distributivity",
            Demo::SpinCcr => "spin-ccr",
            Demo::ElectricChargeSectors => "electric-charge-sectors",
            Demo::GnsM2Pure => "gns-m2-pure",
            Demo::GnsM2Trace => "gns-m2-trace",
            Demo::TruncatedOscillator => "truncated-oscillator",
        }
    }

    pub fn fixture(self) -> &'static str {
        match self {
            Demo::C2Distributivity => include_str!("../fixtures/c2-distributivity.json"),
            Demo::SpinCcr => include_str!("../fixtures/spin-ccr.json"),
            Demo::ElectricChargeSectors => include_str!("../fixtures/electric-charge-sectors.json"),
            Demo::GnsM2Pure => include_str!("../fixtures/gns-m2-pure.json"),
            Demo::GnsM2Trace => include_str!("../fixtures/gns-m2-trace.json"),
            Demo::TruncatedOscillator => include_str!("../fixtures/truncated-oscillator.json"),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TripleDoc {
    projectors: [MatrixJson; 3],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpinDoc {
    hbar: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OscillatorDoc {
    n: usize,
    m: f64,
    omega: f64,
    hbar: f64,
}

pub fn run(cfg: &Config, demo: Demo) -> CliResult<Value> {
    let origin = format!("fixture {}", demo.name());
    let text = demo.fixture();
    let mut report = match demo {
        Demo::C2Distributivity => distributivity(cfg, &parse_json(text, &origin)?)?,
        Demo::SpinCcr => {
            let doc: SpinDoc = parse_json(text, &origin)?;
            commands::spin(cfg, doc.hbar)?
        }
        Demo::ElectricChargeSectors => {
            commands::sectors(cfg, &parse_json::<SectorsDoc>(text, &origin)?)?
        }
        Demo::GnsM2Pure | Demo::GnsM2Trace => {
            commands::gns(cfg, &parse_json::<GnsDoc>(text, &origin)?)?
        }
        Demo::TruncatedOscillator => {
            let doc: OscillatorDoc = parse_json(text, &origin)?;
            commands::ccr(cfg, doc.n, doc.m, doc.omega, doc.hbar)?
        }
    };
    report["demo"] = json!(demo.name());
    Ok(report)
}

/// `P₁ ∧ (P₂ ∨ P₃)` against `(P₁ ∧ P₂) ∨ (P₁ ∧ P₃)`.
fn distributivity(cfg: &Config, doc: &TripleDoc) -> CliResult<Value> {
    let [p1, p2, p3] = [0, 1, 2].map(|k| doc.projectors[k].to_projector(cfg.tol));
    let (p1, p2, p3) = (p1?, p2?, p3?);
    let j23 = join(&p2, &p3)?;
    let lhs = meet(&p1, &j23)?;
    let m12 = meet(&p1, &p2)?;
    let m13 = meet(&p1, &p3)?;
    let rhs = join(&m12, &m13)?;
    let lhs_minus_p1 = (lhs.matrix() - p1.matrix()).norm();
    let rhs_norm = rhs.matrix().norm();
    let gap = (lhs.matrix() - rhs.matrix()).norm();
    let mut r = Report::new("demo", cfg.tol);
    r.set("join_p2_p3", projector(&j23))
        .set("lhs", projector(&lhs))
        .set("meet_p1_p2", projector(&m12))
        .set("meet_p1_p3", projector(&m13))
        .set("rhs", projector(&rhs))
        .set("lhs_minus_p1", lhs_minus_p1)
        .set("rhs_norm", rhs_norm)
        .set("distributive", gap <= cfg.tol);
    r.checks.at_most("lhs_equals_p1", lhs_minus_p1, cfg.tol);
    r.checks.at_most("rhs_is_zero", rhs_norm, cfg.tol);
    Ok(r.finish())
}
