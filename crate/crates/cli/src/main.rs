// Copyright 2026 The oplattice Authors
// SPDX-License-Identifier: Apache-2.0

//! `oplattice` batch front end. Every subcommand reads JSON, writes a JSON
//! report and signals the outcome through its exit code.

mod commands;
mod demo;
mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use oplattice::json::MatrixJson;
use oplattice::HermitianOperator;
use serde_json::Value;

use commands::Config;
use report::{read_json, CliError, CliResult, EXIT_MALFORMED, EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE};

#[derive(Debug, Parser)]
#[command(
    name = "oplattice",
    version,
    about = "Matrix-scale quantum foundations toolkit"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Relative tolerance for validation and residual checks.
    #[arg(
        long,
        global = true,
        env = "OPLATTICE_TOL",
        default_value_t = 1e-10,
        allow_negative_numbers = true
    )]
    tol: f64,
    /// Reduced Planck constant.
    #[arg(
        long,
        global = true,
        default_value_t = 1.0,
        allow_negative_numbers = true
    )]
    hbar: f64,
    /// Seed for randomized fixtures.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Spectral measure of a Hermitian matrix.
    Spectral {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Apply a function through the spectral measure.
    Funcalc {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "f", value_enum)]
        function: commands::Function,
        /// Parameter of `cis`.
        #[arg(long, default_value_t = 1.0)]
        t: f64,
    },
    /// Meet, join, complements and compatibility of two projectors.
    Lattice {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Born probabilities of projectors in a state.
    Measure {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Lüders post-measurement state.
    Collapse {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Reconstruct a density operator from probability assignments.
    GleasonFit {
        #[arg(long = "in", required_unless_present = "n")]
        input: Option<PathBuf>,
        /// Round trip on a seeded random state of this dimension instead.
        #[arg(long, conflicts_with = "input")]
        n: Option<usize>,
    },
    /// Commutant, double commutant and center of a generating set.
    Commutant {
        #[arg(long = "in", alias = "algebra")]
        input: PathBuf,
    },
    /// Superselection sectors of central charges.
    Sectors {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Time evolution generated by a Hamiltonian.
    Evolve {
        #[arg(long = "in", alias = "hamiltonian", alias = "h")]
        input: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// Observable to carry into the Heisenberg picture.
        #[arg(long = "a")]
        observable: Option<PathBuf>,
    },
    /// The three equivalent forms of Noether's theorem.
    Noether {
        #[arg(long = "a")]
        observable: PathBuf,
        #[arg(long = "h", alias = "hamiltonian")]
        hamiltonian: PathBuf,
    },
    /// Time-ordered evolution from sampled Hamiltonians.
    Dyson {
        #[arg(long = "in", alias = "samples")]
        input: PathBuf,
        #[arg(long)]
        t1: Option<f64>,
        #[arg(long)]
        t2: Option<f64>,
        #[arg(long, default_value_t = 8)]
        order: usize,
    },
    /// Truncated oscillator canonical pair.
    Ccr {
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        m: f64,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
    },
    /// GNS representation of a state on an abstract *-algebra.
    Gns {
        #[arg(long = "in", required_unless_present_all = ["algebra", "state"], conflicts_with_all = ["algebra", "state"])]
        input: Option<PathBuf>,
        #[arg(long, requires = "state")]
        algebra: Option<PathBuf>,
        #[arg(long, requires = "algebra")]
        state: Option<PathBuf>,
    },
    /// Run a named fixture.
    Demo {
        #[arg(long, value_enum)]
        name: demo::Demo,
    },
}

fn hermitian(path: &Path, tol: f64) -> CliResult<HermitianOperator> {
    Ok(read_json::<MatrixJson>(path)?.to_hermitian(tol)?)
}

fn dispatch(cfg: &Config, command: &Command) -> CliResult<Value> {
    match command {
        Command::Spectral { input } => commands::spectral(cfg, &hermitian(input, cfg.tol)?),
        Command::Funcalc { input, function, t } => {
            commands::funcalc(cfg, &hermitian(input, cfg.tol)?, *function, *t)
        }
        Command::Lattice { input } => {
            let doc: commands::PairDoc = read_json(input)?;
            commands::lattice(
                cfg,
                &doc.p.to_projector(cfg.tol)?,
                &doc.q.to_projector(cfg.tol)?,
            )
        }
        Command::Measure { input } => commands::measure(cfg, &read_json(input)?),
        Command::Collapse { input } => commands::collapse(cfg, &read_json(input)?),
        Command::GleasonFit { input, n } => match (input, n) {
            (Some(path), _) => commands::gleason_from_assignments(cfg, &read_json(path)?),
            (None, Some(n)) => commands::gleason_random(cfg, *n),
            (None, None) => Err(CliError::Usage("gleason-fit needs --in or --n".into())),
        },
        Command::Commutant { input } => commands::commutant_report(cfg, &read_json(input)?),
        Command::Sectors { input } => commands::sectors(cfg, &read_json(input)?),
        Command::Evolve {
            input,
            t,
            observable,
        } => {
            let a = observable
                .as_deref()
                .map(|p| hermitian(p, cfg.tol))
                .transpose()?;
            commands::evolve(cfg, &hermitian(input, cfg.tol)?, *t, a.as_ref())
        }
        Command::Noether {
            observable,
            hamiltonian,
        } => commands::noether(
            cfg,
            &hermitian(observable, cfg.tol)?,
            &hermitian(hamiltonian, cfg.tol)?,
        ),
        Command::Dyson {
            input,
            t1,
            t2,
            order,
        } => commands::dyson(cfg, &read_json(input)?, *t1, *t2, *order),
        Command::Ccr { n, m, omega } => commands::ccr(cfg, *n, *m, *omega, cfg.hbar),
        Command::Gns {
            input,
            algebra,
            state,
        } => {
            let doc = match (input, algebra, state) {
                (Some(path), _, _) => read_json(path)?,
                (None, Some(a), Some(s)) => commands::GnsDoc {
                    algebra: read_json(a)?,
                    state: read_json(s)?,
                    density: None,
                },
                _ => {
                    return Err(CliError::Usage(
                        "gns needs --in, or --algebra with --state".into(),
                    ))
                }
            };
            commands::gns(cfg, &doc)
        }
        Command::Demo { name } => demo::run(cfg, *name),
    }
}

fn write_report(report: &Value, out: Option<&Path>) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(report).expect("reports serialize");
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Output(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Output(format!("cannot write to stdout: {e}"))),
    }
}

fn usage_exit_code(kind: ErrorKind) -> i32 {
    match kind {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
        ErrorKind::InvalidValue | ErrorKind::ValueValidation => EXIT_MALFORMED,
        _ => EXIT_USAGE,
    }
}

fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return usage_exit_code(e.kind());
        }
    };
    let common = &cli.common;
    let result = (|| {
        for (name, value) in [("tol", common.tol), ("hbar", common.hbar)] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(CliError::Invalid(format!(
                    "--{name} must be positive and finite, got {value}"
                )));
            }
        }
        let cfg = Config {
            tol: common.tol,
            hbar: common.hbar,
            seed: common.seed,
        };
        let report = dispatch(&cfg, &cli.command)?;
        write_report(&report, common.out.as_deref())?;
        Ok(report)
    })();
    match result {
        Ok(report) if report::all_checks_pass(&report) => EXIT_OK,
        Ok(_) => {
            eprintln!("error: a residual check exceeded its limit");
            EXIT_NUMERICAL
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn main() {
    std::process::exit(run(std::env::args_os()));
}
