// Copyright 2026 The oplattice Authors
// SPDX-License-Identifier: Apache-2.0

//! Report assembly and the error-to-exit-code mapping.

use std::fmt;
use std::path::Path;

use oplattice::error::{Error, ErrorClass};
use oplattice::json::MatrixJson;
use oplattice::linalg::CMatrix;
use oplattice::Projector;
use serde::de::DeserializeOwned;
use serde_json::{json, Map, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_MALFORMED: i32 = 65;
pub const EXIT_IO: i32 = 74;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    /// Rejected configuration, such as a non-positive tolerance.
    Invalid(String),
    Malformed(String),
    Core(Error),
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Invalid(_) => EXIT_VALIDATION,
            CliError::Malformed(_) => EXIT_MALFORMED,
            CliError::Core(Error::Malformed(_)) => EXIT_MALFORMED,
            CliError::Core(e) => match e.class() {
                ErrorClass::Validation => EXIT_VALIDATION,
                ErrorClass::Numerical => EXIT_NUMERICAL,
            },
            CliError::Output(_) => EXIT_IO,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m)
            | CliError::Invalid(m)
            | CliError::Malformed(m)
            | CliError::Output(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Malformed(format!("cannot read {}: {e}", path.display())))?;
    parse_json(&text, &path.display().to_string())
}

pub fn parse_json<T: DeserializeOwned>(text: &str, origin: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| CliError::Malformed(format!("{origin}: {e}")))
}

/// Residual checks asserted by a command. A failed check turns the exit
/// code into 3 but the report is still written.
#[derive(Debug, Default)]
pub struct Checks(Vec<Value>);

impl Checks {
    pub fn at_most(&mut self, name: &str, value: f64, limit: f64) {
        self.0.push(json!({
            "name": name,
            "value": value,
            "limit": limit,
            "pass": value <= limit,
        }));
    }

    pub fn holds(&mut self, name: &str, pass: bool) {
        self.0.push(json!({ "name": name, "pass": pass }));
    }

    pub fn into_value(self) -> Value {
        Value::Array(self.0)
    }
}

/// Top-level report: a command name, the tolerance used, named sections and
/// the list of checks.
pub struct Report {
    fields: Map<String, Value>,
    pub checks: Checks,
}

impl Report {
    pub fn new(command: &str, tol: f64) -> Self {
        let mut fields = Map::new();
        fields.insert("command".into(), json!(command));
        fields.insert("tol".into(), json!(tol));
        Self {
            fields,
            checks: Checks::default(),
        }
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.fields.insert(key.into(), value.into());
        self
    }

    pub fn finish(mut self) -> Value {
        self.fields
            .insert("checks".into(), self.checks.into_value());
        Value::Object(self.fields)
    }
}

pub fn all_checks_pass(report: &Value) -> bool {
    report["checks"]
        .as_array()
        .is_none_or(|cs| cs.iter().all(|c| c["pass"] == Value::Bool(true)))
}

pub fn matrix(m: &CMatrix) -> Value {
    serde_json::to_value(MatrixJson::from(m)).expect("matrix serializes")
}

pub fn projector(p: &Projector) -> Value {
    serde_json::to_value(oplattice::json::ProjectorJson::from(p)).expect("projector serializes")
}

pub fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_error_class() {
        assert_eq!(
            CliError::Core(Error::NotHermitian { defect: 1.0 }).exit_code(),
            2
        );
        assert_eq!(CliError::Core(Error::ConvergenceFailure).exit_code(), 3);
        assert_eq!(CliError::Core(Error::Malformed("x".into())).exit_code(), 65);
        assert_eq!(CliError::Usage("x".into()).exit_code(), 64);
    }

    #[test]
    fn failed_check_is_detected() {
        let mut r = Report::new("x", 1e-10);
        r.checks.at_most("a", 1.0, 2.0);
        assert!(all_checks_pass(&r.finish()));
        let mut r = Report::new("x", 1e-10);
        r.checks.at_most("a", f64::NAN, 2.0);
        assert!(!all_checks_pass(&r.finish()));
    }
}
