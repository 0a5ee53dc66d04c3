use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{CliError, ErrorKind};
use crate::formats::FORMAT;

/// Result of a command: the payload and whether every checked identity held.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub results: Value,
    pub verified: bool,
}

impl Outcome {
    pub fn verified(results: Value) -> Self {
        Outcome { results, verified: true }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report<'a> {
    pub format: u32,
    pub command: &'a str,
    pub inputs_digest: String,
    pub seed: u64,
    pub results: &'a Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorReport<'a> {
    pub format: u32,
    pub command: &'a str,
    pub error_kind: ErrorKind,
    pub detail: &'a str,
}

/// SHA-256 of the compact JSON serialization (object keys are sorted).
pub fn digest(inputs: &Value) -> String {
    let bytes = serde_json::to_vec(inputs).expect("values serialize");
    hex::encode(Sha256::digest(&bytes))
}

pub fn render(command: &str, inputs: &Value, seed: u64, outcome: &Outcome) -> String {
    let r = Report { format: FORMAT, command, inputs_digest: digest(inputs), seed, results: &outcome.results };
    let mut s = serde_json::to_string_pretty(&r).expect("report serializes");
    s.push('\n');
    s
}

pub fn render_error(command: &str, err: &CliError) -> String {
    let r = ErrorReport { format: FORMAT, command, error_kind: err.kind, detail: &err.detail };
    let mut s = serde_json::to_string_pretty(&r).expect("report serializes");
    s.push('\n');
    s
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION_FAILED: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;
