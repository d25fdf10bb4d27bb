use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use polycoef::exactalg::{ModuleInvariants, Ring};

use crate::spec::encode_coeff;

/// Structured result of one command.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    /// SHA-256 of the spec bytes followed by the normalised arguments.
    pub inputs_digest: String,
    pub seed: Option<u64>,
    pub passed: bool,
    pub results: Value,
    /// Wall-clock milliseconds; present only when requested, since it would
    /// break byte-identical reruns.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

/// What a command hands back before it is wrapped in a report.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub passed: bool,
    pub results: Value,
    pub text: Vec<String>,
}

impl Outcome {
    pub fn new(passed: bool, results: Value, text: Vec<String>) -> Self {
        Outcome {
            passed,
            results,
            text,
        }
    }
}

pub fn digest(spec: &[u8], args: &str) -> String {
    let mut h = Sha256::new();
    h.update(spec);
    h.update([0u8]);
    h.update(args.as_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

pub fn invariants_json<R: Ring>(inv: &ModuleInvariants<R>) -> Value {
    json!({
        "torsion": inv.torsion.iter().map(encode_coeff).collect::<Vec<_>>(),
        "free_rank": inv.free_rank,
        "display": inv.to_string(),
    })
}
