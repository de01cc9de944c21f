//! Report envelope and rendering helpers shared by the CLI subcommands.
//! JSON output is versioned and machine-oriented (0-based indices, rationals
//! as "p/q" strings); table output is for humans (1-based labels).

use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

/// Wraps a command body in the versioned report envelope.
pub fn envelope(command: &str, body: Value) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "result": body,
    })
}

/// Machine-readable error object, emitted under the same envelope.
pub fn error_envelope(command: &str, kind: &str, message: &str) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "error": { "kind": kind, "message": message },
    })
}

pub fn rational_str(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// 1-based rendering of an index list for table output.
pub fn indices_1based(idx: &[usize]) -> String {
    let parts: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Simple aligned two-column table.
pub fn two_column(rows: &[(String, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter()
        .map(|(k, v)| format!("{:width$}  {}", k, v, width = width))
        .collect::<Vec<_>>()
        .join("\n")
}
