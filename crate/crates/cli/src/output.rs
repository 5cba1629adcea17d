//! File reading and the shared JSON envelope.

use crate::CliError;
use serde::Serialize;
use serde_json::{json, Value};
use std::path::Path;
use widthlab_core::tri::{parse_triangulation, Homology};
use widthlab_core::Triangulation;

/// Bumped whenever a field is renamed or removed.
pub const FORMAT_VERSION: u32 = 1;

pub fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_triangulation(path: &Path) -> Result<Triangulation, CliError> {
    let text = read_file(path)?;
    parse_triangulation(&text).map_err(|e| invalid(path, e))
}

pub fn invalid(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Invalid(format!("{}: {e}", path.display()))
}

pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

/// Wraps a command's payload as `{"command", "format_version", ...}`.
pub fn envelope(command: &str, payload: Value) -> Value {
    let mut out = json!({ "command": command, "format_version": FORMAT_VERSION });
    if let (Value::Object(dst), Value::Object(src)) = (&mut out, payload) {
        dst.extend(src);
    }
    out
}

pub fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json"));
}

/// `0`, `Z`, `Z/5`, `Z^2 + Z/2`, ...
pub fn homology_text(h: &Homology) -> String {
    let mut parts = Vec::new();
    match h.betti {
        0 => {}
        1 => parts.push("Z".to_string()),
        b => parts.push(format!("Z^{b}")),
    }
    parts.extend(h.torsion.iter().map(|t| format!("Z/{t}")));
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}
