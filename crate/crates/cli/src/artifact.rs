//! Output artifacts: JSON documents and CSV tables with a JSON sidecar.

use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// Wraps a result with the schema version, the exact command line, the
/// parameters and the seed.
pub fn document(subcommand: &str, command: &[String], params: Value, seed: Option<u64>, result: Value) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "subcommand": subcommand,
        "command": command,
        "params": params,
        "seed": seed,
        "result": result,
    })
}

pub fn to_json_string(v: &Value) -> Result<String, CliError> {
    mz_core::io::to_sorted_json(v).map_err(|e| CliError::Io(e.to_string()))
}

/// Writes `text` to `out`, or prints it when no path is given.
pub fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn emit_json(doc: &Value, out: Option<&Path>) -> Result<(), CliError> {
    emit(&to_json_string(doc)?, out)
}

/// Writes a CSV table and, when writing to a file, a `<file>.json` sidecar
/// holding the metadata document.
pub fn emit_csv(csv: &str, meta: &Value, out: Option<&Path>) -> Result<(), CliError> {
    emit(csv, out)?;
    if let Some(p) = out {
        let mut side = p.as_os_str().to_owned();
        side.push(".json");
        emit_json(meta, Some(Path::new(&side)))?;
    }
    Ok(())
}
