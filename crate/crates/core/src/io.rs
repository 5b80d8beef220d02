//! Point-set CSV and sorted JSON helpers.

use std::fmt::Write as _;

use serde::Serialize;

use crate::nets::PointSet;
use crate::{Error, Result};

/// Parses one point per line, comma-separated, no header. Blank lines and lines
/// starting with `#` are skipped. All rows must have the same length.
pub fn read_points_csv(text: &str) -> Result<PointSet> {
    let mut dim = None;
    let mut flat = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row: Vec<f64> = line
            .split(',')
            .map(|s| {
                s.trim().parse::<f64>().map_err(|e| Error::Parse {
                    line: i + 1,
                    msg: format!("{s:?}: {e}"),
                })
            })
            .collect::<Result<_>>()?;
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::Parse { line: i + 1, msg: "non-finite coordinate".into() });
        }
        match dim {
            None => dim = Some(row.len()),
            Some(d) if d != row.len() => {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("expected {d} columns, found {}", row.len()),
                })
            }
            _ => {}
        }
        flat.extend(row);
    }
    match dim {
        Some(d) => PointSet::from_flat(d, flat),
        None => Err(Error::InsufficientPoints { needed: 1, got: 0 }),
    }
}

/// Writes one point per line with LF endings and shortest round-trip floats.
pub fn write_points_csv(ps: &PointSet) -> String {
    let mut out = String::new();
    for x in ps.iter() {
        for (j, v) in x.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{v}");
        }
        out.push('\n');
    }
    out
}

/// Pretty JSON with object keys in sorted order and a trailing newline.
pub fn to_sorted_json<T: Serialize>(value: &T) -> Result<String> {
    // serde_json::Value uses a BTreeMap unless `preserve_order` is enabled.
    let v = serde_json::to_value(value).map_err(|e| Error::Invalid(e.to_string()))?;
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| Error::Invalid(e.to_string()))?;
    s.push('\n');
    Ok(s)
}
