//! Parameter sweeps: `a:b:step` (inclusive), comma lists, or single values.

/// Parses `a:b:step`, `x,y,z` or `x` into a list of floats.
pub fn parse_f64_list(s: &str) -> Result<Vec<f64>, String> {
    let s = s.trim();
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("range {s:?} must have the form a:b:step"));
        }
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
        let (a, b, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if !(step != 0.0 && step.is_finite() && a.is_finite() && b.is_finite()) {
            return Err(format!("range {s:?} needs finite bounds and a nonzero step"));
        }
        if (b - a) * step < 0.0 {
            return Err(format!("range {s:?}: step points away from the end"));
        }
        let count = ((b - a) / step + 1e-9).floor() as usize + 1;
        if count > 1_000_000 {
            return Err(format!("range {s:?} has too many values"));
        }
        return Ok((0..count).map(|i| a + i as f64 * step).collect());
    }
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect()
}

/// Integer version of [`parse_f64_list`]; every value must be a nonnegative integer.
pub fn parse_usize_list(s: &str) -> Result<Vec<usize>, String> {
    parse_f64_list(s)?
        .into_iter()
        .map(|v| {
            let r = v.round();
            if (v - r).abs() > 1e-9 || r < 0.0 {
                Err(format!("{v} is not a nonnegative integer"))
            } else {
                Ok(r as usize)
            }
        })
        .collect()
}
