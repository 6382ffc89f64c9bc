//! Parsing of vector files and grid flags.

use std::fs;
use std::path::Path;

use crate::failure::Failure;

/// One decimal per line; blank lines and lines starting with `#` are
/// skipped.
pub fn read_values(flag: &str, path: &Path) -> Result<Vec<f64>, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("--{flag}: cannot read {}: {e}", path.display())))?;
    parse_values(flag, &text)
}

pub fn parse_values(flag: &str, text: &str) -> Result<Vec<f64>, Failure> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: f64 = line.parse().map_err(|_| {
            Failure::usage(format!(
                "--{flag}: line {}: invalid number `{line}`",
                lineno + 1
            ))
        })?;
        out.push(v);
    }
    if out.is_empty() {
        return Err(Failure::usage(format!("--{flag}: file contains no values")));
    }
    Ok(out)
}

/// Comma-separated list of positive reals.
pub fn parse_list(flag: &str, text: &str) -> Result<Vec<f64>, Failure> {
    let values = text
        .split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<f64>()
                .map_err(|_| Failure::usage(format!("--{flag}: invalid number `{s}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    check_positive(flag, &values)?;
    Ok(values)
}

/// `lo:hi:n`, expanded to `n` geometrically spaced points with both
/// endpoints exact.
pub fn parse_log_grid(flag: &str, text: &str) -> Result<Vec<f64>, Failure> {
    let bad = || Failure::usage(format!("--{flag}: expected lo:hi:n, got `{text}`"));
    let parts: Vec<&str> = text.split(':').map(str::trim).collect();
    let [lo, hi, n] = parts.as_slice() else {
        return Err(bad());
    };
    let lo: f64 = lo.parse().map_err(|_| bad())?;
    let hi: f64 = hi.parse().map_err(|_| bad())?;
    let n: usize = n.parse().map_err(|_| bad())?;
    if n == 0 {
        return Err(Failure::usage(format!("--{flag}: n must be at least 1")));
    }
    check_positive(flag, &[lo, hi])?;
    if n == 1 {
        return Ok(vec![lo]);
    }
    let (a, b) = (lo.log10(), hi.log10());
    let step = (b - a) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| match i {
            0 => lo,
            _ if i + 1 == n => hi,
            _ => 10f64.powf(a + step * i as f64),
        })
        .collect())
}

fn check_positive(flag: &str, values: &[f64]) -> Result<(), Failure> {
    match values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        Some(v) => Err(Failure::usage(format!(
            "--{flag}: value {v} must be positive and finite"
        ))),
        None => Ok(()),
    }
}

/// Resolves a `--x` list / `--log-x` pair, falling back to `default`.
pub fn grid_from(
    list_flag: &str,
    list: Option<&str>,
    log_flag: &str,
    log: Option<&str>,
    default: &[f64],
) -> Result<Vec<f64>, Failure> {
    match (list, log) {
        (Some(l), None) => parse_list(list_flag, l),
        (None, Some(g)) => parse_log_grid(log_flag, g),
        (None, None) => Ok(default.to_vec()),
        (Some(_), Some(_)) => Err(Failure::usage(format!(
            "--{list_flag} and --{log_flag} are exclusive"
        ))),
    }
}
