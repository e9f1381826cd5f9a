//! Versioned, rank-tagged portable text format for persisted polynomial
//! tables. One header line, then one entry per line:
//!
//! ```text
//! kl-cache v1 n=4
//! 1,3,2,4;3,4,1,2;1,1
//! ```
//!
//! Entries are `x-window;w-window;coefficients`, comma-separated integers,
//! sorted by window pair so a save/load round trip is byte-identical.

use std::fs;
use std::path::Path;

use kl_core::{IntPolynomial, KlCache};

use crate::CliError;

const FORMAT_TAG: &str = "kl-cache";
const FORMAT_VERSION: &str = "v1";

pub fn load(path: &Path, engine: &KlCache) -> Result<usize, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Failure(format!("cannot read cache {}: {e}", path.display())))?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| CliError::Usage(format!("cache {}: empty file", path.display())))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    match fields.as_slice() {
        [FORMAT_TAG, FORMAT_VERSION, rank] => {
            let expect = format!("n={}", engine.context().rank());
            if *rank != expect {
                return Err(CliError::Usage(format!(
                    "cache {}: rank tag {rank} does not match requested {expect}",
                    path.display()
                )));
            }
        }
        [FORMAT_TAG, version, ..] => {
            return Err(CliError::Usage(format!(
                "cache {}: unsupported format version {version} (this build reads {FORMAT_VERSION})",
                path.display()
            )));
        }
        _ => {
            return Err(CliError::Usage(format!(
                "cache {}: malformed header {header:?}",
                path.display()
            )));
        }
    }
    let mut count = 0;
    for (lineno, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split(';');
        let (x, w, coeffs) = match (parts.next(), parts.next(), parts.next(), parts.next()) {
            (Some(x), Some(w), Some(c), None) => (x, w, c),
            _ => {
                return Err(CliError::Usage(format!(
                    "cache {} line {}: expected x;w;coefficients",
                    path.display(),
                    lineno + 1
                )))
            }
        };
        let parse_ints = |field: &str, what: &str| -> Result<Vec<i64>, CliError> {
            if field.is_empty() {
                return Ok(Vec::new());
            }
            field
                .split(',')
                .map(|tok| {
                    tok.parse::<i64>().map_err(|_| {
                        CliError::Usage(format!(
                            "cache {} line {}: bad integer {tok:?} in {what}",
                            path.display(),
                            lineno + 1
                        ))
                    })
                })
                .collect()
        };
        let x = parse_ints(x, "x window")?;
        let w = parse_ints(w, "w window")?;
        let coeffs = parse_ints(coeffs, "coefficients")?;
        engine
            .insert_loaded(x, w, IntPolynomial::from_coeffs(coeffs))
            .map_err(|e| {
                CliError::Usage(format!(
                    "cache {} line {}: {e}",
                    path.display(),
                    lineno + 1
                ))
            })?;
        count += 1;
    }
    Ok(count)
}

pub fn save(path: &Path, engine: &KlCache) -> Result<usize, CliError> {
    let entries = engine.entries_sorted();
    let mut out = String::new();
    out.push_str(&format!(
        "{FORMAT_TAG} {FORMAT_VERSION} n={}\n",
        engine.context().rank()
    ));
    for ((x, w), p) in &entries {
        let join = |v: &[i64]| {
            v.iter()
                .map(|k| k.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        out.push_str(&format!("{};{};{}\n", join(x), join(w), join(p.coeffs())));
    }
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| {
                CliError::Failure(format!("cannot create {}: {e}", dir.display()))
            })?;
        }
    }
    fs::write(path, out)
        .map_err(|e| CliError::Failure(format!("cannot write cache {}: {e}", path.display())))?;
    Ok(entries.len())
}
