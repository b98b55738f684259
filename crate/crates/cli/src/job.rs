//! Input decoding: matrices given inline as JSON or as a path to a JSON file.

use std::path::Path;

use dcsa_core::{Dcsa, Matrix, RatFunc, SplittingTower, TowerElem};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid JSON in {what}: {source}")]
    Json { what: &'static str, source: serde_json::Error },
    #[error("{what}: {message}")]
    Shape { what: &'static str, message: String },
    #[error("{what}: {source}")]
    Math { what: &'static str, source: dcsa_core::Error },
}

/// Inline JSON if it looks like JSON, otherwise a file to read.
fn load(arg: &str, what: &'static str) -> Result<Value, InputError> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('[') || trimmed.starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(Path::new(arg)).map_err(|source| InputError::Io { path: arg.into(), source })?
    };
    serde_json::from_str(&text).map_err(|source| InputError::Json { what, source })
}

fn entry_text(v: &Value, what: &'static str) -> Result<String, InputError> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(InputError::Shape { what, message: format!("matrix entries must be strings, got {other}") }),
    }
}

fn rows_of(v: &Value, what: &'static str) -> Result<Vec<Vec<String>>, InputError> {
    let rows = v.as_array().ok_or(InputError::Shape { what, message: "expected an array of rows".into() })?;
    rows.iter()
        .map(|r| {
            r.as_array()
                .ok_or(InputError::Shape { what, message: "each row must be an array".into() })?
                .iter()
                .map(|e| entry_text(e, what))
                .collect()
        })
        .collect()
}

fn parse_matrix<T: dcsa_core::Ring + std::str::FromStr<Err = dcsa_core::Error>>(
    v: &Value,
    what: &'static str,
) -> Result<Matrix<T>, InputError> {
    let rows = rows_of(v, what)?
        .into_iter()
        .map(|r| r.iter().map(|s| s.parse::<T>()).collect::<Result<Vec<T>, _>>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|source| InputError::Math { what, source })?;
    let m = Matrix::from_rows(rows).map_err(|source| InputError::Math { what, source })?;
    if !m.is_square() || m.rows() == 0 {
        return Err(InputError::Shape { what, message: format!("expected a square matrix, got {}×{}", m.rows(), m.cols()) });
    }
    Ok(m)
}

/// `P` as `[[expr, …], …]` or `{"n": n, "P": [[…]]}`.
pub fn read_algebra(arg: &str) -> Result<Dcsa, InputError> {
    let v = load(arg, "--P")?;
    let (matrix, n) = match &v {
        Value::Object(o) => {
            let p = o.get("P").ok_or(InputError::Shape { what: "--P", message: "object input needs a \"P\" key".into() })?;
            (p.clone(), o.get("n").and_then(Value::as_u64))
        }
        _ => (v.clone(), None),
    };
    let p: Matrix<RatFunc> = parse_matrix(&matrix, "--P")?;
    if let Some(n) = n {
        if n as usize != p.rows() {
            return Err(InputError::Shape { what: "--P", message: format!("n = {n} but P is {}×{}", p.rows(), p.cols()) });
        }
    }
    Dcsa::new(p).map_err(|source| InputError::Math { what: "--P", source })
}

pub fn read_rational_matrix(arg: &str, what: &'static str) -> Result<Matrix<RatFunc>, InputError> {
    parse_matrix(&load(arg, what)?, what)
}

pub fn read_tower_matrix(arg: &str, what: &'static str) -> Result<Matrix<TowerElem>, InputError> {
    parse_matrix(&load(arg, what)?, what)
}

/// A JSON list of hyperexponential generators, e.g. `["(x)^(1/2)"]`.
pub fn read_tower(arg: &str) -> Result<SplittingTower, InputError> {
    let v = load(arg, "--tower")?;
    let items = v
        .as_array()
        .ok_or(InputError::Shape { what: "--tower", message: "expected a list of generators".into() })?
        .iter()
        .map(|e| entry_text(e, "--tower"))
        .collect::<Result<Vec<_>, _>>()?;
    SplittingTower::parse_list(&items).map_err(|source| InputError::Math { what: "--tower", source })
}
