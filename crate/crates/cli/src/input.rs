//! Reading operands: files or inline JSON, with a forgiving matrix format.

use std::fs;

use gaugenorm::extreme2::Profile;
use gaugenorm::{CMatrix, NormSpec, C64};
use serde_json::Value;

use crate::Failure;

/// Reads `arg` as a file, or as inline JSON when it starts with `{` or `[`.
pub fn load_json(arg: &str) -> Result<Value, Failure> {
    let text = if matches!(arg.trim_start().chars().next(), Some('{' | '[')) {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| Failure::parse(format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::parse(format!("{arg}: {e}")))
}

pub fn load_spec(arg: &str) -> Result<NormSpec, Failure> {
    let v = load_json(arg)?;
    let spec: NormSpec = serde_json::from_value(v).map_err(|e| Failure::parse(format!("norm spec: {e}")))?;
    spec.validate().map_err(|e| Failure::parse(e.to_string()))?;
    Ok(spec)
}

pub enum Operand {
    Matrix(CMatrix),
    Vector(Vec<C64>),
}

pub fn load_operand(arg: &str) -> Result<Operand, Failure> {
    let v = load_json(arg)?;
    match v.get("vector") {
        Some(x) => Ok(Operand::Vector(parse_vector(x)?)),
        None => Ok(Operand::Matrix(parse_matrix(&v)?)),
    }
}

pub fn load_matrix(arg: &str) -> Result<CMatrix, Failure> {
    parse_matrix(&load_json(arg)?)
}

/// A profile, or the profile of a norm spec on `M_2`.
pub fn load_profile(arg: &str) -> Result<Profile, Failure> {
    let v = load_json(arg)?;
    if v.get("kind").and_then(Value::as_str) == Some("piecewise") {
        return serde_json::from_value(v).map_err(|e| Failure::parse(format!("profile: {e}")));
    }
    if let Ok(p) = serde_json::from_value::<Profile>(v.clone()) {
        return Ok(p);
    }
    let spec: NormSpec = serde_json::from_value(v)
        .map_err(|e| Failure::parse(format!("expected a profile or a norm spec: {e}")))?;
    gaugenorm::extreme2::profile_of(&spec).map_err(Failure::from)
}

fn scalar(v: &Value) -> Result<C64, Failure> {
    match v {
        Value::Number(x) => x
            .as_f64()
            .map(|re| C64::new(re, 0.0))
            .ok_or_else(|| Failure::parse(format!("bad number {x}"))),
        Value::Array(pair) if pair.len() == 2 => {
            let re = pair[0].as_f64();
            let im = pair[1].as_f64();
            match (re, im) {
                (Some(re), Some(im)) => Ok(C64::new(re, im)),
                _ => Err(Failure::parse(format!("bad complex entry {v}"))),
            }
        }
        _ => Err(Failure::parse(format!("expected a number or [re, im], got {v}"))),
    }
}

pub fn parse_vector(v: &Value) -> Result<Vec<C64>, Failure> {
    let items = v
        .as_array()
        .ok_or_else(|| Failure::parse("\"vector\" must be an array".into()))?;
    if items.is_empty() {
        return Err(Failure::parse("empty vector".into()));
    }
    items.iter().map(scalar).collect()
}

/// `{"entries": rows}` (with optional `"n"`), `{"diag": [...]}`, or a bare
/// array of rows. Entries are numbers or `[re, im]` pairs.
pub fn parse_matrix(v: &Value) -> Result<CMatrix, Failure> {
    if let Some(d) = v.get("diag") {
        let d = parse_vector(d)?;
        return Ok(CMatrix::from_diag(&d));
    }
    let rows = match v {
        Value::Array(_) => v,
        _ => v
            .get("entries")
            .ok_or_else(|| Failure::parse("matrix needs \"entries\" or \"diag\"".into()))?,
    };
    let rows = rows
        .as_array()
        .ok_or_else(|| Failure::parse("matrix entries must be an array of rows".into()))?;
    let n = rows.len();
    if n == 0 {
        return Err(Failure::parse("empty matrix".into()));
    }
    if let Some(declared) = v.get("n") {
        if declared.as_u64() != Some(n as u64) {
            return Err(Failure::parse(format!("declared n = {declared} but {n} rows given")));
        }
    }
    let mut data = Vec::with_capacity(n * n);
    for row in rows {
        let row = row
            .as_array()
            .ok_or_else(|| Failure::parse("each matrix row must be an array".into()))?;
        if row.len() != n {
            return Err(Failure::parse(format!("matrix is not square: row of length {} in {n} rows", row.len())));
        }
        for x in row {
            data.push(scalar(x)?);
        }
    }
    CMatrix::from_vec(n, data).map_err(|e| Failure::parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_formats() {
        let a = parse_matrix(&serde_json::json!({"entries": [[1, [0, 2]], [0, 3]]})).unwrap();
        assert_eq!(a[(0, 1)], C64::new(0.0, 2.0));
        let b = parse_matrix(&serde_json::json!([[1, 0], [0, 2]])).unwrap();
        let c = parse_matrix(&serde_json::json!({"diag": [1, 2]})).unwrap();
        assert_eq!(b, c);
        assert!(parse_matrix(&serde_json::json!({"entries": [[1, 2]]})).is_err());
        assert!(parse_matrix(&serde_json::json!({"n": 3, "entries": [[1]]})).is_err());
    }

    #[test]
    fn vectors() {
        let v = parse_vector(&serde_json::json!([1, [0, -1]])).unwrap();
        assert_eq!(v[1], C64::new(0.0, -1.0));
        assert!(parse_vector(&serde_json::json!([])).is_err());
        assert!(parse_vector(&serde_json::json!(["x"])).is_err());
    }
}
