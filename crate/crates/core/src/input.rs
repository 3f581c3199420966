//! JSON input documents of the form
//! `{"mu": ["0", "0"], "cov": [["1", "1/2"], ["1/2", "1"]]}`.
//!
//! Scalars may be strings (`"p/q"`, integers or decimals) or JSON numbers;
//! both are read as exact rationals. Numbers are taken from their decimal
//! text, so `0.1` means exactly 1/10.

use std::path::Path;

use num_rational::BigRational;
use serde_json::Value;

use crate::error::{MomentError, Result};
use crate::scalar::parse_rational;
use crate::spec::{make_gaussian_spec, ExactSpec};

fn scalar(v: &Value, what: &str) -> Result<BigRational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => parse_rational(&n.to_string()),
        other => Err(MomentError::Parse(format!(
            "{what}: expected a number or string, got {other}"
        ))),
    }
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| MomentError::Parse(format!("{what}: expected an array")))
}

pub fn parse_spec_json(text: &str) -> Result<ExactSpec> {
    let doc: Value = serde_json::from_str(text)
        .map_err(|e| MomentError::Parse(format!("malformed JSON: {e}")))?;
    let mu = doc
        .get("mu")
        .ok_or_else(|| MomentError::Parse("missing field \"mu\"".into()))?;
    let cov = doc
        .get("cov")
        .ok_or_else(|| MomentError::Parse("missing field \"cov\"".into()))?;
    let mu = array(mu, "mu")?
        .iter()
        .enumerate()
        .map(|(k, v)| scalar(v, &format!("mu[{k}]")))
        .collect::<Result<Vec<_>>>()?;
    let cov = array(cov, "cov")?
        .iter()
        .enumerate()
        .map(|(i, row)| {
            array(row, &format!("cov[{i}]"))?
                .iter()
                .enumerate()
                .map(|(j, v)| scalar(v, &format!("cov[{i}][{j}]")))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    make_gaussian_spec(mu, cov)
}

pub fn load_spec(path: &Path) -> Result<ExactSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| MomentError::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_spec_json(&text)
}

/// Serializes a spec with every scalar as a `p/q` string.
pub fn spec_to_json(spec: &ExactSpec) -> String {
    let mu: Vec<Value> = spec
        .means()
        .iter()
        .map(|q| Value::String(q.to_string()))
        .collect();
    let cov: Vec<Value> = spec
        .cov_rows()
        .iter()
        .map(|r| Value::Array(r.iter().map(|q| Value::String(q.to_string())).collect()))
        .collect();
    serde_json::json!({ "mu": mu, "cov": cov }).to_string()
}
