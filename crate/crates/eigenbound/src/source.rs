//! Where a matrix comes from: a Matrix Market file, an ensemble draw, or an
//! inline JSON literal.

use std::fmt;
use std::path::PathBuf;

use eigenbound_core::{Complex, DenseMatrix};
use serde::Serialize;
use serde_json::Value;

use crate::ensemble::{self, EnsembleSpec};
use crate::error::{Error, Result};
use crate::mmio;

#[derive(Clone, Debug, PartialEq)]
pub enum MatrixSource {
    File(PathBuf),
    Ensemble(EnsembleSpec),
    /// JSON text: rows of entries, each a number or `[re, im]`.
    Literal(String),
}

impl MatrixSource {
    pub fn load(&self) -> Result<DenseMatrix> {
        match self {
            MatrixSource::File(path) => mmio::read_matrix_market(path),
            MatrixSource::Ensemble(spec) => ensemble::generate(spec),
            MatrixSource::Literal(text) => parse_literal(text),
        }
    }
}

/// Serialized shape of a source: the same keys whatever the origin.
#[derive(Serialize)]
struct SourceRecord<'a> {
    origin: &'static str,
    path: Option<String>,
    ensemble: Option<&'a EnsembleSpec>,
    literal: Option<&'a str>,
}

impl Serialize for MatrixSource {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut record = SourceRecord {
            origin: "",
            path: None,
            ensemble: None,
            literal: None,
        };
        match self {
            MatrixSource::File(p) => {
                record.origin = "file";
                record.path = Some(p.display().to_string());
            }
            MatrixSource::Ensemble(spec) => {
                record.origin = "ensemble";
                record.ensemble = Some(spec);
            }
            MatrixSource::Literal(text) => {
                record.origin = "literal";
                record.literal = Some(text);
            }
        }
        record.serialize(serializer)
    }
}

impl fmt::Display for MatrixSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixSource::File(p) => write!(f, "{}", p.display()),
            MatrixSource::Ensemble(s) => write!(f, "{} n={} seed={}", s.kind, s.n, s.seed),
            MatrixSource::Literal(_) => f.write_str("literal"),
        }
    }
}

/// Parses `[[1, 2], [3, [0, 1]]]`-style JSON into a matrix.
pub fn parse_literal(text: &str) -> Result<DenseMatrix> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Literal(e.to_string()))?;
    let rows = value
        .as_array()
        .ok_or_else(|| Error::Literal("expected an array of rows".into()))?;
    let n = rows.len();
    let mut data = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Literal(format!("row {i} is not an array")))?;
        if row.len() != n {
            return Err(Error::Literal(format!(
                "row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        for (j, entry) in row.iter().enumerate() {
            data.push(parse_entry(entry).ok_or_else(|| {
                Error::Literal(format!("entry ({i}, {j}) must be a number or [re, im]"))
            })?);
        }
    }
    Ok(DenseMatrix::from_row_major(n, data)?)
}

fn parse_entry(v: &Value) -> Option<Complex> {
    match v {
        Value::Number(x) => Some(Complex::new(x.as_f64()?, 0.0)),
        Value::Array(pair) if pair.len() == 2 => {
            Some(Complex::new(pair[0].as_f64()?, pair[1].as_f64()?))
        }
        _ => None,
    }
}
