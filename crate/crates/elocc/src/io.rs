//! File formats: Schmidt-vector CSV, interception tables as CSV/JSON, sweep
//! spectra CSV, bracket and fit records as JSON. Writers are deterministic;
//! the optional banner line is the only run-dependent content.

use std::path::Path;

use serde_json::{json, Value};

use crate::criticality::{Bracket, InterceptionTable, ScalingFit, SweepResult};
use crate::error::{Error, Result};

/// Parse a single-column CSV of probabilities with header `lambda`.
/// Returns the raw values; run them through `normalize_descending`.
pub fn read_schmidt_csv(text: &str) -> Result<Vec<f64>> {
    let mut lines = text.lines().enumerate();
    let header = loop {
        match lines.next() {
            Some((i, l)) => {
                let l = l.trim();
                if !l.is_empty() && !l.starts_with('#') {
                    break (i, l);
                }
            }
            None => {
                return Err(Error::CsvParse {
                    line: 0,
                    msg: "empty file".into(),
                })
            }
        }
    };
    if header.1 != "lambda" {
        return Err(Error::CsvParse {
            line: header.0 + 1,
            msg: format!("expected header `lambda`, got {:?}", header.1),
        });
    }
    let mut values = Vec::new();
    for (i, line) in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: f64 = line.parse().map_err(|_| Error::CsvParse {
            line: i + 1,
            msg: format!("not a number: {line:?}"),
        })?;
        if !v.is_finite() {
            return Err(Error::CsvParse {
                line: i + 1,
                msg: "values must be finite".into(),
            });
        }
        values.push(v);
    }
    if values.is_empty() {
        return Err(Error::CsvParse {
            line: 0,
            msg: "no data rows".into(),
        });
    }
    Ok(values)
}

pub fn write_schmidt_csv(coeffs: &[f64]) -> String {
    let mut out = String::from("lambda\n");
    for c in coeffs {
        out.push_str(&format!("{c}\n"));
    }
    out
}

fn fmt_cell(value: Option<f64>, round_paper: bool) -> String {
    match value {
        None => "N".to_string(),
        Some(v) => {
            if round_paper {
                format!("{v:.1}")
            } else {
                format!("{v:.4}")
            }
        }
    }
}

/// Interception table as CSV: labels in the first row and column, `N` for no
/// interception, crossing α to four decimals (one decimal and 0.1-scan
/// semantics under `round_paper`).
pub fn table_to_csv(table: &InterceptionTable, round_paper: bool, banner: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(b) = banner {
        out.push_str(&format!("# {b}\n"));
    }
    out.push_str("param");
    for l in table.labels() {
        out.push_str(&format!(",{l}"));
    }
    out.push('\n');
    for (i, l) in table.labels().iter().enumerate() {
        out.push_str(&format!("{l}"));
        for j in 0..table.size() {
            let cell = if i == j {
                None
            } else if round_paper {
                table.paper_cell(i, j)
            } else {
                table.cell(i, j)
            };
            out.push(',');
            out.push_str(&fmt_cell(cell, round_paper));
        }
        out.push('\n');
    }
    out
}

pub fn table_to_json(table: &InterceptionTable, round_paper: bool, banner: Option<&str>) -> Value {
    let n = table.size();
    let cells: Vec<Vec<Value>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let cell = if i == j {
                        None
                    } else if round_paper {
                        table.paper_cell(i, j)
                    } else {
                        table.cell(i, j)
                    };
                    cell.map_or(Value::Null, |v| json!(v))
                })
                .collect()
        })
        .collect();
    let mut obj = json!({
        "labels": table.labels(),
        "cells": cells,
        "rounding": if round_paper { "paper-0.1" } else { "none" },
    });
    if let Some(b) = banner {
        obj["banner"] = json!(b);
    }
    obj
}

/// Sweep spectra as CSV: one row per parameter value, columns λ₁..λ_d padded
/// with zeros to the largest rank in the sweep.
pub fn sweep_to_csv(sweep: &SweepResult, banner: Option<&str>) -> String {
    let width = sweep
        .points
        .iter()
        .map(|p| p.schmidt.len())
        .max()
        .unwrap_or(0);
    let mut out = String::new();
    if let Some(b) = banner {
        out.push_str(&format!("# {b}\n"));
    }
    out.push_str("param,energy");
    for k in 1..=width {
        out.push_str(&format!(",lambda_{k}"));
    }
    out.push('\n');
    for p in &sweep.points {
        out.push_str(&format!("{},{}", p.value, p.ground_energy));
        for k in 0..width {
            let v = p.schmidt.coeffs().get(k).copied().unwrap_or(0.0);
            out.push_str(&format!(",{v}"));
        }
        out.push('\n');
    }
    out
}

pub fn bracket_to_json(bracket: &Bracket, banner: Option<&str>) -> Value {
    let mut obj = serde_json::to_value(bracket).expect("bracket serializes");
    if let Some(b) = banner {
        obj["banner"] = json!(b);
    }
    obj
}

pub fn fit_to_json(fit: &ScalingFit, banner: Option<&str>) -> Value {
    let mut obj = serde_json::to_value(fit).expect("fit serializes");
    if let Some(b) = banner {
        obj["banner"] = json!(b);
    }
    obj
}

/// Write through a temp file in the same directory plus rename, so an
/// interrupted run never leaves a truncated output behind.
pub fn write_atomic(path: &Path, content: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let stem = path
        .file_name()
        .ok_or_else(|| Error::InvalidConfig(format!("not a file path: {}", path.display())))?;
    let tmp_name = format!(
        ".{}.tmp-{}",
        stem.to_string_lossy(),
        std::process::id()
    );
    let tmp = match dir {
        Some(d) => d.join(&tmp_name),
        None => std::path::PathBuf::from(&tmp_name),
    };
    std::fs::write(&tmp, content)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}
