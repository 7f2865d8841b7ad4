//! Plain CSV matrices: one row per record, optional single header line.
//!
//! Values are written with Rust's shortest round-trip formatting, so a
//! write/read cycle reproduces every `f64` exactly. A first line whose
//! fields do not all parse as numbers is treated as a header.

use std::path::Path;

use nyspca_core::Mat;

use crate::error::{HarnessError, Result};

pub fn write_csv_matrix(path: impl AsRef<Path>, m: &Mat) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(|e| HarnessError::Csv { path: path.into(), source: e })?;
    let mut rec: Vec<String> = Vec::with_capacity(m.cols());
    for i in 0..m.rows() {
        rec.clear();
        rec.extend(m.row(i).iter().map(|v| format!("{v:?}")));
        w.write_record(&rec).map_err(|e| HarnessError::Csv { path: path.into(), source: e })?;
    }
    w.flush().map_err(|e| HarnessError::io(path, e))
}

pub fn read_csv_matrix(path: impl AsRef<Path>) -> Result<Mat> {
    let path = path.as_ref();
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(|e| HarnessError::Csv { path: path.into(), source: e })?;
    let mut data = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for (k, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| HarnessError::Csv { path: path.into(), source: e })?;
        let line = rec.position().map_or(k as u64 + 1, |p| p.line());
        let parsed: Vec<Option<f64>> = rec.iter().map(|f| f.parse::<f64>().ok()).collect();
        if k == 0 && parsed.iter().any(Option::is_none) {
            continue;
        }
        match cols {
            None => cols = Some(parsed.len()),
            Some(c) if c != parsed.len() => {
                return Err(HarnessError::csv_line(path, "record", line, format!("expected {c} fields, found {}", parsed.len())))
            }
            _ => {}
        }
        for (j, v) in parsed.into_iter().enumerate() {
            match v {
                Some(v) if v.is_finite() => data.push(v),
                _ => {
                    return Err(HarnessError::csv_line(
                        path,
                        "value",
                        line,
                        format!("field {} is not a finite number: {:?}", j + 1, &rec[j]),
                    ))
                }
            }
        }
        rows += 1;
    }
    let cols = cols.unwrap_or(0);
    if rows == 0 || cols == 0 {
        return Err(HarnessError::csv_line(path, "record", 1, "no numeric rows"));
    }
    Ok(Mat::new(rows, cols, data)?)
}
