use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::timestep::SimulationResult;

/// C-style `%.6g`.
pub fn format_g6(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: String| {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if (-4..6).contains(&exp) {
        trim(format!("{:.*}", (5 - exp) as usize, v))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mantissa.to_string()), exp.abs())
    }
}

/// Shortest decimal that parses back to the same double.
pub fn format_value(v: f64) -> String {
    format!("{v:?}")
}

pub fn column_header(t: f64) -> String {
    format!("u@t={}", format_g6(t))
}

/// Write `x` followed by one column per snapshot.
pub fn write_snapshot_csv<R>(result: &SimulationResult<R>, path: &Path) -> Result<()> {
    let x = result.grid.nodes();
    let columns: Vec<&[f64]> = result.snapshots.iter().map(|s| &s.u[..]).collect();
    let headers: Vec<String> = result
        .snapshots
        .iter()
        .map(|s| column_header(s.time))
        .collect();
    write_columns(path, &x, &headers, &columns)
}

pub fn write_columns(path: &Path, x: &[f64], headers: &[String], columns: &[&[f64]]) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv(std::io::BufWriter::new(file), x, headers, columns).map_err(|e| csv_error(path, e))
}

/// Same layout as [`write_columns`] into any writer.
pub fn write_csv<W: std::io::Write>(
    out: W,
    x: &[f64],
    headers: &[String],
    columns: &[&[f64]],
) -> std::result::Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let mut record = vec!["x".to_string()];
    record.extend(headers.iter().cloned());
    w.write_record(&record)?;
    for (k, xk) in x.iter().enumerate() {
        record.clear();
        record.push(format_value(*xk));
        record.extend(columns.iter().map(|c| format_value(c[k])));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::parse(path, format!("{other:?}")),
    }
}

/// Contents of a snapshot file. Times come from the headers and carry only
/// six significant digits.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotTable {
    pub x: Vec<f64>,
    pub times: Vec<f64>,
    pub columns: Vec<Vec<f64>>,
}

impl SnapshotTable {
    /// The uniform grid the `x` column was written from.
    pub fn grid(&self) -> Result<Grid1D> {
        let n = self.x.len();
        if n < 3 {
            return Err(Error::GridTooSmall(format!("{n} rows")));
        }
        let b = self.x[n - 1];
        if (self.x[0] + b).abs() > 1e-9 * b.abs().max(1.0) {
            return Err(Error::Config(format!(
                "x column must be symmetric about 0, got [{}, {b}]",
                self.x[0]
            )));
        }
        let grid = Grid1D::new(b, n)?;
        for (k, &x) in self.x.iter().enumerate() {
            if (x - grid.x(k)).abs() > 1e-9 * b {
                return Err(Error::Config(format!(
                    "x column is not uniform at row {}",
                    k + 1
                )));
            }
        }
        Ok(grid)
    }
}

pub fn read_snapshots_csv(path: &Path) -> Result<SnapshotTable> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let headers = r.headers().map_err(|e| csv_error(path, e))?.clone();
    if headers.get(0) != Some("x") || headers.len() < 2 {
        return Err(Error::parse(
            path,
            "header must start with x followed by at least one column",
        ));
    }
    let times = headers
        .iter()
        .skip(1)
        .map(|h| {
            let t = h.strip_prefix("u@t=").unwrap_or(h);
            t.parse::<f64>().unwrap_or(f64::NAN)
        })
        .collect();
    let mut x = Vec::new();
    let mut columns = vec![Vec::new(); headers.len() - 1];
    for (row, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::parse(path, format!("row {}: cannot parse '{s}'", row + 2)))
        };
        if rec.len() != headers.len() {
            return Err(Error::parse(
                path,
                format!("row {}: expected {} fields", row + 2, headers.len()),
            ));
        }
        x.push(parse(&rec[0])?);
        for (col, field) in columns.iter_mut().zip(rec.iter().skip(1)) {
            col.push(parse(field)?);
        }
    }
    Ok(SnapshotTable { x, times, columns })
}

/// The node coordinates and the last column of a snapshot (or profile) file.
pub fn read_profile_csv(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut t = read_snapshots_csv(path)?;
    let u = t.columns.pop().expect("at least one data column");
    Ok((t.x, u))
}
