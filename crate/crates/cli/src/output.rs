//! CSV and JSON result files.
//!
//! The CSV header starts with `sweep,scheme,rate_bps_hz,runtime_s,opt_count,seed`;
//! the remaining columns carry the array size, the power used against the
//! budget, the SCA trace (`;`-separated) and the error tag.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{HarnessError, Result};
use crate::experiment::ResultRow;

pub const CSV_HEADER: [&str; 12] = [
    "sweep",
    "scheme",
    "rate_bps_hz",
    "runtime_s",
    "opt_count",
    "seed",
    "num_antennas",
    "power_w",
    "budget_w",
    "iterations",
    "objective_history",
    "error",
];

/// `x` rounded to nine significant digits.
pub fn round9(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.8e}").parse().unwrap_or(x)
}

/// Shortest text that parses back to `round9(x)`.
pub fn format9(x: f64) -> String {
    let r = round9(x);
    let a = r.abs();
    if r != 0.0 && a.is_finite() && !(1e-4..1e15).contains(&a) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io { path: path.to_path_buf(), source }
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> HarnessError + '_ {
    move |source| HarnessError::Csv { path: path.to_path_buf(), source }
}

fn record(r: &ResultRow) -> Vec<String> {
    vec![
        format9(r.sweep),
        r.scheme.clone(),
        format9(r.rate_bps_hz),
        format9(r.runtime_s),
        r.opt_count.to_string(),
        r.seed.to_string(),
        r.num_antennas.to_string(),
        format9(r.power_w),
        format9(r.budget_w),
        r.iterations.to_string(),
        r.objective_history.iter().map(|&v| format9(v)).collect::<Vec<_>>().join(";"),
        r.error.clone().unwrap_or_default(),
    ]
}

pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record(record(r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(rows: &[ResultRow], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    write_csv(rows, BufWriter::new(file)).map_err(csv_err(path))
}

fn parse_field<T: std::str::FromStr>(field: &str, name: &str, line: u64) -> std::result::Result<T, String> {
    field.parse().map_err(|_| format!("line {line}: bad {name} {field:?}"))
}

pub fn parse_csv(text: &str) -> std::result::Result<Vec<ResultRow>, String> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let header = rd.headers().map_err(|e| e.to_string())?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(format!("unexpected header {header:?}"));
    }
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(|e| e.to_string())?;
        let line = rec.position().map_or(0, |p| p.line());
        let f = |i: usize| rec.get(i).unwrap_or("");
        let history = f(10);
        rows.push(ResultRow {
            sweep: parse_field(f(0), "sweep", line)?,
            scheme: f(1).to_string(),
            rate_bps_hz: parse_field(f(2), "rate_bps_hz", line)?,
            runtime_s: parse_field(f(3), "runtime_s", line)?,
            opt_count: parse_field(f(4), "opt_count", line)?,
            seed: parse_field(f(5), "seed", line)?,
            num_antennas: parse_field(f(6), "num_antennas", line)?,
            power_w: parse_field(f(7), "power_w", line)?,
            budget_w: parse_field(f(8), "budget_w", line)?,
            iterations: parse_field(f(9), "iterations", line)?,
            objective_history: if history.is_empty() {
                Vec::new()
            } else {
                history.split(';').map(|v| parse_field(v, "objective_history", line)).collect::<Result<_, _>>()?
            },
            error: Some(f(11).to_string()).filter(|e| !e.is_empty()),
        });
    }
    Ok(rows)
}

pub fn read_csv(path: &Path) -> Result<Vec<ResultRow>> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    parse_csv(&text).map_err(|msg| HarnessError::Config(format!("{}: {msg}", path.display())))
}

pub fn emit_json(rows: &[ResultRow], path: &Path) -> Result<()> {
    let rounded: Vec<ResultRow> = rows.iter().cloned().map(ResultRow::rounded).collect();
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, &rounded)
        .map_err(|source| HarnessError::Json { path: path.to_path_buf(), source })?;
    w.flush().map_err(io_err(path))
}

pub fn read_json(path: &Path) -> Result<Vec<ResultRow>> {
    let file = File::open(path).map_err(io_err(path))?;
    serde_json::from_reader(BufReader::new(file)).map_err(|source| HarnessError::Json { path: path.to_path_buf(), source })
}
