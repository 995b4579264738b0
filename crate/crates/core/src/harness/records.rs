//! CSV persistence: metric rows and time series (trajectories, observations,
//! estimates). Floats are written with 17 significant digits so that every
//! file parses back to the exact values written.

use std::io::{Read, Write};
use std::path::Path;

use csv::StringRecord;

use crate::error::{Error, Result};
use crate::harness::config::Variant;

pub const METRIC_COLUMNS: [&str; 12] = [
    "variant",
    "M",
    "N",
    "K",
    "reps",
    "mse_mean",
    "mse_var",
    "bias_sq",
    "wall_per_step_s",
    "wall_total_s",
    "time_error_index",
    "collapse_count",
];

/// One aggregated sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricRecord {
    pub variant: Variant,
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub reps: usize,
    /// Mean over replicates of the per-run MSE.
    pub mse_mean: f64,
    /// Sample variance over replicates of the per-run MSE.
    pub mse_var: f64,
    /// Squared bias of the replicate-mean estimate, averaged over steps and
    /// coordinates.
    pub bias_sq: f64,
    /// Median over replicates of run wall time divided by the step count.
    pub wall_per_step_s: f64,
    /// Mean run wall time.
    pub wall_total_s: f64,
    /// `NaN` where undefined (double bootstrap).
    pub time_error_index: f64,
    /// Collapsed steps plus diverged replicates.
    pub collapse_count: usize,
}

impl MetricRecord {
    /// Equality with floats compared bit for bit, so `NaN` fields match.
    pub fn bitwise_eq(&self, other: &Self) -> bool {
        let f = |r: &Self| {
            [
                r.mse_mean,
                r.mse_var,
                r.bias_sq,
                r.wall_per_step_s,
                r.wall_total_s,
                r.time_error_index,
            ]
            .map(f64::to_bits)
        };
        self.variant == other.variant
            && (self.m, self.n, self.k, self.reps, self.collapse_count)
                == (other.m, other.n, other.k, other.reps, other.collapse_count)
            && f(self) == f(other)
    }
}

pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_field<T: std::str::FromStr>(record: &StringRecord, i: usize) -> Result<T> {
    let raw = record.get(i).unwrap_or("");
    raw.trim().parse().map_err(|_| {
        Error::invalid(format!(
            "line {}: cannot parse `{raw}` in column {}",
            record.position().map_or(0, |p| p.line()),
            i + 1
        ))
    })
}

pub fn write_metrics<W: Write>(writer: W, records: &[MetricRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(METRIC_COLUMNS)?;
    for r in records {
        w.write_record([
            r.variant.name().to_string(),
            r.m.to_string(),
            r.n.to_string(),
            r.k.to_string(),
            r.reps.to_string(),
            format_float(r.mse_mean),
            format_float(r.mse_var),
            format_float(r.bias_sq),
            format_float(r.wall_per_step_s),
            format_float(r.wall_total_s),
            format_float(r.time_error_index),
            r.collapse_count.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_metrics<R: Read>(reader: R) -> Result<Vec<MetricRecord>> {
    let mut r = csv::Reader::from_reader(reader);
    if r.headers()?.iter().ne(METRIC_COLUMNS) {
        return Err(Error::invalid("metrics header does not match"));
    }
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        out.push(MetricRecord {
            variant: parse_field(&rec, 0)?,
            m: parse_field(&rec, 1)?,
            n: parse_field(&rec, 2)?,
            k: parse_field(&rec, 3)?,
            reps: parse_field(&rec, 4)?,
            mse_mean: parse_field(&rec, 5)?,
            mse_var: parse_field(&rec, 6)?,
            bias_sq: parse_field(&rec, 7)?,
            wall_per_step_s: parse_field(&rec, 8)?,
            wall_total_s: parse_field(&rec, 9)?,
            time_error_index: parse_field(&rec, 10)?,
            collapse_count: parse_field(&rec, 11)?,
        });
    }
    Ok(out)
}

/// Writes rows `t = first_t, first_t + 1, ...` under the header
/// `t,{prefix}0,{prefix}1,...`. The header is written even with no rows.
pub fn write_series<W: Write>(writer: W, prefix: &str, dim: usize, first_t: usize, rows: &[Vec<f64>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let header: Vec<String> = std::iter::once("t".to_string())
        .chain((0..dim).map(|i| format!("{prefix}{i}")))
        .collect();
    w.write_record(&header)?;
    for (k, row) in rows.iter().enumerate() {
        if row.len() != dim {
            return Err(Error::invalid(format!("row {} has {} values, expected {dim}", k, row.len())));
        }
        let fields = std::iter::once((first_t + k).to_string()).chain(row.iter().map(|&x| format_float(x)));
        w.write_record(fields)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Reads a series written by [`write_series`], dropping the `t` column.
pub fn read_series<R: Read>(reader: R) -> Result<Vec<Vec<f64>>> {
    let mut r = csv::Reader::from_reader(reader);
    let width = r.headers()?.len();
    if width < 2 {
        return Err(Error::invalid("series needs a t column and at least one value column"));
    }
    r.records()
        .map(|rec| {
            let rec = rec?;
            (1..width).map(|i| parse_field(&rec, i)).collect()
        })
        .collect()
}

pub fn write_metrics_file(path: &Path, records: &[MetricRecord]) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_metrics(std::io::BufWriter::new(file), records)
}

pub fn read_metrics_file(path: &Path) -> Result<Vec<MetricRecord>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_metrics(std::io::BufReader::new(file))
}

pub fn write_series_file(path: &Path, prefix: &str, dim: usize, first_t: usize, rows: &[Vec<f64>]) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_series(std::io::BufWriter::new(file), prefix, dim, first_t, rows)
}

pub fn read_series_file(path: &Path) -> Result<Vec<Vec<f64>>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_series(std::io::BufReader::new(file))
}
