use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::Serialize;

use super::curves::CurveRow;
use super::table::{TableCell, TableRow};
use super::trial::{ComparisonSummary, TrialRecord};
use super::{DistributionReport, HarnessError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(HarnessError::Invalid(format!("unknown format `{other}`"))),
        }
    }
}

/// A flat row type with a fixed CSV header, written even for empty output.
pub trait CsvRow: Serialize {
    const HEADER: &'static [&'static str];
}

impl CsvRow for TrialRecord {
    const HEADER: &'static [&'static str] = &[
        "problem",
        "D",
        "de",
        "d",
        "delta",
        "solver",
        "seed",
        "best_value",
        "f_star",
        "evals",
        "elapsed_s",
        "converged",
        "geometric_success",
    ];
}

impl CsvRow for CurveRow {
    const HEADER: &'static [&'static str] = &["de", "d", "delta_bar", "L_hat", "R_star", "trials"];
}

impl CsvRow for TableRow {
    const HEADER: &'static [&'static str] = &[
        "D",
        "d_offset",
        "delta_coef",
        "delta_base",
        "problems",
        "embeddings",
        "success_rate",
    ];
}

impl CsvRow for TableCell {
    const HEADER: &'static [&'static str] = &[
        "problem",
        "D",
        "d_offset",
        "delta_coef",
        "delta_base",
        "successes",
        "embeddings",
    ];
}

impl CsvRow for ComparisonSummary {
    const HEADER: &'static [&'static str] = &[
        "problem",
        "D",
        "solver",
        "trials",
        "rego_converged",
        "rego_geometric",
        "rego_mean_evals",
        "rego_mean_time_s",
        "baseline_converged",
        "baseline_mean_evals",
        "baseline_mean_time_s",
        "baseline_budget_exhausted",
    ];
}

impl CsvRow for DistributionReport {
    const HEADER: &'static [&'static str] = &[
        "de",
        "d",
        "samples",
        "dof",
        "ks_statistic",
        "mean_sq_norm",
        "expected_sq_norm",
        "mean_relative_error",
        "radial_tv",
        "direction_mean_max",
    ];
}

/// Writes `rows` as CSV (header first) or as a JSON array.
pub fn write_rows_to<T: CsvRow, W: Write>(rows: &[T], format: Format, writer: W) -> Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .from_writer(writer);
            w.write_record(T::HEADER)?;
            for row in rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        Format::Json => {
            let mut writer = writer;
            serde_json::to_writer_pretty(&mut writer, rows)?;
            writeln!(writer)?;
        }
    }
    Ok(())
}

/// Writes `rows` to a file, creating or truncating it.
pub fn write_rows<T: CsvRow>(rows: &[T], format: Format, path: &Path) -> Result<()> {
    let file = BufWriter::new(File::create(path)?);
    write_rows_to(rows, format, file)
}

/// Reads rows back from a CSV file written by [`write_rows`].
pub fn read_csv<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let mut reader = csv::Reader::from_path(path)?;
    let rows = reader
        .deserialize()
        .collect::<std::result::Result<Vec<T>, _>>()?;
    Ok(rows)
}
