use std::io::Write;
use std::path::Path;

use serde::Serialize;

use super::config::ExperimentConfig;
use super::sweep::{Cell, SweepResult, SweepRow, COLUMNS};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Shortest round-tripping decimal; exponent notation outside [1e-5, 1e16).
pub fn format_float(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-5..1e16).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

pub fn write_csv<W: Write>(result: &SweepResult, w: W) -> Result<()> {
    let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
    out.write_record(COLUMNS).map_err(csv_err)?;
    for row in &result.rows {
        let cells = row.cells().map(|c| match c {
            Cell::Text(t) => t.unwrap_or("").to_string(),
            Cell::Num(v) => v.map(format_float).unwrap_or_default(),
        });
        out.write_record(&cells).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct JsonDoc<'a> {
    config: &'a ExperimentConfig,
    variable: &'a str,
    columns: &'a [&'a str],
    rows: &'a [SweepRow],
}

pub fn write_json<W: Write>(result: &SweepResult, cfg: &ExperimentConfig, mut w: W) -> Result<()> {
    let doc = JsonDoc {
        config: cfg,
        variable: result.variable.as_str(),
        columns: &COLUMNS,
        rows: &result.rows,
    };
    serde_json::to_writer_pretty(&mut w, &doc).map_err(|e| Error::Io(e.to_string()))?;
    w.write_all(b"\n")?;
    Ok(())
}

pub fn render(result: &SweepResult, cfg: &ExperimentConfig, format: OutputFormat) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    match format {
        OutputFormat::Csv => write_csv(result, &mut buf)?,
        OutputFormat::Json => write_json(result, cfg, &mut buf)?,
    }
    Ok(buf)
}

/// Write to `path`, or to stdout when it is `None`.
pub fn emit(result: &SweepResult, cfg: &ExperimentConfig, format: OutputFormat, path: Option<&Path>) -> Result<()> {
    let bytes = render(result, cfg, format)?;
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(&bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}
