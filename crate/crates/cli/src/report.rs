//! Schema-versioned experiment reports and their JSON / CSV forms.
//!
//! JSON carries everything; CSV carries one row per run with header
//! `run,seed,value,energy` (`energy` empty without a VQE stage), in run
//! order, ready for per-run scatter plots.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, OutputFormat};
use crate::error::{io_error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LcuDiagnostics {
    pub lambda: f64,
    pub identity_offset: f64,
    /// Runs whose radicand came out negative and was clamped to zero.
    pub clamped_runs: usize,
    pub mean_success_probability: f64,
    /// Per-run estimates with the radicand clamped at zero, run order.
    pub clamped_values: Vec<f64>,
    pub clamped_median: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub schema_version: u32,
    pub config: ExperimentConfig,
    pub median: f64,
    pub mad: f64,
    /// Per-run estimates in run order; LCU values are unclamped (see
    /// [`LcuDiagnostics`] for the clamped ones).
    pub per_run_values: Vec<f64>,
    /// Estimator seed of each run.
    pub seeds: Vec<u64>,
    pub vqe_seeds: Option<Vec<u64>>,
    pub vqe_energies: Option<Vec<f64>>,
    /// Exact expectation value for a fixed (non-VQE) state.
    pub reference_value: Option<f64>,
    pub lcu: Option<LcuDiagnostics>,
    pub wall_time_s: f64,
}

pub fn write_json<W: Write>(report: &EstimateReport, out: W) -> Result<()> {
    let mut out = out;
    serde_json::to_writer_pretty(&mut out, report)?;
    writeln!(out).map_err(io_error("<report>"))?;
    Ok(())
}

pub fn write_csv<W: Write>(report: &EstimateReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["run", "seed", "value", "energy"])?;
    for (r, (value, seed)) in report.per_run_values.iter().zip(&report.seeds).enumerate() {
        let energy = report.vqe_energies.as_ref().map_or(String::new(), |e| e[r].to_string());
        w.write_record([r.to_string(), seed.to_string(), value.to_string(), energy])?;
    }
    w.flush().map_err(io_error("<report>"))?;
    Ok(())
}

pub fn emit_report(report: &EstimateReport, format: OutputFormat, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(io_error(path))?;
    let out = BufWriter::new(file);
    match format {
        OutputFormat::Json => write_json(report, out),
        OutputFormat::Csv => write_csv(report, out),
    }
}

pub fn load_report(path: &Path) -> Result<EstimateReport> {
    let file = File::open(path).map_err(io_error(path))?;
    Ok(serde_json::from_reader(std::io::BufReader::new(file))?)
}
