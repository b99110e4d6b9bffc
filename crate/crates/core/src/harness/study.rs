//! Level-by-level convergence studies with CSV and JSON reports.

use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::adapt::{AdaptiveConfig, BuildOutput, Method, ModelFunction, SparseGridBuilder, Termination};
use crate::error::{Error, Result};
use crate::harness::metrics::{errors, TestSet};
use crate::models::Benchmark;
use crate::moments::moments;

/// One row per constructed level. Evaluation counts are cumulative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyRow {
    pub level: u32,
    pub full_evals: usize,
    pub spline_evals: usize,
    pub max_abs_error: f64,
    pub rmse: f64,
    pub mean: f64,
    pub variance: f64,
    /// `|mean_k - mean_{k-1}|`; empty on the first row.
    pub mean_delta: Option<f64>,
    pub variance_delta: Option<f64>,
    /// Seconds since construction started; kept out of the CSV.
    #[serde(skip_serializing)]
    #[serde(default)]
    pub wall_time: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StudyReport {
    pub benchmark: String,
    pub params: std::collections::BTreeMap<String, f64>,
    pub method: Method,
    pub config: AdaptiveConfig,
    pub seed: u64,
    pub test_points: usize,
    pub termination: Termination,
    pub rows: Vec<StudyRow>,
}

#[derive(Serialize)]
struct Sidecar<'a> {
    #[serde(flatten)]
    report: &'a StudyReport,
    wall_times: Vec<f64>,
}

impl StudyReport {
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::InvalidConfig(format!("csv buffer: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// Metadata, configuration echo and wall times.
    pub fn write_json(&self, path: &Path) -> Result<()> {
        let sidecar = Sidecar {
            report: self,
            wall_times: self.rows.iter().map(|r| r.wall_time).collect(),
        };
        std::fs::write(path, serde_json::to_string_pretty(&sidecar)? + "\n")?;
        Ok(())
    }

    /// Full evaluations at the first level whose error metric reaches
    /// `target`.
    pub fn cost_to_reach(&self, target: f64, metric: Metric) -> Option<usize> {
        self.rows
            .iter()
            .find(|r| metric.of(r) <= target)
            .map(|r| r.full_evals)
    }

    pub fn last(&self) -> Option<&StudyRow> {
        self.rows.last()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    MaxAbs,
    Rmse,
}

impl Metric {
    pub fn of(self, row: &StudyRow) -> f64 {
        match self {
            Metric::MaxAbs => row.max_abs_error,
            Metric::Rmse => row.rmse,
        }
    }
}

/// Build `benchmark` with `method`, scoring every level on `test`.
/// Returns the report together with the final surrogate.
pub fn run_study(
    benchmark: &Benchmark,
    method: Method,
    cfg: &AdaptiveConfig,
    test: &TestSet,
    seed: u64,
) -> Result<(StudyReport, BuildOutput)> {
    let f = ModelFunction::new(benchmark.model.clone());
    let mut cfg = cfg.clone();
    cfg.spline = method == Method::Easgc;
    let mut builder = SparseGridBuilder::new(&f, method, cfg.clone())?;
    let start = Instant::now();
    let mut rows: Vec<StudyRow> = Vec::new();
    while let Some(record) = builder.step().map_err(|e| context(e, benchmark, method))? {
        let model = builder.model();
        let m = errors(model, test)?;
        let mom = moments(model)?;
        let counts = model.counts();
        let prev = rows.last();
        rows.push(StudyRow {
            level: record.level,
            full_evals: counts.full,
            spline_evals: counts.spline,
            max_abs_error: m.max_abs_error,
            rmse: m.rmse,
            mean: mom.mean,
            variance: mom.variance,
            mean_delta: prev.map(|p| (mom.mean - p.mean).abs()),
            variance_delta: prev.map(|p| (mom.variance - p.variance).abs()),
            wall_time: start.elapsed().as_secs_f64(),
        });
        log::info!(
            "{} {}: level {} full {} spline {} max err {:.3e}",
            benchmark.name,
            method,
            record.level,
            counts.full,
            counts.spline,
            m.max_abs_error
        );
    }
    let out = builder.finish();
    let report = StudyReport {
        benchmark: benchmark.name.clone(),
        params: benchmark.params.clone(),
        method,
        config: cfg,
        seed,
        test_points: test.len(),
        termination: out.termination,
        rows,
    };
    Ok((report, out))
}

fn context(e: Error, benchmark: &Benchmark, method: Method) -> Error {
    match e {
        Error::Evaluation { point, message } => Error::Evaluation {
            point,
            message: format!("{} ({}): {message}", benchmark.name, method),
        },
        other => other,
    }
}
