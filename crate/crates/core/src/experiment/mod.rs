//! Batch driver: verification suites, n-sweeps, spectra and the three-scale tables.

pub mod config;
pub mod report;
pub mod suites;
pub mod sweep;
pub mod tables;
pub mod tolerances;

use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;

pub use config::{Command, ExperimentConfig, ModelChoice};
pub use report::{Format, Metadata, Report, Row, Tolerance, CSV_HEADER};
pub use sweep::{SweepMetric, SweepOutcome, SWEEP_METRICS};
pub use tolerances::{Tolerances, TOLERANCE_TABLE_VERSION};

use crate::error::{Error, Result};
use crate::limits::ConvergenceSeries;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

pub(crate) type Task<'a> = Box<dyn Fn() -> Result<Vec<Row>> + Send + Sync + 'a>;

pub(crate) fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Config {
            field: "jobs",
            message: e.to_string(),
        })?;
    Ok(pool.install(f))
}

fn execute(tasks: Vec<Task<'_>>, jobs: usize) -> Result<Vec<Row>> {
    let results: Vec<Result<Vec<Row>>> = with_pool(jobs, || tasks.par_iter().map(|t| t()).collect())?;
    let mut rows = Vec::new();
    for r in results {
        rows.extend(r?);
    }
    rows.sort_by(report::row_order);
    Ok(rows)
}

fn finish(cfg: &ExperimentConfig, rows: Vec<Row>) -> Result<Report> {
    let config = serde_json::to_value(cfg).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    Ok(Report {
        metadata: Metadata {
            version: ARTIFACT_VERSION.to_string(),
            tolerance_table: TOLERANCE_TABLE_VERSION.to_string(),
            config,
            timestamp,
        },
        rows,
    })
}

fn expect_command(cfg: &ExperimentConfig, command: Command) -> Result<()> {
    cfg.validate()?;
    if cfg.command != command {
        return Err(Error::Config {
            field: "command",
            message: format!("expected {command:?}, got {:?}", cfg.command),
        });
    }
    Ok(())
}

pub fn run_verify(cfg: &ExperimentConfig) -> Result<Report> {
    expect_command(cfg, Command::Verify)?;
    finish(cfg, execute(suites::verify_tasks(cfg), cfg.jobs)?)
}

pub fn run_spectrum(cfg: &ExperimentConfig) -> Result<Report> {
    expect_command(cfg, Command::Spectrum)?;
    finish(cfg, execute(suites::spectrum_tasks(cfg), cfg.jobs)?)
}

pub fn run_tables(cfg: &ExperimentConfig) -> Result<Report> {
    expect_command(cfg, Command::Tables)?;
    finish(cfg, execute(tables::table_tasks(cfg)?, cfg.jobs)?)
}

pub fn run_sweep(cfg: &ExperimentConfig) -> Result<(Report, ConvergenceSeries)> {
    expect_command(cfg, Command::Sweep)?;
    let out = sweep::run_sweep(cfg)?;
    let mut rows = out.rows;
    rows.sort_by(report::row_order);
    Ok((finish(cfg, rows)?, out.series))
}

/// Dispatches on `cfg.command`; the series is present for sweeps.
pub fn run(cfg: &ExperimentConfig) -> Result<(Report, Option<ConvergenceSeries>)> {
    match cfg.command {
        Command::Verify => Ok((run_verify(cfg)?, None)),
        Command::Spectrum => Ok((run_spectrum(cfg)?, None)),
        Command::Tables => Ok((run_tables(cfg)?, None)),
        Command::Sweep => run_sweep(cfg).map(|(r, s)| (r, Some(s))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_verify_passes() {
        let report = run_verify(&ExperimentConfig::new(Command::Verify)).unwrap();
        let failed: Vec<_> = report.failures().collect();
        assert!(failed.is_empty(), "{failed:#?}");
        assert!(report.rows.len() > 100);
    }

    #[test]
    fn baby_suite_has_four_flow_rows() {
        let mut cfg = ExperimentConfig::new(Command::Verify);
        cfg.model = Some(ModelChoice::parse("baby").unwrap());
        let report = run_verify(&cfg).unwrap();
        assert_eq!(report.rows.iter().filter(|r| r.metric.starts_with("flow.baby")).count(), 4);
        assert!(report.passed());
    }

    #[test]
    fn tables_have_seventeen_passing_rows() {
        let report = run_tables(&ExperimentConfig::new(Command::Tables)).unwrap();
        assert_eq!(report.rows.iter().filter(|r| r.metric.starts_with("table1.")).count(), 9);
        assert_eq!(report.rows.iter().filter(|r| r.metric.starts_with("table2.")).count(), 8);
        let failed: Vec<_> = report.failures().collect();
        assert!(failed.is_empty(), "{failed:#?}");
    }

    #[test]
    fn job_count_does_not_change_rows() {
        let mut a = ExperimentConfig::new(Command::Tables);
        a.jobs = 1;
        let mut b = a.clone();
        b.jobs = 4;
        let ra = run_tables(&a).unwrap();
        let rb = run_tables(&b).unwrap();
        assert_eq!(ra.to_csv().unwrap(), rb.to_csv().unwrap());
    }

    #[test]
    fn spectrum_of_model_i() {
        let mut cfg = ExperimentConfig::new(Command::Spectrum);
        cfg.model = Some(ModelChoice::parse("I").unwrap());
        cfg.n_values = vec![3];
        cfg.levels = 4;
        let report = run_spectrum(&cfg).unwrap();
        assert_eq!(report.rows.iter().filter(|r| r.metric.starts_with("level[")).count(), 4);
        assert!(report.passed());
    }
}
