use susylat::experiment::{run, Command, ExperimentConfig, Format, ModelChoice, Report, CSV_HEADER};
use susylat::lattice::ModelKind;
use susylat::limits::Provenance;
use susylat::Error;

fn cfg(command: Command) -> ExperimentConfig {
    let mut c = ExperimentConfig::new(command);
    c.jobs = 2;
    c
}

#[test]
fn json_report_round_trips() {
    let mut c = cfg(Command::Verify);
    c.model = Some(ModelChoice::Dicke);
    let (report, series) = run(&c).unwrap();
    assert!(series.is_none());
    assert!(report.passed());
    let back: serde_json::Value = serde_json::from_str(&report.render(Format::Json).unwrap()).unwrap();
    assert_eq!(back["rows"].as_array().unwrap().len(), report.rows.len());
    assert_eq!(back["metadata"]["version"], env!("CARGO_PKG_VERSION"));
    let csv = report.to_csv().unwrap();
    assert_eq!(csv.lines().next().unwrap(), CSV_HEADER.join(","));
    assert_eq!(csv.lines().count(), report.rows.len() + 1);
}

#[test]
fn sweep_series_carries_target_and_fit() {
    let mut c = cfg(Command::Sweep);
    c.metric = Some("odlro".into());
    c.state = Some("ceiling".into());
    c.n_values = vec![50, 100, 200];
    let (report, series) = run(&c).unwrap();
    let series = series.unwrap();
    assert_eq!(series.points.iter().map(|p| p.0).collect::<Vec<_>>(), vec![50, 100, 200]);
    let target = series.target.unwrap();
    assert_eq!(target.provenance, Provenance::Published);
    assert!((series.fit.unwrap().limit - target.value.re).abs() < 0.01);
    assert!(report.passed());
}

#[test]
fn unknown_metric_and_state_are_config_errors() {
    let mut c = cfg(Command::Sweep);
    c.metric = Some("nope".into());
    c.n_values = vec![4, 8, 16];
    assert!(matches!(run(&c), Err(Error::Config { field: "metric", .. })));
    c.metric = Some("odlro".into());
    c.state = Some("thermal".into());
    assert!(matches!(run(&c), Err(Error::Config { .. })));
}

#[test]
fn spectrum_pairs_positive_levels() {
    let mut c = cfg(Command::Spectrum);
    c.model = Some(ModelChoice::Lattice(ModelKind::ModelI));
    c.n_values = vec![3];
    c.levels = 8;
    let report: Report = run(&c).unwrap().0;
    let levels: Vec<f64> = report.rows.iter().filter(|r| r.metric.starts_with("level[")).map(|r| r.value.re).collect();
    assert_eq!(levels.len(), 8);
    assert!(levels.windows(2).all(|w| w[0] <= w[1] + 1e-12));
    assert!(report.passed());
}

#[test]
fn seed_changes_couplings_but_not_verdicts() {
    let mut a = cfg(Command::Verify);
    a.model = Some(ModelChoice::Lattice(ModelKind::ModelI));
    a.n_values = vec![3];
    let mut b = a.clone();
    b.seed = 99;
    let (ra, rb) = (run(&a).unwrap().0, run(&b).unwrap().0);
    assert!(ra.passed() && rb.passed());
    assert_ne!(ra.to_csv().unwrap(), rb.to_csv().unwrap());
}
