use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

fn susylat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_susylat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn verify_passes_quickly() {
    let start = Instant::now();
    let o = susylat(&["verify"]);
    assert!(start.elapsed() < Duration::from_secs(60));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let body = stdout(&o);
    assert!(body.starts_with("metric,n,value_re,value_im,target_re,target_im,provenance,pass\n"));
    assert!(!body.contains('\r'));
    assert!(body.lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn model_iii_above_bound_is_a_config_error() {
    let o = susylat(&["verify", "--model", "III", "--n", "5"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("`n`"), "{err}");
    assert!(stdout(&o).is_empty());
}

#[test]
fn baby_suite_has_the_four_flow_rows() {
    let o = susylat(&["verify", "--model", "baby"]);
    assert_eq!(o.status.code(), Some(0));
    let body = stdout(&o);
    for s in ["0.1", "0.7", "pi/2", "2"] {
        assert!(body.contains(&format!("flow.baby[s={s}],")), "missing s={s}");
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(susylat(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(susylat(&["sweep", "--metric", "odlro", "--n-list", "50,100"]).status.code(), Some(2));
    assert_eq!(susylat(&["verify", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(susylat(&["verify", "--tol", "nonexistent=1"]).status.code(), Some(2));
    assert_eq!(
        susylat(&["sweep", "--metric", "odlro", "--n-list", "50,100,201"]).status.code(),
        Some(2)
    );
}

#[test]
fn failing_rows_exit_one() {
    // a zero tolerance cannot admit the rounding in the flow comparisons
    let o = susylat(&["verify", "--model", "baby", "--tol", "flow=0"]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stderr(&o).contains("FAIL flow.baby"));
}

#[test]
fn reports_are_deterministic() {
    let a = susylat(&["tables", "--jobs", "1"]);
    let b = susylat(&["tables", "--jobs", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));

    let dir = tempfile::tempdir().unwrap();
    let mut bodies = Vec::new();
    for (i, jobs) in ["1", "2"].iter().enumerate() {
        let path = dir.path().join(format!("r{i}.json"));
        let o = susylat(&[
            "verify",
            "--format",
            "json",
            "--jobs",
            jobs,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert!(v["metadata"]["timestamp"].is_u64());
        bodies.push(v["rows"].clone());
    }
    assert_eq!(bodies[0], bodies[1]);
}

#[test]
fn sweep_writes_series_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("wn.csv");
    let o = susylat(&[
        "sweep",
        "--metric",
        "weyl_gaussian",
        "--n-list",
        "64,256,1024",
        "--alpha",
        "1",
        "--beta",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let series_path = Path::new(&format!("{}.series.json", out.display())).to_path_buf();
    let series: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(series_path).unwrap()).unwrap();
    assert_eq!(series["points"].as_array().unwrap().len(), 3);
    let limit = series["fit"]["limit"].as_f64().unwrap();
    assert!((limit - (-0.5f64).exp()).abs() < 0.01 * (-0.5f64).exp());
    let csv = std::fs::read_to_string(out).unwrap();
    assert!(csv.contains("weyl_gaussian.fit_limit,,"));
    assert!(csv.contains(",published,true"));
}

#[test]
fn sweep_classifies_ceiling_variance() {
    let o = susylat(&["sweep", "--metric", "mesoscopic_variance", "--state", "ceiling", "--n-list", "16,64,256"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("mesoscopic_variance.divergent_slope,,5e-1"));
}

#[test]
fn tolerance_file_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tol.json");
    std::fs::write(&path, r#"{"flow": 0.0}"#).unwrap();
    let o = susylat(&["verify", "--model", "baby", "--tol-file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    std::fs::write(&path, "not json").unwrap();
    let o = susylat(&["verify", "--model", "baby", "--tol-file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("tol-file"));
}

#[test]
fn spectrum_lists_levels() {
    let o = susylat(&["spectrum", "--model", "II", "--n", "2", "--levels", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("level[")).count(), 3);
}
