use std::process::Command;

fn quadseq() -> Command {
    Command::new(env!("CARGO_BIN_EXE_quadseq"))
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |sub: &str| {
        let out = dir.path().join(sub);
        let status = quadseq()
            .args([
                "run", "--preset", "random", "--seed", "5", "--steps", "300", "--out",
            ])
            .arg(&out)
            .status()
            .unwrap();
        assert!(status.success());
        (
            std::fs::read(out.join("report.json")).unwrap(),
            std::fs::read_to_string(out.join("trace.csv")).unwrap(),
        )
    };
    let (a, csv) = run("a");
    let (b, _) = run("b");
    assert_eq!(a, b);
    assert!(csv.starts_with("step,kind,dir,m_lo,m_hi,E_lo,E_hi\n"));
    assert_eq!(csv.lines().count(), 301);
}

#[test]
fn config_file_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("scenario.json");
    let json = dir.path().join("out/report.json");
    std::fs::write(
        &cfg,
        format!(
            r#"{{"basis": ["one", {{"sqrt": 2}}], "frame": [["1", "0"], ["0", "1"]],
                "steps": 50, "checks": ["eq631", "bound63", "ratio-limit"],
                "output": {{"json": {:?}, "interval_width": "1/1000"}}}}"#,
            json
        ),
    )
    .unwrap();
    let out = quadseq()
        .arg("run")
        .arg("--config")
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(&json).unwrap()).unwrap();
    assert_eq!(report["checks"].as_array().unwrap().len(), 3);
    assert_eq!(report["trace"]["interval_width"], "1/1000");
    assert!(report.get("timings").is_none());
}

#[test]
fn explain_and_presets() {
    let out = quadseq().args(["explain", "eq631"]).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("Conservation"));
    let out = quadseq().args(["explain", "nope"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = quadseq().arg("list-presets").output().unwrap();
    assert!(String::from_utf8_lossy(&out.stdout).lines().count() >= 6);
}

#[test]
fn argmin_tie_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("scenario.json");
    // Rational values tie under argmin.
    std::fs::write(&cfg, r#"{"frame": [["1"], ["1"]], "steps": 3}"#).unwrap();
    let out = quadseq()
        .arg("run")
        .arg("--config")
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("step"));
}
