//! Executes a scenario, runs its checks and writes the outputs.

use std::path::{Path, PathBuf};
use std::time::Instant;

use quadseq::{replay_with, GalleryError, Rational, Scenario, ValueError};
use thiserror::Error;

use crate::checks::{run_check, CheckError, Probe, RunContext};
use crate::config::{ConfigError, ScenarioConfig};
use crate::report::{Report, ScenarioEcho, Timings, Trace};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Gallery(#[from] GalleryError),
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error("enclosing trace values: {0}")]
    Value(#[from] ValueError),
    #[error("writing {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("serializing report: {0}")]
    Json(#[from] serde_json::Error),
    #[error("writing trace: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub checks: Vec<String>,
    pub window: Option<usize>,
    pub interval_width: Rational,
    pub seed: u64,
    pub timings: bool,
}

impl RunOptions {
    pub fn from_config(cfg: &ScenarioConfig) -> Self {
        RunOptions {
            checks: cfg.check_names(),
            window: cfg.window,
            interval_width: cfg.interval_width(),
            seed: cfg.seed,
            timings: cfg.timings,
        }
    }
}

pub fn run(cfg: &ScenarioConfig) -> Result<Report, RunError> {
    let scenario = cfg.build()?;
    run_scenario(&scenario, &RunOptions::from_config(cfg))
}

pub fn run_scenario(scenario: &Scenario, opts: &RunOptions) -> Result<Report, RunError> {
    let mut checks: Vec<&str> = Vec::new();
    for c in &opts.checks {
        if !checks.contains(&c.as_str()) {
            checks.push(c);
        }
    }
    let eq631 = checks.contains(&"eq631");
    let bound = checks.contains(&"bound63");
    let mut probe = Probe::default();
    let clock = Instant::now();
    let state = replay_with(scenario, |s| probe.observe(s, eq631, bound))?;
    let mut timings = Timings {
        replay_ms: clock.elapsed().as_secs_f64() * 1e3,
        ..Default::default()
    };
    let ctx = RunContext {
        scenario,
        state: &state,
        probe: &probe,
        window: opts.window,
    };
    let mut verdicts = Vec::with_capacity(checks.len());
    for name in checks {
        let clock = Instant::now();
        verdicts.push(run_check(name, &ctx)?);
        timings
            .checks_ms
            .insert(name.to_string(), clock.elapsed().as_secs_f64() * 1e3);
    }
    let trace = Trace::new(&state, &opts.interval_width)?;
    let mut report = Report::new(ScenarioEcho::new(scenario, opts.seed), verdicts, trace);
    if opts.timings {
        report.timings = Some(timings);
    }
    Ok(report)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), RunError> {
    let io = |source| RunError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(io)?;
    }
    std::fs::write(path, bytes).map_err(io)
}

/// Writes the JSON report and CSV trace to the paths named in the config,
/// and to `report.json` and `trace.csv` under `out_dir` when given.
pub fn write_outputs(
    report: &Report,
    cfg: &ScenarioConfig,
    out_dir: Option<&Path>,
) -> Result<Vec<PathBuf>, RunError> {
    let mut json_paths: Vec<PathBuf> = cfg.output.json.iter().cloned().collect();
    let mut csv_paths: Vec<PathBuf> = cfg.output.csv.iter().cloned().collect();
    if let Some(dir) = out_dir {
        json_paths.push(dir.join("report.json"));
        csv_paths.push(dir.join("trace.csv"));
    }
    let mut written = Vec::new();
    if !json_paths.is_empty() {
        let json = report.to_json()?;
        for p in json_paths {
            write_file(&p, json.as_bytes())?;
            written.push(p);
        }
    }
    if !csv_paths.is_empty() {
        let mut buf = Vec::new();
        report.write_csv(&mut buf)?;
        for p in csv_paths {
            write_file(&p, &buf)?;
            written.push(p);
        }
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checks::Status;

    #[test]
    fn shannon_series_sum_passes() {
        let mut cfg = ScenarioConfig::from_preset("shannon-4.18");
        cfg.checks = Some(vec!["series-sum".into()]);
        let r = run(&cfg).unwrap();
        let v = r.verdict("series-sum").unwrap();
        assert_eq!(v.status, Status::Pass);
        assert_eq!(v.witness["limit"], "8/3");
    }

    #[test]
    fn empty_checks_give_trace_only() {
        let mut cfg = ScenarioConfig::from_preset("rr1");
        cfg.checks = Some(Vec::new());
        let r = run(&cfg).unwrap();
        assert!(r.checks.is_empty() && r.passed);
        assert_eq!(r.trace.rows.len(), 40);
    }

    #[test]
    fn duplicate_checks_run_once() {
        let mut cfg = ScenarioConfig::from_preset("dvr");
        cfg.steps = Some(20);
        cfg.checks = Some(vec!["bound63".into(), "bound63".into()]);
        assert_eq!(run(&cfg).unwrap().checks.len(), 1);
    }
}
