use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use quadseq::{Rational, PRESETS};
use quadseq_cli::{explain, run, verify, write_outputs, ScenarioConfig, CHECKS};

#[derive(Parser)]
#[command(
    name = "quadseq",
    version,
    about = "Replay and check sequences of monomial quadratic transforms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file or a named preset.
    Run {
        #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
        config: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
        /// Steps, or episodes for the episodic presets.
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        dim: Option<usize>,
        /// Comma-separated check names; an empty string runs none.
        #[arg(long)]
        checks: Option<String>,
        /// Directory for report.json and trace.csv.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Width of the printed value enclosures, e.g. 1/1000000.
        #[arg(long)]
        interval_width: Option<Rational>,
        /// Include wall-clock timings in the report.
        #[arg(long)]
        timings: bool,
    },
    /// List the bundled presets.
    ListPresets,
    /// Describe a check.
    Explain { check: String },
    /// List the available checks.
    ListChecks,
    /// Run the acceptance suite.
    Verify {
        #[arg(long)]
        all: bool,
        /// Criterion numbers to run; all when omitted.
        ids: Vec<usize>,
    },
}

fn main() -> ExitCode {
    match real_main(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn real_main(cli: Cli) -> Result<bool, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Run {
            config,
            preset,
            steps,
            seed,
            dim,
            checks,
            out,
            interval_width,
            timings,
        } => {
            let mut cfg = match (config, preset) {
                (Some(path), _) => ScenarioConfig::from_path(&path)?,
                (None, Some(name)) => ScenarioConfig::from_preset(&name),
                (None, None) => unreachable!("clap requires one"),
            };
            cfg.steps = steps.or(cfg.steps);
            cfg.seed = seed.unwrap_or(cfg.seed);
            cfg.dimension = dim.or(cfg.dimension);
            if let Some(list) = checks {
                cfg.checks = Some(
                    list.split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(String::from)
                        .collect(),
                );
            }
            if interval_width.is_some() {
                cfg.output.interval_width = interval_width;
            }
            cfg.timings |= timings;
            cfg.validate()?;
            let report = run(&cfg)?;
            for v in &report.checks {
                println!(
                    "{:<20} {:<15} {}",
                    v.check,
                    format!("{:?}", v.status),
                    v.summary
                );
            }
            println!(
                "{} steps, E ≈ {:.12}",
                report.trace.rows.len(),
                report.trace.partial_sum.to_f64()
            );
            for p in write_outputs(&report, &cfg, out.as_deref())? {
                println!("wrote {}", p.display());
            }
            Ok(report.passed)
        }
        Command::ListPresets => {
            for p in PRESETS {
                println!("{p}");
            }
            Ok(true)
        }
        Command::ListChecks => {
            for c in &CHECKS {
                println!("{}", c.name);
            }
            Ok(true)
        }
        Command::Explain { check } => {
            let info = explain(&check)?;
            println!("{}\n\n{}", info.name, info.doc);
            Ok(true)
        }
        Command::Verify { all, ids } => {
            let ids: Vec<usize> = if all || ids.is_empty() {
                (1..=verify::CRITERIA.len()).collect()
            } else {
                ids
            };
            let mut passed = true;
            for id in ids {
                let o = verify::criterion(id);
                println!("{o}");
                passed &= o.passed;
            }
            Ok(passed)
        }
    }
}
