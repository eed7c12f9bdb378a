//! Report assembly and the JSON and CSV writers.

use std::collections::BTreeMap;
use std::io::Write;

use quadseq::{
    GeneratorSpec, Plan, Rational, RationalInterval, Scenario, SequenceState, StepKind, ValueError,
    ValueVector,
};
use serde::Serialize;

use crate::checks::{Status, Verdict};

#[derive(Clone, Debug, Serialize)]
pub struct ScenarioEcho {
    pub name: String,
    pub dimension: usize,
    pub basis: Vec<GeneratorSpec>,
    pub names: Vec<String>,
    pub frame: Vec<ValueVector>,
    pub mode: &'static str,
    pub steps: usize,
    pub seed: u64,
}

impl ScenarioEcho {
    pub fn new(scenario: &Scenario, seed: u64) -> Self {
        ScenarioEcho {
            name: scenario.name.clone(),
            dimension: scenario.dim(),
            basis: scenario.basis().specs(),
            names: scenario.frame.names().to_vec(),
            frame: scenario.frame.values().to_vec(),
            mode: match scenario.plan {
                Plan::Argmin { .. } => "argmin",
                Plan::Scripted { .. } => "scripted",
            },
            steps: scenario.plan.len(),
            seed,
        }
    }
}

/// One step of the trace; `m` is `v(𝔪_n)` and `partial_sum` is `E` after the step.
#[derive(Clone, Debug, Serialize)]
pub struct TraceRow {
    pub step: usize,
    pub kind: &'static str,
    pub dir: Option<usize>,
    pub m: RationalInterval,
    pub partial_sum: RationalInterval,
}

#[derive(Clone, Debug, Serialize)]
pub struct Trace {
    pub interval_width: Rational,
    pub rows: Vec<TraceRow>,
    pub partial_sum: ValueVector,
    pub final_frame: Vec<ValueVector>,
    pub direction_counts: Vec<u64>,
}

impl Trace {
    pub fn new(state: &SequenceState, width: &Rational) -> Result<Self, ValueError> {
        let mut e = ValueVector::zero(state.frame().basis());
        let mut rows = Vec::with_capacity(state.step());
        for (i, r) in state.history().iter().enumerate() {
            e = &e + &r.m_value;
            rows.push(TraceRow {
                step: i + 1,
                kind: match r.kind {
                    StepKind::Monomial { .. } => "monomial",
                    StepKind::Rescale { .. } => "rescale",
                },
                dir: r.dir(),
                m: r.m_value.enclose(width)?,
                partial_sum: e.enclose(width)?,
            });
        }
        Ok(Trace {
            interval_width: width.clone(),
            rows,
            partial_sum: state.partial_sum().clone(),
            final_frame: state.frame().values().to_vec(),
            direction_counts: state.direction_counts(),
        })
    }
}

/// Wall-clock milliseconds; reported only on request, since they break
/// byte-identical output.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Timings {
    pub replay_ms: f64,
    pub checks_ms: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub scenario: ScenarioEcho,
    pub passed: bool,
    pub checks: Vec<Verdict>,
    pub trace: Trace,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl Report {
    pub fn new(scenario: ScenarioEcho, checks: Vec<Verdict>, trace: Trace) -> Self {
        let passed = checks.iter().all(|v| v.status != Status::Fail);
        Report {
            scenario,
            passed,
            checks,
            trace,
            timings: None,
        }
    }

    pub fn verdict(&self, check: &str) -> Option<&Verdict> {
        self.checks.iter().find(|v| v.check == check)
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// Columns `step,kind,dir,m_lo,m_hi,E_lo,E_hi`.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["step", "kind", "dir", "m_lo", "m_hi", "E_lo", "E_hi"])?;
        for r in &self.trace.rows {
            w.write_record([
                r.step.to_string(),
                r.kind.to_string(),
                r.dir.map(|d| d.to_string()).unwrap_or_default(),
                r.m.lo.to_string(),
                r.m.hi.to_string(),
                r.partial_sum.lo.to_string(),
                r.partial_sum.hi.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}
