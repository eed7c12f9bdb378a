//! The registry of named checks run against a replayed scenario.

use quadseq::{
    check_remark_4175, check_theorem_33a, colength_step, ratio_limit_report, rational_rank,
    tau_bound, videal_at, videal_chain, FormError, Monomial, MonomialForm, Plan, Rational,
    RationalInterval, Scenario, SequenceError, SequenceState, StepKind, Theorem33aOptions,
    VIdealError, ValueError, ValueVector,
};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CheckError {
    #[error("unknown check {0:?}")]
    UnknownCheck(String),
    #[error("{check}: {source}")]
    Sequence {
        check: &'static str,
        source: SequenceError,
    },
    #[error("{check}: {source}")]
    Value {
        check: &'static str,
        source: ValueError,
    },
    #[error("{check}: {source}")]
    Form {
        check: &'static str,
        source: FormError,
    },
    #[error("{check}: {source}")]
    VIdeal {
        check: &'static str,
        source: VIdealError,
    },
}

pub struct CheckInfo {
    pub name: &'static str,
    pub doc: &'static str,
}

pub const CHECKS: [CheckInfo; 11] = [
    CheckInfo {
        name: "eq631",
        doc: "Conservation identity of the series bound proof: within every run of monomial \
              steps, (d-1) times the growth of the partial sum E plus the sum of the current \
              parameter values equals the sum of the values at the start of the run. Checked \
              after every step by exact equality of value vectors.",
    },
    CheckInfo {
        name: "bound63",
        doc: "Series bound for monomial sequences: the partial sum E_n never exceeds the sum \
              of the initial values divided by d-1. Checked exactly at every step; the report \
              also records the first step at which every parameter value is certified below \
              10^-6, which pins E within 10^-6·d/(d-1) of the bound.",
    },
    CheckInfo {
        name: "switching-witness",
        doc: "Finite witness for switching: directions that never occur in the run, and those \
              missing from the last `window` direction-bearing steps. A direction absent forever \
              keeps its parameter outside every transform, so the union of the rings is \
              strictly smaller than the valuation ring.",
    },
    CheckInfo {
        name: "thm33a",
        doc: "Order-drop criterion: along a direction word using every parameter, every \
              nonunit form with generic unit coefficients ends with a strictly smaller order; \
              if a parameter is missing, that parameter's form keeps order one. Exhaustive over \
              small supports via order profiles, plus random samples.",
    },
    CheckInfo {
        name: "prop344",
        doc: "Constraints on the initial values of a monomial run in which every direction \
              occurs: after relabeling by first use, the values increase strictly, the second \
              is not an integer multiple of the first, and (j-2)·a_j < a_1 + ... + a_{j-1} \
              for j >= 3.",
    },
    CheckInfo {
        name: "ratio-limit",
        doc: "Order ratios approximate value ratios: ord(y)/ord(x) in the n-th ring tends to \
              v(y)/v(x). Reports the first n after which the ratio stays within 10^-3 and \
              verifies the bracketing p/q <= ratio < (p+1)/q wherever the witnessing quotients \
              lie in the ring.",
    },
    CheckInfo {
        name: "videal-chain",
        doc: "The descending chain of v-ideals of the base ring: strict descent, each ideal \
              equal to the strict cut of its predecessor, and colength one at every step when \
              the values are rationally independent.",
    },
    CheckInfo {
        name: "tau-bound",
        doc: "Principality bound: for each n, the least prefix of the run after which the \
              first n v-ideals all extend to principal ideals, with minimality verified one \
              step earlier.",
    },
    CheckInfo {
        name: "remark4175",
        doc: "Start of the v-ideal chain when every value is below twice the smallest one: \
              R, then (x_i, ..., x_d) + m^2 for the parameters in increasing value, then m^2, \
              each of colength one.",
    },
    CheckInfo {
        name: "series-sum",
        doc: "Scripted examples against their closed forms: every m-value matches the term \
              law, partial sums agree exactly at episode boundaries, convergent series stay \
              below their limit, divergent ones reach k after k braced groups for k up to \
              1000, and integer-valued runs satisfy E_n >= n.",
    },
    CheckInfo {
        name: "change-of-direction",
        doc: "Two forms of the change-of-direction criterion agree on every prefix: the value \
              form v(m_0) > v(m_{n-1}) and the ideal form m_0 contained in the square of the \
              maximal ideal of R_n.",
    },
];

pub fn explain(name: &str) -> Result<&'static CheckInfo, CheckError> {
    CHECKS
        .iter()
        .find(|c| c.name == name)
        .ok_or_else(|| CheckError::UnknownCheck(name.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub check: String,
    pub status: Status,
    pub summary: String,
    pub witness: Value,
}

impl Verdict {
    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }

    fn new(check: &str, passed: bool, summary: impl Into<String>, witness: Value) -> Self {
        Verdict {
            check: check.to_string(),
            status: if passed { Status::Pass } else { Status::Fail },
            summary: summary.into(),
            witness,
        }
    }

    fn not_applicable(check: &str, why: impl Into<String>) -> Self {
        Verdict {
            check: check.to_string(),
            status: Status::NotApplicable,
            summary: why.into(),
            witness: Value::Null,
        }
    }
}

/// Per-step observations gathered while the plan replays.
#[derive(Clone, Debug, Default)]
pub struct Probe {
    pub eq631_checked: usize,
    pub eq631_failures: Vec<usize>,
    pub bound_checked: usize,
    pub bound_failures: Vec<usize>,
    /// First step with every value certified below `10^-6`.
    pub small_frame_step: Option<usize>,
    pub small_frame_gap: Option<RationalInterval>,
}

impl Probe {
    const KEEP: usize = 10;

    pub fn observe(&mut self, state: &SequenceState, eq631: bool, bound: bool) {
        let step = state.step();
        if eq631 {
            self.eq631_checked += 1;
            if !state.invariant_631_check() && self.eq631_failures.len() < Self::KEEP {
                self.eq631_failures.push(step);
            }
        }
        if bound && !state.has_rescales() {
            self.bound_checked += 1;
            if state.check_bound_63() != Ok(Some(true)) && self.bound_failures.len() < Self::KEEP {
                self.bound_failures.push(step);
            }
            if self.small_frame_step.is_none()
                && state.max_frame_upper() < Rational::new(1, 1_000_000)
            {
                self.small_frame_step = Some(step);
                self.small_frame_gap = state
                    .bound_63()
                    .and_then(|b| b.try_sub(state.partial_sum()).ok())
                    .and_then(|g| g.enclose(&Rational::new(1, 1i64 << 40)).ok());
            }
        }
    }
}

pub struct RunContext<'a> {
    pub scenario: &'a Scenario,
    pub state: &'a SequenceState,
    pub probe: &'a Probe,
    pub window: Option<usize>,
}

impl RunContext<'_> {
    fn monomial_word(&self) -> Option<Vec<usize>> {
        self.state
            .history()
            .iter()
            .map(|r| match r.kind {
                StepKind::Monomial { dir } => Some(dir),
                StepKind::Rescale { .. } => None,
            })
            .collect()
    }
}

pub fn run_check(name: &str, ctx: &RunContext) -> Result<Verdict, CheckError> {
    match name {
        "eq631" => Ok(eq631(ctx)),
        "bound63" => Ok(bound63(ctx)),
        "switching-witness" => switching_witness(ctx),
        "thm33a" => thm33a(ctx),
        "prop344" => prop344(ctx),
        "ratio-limit" => ratio_limit(ctx),
        "videal-chain" => videal_chain_check(ctx),
        "tau-bound" => tau_bound_check(ctx),
        "remark4175" => remark4175(ctx),
        "series-sum" => series_sum(ctx),
        "change-of-direction" => change_of_direction(ctx),
        other => Err(CheckError::UnknownCheck(other.to_string())),
    }
}

fn eq631(ctx: &RunContext) -> Verdict {
    let p = ctx.probe;
    Verdict::new(
        "eq631",
        p.eq631_failures.is_empty(),
        format!("conservation checked after {} steps", p.eq631_checked),
        json!({"steps_checked": p.eq631_checked, "failures": p.eq631_failures}),
    )
}

fn bound63(ctx: &RunContext) -> Verdict {
    let st = ctx.state;
    if st.dim() < 2 || st.has_rescales() {
        return Verdict::not_applicable(
            "bound63",
            "the bound applies to rescale-free runs in dimension at least 2",
        );
    }
    let p = ctx.probe;
    let bound = st.bound_63().expect("applicable");
    let width = Rational::new(1, 1i64 << 40);
    let witness = json!({
        "steps_checked": p.bound_checked,
        "failures": p.bound_failures,
        "bound": bound.enclose(&width).ok(),
        "partial_sum": st.partial_sum().enclose(&width).ok(),
        "small_frame_step": p.small_frame_step,
        "gap_at_small_frame_step": p.small_frame_gap,
    });
    Verdict::new(
        "bound63",
        p.bound_failures.is_empty(),
        format!("E_n <= bound at all {} steps", p.bound_checked),
        witness,
    )
}

fn dir_bearing_counts(state: &SequenceState) -> Vec<u64> {
    let mut counts = vec![0; state.dim()];
    for r in state.history() {
        if let Some(d) = r.dir() {
            counts[d] += 1;
        }
    }
    counts
}

fn switching_witness(ctx: &RunContext) -> Result<Verdict, CheckError> {
    let st = ctx.state;
    let err = |source| CheckError::Sequence {
        check: "switching-witness",
        source,
    };
    let window = ctx.window.unwrap_or(100).min(st.step());
    let starving = st.starving_directions(window).map_err(err)?;
    let never: Vec<usize> = dir_bearing_counts(st)
        .iter()
        .enumerate()
        .filter(|(_, &c)| c == 0)
        .map(|(i, _)| i)
        .collect();
    let names: Vec<&str> = starving
        .iter()
        .map(|&i| st.frame().names()[i].as_str())
        .collect();
    let passed = match &ctx.scenario.expected_starving {
        Some(e) => *e == never && *e == starving,
        None => true,
    };
    Ok(Verdict::new(
        "switching-witness",
        passed,
        format!(
            "starving in the last {window} steps: {{{}}}",
            names.join(", ")
        ),
        json!({
            "window": window,
            "starving": starving,
            "never_used": never,
            "expected": ctx.scenario.expected_starving,
        }),
    ))
}

fn thm33a(ctx: &RunContext) -> Result<Verdict, CheckError> {
    let Some(word) = ctx.monomial_word() else {
        return Ok(Verdict::not_applicable(
            "thm33a",
            "the run contains rescales",
        ));
    };
    let d = ctx.state.dim();
    let word = &word[..word.len().min(6)];
    let opts = Theorem33aOptions {
        max_degree: if d <= 3 { 3 } else { 2 },
        samples: 200,
        seed: 0,
    };
    let r = check_theorem_33a(d, word, &opts).map_err(|source| CheckError::Form {
        check: "thm33a",
        source,
    })?;
    let summary = if r.missing.is_empty() {
        format!(
            "{} order profiles and {} samples drop strictly",
            r.profiles_checked, r.forms_sampled
        )
    } else {
        format!("missing directions {:?} keep order one", r.missing)
    };
    Ok(Verdict::new(
        "thm33a",
        r.passed,
        summary,
        serde_json::to_value(&r).unwrap_or_default(),
    ))
}

fn prop344(ctx: &RunContext) -> Result<Verdict, CheckError> {
    match ctx.state.check_prop_344() {
        Ok(r) => Ok(Verdict::new(
            "prop344",
            r.passed,
            format!("first-use order {:?}", r.order),
            serde_json::to_value(&r).unwrap_or_default(),
        )),
        Err(SequenceError::IncompleteCoverage { missing }) => Ok(Verdict::not_applicable(
            "prop344",
            format!("directions {missing:?} never occur"),
        )),
        Err(SequenceError::RescaleInHistory { .. }) => Ok(Verdict::not_applicable(
            "prop344",
            "the run contains rescales",
        )),
        Err(source) => Err(CheckError::Sequence {
            check: "prop344",
            source,
        }),
    }
}

fn ratio_limit(ctx: &RunContext) -> Result<Verdict, CheckError> {
    let d = ctx.state.dim();
    let steps = match ctx.scenario.plan {
        Plan::Argmin { steps } if d >= 2 => steps.min(200),
        _ => {
            return Ok(Verdict::not_applicable(
                "ratio-limit",
                "needs an argmin run in dimension at least 2",
            ))
        }
    };
    let f = MonomialForm::monomial(Monomial::var(d, 1));
    let g = MonomialForm::monomial(Monomial::var(d, 0));
    let start = SequenceState::init(ctx.scenario.frame.clone());
    let eps = Rational::new(1, 1000);
    let r = ratio_limit_report(&f, &g, &start, steps, &eps).map_err(|source| CheckError::Form {
        check: "ratio-limit",
        source,
    })?;
    let passed = r.bracket_holds() && r.converged_from.is_some();
    let summary = match r.converged_from {
        Some(n) => format!(
            "within 1/1000 of the value ratio from n = {n}; last ratio ≈ {:.9}",
            r.limit.to_f64()
        ),
        None => format!("not within 1/1000 after {steps} steps"),
    };
    Ok(Verdict::new(
        "ratio-limit",
        passed,
        summary,
        serde_json::to_value(&r).unwrap_or_default(),
    ))
}

const CHAIN_LENGTH: usize = 20;

fn videal_chain_check(ctx: &RunContext) -> Result<Verdict, CheckError> {
    let frame = ctx.state.initial_frame();
    let err = |source| CheckError::VIdeal {
        check: "videal-chain",
        source,
    };
    let chain = videal_chain(frame, CHAIN_LENGTH).map_err(err)?;
    let independent = rational_rank(frame.values()) == frame.dim();
    let mut cut_ok = true;
    let mut colength_ok = true;
    for n in 0..chain.len() - 1 {
        let cut = videal_at(frame, &chain.thresholds[n], true).map_err(err)?;
        cut_ok &= cut == chain.ideals[n + 1];
        if independent {
            colength_ok &= colength_step(frame, &chain, n).map_err(err)? == 1;
        }
    }
    let rows = chain.rows(frame).map_err(err)?;
    Ok(Verdict::new(
        "videal-chain",
        cut_ok && colength_ok,
        format!(
            "{} v-ideals, strictly descending{}",
            chain.len(),
            if independent { ", colength one" } else { "" }
        ),
        json!({"independent": independent, "chain": rows}),
    ))
}

fn tau_bound_check(ctx: &RunContext) -> Result<Verdict, CheckError> {
    let Some(word) = ctx.monomial_word() else {
        return Ok(Verdict::not_applicable(
            "tau-bound",
            "the run contains rescales",
        ));
    };
    let frame = ctx.state.initial_frame();
    let err = |source| CheckError::VIdeal {
        check: "tau-bound",
        source,
    };
    let chain = videal_chain(frame, CHAIN_LENGTH).map_err(err)?;
    let tau = tau_bound(&chain, &word).map_err(err)?;
    let minimal =
        tau_is_minimal(&chain.ideals, &word, &tau.values).map_err(|e| CheckError::VIdeal {
            check: "tau-bound",
            source: e.into(),
        })?;
    let monotone = tau.values.windows(2).all(|w| w[0] <= w[1]);
    Ok(Verdict::new(
        "tau-bound",
        minimal && monotone,
        match tau.not_reached {
            Some(n) => format!(
                "bounds up to n = {}; I_{} not principal within the run",
                n - 1,
                n - 1
            ),
            None => format!("bounds for n <= {}", chain.len()),
        },
        serde_json::to_value(&tau).unwrap_or_default(),
    ))
}

/// At `j = tau[n]` the first `n` ideals extend to principal ideals, and at
/// `j − 1` one of them does not.
pub fn tau_is_minimal(
    ideals: &[quadseq::MonomialIdeal],
    word: &[usize],
    tau: &[usize],
) -> Result<bool, quadseq::MonomialError> {
    for (n, &j) in tau.iter().enumerate() {
        let at = |j: usize| -> Result<bool, quadseq::MonomialError> {
            for ideal in &ideals[..n] {
                if !ideal.extend(&word[..j])?.is_principal() {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        if !at(j)? || (j > 0 && at(j - 1)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn remark4175(ctx: &RunContext) -> Result<Verdict, CheckError> {
    match check_remark_4175(ctx.state.initial_frame()) {
        Ok(r) if !r.hypothesis_met => Ok(Verdict::not_applicable(
            "remark4175",
            "the largest value is not below twice the smallest",
        )),
        Ok(r) => Ok(Verdict::new(
            "remark4175",
            r.passed,
            format!("first {} v-ideals as predicted", r.chain.len()),
            serde_json::to_value(&r).unwrap_or_default(),
        )),
        Err(VIdealError::RepeatedValues(a, b)) => Ok(Verdict::not_applicable(
            "remark4175",
            format!("parameters {a} and {b} share a value"),
        )),
        Err(source) => Err(CheckError::VIdeal {
            check: "remark4175",
            source,
        }),
    }
}

/// Groups summed lazily for divergent series.
const DIVERGENCE_GROUPS: usize = 1000;

fn series_sum(ctx: &RunContext) -> Result<Verdict, CheckError> {
    let sc = ctx.scenario;
    let st = ctx.state;
    if sc.law.is_none() && sc.min_term.is_none() {
        return Ok(Verdict::not_applicable(
            "series-sum",
            "no closed form for this scenario",
        ));
    }
    let ms: Vec<&ValueVector> = st.history().iter().map(|r| &r.m_value).collect();
    let mut witness = serde_json::Map::new();
    let mut passed = true;
    let mut summary = Vec::new();
    let partial: Vec<Option<Rational>> = {
        let mut acc = Some(Rational::zero());
        ms.iter()
            .map(|m| {
                acc = match (&acc, m.as_rational()) {
                    (Some(a), Some(q)) => Some(a + &q),
                    _ => None,
                };
                acc.clone()
            })
            .collect()
    };
    if let Some(law) = sc.law {
        let terms = law.terms(ms.len());
        let mismatch = ms
            .iter()
            .zip(&terms)
            .position(|(m, t)| m.as_rational().as_ref() != Some(t));
        passed &= mismatch.is_none();
        witness.insert("first_term_mismatch".into(), json!(mismatch));
        let bad_checkpoint = sc.checkpoints.iter().find(|c| {
            c.step == 0 || partial.get(c.step - 1).cloned().flatten() != Some(c.partial_sum.clone())
        });
        passed &= bad_checkpoint.is_none();
        witness.insert("checkpoints".into(), json!(sc.checkpoints.len()));
        witness.insert("failed_checkpoint".into(), json!(bad_checkpoint));
        let e = partial.last().cloned().flatten();
        witness.insert("partial_sum".into(), json!(e));
        match law.limit() {
            Some(limit) => {
                if let Some(e) = &e {
                    passed &= *e < limit;
                    witness.insert("distance_to_limit".into(), json!(&limit - e));
                }
                witness.insert("limit".into(), json!(limit));
                summary.push(format!("partial sums approach {limit}"));
            }
            None => {
                let mut sum = Rational::zero();
                let mut groups = 0usize;
                let mut ok = true;
                for run in law.runs() {
                    sum = &sum + &run.sum();
                    if run.group {
                        ok &= run.sum() == Rational::one();
                        groups += 1;
                        ok &= sum >= Rational::from(groups as i64);
                        if groups == DIVERGENCE_GROUPS {
                            break;
                        }
                    }
                }
                passed &= ok;
                witness.insert("groups".into(), json!(groups));
                witness.insert("sum_after_groups".into(), json!(sum));
                summary.push(format!("sum >= k after k groups for k <= {groups}"));
            }
        }
    }
    if let Some(min) = &sc.min_term {
        let below = ms
            .iter()
            .position(|m| m.as_rational().map_or(true, |q| q < *min));
        let e_ok = partial.iter().enumerate().all(|(i, p)| {
            p.as_ref()
                .is_some_and(|p| *p >= min * &Rational::from((i + 1) as i64))
        });
        passed &= below.is_none() && e_ok;
        witness.insert("first_small_term".into(), json!(below));
        summary.push(format!("E_n >= {min}·n for n <= {}", ms.len()));
    }
    Ok(Verdict::new(
        "series-sum",
        passed,
        summary.join("; "),
        Value::Object(witness),
    ))
}

fn change_of_direction(ctx: &RunContext) -> Result<Verdict, CheckError> {
    let st = ctx.state;
    let by_ideals = match st.change_of_direction_by_ideals() {
        Ok(v) => v,
        Err(SequenceError::RescaleInHistory { .. }) => {
            return Ok(Verdict::not_applicable(
                "change-of-direction",
                "the run contains rescales",
            ))
        }
        Err(source) => {
            return Err(CheckError::Sequence {
                check: "change-of-direction",
                source,
            })
        }
    };
    let mut disagreements = Vec::new();
    for n in 1..=st.step() {
        let by_value = st
            .change_of_direction(n)
            .map_err(|source| CheckError::Sequence {
                check: "change-of-direction",
                source,
            })?;
        if by_value != by_ideals[n - 1] && disagreements.len() < 10 {
            disagreements.push(n);
        }
    }
    let first = by_ideals.iter().position(|&b| b).map(|i| i + 1);
    Ok(Verdict::new(
        "change-of-direction",
        disagreements.is_empty(),
        format!("value and ideal forms agree on {} prefixes", st.step()),
        json!({"prefixes": st.step(), "first_change": first, "disagreements": disagreements}),
    ))
}
