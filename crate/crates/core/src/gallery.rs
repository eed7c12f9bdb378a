//! Worked examples as replayable scenarios, with their closed-form series.
//!
//! Examples over rationally dependent values are scripted: every step carries
//! its direction and the m-value the derivation predicts, and replay rejects
//! any disagreement. Long series are also available as run-length term
//! streams, so thousands of groups cost nothing to sum.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::rational::Rational;
use crate::sequence::{ParameterFrame, SequenceError, SequenceState, StepKind};
use crate::values::{RealBasis, ValueError, ValueVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GalleryError {
    #[error("at least one episode is required")]
    NoEpisodes,
    #[error("dimension {dim} outside {min}..={max}")]
    DimensionOutOfRange { dim: usize, min: usize, max: usize },
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("step {step}: {source}")]
    Step { step: usize, source: SequenceError },
    #[error("step {step}: m-value {found} differs from the scripted {expected}")]
    MValueMismatch {
        step: usize,
        expected: String,
        found: String,
    },
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Value(#[from] ValueError),
}

/// A scripted step, with the m-value it must produce when one is predicted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScriptedStep {
    #[serde(flatten)]
    pub kind: StepKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_value: Option<ValueVector>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Plan {
    Argmin { steps: usize },
    Scripted { steps: Vec<ScriptedStep> },
}

impl Plan {
    pub fn len(&self) -> usize {
        match self {
            Plan::Argmin { steps } => *steps,
            Plan::Scripted { steps } => steps.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `count` consecutive terms equal to `value`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermRun {
    #[serde(serialize_with = "as_decimal")]
    pub count: BigUint,
    pub value: Rational,
    /// Runs shown as braced groups in the series, each summing to 1.
    pub group: bool,
}

fn as_decimal<S: serde::Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(n)
}

impl TermRun {
    fn single(value: Rational) -> Self {
        TermRun {
            count: BigUint::one(),
            value,
            group: false,
        }
    }

    pub fn sum(&self) -> Rational {
        &self.value * &Rational::from(BigInt::from(self.count.clone()))
    }
}

/// Closed-form series laws of the scripted examples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesLaw {
    Shannon418,
    NotUnionRr1,
    Gmr713,
    Gmr714,
}

fn pow2(k: i64) -> Rational {
    if k >= 0 {
        Rational::from(BigInt::one() << k as u64)
    } else {
        Rational::new(1, BigInt::one() << (-k) as u64)
    }
}

impl SeriesLaw {
    /// The term stream, episode by episode, without end.
    pub fn runs(self) -> Box<dyn Iterator<Item = TermRun>> {
        match self {
            SeriesLaw::Shannon418 => Box::new((0i64..).flat_map(|k| {
                let c = pow2(-2 * k);
                [0, 1, 2, 2].map(|s| TermRun::single(&c * &pow2(-s)))
            })),
            SeriesLaw::NotUnionRr1 => {
                Box::new((0i64..).flat_map(|k| [-k, -k - 1].map(|e| TermRun::single(pow2(e)))))
            }
            SeriesLaw::Gmr713 => Box::new((0i64..).flat_map(|n| {
                let b = pow2(-n);
                let half = &b * &pow2(-1);
                [
                    TermRun {
                        count: BigUint::one() << n as u64,
                        value: b,
                        group: true,
                    },
                    TermRun::single(half.clone()),
                    TermRun::single(half),
                ]
            })),
            SeriesLaw::Gmr714 => Box::new(std::iter::once(TermRun::single(Rational::one())).chain(
                (0i64..).flat_map(|n| {
                    let b = pow2(-2 * n);
                    [
                        TermRun {
                            count: BigUint::one() << (2 * n) as u64,
                            value: b.clone(),
                            group: true,
                        },
                        TermRun::single(&b * &pow2(-1)),
                        TermRun::single(&b * &pow2(-2)),
                        TermRun::single(&b * &pow2(-2)),
                    ]
                }),
            )),
        }
    }

    /// The first `n` terms, expanded.
    pub fn terms(self, n: usize) -> Vec<Rational> {
        let mut out = Vec::with_capacity(n);
        for run in self.runs() {
            let mut c = run.count.clone();
            while !c.is_zero() && out.len() < n {
                out.push(run.value.clone());
                c -= 1u32;
            }
            if out.len() == n {
                break;
            }
        }
        out
    }

    /// Sum of the stream through the end of the `k`-th braced group.
    pub fn sum_through_groups(self, k: usize) -> Rational {
        let mut seen = 0;
        let mut sum = Rational::zero();
        if k == 0 {
            return sum;
        }
        for run in self.runs() {
            sum = &sum + &run.sum();
            if run.group {
                seen += 1;
                if seen == k {
                    break;
                }
            }
        }
        sum
    }

    pub fn limit(self) -> Option<Rational> {
        match self {
            SeriesLaw::Shannon418 => Some(Rational::new(8, 3)),
            SeriesLaw::NotUnionRr1 => Some(Rational::from(3)),
            SeriesLaw::Gmr713 | SeriesLaw::Gmr714 => None,
        }
    }
}

/// `E` after a given number of steps, from a closed form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Checkpoint {
    pub step: usize,
    pub partial_sum: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Scenario {
    pub name: String,
    pub frame: ParameterFrame,
    pub plan: Plan,
    pub law: Option<SeriesLaw>,
    pub checkpoints: Vec<Checkpoint>,
    /// Every m-value is at least this, so `E_n >= n·min_term`.
    pub min_term: Option<Rational>,
    /// Directions expected to starve over long windows.
    pub expected_starving: Option<Vec<usize>>,
}

impl Scenario {
    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    pub fn basis(&self) -> &Arc<RealBasis> {
        self.frame.basis()
    }
}

/// Runs the plan, calling `each` on the state after every step.
pub fn replay_with<F>(scenario: &Scenario, mut each: F) -> Result<SequenceState, GalleryError>
where
    F: FnMut(&SequenceState),
{
    let mut state = SequenceState::init(scenario.frame.clone());
    match &scenario.plan {
        Plan::Argmin { steps } => {
            for step in 0..*steps {
                state
                    .step_argmin()
                    .map_err(|source| GalleryError::Step { step, source })?;
                each(&state);
            }
        }
        Plan::Scripted { steps } => {
            for (step, s) in steps.iter().enumerate() {
                let r = match &s.kind {
                    StepKind::Monomial { dir } => state.step_in_direction(*dir),
                    StepKind::Rescale {
                        dir: Some(dir),
                        new_values,
                    } => state.rescale_step_in(*dir, new_values.clone()),
                    StepKind::Rescale {
                        dir: None,
                        new_values,
                    } => state.rescale_step(new_values.clone()),
                };
                r.map_err(|source| GalleryError::Step { step, source })?;
                let found = &state.history()[step].m_value;
                if let Some(expected) = s.m_value.as_ref().filter(|m| *m != found) {
                    return Err(GalleryError::MValueMismatch {
                        step,
                        expected: expected.to_string(),
                        found: found.to_string(),
                    });
                }
                each(&state);
            }
        }
    }
    Ok(state)
}

pub fn replay(scenario: &Scenario) -> Result<SequenceState, GalleryError> {
    replay_with(scenario, |_| {})
}

struct Script {
    basis: Arc<RealBasis>,
    steps: Vec<ScriptedStep>,
}

impl Script {
    fn new(basis: &Arc<RealBasis>) -> Self {
        Script {
            basis: basis.clone(),
            steps: Vec::new(),
        }
    }

    fn q(&self, q: Rational) -> ValueVector {
        ValueVector::rational(&self.basis, q).expect("rational basis")
    }

    fn mono(&mut self, dir: usize, m: Rational) {
        let m_value = Some(self.q(m));
        self.steps.push(ScriptedStep {
            kind: StepKind::Monomial { dir },
            m_value,
        });
    }

    fn rescale(&mut self, dir: usize, m: Rational, new_values: &[Rational]) {
        let new_values = new_values.iter().map(|v| self.q(v.clone())).collect();
        let m_value = Some(self.q(m));
        self.steps.push(ScriptedStep {
            kind: StepKind::Rescale {
                dir: Some(dir),
                new_values,
            },
            m_value,
        });
    }
}

fn rational_frame(basis: &Arc<RealBasis>, values: &[Rational]) -> ParameterFrame {
    ParameterFrame::with_default_names(
        values
            .iter()
            .map(|v| ValueVector::rational(basis, v.clone()).expect("rational basis"))
            .collect(),
    )
    .expect("positive values")
}

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Three parameters; each episode at scale `c = 4^{-k}` starts from
/// `(c, 3c/2, 7c/4)`, steps in `x`, `y`, `z` and then rescales to the next
/// episode's frame.
pub fn gen_shannon_418(episodes: usize) -> Result<Scenario, GalleryError> {
    if episodes == 0 {
        return Err(GalleryError::NoEpisodes);
    }
    let basis = RealBasis::rational();
    let shape = [r(1, 1), r(3, 2), r(7, 4)];
    let mut s = Script::new(&basis);
    let mut checkpoints = Vec::with_capacity(episodes);
    for k in 0..episodes as i64 {
        let c = pow2(-2 * k);
        s.mono(0, c.clone());
        s.mono(1, &c * &pow2(-1));
        s.mono(2, &c * &pow2(-2));
        let next: Vec<Rational> = shape.iter().map(|a| a * &c * pow2(-2)).collect();
        s.rescale(0, &c * &pow2(-2), &next);
        checkpoints.push(Checkpoint {
            step: s.steps.len(),
            partial_sum: r(8, 3) * (Rational::one() - pow2(-2 * (k + 1))),
        });
    }
    Ok(Scenario {
        name: "shannon-4.18".into(),
        frame: rational_frame(&basis, &shape),
        plan: Plan::Scripted { steps: s.steps },
        law: Some(SeriesLaw::Shannon418),
        checkpoints,
        min_term: None,
        expected_starving: None,
    })
}

/// Two parameters starting at `(1, 1)`: a rescale dividing by `x` with
/// m-value `2^{-k}` followed by a `y` step with m-value `2^{-k-1}`, for
/// `k = 0, 1, …`. With `embed3d`, a third parameter `z` of initial value 4
/// loses every m-value and is never a direction.
pub fn gen_notunion_rr1(steps: usize, embed3d: bool) -> Result<Scenario, GalleryError> {
    if steps == 0 {
        return Err(GalleryError::NoEpisodes);
    }
    let basis = RealBasis::rational();
    let mut s = Script::new(&basis);
    let mut z = Rational::from(4);
    let mut checkpoints = Vec::new();
    let mut sum = Rational::zero();
    for i in 0..steps {
        let k = (i / 2) as i64;
        let m = if i % 2 == 0 { pow2(-k) } else { pow2(-k - 1) };
        z = &z - &m;
        if i % 2 == 0 {
            let mut next = vec![pow2(-k), pow2(-k - 1)];
            if embed3d {
                next.push(z.clone());
            }
            s.rescale(0, m.clone(), &next);
        } else {
            s.mono(1, m.clone());
        }
        sum = &sum + &m;
        if i % 2 == 1 {
            checkpoints.push(Checkpoint {
                step: i + 1,
                partial_sum: sum.clone(),
            });
        }
    }
    let mut initial = vec![Rational::one(), Rational::one()];
    if embed3d {
        initial.push(Rational::from(4));
    }
    Ok(Scenario {
        name: if embed3d { "rr1-3d" } else { "rr1" }.into(),
        frame: rational_frame(&basis, &initial),
        plan: Plan::Scripted { steps: s.steps },
        law: Some(SeriesLaw::NotUnionRr1),
        checkpoints,
        min_term: None,
        expected_starving: Some(if embed3d { vec![2] } else { Vec::new() }),
    })
}

/// Quotient-side model of the `gmr-7.13` preset in the parameters `(y, z)`.
///
/// Episode `n` at scale `b = 2^{-n}` starts from `(b, (2^n + 1/2)·b)`, takes
/// `2^n` steps in `y`, one in `z`, then the translated `y′` step to
/// `(b/2, (2^{n+1} + 1/2)·b/2)`.
pub fn gen_713(episodes: usize) -> Result<Scenario, GalleryError> {
    if episodes == 0 {
        return Err(GalleryError::NoEpisodes);
    }
    let basis = RealBasis::rational();
    let mut s = Script::new(&basis);
    let mut checkpoints = Vec::new();
    let mut sum = Rational::zero();
    for n in 0..episodes as i64 {
        let b = pow2(-n);
        let half = &b * &pow2(-1);
        for _ in 0..(1u64 << n) {
            s.mono(0, b.clone());
        }
        s.mono(1, half.clone());
        let next = [half.clone(), &(pow2(n + 1) + r(1, 2)) * &half];
        s.rescale(0, half.clone(), &next);
        sum = &sum + &(Rational::one() + b);
        checkpoints.push(Checkpoint {
            step: s.steps.len(),
            partial_sum: sum.clone(),
        });
    }
    let frame = ParameterFrame::new(
        vec!["y".into(), "z".into()],
        [Rational::one(), r(3, 2)]
            .iter()
            .map(|v| ValueVector::rational(&basis, v.clone()).expect("rational basis"))
            .collect(),
    )?;
    Ok(Scenario {
        name: "gmr-7.13".into(),
        frame,
        plan: Plan::Scripted { steps: s.steps },
        law: Some(SeriesLaw::Gmr713),
        checkpoints,
        min_term: None,
        expected_starving: None,
    })
}

/// Quotient-side model of the `gmr-7.14` preset in the parameters `(y, z, w)`.
///
/// After an opening `y` step from `(1, 5/2, 11/4)`, episode `n` at scale
/// `b = 4^{-n}` starts from `(b, (4^n + 1/2)·b, (4^n + 3/4)·b)`, takes `4^n`
/// steps in `y`, one in `z`, one in `w`, then the translated `y′` step to the
/// next episode's frame.
pub fn gen_714(episodes: usize) -> Result<Scenario, GalleryError> {
    if episodes == 0 {
        return Err(GalleryError::NoEpisodes);
    }
    let basis = RealBasis::rational();
    let mut s = Script::new(&basis);
    let mut checkpoints = Vec::new();
    s.mono(0, Rational::one());
    let mut sum = Rational::one();
    for n in 0..episodes as i64 {
        let b = pow2(-2 * n);
        for _ in 0..(1u64 << (2 * n)) {
            s.mono(0, b.clone());
        }
        s.mono(1, &b * &pow2(-1));
        s.mono(2, &b * &pow2(-2));
        let nb = &b * &pow2(-2);
        let big = pow2(2 * n + 2);
        let next = [
            nb.clone(),
            &(&big + &r(1, 2)) * &nb,
            &(&big + &r(3, 4)) * &nb,
        ];
        s.rescale(0, nb.clone(), &next);
        sum = &sum + &(Rational::one() + b);
        checkpoints.push(Checkpoint {
            step: s.steps.len(),
            partial_sum: sum.clone(),
        });
    }
    let frame = ParameterFrame::new(
        vec!["y".into(), "z".into(), "w".into()],
        [Rational::one(), r(5, 2), r(11, 4)]
            .iter()
            .map(|v| ValueVector::rational(&basis, v.clone()).expect("rational basis"))
            .collect(),
    )?;
    Ok(Scenario {
        name: "gmr-7.14".into(),
        frame,
        plan: Plan::Scripted { steps: s.steps },
        law: Some(SeriesLaw::Gmr714),
        checkpoints,
        min_term: None,
        expected_starving: None,
    })
}

fn check_dim(d: usize, min: usize, max: usize) -> Result<(), GalleryError> {
    if d < min || d > max {
        return Err(GalleryError::DimensionOutOfRange { dim: d, min, max });
    }
    Ok(())
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(1..=9), rng.gen_range(1..=9))
}

/// The frame `(c_0, c_1·√2, c_2·√3, …)` for random small rationals `c_i`.
fn diagonal_values(d: usize, rng: &mut ChaCha8Rng) -> (Arc<RealBasis>, Vec<ValueVector>) {
    let basis = RealBasis::sqrt_primes(d - 1);
    let values = (0..d)
        .map(|i| {
            let c = small_rational(rng);
            ValueVector::generator(&basis, i)
                .expect("in range")
                .scale(&c)
        })
        .collect();
    (basis, values)
}

/// Values `c_i·√p_i` over distinct primes, one slot rational, followed by
/// `steps` argmin steps.
pub fn gen_random_independent(d: usize, seed: u64, steps: usize) -> Result<Scenario, GalleryError> {
    check_dim(d, 2, 6)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (_, values) = diagonal_values(d, &mut rng);
    Ok(Scenario {
        name: format!("random-independent-d{d}-s{seed}"),
        frame: ParameterFrame::with_default_names(values)?,
        plan: Plan::Argmin { steps },
        law: None,
        checkpoints: Vec::new(),
        min_term: None,
        expected_starving: None,
    })
}

/// A random independent frame whose argmin run switches among all
/// directions and shrinks every value by a factor above `10^7`.
///
/// Built backwards: a random diagonal frame is inverse-stepped along a random
/// word using every direction until the values have grown past the factor,
/// then scaled by a power of two to a maximum near 1. The forward run
/// retraces the word, since the inverted direction always holds the unique
/// minimum.
pub fn gen_random_switching(d: usize, seed: u64, steps: usize) -> Result<Scenario, GalleryError> {
    check_dim(d, 2, 6)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (basis, terminal) = diagonal_values(d, &mut rng);
    let start_max = terminal.iter().map(ValueVector::to_f64).fold(0.0, f64::max);
    let mut values = terminal;
    let mut used = vec![false; d];
    loop {
        let dir = rng.gen_range(0..d);
        used[dir] = true;
        let pivot = values[dir].clone();
        for (w, v) in values.iter_mut().enumerate() {
            if w != dir {
                *v = &*v + &pivot;
            }
        }
        let max = values.iter().map(ValueVector::to_f64).fold(0.0, f64::max);
        if used.iter().all(|&u| u) && max > 1e7 * start_max {
            break;
        }
    }
    let max = values.iter().map(ValueVector::to_f64).fold(0.0, f64::max);
    let shift = max.log2().ceil() as i64;
    let scale = pow2(-shift);
    let values: Vec<ValueVector> = values.iter().map(|v| v.scale(&scale)).collect();
    debug_assert!(values.iter().all(|v| v.basis() == &basis));
    Ok(Scenario {
        name: format!("random-switching-d{d}-s{seed}"),
        frame: ParameterFrame::with_default_names(values)?,
        plan: Plan::Argmin { steps },
        law: None,
        checkpoints: Vec::new(),
        min_term: None,
        expected_starving: None,
    })
}

/// Integer values `(1, 2, …, d)`. Steps follow the unique minimum; on a tie
/// the first tied parameter divides, the other tied parameters reset to 1 and
/// the rest lose the minimum, so the frame stays integral and positive.
pub fn gen_dvr(d: usize, steps: usize) -> Result<Scenario, GalleryError> {
    check_dim(d, 2, usize::MAX)?;
    let basis = RealBasis::rational();
    let mut vals: Vec<BigInt> = (1..=d as i64).map(BigInt::from).collect();
    let mut s = Script::new(&basis);
    for _ in 0..steps {
        let min = vals.iter().min().expect("nonempty").clone();
        let tied: Vec<usize> = (0..d).filter(|&i| vals[i] == min).collect();
        let dir = tied[0];
        let m = Rational::from(min.clone());
        if tied.len() == 1 {
            for (i, v) in vals.iter_mut().enumerate() {
                if i != dir {
                    *v -= &min;
                }
            }
            s.mono(dir, m);
        } else {
            for (i, v) in vals.iter_mut().enumerate() {
                if i == dir {
                    continue;
                }
                if tied.contains(&i) {
                    *v = BigInt::one();
                } else {
                    *v -= &min;
                }
            }
            let next: Vec<Rational> = vals.iter().map(|v| Rational::from(v.clone())).collect();
            s.rescale(dir, m, &next);
        }
    }
    let initial: Vec<Rational> = (1..=d as i64).map(Rational::from).collect();
    Ok(Scenario {
        name: "dvr".into(),
        frame: rational_frame(&basis, &initial),
        plan: Plan::Scripted { steps: s.steps },
        law: None,
        checkpoints: Vec::new(),
        min_term: Some(Rational::one()),
        expected_starving: None,
    })
}

pub const PRESETS: [&str; 7] = [
    "shannon-4.18",
    "rr1",
    "gmr-7.13",
    "gmr-7.14",
    "dvr",
    "random",
    "random-diagonal",
];

/// Knobs shared by the presets; `None` picks each preset's default.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PresetOptions {
    pub steps: Option<usize>,
    pub seed: u64,
    pub dim: Option<usize>,
}

/// Builds a named preset. `steps` counts episodes for the episodic examples
/// and steps otherwise.
pub fn preset(name: &str, opts: &PresetOptions) -> Result<Scenario, GalleryError> {
    match name {
        "shannon-4.18" => gen_shannon_418(opts.steps.unwrap_or(20)),
        "rr1" => gen_notunion_rr1(opts.steps.unwrap_or(40), true),
        "gmr-7.13" => gen_713(opts.steps.unwrap_or(10)),
        "gmr-7.14" => gen_714(opts.steps.unwrap_or(6)),
        "dvr" => gen_dvr(opts.dim.unwrap_or(3), opts.steps.unwrap_or(1000)),
        "random" => {
            gen_random_switching(opts.dim.unwrap_or(3), opts.seed, opts.steps.unwrap_or(2000))
        }
        "random-diagonal" => {
            gen_random_independent(opts.dim.unwrap_or(3), opts.seed, opts.steps.unwrap_or(2000))
        }
        other => Err(GalleryError::UnknownPreset(other.to_string())),
    }
}

/// Whether the m-values never increase between consecutive monomial steps.
pub fn m_values_nonincreasing(state: &SequenceState) -> Result<bool, ValueError> {
    let h = state.history();
    for i in 1..h.len() {
        if h[i - 1].is_monomial()
            && h[i].is_monomial()
            && h[i].m_value.try_cmp(&h[i - 1].m_value)? == Ordering::Greater
        {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sums(state: &SequenceState) -> Vec<Rational> {
        let mut acc = Rational::zero();
        state
            .history()
            .iter()
            .map(|h| {
                acc = &acc + &h.m_value.as_rational().unwrap();
                acc.clone()
            })
            .collect()
    }

    #[test]
    fn shannon_episodes() {
        let sc = gen_shannon_418(3).unwrap();
        let st = replay(&sc).unwrap();
        assert_eq!(sums(&st)[3], Rational::from(2));
        for c in &sc.checkpoints {
            assert_eq!(sums(&st)[c.step - 1], c.partial_sum);
        }
        let m: Vec<String> = st.history()[4..8]
            .iter()
            .map(|h| h.m_value.to_string())
            .collect();
        assert_eq!(m, vec!["1/4", "1/8", "1/16", "1/16"]);
        assert_eq!(st.direction_counts(), vec![3, 3, 3]);
        let terms = SeriesLaw::Shannon418.terms(12);
        let ms: Vec<Rational> = st
            .history()
            .iter()
            .map(|h| h.m_value.as_rational().unwrap())
            .collect();
        assert_eq!(terms, ms);
        assert_eq!(gen_shannon_418(0), Err(GalleryError::NoEpisodes));
    }

    #[test]
    fn rr1_prefix_and_starving() {
        let sc = gen_notunion_rr1(4, false).unwrap();
        let st = replay(&sc).unwrap();
        assert_eq!(sums(&st)[3], r(9, 4));
        let sc = gen_notunion_rr1(30, true).unwrap();
        let st = replay(&sc).unwrap();
        assert_eq!(st.direction_counts()[2], 0);
        for w in 2..=30 {
            assert_eq!(st.starving_directions(w).unwrap(), vec![2]);
        }
        let q = st.quotient_sequence(2).unwrap();
        let flat = replay(&gen_notunion_rr1(30, false).unwrap()).unwrap();
        assert_eq!(q.history(), flat.history());
        assert_eq!(q.partial_sum(), flat.partial_sum());
    }

    #[test]
    fn gmr_streams_match_replay() {
        for (sc, law) in [
            (gen_713(5).unwrap(), SeriesLaw::Gmr713),
            (gen_714(3).unwrap(), SeriesLaw::Gmr714),
        ] {
            let st = replay(&sc).unwrap();
            let ms: Vec<Rational> = st
                .history()
                .iter()
                .map(|h| h.m_value.as_rational().unwrap())
                .collect();
            assert_eq!(law.terms(ms.len()), ms);
            for c in &sc.checkpoints {
                assert_eq!(sums(&st)[c.step - 1], c.partial_sum);
            }
        }
        let t: Vec<String> = SeriesLaw::Gmr713
            .terms(5)
            .iter()
            .map(|q| q.to_string())
            .collect();
        assert_eq!(t, vec!["1", "1/2", "1/2", "1/2", "1/2"]);
        assert_eq!(SeriesLaw::Gmr713.sum_through_groups(2), Rational::from(3));
        assert_eq!(SeriesLaw::Gmr714.sum_through_groups(2), Rational::from(4));
        assert!(SeriesLaw::Gmr714.sum_through_groups(1000) >= Rational::from(1000));
    }

    #[test]
    fn dvr_terms_at_least_one() {
        let sc = gen_dvr(2, 50).unwrap();
        let st = replay(&sc).unwrap();
        assert!(st
            .history()
            .iter()
            .all(|h| h.m_value.as_rational().unwrap() >= Rational::one()));
        assert!(st.partial_sum().as_rational().unwrap() >= Rational::from(50));
    }

    #[test]
    fn random_generators() {
        let a = gen_random_independent(3, 7, 50).unwrap();
        assert_eq!(a, gen_random_independent(3, 7, 50).unwrap());
        let st = replay_with(&a, |s| assert!(s.invariant_631_check())).unwrap();
        assert_eq!(st.step(), 50);
        assert!(gen_random_independent(1, 0, 1).is_err());

        let sc = gen_random_switching(4, 3, 3000).unwrap();
        let st = replay(&sc).unwrap();
        assert!(st.direction_counts().iter().all(|&c| c > 0));
        assert!(st.max_frame_upper() < r(1, 1_000_000));
        assert_eq!(st.check_bound_63().unwrap(), Some(true));
    }

    #[test]
    fn presets_build() {
        let opts = PresetOptions {
            steps: Some(3),
            ..Default::default()
        };
        for name in PRESETS {
            let sc = preset(name, &opts).unwrap();
            replay(&sc).unwrap();
        }
        assert!(matches!(
            preset("nope", &opts),
            Err(GalleryError::UnknownPreset(_))
        ));
    }
}
