//! Directed sequences of monomial local quadratic transforms, tracked through
//! the values of the current regular system of parameters.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::monomial::{variable_names, RewriteMatrix};
use crate::rational::Rational;
use crate::values::{RationalInterval, RealBasis, ValueError, ValueVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("a frame needs at least one parameter")]
    EmptyFrame,
    #[error("value of parameter {index} is not positive")]
    NonPositiveValue { index: usize },
    #[error("minimum value is attained by several parameters {candidates:?}")]
    AmbiguousDirection { candidates: Vec<usize> },
    #[error("parameter {dir} is not minimal: parameter {smaller} has a smaller value")]
    DirectionNotMinimal { dir: usize, smaller: usize },
    #[error("index {index} out of range (limit {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("step {step} uses the killed direction {dir}")]
    KilledDirectionUsed { step: usize, dir: usize },
    #[error("directions {missing:?} never occur")]
    IncompleteCoverage { missing: Vec<usize> },
    #[error("expected {expected} values, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("step {step} is a rescale; only monomial histories are accepted here")]
    RescaleInHistory { step: usize },
    #[error(transparent)]
    Value(#[from] ValueError),
}

/// Names and values of a regular system of parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParameterFrame {
    names: Vec<String>,
    values: Vec<ValueVector>,
}

impl ParameterFrame {
    pub fn new(names: Vec<String>, values: Vec<ValueVector>) -> Result<Self, SequenceError> {
        if values.is_empty() {
            return Err(SequenceError::EmptyFrame);
        }
        if names.len() != values.len() {
            return Err(SequenceError::DimensionMismatch {
                expected: values.len(),
                found: names.len(),
            });
        }
        let basis = values[0].basis().clone();
        for (index, v) in values.iter().enumerate() {
            if **v.basis() != *basis {
                return Err(ValueError::BasisMismatch.into());
            }
            if !v.is_positive()? {
                return Err(SequenceError::NonPositiveValue { index });
            }
        }
        Ok(ParameterFrame { names, values })
    }

    pub fn with_default_names(values: Vec<ValueVector>) -> Result<Self, SequenceError> {
        Self::new(variable_names(values.len()), values)
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn values(&self) -> &[ValueVector] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &ValueVector {
        &self.values[i]
    }

    pub fn basis(&self) -> &Arc<RealBasis> {
        self.values[0].basis()
    }

    pub fn sum(&self) -> ValueVector {
        let mut acc = ValueVector::zero(self.basis());
        for v in &self.values {
            acc = &acc + v;
        }
        acc
    }

    fn without(&self, killed: usize) -> Self {
        let keep = |i: usize| i != killed;
        ParameterFrame {
            names: (0..self.dim())
                .filter(|&i| keep(i))
                .map(|i| self.names[i].clone())
                .collect(),
            values: (0..self.dim())
                .filter(|&i| keep(i))
                .map(|i| self.values[i].clone())
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepKind {
    /// A monomial transform dividing by the parameter `dir`.
    Monomial { dir: usize },
    /// A non-monomial transform given by its new frame values. `dir` names the
    /// parameter divided by, when there is one.
    Rescale {
        dir: Option<usize>,
        new_values: Vec<ValueVector>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    #[serde(flatten)]
    pub kind: StepKind,
    /// `v(𝔪_n)`: the frame minimum before the step.
    pub m_value: ValueVector,
}

impl StepRecord {
    pub fn dir(&self) -> Option<usize> {
        match &self.kind {
            StepKind::Monomial { dir } => Some(*dir),
            StepKind::Rescale { dir, .. } => *dir,
        }
    }

    pub fn is_monomial(&self) -> bool {
        matches!(self.kind, StepKind::Monomial { .. })
    }
}

/// Certified dyadic enclosures `lo_i <= v_i · 2^bits <= hi_i` of the frame.
#[derive(Clone, Debug)]
struct Enclosures {
    bits: u64,
    lo: Vec<BigInt>,
    hi: Vec<BigInt>,
    stale: bool,
}

impl Enclosures {
    fn compute(values: &[ValueVector]) -> Self {
        let height = values
            .iter()
            .map(ValueVector::height_bits)
            .max()
            .unwrap_or(0);
        let bits = 2 * height + 128;
        let (lo, hi) = values
            .iter()
            .map(|v| {
                let (lo, hi) = v.dyadic_bounds(bits);
                (lo.max(BigInt::zero()), hi)
            })
            .unzip();
        Enclosures {
            bits,
            lo,
            hi,
            stale: false,
        }
    }

    fn certainly_lt(&self, i: usize, j: usize) -> bool {
        self.hi[i] < self.lo[j]
    }

    fn certainly_le(&self, i: usize, j: usize) -> bool {
        self.hi[i] <= self.lo[j]
    }

    fn strict_min(&self) -> Option<usize> {
        let d = self.lo.len();
        let i = (0..d).min_by(|&a, &b| self.hi[a].cmp(&self.hi[b]))?;
        (0..d)
            .all(|j| j == i || self.certainly_lt(i, j))
            .then_some(i)
    }

    /// Indices whose enclosure reaches down to the smallest upper bound.
    fn min_candidates(&self) -> Vec<usize> {
        let top = self.hi.iter().min().cloned().unwrap_or_default();
        (0..self.lo.len()).filter(|&i| self.lo[i] <= top).collect()
    }

    fn apply_step(&mut self, dir: usize) {
        let (lo_d, hi_d) = (self.lo[dir].clone(), self.hi[dir].clone());
        for w in 0..self.lo.len() {
            if w != dir {
                self.lo[w] -= &hi_d;
                if self.lo[w].is_negative() {
                    self.lo[w] = BigInt::zero();
                }
                self.hi[w] -= &lo_d;
            }
        }
        self.stale = true;
    }

    fn interval(&self, i: usize) -> RationalInterval {
        let den = BigInt::one() << self.bits;
        RationalInterval {
            lo: Rational::new(self.lo[i].clone(), den.clone()),
            hi: Rational::new(self.hi[i].clone(), den),
        }
    }
}

/// Outcome of the first-use relabeling check on a full-coverage monomial run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Prop344Report {
    /// Original parameter indices in order of first use.
    pub order: Vec<usize>,
    pub ascending: bool,
    /// First adjacent pair `(i, i+1)` (relabeled, 1-based) violating ascent.
    pub ascending_witness: Option<(usize, usize)>,
    /// The integer `s` with `s·a₁ < a₂ < (s+1)·a₁`, if it exists.
    pub s: Option<Rational>,
    /// For `j = 3..=d`, whether `(j−2)·a_j < a₁ + … + a_{j−1}`.
    pub partial_sums: Vec<(usize, bool)>,
    pub passed: bool,
}

/// State of a sequence `R_0 ⊂ R_1 ⊂ … ⊂ R_n`.
///
/// Stepping mutates in place; on error the state is left unchanged. Clone to
/// keep a snapshot.
#[derive(Clone, Debug)]
pub struct SequenceState {
    initial: ParameterFrame,
    frame: ParameterFrame,
    history: Vec<StepRecord>,
    partial_sum: ValueVector,
    segment_start: usize,
    segment_base_sum: ValueVector,
    segment_base_frame_sum: ValueVector,
    rewrite: RewriteMatrix,
    rescales: usize,
    enc: Enclosures,
}

impl SequenceState {
    pub fn init(frame: ParameterFrame) -> Self {
        let zero = ValueVector::zero(frame.basis());
        let sum = frame.sum();
        let enc = Enclosures::compute(frame.values());
        SequenceState {
            initial: frame.clone(),
            rewrite: RewriteMatrix::identity(frame.dim()),
            frame,
            history: Vec::new(),
            partial_sum: zero.clone(),
            segment_start: 0,
            segment_base_sum: zero,
            segment_base_frame_sum: sum,
            rescales: 0,
            enc,
        }
    }

    /// Builds and validates a frame with default names, then starts a sequence.
    pub fn from_values(values: Vec<ValueVector>) -> Result<Self, SequenceError> {
        Ok(Self::init(ParameterFrame::with_default_names(values)?))
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    /// Number of steps taken so far, `n`.
    pub fn step(&self) -> usize {
        self.history.len()
    }

    pub fn frame(&self) -> &ParameterFrame {
        &self.frame
    }

    pub fn initial_frame(&self) -> &ParameterFrame {
        &self.initial
    }

    pub fn history(&self) -> &[StepRecord] {
        &self.history
    }

    /// `E_n`, the sum of `v(𝔪_i)` over all steps taken.
    pub fn partial_sum(&self) -> &ValueVector {
        &self.partial_sum
    }

    /// Cumulative exponent substitution of the monomial steps.
    pub fn rewrite(&self) -> &RewriteMatrix {
        &self.rewrite
    }

    pub fn segment_start(&self) -> usize {
        self.segment_start
    }

    pub fn has_rescales(&self) -> bool {
        self.rescales > 0
    }

    fn check_index(&self, i: usize) -> Result<(), SequenceError> {
        if i < self.dim() {
            Ok(())
        } else {
            Err(SequenceError::IndexOutOfRange {
                index: i,
                len: self.dim(),
            })
        }
    }

    fn refresh(&mut self) {
        if self.enc.stale {
            self.enc = Enclosures::compute(self.frame.values());
        }
    }

    /// Index of a minimal value, with all indices tied with it.
    fn minima(&mut self) -> Result<(usize, Vec<usize>), SequenceError> {
        if let Some(i) = self.enc.strict_min() {
            return Ok((i, vec![i]));
        }
        self.refresh();
        if let Some(i) = self.enc.strict_min() {
            return Ok((i, vec![i]));
        }
        let candidates = self.enc.min_candidates();
        let values = self.frame.values();
        let mut best = candidates[0];
        let mut tied = vec![best];
        for &c in &candidates[1..] {
            match values[c].try_cmp(&values[best])? {
                Ordering::Less => {
                    best = c;
                    tied = vec![c];
                }
                Ordering::Equal => tied.push(c),
                Ordering::Greater => {}
            }
        }
        Ok((best, tied))
    }

    /// The direction the valuation picks: the unique parameter of least value.
    pub fn argmin(&mut self) -> Result<usize, SequenceError> {
        let (best, tied) = self.minima()?;
        if tied.len() > 1 {
            return Err(SequenceError::AmbiguousDirection { candidates: tied });
        }
        Ok(best)
    }

    /// Steps in the argmin direction and returns it.
    pub fn step_argmin(&mut self) -> Result<usize, SequenceError> {
        let dir = self.argmin()?;
        self.apply_monomial(dir)?;
        Ok(dir)
    }

    /// Steps in `dir`, which must have minimal value; ties are allowed.
    pub fn step_in_direction(&mut self, dir: usize) -> Result<(), SequenceError> {
        self.check_index(dir)?;
        self.ensure_minimal(dir)?;
        self.apply_monomial(dir)
    }

    fn ensure_minimal(&mut self, dir: usize) -> Result<(), SequenceError> {
        for j in 0..self.dim() {
            if j == dir || self.enc.certainly_le(dir, j) {
                continue;
            }
            let values = self.frame.values();
            if values[dir].try_cmp(&values[j])? == Ordering::Greater {
                return Err(SequenceError::DirectionNotMinimal { dir, smaller: j });
            }
        }
        Ok(())
    }

    fn apply_monomial(&mut self, dir: usize) -> Result<(), SequenceError> {
        let m = self.frame.values[dir].clone();
        let mut next = Vec::with_capacity(self.dim());
        for (w, v) in self.frame.values.iter().enumerate() {
            if w == dir {
                next.push(v.clone());
            } else {
                let nv = v - &m;
                if nv.is_zero() {
                    return Err(SequenceError::NonPositiveValue { index: w });
                }
                next.push(nv);
            }
        }
        self.frame.values = next;
        self.partial_sum = &self.partial_sum + &m;
        self.rewrite.step(dir).expect("direction checked");
        self.enc.apply_step(dir);
        self.history.push(StepRecord {
            kind: StepKind::Monomial { dir },
            m_value: m,
        });
        Ok(())
    }

    /// A translated transform: `E` grows by the current minimum and the frame
    /// is replaced by `new_values`.
    pub fn rescale_step(&mut self, new_values: Vec<ValueVector>) -> Result<(), SequenceError> {
        let (best, _) = self.minima()?;
        self.apply_rescale(None, best, new_values)
    }

    /// As [`rescale_step`](Self::rescale_step), recording that the transform
    /// divides by `dir`, which must have minimal value.
    pub fn rescale_step_in(
        &mut self,
        dir: usize,
        new_values: Vec<ValueVector>,
    ) -> Result<(), SequenceError> {
        self.check_index(dir)?;
        self.ensure_minimal(dir)?;
        self.apply_rescale(Some(dir), dir, new_values)
    }

    fn apply_rescale(
        &mut self,
        dir: Option<usize>,
        min_index: usize,
        new_values: Vec<ValueVector>,
    ) -> Result<(), SequenceError> {
        if new_values.len() != self.dim() {
            return Err(SequenceError::DimensionMismatch {
                expected: self.dim(),
                found: new_values.len(),
            });
        }
        let basis = self.frame.basis().clone();
        for (index, v) in new_values.iter().enumerate() {
            if **v.basis() != *basis {
                return Err(ValueError::BasisMismatch.into());
            }
            if !v.is_positive()? {
                return Err(SequenceError::NonPositiveValue { index });
            }
        }
        let m = self.frame.values[min_index].clone();
        self.partial_sum = &self.partial_sum + &m;
        self.frame.values = new_values.clone();
        self.history.push(StepRecord {
            kind: StepKind::Rescale { dir, new_values },
            m_value: m,
        });
        self.rescales += 1;
        self.segment_start = self.history.len();
        self.segment_base_sum = self.partial_sum.clone();
        self.segment_base_frame_sum = self.frame.sum();
        self.enc = Enclosures::compute(self.frame.values());
        Ok(())
    }

    /// Conservation within the current monomial segment, by exact equality:
    /// `(d−1)·(E_n − E_start) + Σ frame = Σ frame at segment start`.
    pub fn invariant_631_check(&self) -> bool {
        let d1 = BigInt::from(self.dim() as u64 - 1);
        let seg = &self.partial_sum - &self.segment_base_sum;
        let lhs = &seg.mul_int(&d1) + &self.frame.sum();
        lhs == self.segment_base_frame_sum
    }

    /// `(Σ initial values)/(d−1)`, for rescale-free runs in dimension at least 2.
    pub fn bound_63(&self) -> Option<ValueVector> {
        if self.has_rescales() || self.dim() < 2 {
            return None;
        }
        let d1 = Rational::from(self.dim() as i64 - 1);
        Some(self.initial.sum().scale(&d1.recip()))
    }

    /// Whether `E_n <= (Σ initial values)/(d−1)`; `None` when not applicable.
    ///
    /// The gap `Σ initial − (d−1)·E_n` is compared against the current frame
    /// sum exactly; positivity then follows from the certified frame enclosures.
    pub fn check_bound_63(&self) -> Result<Option<bool>, SequenceError> {
        if self.bound_63().is_none() {
            return Ok(None);
        }
        let d1 = BigInt::from(self.dim() as u64 - 1);
        let gap = &self.initial.sum() - &self.partial_sum.mul_int(&d1);
        if gap == self.frame.sum() && self.enc.lo.iter().all(|l| l.is_positive()) {
            return Ok(Some(true));
        }
        Ok(Some(gap.signum()? != Ordering::Less))
    }

    /// Certified enclosure of the current value of parameter `i`.
    pub fn frame_enclosure(&self, i: usize) -> RationalInterval {
        self.enc.interval(i)
    }

    /// A certified upper bound for the largest current frame value.
    pub fn max_frame_upper(&self) -> Rational {
        (0..self.dim())
            .map(|i| self.enc.interval(i).hi)
            .max()
            .unwrap_or_default()
    }

    /// Monomial steps per direction.
    pub fn direction_counts(&self) -> Vec<u64> {
        let mut counts = vec![0; self.dim()];
        for r in &self.history {
            if let StepKind::Monomial { dir } = r.kind {
                counts[dir] += 1;
            }
        }
        counts
    }

    pub fn monomial_steps(&self) -> usize {
        self.history.iter().filter(|r| r.is_monomial()).count()
    }

    /// Directions that do not occur among the last `window` steps.
    ///
    /// A rescale counts for the parameter it divides by. A window of 0 is
    /// vacuous and yields no directions.
    pub fn starving_directions(&self, window: usize) -> Result<Vec<usize>, SequenceError> {
        if window > self.step() {
            return Err(SequenceError::IndexOutOfRange {
                index: window,
                len: self.step() + 1,
            });
        }
        if window == 0 {
            return Ok(Vec::new());
        }
        let mut seen = vec![false; self.dim()];
        for r in &self.history[self.step() - window..] {
            if let Some(dir) = r.dir() {
                seen[dir] = true;
            }
        }
        Ok((0..self.dim()).filter(|&i| !seen[i]).collect())
    }

    /// The value criterion for a change of direction from `R_0` to `R_n`:
    /// `v(𝔪_0) > v(𝔪_{n−1})`.
    pub fn change_of_direction(&self, n: usize) -> Result<bool, SequenceError> {
        if n == 0 || n > self.step() {
            return Err(SequenceError::IndexOutOfRange {
                index: n,
                len: self.step() + 1,
            });
        }
        let first = &self.history[0].m_value;
        let last = &self.history[n - 1].m_value;
        Ok(first.try_cmp(last)? == Ordering::Greater)
    }

    /// The ideal criterion `𝔪_0 ⊆ 𝔪_n²` for every prefix `n = 1..=step` of a
    /// monomial history: every original parameter has order at least 2 in `R_n`.
    pub fn change_of_direction_by_ideals(&self) -> Result<Vec<bool>, SequenceError> {
        let mut m = RewriteMatrix::identity(self.dim());
        let two = num_bigint::BigUint::from(2u32);
        let mut out = Vec::with_capacity(self.step());
        for (step, r) in self.history.iter().enumerate() {
            match r.kind {
                StepKind::Monomial { dir } => m.step(dir).expect("recorded direction"),
                StepKind::Rescale { .. } => return Err(SequenceError::RescaleInHistory { step }),
            }
            out.push(m.column_sums().iter().all(|c| *c >= two));
        }
        Ok(out)
    }

    /// The sequence of quotients `R_n / z_n R_n` for a parameter `z` that is
    /// never a direction, replayed in dimension `d − 1`.
    pub fn quotient_sequence(&self, killed: usize) -> Result<SequenceState, SequenceError> {
        self.check_index(killed)?;
        for (step, r) in self.history.iter().enumerate() {
            if r.dir() == Some(killed) {
                return Err(SequenceError::KilledDirectionUsed { step, dir: killed });
            }
        }
        let shift = |i: usize| if i > killed { i - 1 } else { i };
        let mut q = SequenceState::init(self.initial.without(killed));
        for r in &self.history {
            match &r.kind {
                StepKind::Monomial { dir } => q.step_in_direction(shift(*dir))?,
                StepKind::Rescale { dir, new_values } => {
                    let vals: Vec<ValueVector> = new_values
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != killed)
                        .map(|(_, v)| v.clone())
                        .collect();
                    match dir {
                        Some(d) => q.rescale_step_in(shift(*d), vals)?,
                        None => q.rescale_step(vals)?,
                    }
                }
            }
        }
        Ok(q)
    }

    /// Checks the inequalities forced on the initial values of a monomial run
    /// in which every direction occurs, after relabeling by first use.
    pub fn check_prop_344(&self) -> Result<Prop344Report, SequenceError> {
        let mut order = Vec::with_capacity(self.dim());
        for (step, r) in self.history.iter().enumerate() {
            match r.kind {
                StepKind::Monomial { dir } => {
                    if !order.contains(&dir) {
                        order.push(dir);
                    }
                }
                StepKind::Rescale { .. } => return Err(SequenceError::RescaleInHistory { step }),
            }
        }
        if order.len() < self.dim() {
            let missing = (0..self.dim()).filter(|i| !order.contains(i)).collect();
            return Err(SequenceError::IncompleteCoverage { missing });
        }
        let a: Vec<&ValueVector> = order.iter().map(|&i| self.initial.value(i)).collect();
        let mut ascending_witness = None;
        for i in 0..a.len().saturating_sub(1) {
            if a[i].try_cmp(a[i + 1])? != Ordering::Less {
                ascending_witness = Some((i + 1, i + 2));
                break;
            }
        }
        let s = if a.len() >= 2 {
            let s = a[1].floor_div(a[0])?;
            let exact = a[0].mul_int(&s) == *a[1];
            (s >= BigInt::one() && !exact).then(|| Rational::from(s))
        } else {
            None
        };
        let mut partial_sums = Vec::new();
        let mut prefix = a[0].clone();
        for j in 3..=a.len() {
            prefix = &prefix + a[j - 2];
            let lhs = a[j - 1].mul_int(&BigInt::from(j as u64 - 2));
            partial_sums.push((j, lhs.try_cmp(&prefix)? == Ordering::Less));
        }
        let ascending = ascending_witness.is_none();
        let passed =
            ascending && (a.len() < 2 || s.is_some()) && partial_sums.iter().all(|(_, ok)| *ok);
        Ok(Prop344Report {
            order,
            ascending,
            ascending_witness,
            s,
            partial_sums,
            passed,
        })
    }
}
