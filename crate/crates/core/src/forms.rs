//! Elements `f = Σ λᵢ gᵢ` with generic unit coefficients, tracked by their
//! monomial support, and their orders along a sequence.
//!
//! Coefficients are never stored. Distinct monomials with unit coefficients
//! cannot cancel, so every order below is the minimum over the support.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::monomial::{Monomial, MonomialError, RewriteMatrix};
use crate::rational::Rational;
use crate::sequence::{ParameterFrame, SequenceError, SequenceState};
use crate::values::{RationalInterval, ValueError, ValueVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("a form needs at least one monomial")]
    EmptySupport,
    #[error("expected dimension {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("the form is a unit")]
    UnitForm,
    #[error("the two monomials coincide")]
    SameMonomial,
    #[error("no comparability within {max_steps} steps")]
    NotTerminated { max_steps: usize },
    #[error("exponent overflow along the word")]
    ExponentOverflow,
    #[error(transparent)]
    Monomial(#[from] MonomialError),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Value(#[from] ValueError),
}

/// The support of `f`: distinct monomials, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct MonomialForm {
    #[serde(skip)]
    dim: usize,
    support: Vec<Monomial>,
}

impl MonomialForm {
    /// Repeated monomials are merged.
    pub fn new<I>(support: I) -> Result<Self, FormError>
    where
        I: IntoIterator<Item = Monomial>,
    {
        let mut support: Vec<Monomial> = support.into_iter().collect();
        let dim = support.first().ok_or(FormError::EmptySupport)?.dim();
        if let Some(bad) = support.iter().find(|m| m.dim() != dim) {
            return Err(FormError::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        support.sort();
        support.dedup();
        Ok(MonomialForm { dim, support })
    }

    pub fn monomial(m: Monomial) -> Self {
        MonomialForm {
            dim: m.dim(),
            support: vec![m],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn support(&self) -> &[Monomial] {
        &self.support
    }

    pub fn order(&self) -> u64 {
        self.support
            .iter()
            .map(Monomial::total_degree)
            .min()
            .unwrap_or(0)
    }

    pub fn is_unit(&self) -> bool {
        self.order() == 0
    }

    /// Support of the transform `(fR)^{R_1}` after a step in `dir`.
    pub fn transform(&self, dir: usize) -> Result<MonomialForm, FormError> {
        if dir >= self.dim {
            return Err(MonomialError::DirectionOutOfRange { dir, dim: self.dim }.into());
        }
        let r = self.order();
        let support = self.support.iter().map(|g| {
            let mut e = g.exponents().to_vec();
            e[dir] = g.total_degree() - r;
            Monomial::new(e)
        });
        MonomialForm::new(support)
    }

    /// Orders of the successive transforms, starting with `ord_R(f)`.
    pub fn ord_trace(&self, dirs: &[usize]) -> Result<Vec<u64>, FormError> {
        let mut f = self.clone();
        let mut out = Vec::with_capacity(dirs.len() + 1);
        out.push(f.order());
        for &dir in dirs {
            f = f.transform(dir)?;
            out.push(f.order());
        }
        Ok(out)
    }

    /// `v(f)`: the least value of a support monomial.
    pub fn value(&self, frame: &ParameterFrame) -> Result<ValueVector, FormError> {
        if frame.dim() != self.dim {
            return Err(FormError::DimensionMismatch {
                expected: self.dim,
                found: frame.dim(),
            });
        }
        let mut best: Option<ValueVector> = None;
        for g in &self.support {
            let v = monomial_value(g, frame);
            best = match best {
                Some(b) if b.try_cmp(&v)? != Ordering::Greater => Some(b),
                _ => Some(v),
            };
        }
        Ok(best.expect("nonempty support"))
    }

    /// `ord_{R_n}(f)` of the element itself, with `rewrite = M_n`.
    pub fn element_order(&self, rewrite: &RewriteMatrix) -> BigUint {
        let w = rewrite.column_sums();
        self.support
            .iter()
            .map(|g| {
                w.iter()
                    .zip(g.exponents())
                    .map(|(c, &e)| c * e)
                    .sum::<BigUint>()
            })
            .min()
            .unwrap_or_default()
    }

    pub fn display_with(&self, names: &[String]) -> String {
        let parts: Vec<String> = self.support.iter().map(|g| g.display_with(names)).collect();
        parts.join(" + ")
    }
}

/// `Σ eᵢ·v(wᵢ)`.
pub fn monomial_value(m: &Monomial, frame: &ParameterFrame) -> ValueVector {
    let mut acc = ValueVector::zero(frame.basis());
    for (e, v) in m.exponents().iter().zip(frame.values()) {
        if *e > 0 {
            acc = &acc + &v.mul_int(&BigInt::from(*e));
        }
    }
    acc
}

/// Column sums of `M_k` for every prefix `k = 0..=len` of the word.
pub fn weight_profile(d: usize, dirs: &[usize]) -> Result<Vec<Vec<u64>>, FormError> {
    let mut m: Vec<Vec<u64>> = (0..d)
        .map(|i| (0..d).map(|j| u64::from(i == j)).collect())
        .collect();
    let sums = |m: &Vec<Vec<u64>>| -> Result<Vec<u64>, FormError> {
        (0..d)
            .map(|j| {
                m.iter()
                    .try_fold(0u64, |acc, r| acc.checked_add(r[j]))
                    .ok_or(FormError::ExponentOverflow)
            })
            .collect()
    };
    let mut out = vec![sums(&m)?];
    for &dir in dirs {
        if dir >= d {
            return Err(MonomialError::DirectionOutOfRange { dir, dim: d }.into());
        }
        m[dir] = sums(&m)?;
        out.push(sums(&m)?);
    }
    Ok(out)
}

/// The order trace of any form whose profile `μ_k = min_g w_k·g` is `mu`.
///
/// The `k`-th transform of `g` is `M_k g − c_k`, where `c` collects the powers
/// divided out so far; its order is therefore `μ_k − Σ c_k`.
pub fn trace_from_profile(mu: &[u64], dirs: &[usize], d: usize) -> Vec<u64> {
    let mut c = vec![0u64; d];
    let mut out = Vec::with_capacity(mu.len());
    for (k, &m) in mu.iter().enumerate() {
        let spent: u64 = c.iter().sum();
        let ord = m - spent;
        out.push(ord);
        if let Some(&dir) = dirs.get(k) {
            c[dir] = spent + ord;
        }
    }
    out
}

fn profile_of(g: &Monomial, weights: &[Vec<u64>]) -> Vec<u64> {
    weights
        .iter()
        .map(|w| w.iter().zip(g.exponents()).map(|(a, b)| a * b).sum())
        .collect()
}

/// All nonunit monomials of degree at most `max_degree` in `d` variables.
pub fn nonunit_monomials(d: usize, max_degree: u64) -> Vec<Monomial> {
    fn rec(d: usize, left: u64, cur: &mut Vec<u64>, out: &mut Vec<Monomial>) {
        if cur.len() == d {
            if cur.iter().any(|&e| e > 0) {
                out.push(Monomial::new(cur.clone()));
            }
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(d, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, max_degree, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceWitness {
    pub form: MonomialForm,
    pub trace: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Theorem33aReport {
    pub dim: usize,
    pub word: Vec<usize>,
    pub missing: Vec<usize>,
    /// Distinct order profiles covering every nonunit form of bounded degree.
    pub profiles_checked: usize,
    pub forms_sampled: usize,
    /// Forms contradicting the expected behavior.
    pub failures: Vec<TraceWitness>,
    /// For a missing direction `w`, the trace of the form `{w}`.
    pub witnesses: Vec<TraceWitness>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theorem33aOptions {
    /// Degree bound of the exhaustive pass.
    pub max_degree: u64,
    /// Random forms checked by direct transforms.
    pub samples: usize,
    pub seed: u64,
}

impl Default for Theorem33aOptions {
    fn default() -> Self {
        Theorem33aOptions {
            max_degree: 3,
            samples: 200,
            seed: 0,
        }
    }
}

/// When every direction occurs in `dirs`, every nonunit form must end with a
/// smaller order; otherwise a missing parameter `w` keeps order 1 throughout.
///
/// The exhaustive pass covers all nonempty sets of nonunit monomials of degree
/// at most `max_degree`, grouped by their order profile.
pub fn check_theorem_33a(
    d: usize,
    dirs: &[usize],
    opts: &Theorem33aOptions,
) -> Result<Theorem33aReport, FormError> {
    let weights = weight_profile(d, dirs)?;
    let missing: Vec<usize> = (0..d).filter(|i| !dirs.contains(i)).collect();
    let mut failures = Vec::new();
    let mut witnesses = Vec::new();
    let mut profiles_checked = 0;
    let mut forms_sampled = 0;

    if !missing.is_empty() {
        for &w in &missing {
            let form = MonomialForm::monomial(Monomial::var(d, w));
            let trace = form.ord_trace(dirs)?;
            if trace.iter().any(|&o| o != 1) {
                failures.push(TraceWitness {
                    form: form.clone(),
                    trace: trace.clone(),
                });
            }
            witnesses.push(TraceWitness { form, trace });
        }
    } else {
        let monos = nonunit_monomials(d, opts.max_degree);
        let mut reach: HashMap<Vec<u64>, Vec<usize>> = HashMap::new();
        for (i, g) in monos.iter().enumerate() {
            let u = profile_of(g, &weights);
            let mut fresh: Vec<(Vec<u64>, Vec<usize>)> = vec![(u.clone(), vec![i])];
            for (r, rep) in &reach {
                let m: Vec<u64> = r.iter().zip(&u).map(|(a, b)| *a.min(b)).collect();
                if !reach.contains_key(&m) {
                    let mut rep = rep.clone();
                    rep.push(i);
                    fresh.push((m, rep));
                }
            }
            for (m, rep) in fresh {
                reach.entry(m).or_insert(rep);
            }
        }
        for (mu, rep) in &reach {
            profiles_checked += 1;
            let trace = trace_from_profile(mu, dirs, d);
            if trace.last() >= trace.first() {
                let form = MonomialForm::new(rep.iter().map(|&i| monos[i].clone()))?;
                failures.push(TraceWitness { form, trace });
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let pool = nonunit_monomials(d, opts.max_degree + 2);
        for _ in 0..opts.samples {
            let k = rng.gen_range(1..=6.min(pool.len()));
            let form = MonomialForm::new(pool.choose_multiple(&mut rng, k).cloned())?;
            let trace = form.ord_trace(dirs)?;
            forms_sampled += 1;
            if trace.last() >= trace.first() {
                failures.push(TraceWitness { form, trace });
            }
        }
    }
    failures.sort_by(|a, b| a.form.support.cmp(&b.form.support));
    Ok(Theorem33aReport {
        dim: d,
        word: dirs.to_vec(),
        missing,
        profiles_checked,
        forms_sampled,
        passed: failures.is_empty(),
        failures,
        witnesses,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RatioRow {
    pub n: usize,
    #[serde(rename = "ordF")]
    pub ord_f: String,
    #[serde(rename = "ordG")]
    pub ord_g: String,
    pub ratio: Rational,
    /// `|ratio − v(f)/v(g)| < eps`, decided exactly.
    pub within_eps: bool,
    /// The proof's bracket `p/q <= ratio < (p+1)/q`, evaluated when
    /// `f^q/g^p` and `g^{p+1}/f^q` lie in `R_n`; `None` otherwise.
    pub bracket: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RatioReport {
    pub eps: Rational,
    pub p: String,
    pub q: String,
    /// First `n` from which every later sampled ratio is within `eps`.
    pub converged_from: Option<usize>,
    /// An enclosure of `v(f)/v(g)`.
    pub target: RationalInterval,
    pub trace: Vec<RatioRow>,
    /// The last ratio computed.
    pub limit: Rational,
}

impl RatioReport {
    pub fn bracket_holds(&self) -> bool {
        self.trace.iter().all(|r| r.bracket != Some(false))
    }
}

/// Tracks `ord_{R_n}(f)/ord_{R_n}(g)` along the argmin continuation of
/// `state0` for `n = 0..=steps`, against the value ratio `v(f)/v(g)`.
pub fn ratio_limit_report(
    f: &MonomialForm,
    g: &MonomialForm,
    state0: &SequenceState,
    steps: usize,
    eps: &Rational,
) -> Result<RatioReport, FormError> {
    if f.is_unit() || g.is_unit() {
        return Err(FormError::UnitForm);
    }
    if !eps.is_positive() {
        return Err(ValueError::NonPositiveWidth.into());
    }
    let mut state = state0.clone();
    let vf = f.value(state.frame())?;
    let vg = g.value(state.frame())?;
    let eps_vg = vg.scale(eps);

    // q > 1/eps, p = floor(q·v(f)/v(g)): then p/q <= v(f)/v(g) < (p+1)/q within eps.
    let q = (eps.recip()).floor() + 1;
    let p = vf.mul_int(&q).floor_div(&vg)?;
    let monomial_pair = f.support().len() == 1 && g.support().len() == 1;
    let (fe, ge): (Vec<BigInt>, Vec<BigInt>) = if monomial_pair {
        (
            f.support()[0]
                .exponents()
                .iter()
                .map(|&e| BigInt::from(e))
                .collect(),
            g.support()[0]
                .exponents()
                .iter()
                .map(|&e| BigInt::from(e))
                .collect(),
        )
    } else {
        (Vec::new(), Vec::new())
    };
    let lower_q = Rational::new(p.clone(), q.clone());
    let upper_q = Rational::new(&p + 1, q.clone());

    let mut trace = Vec::with_capacity(steps + 1);
    for n in 0..=steps {
        if n > 0 {
            state.step_argmin()?;
        }
        let ord_f = f.element_order(state.rewrite());
        let ord_g = g.element_order(state.rewrite());
        let ratio = Rational::new(BigInt::from(ord_f.clone()), BigInt::from(ord_g.clone()));
        let lo = vg.scale(&ratio).try_sub(&eps_vg)?;
        let hi = vg.scale(&ratio).try_add(&eps_vg)?;
        let within_eps = lo.try_cmp(&vf)? == Ordering::Less && vf.try_cmp(&hi)? == Ordering::Less;
        let bracket = if monomial_pair {
            let m = state.rewrite();
            let num: Vec<BigInt> = fe.iter().zip(&ge).map(|(a, b)| &q * a - &p * b).collect();
            let den: Vec<BigInt> = fe
                .iter()
                .zip(&ge)
                .map(|(a, b)| (&p + 1) * b - &q * a)
                .collect();
            let in_rn = |e: &[BigInt]| m.apply_signed(e).iter().all(|x| !x.is_negative());
            (in_rn(&num) && in_rn(&den)).then(|| lower_q <= ratio && ratio < upper_q)
        } else {
            None
        };
        trace.push(RatioRow {
            n,
            ord_f: ord_f.to_string(),
            ord_g: ord_g.to_string(),
            ratio,
            within_eps,
            bracket,
        });
    }
    let converged_from = match trace.iter().rposition(|r| !r.within_eps) {
        None => Some(0),
        Some(i) if i + 1 < trace.len() => Some(i + 1),
        Some(_) => None,
    };
    let width = Rational::new(1, 1 << 20);
    let (ef, eg) = (vf.enclose(&width)?, vg.enclose(&width)?);
    let target = RationalInterval {
        lo: if eg.hi.is_zero() {
            Rational::zero()
        } else {
            &ef.lo / &eg.hi
        },
        hi: if eg.lo.is_positive() {
            &ef.hi / &eg.lo
        } else {
            ef.hi.clone()
        },
    };
    let limit = trace.last().map(|r| r.ratio.clone()).unwrap_or_default();
    Ok(RatioReport {
        eps: eps.clone(),
        p: p.to_string(),
        q: q.to_string(),
        converged_from,
        target,
        trace,
        limit,
    })
}

/// Which quotient of the pair lies in `𝔪_t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `p/q ∈ 𝔪_t`.
    POverQ,
    /// `q/p ∈ 𝔪_t`.
    QOverP,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Comparability {
    pub t: usize,
    pub side: Side,
    /// The side agrees with the order of `v(p)` and `v(q)`.
    pub agrees_with_values: bool,
    /// The side agrees with `M_t·(q − p)` (or `M_t·(p − q)`) being nonnegative.
    pub agrees_with_rewrite: bool,
}

/// Transforms the ideal `(p, q)` along the argmin continuation of `state0`
/// until one tracked generator divides the other.
pub fn comparability_index(
    p: &Monomial,
    q: &Monomial,
    state0: &SequenceState,
    max_steps: usize,
) -> Result<Comparability, FormError> {
    if p == q {
        return Err(FormError::SameMonomial);
    }
    let d = state0.dim();
    for m in [p, q] {
        if m.dim() != d {
            return Err(FormError::DimensionMismatch {
                expected: d,
                found: m.dim(),
            });
        }
    }
    let vp = monomial_value(p, state0.frame());
    let vq = monomial_value(q, state0.frame());
    let mut state = state0.clone();
    let mut m = RewriteMatrix::identity(d);
    let (mut pt, mut qt) = (p.clone(), q.clone());
    for t in 0..=max_steps {
        let side = if pt.divides(&qt) {
            Some(Side::QOverP)
        } else if qt.divides(&pt) {
            Some(Side::POverQ)
        } else {
            None
        };
        if let Some(side) = side {
            let by_value = vp.try_cmp(&vq)?;
            let agrees_with_values = match side {
                Side::QOverP => by_value == Ordering::Less,
                Side::POverQ => by_value == Ordering::Greater,
            };
            let (a, b) = match side {
                Side::QOverP => (q, p),
                Side::POverQ => (p, q),
            };
            let diff: Vec<BigInt> = a
                .exponents()
                .iter()
                .zip(b.exponents())
                .map(|(x, y)| BigInt::from(*x) - BigInt::from(*y))
                .collect();
            let img = m.apply_signed(&diff);
            let agrees_with_rewrite =
                img.iter().all(|x| !x.is_negative()) && img.iter().any(|x| !x.is_zero());
            return Ok(Comparability {
                t,
                side,
                agrees_with_values,
                agrees_with_rewrite,
            });
        }
        if t == max_steps {
            break;
        }
        let dir = state.step_argmin()?;
        m.step(dir)?;
        let r = pt.total_degree().min(qt.total_degree());
        let shift = |g: &Monomial| {
            let mut e = g.exponents().to_vec();
            e[dir] = g.total_degree() - r;
            Monomial::new(e)
        };
        pt = shift(&pt);
        qt = shift(&qt);
    }
    Err(FormError::NotTerminated { max_steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::values::RealBasis;

    fn m(e: &[u64]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    fn form(gs: &[&[u64]]) -> MonomialForm {
        MonomialForm::new(gs.iter().map(|e| m(e))).unwrap()
    }

    fn sqrt2_state() -> SequenceState {
        let b = RealBasis::sqrt_primes(1);
        SequenceState::from_values(vec![
            ValueVector::generator(&b, 0).unwrap(),
            ValueVector::generator(&b, 1).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn orders_and_transforms() {
        assert_eq!(form(&[&[1, 0], &[0, 1]]).order(), 1);
        assert_eq!(form(&[&[2, 0], &[1, 3]]).order(), 2);
        assert_eq!(form(&[&[0, 0]]).order(), 0);
        assert_eq!(
            form(&[&[1, 0], &[0, 1]]).transform(0).unwrap(),
            form(&[&[0, 0], &[0, 1]])
        );
        assert_eq!(form(&[&[0, 1]]).transform(0).unwrap(), form(&[&[0, 1]]));
        assert_eq!(
            form(&[&[2, 0], &[0, 2]]).transform(0).unwrap(),
            form(&[&[0, 0], &[0, 2]])
        );
    }

    #[test]
    fn traces() {
        assert_eq!(
            form(&[&[0, 1]]).ord_trace(&[0, 0, 0]).unwrap(),
            vec![1, 1, 1, 1]
        );
        assert_eq!(form(&[&[0, 1]]).ord_trace(&[0, 1]).unwrap(), vec![1, 1, 0]);
        assert_eq!(
            form(&[&[1, 0], &[0, 1]]).ord_trace(&[0]).unwrap(),
            vec![1, 0]
        );
    }

    #[test]
    fn profile_trace_matches_direct_trace() {
        let word = [0, 2, 1, 1, 0, 2];
        let weights = weight_profile(3, &word).unwrap();
        for f in [
            form(&[&[1, 2, 0], &[0, 0, 3]]),
            form(&[&[0, 1, 1]]),
            form(&[&[2, 0, 1], &[1, 1, 1], &[0, 3, 0]]),
        ] {
            let mu: Vec<u64> = (0..weights.len())
                .map(|k| {
                    f.support()
                        .iter()
                        .map(|g| profile_of(g, &weights)[k])
                        .min()
                        .unwrap()
                })
                .collect();
            assert_eq!(
                trace_from_profile(&mu, &word, 3),
                f.ord_trace(&word).unwrap()
            );
        }
    }

    #[test]
    fn theorem_33a_reports() {
        let opts = Theorem33aOptions::default();
        let r = check_theorem_33a(2, &[0, 1], &opts).unwrap();
        assert!(r.passed && r.missing.is_empty() && r.profiles_checked > 0);
        let r = check_theorem_33a(2, &[0, 0, 0], &opts).unwrap();
        assert!(r.passed);
        assert_eq!(r.missing, vec![1]);
        assert_eq!(r.witnesses[0].form, form(&[&[0, 1]]));
        assert_eq!(r.witnesses[0].trace, vec![1, 1, 1, 1]);
        let r = check_theorem_33a(3, &[0, 1], &opts).unwrap();
        assert_eq!(r.witnesses[0].form, form(&[&[0, 0, 1]]));
    }

    #[test]
    fn values_of_forms() {
        let s = sqrt2_state();
        let b = s.frame().basis().clone();
        let one = ValueVector::generator(&b, 0).unwrap();
        let r2 = ValueVector::generator(&b, 1).unwrap();
        assert_eq!(form(&[&[1, 0], &[0, 1]]).value(s.frame()).unwrap(), one);
        assert_eq!(form(&[&[1, 1]]).value(s.frame()).unwrap(), &one + &r2);
        assert_eq!(form(&[&[2, 0], &[0, 1]]).value(s.frame()).unwrap(), r2);
    }

    #[test]
    fn ratio_of_y_over_x_approaches_sqrt2() {
        let s = sqrt2_state();
        let eps = Rational::new(1, 100);
        let r = ratio_limit_report(&form(&[&[0, 1]]), &form(&[&[1, 0]]), &s, 30, &eps).unwrap();
        let ratios: Vec<String> = r.trace[1..6]
            .iter()
            .map(|row| row.ratio.to_string())
            .collect();
        assert_eq!(ratios, vec!["2", "3/2", "4/3", "7/5", "10/7"]);
        assert_eq!(r.converged_from, Some(6));
        assert!(r.bracket_holds());
        assert!(r.trace.iter().any(|row| row.bracket == Some(true)));
        assert!(r.target.contains(&Rational::new(141_421_356, 100_000_000)));

        let same = ratio_limit_report(&form(&[&[1, 0]]), &form(&[&[1, 0]]), &s, 10, &eps).unwrap();
        assert!(same.trace.iter().all(|row| row.ratio == Rational::one()));
        let half = ratio_limit_report(&form(&[&[1, 0]]), &form(&[&[2, 0]]), &s, 10, &eps).unwrap();
        assert!(half
            .trace
            .iter()
            .all(|row| row.ratio == Rational::new(1, 2)));
        assert_eq!(
            ratio_limit_report(&form(&[&[0, 0]]), &form(&[&[1, 0]]), &s, 3, &eps),
            Err(FormError::UnitForm)
        );
    }

    #[test]
    fn comparability() {
        let s = sqrt2_state();
        let c = comparability_index(&m(&[0, 1]), &m(&[2, 0]), &s, 100).unwrap();
        assert_eq!((c.t, c.side), (2, Side::QOverP));
        assert!(c.agrees_with_values && c.agrees_with_rewrite);
        let c = comparability_index(&m(&[1, 0]), &m(&[0, 1]), &s, 100).unwrap();
        assert_eq!((c.t, c.side), (1, Side::QOverP));
        assert_eq!(
            comparability_index(&m(&[1, 0]), &m(&[1, 0]), &s, 100),
            Err(FormError::SameMonomial)
        );
        assert_eq!(
            comparability_index(&m(&[0, 1]), &m(&[2, 0]), &s, 1),
            Err(FormError::NotTerminated { max_steps: 1 })
        );
    }
}
