//! The descending chain of v-ideals of `R` for a monomial valuation.
//!
//! `I_n` is the ideal of monomials whose value is at least the `n`-th value
//! realized by a monomial. Every search below is a finite lattice walk, pruned
//! by exact value comparison.

use std::cmp::Ordering;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::monomial::{Monomial, MonomialError, MonomialIdeal};
use crate::sequence::ParameterFrame;
use crate::values::{ValueError, ValueVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VIdealError {
    #[error("the bound must be positive")]
    NonPositiveBound,
    #[error("the threshold must be nonnegative")]
    NegativeThreshold,
    #[error("a chain needs at least one ideal")]
    EmptyChain,
    #[error("index {index} out of range for a chain of {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("chain is not strictly descending at {index}")]
    NotDescending { index: usize },
    #[error("parameter values {0} and {1} coincide")]
    RepeatedValues(usize, usize),
    #[error(transparent)]
    Value(#[from] ValueError),
    #[error(transparent)]
    Monomial(#[from] MonomialError),
}

/// Distinct monomial values up to a bound, ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValueLadder {
    pub values: Vec<ValueVector>,
    /// Number of monomials realizing each value.
    pub multiplicities: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VIdealChain {
    pub ideals: Vec<MonomialIdeal>,
    pub thresholds: Vec<ValueVector>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainRow {
    pub n: usize,
    pub threshold: ValueVector,
    pub generators: MonomialIdeal,
    pub colength: Option<usize>,
}

impl VIdealChain {
    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    /// One row per ideal; the last has no colength.
    pub fn rows(&self, frame: &ParameterFrame) -> Result<Vec<ChainRow>, VIdealError> {
        (0..self.len())
            .map(|n| {
                let colength = if n + 1 < self.len() {
                    Some(colength_step(frame, self, n)?)
                } else {
                    None
                };
                Ok(ChainRow {
                    n,
                    threshold: self.thresholds[n].clone(),
                    generators: self.ideals[n].clone(),
                    colength,
                })
            })
            .collect()
    }
}

/// Calls `visit` on every exponent vector of value `<= bound`.
fn walk_below<F>(
    frame: &ParameterFrame,
    bound: &ValueVector,
    mut visit: F,
) -> Result<(), ValueError>
where
    F: FnMut(&[u64], &ValueVector),
{
    fn rec<F: FnMut(&[u64], &ValueVector)>(
        values: &[ValueVector],
        bound: &ValueVector,
        cur: &mut Vec<u64>,
        acc: &ValueVector,
        visit: &mut F,
    ) -> Result<(), ValueError> {
        let i = cur.len();
        if i == values.len() {
            visit(cur, acc);
            return Ok(());
        }
        let mut val = acc.clone();
        let mut e = 0;
        while val.try_cmp(bound)? != Ordering::Greater {
            cur.push(e);
            rec(values, bound, cur, &val, visit)?;
            cur.pop();
            val = &val + &values[i];
            e += 1;
        }
        Ok(())
    }
    let zero = ValueVector::zero(frame.basis());
    rec(frame.values(), bound, &mut Vec::new(), &zero, &mut visit)
}

fn sort_values(values: &mut [ValueVector]) -> Result<(), ValueError> {
    let mut err = None;
    values.sort_by(|a, b| {
        a.try_cmp(b).unwrap_or_else(|e| {
            err.get_or_insert(e);
            Ordering::Equal
        })
    });
    err.map_or(Ok(()), Err)
}

pub fn enumerate_values(
    frame: &ParameterFrame,
    bound: &ValueVector,
) -> Result<ValueLadder, VIdealError> {
    if !bound.is_positive()? {
        return Err(VIdealError::NonPositiveBound);
    }
    let mut all = Vec::new();
    walk_below(frame, bound, |_, v| all.push(v.clone()))?;
    sort_values(&mut all)?;
    let mut values: Vec<ValueVector> = Vec::new();
    let mut multiplicities = Vec::new();
    for v in all {
        if values.last() == Some(&v) {
            *multiplicities.last_mut().expect("paired") += 1;
        } else {
            values.push(v);
            multiplicities.push(1);
        }
    }
    Ok(ValueLadder {
        values,
        multiplicities,
    })
}

/// Minimal generators of the monomials with value `>= threshold`, or `>` when
/// `strict`.
pub fn videal_at(
    frame: &ParameterFrame,
    threshold: &ValueVector,
    strict: bool,
) -> Result<MonomialIdeal, VIdealError> {
    if threshold.signum()? == Ordering::Less {
        return Err(VIdealError::NegativeThreshold);
    }
    let d = frame.dim();
    if !strict && threshold.is_zero() {
        return Ok(MonomialIdeal::unit(d));
    }
    // Large values first; the last and smallest exponent is solved directly.
    let mut order: Vec<usize> = (0..d).collect();
    let mut err = None;
    order.sort_by(|&a, &b| {
        frame.values()[b]
            .try_cmp(&frame.values()[a])
            .unwrap_or_else(|e| {
                err.get_or_insert(e);
                Ordering::Equal
            })
    });
    if let Some(e) = err {
        return Err(e.into());
    }
    let walk = Walk {
        values: frame.values(),
        order: &order,
        threshold,
        strict,
    };
    let mut gens = Vec::new();
    let zero = ValueVector::zero(frame.basis());
    walk.rec(&mut vec![0; d], 0, &zero, &mut gens)?;
    Ok(MonomialIdeal::minimalize(gens)?)
}

struct Walk<'a> {
    values: &'a [ValueVector],
    order: &'a [usize],
    threshold: &'a ValueVector,
    strict: bool,
}

impl Walk<'_> {
    fn admits(&self, v: &ValueVector) -> Result<bool, ValueError> {
        let c = v.try_cmp(self.threshold)?;
        Ok(c == Ordering::Greater || (!self.strict && c == Ordering::Equal))
    }

    /// Exponents of `order[depth..]` are zero in `cur`, whose value is `acc`
    /// and does not qualify yet.
    fn rec(
        &self,
        cur: &mut Vec<u64>,
        depth: usize,
        acc: &ValueVector,
        out: &mut Vec<Monomial>,
    ) -> Result<(), VIdealError> {
        let i = self.order[depth];
        let v = &self.values[i];
        if depth + 1 == self.order.len() {
            let gap = self.threshold.try_sub(acc)?;
            let e = if self.strict {
                gap.floor_div(v)? + 1
            } else {
                gap.ceil_div(v)?
            };
            cur[i] = u64::try_from(e).map_err(|_| MonomialError::ExponentOverflow)?;
            out.push(Monomial::new(cur.clone()));
            cur[i] = 0;
            return Ok(());
        }
        let mut val = acc.clone();
        let mut e = 0;
        loop {
            cur[i] = e;
            if self.admits(&val)? {
                out.push(Monomial::new(cur.clone()));
                break;
            }
            self.rec(cur, depth + 1, &val, out)?;
            val = &val + v;
            e += 1;
        }
        cur[i] = 0;
        Ok(())
    }
}

/// The first `k` v-ideals `I_0 = R ⊋ I_1 ⊋ …`.
pub fn videal_chain(frame: &ParameterFrame, k: usize) -> Result<VIdealChain, VIdealError> {
    if k == 0 {
        return Err(VIdealError::EmptyChain);
    }
    let mut bound = frame.values()[0].clone();
    for v in frame.values() {
        if v.try_cmp(&bound)? == Ordering::Less {
            bound = v.clone();
        }
    }
    let ladder = loop {
        let ladder = enumerate_values(frame, &bound)?;
        if ladder.values.len() >= k {
            break ladder;
        }
        bound = bound.mul_int(&BigInt::from(2));
    };
    let thresholds: Vec<ValueVector> = ladder.values.into_iter().take(k).collect();
    let ideals = thresholds
        .iter()
        .map(|t| videal_at(frame, t, false))
        .collect::<Result<Vec<_>, _>>()?;
    for (i, w) in ideals.windows(2).enumerate() {
        if w[0] == w[1] || !w[1].is_subset_of(&w[0]) {
            return Err(VIdealError::NotDescending { index: i + 1 });
        }
    }
    Ok(VIdealChain { ideals, thresholds })
}

/// `λ(I_n/I_{n+1})`: the number of monomials of value exactly `v(I_n)`.
pub fn colength_step(
    frame: &ParameterFrame,
    chain: &VIdealChain,
    n: usize,
) -> Result<usize, VIdealError> {
    if n + 1 >= chain.len() {
        return Err(VIdealError::IndexOutOfRange {
            index: n,
            len: chain.len(),
        });
    }
    let t = &chain.thresholds[n];
    if t.is_zero() {
        return Ok(1);
    }
    let mut count = 0;
    walk_below(frame, t, |_, v| {
        if v == t {
            count += 1;
        }
    })?;
    Ok(count)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TauBound {
    /// Entry `n` is the least `j` making the extensions of `I_0, …, I_{n−1}`
    /// to `R_j` principal.
    pub values: Vec<usize>,
    /// First `n` whose ideals are not all principal within the word.
    pub not_reached: Option<usize>,
}

/// An upper bound for the index after which the first `n` v-ideals become
/// principal, for every `n` up to the chain length.
pub fn tau_bound(chain: &VIdealChain, dirs: &[usize]) -> Result<TauBound, VIdealError> {
    let mut values = vec![0];
    let mut running = 0;
    for (mu, ideal) in chain.ideals.iter().enumerate() {
        let mut cur = ideal.clone();
        let mut j = 0;
        while !cur.is_principal() && j < dirs.len() {
            cur = cur.extend(&dirs[j..j + 1])?;
            j += 1;
        }
        if !cur.is_principal() {
            return Ok(TauBound {
                values,
                not_reached: Some(mu + 1),
            });
        }
        running = running.max(j);
        values.push(running);
    }
    Ok(TauBound {
        values,
        not_reached: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Remark4175Report {
    pub hypothesis_met: bool,
    /// Parameter indices sorted by value.
    pub order: Vec<usize>,
    pub chain: Vec<MonomialIdeal>,
    pub expected: Vec<MonomialIdeal>,
    pub colengths: Vec<usize>,
    pub passed: bool,
}

/// When every parameter value is below twice the least one, the first `d + 2`
/// v-ideals are `R ⊃ J_1 ⊃ … ⊃ J_d ⊃ 𝔪²` with `J_i = (x_i, …, x_d) + 𝔪²`
/// after sorting, each step of colength one.
pub fn check_remark_4175(frame: &ParameterFrame) -> Result<Remark4175Report, VIdealError> {
    let d = frame.dim();
    let values = frame.values();
    let mut order: Vec<usize> = (0..d).collect();
    let mut err = None;
    order.sort_by(|&a, &b| {
        values[a].try_cmp(&values[b]).unwrap_or_else(|e| {
            err.get_or_insert(e);
            Ordering::Equal
        })
    });
    if let Some(e) = err {
        return Err(e.into());
    }
    for w in order.windows(2) {
        if values[w[0]] == values[w[1]] {
            return Err(VIdealError::RepeatedValues(w[0].min(w[1]), w[0].max(w[1])));
        }
    }
    let min = &values[order[0]];
    let max = &values[order[d - 1]];
    let hypothesis_met = max.try_cmp(&min.mul_int(&BigInt::from(2)))? == Ordering::Less;
    if !hypothesis_met {
        return Ok(Remark4175Report {
            hypothesis_met,
            order,
            chain: Vec::new(),
            expected: Vec::new(),
            colengths: Vec::new(),
            passed: false,
        });
    }
    let square: Vec<Monomial> = (0..d)
        .flat_map(|i| (i..d).map(move |j| (i, j)))
        .map(|(i, j)| Monomial::var(d, i).mul(&Monomial::var(d, j)))
        .collect::<Result<_, _>>()?;
    let mut expected = vec![MonomialIdeal::unit(d)];
    for i in 0..d {
        let gens = order[i..]
            .iter()
            .map(|&k| Monomial::var(d, k))
            .chain(square.iter().cloned());
        expected.push(MonomialIdeal::minimalize(gens)?);
    }
    expected.push(MonomialIdeal::minimalize(square)?);
    let chain = videal_chain(frame, d + 2)?;
    let colengths = (0..=d)
        .map(|n| colength_step(frame, &chain, n))
        .collect::<Result<Vec<_>, _>>()?;
    let passed = chain.ideals == expected && colengths.iter().all(|&c| c == 1);
    Ok(Remark4175Report {
        hypothesis_met,
        order,
        chain: chain.ideals,
        expected,
        colengths,
        passed,
    })
}
