//! Acceptance suite: one line per criterion. Each line combines the library
//! verdict with an oracle computed here by independent means.

use std::process::ExitCode;
use std::time::Instant;

use quadseq::{
    check_theorem_33a, gen_713, gen_714, gen_dvr, gen_notunion_rr1, gen_random_independent,
    gen_random_switching, gen_shannon_418, monomial_value, replay, replay_with, videal_at,
    videal_chain, Monomial, MonomialForm, MonomialIdeal, Rational, SeriesLaw, StepKind,
    Theorem33aOptions, ValueVector,
};
use quadseq_cli::verify::{self, criterion, Outcome};

type Oracle = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn pow(q: (i64, i64), k: usize) -> Rational {
    Rational::new(q.0, q.1).pow(k as i32)
}

/// Conservation from the raw history: `(d−1)·E_n + Σ frame_n = Σ frame_0`.
fn oracle_conservation() -> Oracle {
    let mut steps = 0;
    for i in 0..8 {
        let d = 2 + i % 4;
        let sc = gen_random_switching(d, i as u64, 2_000).map_err(e2s)?;
        let start = sc.frame.sum();
        let d1 = Rational::from(d as i64 - 1);
        let mut e = ValueVector::zero(sc.basis());
        let mut ok = true;
        replay_with(&sc, |s| {
            e = &e + &s.history().last().expect("stepped").m_value;
            ok &= &e.scale(&d1) + &s.frame().sum() == start;
            steps += 1;
        })
        .map_err(e2s)?;
        ensure(ok, || format!("run {i}: identity fails"))?;
    }
    Ok(format!("history recomputation agrees on {steps} steps"))
}

/// Float shadow of the bound: `E_n <= Σ initial/(d−1)` up to rounding, and
/// the frame shrinks below `1e-6`.
fn oracle_bound() -> Oracle {
    let mut worst = 0;
    for i in 0..8 {
        let d = 2 + i % 4;
        let sc = gen_random_switching(d, i as u64, 2_000).map_err(e2s)?;
        let bound = sc.frame.sum().to_f64() / (d as f64 - 1.0);
        let mut e = 0.0;
        let mut small = None;
        let mut ok = true;
        replay_with(&sc, |s| {
            e += s.history().last().expect("stepped").m_value.to_f64();
            ok &= e <= bound * (1.0 + 1e-12);
            let max = s
                .frame()
                .values()
                .iter()
                .map(|v| v.to_f64())
                .fold(0.0, f64::max);
            if small.is_none() && max < 1e-6 {
                small = Some(s.step());
            }
        })
        .map_err(e2s)?;
        ensure(ok, || format!("run {i}: float E exceeds the bound"))?;
        let n = small.ok_or_else(|| format!("run {i}: frame stays above 1e-6"))?;
        worst = worst.max(n);
    }
    Ok(format!("float shadow agrees; N <= {worst}"))
}

/// Episode sums `c·(1 + 1/2 + 1/4 + 1/4) = 2c` accumulated term by term.
fn oracle_shannon() -> Oracle {
    let st = replay(&gen_shannon_418(30).map_err(e2s)?).map_err(e2s)?;
    let ms: Vec<Rational> = st
        .history()
        .iter()
        .map(|r| r.m_value.as_rational().unwrap())
        .collect();
    let mut acc = Rational::zero();
    let mut e = Rational::zero();
    for k in 0..30 {
        acc = &acc + &(&Rational::from(2) * &pow((1, 4), k));
        for m in &ms[4 * k..4 * k + 4] {
            e = &e + m;
        }
        ensure(e == acc, || format!("episode {}: {e} vs {acc}", k + 1))?;
    }
    let gap = &Rational::new(8, 3) - &e;
    ensure(gap == &Rational::new(8, 3) * &pow((1, 4), 30), || {
        format!("gap {gap}")
    })?;
    Ok("geometric episode sums; 8/3 - E_120 = (8/3)·4^-30".into())
}

fn oracle_rr1() -> Oracle {
    let st = replay(&gen_notunion_rr1(60, true).map_err(e2s)?).map_err(e2s)?;
    let mut e = Rational::zero();
    for (i, r) in st.history().iter().enumerate() {
        let law = pow((1, 2), i / 2 + i % 2);
        ensure(r.m_value.as_rational() == Some(law.clone()), || {
            format!("term {}", i + 1)
        })?;
        e = &e + &law;
    }
    ensure(
        &Rational::from(3) - &e == &Rational::from(3) * &pow((1, 2), 30),
        || format!("E = {e}"),
    )?;
    let dirs: Vec<Option<usize>> = st.history().iter().map(|r| r.dir()).collect();
    for w in 2..=dirs.len() {
        let tail = &dirs[dirs.len() - w..];
        let missing: Vec<usize> = (0..3).filter(|i| !tail.contains(&Some(*i))).collect();
        ensure(missing == [2], || format!("window {w}: {missing:?}"))?;
    }
    Ok("3 - E_60 = 3·2^-30; z absent from every window".into())
}

/// Sums through group `k`: `k + 2(1 − 2^{1−k})` for the (y, z) model and
/// `1 + k + (4/3)(1 − 4^{1−k})` for the (y, z, w) model.
fn oracle_gmr() -> Oracle {
    let closed = |law: SeriesLaw, k: usize| -> Rational {
        let k_q = Rational::from(k as i64);
        match law {
            SeriesLaw::Gmr713 => {
                &k_q + &(&Rational::from(2) * &(&Rational::one() - &pow((1, 2), k - 1)))
            }
            _ => {
                let tail = &Rational::new(4, 3) * &(&Rational::one() - &pow((1, 4), k - 1));
                &(&Rational::one() + &k_q) + &tail
            }
        }
    };
    for law in [SeriesLaw::Gmr713, SeriesLaw::Gmr714] {
        let mut sum = Rational::zero();
        let mut k = 0;
        for run in law.runs() {
            sum = &sum + &run.sum();
            if run.group {
                k += 1;
                let c = closed(law, k);
                ensure(sum == c, || format!("{law:?} group {k}: {sum} vs {c}"))?;
                if k == 1000 {
                    break;
                }
            }
        }
    }
    let s713 = replay(&gen_713(10).map_err(e2s)?).map_err(e2s)?;
    let s714 = replay(&gen_714(6).map_err(e2s)?).map_err(e2s)?;
    let total = |s: &quadseq::SequenceState| -> Rational {
        s.history()
            .iter()
            .map(|r| r.m_value.as_rational().unwrap())
            .sum()
    };
    ensure(
        total(&s713) == closed(SeriesLaw::Gmr713, 11) - Rational::from(1),
        || "7.13 replay total".into(),
    )?;
    ensure(
        total(&s714) == closed(SeriesLaw::Gmr714, 7) - Rational::from(1),
        || "7.14 replay total".into(),
    )?;
    Ok("closed forms agree through 1000 groups and with the replays".into())
}

/// Brute force in two variables: every set of nonunit monomials of degree
/// at most 3, every word of length at most 6.
fn oracle_order_drop() -> Oracle {
    fn trace(support: &[[u64; 2]], word: &[usize]) -> Vec<u64> {
        let mut f: Vec<[u64; 2]> = support.to_vec();
        let ord = |f: &[[u64; 2]]| f.iter().map(|e| e[0] + e[1]).min().unwrap();
        let mut out = vec![ord(&f)];
        for &dir in word {
            let r = ord(&f);
            for e in &mut f {
                e[dir] = e[0] + e[1] - r;
            }
            out.push(ord(&f));
        }
        out
    }
    let monos: Vec<[u64; 2]> = (0..=3u64)
        .flat_map(|a| (0..=3 - a).map(move |b| [a, b]))
        .filter(|e| e[0] + e[1] > 0)
        .collect();
    let words = verify::words(2, 6);
    let opts = Theorem33aOptions {
        max_degree: 3,
        samples: 0,
        seed: 0,
    };
    let mut forms = 0;
    for w in &words {
        let full = w.contains(&0) && w.contains(&1);
        let mut drops_all = true;
        for mask in 1u32..(1 << monos.len()) {
            let support: Vec<[u64; 2]> = (0..monos.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| monos[i])
                .collect();
            let t = trace(&support, w);
            drops_all &= t.last() < t.first();
            forms += 1;
            if mask.count_ones() <= 2 {
                let f = MonomialForm::new(support.iter().map(|e| Monomial::new(e.to_vec())))
                    .map_err(e2s)?;
                ensure(f.ord_trace(w).map_err(e2s)? == t, || {
                    format!("trace of {support:?} on {w:?}")
                })?;
            }
        }
        ensure(!full || drops_all, || {
            format!("word {w:?}: a form does not drop")
        })?;
        if !full {
            let missing = if w.contains(&0) { 1 } else { 0 };
            let mut e = [0, 0];
            e[missing] = 1;
            ensure(trace(&[e], w).iter().all(|&o| o == 1), || {
                format!("witness on {w:?}")
            })?;
        }
        let lib = check_theorem_33a(2, w, &opts).map_err(e2s)?;
        ensure(lib.passed && lib.missing.is_empty() == full, || {
            format!("library on {w:?}")
        })?;
    }
    Ok(format!(
        "{forms} forms over {} words in 2 variables",
        words.len()
    ))
}

/// Orders tracked as exponent vectors in the current parameters, with the
/// argmin run shadowed in floating point.
fn sqrt2_shadow(steps: usize) -> (Vec<usize>, Vec<(u64, u64)>) {
    let mut v = [1.0f64, 2f64.sqrt()];
    let mut ex: [[u64; 2]; 2] = [[1, 0], [0, 1]];
    let mut word = Vec::new();
    let mut ords = vec![(1, 1)];
    for _ in 0..steps {
        let dir = if v[0] < v[1] { 0 } else { 1 };
        let other = 1 - dir;
        v[other] -= v[dir];
        for e in &mut ex {
            e[dir] = e[0] + e[1];
        }
        word.push(dir);
        ords.push((ex[1][0] + ex[1][1], ex[0][0] + ex[0][1]));
    }
    (word, ords)
}

const SHADOW: usize = 40;

fn oracle_ratio() -> Oracle {
    let (_, ords) = sqrt2_shadow(SHADOW);
    let (_, report) = verify::order_ratio()?;
    let sqrt2 = 2f64.sqrt();
    let mut last_far = None;
    for (n, &(of, og)) in ords.iter().enumerate() {
        let row = &report.trace[n];
        ensure(row.ratio == Rational::new(of as i64, og as i64), || {
            format!("n = {n}: {} vs {of}/{og}", row.ratio)
        })?;
        if (of as f64 / og as f64 - sqrt2).abs() >= 1e-3 {
            last_far = Some(n);
        }
    }
    let n0 = last_far.map_or(0, |n| n + 1);
    ensure(report.converged_from == Some(n0), || {
        format!("library n0 {:?}, shadow n0 {n0}", report.converged_from)
    })?;
    ensure(n0 == 8, || format!("n0 = {n0}"))?;
    Ok(format!(
        "shadow ratios agree for n <= {SHADOW}; n0 = {n0} (ratio 17/12 at n = 8)"
    ))
}

/// Generators of `{v >= t}` by brute force over a degree box.
fn brute_videal(frame: &quadseq::ParameterFrame, t: &ValueVector) -> Result<MonomialIdeal, String> {
    let d = frame.dim();
    let min = frame
        .values()
        .iter()
        .map(|v| v.to_f64())
        .fold(f64::INFINITY, f64::min);
    let max = frame
        .values()
        .iter()
        .map(|v| v.to_f64())
        .fold(0.0, f64::max);
    let cap = ((t.to_f64() + max) / min).ceil() as u64 + 1;
    let mut gens = Vec::new();
    let mut e = vec![0u64; d];
    loop {
        let m = Monomial::new(e.clone());
        if m.total_degree() <= cap && monomial_value(&m, frame).try_cmp(t).map_err(e2s)?.is_ge() {
            gens.push(m);
        }
        let mut i = 0;
        loop {
            if i == d {
                return MonomialIdeal::minimalize(gens).map_err(e2s);
            }
            e[i] += 1;
            if e.iter().sum::<u64>() <= cap {
                break;
            }
            e[i] = 0;
            i += 1;
        }
    }
}

fn oracle_videals() -> Oracle {
    let mut compared = 0;
    for i in 0..6 {
        let d = 2 + i % 2;
        let sc = gen_random_independent(d, i as u64, 0).map_err(e2s)?;
        let chain = videal_chain(&sc.frame, 12).map_err(e2s)?;
        for (n, t) in chain.thresholds.iter().enumerate() {
            let brute = brute_videal(&sc.frame, t)?;
            ensure(brute == chain.ideals[n], || format!("frame {i}, ideal {n}"))?;
            ensure(
                videal_at(&sc.frame, t, false).map_err(e2s)? == brute,
                || format!("frame {i}, cut at {n}"),
            )?;
            compared += 1;
        }
        // Between consecutive thresholds no monomial value occurs.
        for n in 0..chain.len() - 1 {
            let (a, b) = (
                chain.thresholds[n].to_f64(),
                chain.thresholds[n + 1].to_f64(),
            );
            let count = nonunit_values(&sc.frame, 8)
                .into_iter()
                .filter(|&x| x > a + 1e-12 && x < b - 1e-12)
                .count();
            ensure(count == 0, || {
                format!("frame {i}: value between steps {n} and {}", n + 1)
            })?;
        }
    }
    Ok(format!("{compared} ideals match a brute-force degree box"))
}

fn nonunit_values(frame: &quadseq::ParameterFrame, deg: u64) -> Vec<f64> {
    quadseq::nonunit_monomials(frame.dim(), deg)
        .iter()
        .map(|m| monomial_value(m, frame).to_f64())
        .collect()
}

fn oracle_tau() -> Oracle {
    let (word, _) = sqrt2_shadow(SHADOW);
    let lib_word = verify::sqrt2_word(SHADOW)?;
    ensure(word == lib_word, || "argmin words differ".into())?;
    let (_, tau) = verify::tau_minimality()?;
    ensure(tau.len() == verify::TAU_N + 1, || {
        format!("{} tau values", tau.len())
    })?;
    let chain = videal_chain(verify::sqrt2_state().frame(), verify::TAU_N).map_err(e2s)?;
    for (n, &t) in tau.iter().enumerate() {
        let principal_at = |j: usize| -> Result<bool, String> {
            for ideal in &chain.ideals[..n] {
                if !ideal.extend(&word[..j]).map_err(e2s)?.is_principal() {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        let mut j = 0;
        while !principal_at(j)? {
            j += 1;
            ensure(j <= SHADOW, || {
                format!("n = {n}: not principal within the shadow")
            })?;
        }
        ensure(t == j, || format!("n = {n}: least j is {j}, library {t}"))?;
    }
    Ok(format!(
        "least j by linear scan matches for n <= {}",
        verify::TAU_N
    ))
}

fn oracle_first_use() -> Oracle {
    let mut checked = 0;
    for i in 0..40 {
        let d = 2 + i % 4;
        let sc = gen_random_switching(d, 1000 + i as u64, 100).map_err(e2s)?;
        let st = replay(&sc).map_err(e2s)?;
        let mut order = Vec::new();
        for r in st.history() {
            if let StepKind::Monomial { dir } = r.kind {
                if !order.contains(&dir) {
                    order.push(dir);
                }
            }
        }
        let a: Vec<f64> = order.iter().map(|&j| sc.frame.value(j).to_f64()).collect();
        ensure(a.len() == d, || format!("run {i}: coverage"))?;
        ensure(a.windows(2).all(|w| w[0] < w[1]), || {
            format!("run {i}: {a:?} not ascending")
        })?;
        let s = a[1] / a[0];
        ensure((s - s.round()).abs() > 1e-9, || {
            format!("run {i}: a2/a1 = {s}")
        })?;
        let mut prefix = a[0];
        for j in 3..=d {
            prefix += a[j - 2];
            ensure((j as f64 - 2.0) * a[j - 1] < prefix, || {
                format!("run {i}: j = {j}")
            })?;
        }
        let m0 = st.history()[0].m_value.to_f64();
        let by_ideals = st.change_of_direction_by_ideals().map_err(e2s)?;
        for n in 1..=st.step() {
            let mn = st.history()[n - 1].m_value.to_f64();
            if (m0 - mn).abs() > 1e-12 * m0 {
                ensure((m0 > mn) == by_ideals[n - 1], || {
                    format!("run {i}: n = {n}")
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!(
        "float first-use inequalities hold; {checked} prefixes agree"
    ))
}

fn oracle_dvr() -> Oracle {
    let st = replay(&gen_dvr(3, 10_000).map_err(e2s)?).map_err(e2s)?;
    let mut v: [i64; 3] = [1, 2, 3];
    let mut e = 0i64;
    for (n, r) in st.history().iter().enumerate() {
        let min = *v.iter().min().unwrap();
        let first = v.iter().position(|&x| x == min).unwrap();
        let ties = v.iter().filter(|&&x| x == min).count();
        for (i, x) in v.iter_mut().enumerate() {
            if i != first {
                *x = if ties > 1 && *x == min { 1 } else { *x - min };
            }
        }
        e += min;
        ensure(r.m_value.as_rational() == Some(Rational::from(min)), || {
            format!("step {}", n + 1)
        })?;
        ensure(e > n as i64, || format!("E_{} = {e}", n + 1))?;
    }
    Ok(format!("integer simulation agrees; E_10000 = {e}"))
}

fn main() -> ExitCode {
    let oracles: [fn() -> Oracle; 11] = [
        oracle_conservation,
        oracle_bound,
        oracle_shannon,
        oracle_rr1,
        oracle_gmr,
        oracle_order_drop,
        oracle_ratio,
        oracle_videals,
        oracle_tau,
        oracle_first_use,
        oracle_dvr,
    ];
    let filter: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = 0;
    let mut ran = 0;
    for (i, oracle) in oracles.iter().enumerate() {
        let id = i + 1;
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        ran += 1;
        let clock = Instant::now();
        let lib: Outcome = criterion(id);
        let oracle = oracle();
        let passed = lib.passed && oracle.is_ok();
        failed += usize::from(!passed);
        let (tag, note) = match &oracle {
            Ok(s) => (if passed { "PASS" } else { "FAIL" }, s.clone()),
            Err(s) => ("FAIL", format!("oracle: {s}")),
        };
        println!(
            "[{tag}] C{id:02} {:<22} {} | {} ({:.1}s)",
            lib.name,
            lib.detail,
            note,
            clock.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", ran - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
