use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;
use quadseq::*;

fn basis() -> Arc<RealBasis> {
    RealBasis::sqrt_primes(2)
}

fn value_strategy() -> impl Strategy<Value = ValueVector> {
    prop::collection::vec((-30i64..=30, 1i64..=12), 3).prop_map(|cs| {
        let coeffs: Vec<Rational> = cs.into_iter().map(|(n, d)| Rational::new(n, d)).collect();
        ValueVector::from_dense(&basis(), &coeffs).unwrap()
    })
}

fn monomial_strategy(d: usize, max: u64) -> impl Strategy<Value = Monomial> {
    prop::collection::vec(0..=max, d).prop_map(Monomial::new)
}

fn word_strategy(d: usize, len: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..d, 0..=len)
}

/// Frames with one parameter far above the others, which an argmin run
/// of a few steps never uses.
fn passive_state(seed: u64) -> SequenceState {
    let sc = gen_random_independent(3, seed, 0).unwrap();
    let mut values = sc.frame.values().to_vec();
    values.push(ValueVector::rational(sc.basis(), Rational::from(1000)).unwrap());
    SequenceState::from_values(values).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn comparison_is_translation_invariant(a in value_strategy(), b in value_strategy(), c in value_strategy()) {
        let ab = a.try_cmp(&b).unwrap();
        prop_assert_eq!(ab, (&a + &c).try_cmp(&(&b + &c)).unwrap());
        prop_assert_eq!(ab, b.try_cmp(&a).unwrap().reverse());
        prop_assert_eq!(ab == Ordering::Equal, a == b);
    }

    #[test]
    fn comparison_agrees_with_floats_when_far_apart(a in value_strategy(), b in value_strategy()) {
        let (x, y) = (a.to_f64(), b.to_f64());
        prop_assume!((x - y).abs() > 1e-9);
        prop_assert_eq!(a.try_cmp(&b).unwrap(), x.partial_cmp(&y).unwrap());
    }

    #[test]
    fn enclosures_contain_floor_div(a in value_strategy(), b in value_strategy()) {
        prop_assume!(b.is_positive().unwrap());
        let q = a.floor_div(&b).unwrap();
        prop_assert!(b.mul_int(&q).try_cmp(&a).unwrap() != Ordering::Greater);
        prop_assert!(b.mul_int(&(&q + 1)).try_cmp(&a).unwrap() == Ordering::Greater);
        let iv = a.enclose(&Rational::new(1, 1000)).unwrap();
        prop_assert!(iv.width() <= Rational::new(1, 1000));
        prop_assert!(iv.lo.to_f64() <= a.to_f64() + 1e-12 && a.to_f64() <= iv.hi.to_f64() + 1e-12);
    }

    #[test]
    fn minimalize_is_idempotent_and_order_free(gens in prop::collection::vec(monomial_strategy(3, 4), 1..8)) {
        let i = MonomialIdeal::minimalize(gens.clone()).unwrap();
        let mut rev = gens.clone();
        rev.reverse();
        prop_assert_eq!(&i, &MonomialIdeal::minimalize(rev).unwrap());
        prop_assert_eq!(&i, &MonomialIdeal::minimalize(i.generators().to_vec()).unwrap());
        for g in &gens {
            prop_assert!(i.contains(g));
        }
    }

    #[test]
    fn transform_order_never_grows(gens in prop::collection::vec(monomial_strategy(3, 4), 1..6), dir in 0usize..3) {
        let i = MonomialIdeal::minimalize(gens).unwrap();
        let t = i.transform(dir).unwrap();
        let r = i.order();
        prop_assert!(t.order() <= r);
        let forced = i.generators().iter().any(|g| g.total_degree() == r && g.exponents()[dir] > 0);
        if forced {
            prop_assert!(t.order() < r);
        }
    }

    #[test]
    fn rewrite_is_multiplicative(a in monomial_strategy(3, 5), b in monomial_strategy(3, 5), word in word_strategy(3, 8)) {
        let m = RewriteMatrix::from_word(3, &word).unwrap();
        let ab = a.mul(&b).unwrap();
        let lhs = m.apply(&ab);
        let rhs: Vec<_> = m.apply(&a).into_iter().zip(m.apply(&b)).map(|(x, y)| x + y).collect();
        prop_assert_eq!(lhs, rhs);
        let mut step_a = a.clone();
        let mut step_b = b.clone();
        let mut step_ab = ab.clone();
        for &dir in &word {
            step_a = step_a.rewrite(dir).unwrap();
            step_b = step_b.rewrite(dir).unwrap();
            step_ab = step_ab.rewrite(dir).unwrap();
        }
        prop_assert_eq!(step_ab, step_a.mul(&step_b).unwrap());
    }

    #[test]
    fn rewrite_matrices_are_unimodular(d in 2usize..6, word in word_strategy(5, 20)) {
        let word: Vec<usize> = word.into_iter().filter(|&w| w < d).collect();
        prop_assert_eq!(RewriteMatrix::from_word(d, &word).unwrap().determinant(), BigInt::from(1));
    }

    #[test]
    fn transform_keeps_support_size(gens in prop::collection::vec(monomial_strategy(3, 4), 1..6), word in word_strategy(3, 6)) {
        let mut f = MonomialForm::new(gens).unwrap();
        let n = f.support().len();
        for &dir in &word {
            f = f.transform(dir).unwrap();
            prop_assert_eq!(f.support().len(), n);
        }
    }

    #[test]
    fn profile_trace_equals_transform_trace(gens in prop::collection::vec(monomial_strategy(3, 3), 1..6), word in word_strategy(3, 8)) {
        let f = MonomialForm::new(gens).unwrap();
        let weights = weight_profile(3, &word).unwrap();
        let mu: Vec<u64> = weights
            .iter()
            .map(|w| {
                f.support()
                    .iter()
                    .map(|g| w.iter().zip(g.exponents()).map(|(a, b)| a * b).sum::<u64>())
                    .min()
                    .unwrap()
            })
            .collect();
        prop_assert_eq!(trace_from_profile(&mu, &word, 3), f.ord_trace(&word).unwrap());
    }

    #[test]
    fn argmin_runs_conserve_and_stay_bounded(d in 2usize..6, seed in any::<u64>()) {
        let sc = gen_random_independent(d, seed, 150).unwrap();
        let mut ok = true;
        let state = replay_with(&sc, |s| {
            ok &= s.invariant_631_check();
            ok &= s.check_bound_63().unwrap() == Some(true);
        })
        .unwrap();
        prop_assert!(ok);
        prop_assert!(m_values_nonincreasing(&state).unwrap());
        prop_assert_eq!(state.direction_counts().iter().sum::<u64>() as usize, state.monomial_steps());
    }

    #[test]
    fn quotient_commutes_with_stepping(seed in any::<u64>(), steps in 0usize..12) {
        let mut s = passive_state(seed);
        for _ in 0..steps {
            s.step_argmin().unwrap();
        }
        let dir = s.clone().argmin().unwrap();
        let mut q_then_step = s.quotient_sequence(3).unwrap();
        q_then_step.step_in_direction(dir).unwrap();
        let mut stepped = s.clone();
        stepped.step_in_direction(dir).unwrap();
        let step_then_q = stepped.quotient_sequence(3).unwrap();
        prop_assert_eq!(q_then_step.history(), step_then_q.history());
        prop_assert_eq!(q_then_step.frame(), step_then_q.frame());
    }

    #[test]
    fn comparability_agrees_with_values(a in monomial_strategy(2, 4), b in monomial_strategy(2, 4)) {
        prop_assume!(a != b);
        let b2 = RealBasis::sqrt_primes(1);
        let s = SequenceState::from_values(vec![
            ValueVector::generator(&b2, 0).unwrap(),
            ValueVector::generator(&b2, 1).unwrap(),
        ])
        .unwrap();
        let c = comparability_index(&a, &b, &s, 10_000).unwrap();
        prop_assert!(c.agrees_with_values && c.agrees_with_rewrite);
    }

    #[test]
    fn videal_chains_are_exact(seed in any::<u64>(), d in 2usize..4) {
        let sc = gen_random_independent(d, seed, 0).unwrap();
        let chain = videal_chain(&sc.frame, 12).unwrap();
        for n in 0..chain.len() - 1 {
            prop_assert_eq!(colength_step(&sc.frame, &chain, n).unwrap(), 1);
            prop_assert_eq!(
                &videal_at(&sc.frame, &chain.thresholds[n], true).unwrap(),
                &chain.ideals[n + 1]
            );
        }
        let mut st = SequenceState::init(sc.frame.clone());
        let word: Vec<usize> = (0..60).map(|_| st.step_argmin().unwrap()).collect();
        let tau = tau_bound(&chain, &word).unwrap();
        prop_assert!(tau.values.windows(2).all(|w| w[0] <= w[1]));
    }
}
