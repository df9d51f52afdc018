use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

use num_rational::Ratio;
use pogame::certification::{certify, tradeoff_curve, ObservedPair, CLASSICAL_BOUND};
use pogame::classical::{enumerate_max, is_parity_oblivious, strategy_success, ClassicalStrategy};
use pogame::game::{born_table, success_probability, PreparationSet};
use pogame::quantum::{
    bob_success_numeric, omega_b, omega_c, success_from_n_vectors, trine_preparations,
    SequentialConfig,
};
use pogame::qubit::{bloch_to_state, make_effects, Bloch};
use pogame::robustness::{
    dephase, fidelity_bound_meas_bob, fidelity_bound_meas_charlie, fidelity_bound_prep,
    verify_operator_inequalities, DephasingChannel, Interval, Scenario, TSource,
};
use proptest::prelude::*;

fn direction() -> impl Strategy<Value = Bloch> {
    (0.0..std::f64::consts::PI, 0.0..std::f64::consts::TAU)
        .prop_map(|(t, p)| Bloch::new(t.sin() * p.cos(), t.sin() * p.sin(), t.cos()))
}

fn ball_point() -> impl Strategy<Value = Bloch> {
    (direction(), 0.0..=1.0f64).prop_map(|(d, r)| d.scale(r.cbrt()))
}

fn preparation_set() -> impl Strategy<Value = PreparationSet> {
    proptest::array::uniform6(ball_point()).prop_map(|r| {
        let mut it = r.into_iter();
        PreparationSet::from_fn(|_, _| bloch_to_state(it.next().unwrap()).unwrap())
    })
}

#[test]
fn trit_strategy_reaches_the_enumerated_bound() {
    let trit = ClassicalStrategy::trit_example();
    assert!(is_parity_oblivious(&trit));
    assert_eq!(strategy_success(&trit), Ratio::new(13, 18));
    assert_eq!(
        enumerate_max(3).unwrap().max_success,
        strategy_success(&trit)
    );
    assert!((success_probability(&trit.table()) - CLASSICAL_BOUND).abs() < 1e-15);
}

#[test]
fn ideal_trine_beats_classical_bound_inside_window() {
    let prep = trine_preparations(FRAC_PI_3).unwrap();
    for eta in [0.67, 0.7637, 0.86] {
        let config = SequentialConfig::ideal(&prep, eta, 1.0, 1.0).unwrap();
        assert!(bob_success_numeric(&prep, &config) > CLASSICAL_BOUND);
        assert!(omega_c(eta, 1.0).unwrap() > CLASSICAL_BOUND);
    }
}

#[test]
fn certified_pair_feeds_robustness_bounds() {
    let verdict = certify(ObservedPair::new(0.75457, 0.75457).unwrap(), 1e-4).unwrap();
    let eta = verdict.certified_eta_b.unwrap();
    let s = Scenario::Prep.design_s(eta);
    let report = verify_operator_inequalities(
        Scenario::Prep,
        s,
        eta,
        TSource::ClosedFormAt { s_design: s },
        128,
        1e-9,
    )
    .unwrap();
    assert!(report.passed);
    let f = fidelity_bound_prep(0.75457, eta).unwrap();
    assert!(f > 0.99 && f <= 1.0 + 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn born_rule_matches_n_vector_form(
        prep in preparation_set(),
        dirs in proptest::array::uniform3(direction()),
        eta in 0.0..=1.0f64,
    ) {
        let effects = dirs.map(|d| make_effects(d, eta).unwrap());
        let direct = success_probability(&born_table(&prep, &effects));
        prop_assert!((direct - success_from_n_vectors(&prep, eta, &dirs)).abs() < 1e-12);
    }

    #[test]
    fn certification_round_trip(eta in 0.0..=0.999f64) {
        let pair = ObservedPair::new(omega_b(eta).unwrap(), omega_c(eta, 1.0).unwrap()).unwrap();
        prop_assert!((tradeoff_curve(pair.a_b).unwrap() - pair.a_c).abs() < 1e-12);
        let verdict = certify(pair, 1e-9).unwrap();
        prop_assert!(verdict.on_curve);
        prop_assert!((verdict.certified_eta_b.unwrap() - eta).abs() < 1e-9);
    }

    #[test]
    fn fidelity_bounds_increase_and_stay_below_one(
        eta in 2.0 / 3.0..=0.866f64,
        u in 0.0..1.0f64,
        v in 0.0..1.0f64,
    ) {
        let (lo, hi) = if u < v { (u, v) } else { (v, u) };
        let ob = omega_b(eta).unwrap();
        let oc = omega_c(eta, 1.0).unwrap();
        let at = |w: f64, top: f64| CLASSICAL_BOUND + w * (top - CLASSICAL_BOUND);
        for (f, top) in [
            (fidelity_bound_prep as fn(f64, f64) -> pogame::Result<f64>, ob),
            (fidelity_bound_meas_bob, ob),
            (fidelity_bound_meas_charlie, oc),
        ] {
            let a = f(at(lo, top), eta).unwrap();
            let b = f(at(hi, top), eta).unwrap();
            prop_assert!(a <= b + 1e-15);
            prop_assert!(b <= 1.0 + 1e-14);
        }
    }

    #[test]
    fn dephasing_keeps_states_physical(
        r in ball_point(),
        theta in 0.0..=FRAC_PI_2,
        c in 0.0..=1.0f64,
    ) {
        let interval = Interval::of(theta);
        let channel = DephasingChannel::new(theta, c, interval).unwrap();
        let out = dephase(&channel, &bloch_to_state(r).unwrap());
        prop_assert!(out.bloch().norm() <= r.norm() + 1e-12);
        prop_assert!((out.matrix().trace().re - 1.0).abs() < 1e-14);
    }
}
