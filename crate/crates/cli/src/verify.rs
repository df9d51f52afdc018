use std::f64::consts::FRAC_PI_3;

use num_rational::Ratio;
use pogame::certification::{
    certify, eta_c_min, eta_max_from_charlie, eta_min_from_bob, required_eta_d, tradeoff_curve,
    window_sweep, ObservedPair,
};
use pogame::classical::{enumerate_max, strategy_success, ClassicalStrategy};
use pogame::game::{
    alice_inputs, born_table, check_parity_oblivious_under, success_probability, ConditionalTable,
    ParityConvention, PreparationSet,
};
use pogame::quantum::{
    bloch_update_closed, bob_success_numeric, charlie_success_numeric, debbie_success_numeric,
    n_vectors, oblivious_charlie_witness, omega_b, omega_c, omega_d, sample_optimality,
    success_from_n_vectors, trine_preparations, AntipodalFamily, ConfigSampler, SequentialConfig,
};
use pogame::qubit::{
    apply_kraus_average, bloch_to_state, hermitian_eigenvalues, make_effects, make_kraus,
    trine_shrink_factor, Bloch, Mat2,
};
use pogame::robustness::{
    cross_validate_closed_forms, dephase, fidelity_bound_meas_bob, fidelity_bound_meas_charlie,
    fidelity_bound_prep, minimize_t, trine_directions, verify_operator_inequalities, w_operator,
    z_operator, DephasingChannel, Interval, Scenario, TSource,
};

use crate::output::{Cell, Record};

/// Rotation of Bob's measurement frame injected by the self-test mode.
pub const SELF_TEST_FRAME_OFFSET: f64 = 0.05;

#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub seed: u64,
    pub self_test: bool,
    pub grid_n: usize,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self {
            name,
            passed,
            detail,
        }
    }

    pub fn record(&self) -> Record {
        vec![
            ("name", Cell::from(self.name)),
            ("passed", Cell::from(self.passed)),
            ("detail", Cell::from(self.detail.clone())),
        ]
    }
}

const ETA_GRID: [f64; 11] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];
const SQRT3_2: f64 = 0.866_025_403_784_438_6;

fn window_grid(n: usize) -> impl Iterator<Item = f64> {
    (0..=n).map(move |i| 2.0 / 3.0 + (SQRT3_2 - 2.0 / 3.0) * i as f64 / n as f64)
}

fn ideal_trine() -> PreparationSet {
    trine_preparations(FRAC_PI_3).expect("valid angle")
}

/// Ideal trine configuration, with Bob's frame rotated in self-test mode.
fn trine_config(cfg: &SuiteConfig, eta: [f64; 3]) -> SequentialConfig {
    let aligned = trine_directions(FRAC_PI_3);
    let bob = if cfg.self_test {
        trine_directions(FRAC_PI_3 + SELF_TEST_FRAME_OFFSET)
    } else {
        aligned
    };
    SequentialConfig::new(eta, bob, aligned, aligned).expect("valid configuration")
}

fn max_gap(values: impl Iterator<Item = f64>) -> f64 {
    values.fold(0.0, |m, v| m.max(v.abs()))
}

fn kraus_completeness(cfg: &SuiteConfig) -> Check {
    let mut sampler = ConfigSampler::new(cfg.seed);
    let gap = max_gap((0..1000).map(|_| {
        let pair = make_kraus(sampler.direction(), sampler.eta()).expect("valid");
        pair.completeness().max_abs_diff(&Mat2::identity())
    }));
    Check::new(
        "kraus_completeness",
        gap <= 1e-12,
        format!("max deviation {gap:.3e} over 1000 samples"),
    )
}

fn bloch_update(cfg: &SuiteConfig) -> Check {
    let mut sampler = ConfigSampler::new(cfg.seed.wrapping_add(1));
    let gap = max_gap((0..1000).map(|_| {
        let r = sampler.ball_point();
        let dirs = [
            sampler.direction(),
            sampler.direction(),
            sampler.direction(),
        ];
        let eta = sampler.eta();
        let layer = dirs.map(|d| make_kraus(d, eta).expect("valid"));
        let kraus = apply_kraus_average(&bloch_to_state(r).expect("in ball"), &layer).bloch();
        kraus.max_abs_diff(&bloch_update_closed(r, &dirs, eta))
    }));
    Check::new(
        "bloch_update_closed_form",
        gap <= 1e-12,
        format!("max deviation {gap:.3e} over 1000 states"),
    )
}

fn isotropic_shrink(cfg: &SuiteConfig) -> Check {
    let mut sampler = ConfigSampler::new(cfg.seed.wrapping_add(2));
    let dirs = trine_directions(FRAC_PI_3);
    let gap = max_gap((0..1000).map(|_| {
        let p = sampler.ball_point();
        let r = Bloch::new(p.x, 0.0, p.z);
        let eta = sampler.eta();
        let layer = dirs.map(|d| make_kraus(d, eta).expect("valid"));
        let out = apply_kraus_average(&bloch_to_state(r).expect("in ball"), &layer).bloch();
        out.max_abs_diff(&r.scale(trine_shrink_factor(eta)))
    }));
    Check::new(
        "trine_isotropic_shrink",
        gap <= 1e-12,
        format!("max deviation {gap:.3e}"),
    )
}

fn eigenvalues(cfg: &SuiteConfig) -> Check {
    let mut sampler = ConfigSampler::new(cfg.seed.wrapping_add(3));
    let gap = max_gap((0..1000).map(|_| {
        let s = 2.0 * sampler.eta() - 1.0;
        let m = Mat2::from_pauli(s, sampler.ball_point().scale(2.0));
        let (lo, hi) = hermitian_eigenvalues(&m).expect("hermitian");
        let tr = m.trace().re;
        let det = m.det().re;
        let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
        (lo - (tr - disc) / 2.0)
            .abs()
            .max((hi - (tr + disc) / 2.0).abs())
    }));
    Check::new(
        "hermitian_eigenvalues",
        gap <= 1e-12,
        format!("max deviation from characteristic roots {gap:.3e}"),
    )
}

fn success_affine(cfg: &SuiteConfig) -> Check {
    let mut sampler = ConfigSampler::new(cfg.seed.wrapping_add(4));
    let gap = max_gap((0..200).map(|_| {
        let p = sampler.preparation_set();
        let q = sampler.preparation_set();
        let dirs = [
            sampler.direction(),
            sampler.direction(),
            sampler.direction(),
        ];
        let eff = dirs.map(|d| make_effects(d, 0.8).expect("valid"));
        let t1 = born_table(&p, &eff);
        let t2 = born_table(&q, &eff);
        let w = sampler.eta();
        success_probability(&t1.mix(&t2, w))
            - (w * success_probability(&t1) + (1.0 - w) * success_probability(&t2))
    }));
    Check::new(
        "success_affine",
        gap <= 1e-12,
        format!("max deviation {gap:.3e}"),
    )
}

fn success_n_vectors(cfg: &SuiteConfig) -> Check {
    let mut sampler = ConfigSampler::new(cfg.seed.wrapping_add(5));
    let gap = max_gap((0..1000).map(|_| {
        let p = sampler.preparation_set();
        let dirs = [
            sampler.direction(),
            sampler.direction(),
            sampler.direction(),
        ];
        let eta = sampler.eta();
        let eff = dirs.map(|d| make_effects(d, eta).expect("valid"));
        success_probability(&born_table(&p, &eff)) - success_from_n_vectors(&p, eta, &dirs)
    }));
    Check::new(
        "success_from_n_vectors",
        gap <= 1e-12,
        format!("max deviation {gap:.3e}"),
    )
}

fn deterministic_eighteenths(cfg: &SuiteConfig) -> Check {
    let mut sampler = ConfigSampler::new(cfg.seed.wrapping_add(6));
    let bad = (0..1000)
        .filter(|_| {
            let bits: Vec<u8> = (0..18).map(|_| u8::from(sampler.eta() < 0.5)).collect();
            let mut it = bits.into_iter();
            let table = ConditionalTable::deterministic(|_| it.next().expect("18 inputs"));
            let v = success_probability(&table) * 18.0;
            (v - v.round()).abs() > 1e-12
        })
        .count();
    Check::new(
        "deterministic_multiple_of_1_18",
        bad == 0,
        format!("{bad} of 1000 tables off the 1/18 lattice"),
    )
}

fn classical_bound(_: &SuiteConfig) -> Check {
    let mut values = Vec::new();
    let mut consistent = true;
    for d in 1..=6 {
        let r = enumerate_max(d).expect("valid alphabet");
        for s in &r.argmax {
            let from_table = success_probability(&s.table());
            consistent &= (f64::from(*strategy_success(s).numer())
                / f64::from(*strategy_success(s).denom())
                - from_table)
                .abs()
                < 1e-15;
        }
        values.push(r.max_success);
    }
    let trit = ClassicalStrategy::trit_example();
    consistent &= strategy_success(&trit) == Ratio::new(13, 18);
    let monotone = values.windows(2).all(|w| w[0] <= w[1]);
    let capped = values.iter().all(|v| *v <= Ratio::new(13, 18));
    let exact = values[2] == Ratio::new(13, 18);
    let shown = values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ");
    Check::new(
        "classical_bound",
        monotone && capped && exact && consistent,
        format!("enumerate_max(1..=6) = {shown}"),
    )
}

fn parity_oblivious_preparations(_: &SuiteConfig) -> Check {
    let ok = check_parity_oblivious_under(&ideal_trine(), ParityConvention::AliceBit, 1e-12);
    Check::new(
        "trine_parity_oblivious",
        ok,
        format!("ideal trine oblivious under a-parity: {ok}"),
    )
}

fn bob_optimality(cfg: &SuiteConfig) -> Check {
    let prep = ideal_trine();
    let gap = max_gap(ETA_GRID.iter().map(|&e| {
        bob_success_numeric(&prep, &trine_config(cfg, [e, 1.0, 1.0])) - omega_b(e).expect("valid")
    }));
    Check::new(
        "bob_numeric_matches_omega_b",
        gap <= 1e-12,
        format!("max deviation {gap:.3e}"),
    )
}

fn charlie_optimality(cfg: &SuiteConfig) -> Check {
    let prep = ideal_trine();
    let gap = max_gap(ETA_GRID.iter().flat_map(|&e| {
        [1.0, 0.9].map(|ec| {
            charlie_success_numeric(&prep, &trine_config(cfg, [e, ec, 1.0]))
                - omega_c(e, ec).expect("valid")
        })
    }));
    Check::new(
        "charlie_numeric_matches_omega_c",
        gap <= 1e-10,
        format!("max deviation {gap:.3e}"),
    )
}

fn debbie_optimality(cfg: &SuiteConfig) -> Check {
    let prep = ideal_trine();
    let gap = max_gap(ETA_GRID.iter().map(|&e| {
        debbie_success_numeric(&prep, &trine_config(cfg, [e, 1.0, 1.0]))
            - omega_d(e, 1.0, 1.0).expect("valid")
    }));
    Check::new(
        "debbie_numeric_matches_omega_d",
        gap <= 1e-10,
        format!("max deviation {gap:.3e}"),
    )
}

fn concavity(cfg: &SuiteConfig) -> Check {
    let mut sampler = ConfigSampler::new(cfg.seed.wrapping_add(7));
    let worst = (0..1000)
        .map(|_| {
            let n = n_vectors(&sampler.preparation_set());
            n.sum_of_norms() - (3.0 * n.sum_of_squared_norms()).sqrt()
        })
        .fold(f64::NEG_INFINITY, f64::max);
    Check::new(
        "concavity_bound",
        worst <= 1e-12,
        format!("max of sum|n| - sqrt(3 sum|n|^2) = {worst:.3e}"),
    )
}

fn sampling(cfg: &SuiteConfig) -> Check {
    let a = sample_optimality(
        cfg.seed.wrapping_add(8),
        10_000,
        AntipodalFamily::XorOblivious,
    );
    let b = sample_optimality(
        cfg.seed.wrapping_add(9),
        10_000,
        AntipodalFamily::Unconstrained,
    );
    let bob = a.worst_bob_excess.max(b.worst_bob_excess);
    let charlie = a.worst_charlie_excess.max(b.worst_charlie_excess);
    let witness = oblivious_charlie_witness(1.0, 1.0).expect("valid configuration");
    let witness_excess =
        charlie_success_numeric(&witness.prep, &witness.config) - omega_c(1.0, 1.0).expect("valid");
    Check::new(
        "sampling_optimality",
        bob <= 1e-9 && charlie <= 1e-9 && witness_excess <= 1e-9,
        format!(
            "worst sampled excess over omega_b {bob:.3e}, over omega_c {charlie:.3e}; \
             oblivious witness excess {witness_excess:.6}"
        ),
    )
}

fn monotone_tradeoff(_: &SuiteConfig) -> Check {
    let values: Vec<f64> = (1..1000)
        .map(|i| omega_c(i as f64 / 1000.0, 1.0).expect("valid"))
        .collect();
    let ok = values.windows(2).all(|w| w[1] < w[0]);
    Check::new(
        "omega_c_strictly_decreasing",
        ok,
        "999 interior points of (0, 1)".into(),
    )
}

fn certification_round_trip(_: &SuiteConfig) -> Check {
    let mut eta_gap: f64 = 0.0;
    let mut curve_gap: f64 = 0.0;
    let mut ok = true;
    for i in 0..=999 {
        let eta = i as f64 / 1000.0;
        let pair = ObservedPair::new(
            omega_b(eta).expect("valid"),
            omega_c(eta, 1.0).expect("valid"),
        )
        .expect("valid");
        let v = certify(pair, 1e-9).expect("valid");
        ok &= v.on_curve;
        eta_gap = eta_gap.max((v.certified_eta_b.unwrap_or(f64::INFINITY) - eta).abs());
        curve_gap = curve_gap.max((tradeoff_curve(pair.a_b).expect("valid") - pair.a_c).abs());
    }
    Check::new(
        "certify_round_trip",
        ok && eta_gap <= 1e-9 && curve_gap <= 1e-12,
        format!("on [0, 0.999]: certified eta error {eta_gap:.3e}, curve error {curve_gap:.3e}"),
    )
}

fn window(_: &SuiteConfig) -> Check {
    let lo = eta_min_from_bob(13.0 / 18.0).expect("valid");
    let hi = eta_max_from_charlie(13.0 / 18.0).expect("valid");
    let ok = lo < hi && (lo - 2.0 / 3.0).abs() <= 1e-12 && (hi - SQRT3_2).abs() <= 1e-12;
    Check::new("certification_window", ok, format!("[{lo:.15}, {hi:.15}]"))
}

fn third_observer(_: &SuiteConfig) -> Check {
    let min = window_grid(200)
        .map(|eb| {
            required_eta_d(eb, eta_c_min(eb).expect("valid"))
                .expect("valid")
                .eta_d
        })
        .fold(f64::INFINITY, f64::min);
    let sweep_ok = window_sweep(51)
        .map(|rows| rows.iter().all(|r| r.eta_d_required > 1.0))
        .unwrap_or(false);
    Check::new(
        "third_observer_excluded",
        min > 1.0 && sweep_ok,
        format!("min required eta_D {min:.6}"),
    )
}

fn closed_forms(cfg: &SuiteConfig) -> Check {
    let gap = cross_validate_closed_forms(cfg.seed.wrapping_add(10), 256);
    Check::new(
        "closed_form_t_matches_eigen",
        gap <= 1e-9,
        format!("max deviation {gap:.3e} over 256 samples"),
    )
}

fn fidelity_identities(_: &SuiteConfig) -> Check {
    let gap = max_gap(window_grid(100).flat_map(|e| {
        let ab = omega_b(e).expect("valid");
        let ac = omega_c(e, 1.0).expect("valid");
        [
            fidelity_bound_prep(ab, e).expect("in domain") - 1.0,
            fidelity_bound_meas_bob(ab, e).expect("in domain") - 1.0,
            fidelity_bound_meas_charlie(ac, e).expect("in domain") - 1.0,
        ]
    }));
    Check::new(
        "fidelity_one_at_optimum",
        gap <= 1e-14,
        format!("max deviation {gap:.3e}"),
    )
}

fn prep_t_value(cfg: &SuiteConfig) -> Check {
    let mut worst: f64 = 0.0;
    for eta in [2.0 / 3.0, 0.7, 0.76, 0.8, SQRT3_2] {
        let r = minimize_t(Scenario::Prep, 9.0 / eta, eta, cfg.grid_n.max(64)).expect("valid");
        worst = worst.max((r.t_value - 0.5).abs());
    }
    Check::new(
        "prep_min_t_is_half",
        worst <= 1e-6,
        format!("max |min_theta t - 1/2| = {worst:.6}"),
    )
}

fn dephasing_channel(cfg: &SuiteConfig) -> Check {
    let mut sampler = ConfigSampler::new(cfg.seed.wrapping_add(11));
    let mut gap: f64 = 0.0;
    for _ in 0..200 {
        let theta = sampler.eta() * std::f64::consts::FRAC_PI_2;
        let interval = Interval::of(theta);
        let rho = bloch_to_state(sampler.ball_point()).expect("in ball");
        let id = DephasingChannel::new(theta, 1.0, interval).expect("valid");
        gap = gap.max(dephase(&id, &rho).matrix().max_abs_diff(rho.matrix()));
        let ch = DephasingChannel::new(theta, sampler.eta(), interval).expect("valid");
        gap = gap.max(ch.apply(&Mat2::identity()).max_abs_diff(&Mat2::identity()));
        gap = gap.max((ch.apply(rho.matrix()).trace().re - 1.0).abs());
    }
    Check::new(
        "dephasing_identities",
        gap <= 1e-14,
        format!("max deviation {gap:.3e}"),
    )
}

fn normalization(_: &SuiteConfig) -> Check {
    let prep = ideal_trine();
    let dirs = trine_directions(FRAC_PI_3);
    let mut gap: f64 = 0.0;
    for &eta in &ETA_GRID {
        let w: f64 = prep
            .iter()
            .map(|((x, a), rho)| rho.expectation(&w_operator(x, a, &dirs, eta)))
            .sum();
        let config = SequentialConfig::ideal(&prep, eta, 1.0, 1.0).expect("valid");
        gap = gap.max((w + 0.5 - bob_success_numeric(&prep, &config)).abs());
        let eff = dirs.map(|d| make_effects(d, eta).expect("valid"));
        let z: f64 = alice_inputs()
            .map(|(y, b)| {
                (*eff[y as usize - 1].outcome(b) * z_operator(y, b, &prep))
                    .trace()
                    .re
            })
            .sum();
        gap = gap.max((z - success_probability(&born_table(&prep, &eff))).abs());
    }
    Check::new(
        "normalization_identities",
        gap <= 1e-12,
        format!("max deviation {gap:.3e}"),
    )
}

fn operator_inequalities(cfg: &SuiteConfig) -> Check {
    let mut worst = f64::INFINITY;
    for scenario in Scenario::ALL {
        for eta in [2.0 / 3.0, 0.76, SQRT3_2] {
            let s = scenario.design_s(eta);
            let r = verify_operator_inequalities(
                scenario,
                s,
                eta,
                TSource::ClosedFormAt { s_design: s },
                cfg.grid_n,
                cfg.tol,
            )
            .expect("valid");
            worst = worst.min(r.worst_lambda_min);
        }
    }
    Check::new(
        "operator_inequalities",
        worst >= -cfg.tol,
        format!("worst lambda_min {worst:.3e}"),
    )
}

/// Every invariant of the library, in a fixed order.
pub fn run_suite(cfg: &SuiteConfig) -> Vec<Check> {
    let checks: [fn(&SuiteConfig) -> Check; 24] = [
        kraus_completeness,
        bloch_update,
        isotropic_shrink,
        eigenvalues,
        success_affine,
        success_n_vectors,
        deterministic_eighteenths,
        classical_bound,
        parity_oblivious_preparations,
        bob_optimality,
        charlie_optimality,
        debbie_optimality,
        concavity,
        sampling,
        monotone_tradeoff,
        certification_round_trip,
        window,
        third_observer,
        closed_forms,
        fidelity_identities,
        prep_t_value,
        dephasing_channel,
        normalization,
        operator_inequalities,
    ];
    checks.iter().map(|check| check(cfg)).collect()
}
