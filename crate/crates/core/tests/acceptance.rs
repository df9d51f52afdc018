use std::f64::consts::FRAC_PI_3;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use pogame::certification::{
    certify, eta_c_min, eta_max_from_charlie, eta_min_from_bob, required_eta_d, window_sweep,
    ObservedPair,
};
use pogame::classical::enumerate_max;
use pogame::quantum::{
    bloch_update_closed, bob_success_numeric, charlie_success_numeric, oblivious_charlie_witness,
    omega_b, omega_c, sample_optimality, trine_preparations, AntipodalFamily, ConfigSampler,
    SequentialConfig,
};
use pogame::qubit::{apply_kraus_average, bloch_to_state, make_kraus};
use pogame::robustness::{
    cross_validate_closed_forms, fidelity_bound_meas_bob, fidelity_bound_meas_charlie,
    fidelity_bound_prep, minimize_t, verify_operator_inequalities, Scenario, TSource,
};

const SQRT3_2: f64 = 0.866_025_403_784_438_6;
const GRID_N: usize = 1024;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn eta_grid() -> impl Iterator<Item = f64> {
    (0..=10).map(|i| i as f64 / 10.0)
}

fn classical_bound() -> Outcome {
    let start = Instant::now();
    let result = enumerate_max(3).expect("alphabet 3 is valid");
    let elapsed = start.elapsed();
    let exact = result.max_success == Ratio::new(13, 18);
    Outcome {
        passed: exact && elapsed < Duration::from_secs(1),
        detail: format!(
            "enumerate_max(3) = {} in {:.3} s",
            result.max_success,
            elapsed.as_secs_f64()
        ),
    }
}

fn optimal_bob() -> Outcome {
    let prep = trine_preparations(FRAC_PI_3).unwrap();
    let worst = eta_grid()
        .map(|eta| {
            let config = SequentialConfig::ideal(&prep, eta, 1.0, 1.0).unwrap();
            (bob_success_numeric(&prep, &config) - omega_b(eta).unwrap()).abs()
        })
        .fold(0.0, f64::max);
    Outcome {
        passed: worst <= 1e-12,
        detail: format!("max |numeric - omega_b| = {worst:.3e} over 11 eta_B"),
    }
}

fn optimal_charlie() -> Outcome {
    let prep = trine_preparations(FRAC_PI_3).unwrap();
    let worst = eta_grid()
        .map(|eta| {
            let config = SequentialConfig::ideal(&prep, eta, 1.0, 1.0).unwrap();
            (charlie_success_numeric(&prep, &config) - omega_c(eta, 1.0).unwrap()).abs()
        })
        .fold(0.0, f64::max);
    let omega_b_sym = omega_b(0.7637).unwrap();
    let omega_c_sym = omega_c(0.7637, 1.0).unwrap();
    let verdict = certify(ObservedPair::new(0.75457, 0.75457).unwrap(), 1e-4).unwrap();
    let certified = verdict.certified_eta_b.unwrap_or(f64::NAN);
    let symmetric_ok = (omega_b_sym - 0.75457).abs() <= 5e-5
        && (omega_c_sym - 0.75457).abs() <= 5e-5
        && (certified - 0.7637).abs() <= 5e-5;
    Outcome {
        passed: worst <= 1e-10 && symmetric_ok,
        detail: format!(
            "max |simulated - omega_c| = {worst:.3e}; symmetric point omega_b = {omega_b_sym:.6}, \
             omega_c = {omega_c_sym:.6}, certified eta_B = {certified:.6} ({})",
            if symmetric_ok { "ok" } else { "off" }
        ),
    }
}

fn window() -> Outcome {
    let lo = eta_min_from_bob(13.0 / 18.0).unwrap();
    let hi = eta_max_from_charlie(13.0 / 18.0).unwrap();
    let dlo = (lo - 2.0 / 3.0).abs();
    let dhi = (hi - SQRT3_2).abs();
    Outcome {
        passed: dlo <= 1e-12 && dhi <= 1e-12,
        detail: format!("eta_min = {lo:.15}, eta_max = {hi:.15}"),
    }
}

fn third_observer() -> Outcome {
    let left = required_eta_d(2.0 / 3.0, eta_c_min(2.0 / 3.0).unwrap())
        .unwrap()
        .eta_d;
    let rows = window_sweep(201).unwrap();
    let min_eta_d = rows
        .iter()
        .map(|r| r.eta_d_required)
        .fold(f64::INFINITY, f64::min);
    Outcome {
        passed: (1.08..=1.11).contains(&left) && min_eta_d > 1.0,
        detail: format!("eta_D(2/3) = {left:.6}; min over window = {min_eta_d:.6}"),
    }
}

fn robustness_t_values() -> Outcome {
    let start = Instant::now();
    let mut worst_t_gap: f64 = 0.0;
    let mut worst_lambda = f64::INFINITY;
    let mut notes = Vec::new();
    for scenario in Scenario::ALL {
        for eta in [2.0 / 3.0, 0.76, SQRT3_2] {
            let s = scenario.design_s(eta);
            let result = minimize_t(scenario, s, eta, GRID_N).unwrap();
            let gap = (result.t_value - scenario.stated_t(eta)).abs();
            worst_t_gap = worst_t_gap.max(gap);
            if gap > 1e-6 {
                notes.push(format!(
                    "{scenario}@{eta:.4}: min_t = {:.6}, expected {:.6}",
                    result.t_value,
                    scenario.stated_t(eta)
                ));
            }
            let report = verify_operator_inequalities(
                scenario,
                s,
                eta,
                TSource::ClosedFormAt { s_design: s },
                GRID_N,
                1e-9,
            )
            .unwrap();
            worst_lambda = worst_lambda.min(report.worst_lambda_min);
        }
    }
    let elapsed = start.elapsed();
    let shown = notes.iter().take(3).cloned().collect::<Vec<_>>().join("; ");
    Outcome {
        passed: worst_t_gap <= 1e-6 && worst_lambda >= -1e-9 && elapsed < Duration::from_secs(30),
        detail: format!(
            "max |t - stated| = {worst_t_gap:.3e} ({} of 9 off{}{shown}); worst lambda_min = {worst_lambda:.3e}; {:.2} s",
            notes.len(),
            if notes.is_empty() { "" } else { ": " },
            elapsed.as_secs_f64()
        ),
    }
}

fn fidelity_identities() -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 0..=100 {
        let eta = 2.0 / 3.0 + (SQRT3_2 - 2.0 / 3.0) * i as f64 / 100.0;
        let a_b = omega_b(eta).unwrap();
        let a_c = omega_c(eta, 1.0).unwrap();
        for value in [
            fidelity_bound_prep(a_b, eta).unwrap(),
            fidelity_bound_meas_bob(a_b, eta).unwrap(),
            fidelity_bound_meas_charlie(a_c, eta).unwrap(),
        ] {
            worst = worst.max((value - 1.0).abs());
        }
    }
    let edge = fidelity_bound_prep(13.0 / 18.0, 0.76).unwrap();
    Outcome {
        passed: worst <= 1e-14 && (edge - 0.93860).abs() <= 1e-5,
        detail: format!("max |F(optimum) - 1| = {worst:.3e}; F_prep(13/18, 0.76) = {edge:.6}"),
    }
}

fn oracle_equivalence() -> Outcome {
    let t_gap = cross_validate_closed_forms(7, 256);
    let mut sampler = ConfigSampler::new(11);
    let mut bloch_gap: f64 = 0.0;
    for _ in 0..1000 {
        let r = sampler.ball_point();
        let dirs = [
            sampler.direction(),
            sampler.direction(),
            sampler.direction(),
        ];
        let eta = sampler.eta();
        let layer = dirs.map(|d| make_kraus(d, eta).unwrap());
        let kraus = apply_kraus_average(&bloch_to_state(r).unwrap(), &layer).bloch();
        bloch_gap = bloch_gap.max(kraus.max_abs_diff(&bloch_update_closed(r, &dirs, eta)));
    }
    Outcome {
        passed: t_gap <= 1e-9 && bloch_gap <= 1e-12,
        detail: format!(
            "closed-form t vs eigen: {t_gap:.3e}; Bloch update vs Kraus sum: {bloch_gap:.3e}"
        ),
    }
}

fn sampling_optimality() -> Outcome {
    let oblivious = sample_optimality(2026, 10_000, AntipodalFamily::XorOblivious);
    let general = sample_optimality(2027, 10_000, AntipodalFamily::Unconstrained);
    let bob = oblivious.worst_bob_excess.max(general.worst_bob_excess);
    let charlie = oblivious
        .worst_charlie_excess
        .max(general.worst_charlie_excess);
    let witness = oblivious_charlie_witness(1.0, 1.0).unwrap();
    let witness_excess =
        charlie_success_numeric(&witness.prep, &witness.config) - omega_c(1.0, 1.0).unwrap();
    Outcome {
        passed: bob <= 1e-9 && charlie <= 1e-9 && witness_excess <= 1e-9,
        detail: format!(
            "random batches: worst excess over omega_b = {bob:.3e}, over omega_c = {charlie:.3e}; \
             oblivious witness at eta_B = 1 exceeds omega_c by {witness_excess:.6}"
        ),
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("classical bound 13/18", classical_bound),
        ("optimal Bob value", optimal_bob),
        ("optimal Charlie value", optimal_charlie),
        ("certification window", window),
        ("third observer", third_observer),
        ("robustness t-values", robustness_t_values),
        ("fidelity identities", fidelity_identities),
        ("oracle equivalence", oracle_equivalence),
        ("sampling optimality", sampling_optimality),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = check();
        if !outcome.passed {
            failures += 1;
        }
        println!(
            "{} [{}] {name}: {}",
            if outcome.passed { "PASS" } else { "FAIL" },
            i + 1,
            outcome.detail
        );
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
