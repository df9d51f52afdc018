//! Robustness of the self-test: dephasing channels, operator inequalities
//! `K − sX − tI ⪰ 0` and the affine fidelity lower bounds they imply.
//!
//! For a scenario (Alice's preparations, Bob's measurements or Charlie's
//! measurements) the ideal objects are pushed through a dephasing channel
//! `Λ_θ` to give `K`, and compared with the operator `X` (`W_{xa}` for
//! preparations, `Z_{yb}` for measurements) that turns the observed success
//! probability into a trace. Whenever `K ⪰ sX + tI` for every index, the
//! average fidelity is at least `(s/6)·(success) + t` up to the scenario's
//! offset convention.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::certification::CLASSICAL_BOUND;
use crate::error::{check_domain, Error, Result};
use crate::game::{alice_inputs, winning_output, PreparationSet};
use crate::quantum::{omega_b, omega_c, trine_preparations};
use crate::qubit::{
    hermitian_eigenvalues, lambda_min, trine_shrink_factor, Bloch, Mat2, QubitState,
};

const SQRT3: f64 = 1.732_050_807_568_877_2;
const DOMAIN_TOL: f64 = 1e-12;

/// Which part of the protocol is being self-tested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    Prep,
    MeasBob,
    MeasCharlie,
}

impl Scenario {
    pub const ALL: [Scenario; 3] = [Scenario::Prep, Scenario::MeasBob, Scenario::MeasCharlie];

    /// Slope parameter used for the fidelity bound: `9/η_B`, `9`, `54/(7γ − 1)`.
    pub fn design_s(self, eta_b: f64) -> f64 {
        match self {
            Scenario::Prep => 9.0 / eta_b,
            Scenario::MeasBob => 9.0,
            Scenario::MeasCharlie => 54.0 / (7.0 * trine_shrink_factor(eta_b) - 1.0),
        }
    }

    /// Intercept stated alongside the bound: `1/2`, `1/4 − η_B/2`,
    /// `(9 − 6γ)/(2 − 14γ)`.
    pub fn stated_t(self, eta_b: f64) -> f64 {
        match self {
            Scenario::Prep => 0.5,
            Scenario::MeasBob => 0.25 - eta_b / 2.0,
            Scenario::MeasCharlie => {
                let g = trine_shrink_factor(eta_b);
                (9.0 - 6.0 * g) / (2.0 - 14.0 * g)
            }
        }
    }

    /// Optimal success probability of the observer whose score enters the bound.
    pub fn optimum(self, eta_b: f64) -> Result<f64> {
        match self {
            Scenario::Prep | Scenario::MeasBob => omega_b(eta_b),
            Scenario::MeasCharlie => omega_c(eta_b, 1.0),
        }
    }

    pub fn fidelity_bound(self, eta_b: f64) -> FidelityBound {
        FidelityBound {
            slope: self.design_s(eta_b) / 6.0,
            intercept: self.stated_t(eta_b),
            offset: match self {
                Scenario::Prep => Offset::ExcessOverHalf,
                Scenario::MeasBob | Scenario::MeasCharlie => Offset::Absolute,
            },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Prep => "prep",
            Scenario::MeasBob => "meas_bob",
            Scenario::MeasCharlie => "meas_charlie",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "prep" => Ok(Scenario::Prep),
            "meas_bob" => Ok(Scenario::MeasBob),
            "meas_charlie" => Ok(Scenario::MeasCharlie),
            other => Err(Error::InvalidInput(format!(
                "unknown scenario {other:?} (expected prep, meas_bob or meas_charlie)"
            ))),
        }
    }
}

/// The two θ ranges on which the dephasing axis and the `c(θ)` rule differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Interval {
    /// `[0, π/3]`
    Lower,
    /// `(π/3, π/2]`
    Upper,
}

impl Interval {
    pub fn of(theta: f64) -> Interval {
        if theta <= FRAC_PI_3 {
            Interval::Lower
        } else {
            Interval::Upper
        }
    }
}

fn check_theta(theta: f64) -> Result<()> {
    check_domain("theta", theta, 0.0, FRAC_PI_2, 0.0)
}

/// Dephasing strength `c(θ) = min{1, (s/6) sin θ}` on the lower interval and
/// `min{1, (s/6) cos θ}` on the upper one.
pub fn dephasing_strength(theta: f64, s: f64, interval: Interval) -> f64 {
    let trig = match interval {
        Interval::Lower => theta.sin(),
        Interval::Upper => theta.cos(),
    };
    (s / 6.0 * trig).clamp(0.0, 1.0)
}

/// Unit axis `g` with `Γ = g·σ`: `(−1/2, 0, √3/2)` on the lower interval,
/// `(−1/2, 0, −√3/2)` on the upper one.
pub fn dephasing_axis(interval: Interval) -> Bloch {
    match interval {
        Interval::Lower => Bloch::new(-0.5, 0.0, SQRT3 / 2.0),
        Interval::Upper => Bloch::new(-0.5, 0.0, -SQRT3 / 2.0),
    }
}

/// `Λ(ρ) = ((1+c)/2) ρ + ((1−c)/2) Γ ρ Γ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DephasingChannel {
    pub theta: f64,
    pub c: f64,
    pub gamma_op: Mat2,
}

impl DephasingChannel {
    pub fn new(theta: f64, c: f64, interval: Interval) -> Result<Self> {
        check_theta(theta)?;
        check_domain("c", c, 0.0, 1.0, 0.0)?;
        Ok(Self {
            theta,
            c,
            gamma_op: Mat2::pauli_along(dephasing_axis(interval)),
        })
    }

    /// Channel at θ with the interval of θ and the `c(θ)` rule for slope `s`.
    pub fn with_rule(theta: f64, s: f64) -> Result<Self> {
        check_theta(theta)?;
        let interval = Interval::of(theta);
        Self::new(theta, dephasing_strength(theta, s, interval), interval)
    }

    /// Acts on any operator. The Kraus operators `√((1+c)/2) I` and
    /// `√((1−c)/2) Γ` are Hermitian, so the channel is its own dual.
    pub fn apply(&self, op: &Mat2) -> Mat2 {
        op.scale((1.0 + self.c) / 2.0) + self.gamma_op.sandwich(op).scale((1.0 - self.c) / 2.0)
    }
}

pub fn dephase(channel: &DephasingChannel, rho: &QubitState) -> QubitState {
    QubitState::from_matrix_unchecked(channel.apply(rho.matrix()))
}

/// Bob's directions `b̂_y = −r̂_{y0}(θ)` for the θ-parameterized trine.
pub fn trine_directions(theta: f64) -> [Bloch; 3] {
    let (s, c) = theta.sin_cos();
    [-Bloch::X, Bloch::new(c, 0.0, -s), Bloch::new(c, 0.0, s)]
}

/// `W_{xa} = (1/36) Σ_y (−1)^{δ_{x,y} ⊕ a} η_B b̂_y·σ`.
pub fn w_operator(x: u8, a: u8, directions: &[Bloch; 3], eta_b: f64) -> Mat2 {
    let v: Bloch = (1..=3u8)
        .map(|y| {
            let d = directions[y as usize - 1];
            if winning_output(x, a, y) == 0 {
                d
            } else {
                -d
            }
        })
        .sum();
    Mat2::pauli_along(v.scale(eta_b / 36.0))
}

/// `Z_{yb} = (1/18) Σ_{(x,a): δ_{x,y} ⊕ a = b} ρ_{xa}`.
pub fn z_operator(y: u8, b: u8, prep: &PreparationSet) -> Mat2 {
    let sum: Mat2 = prep
        .iter()
        .filter(|((x, a), _)| winning_output(*x, *a, y) == b)
        .map(|(_, rho)| *rho.matrix())
        .sum();
    sum.scale(1.0 / 18.0)
}

/// `λ_min(K − s·X)`: the largest `t` with `K − sX − tI ⪰ 0`.
pub fn min_eigen_t(k: &Mat2, target: &Mat2, s: f64) -> Result<f64> {
    Ok(hermitian_eigenvalues(&(*k - target.scale(s)))?.0)
}

fn ideal_trine() -> [Bloch; 3] {
    [
        Bloch::X,
        Bloch::new(-0.5, 0.0, SQRT3 / 2.0),
        Bloch::new(-0.5, 0.0, -SQRT3 / 2.0),
    ]
}

/// Ideal object for index `(i, bit)`: the trine state `ρ_{xa}` for
/// preparations, the effect `(I + (−1)^b η b̂_y·σ)/2` with `b̂_y = −r̂_{y0}` for
/// measurements (`η = η_B` for Bob, sharp for Charlie).
pub fn ideal_operator(scenario: Scenario, i: u8, bit: u8, eta_b: f64) -> Mat2 {
    let r = ideal_trine()[i as usize - 1];
    let sign = if bit == 0 { 1.0 } else { -1.0 };
    let v = match scenario {
        Scenario::Prep => r.scale(sign),
        Scenario::MeasBob => r.scale(-sign * eta_b),
        Scenario::MeasCharlie => r.scale(-sign),
    };
    Mat2::from_pauli(0.5, v.scale(0.5))
}

/// `(K, X)` for all six indices in `(i, bit)` order at angle θ.
fn operators(scenario: Scenario, channel: &DephasingChannel, eta_b: f64) -> [(Mat2, Mat2); 6] {
    let theta = channel.theta;
    let targets: [Mat2; 6] = match scenario {
        Scenario::Prep => {
            let dirs = trine_directions(theta);
            let mut out = [Mat2::ZERO; 6];
            for (slot, (x, a)) in out.iter_mut().zip(alice_inputs()) {
                *slot = w_operator(x, a, &dirs, eta_b);
            }
            out
        }
        Scenario::MeasBob | Scenario::MeasCharlie => {
            let shrink = if scenario == Scenario::MeasBob {
                1.0
            } else {
                trine_shrink_factor(eta_b)
            };
            let prep = shrunk_trine(theta, shrink);
            let mut out = [Mat2::ZERO; 6];
            for (slot, (y, b)) in out.iter_mut().zip(alice_inputs()) {
                *slot = z_operator(y, b, &prep);
            }
            out
        }
    };
    let mut out = [(Mat2::ZERO, Mat2::ZERO); 6];
    for ((slot, (i, bit)), target) in out.iter_mut().zip(alice_inputs()).zip(targets) {
        *slot = (
            channel.apply(&ideal_operator(scenario, i, bit, eta_b)),
            target,
        );
    }
    out
}

/// The θ-parameterized trine with every Bloch vector scaled by `shrink`.
pub fn shrunk_trine(theta: f64, shrink: f64) -> PreparationSet {
    let base =
        trine_preparations(theta.clamp(0.0, FRAC_PI_2)).expect("angle clamped to the domain");
    base.map(|rho| QubitState::from_bloch(rho.bloch().scale(shrink)).expect("shrink ≤ 1"))
}

/// `t_{i,bit} = λ_min(K − sX)` for the six indices at angle θ with the
/// channel given explicitly.
pub fn eigen_t_values(
    scenario: Scenario,
    channel: &DephasingChannel,
    s: f64,
    eta_b: f64,
) -> [f64; 6] {
    operators(scenario, channel, eta_b).map(|(k, x)| lambda_min(&(k - x.scale(s))))
}

/// Evaluates the scenario's explicit `min{(p − √q)/36, (p + √q)/36}` lists
/// (`p = 18` for preparations, `18 − 3s` for measurements).
pub fn closed_form_t(
    scenario: Scenario,
    branch: u8,
    theta: f64,
    s: f64,
    eta_b: f64,
    c: f64,
    interval: Interval,
) -> Result<f64> {
    check_theta(theta)?;
    if !(1..=3).contains(&branch) {
        return Err(Error::InvalidInput(format!(
            "branch {branch} outside 1..=3"
        )));
    }
    let (sin, cos) = theta.sin_cos();
    let cos2 = (2.0 * theta).cos();
    let sin2 = sin * sin;
    let (p, q_axis, q_self, q_other) = match scenario {
        Scenario::Prep | Scenario::MeasCharlie => {
            let e = if scenario == Scenario::Prep {
                s * eta_b
            } else {
                s * trine_shrink_factor(eta_b)
            };
            let p = if scenario == Scenario::Prep {
                18.0
            } else {
                18.0 - 3.0 * s
            };
            let q_axis = 81.0 + 243.0 * c * c - 9.0 * e - 27.0 * c * e + 3.0 * e * e
                - 18.0 * e * cos
                - 54.0 * c * e * cos
                + 4.0 * e * e * cos
                + 2.0 * e * e * cos2;
            let q_self = 324.0 - 18.0 * e + e * e - 36.0 * SQRT3 * e * sin + 4.0 * e * e * sin2;
            let q_other = 81.0 + 243.0 * c * c + 9.0 * e - 27.0 * c * e + e * e
                - 18.0 * SQRT3 * e * sin
                - 18.0 * SQRT3 * c * e * sin
                + 4.0 * e * e * sin2;
            (p, q_axis, q_self, q_other)
        }
        Scenario::MeasBob => {
            let e = eta_b;
            let q_axis = 3.0 * s * s - 9.0 * s * e - 27.0 * c * s * e
                + 81.0 * e * e
                + 243.0 * c * c * e * e
                + 4.0 * s * s * cos
                - 18.0 * s * e * cos
                - 54.0 * c * s * e * cos
                + 2.0 * s * s * cos2;
            let q_self = s * s - 18.0 * s * e + 324.0 * e * e - 36.0 * SQRT3 * s * e * sin
                + 4.0 * s * s * sin2;
            let q_other =
                s * s + 9.0 * s * e - 27.0 * c * s * e + 81.0 * e * e + 243.0 * c * c * e * e
                    - 18.0 * SQRT3 * s * e * sin
                    - 18.0 * SQRT3 * c * s * e * sin
                    + 4.0 * s * s * sin2;
            (18.0 - 3.0 * s, q_axis, q_self, q_other)
        }
    };
    let q = match (branch, interval) {
        (1, _) => q_axis,
        (2, Interval::Lower) | (3, Interval::Upper) => q_self,
        _ => q_other,
    };
    let root = q.max(0.0).sqrt();
    Ok(((p - root) / 36.0).min((p + root) / 36.0))
}

/// Outcome of [`minimize_t`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TMinimizationResult {
    /// `min_θ (t₁ + t₂ + t₃)/3`.
    pub t_value: f64,
    pub theta_argmin: f64,
    /// `(t₁, t₂, t₃)` at the minimizing angle.
    pub per_branch: [f64; 3],
    /// Grid points per interval.
    pub grid_resolution: usize,
    /// `(t₁ + t₂ + t₃)/3` at the ideal angle `θ = π/3`.
    pub t_at_ideal_angle: f64,
    /// `max_θ (t₁ + t₂ + t₃)/3` over the grid.
    pub t_max_on_grid: f64,
}

/// Per-branch values at θ under the `c(θ)` rule: pairs `t_{k0}, t_{k1}` are
/// averaged (they coincide by symmetry).
pub fn branch_t_values(scenario: Scenario, theta: f64, s: f64, eta_b: f64) -> Result<[f64; 3]> {
    let channel = DephasingChannel::with_rule(theta, s)?;
    let six = eigen_t_values(scenario, &channel, s, eta_b);
    Ok([
        0.5 * (six[0] + six[1]),
        0.5 * (six[2] + six[3]),
        0.5 * (six[4] + six[5]),
    ])
}

fn mean_t(scenario: Scenario, theta: f64, s: f64, eta_b: f64) -> f64 {
    let t = branch_t_values(scenario, theta, s, eta_b).expect("theta within the domain");
    (t[0] + t[1] + t[2]) / 3.0
}

fn check_eta_b(eta_b: f64) -> Result<()> {
    if !(eta_b > 0.0 && eta_b <= 1.0) {
        return Err(Error::Domain {
            what: "eta_B",
            value: eta_b,
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok(())
}

/// Golden-section minimization of `f` on `[lo, hi]` to width `tol`.
fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    let mid = 0.5 * (lo + hi);
    [(x1, f1), (x2, f2), (mid, f(mid))]
        .into_iter()
        .fold((mid, f64::INFINITY), |best, cand| {
            if cand.1 < best.1 {
                cand
            } else {
                best
            }
        })
}

/// θ-grid scan of `(t₁ + t₂ + t₃)/3` over `[0, π/3]` and `(π/3, π/2]`
/// (`grid_n` points each), refined by golden-section search to `1e−10` in θ
/// around the best grid point of each interval.
pub fn minimize_t(
    scenario: Scenario,
    s: f64,
    eta_b: f64,
    grid_n: usize,
) -> Result<TMinimizationResult> {
    check_eta_b(eta_b)?;
    if grid_n < 64 {
        return Err(Error::InvalidInput(format!("grid_n = {grid_n} below 64")));
    }
    let lower_step = FRAC_PI_3 / (grid_n - 1) as f64;
    let upper_step = (FRAC_PI_2 - FRAC_PI_3) / grid_n as f64;
    let grid: Vec<(Interval, f64)> = (0..grid_n)
        .map(|i| (Interval::Lower, i as f64 * lower_step))
        .chain((1..=grid_n).map(|i| (Interval::Upper, FRAC_PI_3 + i as f64 * upper_step)))
        .collect();
    let values: Vec<f64> = grid
        .par_iter()
        .map(|&(_, th)| mean_t(scenario, th, s, eta_b))
        .collect();
    let t_max_on_grid = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let mut best = (f64::NAN, f64::INFINITY);
    for interval in [Interval::Lower, Interval::Upper] {
        let (idx, _) = grid
            .iter()
            .zip(&values)
            .enumerate()
            .filter(|(_, ((iv, _), _))| *iv == interval)
            .min_by(|a, b| a.1 .1.total_cmp(b.1 .1))
            .expect("nonempty interval");
        let (lo_edge, hi_edge, step) = match interval {
            Interval::Lower => (0.0, FRAC_PI_3, lower_step),
            Interval::Upper => (FRAC_PI_3 + f64::EPSILON, FRAC_PI_2, upper_step),
        };
        let center = grid[idx].1;
        let lo = (center - step).max(lo_edge);
        let hi = (center + step).min(hi_edge);
        let refined = golden_section(|th| mean_t(scenario, th, s, eta_b), lo, hi, 1e-10);
        for cand in [(center, values[idx]), refined] {
            if cand.1 < best.1 {
                best = cand;
            }
        }
    }
    let per_branch = branch_t_values(scenario, best.0, s, eta_b)?;
    Ok(TMinimizationResult {
        t_value: (per_branch[0] + per_branch[1] + per_branch[2]) / 3.0,
        theta_argmin: best.0,
        per_branch,
        grid_resolution: grid_n,
        t_at_ideal_angle: mean_t(scenario, FRAC_PI_3, s, eta_b),
        t_max_on_grid,
    })
}

/// Where the per-index `t` values of an inequality check come from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TSource {
    /// Closed-form branch values, with channel strength `c(θ)` and the lists
    /// evaluated at slope `s_design`.
    ClosedFormAt { s_design: f64 },
    /// One constant `t` for every index and angle.
    Constant(f64),
}

/// `(λ_min, θ, index)` for one operator at one angle.
type EigenSample = (f64, f64, (u8, u8));

/// Worst case of `λ_min(K − sX − tI)` over a θ grid and all six indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityReport {
    pub scenario: Scenario,
    pub s: f64,
    pub worst_lambda_min: f64,
    pub worst_theta: f64,
    /// `(x, a)` for preparations, `(y, b)` for measurements.
    pub worst_index: (u8, u8),
    pub points_checked: usize,
    /// Number of `(θ, index)` pairs with `λ_min < −tol`.
    pub violations: usize,
    pub passed: bool,
}

/// Checks `K − sX − tI ⪰ 0` within `tol` at `grid_n` points per interval.
pub fn verify_operator_inequalities(
    scenario: Scenario,
    s: f64,
    eta_b: f64,
    t: TSource,
    grid_n: usize,
    tol: f64,
) -> Result<InequalityReport> {
    check_eta_b(eta_b)?;
    if grid_n < 2 {
        return Err(Error::InvalidInput(format!("grid_n = {grid_n} below 2")));
    }
    let s_channel = match t {
        TSource::ClosedFormAt { s_design } => s_design,
        TSource::Constant(_) => s,
    };
    let lower = (0..grid_n).map(|i| (FRAC_PI_3 * i as f64 / (grid_n - 1) as f64, Interval::Lower));
    let upper = (1..=grid_n).map(|i| {
        (
            FRAC_PI_3 + (FRAC_PI_2 - FRAC_PI_3) * i as f64 / grid_n as f64,
            Interval::Upper,
        )
    });
    let points: Vec<(f64, Interval)> = lower.chain(upper).collect();
    let per_point: Vec<Result<Vec<EigenSample>>> = points
        .par_iter()
        .map(|&(theta, interval)| {
            let c = dephasing_strength(theta, s_channel, interval);
            let channel = DephasingChannel::new(theta, c, interval)?;
            let ops = operators(scenario, &channel, eta_b);
            alice_inputs()
                .zip(ops)
                .map(|((i, bit), (k, x))| {
                    let ti = match t {
                        TSource::Constant(v) => v,
                        TSource::ClosedFormAt { s_design } => {
                            closed_form_t(scenario, i, theta, s_design, eta_b, c, interval)?
                        }
                    };
                    let lam = lambda_min(&(k - x.scale(s) - Mat2::identity().scale(ti)));
                    Ok((lam, theta, (i, bit)))
                })
                .collect()
        })
        .collect();
    let mut report = InequalityReport {
        scenario,
        s,
        worst_lambda_min: f64::INFINITY,
        worst_theta: f64::NAN,
        worst_index: (0, 0),
        points_checked: 0,
        violations: 0,
        passed: true,
    };
    for point in per_point {
        for (lam, theta, index) in point? {
            report.points_checked += 1;
            if lam < -tol {
                report.violations += 1;
            }
            if lam < report.worst_lambda_min {
                report.worst_lambda_min = lam;
                report.worst_theta = theta;
                report.worst_index = index;
            }
        }
    }
    report.passed = report.violations == 0;
    Ok(report)
}

/// Whether a bound multiplies `(A − 1/2)` or `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Offset {
    ExcessOverHalf,
    Absolute,
}

/// Affine fidelity lower bound `(slope)·(A − offset) + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityBound {
    pub slope: f64,
    pub intercept: f64,
    pub offset: Offset,
}

impl FidelityBound {
    pub fn evaluate(&self, success: f64) -> f64 {
        let a = match self.offset {
            Offset::ExcessOverHalf => success - 0.5,
            Offset::Absolute => success,
        };
        self.slope * a + self.intercept
    }
}

fn bounded_fidelity(scenario: Scenario, success: f64, eta_b: f64) -> Result<f64> {
    check_eta_b(eta_b)?;
    let optimum = scenario.optimum(eta_b)?;
    check_domain("success probability", success, 0.5, optimum, DOMAIN_TOL)?;
    Ok(scenario.fidelity_bound(eta_b).evaluate(success))
}

/// `F(A_B) = (3/(2η_B))(A_B − 1/2) + 1/2` for `A_B ∈ [1/2, Ω_B]`.
pub fn fidelity_bound_prep(a_b: f64, eta_b: f64) -> Result<f64> {
    bounded_fidelity(Scenario::Prep, a_b, eta_b)
}

/// `F′(A_B) = (3/2)A_B + 1/4 − η_B/2` for `A_B ∈ [1/2, Ω_B]`.
pub fn fidelity_bound_meas_bob(a_b: f64, eta_b: f64) -> Result<f64> {
    bounded_fidelity(Scenario::MeasBob, a_b, eta_b)
}

/// `F′(A_C) = (9/(7γ − 1))A_C + (9 − 6γ)/(2 − 14γ)` for `A_C ∈ [1/2, Ω_C(η_B, 1)]`.
pub fn fidelity_bound_meas_charlie(a_c: f64, eta_b: f64) -> Result<f64> {
    bounded_fidelity(Scenario::MeasCharlie, a_c, eta_b)
}

/// `(success, bound)` pairs on `steps` evenly spaced points of
/// `[13/18, optimum]`.
pub fn fidelity_curve(scenario: Scenario, eta_b: f64, steps: usize) -> Result<Vec<(f64, f64)>> {
    if steps < 2 {
        return Err(Error::InvalidInput("steps must be at least 2".into()));
    }
    check_eta_b(eta_b)?;
    let hi = scenario.optimum(eta_b)?;
    if hi < CLASSICAL_BOUND {
        return Err(Error::InvalidInput(format!(
            "optimum {hi} for eta_B = {eta_b} lies below the classical bound 13/18"
        )));
    }
    (0..steps)
        .map(|i| {
            let a = if i + 1 == steps {
                hi
            } else {
                CLASSICAL_BOUND + (hi - CLASSICAL_BOUND) * i as f64 / (steps - 1) as f64
            };
            Ok((a, bounded_fidelity(scenario, a, eta_b)?))
        })
        .collect()
}

/// Largest `|closed_form_t − λ_min|` over random `(scenario, θ, η_B)` samples,
/// each scenario at its design slope with the `c(θ)` rule.
pub fn cross_validate_closed_forms(seed: u64, samples: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let scenario = Scenario::ALL[rng.gen_range(0..3)];
        let theta = rng.gen_range(0.0..=FRAC_PI_2);
        let eta_b = rng.gen_range(0.05..=1.0);
        let s = scenario.design_s(eta_b);
        let interval = Interval::of(theta);
        let channel = DephasingChannel::with_rule(theta, s).expect("theta in range");
        let six = eigen_t_values(scenario, &channel, s, eta_b);
        for (k, pair) in six.chunks(2).enumerate() {
            let closed = closed_form_t(scenario, k as u8 + 1, theta, s, eta_b, channel.c, interval)
                .expect("valid arguments");
            worst = worst
                .max((closed - pair[0]).abs())
                .max((closed - pair[1]).abs());
        }
    }
    worst
}
