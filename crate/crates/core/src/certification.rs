//! Certification of Bob's unsharpness from observed success probabilities.
//!
//! The optimal pair `(Ω_B, Ω_C)` traces a trade-off curve parameterized by
//! `η_B`. A point on the curve pins `η_B`; a point below it, with both
//! observers above the classical bound, brackets `η_B` between the value Bob's
//! score requires and the value Charlie's score still allows.

use crate::error::{check_domain, Error, Result};
use crate::quantum::omega_b;

/// Best success probability of parity-oblivious classical strategies.
pub const CLASSICAL_BOUND: f64 = 13.0 / 18.0;
/// Best success probability of a single unsharp quantum observer (`η = 1`).
pub const QUANTUM_MAX: f64 = 5.0 / 6.0;
/// Default on-curve tolerance.
pub const DEFAULT_CURVE_TOL: f64 = 1e-6;

const DOMAIN_TOL: f64 = 1e-12;

/// `Ω_C(Ω_B) = 1/2 + (1 + √(4 − 9(2Ω_B − 1)²))/9` for `Ω_B ∈ [1/2, 5/6]`.
pub fn tradeoff_curve(omega_b: f64) -> Result<f64> {
    check_domain("omega_B", omega_b, 0.5, QUANTUM_MAX, DOMAIN_TOL)?;
    let u = 2.0 * omega_b - 1.0;
    let radicand = (4.0 - 9.0 * u * u).max(0.0);
    Ok(0.5 + (1.0 + radicand.sqrt()) / 9.0)
}

/// `η_B^min = 3(A_B − 1/2)`: the least unsharpness reproducing Bob's score.
pub fn eta_min_from_bob(a_b: f64) -> Result<f64> {
    check_domain("A_B", a_b, 0.5, QUANTUM_MAX, DOMAIN_TOL)?;
    Ok((3.0 * (a_b - 0.5)).clamp(0.0, 1.0))
}

/// `η_B^max = √(1 − u²)` with `u = ((9/2)(2A_C − 1) − 1)/2`: the largest
/// unsharpness that still leaves Charlie able to reach `A_C`. Defined for
/// `A_C ∈ [7/18, 5/6]`, where `|u| ≤ 1`.
pub fn eta_max_from_charlie(a_c: f64) -> Result<f64> {
    check_domain("A_C", a_c, 7.0 / 18.0, QUANTUM_MAX, DOMAIN_TOL)?;
    let u = (4.5 * (2.0 * a_c - 1.0) - 1.0) / 2.0;
    Ok((1.0 - u * u).max(0.0).sqrt())
}

/// Observed success probabilities of Bob and Charlie.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservedPair {
    pub a_b: f64,
    pub a_c: f64,
}

impl ObservedPair {
    pub fn new(a_b: f64, a_c: f64) -> Result<Self> {
        check_domain("A_B", a_b, 0.0, 1.0, 0.0)?;
        check_domain("A_C", a_c, 0.0, 1.0, 0.0)?;
        Ok(Self { a_b, a_c })
    }
}

/// Outcome of [`certify`].
#[derive(Debug, Clone, PartialEq)]
pub struct CertificationVerdict {
    pub on_curve: bool,
    pub certified_eta_b: Option<f64>,
    pub eta_b_interval: Option<(f64, f64)>,
    /// Both observers strictly beat the classical bound.
    pub both_quantum: bool,
    /// Why no certificate was issued, when none was.
    pub reason: Option<String>,
}

/// On the curve (`|A_C − Ω_C(A_B)| ≤ tol`) the verdict certifies
/// `η_B = 3(A_B − 1/2)`. Off the curve it reports `[η_B^min, η_B^max]` when both
/// scores reach the classical bound and the interval is nonempty.
pub fn certify(pair: ObservedPair, tol: f64) -> Result<CertificationVerdict> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "tolerance {tol} must be positive"
        )));
    }
    let ObservedPair { a_b, a_c } = pair;
    let both_quantum = a_b > CLASSICAL_BOUND && a_c > CLASSICAL_BOUND;
    let curve_domain = (0.5 - DOMAIN_TOL..=QUANTUM_MAX + DOMAIN_TOL).contains(&a_b);
    let on_curve = curve_domain && (a_c - tradeoff_curve(a_b)?).abs() <= tol;
    let mut verdict = CertificationVerdict {
        on_curve,
        certified_eta_b: None,
        eta_b_interval: None,
        both_quantum,
        reason: None,
    };
    if on_curve {
        verdict.certified_eta_b = Some(eta_min_from_bob(a_b)?);
        return Ok(verdict);
    }
    let reaches = |a: f64| a >= CLASSICAL_BOUND - tol;
    verdict.reason = match (reaches(a_b), reaches(a_c)) {
        (false, false) => Some("A_B and A_C are below the classical bound 13/18".into()),
        (false, true) => Some("A_B is below the classical bound 13/18".into()),
        (true, false) => Some("A_C is below the classical bound 13/18".into()),
        (true, true) => {
            let lo = eta_min_from_bob(a_b)?;
            let hi = eta_max_from_charlie(a_c)?;
            if lo <= hi {
                verdict.eta_b_interval = Some((lo, hi));
                None
            } else {
                Some(format!(
                    "empty interval: eta_B^min = {lo} exceeds eta_B^max = {hi}"
                ))
            }
        }
    };
    Ok(verdict)
}

/// Smallest `η_C` giving Charlie the classical bound after Bob measured with
/// `η_B`: `(9/2)(2·13/18 − 1)/(1 + 2√(1 − η_B²))`.
pub fn eta_c_min(eta_b: f64) -> Result<f64> {
    check_domain("eta_B", eta_b, 0.0, 1.0, 0.0)?;
    Ok(4.5 * (2.0 * CLASSICAL_BOUND - 1.0) / (1.0 + 2.0 * (1.0 - eta_b * eta_b).sqrt()))
}

/// `η_D` Debbie needs to reach the classical bound after Bob and Charlie.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaDRequirement {
    pub eta_d: f64,
    /// `η_D ≤ 1`, i.e. a legitimate unsharpness parameter exists.
    pub feasible: bool,
}

/// `η_D = (27/2)(2·13/18 − 1)/((1 + 2√(1−η_B²))(1 + 2√(1−η_C²)))`.
pub fn required_eta_d(eta_b: f64, eta_c: f64) -> Result<EtaDRequirement> {
    check_domain("eta_B", eta_b, 0.0, 1.0, 0.0)?;
    check_domain("eta_C", eta_c, 0.0, 1.0, 0.0)?;
    let db = 1.0 + 2.0 * (1.0 - eta_b * eta_b).sqrt();
    let dc = 1.0 + 2.0 * (1.0 - eta_c * eta_c).sqrt();
    let eta_d = 13.5 * (2.0 * CLASSICAL_BOUND - 1.0) / (db * dc);
    Ok(EtaDRequirement {
        eta_d,
        feasible: eta_d <= 1.0,
    })
}

/// Range of `η_B` for which both Bob and Charlie (sharp) can beat the
/// classical bound: `[2/3, √3/2]`.
pub fn certification_window() -> (f64, f64) {
    (
        eta_min_from_bob(CLASSICAL_BOUND).expect("classical bound lies in the domain"),
        eta_max_from_charlie(CLASSICAL_BOUND).expect("classical bound lies in the domain"),
    )
}

/// One row of the third-observer sweep over the certification window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowRow {
    /// Offset `ζ = η_B − 2/3`.
    pub zeta: f64,
    pub eta_b: f64,
    pub omega_b: f64,
    pub eta_c_min: f64,
    /// `η_D` required when Charlie uses `η_C^min`.
    pub eta_d_required: f64,
    /// `η_D` required when Charlie measures sharply.
    pub eta_d_sharp_charlie: f64,
}

/// Sweep `η_B` over the window in `steps` evenly spaced points (endpoints
/// included; a single step evaluates the lower endpoint).
pub fn window_sweep(steps: usize) -> Result<Vec<WindowRow>> {
    if steps == 0 {
        return Err(Error::InvalidInput("steps must be at least 1".into()));
    }
    let (lo, hi) = certification_window();
    (0..steps)
        .map(|i| {
            let eta_b = if steps == 1 {
                lo
            } else {
                lo + (hi - lo) * i as f64 / (steps - 1) as f64
            };
            let eta_c = eta_c_min(eta_b)?;
            Ok(WindowRow {
                zeta: eta_b - lo,
                eta_b,
                omega_b: omega_b(eta_b)?,
                eta_c_min: eta_c,
                eta_d_required: required_eta_d(eta_b, eta_c.min(1.0))?.eta_d,
                eta_d_sharp_charlie: required_eta_d(eta_b, 1.0)?.eta_d,
            })
        })
        .collect()
}
