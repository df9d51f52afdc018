//! Exact 2×2 complex linear algebra for single-qubit states, effects and
//! Kraus maps.
//!
//! Every operator used by the game (Pauli matrices, unsharp effects, Kraus
//! pairs, dephasing branches, the K/W/Z operators of the robustness analysis)
//! is a [`Mat2`]. Bloch vectors are the real view of traceless Hermitian parts:
//! `ρ = (I + r·σ)/2`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance for algebraic identities (Hermiticity, trace, completeness).
pub const ALGEBRAIC_TOL: f64 = 1e-12;
/// Tolerance for positivity checks after channel composition.
pub const PSD_TOL: f64 = 1e-9;

/// Configurable tolerance pair used by validating constructors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub algebraic: f64,
    pub psd: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            algebraic: ALGEBRAIC_TOL,
            psd: PSD_TOL,
        }
    }
}

/// A 2×2 complex matrix, row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct Mat2(pub [Complex64; 4]);

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl Mat2 {
    pub const ZERO: Mat2 = Mat2([c(0.0, 0.0); 4]);

    pub const fn new(a: Complex64, b: Complex64, c_: Complex64, d: Complex64) -> Self {
        Mat2([a, b, c_, d])
    }

    pub fn from_real(a: f64, b: f64, c_: f64, d: f64) -> Self {
        Mat2([c(a, 0.0), c(b, 0.0), c(c_, 0.0), c(d, 0.0)])
    }

    pub const fn identity() -> Self {
        Mat2([c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)])
    }

    pub const fn sigma_x() -> Self {
        Mat2([c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
    }

    pub const fn sigma_y() -> Self {
        Mat2([c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
    }

    pub const fn sigma_z() -> Self {
        Mat2([c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)])
    }

    /// `s·I + v·σ` for real `s` and real vector `v`.
    pub fn from_pauli(s: f64, v: Bloch) -> Self {
        Mat2([c(s + v.z, 0.0), c(v.x, -v.y), c(v.x, v.y), c(s - v.z, 0.0)])
    }

    /// `n·σ`.
    pub fn pauli_along(n: Bloch) -> Self {
        Self::from_pauli(0.0, n)
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[2 * row + col]
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0] + self.0[3]
    }

    pub fn det(&self) -> Complex64 {
        self.0[0] * self.0[3] - self.0[1] * self.0[2]
    }

    pub fn adjoint(&self) -> Self {
        let [a, b, c_, d] = self.0;
        Mat2([a.conj(), c_.conj(), b.conj(), d.conj()])
    }

    pub fn scale(&self, k: f64) -> Self {
        Mat2(self.0.map(|z| z * k))
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermitian_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// Pauli coordinates `(s, v)` such that `self = s·I + v·σ`, reading only
    /// the Hermitian part.
    pub fn pauli_coords(&self) -> (f64, Bloch) {
        let [a, b, c_, d] = self.0;
        let s = 0.5 * (a.re + d.re);
        let v = Bloch::new(
            0.5 * (b.re + c_.re),
            0.5 * (c_.im - b.im),
            0.5 * (a.re - d.re),
        );
        (s, v)
    }

    /// `A ρ A†`.
    pub fn sandwich(&self, inner: &Mat2) -> Mat2 {
        *self * *inner * self.adjoint()
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let mut out = self.0;
        for (o, r) in out.iter_mut().zip(rhs.0) {
            *o += r;
        }
        Mat2(out)
    }
}

impl AddAssign for Mat2 {
    fn add_assign(&mut self, rhs: Mat2) {
        *self = *self + rhs;
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        self + (-rhs)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        Mat2(self.0.map(|z| -z))
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let [a, b, c_, d] = self.0;
        let [e, f, g, h] = rhs.0;
        Mat2([a * e + b * g, a * f + b * h, c_ * e + d * g, c_ * f + d * h])
    }
}

impl Mul<Mat2> for f64 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        rhs.scale(self)
    }
}

impl std::iter::Sum for Mat2 {
    fn sum<I: Iterator<Item = Mat2>>(iter: I) -> Mat2 {
        iter.fold(Mat2::ZERO, |acc, m| acc + m)
    }
}

/// Real 3-vector in Bloch coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Bloch {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Bloch {
    pub const ZERO: Bloch = Bloch {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };
    pub const X: Bloch = Bloch {
        x: 1.0,
        y: 0.0,
        z: 0.0,
    };
    pub const Y: Bloch = Bloch {
        x: 0.0,
        y: 1.0,
        z: 0.0,
    };
    pub const Z: Bloch = Bloch {
        x: 0.0,
        y: 0.0,
        z: 1.0,
    };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(&self, other: &Bloch) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, k: f64) -> Bloch {
        Bloch::new(k * self.x, k * self.y, k * self.z)
    }

    /// Unit vector along `self`; the zero vector maps to itself.
    pub fn normalized(&self) -> Bloch {
        let n = self.norm();
        if n == 0.0 {
            *self
        } else {
            self.scale(1.0 / n)
        }
    }

    pub fn max_abs_diff(&self, other: &Bloch) -> f64 {
        let d = *self - *other;
        d.x.abs().max(d.y.abs()).max(d.z.abs())
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl Add for Bloch {
    type Output = Bloch;
    fn add(self, o: Bloch) -> Bloch {
        Bloch::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Bloch {
    type Output = Bloch;
    fn sub(self, o: Bloch) -> Bloch {
        Bloch::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Bloch {
    type Output = Bloch;
    fn neg(self) -> Bloch {
        self.scale(-1.0)
    }
}

impl Mul<Bloch> for f64 {
    type Output = Bloch;
    fn mul(self, v: Bloch) -> Bloch {
        v.scale(self)
    }
}

impl std::iter::Sum for Bloch {
    fn sum<I: Iterator<Item = Bloch>>(iter: I) -> Bloch {
        iter.fold(Bloch::ZERO, |acc, v| acc + v)
    }
}

/// A single-qubit density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    matrix: Mat2,
}

impl QubitState {
    /// `(I + r·σ)/2`. Rejects `‖r‖ > 1 + 1e-12`.
    pub fn from_bloch(r: Bloch) -> Result<Self> {
        let norm = r.norm();
        if !norm.is_finite() || norm > 1.0 + ALGEBRAIC_TOL {
            return Err(Error::UnphysicalBloch { norm });
        }
        Ok(Self {
            matrix: Mat2::from_pauli(0.5, r.scale(0.5)),
        })
    }

    pub fn maximally_mixed() -> Self {
        Self {
            matrix: Mat2::identity().scale(0.5),
        }
    }

    /// Validates Hermiticity, unit trace and positivity with the given tolerances.
    pub fn from_matrix(m: Mat2, tol: Tolerances) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::InvalidState {
                reason: "non-finite entry".into(),
            });
        }
        let dev = m.hermitian_deviation();
        if dev > tol.algebraic {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > tol.algebraic || tr.im.abs() > tol.algebraic {
            return Err(Error::InvalidState {
                reason: format!("trace {tr} != 1"),
            });
        }
        let (lo, _) = hermitian_eigenvalues(&m)?;
        if lo < -tol.psd {
            return Err(Error::InvalidState {
                reason: format!("negative eigenvalue {lo:e}"),
            });
        }
        Ok(Self { matrix: m })
    }

    /// Wraps a matrix already known to be a density matrix (output of a
    /// trace-preserving map applied to a valid state).
    pub(crate) fn from_matrix_unchecked(matrix: Mat2) -> Self {
        Self { matrix }
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.matrix
    }

    /// Bloch vector `r_i = Tr[ρ σ_i]`.
    pub fn bloch(&self) -> Bloch {
        let (_, v) = self.matrix.pauli_coords();
        v.scale(2.0)
    }

    /// Born rule `Tr[ρ E]`, real part.
    pub fn expectation(&self, op: &Mat2) -> f64 {
        (self.matrix * *op).trace().re
    }
}

/// `bloch_to_state`.
pub fn bloch_to_state(r: Bloch) -> Result<QubitState> {
    QubitState::from_bloch(r)
}

/// `state_to_bloch`.
pub fn state_to_bloch(rho: &QubitState) -> Bloch {
    rho.bloch()
}

/// Eigenvalues of a Hermitian 2×2 matrix in ascending order.
///
/// Uses `λ = (tr ± √(tr² − 4 det))/2`, written as `s ± ‖v‖` in Pauli
/// coordinates so the discriminant is never negative.
pub fn hermitian_eigenvalues(m: &Mat2) -> Result<(f64, f64)> {
    let dev = m.hermitian_deviation();
    if dev > 1e-10 || !m.is_finite() {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let (s, v) = m.pauli_coords();
    let r = v.norm();
    Ok((s - r, s + r))
}

/// Smallest eigenvalue of a Hermitian matrix, without validation.
pub(crate) fn lambda_min(m: &Mat2) -> f64 {
    let (s, v) = m.pauli_coords();
    s - v.norm()
}

fn check_measurement(direction: Bloch, eta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::EtaOutOfRange { eta });
    }
    let norm = direction.norm();
    if (norm - 1.0).abs() > ALGEBRAIC_TOL {
        return Err(Error::NonUnitDirection { norm });
    }
    Ok(())
}

/// Two-outcome effect pair `E_± = (I ± η n·σ)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectPair {
    pub plus: Mat2,
    pub minus: Mat2,
}

impl EffectPair {
    /// Effect for outcome bit `b`: `b = 0 → E_+`, `b = 1 → E_-`.
    pub fn outcome(&self, b: u8) -> &Mat2 {
        if b == 0 {
            &self.plus
        } else {
            &self.minus
        }
    }
}

pub fn make_effects(direction: Bloch, eta: f64) -> Result<EffectPair> {
    check_measurement(direction, eta)?;
    let v = direction.scale(0.5 * eta);
    Ok(EffectPair {
        plus: Mat2::from_pauli(0.5, v),
        minus: Mat2::from_pauli(0.5, -v),
    })
}

/// Kraus pair `K_± = α I ± β n·σ` (unitary freedom fixed to the identity).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrausPair {
    pub plus: Mat2,
    pub minus: Mat2,
    pub alpha: f64,
    pub beta: f64,
}

impl KrausPair {
    /// `Σ_b K_b ρ K_b†`.
    pub fn apply(&self, rho: &Mat2) -> Mat2 {
        self.plus.sandwich(rho) + self.minus.sandwich(rho)
    }

    /// `Σ_b K_b† K_b`, which should be the identity.
    pub fn completeness(&self) -> Mat2 {
        self.plus.adjoint() * self.plus + self.minus.adjoint() * self.minus
    }
}

/// `α = (√((1−η)/2) + √((1+η)/2))/2`, `β = (√((1+η)/2) − √((1−η)/2))/2`.
pub fn kraus_coefficients(eta: f64) -> (f64, f64) {
    let lo = ((1.0 - eta) / 2.0).sqrt();
    let hi = ((1.0 + eta) / 2.0).sqrt();
    (0.5 * (lo + hi), 0.5 * (hi - lo))
}

pub fn make_kraus(direction: Bloch, eta: f64) -> Result<KrausPair> {
    check_measurement(direction, eta)?;
    let (alpha, beta) = kraus_coefficients(eta);
    let v = direction.scale(beta);
    Ok(KrausPair {
        plus: Mat2::from_pauli(alpha, v),
        minus: Mat2::from_pauli(alpha, -v),
        alpha,
        beta,
    })
}

/// Post-measurement state averaged over three equiprobable settings:
/// `(1/3) Σ_y Σ_b K_{b|y} ρ K_{b|y}†`.
pub fn apply_kraus_average(rho: &QubitState, settings: &[KrausPair; 3]) -> QubitState {
    let m: Mat2 = settings.iter().map(|k| k.apply(rho.matrix())).sum();
    QubitState {
        matrix: m.scale(1.0 / 3.0),
    }
}

/// Shrink factor `γ = 2α² = (1 + √(1−η²))/2` of in-plane Bloch vectors under
/// a trine unsharp measurement.
pub fn trine_shrink_factor(eta: f64) -> f64 {
    0.5 * (1.0 + (1.0 - eta * eta).max(0.0).sqrt())
}

/// `Tr[target ρ]` for a pure target.
pub fn fidelity_pure_target(target: &QubitState, rho: &QubitState) -> Result<f64> {
    let (_, largest) = hermitian_eigenvalues(target.matrix())?;
    if (largest - 1.0).abs() > 1e-10 {
        return Err(Error::NotPure { largest });
    }
    Ok((*target.matrix() * *rho.matrix())
        .trace()
        .re
        .clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const SQRT3_2: f64 = 0.866_025_403_784_438_6;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn bloch_to_state_examples() {
        let mixed = bloch_to_state(Bloch::ZERO).unwrap();
        assert!(mixed.matrix().max_abs_diff(&Mat2::identity().scale(0.5)) < 1e-15);

        let px = bloch_to_state(Bloch::X).unwrap();
        let expected = (Mat2::identity() + Mat2::sigma_x()).scale(0.5);
        assert!(px.matrix().max_abs_diff(&expected) < 1e-15);
        let (lo, hi) = hermitian_eigenvalues(px.matrix()).unwrap();
        assert!(close(lo, 0.0, 1e-15) && close(hi, 1.0, 1e-15));

        let trine = bloch_to_state(Bloch::new(-0.5, 0.0, SQRT3_2)).unwrap();
        let expected = (Mat2::identity() - Mat2::sigma_x().scale(0.5)
            + Mat2::sigma_z().scale(SQRT3_2))
        .scale(0.5);
        assert!(trine.matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn rejects_unphysical_bloch() {
        assert!(matches!(
            bloch_to_state(Bloch::new(1.0, 1.0, 0.0)),
            Err(Error::UnphysicalBloch { .. })
        ));
        assert!(bloch_to_state(Bloch::new(1.0 + 5e-13, 0.0, 0.0)).is_ok());
    }

    #[test]
    fn state_to_bloch_examples() {
        assert_eq!(state_to_bloch(&QubitState::maximally_mixed()), Bloch::ZERO);
        let up = QubitState::from_matrix(
            (Mat2::identity() + Mat2::sigma_z()).scale(0.5),
            Tolerances::default(),
        )
        .unwrap();
        assert!(state_to_bloch(&up).max_abs_diff(&Bloch::Z) < 1e-15);
        let r = Bloch::new(0.3, -0.4, 0.5);
        assert!(state_to_bloch(&bloch_to_state(r).unwrap()).max_abs_diff(&r) < 1e-14);
    }

    #[test]
    fn from_matrix_validation() {
        let tol = Tolerances::default();
        assert!(matches!(
            QubitState::from_matrix(Mat2::sigma_x(), tol),
            Err(Error::InvalidState { .. })
        ));
        let non_herm = Mat2::from_real(0.5, 0.3, 0.0, 0.5);
        assert!(matches!(
            QubitState::from_matrix(non_herm, tol),
            Err(Error::NotHermitian { .. })
        ));
        let negative = Mat2::from_real(1.2, 0.0, 0.0, -0.2);
        assert!(QubitState::from_matrix(negative, tol).is_err());
    }

    #[test]
    fn eigenvalue_examples() {
        assert_eq!(
            hermitian_eigenvalues(&Mat2::identity()).unwrap(),
            (1.0, 1.0)
        );
        assert_eq!(
            hermitian_eigenvalues(&Mat2::sigma_z()).unwrap(),
            (-1.0, 1.0)
        );
        let m = (Mat2::identity() + Mat2::sigma_x().scale(0.5)).scale(0.5);
        let (lo, hi) = hermitian_eigenvalues(&m).unwrap();
        assert!(close(lo, 0.25, 1e-15) && close(hi, 0.75, 1e-15));
        assert!(hermitian_eigenvalues(&Mat2::from_real(0.0, 1.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn effect_examples() {
        let sharp = make_effects(Bloch::X, 1.0).unwrap();
        assert!(
            sharp
                .plus
                .max_abs_diff(&(Mat2::identity() + Mat2::sigma_x()).scale(0.5))
                < 1e-15
        );
        assert!(
            sharp
                .minus
                .max_abs_diff(&(Mat2::identity() - Mat2::sigma_x()).scale(0.5))
                < 1e-15
        );

        let trivial = make_effects(Bloch::X, 0.0).unwrap();
        assert_eq!(trivial.plus, Mat2::identity().scale(0.5));
        assert_eq!(trivial.minus, Mat2::identity().scale(0.5));

        let eta = 2.0 / 3.0;
        let e = make_effects(Bloch::X, eta).unwrap();
        let (lo, hi) = hermitian_eigenvalues(&e.plus).unwrap();
        assert!(close(lo, (1.0 - eta) / 2.0, 1e-15) && close(hi, (1.0 + eta) / 2.0, 1e-15));
        assert!(close(lo, 1.0 / 6.0, 1e-15) && close(hi, 5.0 / 6.0, 1e-15));
    }

    #[test]
    fn effect_errors() {
        assert!(matches!(
            make_effects(Bloch::X, 1.1),
            Err(Error::EtaOutOfRange { .. })
        ));
        assert!(matches!(
            make_effects(Bloch::X, -0.1),
            Err(Error::EtaOutOfRange { .. })
        ));
        assert!(matches!(
            make_effects(Bloch::new(0.5, 0.0, 0.0), 0.5),
            Err(Error::NonUnitDirection { .. })
        ));
        assert!(make_kraus(Bloch::new(1.0, 1.0, 0.0), 0.5).is_err());
    }

    #[test]
    fn kraus_limits() {
        let sharp = make_kraus(Bloch::Z, 1.0).unwrap();
        assert!(close(sharp.alpha, 0.5, 1e-15) && close(sharp.beta, 0.5, 1e-15));
        assert!(
            sharp
                .plus
                .max_abs_diff(&(Mat2::identity() + Mat2::sigma_z()).scale(0.5))
                < 1e-15
        );

        let none = make_kraus(Bloch::Z, 0.0).unwrap();
        assert!(close(none.alpha, std::f64::consts::FRAC_1_SQRT_2, 1e-15));
        assert_eq!(none.beta, 0.0);
    }

    #[test]
    fn identity_channel_and_unital() {
        let dirs = [Bloch::X, Bloch::Z, Bloch::new(0.0, 0.6, 0.8)];
        let none = dirs.map(|d| make_kraus(d, 0.0).unwrap());
        let rho = bloch_to_state(Bloch::new(0.2, -0.3, 0.4)).unwrap();
        let out = apply_kraus_average(&rho, &none);
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-15);

        let some = dirs.map(|d| make_kraus(d, 0.73).unwrap());
        let out = apply_kraus_average(&QubitState::maximally_mixed(), &some);
        assert!(out.matrix().max_abs_diff(&Mat2::identity().scale(0.5)) < 1e-15);
    }

    #[test]
    fn trine_shrink_at_076() {
        let eta = 0.76;
        let trine = [
            Bloch::X,
            Bloch::new(-0.5, 0.0, SQRT3_2),
            Bloch::new(-0.5, 0.0, -SQRT3_2),
        ];
        let kraus = trine.map(|d| make_kraus(-d, eta).unwrap());
        let r = Bloch::new(0.6, 0.0, -0.8);
        let out = apply_kraus_average(&bloch_to_state(r).unwrap(), &kraus);
        let gamma = trine_shrink_factor(eta);
        assert!(close(gamma, 0.824_961_536_185_438_4, 1e-15));
        assert!(out.bloch().max_abs_diff(&r.scale(gamma)) < 1e-12);
        let (alpha, _) = kraus_coefficients(eta);
        assert!(close(gamma, 2.0 * alpha * alpha, 1e-15));
    }

    #[test]
    fn fidelity_examples() {
        let px = bloch_to_state(Bloch::X).unwrap();
        let mx = bloch_to_state(-Bloch::X).unwrap();
        assert!(close(fidelity_pure_target(&px, &px).unwrap(), 1.0, 1e-15));
        assert!(close(fidelity_pure_target(&px, &mx).unwrap(), 0.0, 1e-15));
        assert!(close(
            fidelity_pure_target(&px, &QubitState::maximally_mixed()).unwrap(),
            0.5,
            1e-15
        ));
        assert!(matches!(
            fidelity_pure_target(&QubitState::maximally_mixed(), &px),
            Err(Error::NotPure { .. })
        ));
    }

    fn unit() -> impl Strategy<Value = Bloch> {
        (0.0..std::f64::consts::PI, 0.0..std::f64::consts::TAU)
            .prop_map(|(t, p)| Bloch::new(t.sin() * p.cos(), t.sin() * p.sin(), t.cos()))
    }

    fn ball() -> impl Strategy<Value = Bloch> {
        (unit(), 0.0..=1.0f64).prop_map(|(u, r)| u.scale(r))
    }

    proptest! {
        #[test]
        fn kraus_completeness(n in unit(), eta in 0.0..=1.0f64) {
            let k = make_kraus(n, eta).unwrap();
            prop_assert!(k.completeness().max_abs_diff(&Mat2::identity()) < 1e-12);
            prop_assert!((k.alpha * k.alpha + k.beta * k.beta - 0.5).abs() < 1e-12);
            prop_assert!((4.0 * k.alpha * k.beta - eta).abs() < 1e-12);
            let e = make_effects(n, eta).unwrap();
            prop_assert!((k.plus.adjoint() * k.plus).max_abs_diff(&e.plus) < 1e-12);
            prop_assert!((k.minus.adjoint() * k.minus).max_abs_diff(&e.minus) < 1e-12);
            prop_assert!((e.plus + e.minus).max_abs_diff(&Mat2::identity()) < 1e-12);
        }

        #[test]
        fn born_rule_on_effects(n in unit(), eta in 0.0..=1.0f64, r in ball()) {
            let e = make_effects(n, eta).unwrap();
            let rho = bloch_to_state(r).unwrap();
            prop_assert!((rho.expectation(&e.plus) - 0.5 * (1.0 + eta * n.dot(&r))).abs() < 1e-12);
            prop_assert!((rho.expectation(&e.minus) - 0.5 * (1.0 - eta * n.dot(&r))).abs() < 1e-12);
        }

        #[test]
        fn bloch_round_trip(r in ball()) {
            let rho = bloch_to_state(r).unwrap();
            prop_assert!(state_to_bloch(&rho).max_abs_diff(&r) < 1e-14);
            let again = bloch_to_state(state_to_bloch(&rho)).unwrap();
            prop_assert!(again.matrix().max_abs_diff(rho.matrix()) < 1e-14);
        }

        #[test]
        fn eigenvalues_match_characteristic_polynomial(s in -2.0..2.0f64, v in ball(), k in 0.0..3.0f64) {
            let m = Mat2::from_pauli(s, v.scale(k));
            let (lo, hi) = hermitian_eigenvalues(&m).unwrap();
            // roots of λ² − tr λ + det
            let tr = m.trace().re;
            let det = m.det().re;
            let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
            prop_assert!((lo - 0.5 * (tr - disc)).abs() < 1e-12);
            prop_assert!((hi - 0.5 * (tr + disc)).abs() < 1e-12);
            prop_assert!(lo <= hi);
        }

        #[test]
        fn kraus_average_is_a_state(r in ball(), d in proptest::array::uniform3(unit()), eta in 0.0..=1.0f64) {
            let kraus = d.map(|n| make_kraus(n, eta).unwrap());
            let out = apply_kraus_average(&bloch_to_state(r).unwrap(), &kraus);
            prop_assert!(QubitState::from_matrix(*out.matrix(), Tolerances::default()).is_ok());
        }
    }
}
