//! Quantum strategies: trine preparations, sequential unsharp observers and the
//! closed-form optimal success probabilities.
//!
//! Bob measures Alice's qubit with unsharpness `η_B` along directions `b̂_y`
//! and passes the post-measurement state on; Charlie does the same with
//! `η_C` along `ĉ_z`, then Debbie with `η_D` along `d̂_w`. Each observer's
//! setting is uniformly random and independent of the previous ones, so the
//! state a later observer receives is the setting-averaged Kraus update.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{check_domain, Error, Result};
use crate::game::{born_table, success_probability, PreparationSet, SETTINGS};
use crate::qubit::{
    apply_kraus_average, bloch_to_state, make_effects, make_kraus, trine_shrink_factor, Bloch,
    EffectPair, KrausPair, QubitState, ALGEBRAIC_TOL,
};

/// Trine preparations `r₁₀ = (1,0,0)`, `r₂₀ = (−cosθ, 0, sinθ)`,
/// `r₃₀ = (−cosθ, 0, −sinθ)` and their antipodes `r_{x1} = −r_{x0}`.
/// At `θ = π/3` the three `r_{x0}` are 120° apart.
pub fn trine_preparations(theta: f64) -> Result<PreparationSet> {
    check_domain("theta", theta, 0.0, std::f64::consts::FRAC_PI_2, 0.0)?;
    let (s, c) = theta.sin_cos();
    let r = [Bloch::X, Bloch::new(-c, 0.0, s), Bloch::new(-c, 0.0, -s)];
    antipodal_preparations(r)
}

/// Six pure states with `r_{x1} = −r_{x0}`, `r_{x0} = r[x − 1]`.
pub fn antipodal_preparations(r: [Bloch; 3]) -> Result<PreparationSet> {
    let states = [
        bloch_to_state(r[0])?,
        bloch_to_state(-r[0])?,
        bloch_to_state(r[1])?,
        bloch_to_state(-r[1])?,
        bloch_to_state(r[2])?,
        bloch_to_state(-r[2])?,
    ];
    Ok(PreparationSet::new(states))
}

/// Measurement directions `−r̂_{k0}` aligned against Alice's `a = 0` states.
pub fn aligned_directions(prep: &PreparationSet) -> Result<[Bloch; 3]> {
    let mut out = [Bloch::ZERO; 3];
    for (k, slot) in out.iter_mut().enumerate() {
        let r = prep.get(k as u8 + 1, 0).bloch();
        if r.norm() < ALGEBRAIC_TOL {
            return Err(Error::InvalidInput(format!(
                "r_{}0 has no direction",
                k + 1
            )));
        }
        *slot = -r.normalized();
    }
    Ok(out)
}

/// Unsharpness and measurement directions of the three sequential observers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SequentialConfig {
    pub eta_b: f64,
    pub eta_c: f64,
    pub eta_d: f64,
    pub bob: [Bloch; 3],
    pub charlie: [Bloch; 3],
    pub debbie: [Bloch; 3],
}

impl SequentialConfig {
    pub fn new(
        eta: [f64; 3],
        bob: [Bloch; 3],
        charlie: [Bloch; 3],
        debbie: [Bloch; 3],
    ) -> Result<Self> {
        for e in eta {
            if !(0.0..=1.0).contains(&e) {
                return Err(Error::EtaOutOfRange { eta: e });
            }
        }
        for d in bob.iter().chain(&charlie).chain(&debbie) {
            let norm = d.norm();
            if (norm - 1.0).abs() > ALGEBRAIC_TOL {
                return Err(Error::NonUnitDirection { norm });
            }
        }
        Ok(Self {
            eta_b: eta[0],
            eta_c: eta[1],
            eta_d: eta[2],
            bob,
            charlie,
            debbie,
        })
    }

    /// All three observers measure along `−r̂_{k0}` of the given preparations.
    pub fn ideal(prep: &PreparationSet, eta_b: f64, eta_c: f64, eta_d: f64) -> Result<Self> {
        let dirs = aligned_directions(prep)?;
        Self::new([eta_b, eta_c, eta_d], dirs, dirs, dirs)
    }

    pub fn bob_effects(&self) -> [EffectPair; 3] {
        effects(self.bob, self.eta_b)
    }

    pub fn charlie_effects(&self) -> [EffectPair; 3] {
        effects(self.charlie, self.eta_c)
    }

    pub fn debbie_effects(&self) -> [EffectPair; 3] {
        effects(self.debbie, self.eta_d)
    }

    pub fn bob_kraus(&self) -> [KrausPair; 3] {
        kraus(self.bob, self.eta_b)
    }

    pub fn charlie_kraus(&self) -> [KrausPair; 3] {
        kraus(self.charlie, self.eta_c)
    }
}

// Directions and η are validated by SequentialConfig::new.
fn effects(dirs: [Bloch; 3], eta: f64) -> [EffectPair; 3] {
    dirs.map(|d| make_effects(d, eta).expect("validated measurement"))
}

fn kraus(dirs: [Bloch; 3], eta: f64) -> [KrausPair; 3] {
    dirs.map(|d| make_kraus(d, eta).expect("validated measurement"))
}

/// The three unnormalized vectors `n_y = Σ_x (−1)^{δ_{x,y}} (r_{x0} − r_{x1})`
/// with `A = 1/2 + (η/36) Σ_y n_y·b̂_y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NVectors {
    pub n: [Bloch; 3],
}

impl NVectors {
    pub fn norms(&self) -> [f64; 3] {
        self.n.map(|v| v.norm())
    }

    pub fn sum_of_norms(&self) -> f64 {
        self.norms().iter().sum()
    }

    pub fn sum_of_squared_norms(&self) -> f64 {
        self.n.iter().map(|v| v.dot(v)).sum()
    }
}

pub fn n_vectors(prep: &PreparationSet) -> NVectors {
    let diff: [Bloch; 3] = std::array::from_fn(|i| {
        let x = i as u8 + 1;
        prep.get(x, 0).bloch() - prep.get(x, 1).bloch()
    });
    let n = std::array::from_fn(|k| {
        SETTINGS
            .iter()
            .map(|&x| {
                let d = diff[x as usize - 1];
                if x as usize == k + 1 {
                    -d
                } else {
                    d
                }
            })
            .sum()
    });
    NVectors { n }
}

/// `1/2 + (η/36) Σ_y n_y·b̂_y` for arbitrary preparations and directions.
pub fn success_from_n_vectors(prep: &PreparationSet, eta: f64, directions: &[Bloch; 3]) -> f64 {
    let nv = n_vectors(prep);
    0.5 + eta / 36.0
        * nv.n
            .iter()
            .zip(directions)
            .map(|(n, b)| n.dot(b))
            .sum::<f64>()
}

/// Bob's success probability via the Born-rule table.
pub fn bob_success_numeric(prep: &PreparationSet, config: &SequentialConfig) -> f64 {
    success_probability(&born_table(prep, &config.bob_effects()))
}

/// Bob's success probability from the n-vector expansion.
pub fn bob_success_closed(prep: &PreparationSet, config: &SequentialConfig) -> f64 {
    success_from_n_vectors(prep, config.eta_b, &config.bob)
}

/// Apply a setting-averaged Kraus layer to every preparation.
pub fn after_measurement(prep: &PreparationSet, layer: &[KrausPair; 3]) -> PreparationSet {
    prep.map(|rho| apply_kraus_average(rho, layer))
}

/// Closed-form Bloch update of one setting-averaged unsharp measurement layer:
/// `r ↦ √(1−η²) r + ((1 − √(1−η²))/3) Σ_y (b̂_y·r) b̂_y`.
pub fn bloch_update_closed(r: Bloch, directions: &[Bloch; 3], eta: f64) -> Bloch {
    let root = (1.0 - eta * eta).max(0.0).sqrt();
    let projected: Bloch = directions.iter().map(|b| b.scale(b.dot(&r))).sum();
    r.scale(root) + projected.scale((1.0 - root) / 3.0)
}

/// Charlie's success probability by sequential Kraus simulation.
pub fn charlie_success_numeric(prep: &PreparationSet, config: &SequentialConfig) -> f64 {
    let after_bob = after_measurement(prep, &config.bob_kraus());
    success_probability(&born_table(&after_bob, &config.charlie_effects()))
}

/// Charlie's success probability from the n-vectors of Bloch-updated states:
/// `1/2 + (η_C/36) Σ_z n^B_z·ĉ_z`.
pub fn charlie_success_closed(prep: &PreparationSet, config: &SequentialConfig) -> Result<f64> {
    let updated = updated_set(prep, &config.bob, config.eta_b)?;
    Ok(success_from_n_vectors(
        &updated,
        config.eta_c,
        &config.charlie,
    ))
}

fn updated_set(prep: &PreparationSet, directions: &[Bloch; 3], eta: f64) -> Result<PreparationSet> {
    let mut states = Vec::with_capacity(6);
    for (_, rho) in prep.iter() {
        states.push(bloch_to_state(bloch_update_closed(
            rho.bloch(),
            directions,
            eta,
        ))?);
    }
    Ok(PreparationSet::new(states.try_into().expect("six states")))
}

/// Debbie's success probability after Bob's and Charlie's Kraus layers.
pub fn debbie_success_numeric(prep: &PreparationSet, config: &SequentialConfig) -> f64 {
    let after_bob = after_measurement(prep, &config.bob_kraus());
    let after_charlie = after_measurement(&after_bob, &config.charlie_kraus());
    success_probability(&born_table(&after_charlie, &config.debbie_effects()))
}

fn check_eta(name: &'static str, eta: f64) -> Result<()> {
    check_domain(name, eta, 0.0, 1.0, 0.0)
}

/// `Ω_B = (1/2)(1 + 2η_B/3)`.
pub fn omega_b(eta_b: f64) -> Result<f64> {
    check_eta("eta_B", eta_b)?;
    Ok(0.5 * (1.0 + 2.0 * eta_b / 3.0))
}

/// `Ω_C = (1/2)(1 + 2η_C(1 + 2√(1−η_B²))/9)`.
pub fn omega_c(eta_b: f64, eta_c: f64) -> Result<f64> {
    check_eta("eta_B", eta_b)?;
    check_eta("eta_C", eta_c)?;
    let disturbance = 1.0 + 2.0 * (1.0 - eta_b * eta_b).sqrt();
    Ok(0.5 * (1.0 + 2.0 * eta_c * disturbance / 9.0))
}

/// `Ω_D = (1/2)(1 + (2η_D/27)(1 + 2√(1−η_B²))(1 + 2√(1−η_C²)))`.
pub fn omega_d(eta_b: f64, eta_c: f64, eta_d: f64) -> Result<f64> {
    check_eta("eta_B", eta_b)?;
    check_eta("eta_C", eta_c)?;
    check_eta("eta_D", eta_d)?;
    let db = 1.0 + 2.0 * (1.0 - eta_b * eta_b).sqrt();
    let dc = 1.0 + 2.0 * (1.0 - eta_c * eta_c).sqrt();
    Ok(0.5 * (1.0 + 2.0 * eta_d * db * dc / 27.0))
}

/// Value the sequential simulation attains for ideal trine alignment:
/// Bob's trine layer shrinks every in-plane Bloch vector by `γ_B`, so Charlie
/// faces the trine scaled by `γ_B` and wins with `1/2 + η_C γ_B/3`.
pub fn aligned_charlie_value(eta_b: f64, eta_c: f64) -> Result<f64> {
    check_eta("eta_B", eta_b)?;
    check_eta("eta_C", eta_c)?;
    Ok(0.5 + eta_c * trine_shrink_factor(eta_b) / 3.0)
}

/// Debbie's counterpart of [`aligned_charlie_value`]: `1/2 + η_D γ_B γ_C/3`.
pub fn aligned_debbie_value(eta_b: f64, eta_c: f64, eta_d: f64) -> Result<f64> {
    check_eta("eta_B", eta_b)?;
    check_eta("eta_C", eta_c)?;
    check_eta("eta_D", eta_d)?;
    Ok(0.5 + eta_d * trine_shrink_factor(eta_b) * trine_shrink_factor(eta_c) / 3.0)
}

/// Which antipodal preparation family a sampler draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AntipodalFamily {
    /// Any three unit vectors `r_{x0}`.
    Unconstrained,
    /// Antipodal sets oblivious under the `x ⊕ a` split: `r₂₀ = r₁₀ + r₃₀`
    /// with `r₁₀·r₃₀ = −1/2`.
    XorOblivious,
}

/// One sampled preparation set with sampled observers.
#[derive(Debug, Clone)]
pub struct SampledConfig {
    pub prep: PreparationSet,
    pub config: SequentialConfig,
}

/// Seeded generator of random antipodal configurations. Directions are
/// normalized standard-normal triples (uniform on the sphere); unsharpness
/// parameters are uniform on `[0, 1]`.
pub struct ConfigSampler {
    rng: ChaCha8Rng,
}

impl ConfigSampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn direction(&mut self) -> Bloch {
        loop {
            let v = Bloch::new(
                self.rng.sample(StandardNormal),
                self.rng.sample(StandardNormal),
                self.rng.sample(StandardNormal),
            );
            let n = v.norm();
            if n > 1e-9 {
                return v.scale(1.0 / n);
            }
        }
    }

    /// Bloch vector uniform in the unit ball.
    pub fn ball_point(&mut self) -> Bloch {
        let radius: f64 = self.rng.gen::<f64>().cbrt();
        self.direction().scale(radius)
    }

    pub fn eta(&mut self) -> f64 {
        self.rng.gen()
    }

    pub fn antipodal_vectors(&mut self, family: AntipodalFamily) -> [Bloch; 3] {
        match family {
            AntipodalFamily::Unconstrained => {
                [self.direction(), self.direction(), self.direction()]
            }
            AntipodalFamily::XorOblivious => {
                let r1 = self.direction();
                let u = loop {
                    let v = self.direction();
                    let perp = v - r1.scale(r1.dot(&v));
                    if perp.norm() > 1e-6 {
                        break perp.normalized();
                    }
                };
                let r3 = r1.scale(-0.5) + u.scale(3f64.sqrt() / 2.0);
                [r1, (r1 + r3).normalized(), r3]
            }
        }
    }

    pub fn sample(&mut self, family: AntipodalFamily) -> SampledConfig {
        let prep = antipodal_preparations(self.antipodal_vectors(family)).expect("unit vectors");
        let bob = [self.direction(), self.direction(), self.direction()];
        let charlie = [self.direction(), self.direction(), self.direction()];
        let debbie = [self.direction(), self.direction(), self.direction()];
        let eta = [self.eta(), self.eta(), self.eta()];
        let config =
            SequentialConfig::new(eta, bob, charlie, debbie).expect("sampled values are valid");
        SampledConfig { prep, config }
    }

    /// Six independent states uniform in the Bloch ball.
    pub fn preparation_set(&mut self) -> PreparationSet {
        PreparationSet::from_fn(|_, _| bloch_to_state(self.ball_point()).expect("inside the ball"))
    }
}

/// Largest excess of the sampled success probabilities over the closed-form
/// optima, for Bob and for Charlie.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingReport {
    pub samples: usize,
    pub worst_bob_excess: f64,
    pub worst_charlie_excess: f64,
}

pub fn sample_optimality(seed: u64, samples: usize, family: AntipodalFamily) -> SamplingReport {
    let mut sampler = ConfigSampler::new(seed);
    let mut report = SamplingReport {
        samples,
        worst_bob_excess: f64::NEG_INFINITY,
        worst_charlie_excess: f64::NEG_INFINITY,
    };
    for _ in 0..samples {
        let SampledConfig { prep, config } = sampler.sample(family);
        let bob =
            bob_success_numeric(&prep, &config) - omega_b(config.eta_b).expect("eta in range");
        let charlie = charlie_success_numeric(&prep, &config)
            - omega_c(config.eta_b, config.eta_c).expect("eta in range");
        report.worst_bob_excess = report.worst_bob_excess.max(bob);
        report.worst_charlie_excess = report.worst_charlie_excess.max(charlie);
    }
    report
}

/// Antipodal set oblivious under the `x ⊕ a` split (`r₂₀ = r₁₀ + r₃₀`) with
/// `r₁₀ = (1/2, 0, √3/2)`, `r₂₀ = (1, 0, 0)`, `r₃₀ = (1/2, 0, −√3/2)`. Bob
/// measures every setting along `ẑ`; Charlie and Debbie measure along
/// `(−ẑ, ẑ, ẑ)`. With `η_B = 1` Charlie scores `1/2 + η_C √3/9`, which is
/// above `omega_c(1, η_C) = 1/2 + η_C/9`.
pub fn oblivious_charlie_witness(eta_b: f64, eta_c: f64) -> Result<SampledConfig> {
    let h = 3f64.sqrt() / 2.0;
    let prep =
        antipodal_preparations([Bloch::new(0.5, 0.0, h), Bloch::X, Bloch::new(0.5, 0.0, -h)])?;
    let charlie = [-Bloch::Z, Bloch::Z, Bloch::Z];
    let config = SequentialConfig::new([eta_b, eta_c, 1.0], [Bloch::Z; 3], charlie, charlie)?;
    Ok(SampledConfig { prep, config })
}

/// State after a single-qubit channel given by one Kraus layer.
pub fn reduced_state(rho: &QubitState, layer: &[KrausPair; 3]) -> QubitState {
    apply_kraus_average(rho, layer)
}
