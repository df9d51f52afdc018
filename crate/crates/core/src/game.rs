//! The three-input parity-oblivious communication game.
//!
//! Alice receives `x ∈ {1,2,3}` and a bit `a`; Bob receives `y ∈ {1,2,3}` and
//! wins when he outputs `b = δ_{x,y} ⊕ a`. All 18 triples `(x, a, y)` are
//! equally likely.

use crate::error::{Error, Result};
use crate::qubit::{EffectPair, Mat2, QubitState};

/// Values of `x` and `y`.
pub const SETTINGS: [u8; 3] = [1, 2, 3];
/// Values of `a` and of the outputs.
pub const BITS: [u8; 2] = [0, 1];

/// Inputs of the even parity class under [`ParityConvention::Xor`]:
/// `(x + a) mod 2 = 0`, the left side of `ρ₁₁ + ρ₂₀ + ρ₃₁ = ρ₁₀ + ρ₂₁ + ρ₃₀`.
pub const EVEN_PARITY_INPUTS: [(u8, u8); 3] = [(1, 1), (2, 0), (3, 1)];
/// Complement of [`EVEN_PARITY_INPUTS`].
pub const ODD_PARITY_INPUTS: [(u8, u8); 3] = [(1, 0), (2, 1), (3, 0)];

/// How Alice's six inputs split into the two classes Bob must not learn.
///
/// `Xor` is the literal `x ⊕₂ a` split and is the library default; it is the
/// constraint under which deterministic classical strategies top out at 13/18.
/// `AliceBit` splits by `a` alone (`{10, 20, 30}` against `{11, 21, 31}`); the
/// optimal trine preparations (`r₁₀ + r₂₀ + r₃₀ = 0`) are oblivious only under
/// this split, and classically a trit already reaches 5/6 under it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ParityConvention {
    #[default]
    Xor,
    AliceBit,
}

impl ParityConvention {
    pub fn class(self, x: u8, a: u8) -> Parity {
        let even = match self {
            ParityConvention::Xor => (x + a).is_multiple_of(2),
            ParityConvention::AliceBit => a == 0,
        };
        if even {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// One round's inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GameInput {
    pub x: u8,
    pub a: u8,
    pub y: u8,
}

impl GameInput {
    pub fn new(x: u8, a: u8, y: u8) -> Result<Self> {
        if !SETTINGS.contains(&x) || !SETTINGS.contains(&y) || !BITS.contains(&a) {
            return Err(Error::InvalidInput(format!("(x, a, y) = ({x}, {a}, {y})")));
        }
        Ok(Self { x, a, y })
    }

    pub fn winning_output(&self) -> u8 {
        winning_output(self.x, self.a, self.y)
    }
}

/// All 18 input triples in `(x, a, y)` lexicographic order.
pub fn all_inputs() -> impl Iterator<Item = GameInput> {
    SETTINGS.into_iter().flat_map(|x| {
        BITS.into_iter()
            .flat_map(move |a| SETTINGS.into_iter().map(move |y| GameInput { x, a, y }))
    })
}

/// Alice's six inputs `(x, a)`.
pub fn alice_inputs() -> impl Iterator<Item = (u8, u8)> {
    SETTINGS
        .into_iter()
        .flat_map(|x| BITS.into_iter().map(move |a| (x, a)))
}

/// `b = δ_{x,y} ⊕ a`.
pub fn winning_output(x: u8, a: u8, y: u8) -> u8 {
    u8::from(x == y) ^ a
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

/// Parity class under the default [`ParityConvention::Xor`].
pub fn parity_class(x: u8, a: u8) -> Parity {
    ParityConvention::Xor.class(x, a)
}

pub(crate) fn alice_index(x: u8, a: u8) -> usize {
    debug_assert!(SETTINGS.contains(&x) && BITS.contains(&a));
    2 * (x as usize - 1) + a as usize
}

/// Alice's six preparations `ρ_{xa}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparationSet {
    states: [QubitState; 6],
}

impl PreparationSet {
    /// States in `(x, a)` order: `ρ₁₀, ρ₁₁, ρ₂₀, ρ₂₁, ρ₃₀, ρ₃₁`.
    pub fn new(states: [QubitState; 6]) -> Self {
        Self { states }
    }

    pub fn from_fn(mut f: impl FnMut(u8, u8) -> QubitState) -> Self {
        let states = std::array::from_fn(|i| f(i as u8 / 2 + 1, i as u8 % 2));
        Self { states }
    }

    pub fn get(&self, x: u8, a: u8) -> &QubitState {
        &self.states[alice_index(x, a)]
    }

    pub fn set(&mut self, x: u8, a: u8, rho: QubitState) {
        self.states[alice_index(x, a)] = rho;
    }

    pub fn iter(&self) -> impl Iterator<Item = ((u8, u8), &QubitState)> {
        alice_inputs().zip(self.states.iter())
    }

    pub fn map(&self, f: impl FnMut(&QubitState) -> QubitState) -> Self {
        Self {
            states: self.states.each_ref().map(f),
        }
    }

    pub fn parity_sum(&self, convention: ParityConvention, parity: Parity) -> Mat2 {
        self.iter()
            .filter(|((x, a), _)| convention.class(*x, *a) == parity)
            .map(|(_, s)| *s.matrix())
            .sum()
    }
}

/// `Σ_even ρ = Σ_odd ρ` entrywise within `tol`, default convention.
pub fn check_parity_oblivious(prep: &PreparationSet, tol: f64) -> bool {
    check_parity_oblivious_under(prep, ParityConvention::Xor, tol)
}

pub fn check_parity_oblivious_under(
    prep: &PreparationSet,
    convention: ParityConvention,
    tol: f64,
) -> bool {
    prep.parity_sum(convention, Parity::Even)
        .max_abs_diff(&prep.parity_sum(convention, Parity::Odd))
        <= tol
}

/// `p(b = 0 | x, a, y)` for all 18 triples.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalTable {
    p_zero: [f64; 18],
}

fn table_index(x: u8, a: u8, y: u8) -> usize {
    3 * alice_index(x, a) + (y as usize - 1)
}

impl ConditionalTable {
    pub fn from_fn(mut f: impl FnMut(GameInput) -> f64) -> Result<Self> {
        let mut p_zero = [0.0; 18];
        for input in all_inputs() {
            let p = f(input);
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidInput(format!(
                    "p(b=0|{},{},{}) = {p} outside [0, 1]",
                    input.x, input.a, input.y
                )));
            }
            p_zero[table_index(input.x, input.a, input.y)] = p;
        }
        Ok(Self { p_zero })
    }

    pub fn uniform() -> Self {
        Self { p_zero: [0.5; 18] }
    }

    /// Deterministic table from a response function `(x, a, y) → b`.
    pub fn deterministic(mut f: impl FnMut(GameInput) -> u8) -> Self {
        let mut p_zero = [0.0; 18];
        for input in all_inputs() {
            p_zero[table_index(input.x, input.a, input.y)] = if f(input) == 0 { 1.0 } else { 0.0 };
        }
        Self { p_zero }
    }

    pub fn p(&self, b: u8, x: u8, a: u8, y: u8) -> f64 {
        let p0 = self.p_zero[table_index(x, a, y)];
        if b == 0 {
            p0
        } else {
            1.0 - p0
        }
    }

    /// Convex combination `w·self + (1−w)·other`.
    pub fn mix(&self, other: &ConditionalTable, w: f64) -> ConditionalTable {
        let mut p_zero = [0.0; 18];
        for (i, p) in p_zero.iter_mut().enumerate() {
            *p = w * self.p_zero[i] + (1.0 - w) * other.p_zero[i];
        }
        Self { p_zero }
    }
}

/// `(1/18) Σ_{x,a,y} p(b = δ_{x,y} ⊕ a | x, a, y)`.
pub fn success_probability(table: &ConditionalTable) -> f64 {
    all_inputs()
        .map(|i| table.p(i.winning_output(), i.x, i.a, i.y))
        .sum::<f64>()
        / 18.0
}

/// Born-rule table `p(b | x, a, y) = Tr[ρ_{xa} E_{b|y}]`.
pub fn born_table(prep: &PreparationSet, measurements: &[EffectPair; 3]) -> ConditionalTable {
    let mut p_zero = [0.0; 18];
    for input in all_inputs() {
        let e = &measurements[input.y as usize - 1];
        p_zero[table_index(input.x, input.a, input.y)] = prep
            .get(input.x, input.a)
            .expectation(&e.plus)
            .clamp(0.0, 1.0);
    }
    ConditionalTable { p_zero }
}
