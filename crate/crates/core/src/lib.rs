//! Parity-oblivious prepare-measure communication game.
//!
//! * [`qubit`]: 2×2 complex algebra, states, unsharp effects and Kraus maps.
//! * [`game`]: inputs, winning rule, parity classes, success functional.
//! * [`classical`]: exhaustive search over deterministic parity-oblivious
//!   classical strategies with exact rational success probabilities.
//! * [`quantum`]: trine preparations, sequential unsharp observers and the
//!   closed-form optimal success probabilities.
//! * [`certification`]: inverting the optimal pair into bounds on Bob's
//!   unsharpness and the third-observer feasibility test.
//! * [`robustness`]: dephasing channels, operator inequalities and affine
//!   fidelity lower bounds.

pub mod certification;
pub mod classical;
pub mod error;
pub mod game;
pub mod quantum;
pub mod qubit;
pub mod robustness;

pub use error::{Error, Result};
