//! Exhaustive search over deterministic parity-oblivious classical strategies.
//!
//! A deterministic strategy is an encoder `(x, a) → m ∈ {1..d}` and a decoder
//! `(m, y) → b`. Preparation noncontextuality requires obliviousness of every
//! deterministic strategy separately: each message must be produced by as many
//! even-class inputs as odd-class inputs. Success probabilities are exact
//! rationals with denominator dividing 18.

use num_rational::Ratio;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{
    alice_index, alice_inputs, all_inputs, winning_output, ConditionalTable, Parity,
    ParityConvention,
};

/// Largest message alphabet the oracle enumerates.
pub const MAX_ALPHABET: usize = 6;

/// Exact success probability with denominator dividing 18.
pub type Exact = Ratio<u32>;

/// Deterministic classical strategy with messages `1..=d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClassicalStrategy {
    d: usize,
    encoder: [u8; 6],
    decoder: Vec<[u8; 3]>,
}

impl ClassicalStrategy {
    /// `encoder` is in `(x, a)` order (`10, 11, 20, 21, 30, 31`); `decoder[m − 1][y − 1]`
    /// is Bob's bit on message `m` and setting `y`.
    pub fn new(d: usize, encoder: [u8; 6], decoder: Vec<[u8; 3]>) -> Result<Self> {
        if !(1..=MAX_ALPHABET).contains(&d) {
            return Err(Error::InvalidInput(format!(
                "alphabet size {d} outside 1..={MAX_ALPHABET}"
            )));
        }
        if let Some(m) = encoder.iter().find(|&&m| m == 0 || m as usize > d) {
            return Err(Error::InvalidInput(format!("message {m} outside 1..={d}")));
        }
        if decoder.len() != d {
            return Err(Error::InvalidInput(format!(
                "decoder has {} rows, expected {d}",
                decoder.len()
            )));
        }
        if decoder.iter().flatten().any(|&b| b > 1) {
            return Err(Error::InvalidInput("decoder output is not a bit".into()));
        }
        Ok(Self {
            d,
            encoder,
            decoder,
        })
    }

    /// The trit strategy `{10, 31} → 1`, `{11, 21} → 2`, `{20, 30} → 3`.
    /// Bob answers `(1,0,0)`, `(0,1,1)`, `(0,1,0)` on `y = 1,2,3` for messages
    /// 1, 2, 3, winning 5, 4 and 4 of the six rounds per message: 13/18.
    pub fn trit_example() -> Self {
        Self {
            d: 3,
            encoder: [1, 2, 3, 2, 3, 1],
            decoder: vec![[1, 0, 0], [0, 1, 1], [0, 1, 0]],
        }
    }

    pub fn alphabet_size(&self) -> usize {
        self.d
    }

    pub fn encoder(&self) -> &[u8; 6] {
        &self.encoder
    }

    pub fn decoder(&self) -> &[[u8; 3]] {
        &self.decoder
    }

    pub fn message(&self, x: u8, a: u8) -> u8 {
        self.encoder[alice_index(x, a)]
    }

    pub fn output(&self, x: u8, a: u8, y: u8) -> u8 {
        self.decoder[self.message(x, a) as usize - 1][y as usize - 1]
    }

    /// Deterministic response table for the game-core success functional.
    pub fn table(&self) -> ConditionalTable {
        ConditionalTable::deterministic(|i| self.output(i.x, i.a, i.y))
    }
}

fn encoder_is_oblivious(encoder: &[u8; 6], d: usize, convention: ParityConvention) -> bool {
    let mut balance = [0i32; MAX_ALPHABET + 1];
    for (x, a) in alice_inputs() {
        let m = encoder[alice_index(x, a)] as usize;
        balance[m] += match convention.class(x, a) {
            Parity::Even => 1,
            Parity::Odd => -1,
        };
    }
    balance[1..=d].iter().all(|&b| b == 0)
}

/// Every message is produced by equally many even and odd inputs
/// (default parity convention).
pub fn is_parity_oblivious(s: &ClassicalStrategy) -> bool {
    is_parity_oblivious_under(s, ParityConvention::Xor)
}

pub fn is_parity_oblivious_under(s: &ClassicalStrategy, convention: ParityConvention) -> bool {
    encoder_is_oblivious(&s.encoder, s.d, convention)
}

fn win_count(s: &ClassicalStrategy) -> u32 {
    all_inputs()
        .filter(|i| s.output(i.x, i.a, i.y) == winning_output(i.x, i.a, i.y))
        .count() as u32
}

/// Exact `(1/18)·#wins`.
pub fn strategy_success(s: &ClassicalStrategy) -> Exact {
    Ratio::new(win_count(s), 18)
}

/// Result of an exhaustive search.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub max_success: Exact,
    /// One strategy per optimal oblivious encoder, in encoder enumeration
    /// order, each with its greedy decoder (ties resolved to output 0).
    pub argmax: Vec<ClassicalStrategy>,
    /// Number of encoders examined (`d⁶`).
    pub strategies_searched: u64,
    /// Number of those encoders that are parity-oblivious.
    pub oblivious_encoders: u64,
}

fn encoder_from_index(mut index: u64, d: usize) -> [u8; 6] {
    let mut enc = [0u8; 6];
    for slot in enc.iter_mut() {
        *slot = (index % d as u64) as u8 + 1;
        index /= d as u64;
    }
    enc
}

/// Best decoder for a fixed encoder and its number of wins.
///
/// The win count is a sum over independent `(m, y)` cells, each of which
/// depends only on the single bit `decoder[m][y]`; maximizing every cell
/// separately therefore maximizes the total.
fn greedy_decoder(encoder: &[u8; 6], d: usize) -> (Vec<[u8; 3]>, u32) {
    // wins_if[m][y][b] = number of inputs (x, a) with message m whose winning
    // output on setting y is b
    let mut wins_if = vec![[[0u32; 2]; 3]; d];
    for i in all_inputs() {
        let m = encoder[alice_index(i.x, i.a)] as usize - 1;
        wins_if[m][i.y as usize - 1][i.winning_output() as usize] += 1;
    }
    let mut total = 0;
    let decoder = wins_if
        .iter()
        .map(|row| {
            let mut out = [0u8; 3];
            for (y, cell) in row.iter().enumerate() {
                let b = u8::from(cell[1] > cell[0]);
                out[y] = b;
                total += cell[b as usize];
            }
            out
        })
        .collect();
    (decoder, total)
}

/// Exact maximum over all deterministic oblivious strategies with `d` messages,
/// under the default parity convention.
pub fn enumerate_max(d: usize) -> Result<OracleResult> {
    enumerate_max_under(d, ParityConvention::Xor)
}

pub fn enumerate_max_under(d: usize, convention: ParityConvention) -> Result<OracleResult> {
    if !(1..=MAX_ALPHABET).contains(&d) {
        return Err(Error::InvalidInput(format!(
            "alphabet size {d} outside 1..={MAX_ALPHABET}"
        )));
    }
    let total = (d as u64).pow(6);
    let scored: Vec<(u64, u32)> = (0..total)
        .into_par_iter()
        .filter_map(|idx| {
            let enc = encoder_from_index(idx, d);
            encoder_is_oblivious(&enc, d, convention).then(|| (idx, greedy_decoder(&enc, d).1))
        })
        .collect();
    let best = scored.iter().map(|&(_, w)| w).max().unwrap_or(0);
    let argmax = scored
        .iter()
        .filter(|&&(_, w)| w == best)
        .map(|&(idx, _)| {
            let encoder = encoder_from_index(idx, d);
            let (decoder, _) = greedy_decoder(&encoder, d);
            ClassicalStrategy {
                d,
                encoder,
                decoder,
            }
        })
        .collect();
    Ok(OracleResult {
        max_success: Ratio::new(best, 18),
        argmax,
        strategies_searched: total,
        oblivious_encoders: scored.len() as u64,
    })
}

/// Exhaustive search over encoders and all `2^{3d}` decoders, without the
/// greedy shortcut. Exponential; intended for `d ≤ 3` cross-checks.
pub fn enumerate_max_full_decoders(d: usize, convention: ParityConvention) -> Result<Exact> {
    if !(1..=3).contains(&d) {
        return Err(Error::InvalidInput(format!(
            "full decoder search limited to d ≤ 3, got {d}"
        )));
    }
    let bits = 3 * d;
    let best = (0..(d as u64).pow(6))
        .into_par_iter()
        .map(|idx| {
            let encoder = encoder_from_index(idx, d);
            if !encoder_is_oblivious(&encoder, d, convention) {
                return 0;
            }
            (0u32..1 << bits)
                .map(|mask| {
                    let decoder = (0..d)
                        .map(|m| std::array::from_fn(|y| ((mask >> (3 * m + y)) & 1) as u8))
                        .collect();
                    win_count(&ClassicalStrategy {
                        d,
                        encoder,
                        decoder,
                    })
                })
                .max()
                .unwrap_or(0)
        })
        .max()
        .unwrap_or(0);
    Ok(Ratio::new(best, 18))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{success_probability, EVEN_PARITY_INPUTS};

    fn r(n: u32) -> Exact {
        Ratio::new(n, 18)
    }

    #[test]
    fn trit_strategy_is_oblivious_and_wins_13_of_18() {
        let s = ClassicalStrategy::trit_example();
        assert!(is_parity_oblivious(&s));
        assert_eq!(strategy_success(&s), r(13));
        assert_eq!(s.message(1, 0), 1);
        assert_eq!(s.message(3, 1), 1);
        assert_eq!(s.message(2, 1), 2);
        assert_eq!(s.message(3, 0), 3);
    }

    #[test]
    fn trit_decoder_rows_in_listed_order_only_win_half() {
        let s =
            ClassicalStrategy::new(3, [1, 2, 3, 2, 3, 1], vec![[0, 1, 0], [0, 1, 1], [1, 0, 0]])
                .unwrap();
        assert_eq!(strategy_success(&s), r(9));
    }

    #[test]
    fn constant_strategy_wins_half() {
        let s = ClassicalStrategy::new(1, [1; 6], vec![[0, 0, 0]]).unwrap();
        assert!(is_parity_oblivious(&s));
        assert_eq!(strategy_success(&s), Ratio::new(1, 2));
    }

    #[test]
    fn parity_revealing_encoder_is_rejected() {
        let mut enc = [2u8; 6];
        for (x, a) in EVEN_PARITY_INPUTS {
            enc[alice_index(x, a)] = 1;
        }
        let s = ClassicalStrategy::new(2, enc, vec![[0; 3], [0; 3]]).unwrap();
        assert!(!is_parity_oblivious(&s));
    }

    #[test]
    fn constructor_validates() {
        assert!(ClassicalStrategy::new(0, [1; 6], vec![]).is_err());
        assert!(ClassicalStrategy::new(7, [1; 6], vec![[0; 3]; 7]).is_err());
        assert!(ClassicalStrategy::new(2, [3, 1, 1, 1, 1, 1], vec![[0; 3]; 2]).is_err());
        assert!(ClassicalStrategy::new(2, [1; 6], vec![[0; 3]]).is_err());
        assert!(ClassicalStrategy::new(1, [1; 6], vec![[0, 2, 0]]).is_err());
    }

    #[test]
    fn enumerate_max_three_is_thirteen_eighteenths() {
        let res = enumerate_max(3).unwrap();
        assert_eq!(res.max_success, r(13));
        assert_eq!(res.strategies_searched, 729);
        assert!(!res.argmax.is_empty());
        for s in &res.argmax {
            assert!(is_parity_oblivious(s));
            assert_eq!(strategy_success(s), r(13));
        }
    }

    #[test]
    fn enumerate_max_is_monotone_and_bounded() {
        let values: Vec<Exact> = (1..=MAX_ALPHABET)
            .map(|d| enumerate_max(d).unwrap().max_success)
            .collect();
        assert_eq!(values[0], Ratio::new(1, 2));
        for w in values.windows(2) {
            assert!(w[0] <= w[1]);
        }
        assert!(values.iter().all(|&v| v <= r(13)));
        assert_eq!(values[5], r(13));
    }

    #[test]
    fn enumerate_max_rejects_bad_alphabet() {
        assert!(enumerate_max(0).is_err());
        assert!(enumerate_max(7).is_err());
    }

    #[test]
    fn greedy_matches_full_decoder_search() {
        for convention in [ParityConvention::Xor, ParityConvention::AliceBit] {
            for d in 1..=3 {
                assert_eq!(
                    enumerate_max_under(d, convention).unwrap().max_success,
                    enumerate_max_full_decoders(d, convention).unwrap(),
                    "d = {d}, {convention:?}"
                );
            }
        }
    }

    #[test]
    fn alice_bit_convention_admits_five_sixths() {
        // Splitting only by a lets a trit carry x, which wins every round
        // except a ≠ 0 guesses: 15/18.
        assert_eq!(
            enumerate_max_under(2, ParityConvention::AliceBit)
                .unwrap()
                .max_success,
            r(13)
        );
        assert_eq!(
            enumerate_max_under(3, ParityConvention::AliceBit)
                .unwrap()
                .max_success,
            r(15)
        );
    }

    #[test]
    fn exact_success_matches_game_core_table() {
        for d in 1..=3 {
            for s in enumerate_max(d).unwrap().argmax {
                let float = success_probability(&s.table());
                let exact = strategy_success(&s);
                assert_eq!(float, *exact.numer() as f64 / *exact.denom() as f64);
                assert_eq!(18 % exact.denom(), 0);
            }
        }
        let trit = ClassicalStrategy::trit_example();
        assert!((success_probability(&trit.table()) - 13.0 / 18.0).abs() < 1e-15);
    }

    #[test]
    fn mixtures_of_oblivious_strategies_do_not_beat_the_bound() {
        use rand::{Rng, SeedableRng};
        let pool = enumerate_max(3).unwrap();
        let mut all: Vec<ClassicalStrategy> = pool.argmax.clone();
        all.push(ClassicalStrategy::new(1, [1; 6], vec![[1, 0, 1]]).unwrap());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let i = rng.gen_range(0..all.len());
            let j = rng.gen_range(0..all.len());
            let w: f64 = rng.gen();
            let mixed = all[i].table().mix(&all[j].table(), w);
            assert!(success_probability(&mixed) <= 13.0 / 18.0 + 1e-15);
        }
    }
}
