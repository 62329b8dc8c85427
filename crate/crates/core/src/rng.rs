//! Deterministic seeded randomness.
//!
//! Every randomized check draws from a counter-mode stream cipher keyed by
//! the run seed, with one independent substream per trial index. Re-running
//! with the same seed reproduces every trial bit for bit, and trials can be
//! generated in any order.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::scalar::{rat, Rat};

/// Substream for one trial of a seeded run.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Small nonzero rational with numerator in ±[1,9] and denominator in [1,9].
pub fn rational_nonzero(rng: &mut ChaCha12Rng) -> Rat {
    let mut n: i128 = rng.gen_range(-9..=9);
    if n == 0 {
        n = 1;
    }
    rat(n, rng.gen_range(1..=9))
}

/// Small rational, zero allowed.
pub fn rational(rng: &mut ChaCha12Rng) -> Rat {
    rat(rng.gen_range(-9..=9), rng.gen_range(1..=9))
}
