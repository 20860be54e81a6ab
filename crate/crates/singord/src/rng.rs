//! Seeded randomness. Every random choice in the crate flows through a
//! ChaCha stream derived from a user seed and a purpose tag, so results are
//! reproducible and independent of evaluation order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::ExactScalar;

pub type SeededRng = ChaCha8Rng;

pub fn stream(seed: u64, tag: u64) -> SeededRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(tag);
    r
}

/// Integer in `[-9, 9]`.
pub fn small(r: &mut SeededRng) -> i64 {
    r.gen_range(-9..=9)
}

pub fn small_nonzero(r: &mut SeededRng) -> i64 {
    loop {
        let v = small(r);
        if v != 0 {
            return v;
        }
    }
}

/// Integer in `[-bound, bound]`.
pub fn bounded(r: &mut SeededRng, bound: i64) -> ExactScalar {
    ExactScalar::from_i64(r.gen_range(-bound..=bound))
}

pub fn small_scalar(r: &mut SeededRng) -> ExactScalar {
    ExactScalar::from_i64(small(r))
}

/// Rational with numerator in `[-9, 9]` and denominator in `[1, 4]`.
pub fn small_rational(r: &mut SeededRng) -> ExactScalar {
    let n = small(r);
    let d = r.gen_range(1..=4);
    ExactScalar::from_frac(n, d)
}
