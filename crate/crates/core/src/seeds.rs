//! Seed derivation and closed-interval sampling.
//!
//! One master seed fans out into independent streams, one per purpose, so
//! that e.g. changing the number of repeats never perturbs the generated
//! instance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stream {
    Graph = 1,
    Planted = 2,
    Intervals = 3,
    Truth = 4,
    Oracle = 5,
    Baseline = 6,
    Realization = 7,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for the `index`-th use of `stream` under `master`.
pub fn derive_seed(master: u64, stream: Stream, index: u64) -> u64 {
    splitmix64(splitmix64(master ^ splitmix64(stream as u64)).wrapping_add(index))
}

pub fn stream_rng(master: u64, stream: Stream, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, stream, index))
}

/// Uniform draw from the closed interval `[a, b]`.
///
/// `a > b` is an error, except when the gap is pure rounding (at most
/// `1e-12`), in which case the interval collapses to `a`.
pub fn uniform_closed<R: Rng + ?Sized>(rng: &mut R, a: f64, b: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain(format!("rand({a}, {b}) has a non-finite bound")));
    }
    if a > b {
        if a - b <= 1e-12 {
            return Ok(a);
        }
        return Err(Error::domain(format!("rand({a}, {b}) has an empty range")));
    }
    if a == b {
        return Ok(a);
    }
    Ok(rng.gen_range(a..=b))
}
