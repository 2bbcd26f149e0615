//! Fixed benchmark inputs.

use robust_dsd::{gen_planted, PlantedParams, UncertainInstance};

/// Planted instance with a 10% planted set and average degree near 5.
pub fn planted(n: usize, alpha: f64) -> UncertainInstance {
    let params = PlantedParams {
        n,
        p: 5.0 / n as f64,
        n_prime: n / 10,
        alpha,
    };
    gen_planted(&params, 0xBE7C).expect("valid benchmark parameters")
}
