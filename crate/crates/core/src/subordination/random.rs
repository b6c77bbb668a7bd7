//! Seeded random members of the normalized class.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analytic::{NormalizedFunction, TaylorSeries};
use crate::{Error, Result, DEFAULT_ORDER};

/// SplitMix64 finalizer, used to derive independent per-trial seeds.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed of trial `index` within a campaign seeded with `seed`.
pub fn trial_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index))
}

/// `z + Σ_{n>=2} c_n z^n` with `|c_n| = budget·decay^{n-1}·u_n` and uniform
/// phases, truncated at [`DEFAULT_ORDER`].
pub fn random_function(budget: f64, decay: f64, seed: u64) -> Result<NormalizedFunction> {
    random_function_of_order(budget, decay, seed, DEFAULT_ORDER)
}

pub fn random_function_of_order(budget: f64, decay: f64, seed: u64, order: usize) -> Result<NormalizedFunction> {
    if !(budget >= 0.0 && budget.is_finite()) {
        return Err(Error::Config(format!("budget {budget} must be finite and nonnegative")));
    }
    if !(decay > 0.0 && decay < 1.0) {
        return Err(Error::Config(format!("decay {decay} must lie in (0, 1)")));
    }
    if order < 1 {
        return Err(Error::Config("random function needs order >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coeffs = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
    let mut scale = budget;
    for _ in 2..=order {
        scale *= decay;
        let u: f64 = rng.random();
        let phase: f64 = rng.random_range(0.0..TAU);
        coeffs.push(Complex64::from_polar(scale * u, phase));
    }
    NormalizedFunction::new(TaylorSeries::polynomial(coeffs))
}
