//! Plain Monte Carlo estimate of the same convolution, used to cross-check
//! the adaptive integrator.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::convolve::{Integrand, SourceFunction};
use super::kernel::kernel_rho2;
use crate::error::{Error, Result};

/// Fewest samples accepted; below this the error bar is meaningless.
pub const MIN_SAMPLES: usize = 1000;

/// Monte Carlo estimate and its one-sigma standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
}

/// Uniform-sampling estimate of the convolution at `point`.
pub fn mc_oracle(
    source: &SourceFunction,
    point: [f64; 3],
    samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    let [e] = mc_oracle_vector(source, point, samples, seed)?;
    Ok(e)
}

/// Monte Carlo for a vector source; all components share one sample set.
pub fn mc_oracle_vector<S, const N: usize>(
    source: &S,
    point: [f64; 3],
    samples: usize,
    seed: u64,
) -> Result<[McEstimate; N]>
where
    S: Integrand<N>,
{
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "Monte Carlo needs at least {MIN_SAMPLES} samples, got {samples}"
        )));
    }
    if point.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidArgument(format!("evaluation point {point:?} is not finite")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let area = PI * PI;
    let mut sum = [0.0; N];
    let mut sum_sq = [0.0; N];
    for _ in 0..samples {
        let eta: f64 = rng.random::<f64>() * PI;
        let zeta: f64 = rng.random::<f64>() * PI;
        let s = source.eval(eta, zeta);
        if s.iter().all(|&v| v == 0.0) {
            continue;
        }
        let (de, dz) = (point[1] - eta, point[2] - zeta);
        let weight = area * kernel_rho2(point[0], de * de + dz * dz);
        for c in 0..N {
            let f = weight * s[c];
            sum[c] += f;
            sum_sq[c] += f * f;
        }
    }
    let n = samples as f64;
    Ok(std::array::from_fn(|c| {
        let mean = sum[c] / n;
        let var = (sum_sq[c] / n - mean * mean).max(0.0);
        McEstimate {
            value: mean,
            std_error: (var / (n - 1.0)).sqrt(),
        }
    }))
}

/// Seed for the `index`-th point of a batch, so every point draws an
/// independent stream regardless of evaluation order.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    // SplitMix64 finaliser
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Monte Carlo at many points with per-point derived seeds.
pub fn mc_oracle_points(
    source: &SourceFunction,
    points: &[[f64; 3]],
    samples: usize,
    seed: u64,
) -> Result<Vec<McEstimate>> {
    use rayon::prelude::*;
    points
        .par_iter()
        .enumerate()
        .map(|(i, &p)| mc_oracle(source, p, samples, derive_seed(seed, i as u64)))
        .collect()
}
