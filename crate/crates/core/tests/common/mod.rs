//! Test-side reference implementations, written independently of the library.

#![allow(dead_code)]

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// Kernel in its textbook single-log form (no cancellation-free rearrangement).
pub fn printed_kernel(xi: f64, eta: f64, zeta: f64) -> f64 {
    let rho2 = eta * eta + zeta * zeta;
    let num = xi + (xi * xi + rho2).sqrt();
    let den = xi - PI + ((xi - PI) * (xi - PI) + rho2).sqrt();
    (num / den).ln()
}

/// The five (011) sources `[f1, f2, f3, f3~, f4]` and the unit source, straight
/// from their trigonometric definitions.
pub fn reference_sources(eta: f64, zeta: f64) -> [f64; 6] {
    let c2e = (2.0 * eta).cos();
    let c2z = (2.0 * zeta).cos();
    [
        2.0 - c2e - c2z,
        c2e + c2z - 2.0 * c2e * c2z,
        (2.0 - 4.0 * c2z + 2.0 * c2z * c2e) / 2.0,
        (2.0 - 4.0 * c2e + 2.0 * c2e * c2z) / 2.0,
        (2.0 * eta).sin() * (2.0 * zeta).sin(),
        1.0,
    ]
}

/// Plain Monte Carlo of `int int I(xi, eta - eta', zeta - zeta') s(eta', zeta')`
/// for the six reference sources. Returns `(mean, standard error)` pairs.
pub fn reference_mc(point: [f64; 3], samples: usize, seed: u64) -> [(f64, f64); 6] {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut sum = [0.0; 6];
    let mut sum_sq = [0.0; 6];
    for _ in 0..samples {
        let eta = PI * rng.random::<f64>();
        let zeta = PI * rng.random::<f64>();
        let k = PI * PI * printed_kernel(point[0], point[1] - eta, point[2] - zeta);
        let s = reference_sources(eta, zeta);
        for c in 0..6 {
            let f = k * s[c];
            sum[c] += f;
            sum_sq[c] += f * f;
        }
    }
    let n = samples as f64;
    std::array::from_fn(|c| {
        let mean = sum[c] / n;
        let var = sum_sq[c] / n - mean * mean;
        (mean, (var / (n - 1.0)).sqrt())
    })
}

/// Reference values at the cavity centre `(pi/2, pi/2, pi/2)` from
/// `reference_mc(centre, 10^7, 42)`, as `(mean, standard error)`. Regenerate
/// with `cargo test --test oracle -- --ignored --nocapture print_centre_constants`.
pub const CENTRE_G1: (f64, f64) = (5.4584186639e1, 1.5046e-2);
pub const CENTRE_G2: (f64, f64) = (-1.1069090564e1, 1.6624e-2);
pub const CENTRE_G3: (f64, f64) = (3.2841000274e1, 1.6887e-2);
pub const CENTRE_G3_TILDE: (f64, f64) = (3.2812276928e1, 1.6889e-2);
pub const CENTRE_G4: (f64, f64) = (1.1052704644e-3, 3.6761e-3);
/// Unit source.
pub const CENTRE_C: (f64, f64) = (2.3487687100e1, 2.8057e-3);

pub const CENTRE: [f64; 3] = [PI / 2.0, PI / 2.0, PI / 2.0];
pub const CENTRE_SAMPLES: usize = 10_000_000;
pub const CENTRE_SEED: u64 = 42;

/// `count` points drawn from `[lo, hi]^3` with a fixed seed.
pub fn random_points(count: usize, lo: f64, hi: f64, seed: u64) -> Vec<[f64; 3]> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| std::array::from_fn(|_| rng.random_range(lo..hi)))
        .collect()
}
