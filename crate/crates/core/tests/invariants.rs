//! Pointwise algebraic invariants of the sources, kernel and parameters.

mod common;

use std::f64::consts::PI;

use proptest::prelude::*;

use common::reference_sources;
use lightspeed::modes::*;
use lightspeed::quadrature::{gauss_legendre, kernel};
use lightspeed::setup::{derive_params, ExperimentConfig};

/// `d/d eta` and `d/d zeta` of `[f3, f3~, f4]`, differentiated by hand.
fn source_gradients(eta: f64, zeta: f64) -> [[f64; 2]; 3] {
    let (s2e, c2e) = (2.0 * eta).sin_cos();
    let (s2z, c2z) = (2.0 * zeta).sin_cos();
    [
        [-2.0 * s2e * c2z, 4.0 * s2z - 2.0 * s2z * c2e],
        [4.0 * s2e - 2.0 * s2e * c2z, -2.0 * s2z * c2e],
        [2.0 * c2e * s2z, 2.0 * s2e * c2z],
    ]
}

/// `asinh` form of the segment potential.
fn asinh_kernel(xi: f64, eta: f64, zeta: f64) -> f64 {
    let rho = eta.hypot(zeta);
    ((PI - xi) / rho).asinh() + (xi / rho).asinh()
}

#[test]
fn fundamental_mode_is_normalized() {
    for cavity_length in [1.0, PI, 1000.0] {
        let mode = ModeIndices::fundamental();
        let (x, w) = gauss_legendre(24, 0.0, PI);
        let scale = (cavity_length / PI).powi(3);
        let mut sum = 0.0;
        for (a, wa) in x.iter().zip(&w) {
            for (b, wb) in x.iter().zip(&w) {
                for (c, wc) in x.iter().zip(&w) {
                    let v = mode_function(&mode, [*a, *b, *c], cavity_length);
                    sum += wa * wb * wc * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
                }
            }
        }
        assert!((sum * scale - 1.0).abs() < 1e-6, "{}", sum * scale);
    }
}

#[test]
fn hand_gradients_match_finite_differences() {
    let h = 1e-6;
    for &(eta, zeta) in &[(0.3, 1.9), (1.2, 0.4), (2.7, 2.2)] {
        let g = source_gradients(eta, zeta);
        let f = |e: f64, z: f64| [f3(e, z), f3_tilde(e, z), f4(e, z)];
        for (k, grad) in g.iter().enumerate() {
            let de = (f(eta + h, zeta)[k] - f(eta - h, zeta)[k]) / (2.0 * h);
            let dz = (f(eta, zeta + h)[k] - f(eta, zeta - h)[k]) / (2.0 * h);
            assert!((de - grad[0]).abs() < 1e-7 && (dz - grad[1]).abs() < 1e-7);
        }
    }
}

proptest! {
    #[test]
    fn stress_is_trace_free(eta in 0.0..PI, zeta in 0.0..PI, m in 2u64..100_000) {
        let t = stress_components_011(eta, zeta);
        prop_assert!(stress_trace(&t).abs() <= 1e-12);
        let t = stress_components(ModeKind::Axial { m }, eta, zeta);
        prop_assert!(stress_trace(&t).abs() <= 1e-12);
        for (mu, row) in t.iter().enumerate() {
            for (nu, value) in row.iter().enumerate() {
                prop_assert_eq!(*value, t[nu][mu]);
            }
        }
    }

    #[test]
    fn sources_match_definitions(eta in 0.0..PI, zeta in 0.0..PI) {
        let reference = reference_sources(eta, zeta);
        let sources = fundamental_sources(eta, zeta);
        for k in 0..5 {
            prop_assert!((sources[k] - reference[k]).abs() <= 1e-12);
        }
    }

    #[test]
    fn fundamental_stress_is_divergence_free(eta in 1e-3..PI - 1e-3, zeta in 1e-3..PI - 1e-3) {
        // d_eta t22 + d_zeta t23 and d_eta t32 + d_zeta t33
        let [f3, f3t, f4] = source_gradients(eta, zeta);
        let y = f3[0] + f4[1];
        let z = f4[0] + f3t[1];
        prop_assert!(y.abs() <= 1e-12 && z.abs() <= 1e-12);
        let library = stress_divergence(ModeKind::Fundamental, eta, zeta);
        prop_assert!(library.iter().all(|d| d.abs() <= 1e-12));
    }

    #[test]
    fn kernel_symmetries(xi in -10.0..10.0f64, eta in 1e-3..10.0f64, zeta in -10.0..10.0f64) {
        let k = kernel(xi, eta, zeta).unwrap();
        prop_assert!(k > 0.0);
        let rel = |a: f64| (a / k - 1.0).abs();
        prop_assert!(rel(kernel(PI - xi, eta, zeta).unwrap()) <= 1e-10);
        prop_assert!(rel(kernel(xi, -eta, zeta).unwrap()) <= 1e-10);
        prop_assert!(rel(kernel(xi, eta, -zeta).unwrap()) <= 1e-10);
        prop_assert!(rel(kernel(xi, zeta, eta).unwrap()) <= 1e-10);
        prop_assert!(rel(asinh_kernel(xi, eta, zeta)) <= 1e-10);
    }

    #[test]
    fn kernel_decreases_with_transverse_distance(xi in -5.0..5.0f64, rho in 1e-3..10.0f64, f in 1.01..3.0f64) {
        prop_assert!(kernel(xi, rho * f, 0.0).unwrap() < kernel(xi, rho, 0.0).unwrap());
    }

    #[test]
    fn parameters_scale_with_length(length in 1e-2..1e4f64, f in 0.5..4.0f64) {
        let mode = ModeIndices::fundamental();
        let at = |l: f64| {
            derive_params(&ExperimentConfig::new(l, 1e-3 * l).unwrap().with_mode(mode).unwrap()).unwrap()
        };
        let (a, b) = (at(length), at(2.0 * length));
        prop_assert!((b.kappa / a.kappa - 0.25).abs() <= 1e-12);
        prop_assert!((b.omega / a.omega - 0.5).abs() <= 1e-12);
        // tau = Omega L / c is scale free for a lossless cavity
        prop_assert!((b.tau / a.tau - 1.0).abs() <= 1e-12);
        let _ = f;
    }
}
