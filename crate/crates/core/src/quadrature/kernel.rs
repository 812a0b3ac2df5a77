//! Potential of the unit-density segment `xi' in [0, pi]`.
//!
//! `I(xi, eta, zeta) = int_0^pi dxi' / sqrt((xi - xi')^2 + rho^2)` with
//! `rho^2 = eta^2 + zeta^2`. Each branch below is free of cancellation.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Kernel value; errors on the segment itself where it diverges.
pub fn kernel(xi: f64, eta: f64, zeta: f64) -> Result<f64> {
    let rho2 = eta * eta + zeta * zeta;
    if rho2 == 0.0 && (0.0..=PI).contains(&xi) {
        return Err(Error::SingularKernel { xi });
    }
    Ok(kernel_rho2(xi, rho2))
}

/// Kernel as a function of `xi` and the squared transverse distance.
/// Returns `+inf` on the segment.
#[inline]
pub fn kernel_rho2(xi: f64, rho2: f64) -> f64 {
    let far = PI - xi;
    if xi < 0.0 {
        // asinh((pi - xi)/rho) - asinh(-xi/rho), both arguments positive
        let a = far + (far * far + rho2).sqrt();
        let b = -xi + (xi * xi + rho2).sqrt();
        (a / b).ln()
    } else if far < 0.0 {
        let a = xi + (xi * xi + rho2).sqrt();
        let b = -far + (far * far + rho2).sqrt();
        (a / b).ln()
    } else {
        let a = xi + (xi * xi + rho2).sqrt();
        let b = far + (far * far + rho2).sqrt();
        (a * b / rho2).ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    /// The kernel exactly as printed, as an independent reference.
    fn printed(xi: f64, eta: f64, zeta: f64) -> f64 {
        let r2 = eta * eta + zeta * zeta;
        ((xi + (xi * xi + r2).sqrt()) / (xi - PI + ((xi - PI).powi(2) + r2).sqrt())).ln()
    }

    #[test]
    fn center_value() {
        let v = kernel(FRAC_PI_2, FRAC_PI_2, 0.0).unwrap();
        let expected = (3.0 + 2.0 * 2f64.sqrt()).ln();
        assert!((v - expected).abs() < 1e-12);
        assert!((v - 1.76275).abs() < 1e-5);
    }

    #[test]
    fn mirror_symmetric() {
        let a = kernel(1.0, 0.5, 0.5).unwrap();
        let b = kernel(PI - 1.0, 0.5, 0.5).unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn far_field() {
        let v = kernel(FRAC_PI_2, 50.0, 0.0).unwrap();
        assert!((v / (PI / 50.0) - 1.0).abs() < 0.01);
    }

    #[test]
    fn matches_printed_form_where_that_is_well_conditioned() {
        for &(x, e, z) in &[(0.3, 0.2, 0.9), (2.0, 1.0, -0.4), (-1.0, 0.5, 0.5), (5.0, 2.0, 1.0)] {
            let a = kernel(x, e, z).unwrap();
            let b = printed(x, e, z);
            assert!((a - b).abs() < 1e-12 * b.abs().max(1.0), "{x} {e} {z}: {a} vs {b}");
        }
    }

    #[test]
    fn equals_segment_integral() {
        // Simpson on the defining integral at a point well off the segment.
        let (xi, rho) = (0.7f64, 0.9f64);
        let n = 2000;
        let h = PI / n as f64;
        let f = |s: f64| 1.0 / ((xi - s).powi(2) + rho * rho).sqrt();
        let mut sum = f(0.0) + f(PI);
        for i in 1..n {
            sum += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        let simpson = sum * h / 3.0;
        assert!((kernel(xi, rho, 0.0).unwrap() - simpson).abs() < 1e-10);
    }

    #[test]
    fn singular_on_segment_only() {
        assert!(kernel(1.0, 0.0, 0.0).is_err());
        assert!(kernel(0.0, 0.0, 0.0).is_err());
        let outside = kernel(-1.0, 0.0, 0.0).unwrap();
        assert!((outside - ((PI + 1.0) / 1.0).ln()).abs() < 1e-14);
        let beyond = kernel(PI + 2.0, 0.0, 0.0).unwrap();
        assert!((beyond - ((PI + 2.0) / 2.0).ln()).abs() < 1e-14);
    }

    #[test]
    fn stable_close_to_the_far_end() {
        // Printed form cancels in the denominator here; rearranged form must not.
        let v = kernel(PI - 1e-9, 1e-7, 0.0).unwrap();
        let reference = ((PI - 1e-9 + ((PI - 1e-9).powi(2) + 1e-14).sqrt()) / 1e-7).ln()
            + (1e-9 / 1e-7 + (1.0 + 1e-4f64).sqrt()).ln();
        assert!((v - reference).abs() < 1e-9);
    }
}
