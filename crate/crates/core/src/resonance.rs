//! Metric profile `epsilon` of a plane wave between symmetric mirrors and
//! the cavity resonance shift it produces.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{convolve, gauss_legendre, Convolution, QuadratureSpec};
use crate::setup::{derive_params, ExperimentConfig};

/// How the cavity length entering the resonance condition is defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LengthDefinition {
    /// Length measured by light travel time; the metric changes it.
    #[default]
    LightSignal,
    /// Coordinate length fixed by rigid rods; the resonance is unchanged.
    RigidRods,
}

/// Where `epsilon` is averaged to obtain the length change.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Averaging {
    /// Along the axis through the transverse centre `eta = zeta = pi/2`.
    #[default]
    CenterLine,
    /// Over the whole cavity volume, which the plane wave fills uniformly.
    Volume,
}

/// Gauss-Legendre nodes per half-interval along `xi`.
const LINE_NODES: usize = 24;
/// Gauss-Legendre nodes per axis for the volume average.
const VOLUME_NODES: usize = 12;

#[inline]
fn unit_source(_eta: f64, _zeta: f64) -> [f64; 1] {
    [1.0]
}

/// `epsilon(point)` per unit `P M`: twice the convolution of a unit source.
pub fn epsilon_field(point: [f64; 3], spec: &QuadratureSpec) -> Result<Convolution<1>> {
    let mut c = convolve(&unit_source, point, spec)?;
    c.value[0] *= 2.0;
    c.error[0] *= 2.0;
    Ok(c)
}

/// Average of `epsilon` per unit `P M`.
pub fn average_epsilon(averaging: Averaging, spec: &QuadratureSpec) -> Result<f64> {
    match averaging {
        Averaging::CenterLine => {
            // split at the centre so the end-point behaviour of each half
            // sits at a rule endpoint
            let mut sum = 0.0;
            for (a, b) in [(0.0, FRAC_PI_2), (FRAC_PI_2, PI)] {
                let (x, w) = gauss_legendre(LINE_NODES, a, b);
                for (xi, wi) in x.into_iter().zip(w) {
                    sum += wi * epsilon_field([xi, FRAC_PI_2, FRAC_PI_2], spec)?.value[0];
                }
            }
            Ok(sum / PI)
        }
        Averaging::Volume => {
            let (x, w) = gauss_legendre(VOLUME_NODES, 0.0, PI);
            let mut sum = 0.0;
            for (xi, wx) in x.iter().zip(&w) {
                for (eta, we) in x.iter().zip(&w) {
                    for (zeta, wz) in x.iter().zip(&w) {
                        sum += wx * we * wz * epsilon_field([*xi, *eta, *zeta], spec)?.value[0];
                    }
                }
            }
            Ok(sum / PI.powi(3))
        }
    }
}

/// Relative resonance shift `delta omega / omega = mean(epsilon) / 2` for
/// `photons` photons in the configured mode.
pub fn frequency_shift(
    config: &ExperimentConfig,
    photons: f64,
    spec: &QuadratureSpec,
    definition: LengthDefinition,
    averaging: Averaging,
) -> Result<f64> {
    if !(photons.is_finite() && photons >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "photon number must be finite and non-negative, got {photons}"
        )));
    }
    let params = derive_params(config)?;
    if definition == LengthDefinition::RigidRods || photons == 0.0 {
        return Ok(0.0);
    }
    let mean = average_epsilon(averaging, spec)?;
    Ok(0.5 * params.amplitude(photons) * params.m() * mean)
}
