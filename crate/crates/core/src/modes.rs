//! Cavity eigenmodes and the stress-energy they carry.
//!
//! Coordinates are the dimensionless box coordinates `xi = pi x / L`,
//! `eta = pi y / L`, `zeta = pi z / L`, so the cavity is `[0, pi]^3`.
//! Stress components are expectation values for the optimal probe state at
//! large photon number, expressed in units of `n hbar Omega / V`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::setup::SPEED_OF_LIGHT;

/// Smallest axial index accepted by the large-index stress forms.
pub const AXIAL_MIN_INDEX: u64 = 2;
/// Below this axial index the dropped `1/M` corrections are noticeable.
pub const AXIAL_WARN_INDEX: u64 = 64;

/// Wave-vector indices `(l_x, l_y, l_z)` of a box mode and its polarization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeIndices {
    pub lx: u64,
    pub ly: u64,
    pub lz: u64,
    pub polarization: [f64; 3],
}

impl ModeIndices {
    /// Validated constructor.
    pub fn new(lx: u64, ly: u64, lz: u64, polarization: [f64; 3]) -> Result<Self> {
        let mode = Self {
            lx,
            ly,
            lz,
            polarization,
        };
        mode.validate()?;
        Ok(mode)
    }

    /// The fundamental (0,1,1) mode, polarized along x.
    pub fn fundamental() -> Self {
        Self {
            lx: 0,
            ly: 1,
            lz: 1,
            polarization: [1.0, 0.0, 0.0],
        }
    }

    /// The (0,1,M) mode, polarized along x.
    pub fn axial(m: u64) -> Result<Self> {
        Self::new(0, 1, m, [1.0, 0.0, 0.0])
    }

    /// The (0,1,M) mode whose frequency matches `2 pi c / wavelength`,
    /// with `M = round(2 L / wavelength)`.
    pub fn for_wavelength(cavity_length: f64, wavelength: f64) -> Result<Self> {
        if !(cavity_length > 0.0 && wavelength > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "lengths must be positive (L = {cavity_length}, lambda = {wavelength})"
            )));
        }
        let m = (2.0 * cavity_length / wavelength).round();
        if !(1.0..=9.0e15).contains(&m) {
            return Err(Error::InvalidConfig(format!(
                "axial index round(2L/lambda) = {m} is out of range"
            )));
        }
        Self::axial(m as u64)
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |reason: &str| Error::InvalidMode {
            lx: self.lx,
            ly: self.ly,
            lz: self.lz,
            reason: reason.to_string(),
        };
        let zeros = [self.lx, self.ly, self.lz]
            .iter()
            .filter(|&&l| l == 0)
            .count();
        if zeros > 1 {
            return Err(invalid("at most one index may be zero"));
        }
        let e = self.polarization;
        if e.iter().any(|c| !c.is_finite()) {
            return Err(invalid("polarization must be finite"));
        }
        let norm = (e[0] * e[0] + e[1] * e[1] + e[2] * e[2]).sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(invalid("polarization must have unit length"));
        }
        let k = self.wave_numbers();
        let k_norm = self.index_norm();
        let dot = (e[0] * k[0] + e[1] * k[1] + e[2] * k[2]) / k_norm;
        if dot.abs() > 1e-12 {
            return Err(invalid("polarization must be transverse to the wave vector"));
        }
        Ok(())
    }

    /// Indices as floats, `k L / pi`.
    pub fn wave_numbers(&self) -> [f64; 3] {
        [self.lx as f64, self.ly as f64, self.lz as f64]
    }

    /// `sqrt(lx^2 + ly^2 + lz^2)`.
    pub fn index_norm(&self) -> f64 {
        let [a, b, c] = self.wave_numbers();
        // hypot keeps full precision for very unequal indices
        a.hypot(b).hypot(c)
    }

    /// Stress-tensor form available for this mode, if any.
    pub fn kind(&self) -> Option<ModeKind> {
        match (self.lx, self.ly, self.lz) {
            (0, 1, 1) => Some(ModeKind::Fundamental),
            (0, 1, m) if m >= AXIAL_MIN_INDEX => Some(ModeKind::Axial { m }),
            _ => None,
        }
    }
}

/// Angular frequency `Omega = c pi / L * |l|`.
pub fn mode_frequency(mode: &ModeIndices, cavity_length: f64) -> f64 {
    SPEED_OF_LIGHT * PI / cavity_length * mode.index_norm()
}

/// Mode function `v(r)` in SI units (`m^{-3/2}`), normalized so that
/// `int v . v d^3r = 1` over the cavity. `point` is in box coordinates.
///
/// Each non-zero index contributes a factor 2 to `N^2 V`, so a mode with a
/// zero index has `N = sqrt(4 / V)` rather than `sqrt(8 / V)`.
pub fn mode_function(mode: &ModeIndices, point: [f64; 3], cavity_length: f64) -> [f64; 3] {
    let volume = cavity_length.powi(3);
    let [lx, ly, lz] = mode.wave_numbers();
    let nonzero = [lx, ly, lz].iter().filter(|l| **l != 0.0).count() as i32;
    let norm = (2f64.powi(nonzero) / volume).sqrt();
    let (sx, cx) = (lx * point[0]).sin_cos();
    let (sy, cy) = (ly * point[1]).sin_cos();
    let (sz, cz) = (lz * point[2]).sin_cos();
    let e = mode.polarization;
    [
        norm * e[0] * cx * sy * sz,
        norm * e[1] * sx * cy * sz,
        norm * e[2] * sx * sy * cz,
    ]
}

/// Which closed-form stress tensor describes the source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeKind {
    /// The (0,1,1) mode.
    Fundamental,
    /// The (0,1,M) mode in the large-`M` limit.
    Axial { m: u64 },
}

impl ModeKind {
    /// Factor multiplying the stress tensor in the field equation when
    /// fields are expressed per `P`: 1 for (011), `M` for (01M).
    pub fn source_scale(&self) -> f64 {
        match *self {
            ModeKind::Fundamental => 1.0,
            ModeKind::Axial { m } => m as f64,
        }
    }

    pub fn label(&self) -> String {
        match self {
            ModeKind::Fundamental => "011".to_string(),
            ModeKind::Axial { m } => format!("01M(M={m})"),
        }
    }
}

/// Dimensionless stress tensor `t^{mu nu}` at one point, index order `(ct, x, y, z)`.
pub type StressValues = [[f64; 4]; 4];

/// `f1 = 2 - cos 2eta - cos 2zeta` (energy density).
pub fn f1(eta: f64, zeta: f64) -> f64 {
    2.0 - (2.0 * eta).cos() - (2.0 * zeta).cos()
}

/// `f2 = cos 2eta + cos 2zeta - 2 cos 2eta cos 2zeta`.
pub fn f2(eta: f64, zeta: f64) -> f64 {
    let (ce, cz) = ((2.0 * eta).cos(), (2.0 * zeta).cos());
    ce + cz - 2.0 * ce * cz
}

/// `f3 = (2 - 4 cos 2zeta + 2 cos 2zeta cos 2eta) / 2`.
pub fn f3(eta: f64, zeta: f64) -> f64 {
    let (ce, cz) = ((2.0 * eta).cos(), (2.0 * zeta).cos());
    1.0 - 2.0 * cz + cz * ce
}

/// `f3~(eta, zeta) = f3(zeta, eta)`.
pub fn f3_tilde(eta: f64, zeta: f64) -> f64 {
    f3(zeta, eta)
}

/// `f4 = sin 2eta sin 2zeta`.
pub fn f4(eta: f64, zeta: f64) -> f64 {
    (2.0 * eta).sin() * (2.0 * zeta).sin()
}

/// All five (011) source functions `[f1, f2, f3, f3~, f4]` with two `sin_cos` calls.
#[inline]
pub fn fundamental_sources(eta: f64, zeta: f64) -> [f64; 5] {
    let (se, ce) = (2.0 * eta).sin_cos();
    let (sz, cz) = (2.0 * zeta).sin_cos();
    let cc = ce * cz;
    [
        2.0 - ce - cz,
        ce + cz - 2.0 * cc,
        1.0 - 2.0 * cz + cc,
        1.0 - 2.0 * ce + cc,
        se * sz,
    ]
}

/// Stress tensor of the (011) mode.
pub fn stress_components_011(eta: f64, zeta: f64) -> StressValues {
    let [s1, s2, s3, s3t, s4] = fundamental_sources(eta, zeta);
    let mut t = [[0.0; 4]; 4];
    t[0][0] = s1;
    t[1][1] = s2;
    t[2][2] = s3;
    t[3][3] = s3t;
    t[2][3] = s4;
    t[3][2] = s4;
    t
}

/// Stress tensor of the (01M) mode with the `O(1/M)` corrections dropped.
pub fn stress_components_01m(eta: f64, zeta: f64, m: u64) -> Result<StressValues> {
    if m < AXIAL_MIN_INDEX {
        return Err(Error::InvalidArgument(format!(
            "large-M stress forms need M >= {AXIAL_MIN_INDEX}, got {m}"
        )));
    }
    if m < AXIAL_WARN_INDEX {
        log::warn!("M = {m}: large-M stress forms carry O(1/M) errors");
    }
    Ok(axial_stress(eta, zeta, m))
}

fn axial_stress(eta: f64, zeta: f64, m: u64) -> StressValues {
    let s = eta.sin();
    let energy = 4.0 * s * s;
    let oscillating = energy * (2.0 * m as f64 * zeta).cos();
    let mut t = [[0.0; 4]; 4];
    t[0][0] = energy;
    t[3][3] = energy;
    t[1][1] = oscillating;
    t[2][2] = -oscillating;
    t
}

/// Evaluate the stress tensor of a mode kind.
pub fn stress_components(kind: ModeKind, eta: f64, zeta: f64) -> StressValues {
    match kind {
        ModeKind::Fundamental => stress_components_011(eta, zeta),
        ModeKind::Axial { m } => axial_stress(eta, zeta, m),
    }
}

/// Trace `-t00 + t11 + t22 + t33`.
pub fn stress_trace(t: &StressValues) -> f64 {
    -t[0][0] + t[1][1] + t[2][2] + t[3][3]
}

/// Analytic spatial divergence `d_j t^{ij}` at an interior point. The
/// sources do not depend on `xi`.
pub fn stress_divergence(kind: ModeKind, eta: f64, zeta: f64) -> [f64; 3] {
    match kind {
        ModeKind::Fundamental => {
            let (se, ce) = (2.0 * eta).sin_cos();
            let (sz, cz) = (2.0 * zeta).sin_cos();
            let (d_eta_f3, d_zeta_f4) = (-2.0 * se * cz, 2.0 * se * cz);
            let (d_eta_f4, d_zeta_f3t) = (2.0 * ce * sz, -2.0 * ce * sz);
            [0.0, d_eta_f3 + d_zeta_f4, d_eta_f4 + d_zeta_f3t]
        }
        ModeKind::Axial { m } => {
            // t22 = -4 sin^2(eta) cos(2 M zeta); t33 is zeta independent.
            let y = -4.0 * (2.0 * eta).sin() * (2.0 * m as f64 * zeta).cos();
            [0.0, y, 0.0]
        }
    }
}
