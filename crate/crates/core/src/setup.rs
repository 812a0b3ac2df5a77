//! Physical constants, the experiment description and the dimensionless
//! parameters every other module works with.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modes::{mode_frequency, ModeIndices};

/// Speed of light in vacuum (m/s), exact.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Weak-field margin `n kappa M` at or above which the linearized
/// treatment is flagged.
pub const WEAK_FIELD_THRESHOLD: f64 = 0.1;

/// Factor by which the cavity must exceed the nonlinear-vacuum length.
pub const EULER_HEISENBERG_SAFETY: f64 = 10.0;

/// Wavelength-to-length ratio above which the short-wavelength
/// assumption is reported as doubtful.
pub const SHORT_WAVELENGTH_RATIO: f64 = 1e-2;

/// CODATA 2018 constants in SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub c: f64,
    pub gravitational: f64,
    pub hbar: f64,
    pub vacuum_permittivity: f64,
    pub vacuum_permeability: f64,
    pub electron_mass: f64,
    pub elementary_charge: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA_2018
    }
}

impl PhysicalConstants {
    pub const CODATA_2018: Self = Self {
        c: SPEED_OF_LIGHT,
        gravitational: 6.674_30e-11,
        hbar: 1.054_571_817e-34,
        vacuum_permittivity: 8.854_187_812_8e-12,
        vacuum_permeability: 1.256_637_062_12e-6,
        electron_mass: 9.109_383_701_5e-31,
        elementary_charge: 1.602_176_634e-19,
    };

    /// `l_Pl = sqrt(hbar G / c^3)`.
    pub fn planck_length(&self) -> f64 {
        (self.hbar * self.gravitational / self.c.powi(3)).sqrt()
    }

    /// Critical field `E_c = m_e^2 c^3 / (e hbar)` (V/m).
    pub fn critical_field(&self) -> f64 {
        self.electron_mass.powi(2) * self.c.powi(3) / (self.elementary_charge * self.hbar)
    }

    /// Length scale `hbar^{3/4} e^{1/2} eps0^{-1/4} m_e^{-1} c^{-5/4}` such
    /// that linear vacuum electrodynamics needs `L >> scale * (n M)^{1/4}`.
    pub fn euler_heisenberg_length(&self) -> f64 {
        self.hbar.powf(0.75) * self.elementary_charge.sqrt()
            / self.vacuum_permittivity.powf(0.25)
            / self.electron_mass
            / self.c.powf(1.25)
    }
}

/// How the storage time of a lossy cavity follows from its finesse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeConvention {
    /// `T = L F / (pi c)`.
    Pi,
    /// `T = L F / c`.
    #[default]
    Caption,
}

/// The physical scenario: a cubic cavity holding light in one mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Edge length `L` (m).
    pub cavity_length: f64,
    /// Optical wavelength (m).
    pub wavelength: f64,
    /// Finesse; `None` for a lossless cavity.
    pub finesse: Option<f64>,
    /// Explicit measurement time (s), overriding the storage time.
    pub measurement_time: Option<f64>,
    pub mode: ModeIndices,
    pub time_convention: TimeConvention,
}

impl ExperimentConfig {
    /// Lossless cavity with the (0,1,M) mode matched to `wavelength`.
    pub fn new(cavity_length: f64, wavelength: f64) -> Result<Self> {
        let config = Self {
            cavity_length,
            wavelength,
            finesse: None,
            measurement_time: None,
            mode: ModeIndices::for_wavelength(cavity_length, wavelength)?,
            time_convention: TimeConvention::default(),
        };
        config.validate()?;
        Ok(config)
    }

    /// The reference scenario: 500 nm light in a 1 km cavity of finesse 10^4.
    pub fn reference() -> Self {
        Self::new(1000.0, 500e-9)
            .and_then(|c| c.with_finesse(1.0e4))
            .expect("reference configuration is valid")
    }

    pub fn with_finesse(mut self, finesse: f64) -> Result<Self> {
        self.finesse = Some(finesse);
        self.validate()?;
        Ok(self)
    }

    pub fn with_time_convention(mut self, convention: TimeConvention) -> Self {
        self.time_convention = convention;
        self
    }

    pub fn with_mode(mut self, mode: ModeIndices) -> Result<Self> {
        self.mode = mode;
        self.validate()?;
        Ok(self)
    }

    pub fn with_measurement_time(mut self, time: f64) -> Result<Self> {
        self.measurement_time = Some(time);
        self.validate()?;
        Ok(self)
    }

    /// Same cavity without losses.
    pub fn lossless(mut self) -> Self {
        self.finesse = None;
        self
    }

    pub fn is_lossy(&self) -> bool {
        self.finesse.is_some()
    }

    /// Check the hard invariants; returns soft warnings.
    pub fn validate(&self) -> Result<Vec<String>> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive("cavity_length", self.cavity_length)?;
        positive("wavelength", self.wavelength)?;
        if let Some(f) = self.finesse {
            positive("finesse", f)?;
        }
        if let Some(t) = self.measurement_time {
            positive("measurement_time", t)?;
        }
        self.mode.validate()?;

        let mut warnings = Vec::new();
        let ratio = self.wavelength / self.cavity_length;
        if ratio >= SHORT_WAVELENGTH_RATIO {
            let msg = format!(
                "wavelength/length = {ratio:.3e} is not small; mode-index estimates M ~ L/lambda are rough"
            );
            log::warn!("{msg}");
            warnings.push(msg);
        }
        Ok(warnings)
    }
}

/// Photon storage (measurement) time `T` in seconds.
pub fn storage_time(config: &ExperimentConfig) -> f64 {
    if let Some(t) = config.measurement_time {
        return t;
    }
    let light_crossing = config.cavity_length / SPEED_OF_LIGHT;
    match (config.finesse, config.time_convention) {
        (None, _) => light_crossing,
        (Some(f), TimeConvention::Pi) => light_crossing * f / PI,
        (Some(f), TimeConvention::Caption) => light_crossing * f,
    }
}

/// Dimensionless inputs of every formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessParams {
    /// `kappa = (l_Pl / L)^2`.
    pub kappa: f64,
    /// Mode index `M` (the `l_z` of the mode).
    pub mode_index: u64,
    /// Angular frequency `Omega = c |k|` (rad/s).
    pub omega: f64,
    /// Accumulated phase `tau = Omega T`.
    pub tau: f64,
    /// `P` per photon, `4 kappa / pi`; `P = n * photon_coefficient`.
    pub photon_coefficient: f64,
    /// `Omega L / (pi c)`, the factor separating the printed `P` from the
    /// first-principles prefactor.
    pub exact_prefactor: f64,
}

impl DimensionlessParams {
    /// Field amplitude `P = (4 n / pi) kappa`.
    pub fn amplitude(&self, photons: f64) -> f64 {
        photons * self.photon_coefficient
    }

    pub fn m(&self) -> f64 {
        self.mode_index as f64
    }
}

/// Derive the dimensionless parameters of a configuration.
pub fn derive_params(config: &ExperimentConfig) -> Result<DimensionlessParams> {
    derive_params_with(config, &PhysicalConstants::CODATA_2018)
}

pub fn derive_params_with(
    config: &ExperimentConfig,
    constants: &PhysicalConstants,
) -> Result<DimensionlessParams> {
    config.validate()?;
    let l = config.cavity_length;
    let kappa = (constants.planck_length() / l).powi(2);
    let omega = mode_frequency(&config.mode, l);
    Ok(DimensionlessParams {
        kappa,
        mode_index: config.mode.lz,
        omega,
        tau: omega * storage_time(config),
        photon_coefficient: 4.0 * kappa / PI,
        exact_prefactor: omega * l / (PI * constants.c),
    })
}

/// Outcome of the regime checks for a given photon number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub photons: f64,
    pub weak_field_ok: bool,
    /// `n kappa M`.
    pub weak_field_margin: f64,
    pub euler_heisenberg_ok: bool,
    /// `(2.1e-13 m) (n M)^{1/4}`.
    pub euler_heisenberg_min_length: f64,
    pub wavelength_vs_planck_ok: bool,
    /// `l_Pl sqrt(c T / L)`: below this wavelength the coherent state would
    /// beat the optimal state, which signals the theory has broken down.
    pub min_wavelength: f64,
    pub messages: Vec<String>,
}

impl ValidityReport {
    pub fn all_ok(&self) -> bool {
        self.weak_field_ok && self.euler_heisenberg_ok && self.wavelength_vs_planck_ok
    }
}

/// Evaluate the regime checks. Violations are reported, never raised.
pub fn validate_regime(config: &ExperimentConfig, photons: f64) -> ValidityReport {
    let constants = PhysicalConstants::CODATA_2018;
    let mut messages = Vec::new();
    if !(photons.is_finite() && photons >= 0.0) {
        messages.push(format!("photon number must be finite and non-negative, got {photons}"));
    }
    let n = if photons.is_finite() { photons.max(0.0) } else { 0.0 };
    let m = config.mode.lz as f64;
    let l = config.cavity_length;
    let lp = constants.planck_length();

    let margin = n * (lp / l).powi(2) * m;
    let weak_field_ok = margin < WEAK_FIELD_THRESHOLD;
    if !weak_field_ok {
        messages.push(format!(
            "weak-field margin n kappa M = {margin:.3e} is not below {WEAK_FIELD_THRESHOLD}"
        ));
    }

    let eh_length = constants.euler_heisenberg_length() * (n * m).powf(0.25);
    let euler_heisenberg_ok = l >= EULER_HEISENBERG_SAFETY * eh_length;
    if !euler_heisenberg_ok {
        messages.push(format!(
            "cavity length {l:.3e} m is not much larger than the nonlinear-vacuum length {eh_length:.3e} m"
        ));
    }

    let min_wavelength = lp * (SPEED_OF_LIGHT * storage_time(config) / l).sqrt();
    let wavelength_vs_planck_ok = config.wavelength > min_wavelength;
    if !wavelength_vs_planck_ok {
        messages.push(format!(
            "wavelength {:.3e} m is below l_Pl sqrt(cT/L) = {min_wavelength:.3e} m",
            config.wavelength
        ));
    }
    if let Ok(warnings) = config.validate() {
        messages.extend(warnings);
    }

    ValidityReport {
        photons,
        weak_field_ok,
        weak_field_margin: margin,
        euler_heisenberg_ok,
        euler_heisenberg_min_length: eh_length,
        wavelength_vs_planck_ok,
        min_wavelength,
        messages,
    }
}
