//! JSON run configuration.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use lightspeed::grid::GridSpec;
use lightspeed::modes::ModeIndices;
use lightspeed::quadrature::QuadratureSpec;
use lightspeed::setup::{ExperimentConfig, TimeConvention};

use crate::{CliError, Result};

pub const DEFAULT_SEED: u64 = 42;

fn default_seed() -> u64 {
    DEFAULT_SEED
}

/// Output file format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
    Text,
}

/// Everything a run reads from its config file. Unknown keys are errors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Cavity edge length (m).
    pub cavity_length: f64,
    /// Optical wavelength (m).
    pub wavelength: f64,
    #[serde(default)]
    pub finesse: Option<f64>,
    /// Measurement time (s) overriding the storage time.
    #[serde(default)]
    pub measurement_time: Option<f64>,
    #[serde(default)]
    pub time_convention: TimeConvention,
    /// `l_z` of the (0,1,M) mode; `round(2 L / wavelength)` when absent.
    #[serde(default)]
    pub mode_index: Option<u64>,
    /// Photon number for regime checks, absolute field maps and shifts.
    #[serde(default)]
    pub photons: Option<f64>,
    /// Quantum-gravity length for the comparison bounds (m); Planck length when absent.
    #[serde(default)]
    pub l_qg: Option<f64>,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    #[serde(default)]
    pub grid: Option<GridSpec>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Option<Format>,
}

impl RunConfig {
    /// The reference scenario with default numerics.
    pub fn reference() -> Self {
        Self {
            cavity_length: 1000.0,
            wavelength: 500e-9,
            finesse: Some(1.0e4),
            measurement_time: None,
            time_convention: TimeConvention::Caption,
            mode_index: None,
            photons: Some(1e26),
            l_qg: None,
            quadrature: QuadratureSpec::default(),
            grid: None,
            seed: DEFAULT_SEED,
            output: None,
            format: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self =
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Check every field before any computation runs.
    pub fn validate(&self) -> Result<()> {
        self.experiment()?;
        self.quadrature.validate()?;
        if let Some(grid) = &self.grid {
            grid.validate()?;
        }
        if let Some(n) = self.photons {
            if !(n.is_finite() && n >= 0.0) {
                return Err(CliError::Config(format!(
                    "photons must be finite and non-negative, got {n}"
                )));
            }
        }
        if let Some(l) = self.l_qg {
            if !(l.is_finite() && l > 0.0) {
                return Err(CliError::Config(format!("l_qg must be positive, got {l}")));
            }
        }
        Ok(())
    }

    pub fn experiment(&self) -> Result<ExperimentConfig> {
        let mut config = ExperimentConfig::new(self.cavity_length, self.wavelength)?;
        if let Some(m) = self.mode_index {
            config = config.with_mode(ModeIndices::axial(m)?)?;
        }
        if let Some(f) = self.finesse {
            config = config.with_finesse(f)?;
        }
        if let Some(t) = self.measurement_time {
            config = config.with_measurement_time(t)?;
        }
        Ok(config.with_time_convention(self.time_convention))
    }

    /// The config as it should appear in provenance: output location and
    /// format do not change the numbers and are left out.
    pub fn canonical(&self) -> Self {
        Self {
            output: None,
            format: None,
            ..self.clone()
        }
    }

    /// Hex SHA-256 of the canonical config's JSON encoding.
    pub fn sha256(&self) -> String {
        let bytes = serde_json::to_vec(&self.canonical()).expect("config serializes");
        format!("{:x}", Sha256::digest(&bytes))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unknown_keys() {
        let err = RunConfig::from_json(r#"{"cavity_length": 1.0, "wavelength": 1e-6, "colour": 3}"#)
            .unwrap_err();
        assert!(matches!(err, CliError::Config(_)), "{err}");
    }

    #[test]
    fn minimal_config_gets_defaults() {
        let c = RunConfig::from_json(r#"{"cavity_length": 1000.0, "wavelength": 5e-7}"#).unwrap();
        assert_eq!(c.seed, DEFAULT_SEED);
        assert_eq!(c.quadrature, QuadratureSpec::default());
        assert_eq!(c.experiment().unwrap().mode.lz, 4_000_000_000);
    }

    #[test]
    fn rejects_bad_values() {
        for text in [
            r#"{"cavity_length": -1.0, "wavelength": 5e-7}"#,
            r#"{"cavity_length": 1.0, "wavelength": 5e-7, "photons": -2}"#,
            r#"{"cavity_length": 1.0, "wavelength": 5e-7, "mode_index": 0}"#,
            r#"{"cavity_length": 1.0, "wavelength": 5e-7, "quadrature": {"tolerance": 0}}"#,
        ] {
            assert!(RunConfig::from_json(text).is_err(), "{text}");
        }
    }

    #[test]
    fn hash_ignores_output_location() {
        let a = RunConfig::reference();
        let mut b = a.clone();
        b.output = Some("elsewhere.csv".into());
        b.format = Some(Format::Json);
        assert_eq!(a.sha256(), b.sha256());
        b.seed = 7;
        assert_ne!(a.sha256(), b.sha256());
        assert_eq!(a.sha256().len(), 64);
    }
}
