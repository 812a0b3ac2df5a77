//! Quantum Cramer-Rao bounds on `delta c / c`, the gravitational
//! back-action of the probe light, and the photon number that balances them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::setup::{
    derive_params, storage_time, DimensionlessParams, ExperimentConfig, PhysicalConstants,
    SPEED_OF_LIGHT,
};

/// Which coherent-state bound to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoherentFormula {
    /// `1/2 |(1/2 + n) sin^2 tau + n tau (tau + sin 2tau)|^{-1/2}`.
    #[default]
    Exact,
    /// `1 / (2 tau sqrt(n))`.
    Asymptotic,
}

/// Probe state family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Probe {
    /// `(|0> + |2n>) / sqrt(2)`.
    OptimalSuperposition,
    Coherent(CoherentFormula),
}

impl Probe {
    pub fn label(&self) -> &'static str {
        match self {
            Probe::OptimalSuperposition => "optimal",
            Probe::Coherent(CoherentFormula::Exact) => "coherent",
            Probe::Coherent(CoherentFormula::Asymptotic) => "coherent-asymptotic",
        }
    }
}

/// A probe family at a given (maximum or mean) photon number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeState {
    pub probe: Probe,
    pub n: f64,
}

impl ProbeState {
    pub fn new(probe: Probe, n: f64) -> Result<Self> {
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "photon number must be positive and finite, got {n}"
            )));
        }
        Ok(Self { probe, n })
    }
}

/// Smallest `delta c / c` reachable with `state` after phase `tau`.
pub fn qcrb(state: &ProbeState, tau: f64) -> Result<f64> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "evolution phase tau must be positive, got {tau}"
        )));
    }
    Ok(qcrb_unchecked(state.probe, state.n, tau))
}

fn qcrb_unchecked(probe: Probe, n: f64, tau: f64) -> f64 {
    match probe {
        Probe::OptimalSuperposition => 1.0 / (2.0 * tau * n),
        Probe::Coherent(CoherentFormula::Asymptotic) => 1.0 / (2.0 * tau * n.sqrt()),
        Probe::Coherent(CoherentFormula::Exact) => {
            let (s, c) = tau.sin_cos();
            let d = (0.5 + n) * s * s + n * tau * (tau + 2.0 * s * c);
            0.5 / d.abs().sqrt()
        }
    }
}

/// Signed metric back-action `-kappa n M`.
pub fn backaction(n: f64, m: f64, kappa: f64) -> f64 {
    -kappa * n * m
}

/// How a trade-off solution was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    RootFind,
}

/// Photon number at which the quantum bound meets the back-action.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TradeoffSolution {
    pub probe: Probe,
    pub n_opt: f64,
    pub delta_c_min: f64,
    pub tau: f64,
    pub kappa: f64,
    pub m: f64,
    pub method: Method,
    /// Quantum bound at `n_opt`.
    pub quantum_bound: f64,
    /// `|backaction|` at `n_opt`.
    pub backaction: f64,
}

/// Search bracket for the root finder, in photons.
pub const ROOT_BRACKET: (f64, f64) = (1.0, 1e60);
/// Relative tolerance on `n_opt` for the root finder.
pub const ROOT_TOLERANCE: f64 = 1e-9;

/// Trade-off for a configuration.
pub fn optimal_tradeoff(config: &ExperimentConfig, probe: Probe) -> Result<TradeoffSolution> {
    solve_tradeoff(&derive_params(config)?, probe)
}

/// Trade-off from already derived parameters.
pub fn solve_tradeoff(params: &DimensionlessParams, probe: Probe) -> Result<TradeoffSolution> {
    let (tau, kappa, m) = (params.tau, params.kappa, params.m());
    if !(tau > 0.0 && kappa > 0.0 && m >= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "trade-off needs tau > 0, kappa > 0, M >= 1 (got {tau}, {kappa}, {m})"
        )));
    }
    let rate = 2.0 * tau * kappa * m;
    let (n_opt, method) = match probe {
        Probe::OptimalSuperposition => (rate.powf(-0.5), Method::ClosedForm),
        Probe::Coherent(CoherentFormula::Asymptotic) => (rate.powf(-2.0 / 3.0), Method::ClosedForm),
        Probe::Coherent(CoherentFormula::Exact) => (root_find(probe, tau, kappa * m)?, Method::RootFind),
    };
    let quantum_bound = qcrb_unchecked(probe, n_opt, tau);
    Ok(TradeoffSolution {
        probe,
        n_opt,
        delta_c_min: quantum_bound,
        tau,
        kappa,
        m,
        method,
        quantum_bound,
        backaction: -backaction(n_opt, m, kappa),
    })
}

/// Bisection on `ln qcrb(n) - ln(k n)` over `ln n`. The quantum bound
/// falls and the back-action grows with `n`, so the crossing is unique.
fn root_find(probe: Probe, tau: f64, k: f64) -> Result<f64> {
    let residual = |x: f64| qcrb_unchecked(probe, x.exp(), tau).ln() - (k.ln() + x);
    let (lo, hi) = ROOT_BRACKET;
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let (fa, fb) = (residual(a), residual(b));
    let sign = |f: f64| if f > 0.0 { "positive" } else { "non-positive" };
    if !(fa > 0.0 && fb <= 0.0) {
        return Err(Error::BracketFailure {
            lo,
            hi,
            sign_lo: sign(fa),
            sign_hi: sign(fb),
        });
    }
    // |dx| < tol gives |dn / n| < tol
    while b - a > ROOT_TOLERANCE {
        let mid = 0.5 * (a + b);
        if residual(mid) > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok((0.5 * (a + b)).exp())
}

/// `(n, quantum bound, |back-action|)` along a photon-number sweep.
pub fn tradeoff_curves(
    params: &DimensionlessParams,
    probe: Probe,
    photons: &[f64],
) -> Result<Vec<(f64, f64, f64)>> {
    photons
        .iter()
        .map(|&n| {
            let q = qcrb(&ProbeState::new(probe, n)?, params.tau)?;
            Ok((n, q, -backaction(n, params.m(), params.kappa)))
        })
        .collect()
}

/// `delta L / L` predicted by three quantum-gravity models.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonBounds {
    /// `(l_Pl / L)^{2/3}`.
    pub ng00: f64,
    /// `(l_QG c T)^{1/2} / L`.
    pub ac_eq3: f64,
    /// `(l_QG^2 c T)^{1/3} / L`.
    pub ac_eq5: f64,
}

/// Comparison bounds with `T` from [`storage_time`]; `l_qg` defaults to
/// the Planck length.
pub fn comparison_bounds(config: &ExperimentConfig, l_qg: Option<f64>) -> Result<ComparisonBounds> {
    config.validate()?;
    let lp = PhysicalConstants::CODATA_2018.planck_length();
    let lqg = l_qg.unwrap_or(lp);
    if !(lqg.is_finite() && lqg > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "quantum-gravity length must be positive, got {lqg}"
        )));
    }
    let l = config.cavity_length;
    let ct = SPEED_OF_LIGHT * storage_time(config);
    Ok(ComparisonBounds {
        ng00: (lp / l).powf(2.0 / 3.0),
        ac_eq3: (lqg * ct).sqrt() / l,
        ac_eq5: (lqg * lqg * ct).cbrt() / l,
    })
}

/// Closed-form scaling laws, without order-one prefactors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingLaws {
    /// `l_Pl / (c T L)^{1/2}`.
    pub optimal_delta_c: f64,
    /// `(lambda / l_Pl) (L / (c T))^{1/2}`.
    pub optimal_photons: f64,
    /// `(l_Pl^2 lambda / (L (c T)^2))^{1/3}`.
    pub coherent_delta_c: f64,
    /// `(L lambda^2 / (l_Pl^2 c T))^{2/3}`.
    pub coherent_photons: f64,
}

pub fn scaling_laws(config: &ExperimentConfig) -> Result<ScalingLaws> {
    config.validate()?;
    let lp = PhysicalConstants::CODATA_2018.planck_length();
    let (l, lambda) = (config.cavity_length, config.wavelength);
    let ct = SPEED_OF_LIGHT * storage_time(config);
    Ok(ScalingLaws {
        optimal_delta_c: lp / (ct * l).sqrt(),
        optimal_photons: lambda / lp * (l / ct).sqrt(),
        coherent_delta_c: (lp * lp * lambda / (l * ct * ct)).cbrt(),
        coherent_photons: (l * lambda * lambda / (lp * lp * ct)).powf(2.0 / 3.0),
    })
}

/// The four trade-off solutions and the comparison bounds. Lossless rows
/// and the comparison bounds use `T = L / c`; lossy rows are absent
/// without a finesse.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingTable {
    pub config: ExperimentConfig,
    pub optimal_lossless: TradeoffSolution,
    pub optimal_lossy: Option<TradeoffSolution>,
    pub coherent_lossless: TradeoffSolution,
    pub coherent_lossy: Option<TradeoffSolution>,
    pub comparison: ComparisonBounds,
}

pub fn table1(config: &ExperimentConfig) -> Result<ScalingTable> {
    let lossless = config.lossless();
    let coherent = Probe::Coherent(CoherentFormula::Exact);
    let lossy = config.is_lossy().then_some(config);
    Ok(ScalingTable {
        config: *config,
        optimal_lossless: optimal_tradeoff(&lossless, Probe::OptimalSuperposition)?,
        optimal_lossy: lossy
            .map(|c| optimal_tradeoff(c, Probe::OptimalSuperposition))
            .transpose()?,
        coherent_lossless: optimal_tradeoff(&lossless, coherent)?,
        coherent_lossy: lossy.map(|c| optimal_tradeoff(c, coherent)).transpose()?,
        comparison: comparison_bounds(&lossless, None)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn state(probe: Probe, n: f64) -> ProbeState {
        ProbeState::new(probe, n).unwrap()
    }

    #[test]
    fn qcrb_examples() {
        let opt = qcrb(&state(Probe::OptimalSuperposition, 1.0), 1.0).unwrap();
        assert_eq!(opt, 0.5);
        let exact = qcrb(&state(Probe::Coherent(CoherentFormula::Exact), 100.0), PI).unwrap();
        assert!((exact - 0.015_915).abs() < 1e-6);
        assert!(qcrb(&state(Probe::OptimalSuperposition, 1.0), 0.0).is_err());
        assert!(ProbeState::new(Probe::OptimalSuperposition, 0.0).is_err());
    }

    #[test]
    fn backaction_is_linear() {
        assert_eq!(backaction(0.0, 4e9, 2.62e-76), 0.0);
        let b = backaction(1e26, 4e9, 2.62e-76);
        assert!((b / -1.048e-40 - 1.0).abs() < 1e-3);
        assert_eq!(backaction(2e26, 4e9, 2.62e-76), 2.0 * b);
    }

    #[test]
    fn root_find_matches_closed_form() {
        let params = derive_params(&ExperimentConfig::reference()).unwrap();
        let closed = solve_tradeoff(&params, Probe::Coherent(CoherentFormula::Asymptotic)).unwrap();
        let root = root_find(Probe::Coherent(CoherentFormula::Asymptotic), params.tau, params.kappa * params.m())
            .unwrap();
        assert!((root / closed.n_opt - 1.0).abs() < 1e-9);
    }

    #[test]
    fn exact_solution_balances_both_sides() {
        let s = optimal_tradeoff(&ExperimentConfig::reference(), Probe::Coherent(CoherentFormula::Exact)).unwrap();
        assert_eq!(s.method, Method::RootFind);
        assert!((s.quantum_bound / s.backaction - 1.0).abs() < 1e-8);
    }

    #[test]
    fn bracket_failure_reports_signs() {
        // kappa M so large that the back-action dominates at n = 1
        let err = root_find(Probe::Coherent(CoherentFormula::Exact), 10.0, 1e3).unwrap_err();
        assert!(matches!(
            err,
            Error::BracketFailure {
                sign_lo: "non-positive",
                ..
            }
        ));
    }

    #[test]
    fn table_without_finesse_has_no_lossy_rows() {
        let t = table1(&ExperimentConfig::reference().lossless()).unwrap();
        assert!(t.optimal_lossy.is_none() && t.coherent_lossy.is_none());
    }
}
