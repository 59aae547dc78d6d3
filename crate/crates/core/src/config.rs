//! Run configuration: one JSON document, unknown keys rejected, every default
//! written back out in the resolved copy.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::analysis::ScarOptions;
use crate::collective::CollectiveObservable;
use crate::dynamics::TimeGrid;
use crate::error::{Error, Result};
use crate::meanfield::CoefficientModel;
use crate::params::ModelParams;
use crate::states::Quadrature;
use crate::timescales::FitOptions;

/// Initial state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum StateSpec {
    Neel,
    /// Néel vector `(sin θ sin φ, sin θ cos φ, cos θ)`.
    Rotated { theta: f64, phi: f64 },
    /// Sublattice A at polar angle `θ + γ`, B at `θ - γ`.
    Tilted { theta: f64, gamma: f64 },
    Mixed {
        theta: f64,
        #[serde(default)]
        phi: f64,
        sigma: f64,
        #[serde(default)]
        quadrature: Quadrature,
    },
}

impl Default for StateSpec {
    fn default() -> Self {
        StateSpec::Neel
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FourierTask {
    pub bins: usize,
    /// Upper edge of the binned profile; `None` uses the largest line.
    pub omega_max: Option<f64>,
}

impl Default for FourierTask {
    fn default() -> Self {
        FourierTask { bins: 400, omega_max: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnsemblesTask {
    /// Target energy; `None` uses the separatrix energy.
    pub energy: Option<f64>,
    pub thetas: Vec<f64>,
    /// Microcanonical half-width as a fraction of the spectral range.
    pub window_fraction: f64,
}

impl Default for EnsemblesTask {
    fn default() -> Self {
        EnsemblesTask {
            energy: None,
            thetas: vec![PI / 2.0, 2.0 * PI / 3.0, 5.0 * PI / 6.0],
            window_fraction: 0.005,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EigenstateRef {
    pub m: f64,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HusimiTask {
    pub n_theta: usize,
    pub n_gamma: usize,
    /// Portrait of this eigenstate instead of the initial state.
    pub eigenstate: Option<EigenstateRef>,
}

impl Default for HusimiTask {
    fn default() -> Self {
        HusimiTask {
            n_theta: 64,
            n_gamma: 64,
            eigenstate: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MeanfieldTask {
    pub alpha: f64,
    pub n_max: i64,
    pub coefficients: CoefficientModel,
    /// System sizes for the subspace census.
    pub census_sizes: Vec<usize>,
    pub census_tol: f64,
}

impl Default for MeanfieldTask {
    fn default() -> Self {
        MeanfieldTask {
            alpha: 0.5,
            n_max: 20,
            coefficients: CoefficientModel::default(),
            census_sizes: vec![40, 80, 160, 320],
            census_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BruteTask {
    pub sites: usize,
    pub include_onsite: bool,
    pub max_sites: usize,
    pub times: TimeGrid,
}

impl Default for BruteTask {
    fn default() -> Self {
        BruteTask {
            sites: 4,
            include_onsite: false,
            max_sites: 7,
            times: TimeGrid::linear(10.0, 101),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepKind {
    /// Vary the ensemble width at fixed size.
    Sigma,
    /// Vary `n_spins` at fixed width.
    Size,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimescalesTask {
    pub sweep: SweepKind,
    /// Widths (`sigma` sweep) or sizes (`size` sweep).
    pub values: Vec<f64>,
    /// Width used by a size sweep; size sweeps ignore `state.sigma`.
    pub sigma: f64,
    pub theta: f64,
    pub dt: f64,
    /// Revivals to cover; sets `t_max` through the empirical horizon.
    pub revivals: f64,
    pub fit: FitOptions,
}

impl Default for TimescalesTask {
    fn default() -> Self {
        TimescalesTask {
            sweep: SweepKind::Sigma,
            values: vec![0.005, 0.01, 0.02, 0.04],
            sigma: 0.01,
            theta: 3.0 * PI / 4.0,
            dt: 0.05,
            revivals: 5.0,
            fit: FitOptions::default(),
        }
    }
}

/// Full run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelParams,
    #[serde(default)]
    pub state: StateSpec,
    #[serde(default = "default_times")]
    pub times: TimeGrid,
    #[serde(default = "default_observable")]
    pub observable: CollectiveObservable,
    #[serde(default)]
    pub fourier: FourierTask,
    #[serde(default)]
    pub ensembles: EnsemblesTask,
    #[serde(default)]
    pub husimi: HusimiTask,
    #[serde(default)]
    pub entropy: ScarOptions,
    #[serde(default)]
    pub meanfield: MeanfieldTask,
    #[serde(default)]
    pub brute: BruteTask,
    #[serde(default)]
    pub timescales: TimescalesTask,
    /// Seed for Monte Carlo ensembles; overrides the quadrature's own seed.
    #[serde(default)]
    pub seed: Option<u64>,
    /// Worker threads (`None` lets the pool decide).
    #[serde(default)]
    pub threads: Option<usize>,
}

fn default_times() -> TimeGrid {
    TimeGrid::linear(50.0, 1001)
}

fn default_observable() -> CollectiveObservable {
    CollectiveObservable::StaggeredNz
}

impl RunConfig {
    pub fn new(model: ModelParams) -> Self {
        RunConfig {
            model,
            state: StateSpec::default(),
            times: default_times(),
            observable: default_observable(),
            fourier: FourierTask::default(),
            ensembles: EnsemblesTask::default(),
            husimi: HusimiTask::default(),
            entropy: ScarOptions::default(),
            meanfield: MeanfieldTask::default(),
            brute: BruteTask::default(),
            timescales: TimescalesTask::default(),
            seed: None,
            threads: None,
        }
    }

    /// Parses and validates a JSON document. Errors carry the JSON path.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| Error::Config {
            path: match e.path().to_string().as_str() {
                "." => "<root>".to_string(),
                p => p.to_string(),
            },
            reason: e.inner().to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate().map_err(|e| match e {
            Error::InvalidParameter { field, reason } => Error::Config {
                path: format!("model.{field}"),
                reason,
            },
            other => other,
        })?;
        let bad = |path: &str, reason: &str| {
            Err(Error::Config {
                path: path.to_string(),
                reason: reason.to_string(),
            })
        };
        if let StateSpec::Mixed { sigma, .. } = self.state {
            if !(sigma > 0.0 && sigma.is_finite()) {
                return bad("state.sigma", "must be positive");
            }
        }
        if self.threads == Some(0) {
            return bad("threads", "must be at least 1");
        }
        if !(self.ensembles.window_fraction > 0.0) {
            return bad("ensembles.window_fraction", "must be positive");
        }
        if self.fourier.bins == 0 {
            return bad("fourier.bins", "must be at least 1");
        }
        if self.husimi.n_theta < 2 || self.husimi.n_gamma < 2 {
            return bad("husimi", "grids need at least 2 points per axis");
        }
        if self.timescales.values.is_empty() {
            return bad("timescales.values", "empty sweep");
        }
        if !(self.timescales.dt > 0.0 && self.timescales.revivals > 0.0) {
            return bad("timescales", "dt and revivals must be positive");
        }
        if self.brute.sites < 2 {
            return bad("brute.sites", "need at least two sites");
        }
        Ok(())
    }

    /// Pretty JSON with every default filled in.
    pub fn resolved_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }

    /// SHA-256 of [`RunConfig::resolved_json`], hex encoded.
    pub fn digest(&self) -> String {
        Sha256::digest(self.resolved_json().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MIN: &str = r#"{"model": {"J": 2.0, "h": 1.0, "n_spins": 20}}"#;

    #[test]
    fn minimal_config_gets_defaults() {
        let c = RunConfig::from_json(MIN).unwrap();
        assert_eq!(c.state, StateSpec::Neel);
        assert_eq!(c.observable, CollectiveObservable::StaggeredNz);
        assert_eq!(c.timescales.sweep, SweepKind::Sigma);
    }

    #[test]
    fn unknown_key_reports_path() {
        let text = r#"{"model": {"J": 2.0, "h": 1.0, "n_spins": 20}, "state": {"kind": "mixed", "theta": 1, "sigma": 0.1, "sgima": 2}}"#;
        match RunConfig::from_json(text) {
            Err(Error::Config { path, reason }) => {
                assert!(path.starts_with("state"), "{path}");
                assert!(reason.contains("sgima"), "{reason}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn invalid_model_is_config_error() {
        let text = r#"{"model": {"J": 2.0, "h": 1.0, "n_spins": 7}}"#;
        let e = RunConfig::from_json(text).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("model.n_spins"));
    }

    #[test]
    fn resolved_round_trip() {
        let mut c = RunConfig::from_json(MIN).unwrap();
        c.state = StateSpec::Mixed {
            theta: 0.3,
            phi: 0.1,
            sigma: 0.2,
            quadrature: Quadrature::MonteCarlo { samples: 100, seed: 7 },
        };
        c.seed = Some(11);
        let again = RunConfig::from_json(&c.resolved_json()).unwrap();
        assert_eq!(again, c);
        assert_eq!(again.digest(), c.digest());
    }
}
