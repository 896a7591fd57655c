//! Scenario configuration files (TOML).
//!
//! ```toml
//! k0 = 1.0
//! grid = 200
//! lambda = 1e-6
//! link = "identity"
//! seed = 7
//! frequency = "frequency.csv"
//! power = "power.csv"
//! wing = "wing.csv"
//! history = "history.csv"
//! colors = [0.8, 0.05, 0.3, 0.4, 0.5]
//! v0 = 0.0
//! potentials = "derive"
//!
//! [lattice]
//! omega1 = [1.0, 0.0]
//! omega2 = [0.0, 1.0]
//!
//! [quad]
//! omega = [1.0, 3.0, 2.0, 3.0]
//! ```
//!
//! Relative file paths are resolved against the directory holding the
//! config file. Unknown keys are rejected.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use openpath_core::correlation::DEFAULT_BOUND;
use openpath_core::poisson::{Design, FitOptions, Link};
use openpath_core::spectra::{InversionConfig, MIN_GRID};
use serde::{Deserialize, Serialize};

use crate::error::PipelineError;

/// Every run parameter of a prediction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default = "default_k0")]
    pub k0: f64,
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default = "default_lambda")]
    pub lambda: f64,
    #[serde(default)]
    pub link: LinkChoice,
    #[serde(default)]
    pub design: DesignChoice,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub frequency: Option<PathBuf>,
    #[serde(default)]
    pub power: Option<PathBuf>,
    #[serde(default)]
    pub lattice: Option<LatticeConfig>,
    #[serde(default)]
    pub wing: Option<PathBuf>,
    #[serde(default)]
    pub quad: Option<QuadConfig>,
    #[serde(default)]
    pub potentials: Potentials,
    #[serde(default)]
    pub colors: Option<[f64; 5]>,
    #[serde(default)]
    pub v0: f64,
    #[serde(default)]
    pub history: Option<PathBuf>,
}

/// Period pair, each given as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeConfig {
    pub omega1: [f64; 2],
    pub omega2: [f64; 2],
}

impl LatticeConfig {
    pub fn periods(&self) -> (Complex64, Complex64) {
        (
            Complex64::new(self.omega1[0], self.omega1[1]),
            Complex64::new(self.omega2[0], self.omega2[1]),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadConfig {
    pub omega: [f64; 4],
    #[serde(default = "default_bound")]
    pub bound: u32,
}

/// Either `potentials = "derive"` or `potentials = { v_in = .., v_out = .. }`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Potentials {
    Keyword(PotentialKeyword),
    Explicit { v_in: f64, v_out: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PotentialKeyword {
    Derive,
}

impl Default for Potentials {
    fn default() -> Self {
        Potentials::Keyword(PotentialKeyword::Derive)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkChoice {
    #[default]
    Identity,
    Log,
}

impl LinkChoice {
    pub fn parse(s: &str) -> Result<Self, PipelineError> {
        match s {
            "identity" => Ok(LinkChoice::Identity),
            "log" => Ok(LinkChoice::Log),
            other => Err(PipelineError::Config(format!(
                "unknown link `{other}` (expected `identity` or `log`)"
            ))),
        }
    }
}

impl From<LinkChoice> for Link {
    fn from(l: LinkChoice) -> Link {
        match l {
            LinkChoice::Identity => Link::Identity,
            LinkChoice::Log => Link::Log,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DesignChoice {
    #[default]
    Full,
    InterceptOnly,
}

impl From<DesignChoice> for Design {
    fn from(d: DesignChoice) -> Design {
        match d {
            DesignChoice::Full => Design::Full,
            DesignChoice::InterceptOnly => Design::InterceptOnly,
        }
    }
}

fn default_k0() -> f64 {
    1.0
}

fn default_grid() -> usize {
    200
}

fn default_lambda() -> f64 {
    1e-6
}

fn default_bound() -> u32 {
    DEFAULT_BOUND
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            k0: default_k0(),
            grid: default_grid(),
            lambda: default_lambda(),
            link: LinkChoice::default(),
            design: DesignChoice::default(),
            seed: 0,
            frequency: None,
            power: None,
            lattice: None,
            wing: None,
            quad: None,
            potentials: Potentials::default(),
            colors: None,
            v0: 0.0,
            history: None,
        }
    }
}

/// Command-line values that replace the file's.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub k0: Option<f64>,
    pub grid: Option<usize>,
    pub lambda: Option<f64>,
    pub link: Option<LinkChoice>,
    pub seed: Option<u64>,
}

impl ScenarioConfig {
    /// Parses TOML text and validates it. Paths are left as written.
    pub fn from_toml(text: &str) -> Result<Self, PipelineError> {
        let config: ScenarioConfig =
            toml::from_str(text).map_err(|e| PipelineError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// Reads a config file and resolves its relative paths against the
    /// file's directory.
    pub fn load(path: &Path) -> Result<Self, PipelineError> {
        let text = fs::read_to_string(path).map_err(|source| PipelineError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut config = Self::from_toml(&text)?;
        let base = path.parent().unwrap_or_else(|| Path::new(""));
        config.resolve_paths(base);
        Ok(config)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        for p in [
            &mut self.frequency,
            &mut self.power,
            &mut self.wing,
            &mut self.history,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<(), PipelineError> {
        if let Some(v) = o.k0 {
            self.k0 = v;
        }
        if let Some(v) = o.grid {
            self.grid = v;
        }
        if let Some(v) = o.lambda {
            self.lambda = v;
        }
        if let Some(v) = o.link {
            self.link = v;
        }
        if let Some(v) = o.seed {
            self.seed = v;
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        let bad = |msg: String| Err(PipelineError::Config(msg));
        if !(self.k0.is_finite() && self.k0 > 0.0) {
            return bad(format!("k0 must be positive, got {}", self.k0));
        }
        if self.grid < MIN_GRID {
            return bad(format!(
                "grid must be at least {MIN_GRID}, got {}",
                self.grid
            ));
        }
        if !(self.lambda.is_finite() && self.lambda >= 0.0) {
            return bad(format!("lambda must be nonnegative, got {}", self.lambda));
        }
        if !self.v0.is_finite() {
            return bad("v0 must be finite".into());
        }
        if let Some(q) = &self.quad {
            if q.bound == 0 {
                return bad("quad.bound must be at least 1".into());
            }
        }
        if let Potentials::Explicit { v_in, v_out } = self.potentials {
            if !(v_in.is_finite() && v_out.is_finite()) {
                return bad("potentials must be finite".into());
            }
        }
        Ok(())
    }

    pub fn inversion(&self) -> InversionConfig {
        InversionConfig {
            k0: self.k0,
            grid: self.grid,
            lambda: self.lambda,
        }
    }

    pub fn fit_options(&self) -> FitOptions {
        FitOptions {
            link: self.link.into(),
            design: self.design.into(),
        }
    }
}
