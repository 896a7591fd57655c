//! JSON reports.
//!
//! Values that could not be computed are written as `null`, and the
//! matching `status` field names the error. Field order is fixed by the
//! struct definitions, so identical outcomes serialize to identical bytes.

use openpath_core::spectra::Reconstruction;
use serde::{Deserialize, Serialize};

use crate::config::ScenarioConfig;
use crate::pipeline::{DroopPair, MechanismPaths, PipelineOutcome, Status};
use crate::VERSION;

pub const OK: &str = "ok";

fn status<T>(s: &Status<T>) -> String {
    match s {
        Ok(_) => OK.to_string(),
        Err(e) => e.code().to_string(),
    }
}

fn value(s: &Status<f64>) -> Option<f64> {
    s.as_ref().ok().copied()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub actual_droop: ActualDroopEntry,
    pub expected_droops: PerMechanism<DroopEntry>,
    pub paths: PerMechanism<PathEntry>,
    pub totals: TotalsEntry,
    pub details: DetailsEntry,
    pub config_echo: ScenarioConfig,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerMechanism<T> {
    pub resonance: T,
    pub correlation: T,
    pub balance: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActualDroopEntry {
    pub k: Option<f64>,
    pub delta_f: Option<f64>,
    pub delta_p: Option<f64>,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SideStatus {
    pub f: String,
    pub p: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DroopEntry {
    pub f: Option<f64>,
    pub p: Option<f64>,
    pub status: SideStatus,
}

impl From<&DroopPair> for DroopEntry {
    fn from(d: &DroopPair) -> Self {
        DroopEntry {
            f: value(&d.f),
            p: value(&d.p),
            status: SideStatus {
                f: status(&d.f),
                p: status(&d.p),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathEntry {
    #[serde(rename = "L_f")]
    pub l_f: Option<f64>,
    #[serde(rename = "L_p")]
    pub l_p: Option<f64>,
    pub status: SideStatus,
}

impl From<&MechanismPaths> for PathEntry {
    fn from(p: &MechanismPaths) -> Self {
        PathEntry {
            l_f: value(&p.l_f),
            l_p: value(&p.l_p),
            status: SideStatus {
                f: status(&p.l_f),
                p: status(&p.l_p),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TotalsStatus {
    #[serde(rename = "L_m")]
    pub l_m: String,
    #[serde(rename = "L_d")]
    pub l_d: String,
    #[serde(rename = "L_b")]
    pub l_b: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TotalsEntry {
    #[serde(rename = "L_m")]
    pub l_m: Option<f64>,
    #[serde(rename = "L_d")]
    pub l_d: Option<f64>,
    #[serde(rename = "L_b")]
    pub l_b: Option<f64>,
    pub status: TotalsStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetailsEntry {
    pub v_in: Option<f64>,
    pub v_out: Option<f64>,
    pub potentials_status: String,
    pub regression_beta: Option<[f64; 5]>,
    pub regression_iterations: Option<usize>,
    pub regression_status: String,
}

impl Report {
    pub fn new(outcome: &PipelineOutcome, config: &ScenarioConfig) -> Self {
        let d = &outcome.droops;
        let actual = d.actual.as_ref().ok();
        let t = &outcome.totals;
        let pot = outcome.details.potentials.as_ref().ok();
        let fit = outcome.details.regression.as_ref().ok();
        Report {
            actual_droop: ActualDroopEntry {
                k: actual.map(|a| a.k),
                delta_f: actual.map(|a| a.delta_f),
                delta_p: actual.map(|a| a.delta_p),
                status: status(&d.actual),
            },
            expected_droops: PerMechanism {
                resonance: (&d.resonance).into(),
                correlation: (&d.correlation).into(),
                balance: (&d.balance).into(),
            },
            paths: PerMechanism {
                resonance: (&outcome.resonance).into(),
                correlation: (&outcome.correlation).into(),
                balance: (&outcome.balance).into(),
            },
            totals: TotalsEntry {
                l_m: value(&t.l_m),
                l_d: value(&t.l_d),
                l_b: value(&t.l_b),
                status: TotalsStatus {
                    l_m: status(&t.l_m),
                    l_d: status(&t.l_d),
                    l_b: status(&t.l_b),
                },
            },
            details: DetailsEntry {
                v_in: pot.map(|p| p.v_in),
                v_out: pot.map(|p| p.v_out),
                potentials_status: status(&outcome.details.potentials),
                regression_beta: fit.map(|f| f.model.beta),
                regression_iterations: fit.map(|f| f.iterations),
                regression_status: status(&outcome.details.regression),
            },
            config_echo: config.clone(),
            version: VERSION.to_string(),
        }
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

/// Output of the `reconstruct` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionReport {
    pub actual_droop: ActualDroopEntry,
    pub k0: f64,
    pub grid: usize,
    pub lambda: f64,
    pub nodes: Vec<f64>,
    pub frequency: SpectrumEntry,
    pub power: SpectrumEntry,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub spectrum: Vec<f64>,
    pub residual: f64,
    pub path: Vec<f64>,
}

impl ReconstructionReport {
    pub fn new(r: &Reconstruction, k0: f64) -> Self {
        ReconstructionReport {
            actual_droop: ActualDroopEntry {
                k: Some(r.droop.k),
                delta_f: Some(r.droop.delta_f),
                delta_p: Some(r.droop.delta_p),
                status: OK.to_string(),
            },
            k0,
            grid: r.frequency.grid(),
            lambda: r.frequency.lambda,
            nodes: r.frequency.nodes.clone(),
            frequency: SpectrumEntry {
                spectrum: r.frequency.phi.clone(),
                residual: r.frequency.residual,
                path: r.frequency_path.x.clone(),
            },
            power: SpectrumEntry {
                spectrum: r.power.phi.clone(),
                residual: r.power.residual,
                path: r.power_path.x.clone(),
            },
            version: VERSION.to_string(),
        }
    }
}
