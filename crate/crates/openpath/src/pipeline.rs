//! The end-to-end prediction: actual droop, the three mechanisms, paths and
//! totals.
//!
//! Only missing or unreadable inputs abort a run. Every numerical failure is
//! kept as the status of the value it prevented, so a report always shows
//! which droops, paths and totals exist and why the others do not.

use num_complex::Complex64;
use openpath_core::balance::{self, ColorVector};
use openpath_core::correlation;
use openpath_core::path::{path_estimate, total_euclidean, total_ropelength};
use openpath_core::poisson::{fit_poisson_with, FitOptions, PoissonFit, PoissonRow};
use openpath_core::resonance::{self, PotentialPair, WingTrace};
use openpath_core::spectra::{
    reconstruct, ActualDroop, DeviationSeries, InversionConfig, Reconstruction,
};
use openpath_core::{Error, Mechanism};

use crate::config::{Potentials, ScenarioConfig};
use crate::error::PipelineError;
use crate::io;

/// A value or the error that prevented it.
pub type Status<T> = Result<T, Error>;

/// Frequency-side and power-side droops of one mechanism.
#[derive(Debug, Clone, PartialEq)]
pub struct DroopPair {
    pub f: Status<f64>,
    pub p: Status<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DroopSet {
    /// Shared by the frequency and power sides as `k_{t−1}`.
    pub actual: Status<ActualDroop>,
    pub resonance: DroopPair,
    pub correlation: DroopPair,
    pub balance: DroopPair,
}

impl DroopSet {
    pub fn expected(&self, m: Mechanism) -> &DroopPair {
        match m {
            Mechanism::Resonance => &self.resonance,
            Mechanism::Correlation => &self.correlation,
            Mechanism::Balance => &self.balance,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MechanismPaths {
    pub l_f: Status<f64>,
    pub l_p: Status<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Totals {
    pub l_m: Status<f64>,
    pub l_d: Status<f64>,
    pub l_b: Status<f64>,
}

/// Intermediate quantities worth showing next to the droops.
#[derive(Debug, Clone, PartialEq)]
pub struct Details {
    pub potentials: Status<PotentialPair>,
    pub regression: Status<PoissonFit>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutcome {
    pub droops: DroopSet,
    pub resonance: MechanismPaths,
    pub correlation: MechanismPaths,
    pub balance: MechanismPaths,
    pub totals: Totals,
    pub details: Details,
}

impl PipelineOutcome {
    pub fn paths(&self, m: Mechanism) -> &MechanismPaths {
        match m {
            Mechanism::Resonance => &self.resonance,
            Mechanism::Correlation => &self.correlation,
            Mechanism::Balance => &self.balance,
        }
    }
}

/// Mechanism inputs, already read from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct MechanismInputs {
    pub lattice: (Complex64, Complex64),
    pub wing: WingTrace,
    pub quad: [f64; 4],
    pub bound: u32,
    pub potentials: Potentials,
    pub colors: [f64; 5],
    pub v0: f64,
    pub history: Vec<PoissonRow>,
    pub fit: FitOptions,
}

impl MechanismInputs {
    /// Collects the mechanism inputs named by `config`, reading the wing and
    /// history files.
    pub fn load(config: &ScenarioConfig) -> Result<Self, PipelineError> {
        fn need<T>(v: Option<T>, key: &str) -> Result<T, PipelineError> {
            v.ok_or_else(|| PipelineError::Config(format!("missing `{key}`")))
        }
        let quad = need(config.quad, "quad")?;
        Ok(MechanismInputs {
            lattice: need(config.lattice, "lattice")?.periods(),
            wing: io::read_wing(need(config.wing.as_deref(), "wing")?)?,
            quad: quad.omega,
            bound: quad.bound,
            potentials: config.potentials,
            colors: need(config.colors, "colors")?,
            v0: config.v0,
            history: io::read_history(need(config.history.as_deref(), "history")?)?,
            fit: config.fit_options(),
        })
    }
}

/// Reads the mechanism inputs named by `config` and runs the prediction.
pub fn run_pipeline(
    config: &ScenarioConfig,
    frequency: &DeviationSeries,
    power: &DeviationSeries,
) -> Result<PipelineOutcome, PipelineError> {
    config.validate()?;
    let inputs = MechanismInputs::load(config)?;
    Ok(evaluate(&config.inversion(), &inputs, frequency, power))
}

/// The prediction proper. Never fails: each value carries its own status.
pub fn evaluate(
    inversion: &InversionConfig,
    inputs: &MechanismInputs,
    frequency: &DeviationSeries,
    power: &DeviationSeries,
) -> PipelineOutcome {
    let actual = reconstruct(frequency, power, inversion).map(|r: Reconstruction| r.droop);

    // Resonance.
    let (w1, w2) = inputs.lattice;
    let res_f =
        resonance::invariants_qseries(w1, w2).and_then(|lat| resonance::droop_resonance_f(&lat));
    let dtau2 = resonance::proper_time_sq(&inputs.wing);
    let res_p = resonance::droop_resonance_p(dtau2);

    // Correlation. With derived potentials V_in comes from the resonance
    // lattice and V_out from the wing clock.
    let corr_f = correlation::validate_quad(inputs.quad, inputs.bound)
        .and_then(|q| correlation::droop_corr_f(&q));
    let potentials = match inputs.potentials {
        Potentials::Explicit { v_in, v_out } => PotentialPair::new(v_in, v_out),
        Potentials::Keyword(_) => res_f.and_then(|(_, v_in)| {
            if dtau2 > 0.0 {
                PotentialPair::new(v_in, dtau2)
            } else if dtau2.is_nan() {
                Err(Error::NonFinite)
            } else {
                Err(Error::NonPositiveDroop)
            }
        }),
    };
    let corr_p = potentials
        .and_then(|pot| correlation::potential_correlation(&pot))
        .and_then(|c| correlation::droop_corr_p(&c));

    // Balance.
    let colors = ColorVector::new(inputs.colors);
    let regression = fit_poisson_with(&inputs.history, &inputs.fit);
    let bal_f = colors.and_then(|c| {
        let fit = regression.as_ref().map_err(|e| *e)?;
        balance::droop_balance_f(&balance::redundancy(&fit.model, &c))
    });
    let bal_p = colors
        .and_then(|c| balance::entropy(&c, inputs.v0))
        .and_then(|e| balance::droop_balance_p(&e));

    let droops = DroopSet {
        actual,
        resonance: DroopPair {
            f: res_f.map(|(k, _)| k),
            p: res_p.map(|(k, _)| k),
        },
        correlation: DroopPair {
            f: corr_f,
            p: corr_p,
        },
        balance: DroopPair { f: bal_f, p: bal_p },
    };

    let k_prev = actual.map(|a| a.k);
    let paths = |pair: &DroopPair| MechanismPaths {
        l_f: leg(k_prev, pair.f),
        l_p: leg(k_prev, pair.p),
    };
    let resonance = paths(&droops.resonance);
    let correlation = paths(&droops.correlation);
    let balance = paths(&droops.balance);
    let totals = Totals {
        l_m: combine(&resonance, total_euclidean),
        l_d: combine(&correlation, total_ropelength),
        l_b: combine(&balance, total_ropelength),
    };

    PipelineOutcome {
        droops,
        resonance,
        correlation,
        balance,
        totals,
        details: Details {
            potentials,
            regression,
        },
    }
}

fn leg(k_prev: Status<f64>, k_next: Status<f64>) -> Status<f64> {
    path_estimate(k_prev?, k_next?)
}

fn combine(paths: &MechanismPaths, total: fn(f64, f64) -> f64) -> Status<f64> {
    Ok(total(paths.l_f?, paths.l_p?))
}
