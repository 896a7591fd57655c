//! Path estimators and total-path combinators.

use crate::{Error, Result};

/// The three mechanisms that produce expected droops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mechanism {
    /// Weierstrass discriminant and wing proper time.
    Resonance,
    /// Mediant of resonant frequencies and potential difference.
    Correlation,
    /// Redundancy and entropy production.
    Balance,
}

impl Mechanism {
    /// All mechanisms in report order.
    pub const ALL: [Mechanism; 3] = [
        Mechanism::Resonance,
        Mechanism::Correlation,
        Mechanism::Balance,
    ];

    /// Lower-case name used as a report key.
    pub fn name(self) -> &'static str {
        match self {
            Mechanism::Resonance => "resonance",
            Mechanism::Correlation => "correlation",
            Mechanism::Balance => "balance",
        }
    }
}

/// Frequency-side and power-side path lengths for one mechanism.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathEstimate {
    /// Path from the frequency droops.
    pub l_f: f64,
    /// Path from the power droops.
    pub l_p: f64,
    /// Mechanism the expected droops came from.
    pub mechanism: Mechanism,
}

impl PathEstimate {
    /// Builds an estimate from yesterday's actual droops and today's expected ones.
    pub fn from_droops(
        mechanism: Mechanism,
        actual_f: f64,
        expected_f: f64,
        actual_p: f64,
        expected_p: f64,
    ) -> Result<Self> {
        Ok(PathEstimate {
            l_f: path_estimate(actual_f, expected_f)?,
            l_p: path_estimate(actual_p, expected_p)?,
            mechanism,
        })
    }

    /// `sqrt(L_f² + L_p²)`.
    pub fn euclidean(&self) -> f64 {
        total_euclidean(self.l_f, self.l_p)
    }

    /// `(L_f + 4 L_p) / 5`.
    pub fn ropelength(&self) -> f64 {
        total_ropelength(self.l_f, self.l_p)
    }
}

/// Expected total paths: molecule (`L_m`), DNA (`L_d`), and radiation (`L_b`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TotalPathReport {
    /// Euclidean total of the resonance paths.
    pub l_m: f64,
    /// Ropelength total of the correlation paths.
    pub l_d: f64,
    /// Ropelength total of the balance paths.
    pub l_b: f64,
}

/// Half-sum of log-droops, `0.5·(ln k_prev + ln k_next)`.
pub fn path_estimate(k_prev: f64, k_next: f64) -> Result<f64> {
    if k_prev.is_nan() || k_next.is_nan() {
        return Err(Error::NonFinite);
    }
    if k_prev <= 0.0 || k_next <= 0.0 {
        return Err(Error::NonPositiveDroop);
    }
    let l = 0.5 * (libm::log(k_prev) + libm::log(k_next));
    if !l.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(l)
}

/// Euclidean combination `(L_f² + L_p²)^(1/2)`.
pub fn total_euclidean(l_f: f64, l_p: f64) -> f64 {
    libm::hypot(l_f, l_p)
}

/// Ropelength combination `(L_f + 4 L_p) / 5`.
pub fn total_ropelength(l_f: f64, l_p: f64) -> f64 {
    (l_f + 4.0 * l_p) / 5.0
}
