//! Correlation droops: the mediant of two resonant frequency ratios and the
//! inverse potential difference.

use crate::norm::norm_droop;
use crate::path::{Mechanism, PathEstimate};
use crate::resonance::PotentialPair;
use crate::{Error, Result};

/// Relative tolerance of the resonance conditions `nω + mω' = 0`.
pub const RESONANCE_TOLERANCE: f64 = 1e-9;
/// Default search bound for resonance integers.
pub const DEFAULT_BOUND: u32 = 32;
/// Potentials closer than this are treated as equal.
pub const EQUAL_POTENTIALS: f64 = 1e-12;

/// Four positive frequencies forming two resonant pairs
/// `n₁ω₁ + m₁ω₂ = 0` and `n₂ω₃ + m₂ω₄ = 0`.
///
/// The pairs are ordered so that `ω₁/ω₂ ≤ ω₃/ω₄`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceQuad {
    /// `ω₁..ω₄`.
    pub omega: [f64; 4],
    /// `(n₁, m₁)` and `(n₂, m₂)`; each has `n > 0 > m`.
    pub pairs: [(i64, i64); 2],
}

impl ResonanceQuad {
    /// `ω₁/ω₂`.
    pub fn rho1(&self) -> f64 {
        self.omega[0] / self.omega[1]
    }

    /// `ω₃/ω₄`.
    pub fn rho2(&self) -> f64 {
        self.omega[2] / self.omega[3]
    }
}

/// Potential-difference correlation and the global-model potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationResult {
    /// `ρ_{3,2} = 1/(V_out − V_in)`.
    pub rho32: f64,
    /// `V' = (V_out − V_in)/2`.
    pub v_prime: f64,
}

fn resonance_pair(a: f64, b: f64, bound: u32) -> Option<(i64, i64)> {
    let bound = bound as i64;
    (1..=bound).find_map(|n| {
        (1..=bound).find_map(|m| {
            let lhs = n as f64 * a;
            let rhs = m as f64 * b;
            ((lhs - rhs).abs() <= RESONANCE_TOLERANCE * (lhs + rhs)).then_some((n, -m))
        })
    })
}

/// Finds the smallest resonance integers for `(ω₁, ω₂)` and `(ω₃, ω₄)`.
///
/// Positive frequencies force `n` and `m` to have opposite signs; the search
/// returns `n > 0`, `m < 0` with the smallest `n` (hence the primitive pair).
pub fn validate_quad(omega: [f64; 4], bound: u32) -> Result<ResonanceQuad> {
    if bound == 0 {
        return Err(Error::InvalidInput(
            "resonance search bound must be at least 1",
        ));
    }
    if omega.iter().any(|w| !w.is_finite()) {
        return Err(Error::NonFinite);
    }
    if omega.iter().any(|w| *w <= 0.0) {
        return Err(Error::InvalidInput(
            "resonance frequencies must be positive",
        ));
    }
    let first = resonance_pair(omega[0], omega[1], bound).ok_or(Error::NoResonance)?;
    let second = resonance_pair(omega[2], omega[3], bound).ok_or(Error::NoResonance)?;
    let mut quad = ResonanceQuad {
        omega,
        pairs: [first, second],
    };
    if quad.rho1() > quad.rho2() {
        quad.omega = [omega[2], omega[3], omega[0], omega[1]];
        quad.pairs = [second, first];
    }
    Ok(quad)
}

/// The mediant `(ω₁ + ω₃)/(ω₂ + ω₄)` of `ω₁/ω₂` and `ω₃/ω₄`.
pub fn mediant(omega: &[f64; 4]) -> f64 {
    (omega[0] + omega[2]) / (omega[1] + omega[3])
}

/// `ρ_{3,1}` of a validated quad.
pub fn mediant_correlation(quad: &ResonanceQuad) -> f64 {
    mediant(&quad.omega)
}

/// Frequency-side correlation droop `[ρ_{3,1}]₀`.
pub fn droop_corr_f(quad: &ResonanceQuad) -> Result<f64> {
    norm_droop(mediant_correlation(quad))
}

/// `ρ_{3,2}` and `V'` from a potential pair.
pub fn potential_correlation(pot: &PotentialPair) -> Result<CorrelationResult> {
    let diff = pot.v_out - pot.v_in;
    if diff.abs() < EQUAL_POTENTIALS {
        return Err(Error::EqualPotentials);
    }
    Ok(CorrelationResult {
        rho32: 1.0 / diff,
        v_prime: diff / 2.0,
    })
}

/// Power-side correlation droop `[ρ_{3,2}]₀`.
pub fn droop_corr_p(res: &CorrelationResult) -> Result<f64> {
    norm_droop(res.rho32)
}

/// Correlation paths and their ropelength total `L_d`.
pub fn dna_paths(
    k_prev_f: f64,
    k_prev_p: f64,
    quad: &ResonanceQuad,
    pot: &PotentialPair,
) -> Result<(PathEstimate, f64)> {
    let k_f = droop_corr_f(quad)?;
    let k_p = droop_corr_p(&potential_correlation(pot)?)?;
    let paths = PathEstimate::from_droops(Mechanism::Correlation, k_prev_f, k_f, k_prev_p, k_p)?;
    Ok((paths, paths.ropelength()))
}
