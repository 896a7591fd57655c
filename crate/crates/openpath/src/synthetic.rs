//! Seeded synthetic scenarios for tests and demonstrations.

use openpath_core::poisson::PoissonRow;
use openpath_core::spectra::DeviationSeries;
use openpath_core::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

/// Shortest series [`generate_synthetic`] accepts.
pub const MIN_LEN: usize = 8;
/// Half-width of the uniform noise added to the frequency ramp.
pub const DEFAULT_NOISE: f64 = 1e-3;
/// Final value of the frequency ramp, in per-unit.
pub const RAMP: f64 = 0.01;

/// A frequency series and the power series it drives.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSeries {
    pub frequency: DeviationSeries,
    pub power: DeviationSeries,
}

/// Ramp-plus-noise frequency deviations with `ΔP = true_droop · Δf`.
pub fn generate_synthetic(seed: u64, true_droop: f64, len: usize) -> Result<SyntheticSeries> {
    generate_synthetic_with(seed, true_droop, len, DEFAULT_NOISE)
}

/// [`generate_synthetic`] with an explicit noise half-width (0 disables it).
pub fn generate_synthetic_with(
    seed: u64,
    true_droop: f64,
    len: usize,
    noise: f64,
) -> Result<SyntheticSeries> {
    if !(true_droop.is_finite() && noise.is_finite()) {
        return Err(Error::NonFinite);
    }
    if true_droop <= 0.0 {
        return Err(Error::InvalidInput("true droop must be positive"));
    }
    if len < MIN_LEN {
        return Err(Error::InvalidInput(
            "synthetic series need at least 8 samples",
        ));
    }
    if noise < 0.0 {
        return Err(Error::InvalidInput("noise amplitude must be nonnegative"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let last = (len - 1) as f64;
    let f: Vec<f64> = (0..len)
        .map(|i| {
            let eps = if noise > 0.0 {
                rng.random_range(-noise..=noise)
            } else {
                0.0
            };
            RAMP * i as f64 / last + eps
        })
        .collect();
    let p = f.iter().map(|v| true_droop * v).collect();
    Ok(SyntheticSeries {
        frequency: DeviationSeries::new(f)?,
        power: DeviationSeries::new(p)?,
    })
}

/// Regression history with colours uniform on `[0, 1)` and counts drawn
/// from a Poisson law whose mean is linear in the colours:
/// `β₀ + β₁c₁ + … + β₄c₄`.
pub fn generate_history(seed: u64, beta: [f64; 5], rows: usize) -> Result<Vec<PoissonRow>> {
    if beta.iter().any(|b| !b.is_finite()) {
        return Err(Error::NonFinite);
    }
    if rows == 0 {
        return Err(Error::EmptyData);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..rows)
        .map(|_| {
            let colors: [f64; 4] = core::array::from_fn(|_| rng.random::<f64>());
            let mean = beta[0]
                + beta[1..]
                    .iter()
                    .zip(&colors)
                    .map(|(b, c)| b * c)
                    .sum::<f64>();
            if mean <= 0.0 {
                return Err(Error::InvalidInput("history mean must stay positive"));
            }
            let poisson =
                Poisson::new(mean).map_err(|_| Error::InvalidInput("invalid Poisson mean"))?;
            Ok(PoissonRow {
                colors,
                count: poisson.sample(&mut rng) as u64,
            })
        })
        .collect()
}
