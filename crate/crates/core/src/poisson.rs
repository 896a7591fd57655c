//! Poisson regression of counts on four colours, fitted by IRLS.
//!
//! Each IRLS step solves the weighted least-squares problem
//! `min Σ wᵢ (zᵢ − xᵢᵀβ)²` with link-dependent working weights and
//! responses:
//!
//! | link     | μ                  | w    | z                  |
//! |----------|--------------------|------|--------------------|
//! | identity | `max(η, 1e-6)`     | `1/μ`| `y`                |
//! | log      | `exp(η)`           | `μ`  | `η + (y − μ)/μ`    |
//!
//! A step that lowers the log-likelihood is halved until it does not, so the
//! likelihood trace is nondecreasing.

use alloc::vec::Vec;

use crate::linalg::{least_squares, Matrix};
use crate::{Error, Result};

/// Lower clamp on identity-link predictions.
pub const MIN_MEAN: f64 = 1e-6;
/// Convergence threshold on the coefficient change.
pub const TOLERANCE: f64 = 1e-10;
/// Iteration cap.
pub const MAX_ITERATIONS: usize = 100;
const MAX_HALVINGS: usize = 40;

/// Link between the linear predictor and the Poisson mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Link {
    /// `μ = η`, clamped below at [`MIN_MEAN`].
    #[default]
    Identity,
    /// `μ = exp(η)`.
    Log,
}

/// Which columns enter the linear predictor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Design {
    /// Intercept plus `c₁..c₄`.
    #[default]
    Full,
    /// Intercept only; the colour coefficients are fixed at zero.
    InterceptOnly,
}

/// One training row: colours `c₁..c₄` and an observed count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonRow {
    /// `c₁..c₄`.
    pub colors: [f64; 4],
    /// Observed count.
    pub count: u64,
}

/// A fitted model: intercept followed by the four colour coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonModel {
    /// `β₀..β₄`.
    pub beta: [f64; 5],
    /// Link the model was fitted with.
    pub link: Link,
}

impl PoissonModel {
    /// Linear predictor `β₀ + Σ βᵢ cᵢ`.
    pub fn linear_predictor(&self, colors: &[f64; 4]) -> f64 {
        self.beta[0]
            + self.beta[1..]
                .iter()
                .zip(colors)
                .map(|(b, c)| b * c)
                .sum::<f64>()
    }

    /// Predicted mean count at the given colours.
    pub fn predict(&self, colors: &[f64; 4]) -> f64 {
        mean(self.link, self.linear_predictor(colors))
    }
}

/// IRLS options.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FitOptions {
    /// Link function.
    pub link: Link,
    /// Design columns.
    pub design: Design,
}

/// A fitted model with its convergence history.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonFit {
    /// The fitted model.
    pub model: PoissonModel,
    /// IRLS iterations performed.
    pub iterations: usize,
    /// Log-likelihood at the start and after every iteration.
    pub log_likelihood: Vec<f64>,
}

#[inline]
fn mean(link: Link, eta: f64) -> f64 {
    match link {
        Link::Identity => eta.max(MIN_MEAN),
        Link::Log => libm::exp(eta),
    }
}

fn design_row(design: Design, colors: &[f64; 4]) -> Vec<f64> {
    match design {
        Design::Full => {
            let mut row = Vec::with_capacity(5);
            row.push(1.0);
            row.extend_from_slice(colors);
            row
        }
        Design::InterceptOnly => alloc::vec![1.0],
    }
}

fn expand(design: Design, coef: &[f64]) -> [f64; 5] {
    let mut beta = [0.0; 5];
    match design {
        Design::Full => beta.copy_from_slice(coef),
        Design::InterceptOnly => beta[0] = coef[0],
    }
    beta
}

/// Poisson log-likelihood `Σ y ln μ − μ − ln y!` of a model on the rows.
pub fn log_likelihood(model: &PoissonModel, rows: &[PoissonRow]) -> f64 {
    rows.iter()
        .map(|r| {
            let mu = model.predict(&r.colors);
            let y = r.count as f64;
            let ylog = if r.count == 0 { 0.0 } else { y * libm::log(mu) };
            ylog - mu - libm::lgamma(y + 1.0)
        })
        .sum()
}

/// Fits with the default identity link and full design.
pub fn fit_poisson(rows: &[PoissonRow], link: Link) -> Result<PoissonModel> {
    fit_poisson_with(
        rows,
        &FitOptions {
            link,
            design: Design::Full,
        },
    )
    .map(|f| f.model)
}

/// Maximum-likelihood Poisson GLM by iteratively reweighted least squares.
pub fn fit_poisson_with(rows: &[PoissonRow], options: &FitOptions) -> Result<PoissonFit> {
    if rows.is_empty() {
        return Err(Error::EmptyData);
    }
    if rows.iter().any(|r| r.colors.iter().any(|c| !c.is_finite())) {
        return Err(Error::NonFinite);
    }
    let design = options.design;
    let link = options.link;
    let x: Vec<Vec<f64>> = rows.iter().map(|r| design_row(design, &r.colors)).collect();
    let p = x[0].len();
    if rows.len() < p {
        return Err(Error::RankDeficient);
    }
    let y: Vec<f64> = rows.iter().map(|r| r.count as f64).collect();

    // Full-rank check on the unweighted design.
    let plain = Matrix::from_fn(rows.len(), p, |i, j| x[i][j]);
    if least_squares(&plain, &y).is_none() {
        return Err(Error::RankDeficient);
    }

    let ybar = y.iter().sum::<f64>() / y.len() as f64;
    let mut coef = alloc::vec![0.0; p];
    coef[0] = match link {
        Link::Identity => ybar.max(MIN_MEAN),
        Link::Log => libm::log(ybar.max(MIN_MEAN)),
    };
    let model_of = |coef: &[f64]| PoissonModel {
        beta: expand(design, coef),
        link,
    };
    let mut ll = log_likelihood(&model_of(&coef), rows);
    let mut trace = alloc::vec![ll];

    for iteration in 1..=MAX_ITERATIONS {
        let mut weighted = Matrix::zeros(rows.len(), p);
        let mut rhs = Vec::with_capacity(rows.len());
        for (i, xi) in x.iter().enumerate() {
            let eta: f64 = xi.iter().zip(&coef).map(|(a, b)| a * b).sum();
            let mu = mean(link, eta);
            let (w, z) = match link {
                Link::Identity => (1.0 / mu, y[i]),
                Link::Log => (mu, eta + (y[i] - mu) / mu),
            };
            let sw = libm::sqrt(w);
            for (j, v) in xi.iter().enumerate() {
                weighted.set(i, j, sw * v);
            }
            rhs.push(sw * z);
        }
        let proposal = least_squares(&weighted, &rhs).ok_or(Error::RankDeficient)?;
        if proposal.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonConvergent);
        }

        let mut step: Vec<f64> = proposal.iter().zip(&coef).map(|(a, b)| a - b).collect();
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let candidate: Vec<f64> = coef.iter().zip(&step).map(|(b, s)| b + s).collect();
            let cand_ll = log_likelihood(&model_of(&candidate), rows);
            if cand_ll >= ll {
                accepted = Some((candidate, cand_ll));
                break;
            }
            for s in step.iter_mut() {
                *s *= 0.5;
            }
        }

        let Some((next, next_ll)) = accepted else {
            // No ascent direction left at working precision.
            trace.push(ll);
            return Ok(PoissonFit {
                model: model_of(&coef),
                iterations: iteration,
                log_likelihood: trace,
            });
        };
        let change = next
            .iter()
            .zip(&coef)
            .map(|(a, b)| (a - b).abs() / b.abs().max(1.0))
            .fold(0.0f64, f64::max);
        coef = next;
        ll = next_ll;
        trace.push(ll);
        if change < TOLERANCE {
            return Ok(PoissonFit {
                model: model_of(&coef),
                iterations: iteration,
                log_likelihood: trace,
            });
        }
    }
    Err(Error::NonConvergent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn row(colors: [f64; 4], count: u64) -> PoissonRow {
        PoissonRow { colors, count }
    }

    fn spread(i: usize) -> [f64; 4] {
        let f = |k: usize| ((i * k * 7919 + k * 104729) % 1000) as f64 / 1000.0;
        [f(1), f(2), f(3), f(5)]
    }

    #[test]
    fn constant_counts_predict_constant() {
        let rows: Vec<_> = (0..40).map(|i| row(spread(i), 5)).collect();
        for link in [Link::Identity, Link::Log] {
            let m = fit_poisson(&rows, link).unwrap();
            for i in 0..10 {
                assert!((m.predict(&spread(i + 100)) - 5.0).abs() < 1e-8, "{link:?}");
            }
        }
    }

    #[test]
    fn intercept_only_predicts_sample_mean() {
        let counts = [0u64, 3, 7, 2, 9, 4, 4, 1];
        let rows: Vec<_> = counts
            .iter()
            .enumerate()
            .map(|(i, &c)| row(spread(i), c))
            .collect();
        let fit = fit_poisson_with(
            &rows,
            &FitOptions {
                link: Link::Identity,
                design: Design::InterceptOnly,
            },
        )
        .unwrap();
        let mean = counts.iter().sum::<u64>() as f64 / counts.len() as f64;
        assert!((fit.model.predict(&[0.9, 0.1, 0.5, 0.3]) - mean).abs() < 1e-8);
        assert_eq!(&fit.model.beta[1..], &[0.0; 4]);
    }

    #[test]
    fn empty_rows() {
        assert_eq!(fit_poisson(&[], Link::Identity), Err(Error::EmptyData));
    }

    #[test]
    fn rank_deficient_design() {
        // c₂ duplicates c₁.
        let rows: Vec<_> = (0..20)
            .map(|i| {
                let c = spread(i);
                row([c[0], c[0], c[2], c[3]], (i % 5) as u64)
            })
            .collect();
        assert_eq!(
            fit_poisson(&rows, Link::Identity),
            Err(Error::RankDeficient)
        );
        assert_eq!(
            fit_poisson(&rows[..3], Link::Identity),
            Err(Error::RankDeficient)
        );
    }

    #[test]
    fn identity_fit_reproduces_exact_linear_means() {
        // Counts equal to an exactly linear mean are a fixed point of IRLS.
        let rows: Vec<_> = (0..30)
            .map(|i| {
                let c = [
                    (i % 3) as f64 * 0.25,
                    (i % 5) as f64 * 0.2,
                    (i % 2) as f64 * 0.5,
                    (i % 7) as f64 * 0.125,
                ];
                let mu = 2.0 + 4.0 * c[0] + 5.0 * c[1] + 2.0 * c[2] + 8.0 * c[3];
                row(c, libm::round(mu) as u64)
            })
            .collect();
        let fit = fit_poisson_with(&rows, &FitOptions::default()).unwrap();
        for r in &rows {
            assert!((fit.model.predict(&r.colors) - r.count as f64).abs() < 1e-6);
            assert!(
                (fit.model.linear_predictor(&r.colors) - fit.model.predict(&r.colors)).abs()
                    < 1e-12
            );
        }
        assert!(fit.log_likelihood.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn log_likelihood_of_known_model() {
        let m = PoissonModel {
            beta: [2.0, 0.0, 0.0, 0.0, 0.0],
            link: Link::Identity,
        };
        let rows = vec![row([0.0; 4], 0), row([0.0; 4], 1), row([0.0; 4], 3)];
        // (0 − 2) + (ln 2 − 2) + (3 ln 2 − 2 − ln 6)
        let expected = -6.0 + 4.0 * libm::log(2.0) - libm::log(6.0);
        assert!((log_likelihood(&m, &rows) - expected).abs() < 1e-12);
    }

    #[test]
    fn identity_predictions_clamped() {
        let m = PoissonModel {
            beta: [-1.0, 0.0, 0.0, 0.0, 0.0],
            link: Link::Identity,
        };
        assert_eq!(m.predict(&[0.0; 4]), MIN_MEAN);
    }
}
