//! Spectrum reconstruction from deviation series and the actual droop.
//!
//! The spectrum `φ` on `[0, 1]` and the observed data `g` are related by the
//! first-kind equation
//!
//! ```text
//! g(t) = ∫₀¹ [1 − x/t]₊ φ(x) dx = ∫₀ᵗ (1 − x/t) φ(x) dx
//! ```
//!
//! discretized by the trapezoid rule on `N + 1` uniform nodes. The inverse is
//! ill-posed, so it is solved as the Tikhonov problem
//! `min ‖Kφ − g‖² + λ‖D²φ‖²` with `D²` the second-difference operator.
//!
//! Observed per-unit deviations are the data of the spectrum's departure
//! from the nominal level 1. The unit spectrum has zero curvature and is
//! reproduced exactly by the discrete kernel, so the reconstructed level
//! spectrum is `1 + ψ` where `ψ` solves the problem for the deviations.

use alloc::vec::Vec;

use crate::linalg::{least_squares, norm2, Matrix};
use crate::{Error, Result};

/// Smallest grid the solver accepts.
pub const MIN_GRID: usize = 16;
/// Below this the reconstructed frequency deviation is treated as zero.
pub const DEGENERATE_FREQUENCY: f64 = 1e-12;

/// Observed per-step deviations `Δf(t)` or `ΔP(t)`, `t = 1..T`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviationSeries {
    values: Vec<f64>,
}

impl DeviationSeries {
    /// Validates `T ≥ 2` and finiteness.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidInput(
                "deviation series needs at least two samples",
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(DeviationSeries { values })
    }

    /// The samples.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of samples `T`.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; a valid series has at least two samples.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Linear interpolation onto `grid + 1` uniform nodes of `[0, 1]`, with
    /// `t = 1` mapped to 0 and `t = T` mapped to 1.
    pub fn resample(&self, grid: usize) -> Vec<f64> {
        let last = self.values.len() - 1;
        (0..=grid)
            .map(|j| {
                // Position j·last/grid split into integer and fractional parts exactly.
                let scaled = j * last;
                let lo = (scaled / grid).min(last - 1);
                let frac = (scaled - lo * grid) as f64 / grid as f64;
                self.values[lo] * (1.0 - frac) + self.values[lo + 1] * frac
            })
            .collect()
    }
}

/// Path coordinate per step, `x(t) = k₀·t·Σ_{i≤t} Δf(i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathTrace {
    /// Path coordinate for `t = 1..T`.
    pub x: Vec<f64>,
    /// Scaling constant.
    pub k0: f64,
}

/// Reconstructed spectrum on a uniform grid of `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumGrid {
    /// `N + 1` nodes from 0 to 1.
    pub nodes: Vec<f64>,
    /// Spectrum values at the nodes.
    pub phi: Vec<f64>,
    /// Regularization weight used.
    pub lambda: f64,
    /// Data misfit `‖Kφ − g‖₂`.
    pub residual: f64,
}

impl SpectrumGrid {
    /// Wraps known spectrum values (no solve), e.g. to feed [`forward_operator`].
    pub fn from_values(phi: Vec<f64>) -> Result<Self> {
        if phi.len() < 2 {
            return Err(Error::InvalidInput("spectrum needs at least two nodes"));
        }
        if phi.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(SpectrumGrid {
            nodes: uniform_nodes(phi.len() - 1),
            phi,
            lambda: 0.0,
            residual: 0.0,
        })
    }

    /// Grid size `N` (number of intervals).
    pub fn grid(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Value at the right endpoint `x = 1`.
    pub fn endpoint(&self) -> f64 {
        self.phi[self.phi.len() - 1]
    }
}

/// Droop reconstructed from yesterday's deviations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActualDroop {
    /// `f*(1) − 1`.
    pub delta_f: f64,
    /// `P*(1) − 1`.
    pub delta_p: f64,
    /// `ΔP / Δf`; serves as both the frequency and the power droop.
    pub k: f64,
}

/// Parameters of the inversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversionConfig {
    /// Path scaling constant `k₀`.
    pub k0: f64,
    /// Grid size `N`.
    pub grid: usize,
    /// Tikhonov weight `λ`.
    pub lambda: f64,
}

impl Default for InversionConfig {
    fn default() -> Self {
        InversionConfig {
            k0: 1.0,
            grid: 200,
            lambda: 1e-6,
        }
    }
}

/// Everything produced while reconstructing the actual droop.
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    /// Frequency path trace.
    pub frequency_path: PathTrace,
    /// Power path trace.
    pub power_path: PathTrace,
    /// Reconstructed frequency spectrum `f*`.
    pub frequency: SpectrumGrid,
    /// Reconstructed power spectrum `P*`.
    pub power: SpectrumGrid,
    /// The actual droop.
    pub droop: ActualDroop,
}

/// `N + 1` uniform nodes `j / N`.
pub fn uniform_nodes(grid: usize) -> Vec<f64> {
    (0..=grid).map(|j| j as f64 / grid as f64).collect()
}

/// Builds the path `x(t) = k₀·t·Σ_{i=1}^{t} Δf(i)`.
pub fn build_path(series: &DeviationSeries, k0: f64) -> Result<PathTrace> {
    if !k0.is_finite() || k0 <= 0.0 {
        return Err(Error::InvalidInput("k0 must be positive"));
    }
    let mut running = 0.0;
    let x = series
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            running += v;
            k0 * (i + 1) as f64 * running
        })
        .collect::<Vec<_>>();
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(PathTrace { x, k0 })
}

#[inline]
fn trapezoid_weight(j: usize, last: usize, h: f64) -> f64 {
    if j == 0 || j == last {
        0.5 * h
    } else {
        h
    }
}

/// Trapezoid discretization of `[1 − x/t]₊`; row `i` is the quadrature of
/// `g(t_i)` and row 0 (`t = 0`) is zero.
pub fn kernel_matrix(grid: usize) -> Matrix {
    let h = 1.0 / grid as f64;
    Matrix::from_fn(grid + 1, grid + 1, |i, j| {
        if i == 0 || j > i {
            return 0.0;
        }
        let t = i as f64 * h;
        let x = j as f64 * h;
        trapezoid_weight(j, i, h) * (1.0 - x / t)
    })
}

fn apply_kernel(phi: &[f64]) -> Vec<f64> {
    let grid = phi.len() - 1;
    let h = 1.0 / grid as f64;
    let mut g = Vec::with_capacity(phi.len());
    g.push(0.0);
    for i in 1..=grid {
        let t = i as f64 * h;
        let s: f64 = (0..=i)
            .map(|j| trapezoid_weight(j, i, h) * (1.0 - j as f64 * h / t) * phi[j])
            .sum();
        g.push(s);
    }
    g
}

/// `g(t_i) = ∫₀^{t_i} (1 − x/t_i) φ(x) dx` on the spectrum's grid; `g(0) = 0`.
pub fn forward_operator(spectrum: &SpectrumGrid) -> Vec<f64> {
    apply_kernel(&spectrum.phi)
}

fn second_difference(grid: usize) -> Matrix {
    Matrix::from_fn(grid - 1, grid + 1, |r, c| match c.wrapping_sub(r) {
        0 | 2 => 1.0,
        1 => -2.0,
        _ => 0.0,
    })
}

/// Tikhonov solution of `Kφ = g` with second-difference smoothing.
///
/// `g` holds data at the `grid + 1` uniform nodes. Solved as the stacked
/// least-squares problem `[K; √λ D²] φ ≈ [g; 0]` by Householder QR, which
/// avoids squaring the condition number of `K`.
pub fn solve_spectrum(g: &[f64], grid: usize, lambda: f64) -> Result<SpectrumGrid> {
    if grid < MIN_GRID {
        return Err(Error::InvalidInput("grid must have at least 16 intervals"));
    }
    if g.len() != grid + 1 {
        return Err(Error::InvalidInput("data length must be grid + 1"));
    }
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(Error::InvalidInput("lambda must be non-negative"));
    }
    if g.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let kernel = kernel_matrix(grid);
    let system = kernel.vstack(&second_difference(grid).scaled(libm::sqrt(lambda)));
    let mut rhs = g.to_vec();
    rhs.resize(system.rows(), 0.0);
    let phi = least_squares(&system, &rhs).ok_or(Error::SingularSystem)?;
    if phi.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularSystem);
    }
    let misfit: Vec<f64> = kernel
        .mul_vec(&phi)
        .iter()
        .zip(g)
        .map(|(a, b)| a - b)
        .collect();
    Ok(SpectrumGrid {
        nodes: uniform_nodes(grid),
        phi,
        lambda,
        residual: norm2(&misfit),
    })
}

/// Reconstructs the level spectrum `1 + ψ` from a deviation series.
pub fn reconstruct_spectrum(
    series: &DeviationSeries,
    grid: usize,
    lambda: f64,
) -> Result<SpectrumGrid> {
    let mut spectrum = solve_spectrum(&series.resample(grid), grid, lambda)?;
    for v in spectrum.phi.iter_mut() {
        *v += 1.0;
    }
    Ok(spectrum)
}

/// Droop from the spectrum endpoints: `Δf = f*(1) − 1`, `ΔP = P*(1) − 1`,
/// `k = ΔP / Δf`.
pub fn droop_from_spectra(frequency: &SpectrumGrid, power: &SpectrumGrid) -> Result<ActualDroop> {
    let delta_f = frequency.endpoint() - 1.0;
    let delta_p = power.endpoint() - 1.0;
    if !delta_f.is_finite() || !delta_p.is_finite() {
        return Err(Error::NonFinite);
    }
    if delta_f.abs() < DEGENERATE_FREQUENCY {
        return Err(Error::DegenerateFrequency);
    }
    Ok(ActualDroop {
        delta_f,
        delta_p,
        k: delta_p / delta_f,
    })
}

/// Full reconstruction: path traces, both spectra, and the actual droop.
pub fn reconstruct(
    frequency: &DeviationSeries,
    power: &DeviationSeries,
    config: &InversionConfig,
) -> Result<Reconstruction> {
    if frequency.len() != power.len() {
        return Err(Error::InvalidInput(
            "frequency and power series differ in length",
        ));
    }
    let frequency_path = build_path(frequency, config.k0)?;
    let power_path = build_path(power, config.k0)?;
    let f_spec = reconstruct_spectrum(frequency, config.grid, config.lambda)?;
    let p_spec = reconstruct_spectrum(power, config.grid, config.lambda)?;
    let droop = droop_from_spectra(&f_spec, &p_spec)?;
    Ok(Reconstruction {
        frequency_path,
        power_path,
        frequency: f_spec,
        power: p_spec,
        droop,
    })
}

/// The actual droop from frequency and power deviation series.
pub fn actual_droop(
    frequency: &DeviationSeries,
    power: &DeviationSeries,
    config: &InversionConfig,
) -> Result<ActualDroop> {
    reconstruct(frequency, power, config).map(|r| r.droop)
}
