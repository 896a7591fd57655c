//! Resonance droops: the Weierstrass discriminant on the frequency side and
//! the wing proper time on the power side.
//!
//! Lattices use the classical half-period convention: `ω₁, ω₂` generate the
//! period lattice `{2mω₁ + 2nω₂}` and
//!
//! ```text
//! g₂ = 60 Σ' w⁻⁴,   g₃ = 140 Σ' w⁻⁶,   Δ = g₂³ − 27 g₃²
//! ```

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::norm::norm_droop;
use crate::path::{Mechanism, PathEstimate};
use crate::{Error, Result};
use alloc::vec::Vec;

/// `|Im τ|` below this counts as a real period ratio.
pub const DEGENERATE_TAU: f64 = 1e-12;
/// Nome magnitudes at or above `1 − 1e-6` are rejected.
pub const MAX_NOME: f64 = 1.0 - 1e-6;
/// Relative size of the last q-series term kept.
pub const QSERIES_TOLERANCE: f64 = 1e-15;
/// Hard cap on q-series terms.
pub const QSERIES_MAX_TERMS: usize = 10_000;
/// Discriminants below this magnitude count as a collapsed lattice.
pub const ZERO_DISCRIMINANT: f64 = 1e-300;

/// Period lattice with its invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeierstrassLattice {
    /// First half-period.
    pub omega1: Complex64,
    /// Second half-period; `Im(ω₂/ω₁) > 0`.
    pub omega2: Complex64,
    /// Invariant `g₂`.
    pub g2: Complex64,
    /// Invariant `g₃`.
    pub g3: Complex64,
    /// Discriminant `g₂³ − 27 g₃²`.
    pub disc: Complex64,
}

impl WeierstrassLattice {
    fn with_invariants(omega1: Complex64, omega2: Complex64, g2: Complex64, g3: Complex64) -> Self {
        WeierstrassLattice {
            omega1,
            omega2,
            g2,
            g3,
            disc: g2 * g2 * g2 - 27.0 * g3 * g3,
        }
    }
}

fn oriented(omega1: Complex64, omega2: Complex64) -> Result<(Complex64, Complex64)> {
    if !(omega1.re.is_finite()
        && omega1.im.is_finite()
        && omega2.re.is_finite()
        && omega2.im.is_finite())
    {
        return Err(Error::NonFinite);
    }
    if omega1.norm() == 0.0 || omega2.norm() == 0.0 {
        return Err(Error::DegenerateLattice);
    }
    let tau = omega2 / omega1;
    if tau.im.abs() < DEGENERATE_TAU {
        return Err(Error::DegenerateLattice);
    }
    Ok(if tau.im > 0.0 {
        (omega1, omega2)
    } else {
        (omega2, omega1)
    })
}

/// Lagrange reduction of an oriented basis: afterwards `|a| ≤ |b|`,
/// `|Re(b/a)| ≤ 1/2` and `Im(b/a) > 0`. The lattice is unchanged.
fn reduce(mut a: Complex64, mut b: Complex64) -> (Complex64, Complex64) {
    for _ in 0..10_000 {
        if b.norm_sqr() < a.norm_sqr() {
            core::mem::swap(&mut a, &mut b);
        }
        let mu = libm::round((b * a.conj()).re / a.norm_sqr());
        if mu == 0.0 {
            break;
        }
        b -= a * mu;
    }
    if (b / a).im < 0.0 {
        b = -b;
    }
    (a, b)
}

/// Invariants from the Eisenstein q-series in the nome `q = exp(iπτ)`:
///
/// ```text
/// g₂ = π⁴/(12 ω₁⁴) · (1 + 240 Σ n³ q²ⁿ/(1 − q²ⁿ))
/// g₃ = π⁶/(216 ω₁⁶) · (1 − 504 Σ n⁵ q²ⁿ/(1 − q²ⁿ))
/// ```
///
/// The basis is first reduced so `Im τ ≥ √3/2`, which keeps `|q| < 0.07`.
pub fn invariants_qseries(omega1: Complex64, omega2: Complex64) -> Result<WeierstrassLattice> {
    let (omega1, omega2) = oriented(omega1, omega2)?;
    let (a, b) = reduce(omega1, omega2);
    let tau = b / a;
    let q = (Complex64::i() * PI * tau).exp();
    if q.norm() >= MAX_NOME {
        return Err(Error::DegenerateLattice);
    }
    let q2 = q * q;

    let mut s4 = Complex64::new(0.0, 0.0);
    let mut s6 = Complex64::new(0.0, 0.0);
    let mut q2n = Complex64::new(1.0, 0.0);
    for n in 1..=QSERIES_MAX_TERMS {
        q2n *= q2;
        let ratio = q2n / (1.0 - q2n);
        let nf = n as f64;
        let t4 = ratio * (nf * nf * nf);
        let t6 = t4 * (nf * nf);
        s4 += t4;
        s6 += t6;
        let e4_scale = (1.0 + 240.0 * s4).norm().max(1.0);
        let e6_scale = (1.0 - 504.0 * s6).norm().max(1.0);
        if 240.0 * t4.norm() < QSERIES_TOLERANCE * e4_scale
            && 504.0 * t6.norm() < QSERIES_TOLERANCE * e6_scale
        {
            break;
        }
    }
    let e4 = 1.0 + 240.0 * s4;
    let e6 = 1.0 - 504.0 * s6;
    let g2 = e4 * (libm::pow(PI, 4.0) / 12.0) / a.powi(4);
    let g3 = e6 * (libm::pow(PI, 6.0) / 216.0) / a.powi(6);
    Ok(WeierstrassLattice::with_invariants(omega1, omega2, g2, g3))
}

/// Invariants by direct summation over `w = 2mω₁ + 2nω₂`, `|m|, |n| ≤ M`.
///
/// Slow to converge (the truncation error decays like `M⁻²`); kept as an
/// independent check on [`invariants_qseries`].
pub fn invariants_latticesum(
    omega1: Complex64,
    omega2: Complex64,
    radius: usize,
) -> Result<WeierstrassLattice> {
    if radius < 20 {
        return Err(Error::InvalidInput(
            "lattice-sum radius must be at least 20",
        ));
    }
    let (omega1, omega2) = oriented(omega1, omega2)?;
    let m_max = radius as i64;
    // Sum shells from the outside in so small terms accumulate first.
    let mut s4 = Complex64::new(0.0, 0.0);
    let mut s6 = Complex64::new(0.0, 0.0);
    let mut shell: Vec<(i64, i64)> = Vec::new();
    for k in (1..=m_max).rev() {
        shell.clear();
        for j in -k..=k {
            shell.push((k, j));
            shell.push((-k, j));
        }
        for j in -k + 1..k {
            shell.push((j, k));
            shell.push((j, -k));
        }
        for &(m, n) in &shell {
            let w = omega1 * (2 * m) as f64 + omega2 * (2 * n) as f64;
            let w2 = w * w;
            let w4 = w2 * w2;
            let inv4 = w4.inv();
            s4 += inv4;
            s6 += inv4 / w2;
        }
    }
    Ok(WeierstrassLattice::with_invariants(
        omega1,
        omega2,
        60.0 * s4,
        140.0 * s6,
    ))
}

/// Horizontal and vertical wing speeds per step.
#[derive(Debug, Clone, PartialEq)]
pub struct WingTrace {
    u: Vec<f64>,
    v: Vec<f64>,
}

impl WingTrace {
    /// Validates equal, non-zero lengths, finiteness, and `v_i ≠ 0`.
    pub fn new(u: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if u.len() != v.len() || u.is_empty() {
            return Err(Error::InvalidInput(
                "wing trace needs equal, non-zero lengths",
            ));
        }
        if u.iter().chain(&v).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        if v.contains(&0.0) {
            return Err(Error::ZeroVerticalSpeed);
        }
        Ok(WingTrace { u, v })
    }

    /// Horizontal speeds.
    pub fn u(&self) -> &[f64] {
        &self.u
    }

    /// Vertical speeds.
    pub fn v(&self) -> &[f64] {
        &self.v
    }

    /// Number of steps `T`.
    pub fn len(&self) -> usize {
        self.u.len()
    }

    /// Always false for a validated trace.
    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }
}

/// Internal and external potentials of the two-atom picture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialPair {
    /// `V_in = |Δ|^(−1/12)`.
    pub v_in: f64,
    /// `V_out = Δτ²`.
    pub v_out: f64,
}

impl PotentialPair {
    /// Both potentials must be strictly positive and finite.
    pub fn new(v_in: f64, v_out: f64) -> Result<Self> {
        if !v_in.is_finite() || !v_out.is_finite() {
            return Err(Error::NonFinite);
        }
        if v_in <= 0.0 || v_out <= 0.0 {
            return Err(Error::InvalidInput("potentials must be positive"));
        }
        Ok(PotentialPair { v_in, v_out })
    }
}

/// Frequency-side resonance droop `[|Δ|^(−1/12)]₀` and `V_in = |Δ|^(−1/12)`.
pub fn droop_resonance_f(lattice: &WeierstrassLattice) -> Result<(f64, f64)> {
    let abs_disc = lattice.disc.norm();
    if abs_disc.is_nan() {
        return Err(Error::NonFinite);
    }
    if abs_disc < ZERO_DISCRIMINANT {
        return Err(Error::ZeroDiscriminant);
    }
    let v_in = libm::pow(abs_disc, -1.0 / 12.0);
    Ok((norm_droop(v_in)?, v_in))
}

/// Wing proper time `Δτ² = Σ (1 − (u_i/v_i)²)`.
pub fn proper_time_sq(wing: &WingTrace) -> f64 {
    wing.u
        .iter()
        .zip(&wing.v)
        .map(|(u, v)| {
            let r = u / v;
            1.0 - r * r
        })
        .sum()
}

/// Power-side resonance droop `[Δτ²]₀` and `V_out = Δτ²`.
pub fn droop_resonance_p(dtau2: f64) -> Result<(f64, f64)> {
    Ok((norm_droop(dtau2)?, dtau2))
}

/// Resonance paths `L_{f,1}`, `L_{p,1}` and their Euclidean total `L_m`.
pub fn molecule_paths(
    k_prev_f: f64,
    k_prev_p: f64,
    lattice: &WeierstrassLattice,
    wing: &WingTrace,
) -> Result<(PathEstimate, f64)> {
    let (k_f, _) = droop_resonance_f(lattice)?;
    let (k_p, _) = droop_resonance_p(proper_time_sq(wing))?;
    let paths = PathEstimate::from_droops(Mechanism::Resonance, k_prev_f, k_f, k_prev_p, k_p)?;
    Ok((paths, paths.euclidean()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use core::f64::consts::{LN_2, SQRT_2};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    fn hexagonal() -> Complex64 {
        c(libm::cos(PI / 3.0), libm::sin(PI / 3.0))
    }

    #[test]
    fn square_lattice_has_zero_g3() {
        let lat = invariants_qseries(c(1.0, 0.0), c(0.0, 1.0)).unwrap();
        assert!(lat.g3.norm() < 1e-8);
        let sum = invariants_latticesum(c(1.0, 0.0), c(0.0, 1.0), 60).unwrap();
        assert!(sum.g3.norm() < 1e-4);
    }

    #[test]
    fn hexagonal_lattice_has_zero_g2() {
        let lat = invariants_qseries(c(1.0, 0.0), hexagonal()).unwrap();
        assert!(lat.g2.norm() < 1e-8);
        // A square truncation breaks the 60° symmetry, so the direct sum only
        // approaches zero like M⁻².
        let m60 = invariants_latticesum(c(1.0, 0.0), hexagonal(), 60)
            .unwrap()
            .g2
            .norm();
        let m120 = invariants_latticesum(c(1.0, 0.0), hexagonal(), 120)
            .unwrap()
            .g2
            .norm();
        assert!(m60 < 1e-3, "{m60}");
        assert!(m120 < m60 / 3.0, "{m120} vs {m60}");
    }

    #[test]
    fn qseries_matches_lattice_sum() {
        let q = invariants_qseries(c(1.0, 0.0), c(0.0, 2.0)).unwrap();
        let s = invariants_latticesum(c(1.0, 0.0), c(0.0, 2.0), 100).unwrap();
        assert!(rel(s.g2, q.g2) < 1e-4, "{}", rel(s.g2, q.g2));
        assert!(rel(s.g3, q.g3) < 1e-4, "{}", rel(s.g3, q.g3));
    }

    #[test]
    fn lattice_sum_truncation_self_consistency() {
        // The square-truncated w⁻⁴ sum converges like M⁻², so doubling M
        // moves g₂ by about 2e-6 relative; g₃ converges much faster.
        let a = invariants_latticesum(c(1.0, 0.0), c(0.0, 2.0), 100).unwrap();
        let b = invariants_latticesum(c(1.0, 0.0), c(0.0, 2.0), 200).unwrap();
        assert!(rel(a.g2, b.g2) < 1e-5);
        assert!(rel(a.g3, b.g3) < 1e-6);
    }

    #[test]
    fn orientation_and_basis_do_not_matter() {
        let a = invariants_qseries(c(1.0, 0.0), c(0.3, 1.1)).unwrap();
        let swapped = invariants_qseries(c(0.3, 1.1), c(1.0, 0.0)).unwrap();
        // Same lattice, different basis: (ω₁, ω₂) → (ω₁, ω₂ + 3ω₁).
        let sheared = invariants_qseries(c(1.0, 0.0), c(3.3, 1.1)).unwrap();
        for other in [swapped, sheared] {
            assert!(rel(other.g2, a.g2) < 1e-12);
            assert!(rel(other.g3, a.g3) < 1e-12);
        }
        assert!((swapped.omega2 / swapped.omega1).im > 0.0);
    }

    #[test]
    fn degenerate_lattices_rejected() {
        assert_eq!(
            invariants_qseries(c(1.0, 0.0), c(2.0, 0.0)),
            Err(Error::DegenerateLattice)
        );
        assert_eq!(
            invariants_qseries(c(0.0, 0.0), c(0.0, 1.0)),
            Err(Error::DegenerateLattice)
        );
        assert_eq!(
            invariants_latticesum(c(1.0, 0.0), c(3.0, 1e-13), 20),
            Err(Error::DegenerateLattice)
        );
        assert!(matches!(
            invariants_latticesum(c(1.0, 0.0), c(0.0, 1.0), 5),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn discriminant_identity() {
        let lat = invariants_qseries(c(0.7, 0.2), c(-0.1, 1.3)).unwrap();
        let expected = lat.g2.powi(3) - 27.0 * lat.g3.powi(2);
        assert!(rel(lat.disc, expected) <= 8.0 * f64::EPSILON);
    }

    #[test]
    fn homogeneity() {
        let (w1, w2) = (c(0.9, 0.1), c(0.2, 1.4));
        let base = invariants_qseries(w1, w2).unwrap();
        for s in [2.0, 3.0, 0.5] {
            let scaled = invariants_qseries(w1 * s, w2 * s).unwrap();
            assert!(rel(scaled.g2, base.g2 * libm::pow(s, -4.0)) < 1e-12);
            assert!(rel(scaled.g3, base.g3 * libm::pow(s, -6.0)) < 1e-12);
            assert!(rel(scaled.disc, base.disc * libm::pow(s, -12.0)) < 1e-12);
            let (_, v0) = droop_resonance_f(&base).unwrap();
            let (_, v1) = droop_resonance_f(&scaled).unwrap();
            assert!((v1 / v0 - s).abs() < 1e-12);
        }
    }

    #[test]
    fn droop_f_invariant_under_power_of_two_rescaling() {
        let (w1, w2) = (c(1.0, 0.0), c(0.25, 0.9));
        let (k0, _) = droop_resonance_f(&invariants_qseries(w1, w2).unwrap()).unwrap();
        for s in [0.25, 0.5, 2.0, 8.0] {
            let (k, _) = droop_resonance_f(&invariants_qseries(w1 * s, w2 * s).unwrap()).unwrap();
            assert!((k - k0).abs() < 1e-12);
        }
    }

    fn lattice_with_disc(disc: Complex64) -> WeierstrassLattice {
        WeierstrassLattice {
            omega1: c(1.0, 0.0),
            omega2: c(0.0, 1.0),
            g2: c(0.0, 0.0),
            g3: c(0.0, 0.0),
            disc,
        }
    }

    #[test]
    fn droop_resonance_f_examples() {
        assert_eq!(
            droop_resonance_f(&lattice_with_disc(c(1.0, 0.0))),
            Ok((2.0, 1.0))
        );
        let (k, v) = droop_resonance_f(&lattice_with_disc(c(4096.0, 0.0))).unwrap();
        assert!((v - 0.5).abs() < 1e-15 && (k - 2.0).abs() < 1e-14);
        assert_eq!(
            droop_resonance_f(&lattice_with_disc(c(0.0, 0.0))),
            Err(Error::ZeroDiscriminant)
        );
    }

    #[test]
    fn proper_time_examples() {
        let w = WingTrace::new(vec![0.0; 4], vec![1.0; 4]).unwrap();
        assert_eq!(proper_time_sq(&w), 4.0);
        let w = WingTrace::new(vec![1.5, -2.0], vec![1.5, -2.0]).unwrap();
        assert_eq!(proper_time_sq(&w), 0.0);
        let w = WingTrace::new(vec![1.0, 2.0], vec![2.0, 2.0]).unwrap();
        assert_eq!(proper_time_sq(&w), 0.75);
        assert_eq!(
            WingTrace::new(vec![1.0], vec![0.0]),
            Err(Error::ZeroVerticalSpeed)
        );
    }

    #[test]
    fn proper_time_sign_flip_invariance() {
        let u = vec![0.3, -1.2, 0.8];
        let v = vec![1.0, 2.5, -0.7];
        let base = proper_time_sq(&WingTrace::new(u.clone(), v.clone()).unwrap());
        for i in 0..3 {
            let (mut u2, mut v2) = (u.clone(), v.clone());
            u2[i] = -u2[i];
            v2[i] = -v2[i];
            assert_eq!(proper_time_sq(&WingTrace::new(u2, v2).unwrap()), base);
        }
    }

    #[test]
    fn droop_resonance_p_examples() {
        assert_eq!(droop_resonance_p(4.0), Ok((2.0, 4.0)));
        assert_eq!(droop_resonance_p(PI), Ok((PI, PI)));
        assert_eq!(droop_resonance_p(0.0), Err(Error::NonPositiveDroop));
        assert_eq!(droop_resonance_p(-0.5), Err(Error::NonPositiveDroop));
    }

    #[test]
    fn molecule_paths_chained() {
        let wing = WingTrace::new(vec![0.0; 4], vec![1.0; 4]).unwrap();
        let (paths, l_m) =
            molecule_paths(2.0, 2.0, &lattice_with_disc(c(1.0, 0.0)), &wing).unwrap();
        assert!((paths.l_f - LN_2).abs() < 1e-15);
        assert!((paths.l_p - LN_2).abs() < 1e-15);
        assert!((l_m - SQRT_2 * LN_2).abs() < 1e-15);
        assert!((l_m - 0.9803).abs() < 1e-4);
        assert_eq!(paths.mechanism, Mechanism::Resonance);
    }

    #[test]
    fn molecule_paths_propagates_errors() {
        let wing = WingTrace::new(vec![1.0; 4], vec![1.0; 4]).unwrap();
        assert_eq!(
            molecule_paths(2.0, 2.0, &lattice_with_disc(c(1.0, 0.0)), &wing),
            Err(Error::NonPositiveDroop)
        );
    }
}
