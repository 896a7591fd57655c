//! Balance droops: redundancy production on the frequency side and entropy
//! production on the power side.

use core::f64::consts::PI;

use crate::norm::norm_droop;
use crate::path::{Mechanism, PathEstimate};
use crate::poisson::PoissonModel;
use crate::{Error, Result};

/// Number of colour values; fixes the amplitude of `ΔR = 8 cos(π c₅)`.
pub const COLOR_VALUES: f64 = 8.0;
/// `|cos v₀|` below this counts as a secant pole.
pub const GRAZING_COS: f64 = 1e-12;

/// Five colours `c₁..c₅`, each in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColorVector {
    c: [f64; 5],
}

impl ColorVector {
    /// Validates `0 ≤ cᵢ < 1`.
    pub fn new(c: [f64; 5]) -> Result<Self> {
        if c.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        if c.iter().any(|v| !(0.0..1.0).contains(v)) {
            return Err(Error::InvalidInput("colours must lie in [0, 1)"));
        }
        Ok(ColorVector { c })
    }

    /// All five colours.
    pub fn values(&self) -> &[f64; 5] {
        &self.c
    }

    /// `c₁..c₄`, the regression inputs.
    pub fn energy(&self) -> [f64; 4] {
        [self.c[0], self.c[1], self.c[2], self.c[3]]
    }
}

/// Redundancy before and after production.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RedundancyResult {
    /// `R(0)`, the regressed count.
    pub r0: f64,
    /// `ΔR = 8 cos(π c₅)`.
    pub dr: f64,
    /// `R(1) = R(0) + ΔR`.
    pub r1: f64,
}

/// Receiver geometry and entropy before and after production.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyResult {
    /// Outer channel radius `R₁ = π c₁ / 8`.
    pub r1_radius: f64,
    /// Inner channel radius `R₂ = π c₂`.
    pub r2_radius: f64,
    /// Scan speed in radians.
    pub v0: f64,
    /// `S(0) = π R₁² / 4`.
    pub s0: f64,
    /// Truncated-cone area `π (R₁² − R₂²) sec(v₀) / 16`.
    pub ds: f64,
    /// `S(1) = S(0) + ΔS`.
    pub s1: f64,
    /// `R* = √S(1)`.
    pub r_star: f64,
}

/// `ΔR = 8 cos(π c₅)`.
pub fn redundancy_production(c5: f64) -> f64 {
    COLOR_VALUES * libm::cos(PI * c5)
}

/// Redundancy at `τ = 1` from the regressed redundancy and colour `c₅`.
pub fn redundancy(model: &PoissonModel, colors: &ColorVector) -> RedundancyResult {
    let r0 = model.predict(&colors.energy());
    let dr = redundancy_production(colors.values()[4]);
    RedundancyResult {
        r0,
        dr,
        r1: r0 + dr,
    }
}

/// Frequency-side balance droop `[R(1)]₀`.
pub fn droop_balance_f(res: &RedundancyResult) -> Result<f64> {
    norm_droop(res.r1)
}

/// Entropy at `τ = 1` registered by the two-channel receiver.
///
/// `(1 + tan² v₀)^(1/2)` is evaluated as `1/|cos v₀|`.
pub fn entropy(colors: &ColorVector, v0: f64) -> Result<EntropyResult> {
    if !v0.is_finite() {
        return Err(Error::NonFinite);
    }
    let c = colors.values();
    let r1 = PI * c[0] / 8.0;
    let r2 = PI * c[1];
    if r1 <= r2 {
        return Err(Error::ChannelOrder);
    }
    let cos = libm::cos(v0);
    if cos.abs() < GRAZING_COS {
        return Err(Error::GrazingScan);
    }
    let sec = 1.0 / cos.abs();
    let s0 = PI * r1 * r1 / 4.0;
    let ds = PI * (r1 * r1 - r2 * r2) * sec / 16.0;
    let s1 = s0 + ds;
    Ok(EntropyResult {
        r1_radius: r1,
        r2_radius: r2,
        v0,
        s0,
        ds,
        s1,
        r_star: libm::sqrt(s1),
    })
}

/// Power-side balance droop `[R*]₀`.
pub fn droop_balance_p(res: &EntropyResult) -> Result<f64> {
    norm_droop(res.r_star)
}

/// Balance paths and their ropelength total `L_b`.
pub fn radiation_paths(
    k_prev_f: f64,
    k_prev_p: f64,
    model: &PoissonModel,
    colors: &ColorVector,
    v0: f64,
) -> Result<(PathEstimate, f64)> {
    let k_f = droop_balance_f(&redundancy(model, colors))?;
    let k_p = droop_balance_p(&entropy(colors, v0)?)?;
    let paths = PathEstimate::from_droops(Mechanism::Balance, k_prev_f, k_f, k_prev_p, k_p)?;
    Ok((paths, paths.ropelength()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poisson::Link;
    use core::f64::consts::{FRAC_PI_2, LN_2};
    use proptest::prelude::*;

    fn constant_model(mean: f64) -> PoissonModel {
        PoissonModel {
            beta: [mean, 0.0, 0.0, 0.0, 0.0],
            link: Link::Identity,
        }
    }

    fn colors(c1: f64, c2: f64, c5: f64) -> ColorVector {
        ColorVector::new([c1, c2, 0.3, 0.4, c5]).unwrap()
    }

    #[test]
    fn color_validation() {
        assert!(ColorVector::new([0.0, 0.5, 0.9, 0.1, 0.99]).is_ok());
        assert!(ColorVector::new([1.0, 0.5, 0.9, 0.1, 0.2]).is_err());
        assert!(ColorVector::new([-0.1, 0.5, 0.9, 0.1, 0.2]).is_err());
    }

    #[test]
    fn redundancy_examples() {
        assert!(redundancy_production(0.5).abs() < 1e-15);
        assert_eq!(redundancy_production(0.0), 8.0);
        let r = redundancy(&constant_model(2.0), &colors(0.8, 0.05, 2.0 / 3.0));
        assert!((r.r1 + 2.0).abs() < 1e-14);
        assert_eq!(r.r1, r.r0 + r.dr);
        assert_eq!(droop_balance_f(&r), Err(Error::NonPositiveDroop));
    }

    #[test]
    fn droop_balance_f_examples() {
        let r = |r1| RedundancyResult {
            r0: r1,
            dr: 0.0,
            r1,
        };
        assert_eq!(droop_balance_f(&r(10.0)), Ok(2.5));
        assert_eq!(droop_balance_f(&r(PI)), Ok(PI));
        assert_eq!(droop_balance_f(&r(-2.0)), Err(Error::NonPositiveDroop));
    }

    #[test]
    fn entropy_worked_example() {
        let e = entropy(&colors(0.8, 0.05, 0.5), 0.0).unwrap();
        assert!((e.r1_radius - 0.1 * PI).abs() < 1e-15);
        assert!((e.r2_radius - 0.05 * PI).abs() < 1e-15);
        assert!((e.s0 - 0.077516).abs() < 1e-6);
        assert!((e.ds - 0.014534).abs() < 1e-6);
        assert!((e.s1 - 0.092050).abs() < 1e-6);
        assert!((e.r_star - 0.30340).abs() < 1e-5);
        assert_eq!(e.s1, e.s0 + e.ds);
        assert!((droop_balance_p(&e).unwrap() - 0.30340 * 8.0).abs() < 1e-4);
    }

    #[test]
    fn entropy_vanishing_annulus() {
        // R₂ → R₁ from below: c₂ → c₁/8.
        let e = entropy(&colors(0.8, 0.1 - 1e-12, 0.5), 0.0).unwrap();
        assert!(e.ds < 1e-10);
        assert!((e.s1 - e.s0).abs() < 1e-10);
    }

    #[test]
    fn entropy_errors() {
        assert_eq!(
            entropy(&colors(0.8, 0.1, 0.5), 0.0),
            Err(Error::ChannelOrder)
        );
        assert_eq!(
            entropy(&colors(0.8, 0.5, 0.5), 0.0),
            Err(Error::ChannelOrder)
        );
        assert_eq!(
            entropy(&colors(0.8, 0.05, 0.5), FRAC_PI_2),
            Err(Error::GrazingScan)
        );
        // c₂ = 0 is an accepted degenerate inner channel.
        assert!(entropy(&colors(0.8, 0.0, 0.5), 0.0).is_ok());
    }

    #[test]
    fn droop_balance_p_examples() {
        let e = |r_star: f64| EntropyResult {
            r1_radius: 1.0,
            r2_radius: 0.0,
            v0: 0.0,
            s0: 0.0,
            ds: r_star * r_star,
            s1: r_star * r_star,
            r_star,
        };
        assert_eq!(droop_balance_p(&e(PI)), Ok(PI));
        assert_eq!(droop_balance_p(&e(1.0)), Ok(2.0));
    }

    #[test]
    fn radiation_paths_chained() {
        let (paths, l_b) =
            radiation_paths(2.0, 2.0, &constant_model(5.0), &colors(0.8, 0.05, 0.5), 0.0).unwrap();
        // k_f = [5]₀ = 2.5; k_p = [R*]₀ = 8 R*.
        let e = entropy(&colors(0.8, 0.05, 0.5), 0.0).unwrap();
        let l_f = 0.5 * (LN_2 + libm::log(2.5));
        let l_p = 0.5 * (LN_2 + libm::log(8.0 * e.r_star));
        assert!((paths.l_f - l_f).abs() < 1e-12);
        assert!((paths.l_p - l_p).abs() < 1e-12);
        assert!((paths.l_f - 0.8047).abs() < 1e-4);
        assert!((paths.l_p - 0.7899).abs() < 1e-4);
        assert!((l_b - 0.7929).abs() < 1e-4);
    }

    proptest! {
        #[test]
        fn secant_identity(v0 in -1.4f64..1.4) {
            let t = libm::tan(v0);
            let lhs = libm::sqrt(1.0 + t * t);
            let rhs = 1.0 / libm::cos(v0).abs();
            prop_assert!((lhs - rhs).abs() <= 8.0 * f64::EPSILON * rhs);
        }

        #[test]
        fn redundancy_production_bounded_and_decreasing(a in 0.0f64..1.0, b in 0.0f64..1.0) {
            prop_assert!(redundancy_production(a).abs() <= 8.0);
            if a < b - 1e-9 {
                prop_assert!(redundancy_production(a) > redundancy_production(b));
            }
        }

        #[test]
        fn entropy_grows(c1 in 0.01f64..0.99, frac in 0.0f64..0.99, v0 in -1.5f64..1.5) {
            let c2 = c1 / 8.0 * frac;
            let e = entropy(&ColorVector::new([c1, c2, 0.0, 0.0, 0.0]).unwrap(), v0).unwrap();
            prop_assert!(e.s1 > e.s0 && e.s0 > 0.0);
            prop_assert_eq!(e.r_star, libm::sqrt(e.s1));
        }
    }
}
