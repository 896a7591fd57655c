//! Power-of-two norming into `(π/2, π]` and the droops derived from it.
//!
//! The intervals `(π·2^(n-1), π·2^n]` tile the positive reals, so every
//! positive finite `x` has exactly one exponent `n` with `x / 2^n` in
//! `(π/2, π]`. Scaling by powers of two is exact in binary floating point,
//! which makes the mantissa an exact function of `x` as well.

use core::f64::consts::{FRAC_PI_2, PI};

use crate::{Error, Result};

/// Result of norming a value into `(π/2, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormedValue {
    /// `source / 2^exponent`; lies in `(π/2, π]` for positive sources and
    /// in `[-π, -π/2)` for negative ones.
    pub mantissa: f64,
    /// Power-of-two exponent.
    pub exponent: i32,
    /// The value that was normed.
    pub source: f64,
}

impl NormedValue {
    /// `mantissa · 2^exponent`.
    pub fn reconstruct(&self) -> f64 {
        libm::scalbn(self.mantissa, self.exponent)
    }
}

/// Whether `m` lies in the half-open interval `(π/2, π]`.
#[inline]
pub fn in_norm_interval(m: f64) -> bool {
    m > FRAC_PI_2 && m <= PI
}

fn norm_positive(x: f64) -> NormedValue {
    debug_assert!(x > 0.0 && x.is_finite());
    // Closed-form guess; floating error in log2 can be off by one near the
    // interval endpoints, so check containment and step.
    let guess = libm::ceil(libm::log2(x) - libm::log2(PI)) as i32;
    for n in [guess, guess - 1, guess + 1, guess - 2, guess + 2] {
        let m = libm::scalbn(x, -n);
        if in_norm_interval(m) {
            return NormedValue {
                mantissa: m,
                exponent: n,
                source: x,
            };
        }
    }
    // log2 of a finite positive f64 is never off by more than one.
    unreachable!("norming failed to bracket {x}")
}

/// Norms `x` into `(π/2, π]` by dividing by a power of two.
///
/// Negative inputs keep their sign: the result is `-[|x|]₀` with the
/// exponent of `|x|`.
pub fn norm0(x: f64) -> Result<NormedValue> {
    if !x.is_finite() {
        return Err(Error::NonFinite);
    }
    if x == 0.0 {
        return Err(Error::ZeroInput);
    }
    let normed = norm_positive(x.abs());
    Ok(NormedValue {
        mantissa: normed.mantissa.copysign(x),
        exponent: normed.exponent,
        source: x,
    })
}

/// Norming for droop call sites, which only accept strictly positive values.
pub fn norm_droop(x: f64) -> Result<f64> {
    if x.is_nan() || x == f64::INFINITY {
        return Err(Error::NonFinite);
    }
    if x <= 0.0 {
        return Err(Error::NonPositiveDroop);
    }
    Ok(norm_positive(x).mantissa)
}

/// One stochastic-approximation step: `ΔP = -[ΔV]₀`.
pub fn stochastic_step(dv: f64) -> Result<f64> {
    norm0(dv).map(|n| -n.mantissa)
}

/// Droops set by synchronization: `k_f = [Δτ²]₀` and `k_p = [ΔV/Δτ]₀`.
pub fn droops_from_potential(dv: f64, dtau: f64) -> Result<(f64, f64)> {
    if !dv.is_finite() || !dtau.is_finite() {
        return Err(Error::NonFinite);
    }
    if dtau == 0.0 || dv == 0.0 {
        return Err(Error::ZeroInput);
    }
    if dtau < 0.0 {
        return Err(Error::InvalidInput("proper-time step must be positive"));
    }
    let dtau2 = dtau * dtau;
    if dtau2 == 0.0 {
        return Err(Error::ZeroInput);
    }
    let ratio = dv / dtau;
    if ratio == 0.0 {
        return Err(Error::ZeroInput);
    }
    Ok((norm_droop(dtau2)?, norm_droop(ratio)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Brute-force scan over exponents; independent of the closed form.
    fn scan(x: f64) -> Option<(f64, i32)> {
        let mut hits = (-1100..=1100)
            .map(|n| (libm::scalbn(x, -n), n))
            .filter(|(m, _)| in_norm_interval(*m));
        let first = hits.next();
        assert!(hits.next().is_none(), "exponent not unique for {x}");
        first
    }

    #[test]
    fn scan_oracle_values() {
        assert_eq!(scan(10.0), Some((2.5, 2)));
        assert_eq!(scan(1.0), Some((2.0, -1)));
        assert_eq!(scan(PI), Some((PI, 0)));
        assert_eq!(scan(4.0 * PI), Some((PI, 2)));
    }

    #[test]
    fn norm0_examples() {
        let n = norm0(PI).unwrap();
        assert_eq!((n.mantissa, n.exponent), (PI, 0));
        let n = norm0(4.0 * PI).unwrap();
        assert_eq!((n.mantissa, n.exponent), (PI, 2));
        let n = norm0(10.0).unwrap();
        assert_eq!((n.mantissa, n.exponent), (2.5, 2));
        let n = norm0(1.0).unwrap();
        assert_eq!((n.mantissa, n.exponent), (2.0, -1));
        assert_eq!(norm0(0.0), Err(Error::ZeroInput));
        assert_eq!(norm0(-0.0), Err(Error::ZeroInput));
        assert_eq!(norm0(f64::NAN), Err(Error::NonFinite));
    }

    #[test]
    fn interval_endpoints() {
        // π/2 itself is excluded and lands on π one exponent down.
        let n = norm0(FRAC_PI_2).unwrap();
        assert_eq!((n.mantissa, n.exponent), (PI, -1));
        let just_above = f64::from_bits(FRAC_PI_2.to_bits() + 1);
        let n = norm0(just_above).unwrap();
        assert_eq!((n.mantissa, n.exponent), (just_above, 0));
    }

    #[test]
    fn extremes() {
        for x in [f64::MIN_POSITIVE, 5e-324, f64::MAX, 1e-300, 1e300] {
            let n = norm0(x).unwrap();
            assert!(in_norm_interval(n.mantissa), "{x}");
            assert_eq!(n.reconstruct(), x);
        }
    }

    #[test]
    fn negative_is_sign_preserving() {
        let n = norm0(-10.0).unwrap();
        assert_eq!((n.mantissa, n.exponent), (-2.5, 2));
        assert_eq!(n.reconstruct(), -10.0);
    }

    #[test]
    fn stochastic_step_examples() {
        assert_eq!(stochastic_step(PI), Ok(-PI));
        assert_eq!(stochastic_step(-PI), Ok(PI));
        assert_eq!(stochastic_step(0.0), Err(Error::ZeroInput));
    }

    #[test]
    fn droops_from_potential_examples() {
        assert_eq!(droops_from_potential(PI, 1.0), Ok((2.0, PI)));
        assert_eq!(droops_from_potential(2.0 * PI, 1.0), Ok((2.0, PI)));
        assert_eq!(droops_from_potential(0.0, 1.0), Err(Error::ZeroInput));
        assert_eq!(droops_from_potential(1.0, 0.0), Err(Error::ZeroInput));
        assert_eq!(
            droops_from_potential(-1.0, 1.0),
            Err(Error::NonPositiveDroop)
        );
        assert!(matches!(
            droops_from_potential(1.0, -1.0),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn norm_droop_rejects_non_positive() {
        assert_eq!(norm_droop(0.0), Err(Error::NonPositiveDroop));
        assert_eq!(norm_droop(-3.0), Err(Error::NonPositiveDroop));
        assert_eq!(norm_droop(10.0), Ok(2.5));
    }

    proptest! {
        #[test]
        fn matches_scan_oracle(x in 1e-9f64..1e9) {
            let n = norm0(x).unwrap();
            prop_assert_eq!(Some((n.mantissa, n.exponent)), scan(x));
        }

        #[test]
        fn scale_equivariance(x in 1e-12f64..1e12) {
            let a = norm0(x).unwrap();
            let b = norm0(2.0 * x).unwrap();
            prop_assert_eq!(b.exponent, a.exponent + 1);
            prop_assert_eq!(b.mantissa, a.mantissa);
        }

        #[test]
        fn reconstruction(x in proptest::num::f64::POSITIVE | proptest::num::f64::NEGATIVE) {
            prop_assume!(x.is_finite() && x != 0.0);
            let n = norm0(x).unwrap();
            prop_assert!(((n.reconstruct() - x) / x).abs() <= 4.0 * f64::EPSILON);
        }
    }
}
