//! Model constants.
//!
//! The extinction-time scale of the process started at `x` is `t = tau * x^3`,
//! and the matching killing boundary is `L(s) = c (t - s)^{1/3}`, with
//! `tau = 2 sqrt(2) / (3 pi^2)` and `c = tau^{-1/3}`.

use core::f64::consts::PI;

pub const SQRT_2: f64 = core::f64::consts::SQRT_2;

/// `tau = 2 sqrt(2) / (3 pi^2)`, the cubic coefficient of the extinction time.
#[inline]
pub fn tau() -> f64 {
    2.0 * SQRT_2 / (3.0 * PI * PI)
}

/// `c = tau^{-1/3}`, the coefficient of the cube-root killing boundary.
#[inline]
pub fn boundary_coefficient() -> f64 {
    1.0 / crate::math::cbrt(tau())
}

/// Returns `(tau, c)`. Satisfies `tau * c^3 = 1` and
/// `sqrt(2) * c = (3 pi^2)^{1/3}` to machine precision.
#[inline]
pub fn derived_constants() -> (f64, f64) {
    (tau(), boundary_coefficient())
}

/// `(3 pi^2)^{1/3} = sqrt(2) * c`, the exponential rate in the curved-boundary
/// decay factor.
#[inline]
pub fn three_pi_sq_cbrt() -> f64 {
    crate::math::cbrt(3.0 * PI * PI)
}

/// Extinction-time scale `t = tau * x^3` for a single particle started at `x`.
#[inline]
pub fn extinction_scale(x: f64) -> f64 {
    tau() * x * x * x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_constants_match_extended_precision() {
        let (tau, c) = derived_constants();
        // mpmath, 30 digits: 2*sqrt(2)/(3*pi^2) and its -1/3 power.
        assert!((tau - 0.09552652804179271).abs() < 1e-16);
        assert!((c - 2.1875534279906521).abs() < 1e-14);
    }

    #[test]
    fn algebraic_identities() {
        let (tau, c) = derived_constants();
        assert!((SQRT_2 * c - three_pi_sq_cbrt()).abs() < 1e-12);
        assert!((tau * c * c * c - 1.0).abs() < 1e-12);
    }

    #[test]
    fn extinction_scale_at_ten() {
        assert!((extinction_scale(10.0) - 95.52652804179271).abs() < 1e-11);
    }
}
