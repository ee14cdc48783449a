//! Limiting configuration densities.
//!
//! The uniform-weight empirical measure converges to `g(y) = 2 y e^{-sqrt2 y}`
//! on `(0, inf)`; the exponential-weight measure of rescaled positions
//! converges to `h(z) = (pi/2) sin(pi z)` on `(0, 1)`.

use core::f64::consts::PI;

use crate::constants::SQRT_2;
use crate::math::{cos, exp, sin};

/// `g(y) = 2 y e^{-sqrt2 y}` for `y >= 0`, else 0.
pub fn g_density(y: f64) -> f64 {
    if y < 0.0 {
        0.0
    } else {
        2.0 * y * exp(-SQRT_2 * y)
    }
}

/// CDF of `g`: `G(y) = 1 - e^{-sqrt2 y}(1 + sqrt2 y)`.
pub fn g_cdf(y: f64) -> f64 {
    if y <= 0.0 {
        0.0
    } else {
        1.0 - exp(-SQRT_2 * y) * (1.0 + SQRT_2 * y)
    }
}

/// `h(z) = (pi/2) sin(pi z)` for `z` in `[0, 1]`, else 0.
pub fn h_density(z: f64) -> f64 {
    if !(0.0..=1.0).contains(&z) {
        0.0
    } else {
        PI / 2.0 * sin(PI * z)
    }
}

/// CDF of `h`: `H(z) = (1 - cos(pi z))/2`, clamped outside `[0, 1]`.
pub fn h_cdf(z: f64) -> f64 {
    if z <= 0.0 {
        0.0
    } else if z >= 1.0 {
        1.0
    } else {
        0.5 * (1.0 - cos(PI * z))
    }
}
