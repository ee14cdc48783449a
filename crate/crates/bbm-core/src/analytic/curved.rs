//! Closed forms for the process killed at the moving boundary
//! `L(s) = c (t - s)^{1/3}`.
//!
//! The constants multiplying these quantities are not pinned down by the
//! theory; everything here is an envelope or a center, to be used for
//! order-of-magnitude and trend checks only.

use core::f64::consts::PI;

use super::AnalyticError;
use crate::constants::{boundary_coefficient, three_pi_sq_cbrt, SQRT_2};
use crate::math::{cbrt, exp, sin, sqrt};

/// Decay factor
/// `G_r(s) = exp(-(3 pi^2)^{1/3} ((t-r)^{1/3} - (t-s)^{1/3})) ((t-s)/(t-r))^{1/6}`
/// governing `E[Z(s) | F_r]` up to constants. Multiplicative in `s`:
/// `G_r(u) G_u(s) = G_r(s)`.
pub fn g_factor(t: f64, r: f64, s: f64) -> Result<f64, AnalyticError> {
    if !(0.0 <= r && r < s && s < t) {
        return Err(AnalyticError::Domain {
            what: "g_factor requires 0 <= r < s < t",
        });
    }
    let a = cbrt(t - r);
    let b = cbrt(t - s);
    Ok(exp(-three_pi_sq_cbrt() * (a - b)) * sqrt(cbrt((t - s) / (t - r))))
}

/// Density envelope of the curved-boundary process (valid up to constant
/// factors for `L(0)^2 <~ s <= t - O(1)`):
/// `psi_s(x,y) = (1/L(s)) e^{-(3pi^2)^{1/3}(t^{1/3} - (t-s)^{1/3})}
///  ((t-s)/t)^{1/6} e^{sqrt2 x} sin(pi x/L(0)) e^{-sqrt2 y} sin(pi y/L(s))`.
pub fn psi_curved(s: f64, x: f64, y: f64, t: f64) -> Result<f64, AnalyticError> {
    if !(s > 0.0 && s < t) {
        return Err(AnalyticError::Domain {
            what: "psi_curved requires 0 < s < t",
        });
    }
    let c = boundary_coefficient();
    let l0 = c * cbrt(t);
    let ls = c * cbrt(t - s);
    if !(x > 0.0 && x < l0) {
        return Err(AnalyticError::Domain {
            what: "psi_curved requires 0 < x < L(0)",
        });
    }
    if !(y > 0.0 && y < ls) {
        return Err(AnalyticError::Domain {
            what: "psi_curved requires 0 < y < L(s)",
        });
    }
    Ok(1.0 / ls
        * exp(-three_pi_sq_cbrt() * (cbrt(t) - cbrt(t - s)))
        * sqrt(cbrt((t - s) / t))
        * exp(SQRT_2 * x)
        * sin(PI * x / l0)
        * exp(-SQRT_2 * y)
        * sin(PI * y / ls))
}

/// Envelope pair for the expected number `R` of particles killed at the
/// moving boundary over `[0, t]`: `E[R]` lies in `[C' h, C'' (h + j)]` for
/// unspecified positive constants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RightKillBounds {
    pub h: f64,
    pub j: f64,
}

/// `h(x) = e^{sqrt2 x} sin(pi x / c t^{1/3}) t^{1/3} e^{-(3 pi^2 t)^{1/3}}` and
/// `j(x) = x e^{sqrt2 x} t^{-1/3} e^{-(3 pi^2 t)^{1/3}}`.
pub fn right_kill_bounds(x: f64, t: f64) -> Result<RightKillBounds, AnalyticError> {
    if !(t > 0.0) {
        return Err(AnalyticError::Domain {
            what: "right_kill_bounds requires t > 0",
        });
    }
    let l0 = boundary_coefficient() * cbrt(t);
    if !(x > 0.0 && x < l0) {
        return Err(AnalyticError::Domain {
            what: "right_kill_bounds requires 0 < x < c t^{1/3}",
        });
    }
    let decay = exp(-three_pi_sq_cbrt() * cbrt(t));
    let t_third = cbrt(t);
    Ok(RightKillBounds {
        h: exp(SQRT_2 * x) * sin(PI * x / l0) * t_third * decay,
        j: x * exp(SQRT_2 * x) / t_third * decay,
    })
}
