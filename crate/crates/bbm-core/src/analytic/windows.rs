//! Predicted centers and windows for the population size, the rightmost
//! particle, and the extinction time, plus the heuristic boundary ODE.

use core::f64::consts::PI;

use super::AnalyticError;
use crate::constants::{boundary_coefficient, extinction_scale, SQRT_2};
use crate::math::{cbrt, ln};

/// A center whose surrounding band has an unspecified constant width; useful
/// only for trend checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnknownConstantBand {
    pub center: f64,
}

/// Predicted asymptotic windows for the process started from a single
/// particle at `x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PredictedWindows {
    pub x: f64,
    /// Extinction-time scale `t = tau x^3`.
    pub t: f64,
}

/// Builds the predicted windows record for start height `x > 0`.
pub fn predicted_windows(x: f64) -> Result<PredictedWindows, AnalyticError> {
    if !(x > 0.0) {
        return Err(AnalyticError::Domain { what: "x must be > 0" });
    }
    Ok(PredictedWindows {
        x,
        t: extinction_scale(x),
    })
}

impl PredictedWindows {
    /// The killing boundary `L(s) = c (t - s)^{1/3}`.
    pub fn boundary(&self, s: f64) -> f64 {
        boundary_coefficient() * cbrt(self.t - s)
    }

    /// `log` of the predicted population center up to an additive O(1):
    /// `sqrt2 (1 - s/t)^{1/3} x - 3 ln x`.
    pub fn n_exponent(&self, s: f64) -> f64 {
        SQRT_2 * cbrt(1.0 - s / self.t) * self.x - 3.0 * ln(self.x)
    }

    /// Predicted center of the rightmost particle:
    /// `L(s) - (3/sqrt2) ln x`.
    pub fn rightmost_center(&self, s: f64) -> f64 {
        self.boundary(s) - 3.0 / SQRT_2 * ln(self.x)
    }

    /// Integrates the heuristic boundary ODE `L'(s) = -pi^2 / (2 sqrt2 L^2)`
    /// from `L(0) = x` to time `s` with classical RK4.
    pub fn ode_boundary(&self, s: f64, steps: usize) -> f64 {
        let h = s / steps as f64;
        let deriv = |l: f64| -PI * PI / (2.0 * SQRT_2 * l * l);
        let mut l = self.x;
        for _ in 0..steps {
            let k1 = deriv(l);
            let k2 = deriv(l + 0.5 * h * k1);
            let k3 = deriv(l + 0.5 * h * k2);
            let k4 = deriv(l + h * k3);
            l += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        l
    }

    /// Max absolute deviation between the ODE solution and the closed form
    /// `c (t - s)^{1/3}` over `[0, 0.9 t]`.
    pub fn ode_max_deviation(&self, checkpoints: usize, steps_per_checkpoint: usize) -> f64 {
        let mut worst = 0.0_f64;
        let deriv = |l: f64| -PI * PI / (2.0 * SQRT_2 * l * l);
        let mut l = self.x;
        let horizon = 0.9 * self.t;
        let n = checkpoints * steps_per_checkpoint;
        let h = horizon / n as f64;
        for i in 1..=n {
            let k1 = deriv(l);
            let k2 = deriv(l + 0.5 * h * k1);
            let k3 = deriv(l + 0.5 * h * k2);
            let k4 = deriv(l + h * k3);
            l += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if i % steps_per_checkpoint == 0 {
                let s = h * i as f64;
                worst = worst.max(crate::math::abs(l - self.boundary(s)));
            }
        }
        worst
    }
}

/// Bramson's median anchor for driftless BBM: the median of the rightmost
/// particle at time `t` sits within an unspecified constant of
/// `sqrt2 t - (3/(2 sqrt2)) log t`; this returns the drift-adjusted center
/// `-(3/(2 sqrt2)) log t`.
pub fn bramson_median_anchor(t: f64) -> Result<UnknownConstantBand, AnalyticError> {
    if !(t >= 1.0) {
        return Err(AnalyticError::Domain { what: "t must be >= 1" });
    }
    Ok(UnknownConstantBand {
        center: -3.0 / (2.0 * SQRT_2) * ln(t),
    })
}

/// Heuristic boundary position for a population of size `n`:
/// `(1/sqrt2)(ln n + 3 ln ln n)`.
pub fn boundary_from_population(n: f64) -> Result<f64, AnalyticError> {
    if !(n > 2.72) {
        return Err(AnalyticError::Domain {
            what: "population must exceed e for the log-log term",
        });
    }
    Ok((ln(n) + 3.0 * ln(ln(n))) / SQRT_2)
}
