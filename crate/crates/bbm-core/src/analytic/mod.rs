//! Closed-form quantities of the absorbed branching Brownian motion: strip
//! heat kernels, exact moment laws, curved-boundary envelopes, limiting
//! densities, moment integrals, and predicted asymptotic windows.

use core::fmt;

pub mod curved;
pub mod densities;
pub mod kernels;
pub mod moments;
pub mod quadrature;
pub mod windows;

pub use curved::{g_factor, psi_curved, right_kill_bounds, RightKillBounds};
pub use densities::{g_cdf, g_density, h_cdf, h_density};
pub use kernels::{
    d_bound, expected_y_strip, expected_z_strip, p_strip, q_strip, v_strip, v_strip_images,
    v_strip_spectral, YExpectation, SPECTRAL_IMAGE_CROSSOVER,
};
pub use moments::{first_moment_functional, second_moment_functional};
pub use windows::{
    boundary_from_population, bramson_median_anchor, predicted_windows, PredictedWindows,
    UnknownConstantBand,
};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AnalyticError {
    Domain { what: &'static str },
    /// A series needed more terms than the configured guard allows.
    SeriesOverflow { terms: usize },
    /// Adaptive quadrature stalled; carries the best estimate reached.
    QuadratureFailure { estimate: f64, error: f64 },
}

impl fmt::Display for AnalyticError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalyticError::Domain { what } => write!(f, "domain error: {what}"),
            AnalyticError::SeriesOverflow { terms } => write!(
                f,
                "series needs more than {terms} terms; use the direct kernel at this s/L^2"
            ),
            AnalyticError::QuadratureFailure { estimate, error } => write!(
                f,
                "quadrature did not converge (estimate {estimate}, error {error})"
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for AnalyticError {}
