//! Domain types shared by the engine, the analytic library, and the harness.

use alloc::vec::Vec;
use core::fmt;

use crate::constants::{boundary_coefficient, extinction_scale, SQRT_2};
use crate::math::cbrt;

/// A live individual: its position and the absolute time of its next split.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Particle {
    /// Spatial position, strictly positive while alive.
    pub position: f64,
    /// Absolute simulation time of the next branching event.
    pub next_branch_time: f64,
}

/// The right-boundary regime. Absorption at the origin is always active.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundarySpec {
    /// Absorption at the origin only.
    OriginOnly,
    /// Kill at a fixed level `l > 0` in addition to the origin.
    Strip { l: f64 },
    /// Kill at the moving level `L_alpha(s - time_shift)` where
    /// `L_alpha(u) = c (t_alpha - u)^{1/3}` and `t_alpha = tau (x_ref + alpha)^3`.
    /// Before `time_shift` only the origin absorbs.
    Curved {
        x_ref: f64,
        alpha: f64,
        time_shift: f64,
    },
}

impl BoundarySpec {
    /// `t_alpha = tau (x_ref + alpha)^3` for the curved variant.
    pub fn curved_scale(&self) -> Option<f64> {
        match *self {
            BoundarySpec::Curved { x_ref, alpha, .. } => Some(extinction_scale(x_ref + alpha)),
            _ => None,
        }
    }

    /// The time window `[time_shift, time_shift + t_alpha]` on which the
    /// curved boundary is defined.
    pub fn curved_window(&self) -> Option<(f64, f64)> {
        match *self {
            BoundarySpec::Curved { time_shift, .. } => {
                let t_alpha = self.curved_scale().unwrap();
                Some((time_shift, time_shift + t_alpha))
            }
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        match *self {
            BoundarySpec::OriginOnly => Ok(()),
            BoundarySpec::Strip { l } => {
                if l > 0.0 && l.is_finite() {
                    Ok(())
                } else {
                    Err(CoreError::InvalidParam {
                        field: "boundary.l",
                        reason: "strip level must be finite and > 0",
                    })
                }
            }
            BoundarySpec::Curved {
                x_ref,
                alpha,
                time_shift,
            } => {
                if !(x_ref > 0.0 && x_ref.is_finite()) {
                    return Err(CoreError::InvalidParam {
                        field: "boundary.x_ref",
                        reason: "must be finite and > 0",
                    });
                }
                if !(x_ref + alpha > 0.0) || !alpha.is_finite() {
                    return Err(CoreError::InvalidParam {
                        field: "boundary.alpha",
                        reason: "x_ref + alpha must be > 0",
                    });
                }
                if !(time_shift >= 0.0) || !time_shift.is_finite() {
                    return Err(CoreError::InvalidParam {
                        field: "boundary.time_shift",
                        reason: "must be finite and >= 0",
                    });
                }
                Ok(())
            }
        }
    }
}

/// Position of the right boundary at time `s`; `+inf` when only the origin
/// absorbs. For the curved variant `s - time_shift` must lie in `[0, t_alpha]`.
pub fn boundary_at(spec: &BoundarySpec, s: f64) -> Result<f64, CoreError> {
    match *spec {
        BoundarySpec::OriginOnly => Ok(f64::INFINITY),
        BoundarySpec::Strip { l } => Ok(l),
        BoundarySpec::Curved { time_shift, .. } => {
            let t_alpha = spec.curved_scale().unwrap();
            let u = s - time_shift;
            if u < 0.0 || u > t_alpha {
                return Err(CoreError::BoundaryDomain {
                    s,
                    valid_from: time_shift,
                    valid_to: time_shift + t_alpha,
                });
            }
            Ok(boundary_coefficient() * cbrt(t_alpha - u))
        }
    }
}

/// Full configuration of one simulation replicate.
#[derive(Clone, Debug)]
pub struct SimParams {
    /// Initial particle position, `> 0`.
    pub x0: f64,
    /// Drift magnitude; particles drift at `-mu`. The critical case is `sqrt(2)`.
    pub mu: f64,
    /// Binary branching rate, `> 0` (0 disables branching).
    pub branch_rate: f64,
    /// Maximum diffusion substep between events.
    pub dt_max: f64,
    pub boundary: BoundarySpec,
    /// Ascending observation times within `[0, t_end]`.
    pub record_times: Vec<f64>,
    pub t_end: f64,
    pub seed: u64,
    pub replicate_id: u64,
    /// Safety cap on the live population; hitting it truncates the replicate.
    pub max_particles: usize,
}

impl SimParams {
    pub const DEFAULT_DT_MAX: f64 = 1e-3;
    pub const DEFAULT_MAX_PARTICLES: usize = 10_000_000;

    /// Critical-drift defaults: `mu = sqrt(2)`, unit branch rate, origin-only
    /// absorption, no observation times.
    pub fn new(x0: f64, t_end: f64, seed: u64, replicate_id: u64) -> Self {
        SimParams {
            x0,
            mu: SQRT_2,
            branch_rate: 1.0,
            dt_max: Self::DEFAULT_DT_MAX,
            boundary: BoundarySpec::OriginOnly,
            record_times: Vec::new(),
            t_end,
            seed,
            replicate_id,
            max_particles: Self::DEFAULT_MAX_PARTICLES,
        }
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        if !(self.x0 > 0.0) || !self.x0.is_finite() {
            return Err(CoreError::InvalidParam {
                field: "x0",
                reason: "initial position must be finite and > 0",
            });
        }
        if !self.mu.is_finite() {
            return Err(CoreError::InvalidParam {
                field: "mu",
                reason: "drift must be finite",
            });
        }
        if !(self.branch_rate >= 0.0) || !self.branch_rate.is_finite() {
            return Err(CoreError::InvalidParam {
                field: "branch_rate",
                reason: "must be finite and >= 0",
            });
        }
        if !(self.dt_max > 0.0) {
            return Err(CoreError::InvalidParam {
                field: "dt_max",
                reason: "must be > 0",
            });
        }
        if self.max_particles == 0 {
            return Err(CoreError::InvalidParam {
                field: "max_particles",
                reason: "must be > 0",
            });
        }
        if !(self.t_end >= 0.0) {
            return Err(CoreError::InvalidParam {
                field: "t_end",
                reason: "must be >= 0",
            });
        }
        self.boundary.validate()?;
        let mut prev = 0.0;
        for &r in &self.record_times {
            if !(r >= prev) || r > self.t_end {
                return Err(CoreError::InvalidParam {
                    field: "record_times",
                    reason: "must be ascending within [0, t_end]",
                });
            }
            prev = r;
        }
        // The start must lie strictly inside the allowed region whenever a
        // right boundary is active at time zero.
        let b0 = match self.boundary {
            BoundarySpec::Curved { time_shift, .. } if time_shift > 0.0 => f64::INFINITY,
            _ => boundary_at(&self.boundary, 0.0)?,
        };
        if self.x0 >= b0 {
            return Err(CoreError::InvalidParam {
                field: "x0",
                reason: "initial position must lie strictly below the right boundary at time 0",
            });
        }
        Ok(())
    }
}

/// The particle configuration observed at one record time.
#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    /// Positions in descending order (`X_1 >= X_2 >= ...`).
    pub positions: Vec<f64>,
    pub cumulative_origin_kills: u64,
    pub cumulative_right_kills: u64,
}

impl Snapshot {
    pub fn n(&self) -> usize {
        self.positions.len()
    }
}

/// Outcome of one replicate.
#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    /// One snapshot per requested record time (times after extinction hold
    /// zero particles).
    pub snapshots: Vec<Snapshot>,
    /// Time the last particle died, or `None` if the system was still alive
    /// at `t_end`.
    pub extinction_time: Option<f64>,
    /// True when the `max_particles` cap stopped the replicate early.
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CoreError {
    /// Curved boundary queried outside its time domain.
    BoundaryDomain {
        s: f64,
        valid_from: f64,
        valid_to: f64,
    },
    InvalidParam {
        field: &'static str,
        reason: &'static str,
    },
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::BoundaryDomain {
                s,
                valid_from,
                valid_to,
            } => write!(
                f,
                "curved boundary undefined at s = {s}; valid interval is [{valid_from}, {valid_to}]"
            ),
            CoreError::InvalidParam { field, reason } => {
                write!(f, "invalid parameter `{field}`: {reason}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for CoreError {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curved_boundary_matches_closed_form() {
        // L(0) = c t^{1/3} = x_ref, and L(t/2) = x_ref * 2^{-1/3}.
        let spec = BoundarySpec::Curved {
            x_ref: 10.0,
            alpha: 0.0,
            time_shift: 0.0,
        };
        let t = spec.curved_scale().unwrap();
        assert!((boundary_at(&spec, 0.0).unwrap() - 10.0).abs() < 1e-10);
        let half = boundary_at(&spec, t / 2.0).unwrap();
        assert!((half - 7.9370052598409974).abs() < 1e-10);
        // Hits zero at the end of the domain.
        assert!(boundary_at(&spec, t).unwrap().abs() < 1e-9);
    }

    #[test]
    fn curved_boundary_domain_error_names_interval() {
        let spec = BoundarySpec::Curved {
            x_ref: 10.0,
            alpha: 0.0,
            time_shift: 3.0,
        };
        let err = boundary_at(&spec, 1.0).unwrap_err();
        match err {
            CoreError::BoundaryDomain {
                valid_from,
                valid_to,
                ..
            } => {
                assert!((valid_from - 3.0).abs() < 1e-12);
                assert!((valid_to - 3.0 - extinction_scale(10.0)).abs() < 1e-9);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn strip_is_constant() {
        let spec = BoundarySpec::Strip { l: 5.0 };
        for s in [0.0, 0.3, 12.0, 1e6] {
            assert_eq!(boundary_at(&spec, s).unwrap(), 5.0);
        }
    }

    #[test]
    fn origin_only_is_unbounded() {
        assert_eq!(
            boundary_at(&BoundarySpec::OriginOnly, 1.0).unwrap(),
            f64::INFINITY
        );
    }

    #[test]
    fn params_reject_nonpositive_start() {
        let p = SimParams::new(0.0, 1.0, 1, 0);
        assert!(matches!(
            p.validate(),
            Err(CoreError::InvalidParam { field: "x0", .. })
        ));
    }

    #[test]
    fn params_reject_start_on_strip_boundary() {
        let mut p = SimParams::new(2.0, 1.0, 1, 0);
        p.boundary = BoundarySpec::Strip { l: 2.0 };
        assert!(p.validate().is_err());
    }

    #[test]
    fn shifted_curved_start_is_unconstrained_before_window() {
        let mut p = SimParams::new(12.0, 1.0, 1, 0);
        p.boundary = BoundarySpec::Curved {
            x_ref: 10.0,
            alpha: 0.0,
            time_shift: 5.0,
        };
        assert!(p.validate().is_ok());
    }
}
