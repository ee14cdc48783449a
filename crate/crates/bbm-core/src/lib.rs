//! Critical branching Brownian motion with absorption.
//!
//! Particles drift at `-mu` (critically, `-sqrt(2)`), split into two at unit
//! rate, and are absorbed at the origin. Optionally they are also killed at a
//! fixed right boundary `L` (a strip) or at the moving boundary
//! `L(s) = c (t - s)^{1/3}` that tracks the decaying population.
//!
//! The crate has three layers:
//!
//! * [`engine`] — an event-driven Monte Carlo simulator with exact branch
//!   epochs and Brownian-bridge boundary-crossing corrections;
//! * [`analytic`] — every closed-form quantity the model admits: strip heat
//!   kernels, exact moment laws, curved-boundary decay factors, limiting
//!   densities, and moment integrals;
//! * [`stats`] — configuration functionals, weighted empirical measures, and
//!   the Kolmogorov-Smirnov machinery used to check the analytic laws against
//!   simulation.
//!
//! The crate is `no_std`-compatible (requires `alloc`). All transcendental
//! math is routed through `libm`, so results are bit-stable across targets.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod analytic;
pub mod constants;
pub mod engine;
pub(crate) mod math;
pub mod rng;
pub mod stats;
pub mod types;

pub use constants::{derived_constants, SQRT_2};
pub use types::{BoundarySpec, CoreError, Particle, RunResult, SimParams, Snapshot};
