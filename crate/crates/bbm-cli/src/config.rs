//! JSON experiment configuration.
//!
//! Flat keys mirror the simulation parameter names; unknown keys are hard
//! errors so typos cannot silently fall back to defaults.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use bbm_core::types::{BoundarySpec, SimParams};
use bbm_core::SQRT_2;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Simulate,
    Verify,
    DensityTable,
    Neveu,
    Extinction,
    Windows,
}

impl std::fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ExperimentKind::Simulate => "simulate",
            ExperimentKind::Verify => "verify",
            ExperimentKind::DensityTable => "density-table",
            ExperimentKind::Neveu => "neveu",
            ExperimentKind::Extinction => "extinction",
            ExperimentKind::Windows => "windows",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum BoundaryConfig {
    OriginOnly,
    Strip { l: f64 },
    Curved { x_ref: f64, alpha: f64, time_shift: f64 },
}

impl BoundaryConfig {
    pub fn to_spec(&self) -> BoundarySpec {
        match *self {
            BoundaryConfig::OriginOnly => BoundarySpec::OriginOnly,
            BoundaryConfig::Strip { l } => BoundarySpec::Strip { l },
            BoundaryConfig::Curved {
                x_ref,
                alpha,
                time_shift,
            } => BoundarySpec::Curved {
                x_ref,
                alpha,
                time_shift,
            },
        }
    }
}

/// Grid for `density-table`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl GridConfig {
    pub fn points(&self) -> Result<Vec<f64>> {
        if !(self.step > 0.0) || !(self.stop >= self.start) {
            bail!("grid requires step > 0 and stop >= start");
        }
        let n = ((self.stop - self.start) / self.step).round() as usize;
        Ok((0..=n).map(|i| self.start + i as f64 * self.step).collect())
    }
}

fn default_mu() -> f64 {
    SQRT_2
}
fn default_branch_rate() -> f64 {
    1.0
}
fn default_dt_max() -> f64 {
    SimParams::DEFAULT_DT_MAX
}
fn default_boundary() -> BoundaryConfig {
    BoundaryConfig::OriginOnly
}
fn default_replicates() -> u64 {
    1
}
fn default_max_particles() -> usize {
    SimParams::DEFAULT_MAX_PARTICLES
}

/// One experiment, fully described.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Optional; must agree with the subcommand when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<ExperimentKind>,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<f64>,
    #[serde(default = "default_mu")]
    pub mu: f64,
    #[serde(default = "default_branch_rate")]
    pub branch_rate: f64,
    #[serde(default = "default_dt_max")]
    pub dt_max: f64,
    #[serde(default = "default_boundary")]
    pub boundary: BoundaryConfig,
    #[serde(default)]
    pub record_times: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_replicates")]
    pub replicates: u64,
    #[serde(default = "default_max_particles")]
    pub max_particles: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub full_positions: bool,

    /// `neveu`: levels `y` to probe.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_levels: Option<Vec<f64>>,
    /// `extinction`: sweep of start heights.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_values: Option<Vec<f64>>,
    /// `density-table`: which curve to tabulate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<String>,
    /// `density-table`: evaluation grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridConfig>,
    /// `density-table`/`windows`: auxiliary curve parameters.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

impl ExperimentConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let cfg: ExperimentConfig = serde_json::from_str(&text)
            .with_context(|| format!("cannot parse config {}", path.display()))?;
        if cfg.replicates == 0 {
            bail!("replicates must be >= 1");
        }
        Ok(cfg)
    }

    pub fn check_kind(&self, expected: ExperimentKind) -> Result<()> {
        if let Some(k) = self.kind {
            if k != expected {
                bail!("config kind `{k}` does not match subcommand `{expected}`");
            }
        }
        Ok(())
    }

    /// Simulation parameters for one replicate.
    pub fn sim_params(&self, replicate_id: u64) -> Result<SimParams> {
        let x0 = self.x0.context("config requires `x0`")?;
        let t_end = self.t_end.or_else(|| self.record_times.last().copied());
        let t_end = t_end.context("config requires `t_end` or non-empty `record_times`")?;
        let params = SimParams {
            x0,
            mu: self.mu,
            branch_rate: self.branch_rate,
            dt_max: self.dt_max,
            boundary: self.boundary.to_spec(),
            record_times: self.record_times.clone(),
            t_end,
            seed: self.seed,
            replicate_id,
            max_particles: self.max_particles,
        };
        params.validate().map_err(anyhow::Error::msg)?;
        Ok(params)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_simulate_config_parses() {
        let cfg: ExperimentConfig = serde_json::from_str(
            r#"{"x0": 1.5, "boundary": {"strip": {"l": 3.0}}, "record_times": [1.0, 4.5], "seed": 7, "replicates": 10}"#,
        )
        .unwrap();
        assert_eq!(cfg.replicates, 10);
        let p = cfg.sim_params(3).unwrap();
        assert_eq!(p.t_end, 4.5);
        assert_eq!(p.boundary, BoundarySpec::Strip { l: 3.0 });
        assert_eq!(p.mu, SQRT_2);
    }

    #[test]
    fn unknown_keys_are_errors() {
        let err = serde_json::from_str::<ExperimentConfig>(r#"{"x0": 1.0, "bogus": 2}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("bogus"), "{err}");
    }

    #[test]
    fn kind_mismatch_is_error() {
        let cfg: ExperimentConfig =
            serde_json::from_str(r#"{"kind": "simulate", "x0": 1.0, "t_end": 1.0}"#).unwrap();
        assert!(cfg.check_kind(ExperimentKind::Simulate).is_ok());
        assert!(cfg.check_kind(ExperimentKind::Neveu).is_err());
    }

    #[test]
    fn grid_points_inclusive() {
        let g = GridConfig {
            start: 0.0,
            stop: 10.0,
            step: 0.1,
        };
        let pts = g.points().unwrap();
        assert_eq!(pts.len(), 101);
        assert!((pts[100] - 10.0).abs() < 1e-12);
    }
}
