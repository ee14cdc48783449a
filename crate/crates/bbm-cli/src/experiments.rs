//! Experiment drivers behind the CLI subcommands.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use bbm_core::analytic::{
    self, g_cdf, g_density, h_cdf, h_density, p_strip, predicted_windows, psi_curved, q_strip,
};
use bbm_core::constants::extinction_scale;
use bbm_core::engine::{neveu_count_with_dt, run};
use bbm_core::stats::{self, aggregate, snapshot_stats};
use bbm_core::types::RunResult;
use bbm_core::SQRT_2;

use crate::config::ExperimentConfig;
use crate::output::{
    write_snapshots, write_summary, write_table, SnapshotHeader, SnapshotRow, SummaryRow,
    SNAPSHOT_SCHEMA,
};
use crate::runner::run_replicates;

fn out_dir(config: &ExperimentConfig, cli_out: Option<&Path>) -> Result<PathBuf> {
    let dir = cli_out
        .map(Path::to_path_buf)
        .or_else(|| config.out.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir)
        .with_context(|| format!("cannot create output dir {}", dir.display()))?;
    Ok(dir)
}

/// `simulate`: run replicates, log per-snapshot functionals, aggregate.
pub fn simulate(config: &ExperimentConfig, workers: usize, cli_out: Option<&Path>) -> Result<String> {
    let dir = out_dir(config, cli_out)?;
    let spec = config.boundary.to_spec();
    let results: Vec<RunResult> = run_replicates(config.replicates, workers, |rep| {
        let params = config.sim_params(rep)?;
        run(&params).map_err(anyhow::Error::msg)
    })?;

    let mut rows = Vec::new();
    for (rep, result) in results.iter().enumerate() {
        for snap in &result.snapshots {
            let st = snapshot_stats(snap, &spec);
            rows.push(SnapshotRow {
                replicate: rep as u64,
                time: snap.time,
                n: st.n,
                y: st.y,
                z: st.z,
                m: st.m,
                x1: st.x1,
                origin_kills: snap.cumulative_origin_kills,
                right_kills: snap.cumulative_right_kills,
                positions: config.full_positions.then(|| snap.positions.clone()),
            });
        }
    }
    let header = SnapshotHeader {
        schema: SNAPSHOT_SCHEMA.into(),
        seed: config.seed,
        replicates: config.replicates,
    };
    write_snapshots(&dir.join("snapshots.jsonl"), &header, &rows)?;

    let mut summary = Vec::new();
    for (i, &time) in config.record_times.iter().enumerate() {
        let at: Vec<&RunResult> = results.iter().filter(|r| r.snapshots.len() > i).collect();
        if at.is_empty() {
            continue;
        }
        let stats_at: Vec<_> = at
            .iter()
            .map(|r| snapshot_stats(&r.snapshots[i], &spec))
            .collect();
        let ns: Vec<f64> = stats_at.iter().map(|s| s.n as f64).collect();
        let ys: Vec<f64> = stats_at.iter().map(|s| s.y).collect();
        let ms: Vec<f64> = stats_at.iter().map(|s| s.m).collect();
        let n_agg = aggregate(&ns)?;
        let y_agg = aggregate(&ys)?;
        let m_agg = aggregate(&ms)?;
        let z_agg = stats_at
            .iter()
            .map(|s| s.z)
            .collect::<Option<Vec<f64>>>()
            .map(|zs| aggregate(&zs))
            .transpose()?;
        let x1s: Vec<f64> = stats_at.iter().filter_map(|s| s.x1).collect();
        let x1_agg = if x1s.is_empty() {
            None
        } else {
            Some(aggregate(&x1s)?)
        };
        summary.push(SummaryRow {
            time,
            replicates: at.len() as u64,
            surviving: stats_at.iter().filter(|s| s.n > 0).count() as u64,
            n_mean: n_agg.mean,
            n_stderr: n_agg.stderr.unwrap_or(0.0),
            y_mean: y_agg.mean,
            y_stderr: y_agg.stderr.unwrap_or(0.0),
            z_mean: z_agg.as_ref().map(|a| a.mean),
            z_stderr: z_agg.as_ref().and_then(|a| a.stderr),
            m_mean: m_agg.mean,
            m_stderr: m_agg.stderr.unwrap_or(0.0),
            x1_mean: x1_agg.as_ref().map(|a| a.mean),
            x1_stderr: x1_agg.as_ref().and_then(|a| a.stderr),
        });
    }
    write_summary(&dir.join("summary.csv"), &summary)?;

    let truncated = results.iter().filter(|r| r.truncated).count();
    let extinct = results.iter().filter(|r| r.extinction_time.is_some()).count();
    Ok(format!(
        "simulate: {} replicates, {} snapshots logged, {extinct} extinct, {truncated} truncated -> {}",
        config.replicates,
        rows.len(),
        dir.display()
    ))
}

/// `density-table`: tabulate an analytic curve on a grid.
pub fn density_table(
    config: &ExperimentConfig,
    cli_out: Option<&Path>,
) -> Result<String> {
    let dir = out_dir(config, cli_out)?;
    let curve = config
        .curve
        .as_deref()
        .context("density-table requires `curve`")?;
    let grid = config
        .grid
        .as_ref()
        .context("density-table requires `grid`")?
        .points()?;
    let tol = config.tol.unwrap_or(1e-10);

    let (columns, rows): (Vec<&str>, Vec<Vec<f64>>) = match curve {
        "g" => (
            vec!["y", "g", "g_cdf"],
            grid.iter().map(|&y| vec![y, g_density(y), g_cdf(y)]).collect(),
        ),
        "h" => (
            vec!["z", "h", "h_cdf"],
            grid.iter().map(|&z| vec![z, h_density(z), h_cdf(z)]).collect(),
        ),
        "p-strip" | "q-strip" => {
            let s = config.s.context("strip curves require `s`")?;
            let l = config.l.context("strip curves require `l`")?;
            let x = config.x.context("strip curves require `x`")?;
            let mut rows = Vec::new();
            for &y in &grid {
                if y <= 0.0 || y >= l {
                    continue;
                }
                let v = if curve == "p-strip" {
                    p_strip(s, x, y, l).map_err(anyhow::Error::msg)?
                } else {
                    q_strip(s, x, y, l, tol).map_err(anyhow::Error::msg)?
                };
                rows.push(vec![y, v]);
            }
            (vec!["y", curve], rows)
        }
        "psi" => {
            let s = config.s.context("psi requires `s`")?;
            let t = config.t.context("psi requires `t`")?;
            let x = config.x.context("psi requires `x`")?;
            let mut rows = Vec::new();
            for &y in &grid {
                if let Ok(v) = psi_curved(s, x, y, t) {
                    rows.push(vec![y, v]);
                }
            }
            (vec!["y", "psi"], rows)
        }
        "g-factor" => {
            let t = config.t.context("g-factor requires `t`")?;
            let r = config.s.unwrap_or(0.0);
            let mut rows = Vec::new();
            for &s in &grid {
                if s > r && s < t {
                    rows.push(vec![s, analytic::g_factor(t, r, s).map_err(anyhow::Error::msg)?]);
                }
            }
            (vec!["s", "g_factor"], rows)
        }
        "windows" => {
            let x = config.x.context("windows requires `x`")?;
            let w = predicted_windows(x).map_err(anyhow::Error::msg)?;
            let mut rows = Vec::new();
            for &s in &grid {
                if s >= 0.0 && s < w.t {
                    rows.push(vec![
                        s,
                        w.boundary(s),
                        w.n_exponent(s),
                        w.rightmost_center(s),
                    ]);
                }
            }
            (vec!["s", "boundary", "n_exponent", "rightmost_center"], rows)
        }
        other => bail!("unknown curve `{other}` (expected g, h, p-strip, q-strip, psi, g-factor, windows)"),
    };

    let path = dir.join(format!("table_{}.csv", curve.replace('-', "_")));
    let n = rows.len();
    write_table(&path, "bbm.table.v1", &columns, &rows)?;
    Ok(format!("density-table: {n} rows of `{curve}` -> {}", path.display()))
}

/// `neveu`: distribution of the descendant count K(y) at each requested level.
pub fn neveu(config: &ExperimentConfig, workers: usize, cli_out: Option<&Path>) -> Result<String> {
    let dir = out_dir(config, cli_out)?;
    let x = config.x0.or(config.x).context("neveu requires `x0`")?;
    let levels = config
        .y_levels
        .clone()
        .context("neveu requires `y_levels`")?;
    let mut rows = Vec::new();
    let mut report = String::from("neveu:");
    for (li, &y) in levels.iter().enumerate() {
        let seed = config.seed;
        let dt = config.dt_max;
        let ks: Vec<u64> = run_replicates(config.replicates, workers, |rep| {
            // distinct replicate block per level
            neveu_count_with_dt(x, y, seed, (li as u64) << 32 | rep, dt)
                .map_err(anyhow::Error::msg)
        })?;
        let scale = y * (-SQRT_2 * y).exp();
        for (rep, &k) in ks.iter().enumerate() {
            rows.push(vec![y, rep as f64, k as f64, scale * k as f64]);
        }
        let scaled: Vec<f64> = ks.iter().map(|&k| scale * k as f64).collect();
        let agg = aggregate(&scaled)?;
        report.push_str(&format!(
            " y={y}: mean(y e^(-sqrt2 y) K)={:.4} (se {:.4});",
            agg.mean,
            agg.stderr.unwrap_or(0.0)
        ));
    }
    let path = dir.join("neveu.csv");
    write_table(&path, "bbm.neveu.v1", &["y", "replicate", "k", "scaled"], &rows)?;
    report.push_str(&format!(" -> {}", path.display()));
    Ok(report)
}

/// Default horizon that comfortably contains the extinction window.
pub fn extinction_horizon(x: f64) -> f64 {
    extinction_scale(x) + 10.0 * x * x + 50.0
}

/// `extinction`: full runs to extinction over a sweep of start heights.
pub fn extinction(
    config: &ExperimentConfig,
    workers: usize,
    cli_out: Option<&Path>,
) -> Result<String> {
    let dir = out_dir(config, cli_out)?;
    let xs = config
        .x_values
        .clone()
        .or_else(|| config.x0.map(|x| vec![x]))
        .context("extinction requires `x_values` or `x0`")?;
    let mut rows = Vec::new();
    let mut summary_rows = Vec::new();
    let mut report = String::from("extinction:");
    for (xi, &x) in xs.iter().enumerate() {
        let mut cfg = config.clone();
        cfg.x0 = Some(x);
        cfg.t_end = Some(config.t_end.unwrap_or_else(|| extinction_horizon(x)));
        cfg.seed = config.seed.wrapping_add(xi as u64);
        let results: Vec<RunResult> = run_replicates(cfg.replicates, workers, |rep| {
            let params = cfg.sim_params(rep)?;
            run(&params).map_err(anyhow::Error::msg)
        })?;
        for (rep, r) in results.iter().enumerate() {
            rows.push(vec![
                x,
                rep as f64,
                r.extinction_time.unwrap_or(f64::NAN),
            ]);
        }
        let summary = stats::extinction_summary(&results, x).map_err(anyhow::Error::msg)?;
        summary_rows.push(vec![
            x,
            summary.median_extinction_time,
            summary.normalized_offset,
            summary.extinct as f64,
            summary.right_censored as f64,
        ]);
        report.push_str(&format!(
            " x={x}: median T={:.2} (t={:.2}), normalized offset {:.3}, censored {};",
            summary.median_extinction_time,
            extinction_scale(x),
            summary.normalized_offset,
            summary.right_censored
        ));
    }
    write_table(
        &dir.join("extinction.csv"),
        "bbm.extinction.v1",
        &["x", "replicate", "extinction_time"],
        &rows,
    )?;
    write_table(
        &dir.join("extinction_summary.csv"),
        "bbm.extinction-summary.v1",
        &["x", "median_t", "normalized_offset", "extinct", "right_censored"],
        &summary_rows,
    )?;
    Ok(report)
}

/// `windows`: tabulate predicted windows for one start height and report the
/// boundary-ODE consistency check.
pub fn windows(config: &ExperimentConfig, cli_out: Option<&Path>) -> Result<String> {
    let dir = out_dir(config, cli_out)?;
    let x = config.x.or(config.x0).context("windows requires `x`")?;
    let w = predicted_windows(x).map_err(anyhow::Error::msg)?;
    let grid = match &config.grid {
        Some(g) => g.points()?,
        None => (0..=90).map(|i| w.t * i as f64 / 100.0).collect(),
    };
    let mut rows = Vec::new();
    for &s in &grid {
        if s >= 0.0 && s < w.t {
            rows.push(vec![
                s,
                w.boundary(s),
                w.ode_boundary(s, 2000.max((s / w.t * 20_000.0) as usize)),
                w.n_exponent(s),
                w.rightmost_center(s),
            ]);
        }
    }
    let dev = w.ode_max_deviation(90, 200);
    let path = dir.join("windows.csv");
    write_table(
        &path,
        "bbm.windows.v1",
        &["s", "boundary", "ode_boundary", "n_exponent", "rightmost_center"],
        &rows,
    )?;
    Ok(format!(
        "windows: x={x}, t={:.4}, ODE max deviation {:.2e} on [0, 0.9t] -> {}",
        w.t,
        dev,
        path.display()
    ))
}
