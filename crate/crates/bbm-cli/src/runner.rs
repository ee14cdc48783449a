//! Parallel replicate execution with deterministic aggregation.
//!
//! Replicates are embarrassingly parallel; results are collected in replicate
//! index order so the worker count never changes any numeric output.

use anyhow::Result;
use rayon::prelude::*;

/// Resolve the worker count: explicit flag, then `BBM_WORKERS`, then all cores.
pub fn resolve_workers(cli: Option<usize>, config: Option<usize>) -> usize {
    cli.or(config)
        .or_else(|| {
            std::env::var("BBM_WORKERS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .filter(|&w| w > 0)
        .unwrap_or_else(rayon::current_num_threads)
}

/// Map `f` over replicate ids `0..n` on `workers` threads, preserving order.
pub fn run_replicates<T, F>(n: u64, workers: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()?;
    pool.install(|| (0..n).into_par_iter().map(f).collect())
}
