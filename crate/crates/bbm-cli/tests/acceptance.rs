//! The acceptance suite as an integration test target: one test per criterion
//! group, each printing its `[PASS]/[FAIL]` line.
//!
//! `BBM_ACCEPT_SEED` overrides the master seed; `BBM_WORKERS` the thread
//! count. Criterion 11 is a known red: the pinned comparison levels sit short
//! of the statistic's asymptotic regime (the stabilization trend itself is
//! reproduced and reported in the criterion detail).

use bbm_cli::acceptance::{self, AcceptanceContext, CriterionResult};

fn ctx() -> AcceptanceContext {
    let seed = std::env::var("BBM_ACCEPT_SEED")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(acceptance::DEFAULT_SEED);
    let workers = std::env::var("BBM_WORKERS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(rayon_threads);
    AcceptanceContext::new(seed, workers)
}

fn rayon_threads() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

fn assert_all(results: &[CriterionResult]) {
    for r in results {
        println!("{}", r.line());
    }
    let failed: Vec<&CriterionResult> = results.iter().filter(|r| !r.pass).collect();
    assert!(
        failed.is_empty(),
        "{} criterion(s) failed:\n{}",
        failed.len(),
        failed
            .iter()
            .map(|r| r.line())
            .collect::<Vec<_>>()
            .join("\n")
    );
}

#[test]
fn criteria_01_02_strip_mean_laws() {
    assert_all(&acceptance::strip_mean_laws(&ctx()).unwrap());
}

#[test]
fn criterion_03_martingale_identity() {
    assert_all(&[acceptance::martingale_identity(&ctx()).unwrap()]);
}

#[test]
fn criterion_04_moment_functionals() {
    assert_all(&[acceptance::moment_functionals(&ctx()).unwrap()]);
}

#[test]
fn criterion_05_kernel_cross_validation() {
    assert_all(&[acceptance::kernel_cross_validation(&ctx()).unwrap()]);
}

#[test]
fn criteria_06_to_09_population_sweep() {
    let sweep = acceptance::run_population_sweep(&ctx()).unwrap();
    assert_all(&acceptance::population_criteria(&sweep).unwrap());
}

#[test]
fn criterion_10_extinction_window() {
    assert_all(&[acceptance::extinction_window(&ctx()).unwrap()]);
}

#[test]
fn criterion_11_neveu_statistic() {
    // Faithful to the stated levels and threshold. Honest status: the
    // simulator reproduces the stabilization trend (KS shrinks as the levels
    // grow, and the result is insensitive to the substep), but the true KS
    // distance between the y=4 and y=6 scaled distributions is ~0.16, above
    // the pinned 0.08. This red documents that gap rather than papering over
    // it; see the criterion detail line for the trend evidence.
    assert_all(&[acceptance::neveu_statistic(&ctx()).unwrap()]);
}

#[test]
fn criterion_12_curved_envelope() {
    assert_all(&[acceptance::curved_envelope(&ctx()).unwrap()]);
}
