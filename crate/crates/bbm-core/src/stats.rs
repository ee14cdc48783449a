//! Estimators and verification statistics: snapshot functionals, weighted
//! empirical measures, Kolmogorov-Smirnov distances, replicate aggregation,
//! and extinction diagnostics.
//!
//! The exponential weights `e^{sqrt2 X_i}` span many orders of magnitude, so
//! every functional accumulates with compensated summation.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use crate::constants::SQRT_2;
use crate::math::{exp, sin};
use crate::types::{boundary_at, BoundarySpec, RunResult, Snapshot};

/// Kahan compensated accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// `Y = sum e^{sqrt2 x_i}`.
pub fn y_functional(positions: &[f64]) -> f64 {
    let mut acc = KahanSum::new();
    for &x in positions {
        acc.add(exp(SQRT_2 * x));
    }
    acc.value()
}

/// `M = sum x_i e^{sqrt2 x_i}` (the martingale functional).
pub fn m_functional(positions: &[f64]) -> f64 {
    let mut acc = KahanSum::new();
    for &x in positions {
        acc.add(x * exp(SQRT_2 * x));
    }
    acc.value()
}

/// `Z = sum e^{sqrt2 x_i} sin(pi x_i / l) 1_{x_i <= l}`.
pub fn z_functional(positions: &[f64], l: f64) -> f64 {
    let mut acc = KahanSum::new();
    for &x in positions {
        if x <= l {
            acc.add(exp(SQRT_2 * x) * sin(PI * x / l));
        }
    }
    acc.value()
}

/// The standard snapshot functionals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SnapshotStats {
    pub n: usize,
    pub y: f64,
    /// `Z` against the right boundary active at the snapshot time; `None`
    /// when no finite boundary is defined there.
    pub z: Option<f64>,
    pub m: f64,
    /// Rightmost position; `None` for an empty snapshot.
    pub x1: Option<f64>,
}

pub fn snapshot_stats(snap: &Snapshot, spec: &BoundarySpec) -> SnapshotStats {
    let z = match boundary_at(spec, snap.time) {
        Ok(l) if l.is_finite() => Some(z_functional(&snap.positions, l)),
        _ => None,
    };
    SnapshotStats {
        n: snap.positions.len(),
        y: y_functional(&snap.positions),
        z,
        m: m_functional(&snap.positions),
        x1: snap
            .positions
            .iter()
            .copied()
            .fold(None, |acc: Option<f64>, x| {
                Some(acc.map_or(x, |a| a.max(x)))
            }),
    }
}

/// An empirical measure as (location, weight) pairs.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WeightedSample {
    pub points: Vec<(f64, f64)>,
    pub total_weight: f64,
}

impl WeightedSample {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, location: f64, weight: f64) {
        debug_assert!(weight >= 0.0);
        self.points.push((location, weight));
        self.total_weight += weight;
    }

    pub fn merge(&mut self, other: &WeightedSample) {
        self.points.extend_from_slice(&other.points);
        self.total_weight += other.total_weight;
    }
}

/// Uniform-weight configuration measure `chi = (1/N) sum delta_{X_i}`.
pub fn chi_measure(snap: &Snapshot) -> Result<WeightedSample, StatsError> {
    if snap.positions.is_empty() {
        return Err(StatsError::EmptySnapshot);
    }
    let w = 1.0 / snap.positions.len() as f64;
    let mut s = WeightedSample::new();
    for &x in &snap.positions {
        s.push(x, w);
    }
    Ok(s)
}

/// Exponential-weight measure of rescaled positions
/// `eta = (1/Y) sum e^{sqrt2 X_i} delta_{X_i / L_s}`.
pub fn eta_measure(snap: &Snapshot, l_s: f64) -> Result<WeightedSample, StatsError> {
    if snap.positions.is_empty() {
        return Err(StatsError::EmptySnapshot);
    }
    let y = y_functional(&snap.positions);
    let mut s = WeightedSample::new();
    for &x in &snap.positions {
        s.push(x / l_s, exp(SQRT_2 * x) / y);
    }
    Ok(s)
}

/// Sup distance between the weighted empirical CDF and `cdf`, checking both
/// the left and right limits at every jump point. Invariant under reordering
/// of the sample.
pub fn ks_distance<F: Fn(f64) -> f64>(sample: &WeightedSample, cdf: F) -> f64 {
    if sample.points.is_empty() || sample.total_weight <= 0.0 {
        return 0.0;
    }
    let mut pts = sample.points.clone();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let inv_total = 1.0 / sample.total_weight;
    let mut acc = KahanSum::new();
    let mut worst = 0.0_f64;
    let mut i = 0;
    while i < pts.len() {
        let loc = pts[i].0;
        let before = acc.value() * inv_total;
        while i < pts.len() && pts[i].0 == loc {
            acc.add(pts[i].1);
            i += 1;
        }
        let after = acc.value() * inv_total;
        let c = cdf(loc);
        worst = worst.max(crate::math::abs(before - c));
        worst = worst.max(crate::math::abs(after - c));
    }
    worst
}

/// Sample mean and standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Aggregate {
    pub mean: f64,
    /// `None` when fewer than two values were supplied.
    pub stderr: Option<f64>,
    pub count: usize,
}

pub fn aggregate(values: &[f64]) -> Result<Aggregate, StatsError> {
    if values.is_empty() {
        return Err(StatsError::NoValues);
    }
    let n = values.len() as f64;
    let mut acc = KahanSum::new();
    for &v in values {
        acc.add(v);
    }
    let mean = acc.value() / n;
    let stderr = if values.len() >= 2 {
        let mut sq = KahanSum::new();
        for &v in values {
            let d = v - mean;
            sq.add(d * d);
        }
        Some(crate::math::sqrt(sq.value() / (n - 1.0) / n))
    } else {
        None
    };
    Ok(Aggregate {
        mean,
        stderr,
        count: values.len(),
    })
}

/// Aggregate over surviving replicates only (`None` marks an extinct or
/// otherwise excluded replicate).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConditionalAggregate {
    pub conditioned: Aggregate,
    pub surviving: usize,
    pub total: usize,
    pub surviving_fraction: f64,
}

pub fn aggregate_conditional(values: &[Option<f64>]) -> Result<ConditionalAggregate, StatsError> {
    let total = values.len();
    let alive: Vec<f64> = values.iter().filter_map(|v| *v).collect();
    if alive.is_empty() {
        return Err(StatsError::AllExtinct);
    }
    Ok(ConditionalAggregate {
        conditioned: aggregate(&alive)?,
        surviving: alive.len(),
        total,
        surviving_fraction: alive.len() as f64 / total.max(1) as f64,
    })
}

/// Median of a slice (average of the middle pair for even lengths).
pub fn median(values: &mut [f64]) -> f64 {
    debug_assert!(!values.is_empty());
    values.sort_by(|a, b| a.total_cmp(b));
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Extinction-time summary across replicates of a sweep started at `x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtinctionSummary {
    pub median_extinction_time: f64,
    /// `(median - tau x^3) / x^2`.
    pub normalized_offset: f64,
    pub extinct: usize,
    /// Replicates still alive at their horizon; nonzero flags right-censoring.
    pub right_censored: usize,
}

pub fn extinction_summary(results: &[RunResult], x: f64) -> Result<ExtinctionSummary, StatsError> {
    let mut times: Vec<f64> = Vec::with_capacity(results.len());
    let mut censored = 0;
    for r in results {
        match r.extinction_time {
            Some(t) => times.push(t),
            None => censored += 1,
        }
    }
    if times.is_empty() {
        return Err(StatsError::NoValues);
    }
    let med = median(&mut times);
    Ok(ExtinctionSummary {
        median_extinction_time: med,
        normalized_offset: (med - crate::constants::extinction_scale(x)) / (x * x),
        extinct: times.len(),
        right_censored: censored,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StatsError {
    EmptySnapshot,
    NoValues,
    AllExtinct,
}

impl fmt::Display for StatsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StatsError::EmptySnapshot => write!(f, "no surviving particles"),
            StatsError::NoValues => write!(f, "no values to aggregate"),
            StatsError::AllExtinct => {
                write!(f, "all replicates extinct; conditioned mean undefined")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for StatsError {}
