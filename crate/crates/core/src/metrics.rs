//! Score-level diagnostics of an ordering.
//!
//! These are proxies measured on the score trajectory alone: adjacent score
//! gaps for continuity, windowed standard deviation for local diversity,
//! head/tail means for boundary control, and per-chunk score ranges for
//! cyclic coverage.

use serde::Serialize;
use thiserror::Error;

use crate::ordering::OrderingPlan;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("DimensionError: {0}")]
    DimensionError(String),
    #[error("InvalidWindow: window {window} for a sequence of {n}")]
    InvalidWindow { window: usize, n: usize },
    #[error(
        "InvalidFraction: fraction {q} must lie in (0, 0.5] and select at least one of {n} samples"
    )]
    InvalidFraction { q: f64, n: usize },
    #[error("InvalidLayerCount: {layers} chunks for a sequence of {n}")]
    InvalidLayerCount { layers: usize, n: usize },
}

pub type Result<T> = std::result::Result<T, MetricsError>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryPoint {
    pub position: usize,
    pub score: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContinuityStats {
    pub mean_abs_gap: f64,
    pub max_gap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiversityStats {
    pub window: usize,
    pub mean_window_stddev: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryProfile {
    pub fraction: f64,
    pub head_mean: f64,
    pub tail_mean: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChunkRange {
    pub min: f64,
    pub max: f64,
}

fn ordered_scores(plan: &OrderingPlan, scores: &[f64]) -> Result<Vec<f64>> {
    if plan.len() != scores.len() {
        return Err(MetricsError::DimensionError(format!(
            "plan has {} positions but there are {} scores",
            plan.len(),
            scores.len()
        )));
    }
    if let Some(&bad) = plan.permutation.iter().find(|&&i| i >= scores.len()) {
        return Err(MetricsError::DimensionError(format!(
            "plan index {bad} is out of range for {} scores",
            scores.len()
        )));
    }
    Ok(plan.apply(scores).collect())
}

pub fn trajectory(plan: &OrderingPlan, scores: &[f64]) -> Result<Vec<TrajectoryPoint>> {
    Ok(ordered_scores(plan, scores)?
        .into_iter()
        .enumerate()
        .map(|(position, score)| TrajectoryPoint { position, score })
        .collect())
}

pub fn continuity_stats(plan: &OrderingPlan, scores: &[f64]) -> Result<ContinuityStats> {
    let seq = ordered_scores(plan, scores)?;
    if seq.len() < 2 {
        return Err(MetricsError::DimensionError(
            "continuity needs at least two samples".into(),
        ));
    }
    let gaps = seq.windows(2).map(|w| (w[1] - w[0]).abs());
    let (sum, max) = gaps.fold((0.0, 0.0f64), |(s, m), g| (s + g, m.max(g)));
    Ok(ContinuityStats {
        mean_abs_gap: sum / (seq.len() - 1) as f64,
        max_gap: max,
    })
}

fn population_stddev(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt()
}

/// Mean over contiguous output buckets of size `window` (last one may be
/// short) of the population standard deviation of scores in the bucket.
pub fn local_diversity(
    plan: &OrderingPlan,
    scores: &[f64],
    window: usize,
) -> Result<DiversityStats> {
    let seq = ordered_scores(plan, scores)?;
    if window < 1 || window > seq.len() {
        return Err(MetricsError::InvalidWindow {
            window,
            n: seq.len(),
        });
    }
    let chunks = seq.chunks(window);
    let count = chunks.len();
    let total: f64 = chunks.map(population_stddev).sum();
    Ok(DiversityStats {
        window,
        mean_window_stddev: total / count as f64,
    })
}

/// Mean score of the first and last `floor(q * N)` output positions.
pub fn boundary_profile(plan: &OrderingPlan, scores: &[f64], q: f64) -> Result<BoundaryProfile> {
    let seq = ordered_scores(plan, scores)?;
    let n = seq.len();
    let k = (q * n as f64).floor() as usize;
    if !(q > 0.0 && q <= 0.5) || k < 1 {
        return Err(MetricsError::InvalidFraction { q, n });
    }
    let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;
    Ok(BoundaryProfile {
        fraction: q,
        head_mean: mean(&seq[..k]),
        tail_mean: mean(&seq[n - k..]),
    })
}

/// Sizes of `chunks` contiguous pieces of a length-`n` sequence, the first
/// `n % chunks` one longer than the rest. These coincide with the folding
/// cycles of an `L`-layer fold.
pub fn balanced_chunk_sizes(n: usize, chunks: usize) -> Vec<usize> {
    let base = n / chunks;
    let extra = n % chunks;
    (0..chunks).map(|l| base + usize::from(l < extra)).collect()
}

/// Score range observed in each of `layers` contiguous output chunks.
pub fn cycle_coverage(
    plan: &OrderingPlan,
    scores: &[f64],
    layers: usize,
) -> Result<Vec<ChunkRange>> {
    let seq = ordered_scores(plan, scores)?;
    if layers < 1 || layers > seq.len() {
        return Err(MetricsError::InvalidLayerCount {
            layers,
            n: seq.len(),
        });
    }
    let mut start = 0;
    let mut out = Vec::with_capacity(layers);
    for size in balanced_chunk_sizes(seq.len(), layers) {
        let chunk = &seq[start..start + size];
        start += size;
        out.push(ChunkRange {
            min: chunk.iter().copied().fold(f64::INFINITY, f64::min),
            max: chunk.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        });
    }
    Ok(out)
}

/// All four summaries at once, as reported by `ordo metrics`.
#[derive(Debug, Clone, Serialize)]
pub struct MetricsSummary {
    pub n: usize,
    pub continuity: Option<ContinuityStats>,
    pub diversity: DiversityStats,
    pub boundary: Option<BoundaryProfile>,
    pub coverage: Vec<ChunkRange>,
}

pub fn summarize(
    plan: &OrderingPlan,
    scores: &[f64],
    window: usize,
    fraction: f64,
    layers: usize,
) -> Result<MetricsSummary> {
    let n = ordered_scores(plan, scores)?.len();
    let continuity = if n >= 2 {
        Some(continuity_stats(plan, scores)?)
    } else {
        None
    };
    let boundary = match boundary_profile(plan, scores, fraction) {
        Ok(b) => Some(b),
        Err(MetricsError::InvalidFraction { .. }) if fraction > 0.0 && fraction <= 0.5 => None,
        Err(e) => return Err(e),
    };
    Ok(MetricsSummary {
        n,
        continuity,
        diversity: local_diversity(plan, scores, window.min(n).max(1))?,
        boundary,
        coverage: cycle_coverage(plan, scores, layers.min(n).max(1))?,
    })
}
