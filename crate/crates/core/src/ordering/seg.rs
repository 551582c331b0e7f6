use serde::{Deserialize, Serialize};

use super::{Direction, OrderError, OrderingPlan, RankIndex, Result, Strategy};
use crate::rng::OrderRng;

/// A closed percentile range of the descending ranking; percentile 0 is the
/// highest score. Discretized to the half-open rank range
/// `[floor(start * N), floor(end * N))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PercentileInterval {
    pub start: f64,
    pub end: f64,
}

impl PercentileInterval {
    pub fn new(start: f64, end: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&start) || !(0.0..=1.0).contains(&end) || start >= end {
            return Err(OrderError::InvalidInterval(start, end));
        }
        Ok(Self { start, end })
    }

    pub fn rank_range(&self, n: usize) -> (usize, usize) {
        (
            percentile_to_rank(self.start, n),
            percentile_to_rank(self.end, n),
        )
    }
}

/// `floor(p * n)`, snapping products that are within float noise of an
/// integer (0.29 * 100 evaluates to 28.999999999999996).
pub(crate) fn percentile_to_rank(p: f64, n: usize) -> usize {
    let x = p * n as f64;
    let nearest = x.round();
    let r = if (x - nearest).abs() <= 1e-9 * nearest.abs().max(1.0) {
        nearest
    } else {
        x.floor()
    };
    (r.max(0.0) as usize).min(n)
}

/// Named segment layouts: `h` means the top-scored decile, `l` the bottom,
/// and the suffixes give which boundary (start, end) they occupy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegPreset {
    H10,
    L90,
    H90,
    /// As published this layout never covers `[0, 0.1]`; it needs
    /// `allow_gaps` to run.
    L10,
    H10L10,
    L10H10,
    L10L10,
    H10H10,
}

impl SegPreset {
    pub const ALL: [SegPreset; 8] = [
        SegPreset::H10,
        SegPreset::L90,
        SegPreset::H90,
        SegPreset::L10,
        SegPreset::H10L10,
        SegPreset::L10H10,
        SegPreset::L10L10,
        SegPreset::H10H10,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SegPreset::H10 => "h10",
            SegPreset::L90 => "l90",
            SegPreset::H90 => "h90",
            SegPreset::L10 => "l10",
            SegPreset::H10L10 => "h10-l10",
            SegPreset::L10H10 => "l10-h10",
            SegPreset::L10L10 => "l10-l10",
            SegPreset::H10H10 => "h10-h10",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    pub fn intervals(self) -> Vec<PercentileInterval> {
        let iv = |a, b| PercentileInterval { start: a, end: b };
        match self {
            SegPreset::H10 => vec![iv(0.0, 0.1), iv(0.1, 1.0)],
            SegPreset::L90 => vec![iv(0.1, 1.0), iv(0.0, 0.1)],
            SegPreset::H90 => vec![iv(0.0, 0.9), iv(0.9, 1.0)],
            SegPreset::L10 => vec![iv(0.9, 1.0), iv(0.1, 0.9)],
            SegPreset::H10L10 => vec![iv(0.0, 0.1), iv(0.1, 0.9), iv(0.9, 1.0)],
            SegPreset::L10H10 => vec![iv(0.9, 1.0), iv(0.1, 0.9), iv(0.0, 0.1)],
            SegPreset::L10L10 => vec![iv(0.9, 1.0), iv(0.0, 0.9), iv(0.9, 1.0)],
            SegPreset::H10H10 => vec![iv(0.0, 0.1), iv(0.1, 1.0), iv(0.0, 0.1)],
        }
    }
}

/// Segment ordering.
///
/// Each descending rank is assigned to the interval containing it; ranks in
/// several intervals pick one uniformly. Segments are then shuffled and
/// concatenated in the order given. The PRNG stream is consumed first by the
/// overlap draws (in descending rank order), then by the segment shuffles
/// (in segment order).
///
/// Ranks covered by no interval are an error unless `allow_gaps`, in which
/// case they are dropped and the plan covers only the retained samples.
pub fn seg_order(
    rank: &RankIndex,
    intervals: &[PercentileInterval],
    seed: u64,
    allow_gaps: bool,
) -> Result<OrderingPlan> {
    rank.expect("seg_order", Direction::Descending)?;
    if intervals.is_empty() {
        return Err(OrderError::InvalidInterval(0.0, 0.0));
    }
    for iv in intervals {
        PercentileInterval::new(iv.start, iv.end)?;
    }
    let n = rank.len();
    let ranges: Vec<(usize, usize)> = intervals.iter().map(|iv| iv.rank_range(n)).collect();

    if !allow_gaps {
        if let Some((start, end)) = first_gap(&ranges, n) {
            return Err(OrderError::UncoveredInterval {
                start,
                end,
                p_start: start as f64 / n as f64,
                p_end: end as f64 / n as f64,
            });
        }
    }

    let mut rng = OrderRng::from_seed(seed);
    let mut segments: Vec<Vec<usize>> = vec![Vec::new(); ranges.len()];
    let mut candidates = Vec::with_capacity(ranges.len());
    for (r, &sample) in rank.order().iter().enumerate() {
        candidates.clear();
        candidates.extend(
            ranges
                .iter()
                .enumerate()
                .filter(|(_, &(lo, hi))| lo <= r && r < hi)
                .map(|(l, _)| l),
        );
        let target = match candidates.len() {
            0 => continue,
            1 => candidates[0],
            k => candidates[rng.index(k)],
        };
        segments[target].push(sample);
    }

    for (l, segment) in segments.iter_mut().enumerate() {
        if segment.is_empty() {
            log::warn!(
                "EmptySegment: interval {} [{}, {}] holds no samples at N={}",
                l,
                intervals[l].start,
                intervals[l].end,
                n
            );
        }
        rng.shuffle(segment);
    }

    let segment_sizes = segments.iter().map(Vec::len).collect();
    let mut plan = OrderingPlan::new(Strategy::Seg, segments.concat());
    plan.params.intervals = Some(intervals.to_vec());
    plan.params.allow_gaps = Some(allow_gaps);
    plan.params.segment_sizes = Some(segment_sizes);
    plan.seed = Some(seed);
    Ok(plan)
}

fn first_gap(ranges: &[(usize, usize)], n: usize) -> Option<(usize, usize)> {
    let mut covered = vec![false; n];
    for &(lo, hi) in ranges {
        covered[lo..hi].iter_mut().for_each(|c| *c = true);
    }
    let start = covered.iter().position(|&c| !c)?;
    let end = covered[start..]
        .iter()
        .position(|&c| c)
        .map_or(n, |off| start + off);
    Some((start, end))
}
