//! Score-driven ordering permutations.
//!
//! Every strategy consumes a [`RankIndex`] (the stable sort of the corpus by
//! score) and produces an [`OrderingPlan`]: a permutation mapping output
//! position to original sample index. All constructors are pure functions of
//! their inputs and seed.

mod cross;
mod fold;
mod jitter;
mod rank;
mod seg;
mod validate;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cross::{cross_order, CrossConfig, CrossMode};
pub use fold::{fold_order, zigzag_order, FOLD_LAYER_PRESETS};
pub use jitter::{default_jit_window, jitter};
pub use rank::{cl_order, random_order, rank_by_score, select_top_k};
pub use seg::{seg_order, PercentileInterval, SegPreset};
pub use validate::{validate_permutation, validate_plan, validate_selection, PlanViolation};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrderError {
    #[error("EmptyCorpus: no samples to order")]
    EmptyCorpus,
    #[error("InvalidScore: sample {0} has a non-finite score")]
    InvalidScore(String),
    #[error("InvalidRatio: selection ratio {0} is outside (0, 1]")]
    InvalidRatio(f64),
    #[error("EmptySelection: ratio {ratio} keeps zero of {n} samples")]
    EmptySelection { ratio: f64, n: usize },
    #[error("WrongDirection: {op} expects a {expected:?} rank index")]
    WrongDirection {
        op: &'static str,
        expected: Direction,
    },
    #[error("InvalidInterval: [{0}, {1}] is not a percentile interval with start < end")]
    InvalidInterval(f64, f64),
    #[error("UncoveredInterval: descending ranks {start}..{end} (percentile {p_start:.4}..{p_end:.4}) fall in no interval")]
    UncoveredInterval {
        start: usize,
        end: usize,
        p_start: f64,
        p_end: f64,
    },
    #[error("InvalidLayerCount: {layers} layers for a sequence of {n}")]
    InvalidLayerCount { layers: usize, n: usize },
    #[error("InvalidWindow: window must be at least 1")]
    InvalidWindow,
    #[error("InvalidCrossConfig: {0}")]
    InvalidCrossConfig(String),
}

pub type Result<T> = std::result::Result<T, OrderError>;

/// Where a sample's payload lives.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PayloadRef {
    /// Byte range of the record inside its source file (terminator excluded).
    Span {
        offset: u64,
        len: u64,
    },
    Inline(String),
}

/// One scored corpus record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredSample {
    pub id: String,
    pub score: f64,
    pub payload: PayloadRef,
    pub token_count: Option<u64>,
}

impl ScoredSample {
    pub fn inline(id: impl Into<String>, score: f64) -> Self {
        Self {
            id: id.into(),
            score,
            payload: PayloadRef::Inline(String::new()),
            token_count: None,
        }
    }
}

/// Builds id-less samples from raw scores; ids are the positions.
pub fn samples_from_scores(scores: &[f64]) -> Vec<ScoredSample> {
    scores
        .iter()
        .enumerate()
        .map(|(i, &s)| ScoredSample::inline(i.to_string(), s))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Ascending,
    Descending,
}

/// Samples sorted by score. Ties keep ascending original-index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankIndex {
    order: Vec<usize>,
    direction: Direction,
}

impl RankIndex {
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub(crate) fn expect(&self, op: &'static str, expected: Direction) -> Result<()> {
        if self.direction == expected {
            Ok(())
        } else {
            Err(OrderError::WrongDirection { op, expected })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Cl,
    Seg,
    Fo,
    Zig,
    Jit,
    Str,
    Saw,
    Random,
    External,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Cl => "cl",
            Strategy::Seg => "seg",
            Strategy::Fo => "fo",
            Strategy::Zig => "zig",
            Strategy::Jit => "jit",
            Strategy::Str => "str",
            Strategy::Saw => "saw",
            Strategy::Random => "random",
            Strategy::External => "external",
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters that produced a plan. Only the fields relevant to the
/// strategy are set.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PlanParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub layers: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intervals: Option<Vec<PercentileInterval>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub allow_gaps: Option<bool>,
    /// Sizes of the SEG segments in output order.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub segment_sizes: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross: Option<CrossConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jit_window: Option<usize>,
    /// Strategy of the plan a jitter pass was applied to.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base: Option<Strategy>,
}

/// A strategy-tagged permutation: `permutation[pos]` is the original index
/// of the sample placed at output position `pos`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderingPlan {
    pub strategy: Strategy,
    pub permutation: Vec<usize>,
    pub params: PlanParams,
    pub seed: Option<u64>,
}

impl OrderingPlan {
    pub fn new(strategy: Strategy, permutation: Vec<usize>) -> Self {
        Self {
            strategy,
            permutation,
            params: PlanParams::default(),
            seed: None,
        }
    }

    pub fn len(&self) -> usize {
        self.permutation.len()
    }

    pub fn is_empty(&self) -> bool {
        self.permutation.is_empty()
    }

    /// Scores in output order.
    pub fn apply<'a>(&'a self, scores: &'a [f64]) -> impl Iterator<Item = f64> + 'a {
        self.permutation.iter().map(move |&i| scores[i])
    }

    /// Little-endian bytes of the permutation, used for byte-level
    /// determinism checks.
    pub fn to_le_bytes(&self) -> Vec<u8> {
        self.permutation
            .iter()
            .flat_map(|&i| (i as u64).to_le_bytes())
            .collect()
    }
}
