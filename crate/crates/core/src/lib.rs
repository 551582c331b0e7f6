//! Score-driven ordering of training corpora and
//! scaling-law fitting.
//!
//! * [`ordering`]: curriculum, segment, folding, zig-zag, jitter and the
//!   stair/saw cross strategies, all deterministic given a seed.
//! * [`metrics`]: score-level diagnostics of an ordering.
//! * [`scaling`]: two-stage initialization plus Huber/log-sum-exp fit of
//!   `L(N, D) = E + A/N^alpha + B/D^beta`.
//! * [`io`]: JSONL ingestion, permutation files, manifests and streaming
//!   materialization.
//! * [`cli`]: the `ordo` command line.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod io;
pub mod metrics;
pub mod ordering;
pub mod rng;
pub mod scaling;

pub use ordering::{Direction, OrderError, OrderingPlan, RankIndex, ScoredSample, Strategy};
