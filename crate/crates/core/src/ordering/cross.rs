use serde::{Deserialize, Serialize};

use super::fold::fold_slice;
use super::jitter::jitter_in_place;
use super::{Direction, OrderError, OrderingPlan, RankIndex, Result, Strategy};
use crate::rng::OrderRng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CrossMode {
    /// Folding inside transition regions.
    Str,
    /// Zig-zag inside transition regions.
    Saw,
}

/// Stair/saw layout over the ascending ranking.
///
/// Transition region `l` is the rank range `[p_l - radius, p_l + radius)`;
/// stable regions fill the space between them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossConfig {
    pub split_points: Vec<usize>,
    pub radius: usize,
    pub layers: usize,
    pub mode: CrossMode,
    /// Jitter window applied after concatenation; 0 disables it.
    pub jit_window: usize,
}

impl CrossConfig {
    pub const DEFAULT_LAYERS: usize = 2;
    pub const DEFAULT_JIT_WINDOW: usize = 5_000;
    pub const DEFAULT_SECTIONS: usize = 3;

    /// `sections - 1` evenly spaced split points `floor(l * n / sections)`
    /// with radius `floor(n / (4 * sections))`, two layers and a 5000-wide
    /// jitter window.
    pub fn uniform(n: usize, sections: usize, mode: CrossMode) -> Self {
        let sections = sections.max(1);
        Self {
            split_points: (1..sections).map(|l| l * n / sections).collect(),
            radius: n / (4 * sections),
            layers: Self::DEFAULT_LAYERS,
            mode,
            jit_window: Self::DEFAULT_JIT_WINDOW,
        }
    }

    pub fn section_count(&self) -> usize {
        self.split_points.len() + 1
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let bad = |msg: String| Err(OrderError::InvalidCrossConfig(msg));
        if self.split_points.is_empty() {
            return bad("at least one split point is required".into());
        }
        if self.radius == 0 {
            return bad("radius must be positive".into());
        }
        let rho = self.radius;
        for w in self.split_points.windows(2) {
            if w[1] <= w[0] {
                return bad(format!(
                    "split points {} and {} are not increasing",
                    w[0], w[1]
                ));
            }
            if w[1] - w[0] <= 2 * rho {
                return bad(format!(
                    "split points {} and {} are not more than 2*radius={} apart",
                    w[0],
                    w[1],
                    2 * rho
                ));
            }
        }
        let first = self.split_points[0];
        let last = *self.split_points.last().unwrap();
        if first == 0 || last >= n {
            return bad(format!("split points must lie in (0, {n})"));
        }
        if first < rho {
            return bad(format!(
                "first split point {first} is closer than radius {rho} to 0"
            ));
        }
        if last + rho > n {
            return bad(format!(
                "last split point {last} plus radius {rho} exceeds N={n}"
            ));
        }
        if self.layers < 1 || self.layers > 2 * rho {
            return Err(OrderError::InvalidLayerCount {
                layers: self.layers,
                n: 2 * rho,
            });
        }
        Ok(())
    }
}

/// Stair (STR) or saw (SAW) ordering.
///
/// Stable regions keep ascending order; each transition region is folded
/// (STR) or zig-zagged (SAW) with `cfg.layers` layers; regions are
/// concatenated in rank order and, when `cfg.jit_window > 0`, the whole
/// sequence is jittered with `seed`.
pub fn cross_order(rank: &RankIndex, cfg: &CrossConfig, seed: u64) -> Result<OrderingPlan> {
    rank.expect("cross_order", Direction::Ascending)?;
    let n = rank.len();
    cfg.validate(n)?;
    let sorted = rank.order();
    let rho = cfg.radius;
    let zigzag = cfg.mode == CrossMode::Saw;

    let mut out = Vec::with_capacity(n);
    let mut cursor = 0;
    for &p in &cfg.split_points {
        out.extend_from_slice(&sorted[cursor..p - rho]);
        out.extend(fold_slice(&sorted[p - rho..p + rho], cfg.layers, zigzag)?);
        cursor = p + rho;
    }
    out.extend_from_slice(&sorted[cursor..]);

    let strategy = match cfg.mode {
        CrossMode::Str => Strategy::Str,
        CrossMode::Saw => Strategy::Saw,
    };
    let mut seed_used = None;
    if cfg.jit_window > 0 {
        jitter_in_place(&mut out, cfg.jit_window, &mut OrderRng::from_seed(seed));
        seed_used = Some(seed);
    }
    let mut plan = OrderingPlan::new(strategy, out);
    plan.params.layers = Some(cfg.layers);
    plan.params.jit_window = (cfg.jit_window > 0).then_some(cfg.jit_window);
    plan.params.cross = Some(cfg.clone());
    plan.seed = seed_used;
    Ok(plan)
}
