//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::ops::Range;

use ordo::ordering::{samples_from_scores, CrossConfig, CrossMode};
use ordo::{Direction, RankIndex};
use rand_xoshiro::rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

pub fn rank(scores: &[f64], direction: Direction) -> RankIndex {
    ordo::ordering::rank_by_score(&samples_from_scores(scores), direction).unwrap()
}

/// Ascending order of sample indices, computed without the library.
pub fn ascending(scores: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).unwrap().then(a.cmp(&b)));
    idx
}

/// Brute-force FO/ZIG: positions sorted by (i mod L, i), odd cycles reversed
/// for the zig-zag variant.
pub fn brute_fold(sorted: &[usize], layers: usize, zigzag: bool) -> Vec<usize> {
    let mut keyed: Vec<(usize, usize)> = (0..sorted.len()).map(|i| (i % layers, i)).collect();
    keyed.sort();
    let mut out = Vec::with_capacity(sorted.len());
    for cycle in 0..layers {
        let mut chunk: Vec<usize> = keyed
            .iter()
            .filter(|(c, _)| *c == cycle)
            .map(|&(_, i)| sorted[i])
            .collect();
        if zigzag && cycle % 2 == 1 {
            chunk.reverse();
        }
        out.extend(chunk);
    }
    out
}

/// Reference generator: `rand_xoshiro` seeded through its SplitMix64
/// `seed_from_u64`, bounded draws by widening multiply with rejection.
pub struct RefRng(Xoshiro256StarStar);

impl RefRng {
    pub fn new(seed: u64) -> Self {
        Self(Xoshiro256StarStar::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    pub fn below(&mut self, bound: u64) -> u64 {
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let m = self.0.next_u64() as u128 * bound as u128;
            if (m as u64) >= threshold {
                return (m >> 64) as u64;
            }
        }
    }

    pub fn uniform(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn shuffle(&mut self, items: &mut [usize]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}

pub fn ref_jitter(items: &[usize], window: usize, seed: u64) -> Vec<usize> {
    let mut rng = RefRng::new(seed);
    let mut out = items.to_vec();
    let mut start = 0;
    while start < out.len() {
        let end = (start + window).min(out.len());
        rng.shuffle(&mut out[start..end]);
        start = end;
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    Stable(Range<usize>),
    Transition(Range<usize>),
}

/// Rank ranges of the stable and transition regions, in output order.
pub fn cross_regions(n: usize, cfg: &CrossConfig) -> Vec<Region> {
    let mut regions = Vec::new();
    let mut cursor = 0;
    for &p in &cfg.split_points {
        regions.push(Region::Stable(cursor..p - cfg.radius));
        regions.push(Region::Transition(p - cfg.radius..p + cfg.radius));
        cursor = p + cfg.radius;
    }
    regions.push(Region::Stable(cursor..n));
    regions
}

/// Expected STR/SAW output (before jitter) for scores equal to ranks.
pub fn brute_cross(n: usize, cfg: &CrossConfig) -> Vec<usize> {
    let mut out = Vec::with_capacity(n);
    for region in cross_regions(n, cfg) {
        match region {
            Region::Stable(r) => out.extend(r),
            Region::Transition(r) => {
                let ranks: Vec<usize> = r.collect();
                out.extend(brute_fold(&ranks, cfg.layers, cfg.mode == CrossMode::Saw));
            }
        }
    }
    out
}

/// A random valid cross configuration for `n`, or `None` when `n` is too
/// small for one transition region.
pub fn random_cross_config(n: usize, rng: &mut RefRng, mode: CrossMode) -> Option<CrossConfig> {
    if n < 8 {
        return None;
    }
    let sections = 2 + rng.below(4) as usize;
    let max_rho = n / (2 * sections + 2);
    if max_rho < 1 {
        return None;
    }
    let radius = 1 + rng.below(max_rho as u64) as usize;
    let mut split_points = Vec::new();
    let mut lo = radius;
    for k in 0..sections - 1 {
        let remaining = (sections - 2 - k) * (2 * radius + 1);
        let hi = n - radius - remaining;
        if lo > hi {
            return None;
        }
        let p = lo + rng.below((hi - lo + 1) as u64) as usize;
        split_points.push(p);
        lo = p + 2 * radius + 1;
    }
    let layers = 1 + rng.below((2 * radius).min(6) as u64) as usize;
    Some(CrossConfig {
        split_points,
        radius,
        layers,
        mode,
        jit_window: 0,
    })
}

/// Strictly increasing scores with increments uniform in `[1, 2)`.
pub fn monotone_scores(n: usize, rng: &mut RefRng) -> Vec<f64> {
    let mut s = Vec::with_capacity(n);
    let mut x = rng.uniform() * 10.0;
    for _ in 0..n {
        s.push(x);
        x += 1.0 + rng.uniform();
    }
    s
}

pub fn max_adjacent_gap(seq: &[f64]) -> f64 {
    seq.windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .fold(0.0, f64::max)
}

pub fn min_spacing(sorted: &[f64]) -> f64 {
    sorted
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min)
}

pub fn max_spacing(sorted: &[f64]) -> f64 {
    sorted.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
}

pub const MODEL_SIZES: [f64; 4] = [1.6e8, 4.7e8, 1.0e9, 1.7e9];

/// Fitted constants of the random-order baseline.
pub fn random_baseline_constants() -> ordo::scaling::ScalingConstants {
    ordo::scaling::ScalingConstants {
        a: 482.0,
        b: 5120.0,
        e: 1.693,
        alpha: 0.354,
        beta: 0.295,
    }
}

impl RefRng {
    /// Standard normal by Box-Muller.
    pub fn normal(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}

/// 4 model sizes x 20 checkpoints 2.5B tokens apart. With `noise`, each loss
/// is multiplied by `1 + sigma * z`, z standard normal.
pub fn checkpoint_grid(
    c: &ordo::scaling::ScalingConstants,
    noise: Option<(u64, f64)>,
) -> Vec<ordo::scaling::ScalingObservation> {
    let mut rng = noise.map(|(seed, _)| RefRng::new(seed));
    let mut out = Vec::new();
    for n in MODEL_SIZES {
        for k in 1..=20 {
            let d = 2.5e9 * k as f64;
            let mut loss = c.e + c.a / n.powf(c.alpha) + c.b / d.powf(c.beta);
            if let (Some(rng), Some((_, sigma))) = (rng.as_mut(), noise) {
                loss *= 1.0 + sigma * rng.normal();
            }
            out.push(ordo::scaling::ScalingObservation::new(n, d, loss).unwrap());
        }
    }
    out
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    ((got - want) / want).abs()
}

/// Central differences of the joint objective in log-parameter space.
pub fn numeric_gradient(
    p: &ordo::scaling::LogParams,
    obs: &[ordo::scaling::ScalingObservation],
    delta: f64,
) -> [f64; 5] {
    let x = p.to_array();
    let mut g = [0.0; 5];
    for k in 0..5 {
        let h = 1e-6 * x[k].abs().max(1.0);
        let mut hi = x;
        let mut lo = x;
        hi[k] += h;
        lo[k] -= h;
        let f = |v: [f64; 5]| {
            ordo::scaling::joint_objective(&ordo::scaling::LogParams::from_array(v), obs, delta)
                .unwrap()
        };
        g[k] = (f(hi) - f(lo)) / (2.0 * h);
    }
    g
}

/// A random point near the fitted region: each log-parameter perturbed
/// independently.
pub fn random_log_params(rng: &mut RefRng) -> ordo::scaling::LogParams {
    let base = random_baseline_constants().log_params();
    ordo::scaling::LogParams {
        a: base.a + 2.0 * (rng.uniform() - 0.5),
        b: base.b + 2.0 * (rng.uniform() - 0.5),
        e: base.e + 0.6 * (rng.uniform() - 0.5),
        alpha: base.alpha * (0.5 + rng.uniform()),
        beta: base.beta * (0.5 + rng.uniform()),
    }
}
