use super::{Direction, OrderError, OrderingPlan, RankIndex, Result, ScoredSample, Strategy};
use crate::rng::OrderRng;

/// Stable sort of `samples` by score in the requested direction.
pub fn rank_by_score(samples: &[ScoredSample], direction: Direction) -> Result<RankIndex> {
    if samples.is_empty() {
        return Err(OrderError::EmptyCorpus);
    }
    if let Some(bad) = samples.iter().find(|s| !s.score.is_finite()) {
        return Err(OrderError::InvalidScore(bad.id.clone()));
    }
    let mut order: Vec<usize> = (0..samples.len()).collect();
    // sort_by is stable, so equal scores keep ascending original index
    match direction {
        Direction::Ascending => {
            order.sort_by(|&a, &b| samples[a].score.total_cmp(&samples[b].score))
        }
        Direction::Descending => {
            order.sort_by(|&a, &b| samples[b].score.total_cmp(&samples[a].score))
        }
    }
    Ok(RankIndex { order, direction })
}

/// Indices of the `floor(ratio * N)` highest-scored samples, best first.
pub fn select_top_k(rank: &RankIndex, ratio: f64) -> Result<Vec<usize>> {
    rank.expect("select_top_k", Direction::Descending)?;
    if !(ratio > 0.0 && ratio <= 1.0) {
        return Err(OrderError::InvalidRatio(ratio));
    }
    let n = rank.len();
    let k = (ratio * n as f64).floor() as usize;
    if k == 0 {
        return Err(OrderError::EmptySelection { ratio, n });
    }
    Ok(rank.order[..k.min(n)].to_vec())
}

/// Curriculum ordering: ascending score.
pub fn cl_order(rank: &RankIndex) -> Result<OrderingPlan> {
    rank.expect("cl_order", Direction::Ascending)?;
    Ok(OrderingPlan::new(Strategy::Cl, rank.order.clone()))
}

/// Seeded uniform shuffle of `[0, n)`; the usual baseline.
pub fn random_order(n: usize, seed: u64) -> OrderingPlan {
    let mut permutation: Vec<usize> = (0..n).collect();
    OrderRng::from_seed(seed).shuffle(&mut permutation);
    let mut plan = OrderingPlan::new(Strategy::Random, permutation);
    plan.seed = Some(seed);
    plan
}
