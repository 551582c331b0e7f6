use super::{OrderError, OrderingPlan, Result, Strategy};
use crate::rng::OrderRng;

/// Window used when jittering a plan of the given strategy, if the caller
/// does not pick one.
pub fn default_jit_window(strategy: Strategy) -> usize {
    match strategy {
        Strategy::Fo => 50_000,
        _ => 5_000,
    }
}

/// Shuffles each contiguous bucket `[l*w, min((l+1)*w, N))` in place, in
/// bucket order, from a single seeded stream.
pub(crate) fn jitter_in_place(items: &mut [usize], window: usize, rng: &mut OrderRng) {
    for bucket in items.chunks_mut(window) {
        rng.shuffle(bucket);
    }
}

/// Windowed local shuffle of an existing plan.
pub fn jitter(plan: &OrderingPlan, window: usize, seed: u64) -> Result<OrderingPlan> {
    if window < 1 {
        return Err(OrderError::InvalidWindow);
    }
    let mut out = plan.clone();
    let mut rng = OrderRng::from_seed(seed);
    jitter_in_place(&mut out.permutation, window, &mut rng);
    if plan.strategy != Strategy::Jit {
        out.params.base = Some(plan.strategy);
    }
    out.strategy = Strategy::Jit;
    out.params.jit_window = Some(window);
    out.seed = Some(seed);
    Ok(out)
}
