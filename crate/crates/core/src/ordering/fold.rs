use super::{Direction, OrderError, OrderingPlan, RankIndex, Result, Strategy};

/// Folding-layer counts worth sweeping.
pub const FOLD_LAYER_PRESETS: [usize; 6] = [2, 3, 4, 5, 20, 100];

/// Cycle `l` holds every `layers`-th element starting at `l`. With `zigzag`
/// set, odd cycles are emitted back to front.
pub(crate) fn fold_slice(sorted: &[usize], layers: usize, zigzag: bool) -> Result<Vec<usize>> {
    let n = sorted.len();
    if layers < 1 || layers > n {
        return Err(OrderError::InvalidLayerCount { layers, n });
    }
    let mut out = Vec::with_capacity(n);
    for l in 0..layers {
        let start = out.len();
        out.extend(sorted[l..].iter().step_by(layers).copied());
        if zigzag && l % 2 == 1 {
            out[start..].reverse();
        }
    }
    Ok(out)
}

fn folded(rank: &RankIndex, layers: usize, zigzag: bool) -> Result<OrderingPlan> {
    let (op, strategy) = if zigzag {
        ("zigzag_order", Strategy::Zig)
    } else {
        ("fold_order", Strategy::Fo)
    };
    rank.expect(op, Direction::Ascending)?;
    let mut plan = OrderingPlan::new(strategy, fold_slice(rank.order(), layers, zigzag)?);
    plan.params.layers = Some(layers);
    Ok(plan)
}

/// Folding ordering: ascending ranks congruent to `l` mod `layers` form
/// cycle `l`; cycles are concatenated in order.
pub fn fold_order(rank: &RankIndex, layers: usize) -> Result<OrderingPlan> {
    folded(rank, layers, false)
}

/// Zig-zag ordering: folding with every odd cycle reversed.
pub fn zigzag_order(rank: &RankIndex, layers: usize) -> Result<OrderingPlan> {
    folded(rank, layers, true)
}
