//! Jitter shuffles inside fixed windows: samples stay near their planned
//! position while nearby batches mix scores.

use ordo::metrics::local_diversity;
use ordo::ordering::{
    cl_order, default_jit_window, fold_order, jitter, rank_by_score, samples_from_scores,
};
use ordo::{Direction, Strategy};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 100_000;
    let scores: Vec<f64> = (0..n).map(|i| (i as f64 * 0.618_034).fract()).collect();
    let asc = rank_by_score(&samples_from_scores(&scores), Direction::Ascending)?;

    for (base, w) in [
        (cl_order(&asc)?, default_jit_window(Strategy::Cl)),
        (fold_order(&asc, 2)?, default_jit_window(Strategy::Fo)),
    ] {
        let jittered = jitter(&base, w, 2024)?;
        let before = local_diversity(&base, &scores, 1024)?.mean_window_stddev;
        let after = local_diversity(&jittered, &scores, 1024)?.mean_window_stddev;
        let moved = base
            .permutation
            .iter()
            .zip(&jittered.permutation)
            .filter(|(a, b)| a != b)
            .count();
        println!(
            "{} + JIT(w={w}): stddev per 1024-window {before:.4} -> {after:.4}, {moved} of {n} positions changed",
            base.strategy
        );
    }
    Ok(())
}
