//! Stair (STR) and saw (SAW) orderings: ascending stable regions joined by
//! folded or zig-zagged transition regions.

use ordo::ordering::{cross_order, rank_by_score, samples_from_scores, CrossConfig, CrossMode};
use ordo::Direction;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scores: Vec<f64> = (0..24).map(|i| i as f64).collect();
    let asc = rank_by_score(&samples_from_scores(&scores), Direction::Ascending)?;

    for mode in [CrossMode::Str, CrossMode::Saw] {
        let cfg = CrossConfig {
            split_points: vec![8, 16],
            radius: 3,
            layers: 2,
            mode,
            jit_window: 0,
        };
        let plan = cross_order(&asc, &cfg, 0)?;
        println!("{:?}: {:?}", mode, plan.permutation);
    }

    // Defaults used for large corpora: 3 sections, radius N/12, L=2, w=5000.
    let n = 60_000;
    let big: Vec<f64> = (0..n).map(|i| i as f64).collect();
    let asc = rank_by_score(&samples_from_scores(&big), Direction::Ascending)?;
    let cfg = CrossConfig::uniform(n, CrossConfig::DEFAULT_SECTIONS, CrossMode::Saw);
    let plan = cross_order(&asc, &cfg, 11)?;
    println!(
        "SAW-2(JIT) on {n}: splits {:?}, radius {}, first positions {:?}",
        cfg.split_points,
        cfg.radius,
        &plan.permutation[..6]
    );
    Ok(())
}
