//! Side-by-side metrics for every strategy on one synthetic score
//! distribution, with the random shuffle as the baseline.

use ordo::metrics::summarize;
use ordo::ordering::{
    cl_order, cross_order, fold_order, jitter, random_order, rank_by_score, samples_from_scores,
    seg_order, zigzag_order, CrossConfig, CrossMode, SegPreset,
};
use ordo::{Direction, OrderingPlan};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 50_000;
    // Skewed scores, roughly what a quality classifier produces.
    let scores: Vec<f64> = (0..n)
        .map(|i| ((i as f64 * 0.754_877_7).fract()).powi(3) * 5.0)
        .collect();
    let samples = samples_from_scores(&scores);
    let asc = rank_by_score(&samples, Direction::Ascending)?;
    let desc = rank_by_score(&samples, Direction::Descending)?;

    let plans: Vec<(&str, OrderingPlan)> = vec![
        ("random", random_order(n, 1)),
        ("CL", cl_order(&asc)?),
        (
            "SEG(h10)",
            seg_order(&desc, &SegPreset::H10.intervals(), 1, false)?,
        ),
        ("FO-2", fold_order(&asc, 2)?),
        ("ZIG-2", zigzag_order(&asc, 2)?),
        ("FO-2(JIT)", jitter(&fold_order(&asc, 2)?, 5000, 1)?),
        (
            "STR-2(JIT)",
            cross_order(&asc, &CrossConfig::uniform(n, 3, CrossMode::Str), 1)?,
        ),
        (
            "SAW-2(JIT)",
            cross_order(&asc, &CrossConfig::uniform(n, 3, CrossMode::Saw), 1)?,
        ),
    ];
    println!(
        "{:<11} {:>9} {:>10} {:>10} {:>10}",
        "plan", "max gap", "window sd", "head mean", "tail mean"
    );
    for (name, plan) in plans {
        let s = summarize(&plan, &scores, 1000, 0.1, 2)?;
        let c = s.continuity.expect("n >= 2");
        let b = s.boundary.expect("fraction is valid");
        println!(
            "{name:<11} {:>9.3} {:>10.4} {:>10.4} {:>10.4}",
            c.max_gap, s.diversity.mean_window_stddev, b.head_mean, b.tail_mean
        );
    }
    Ok(())
}
