//! Folding revisits the score range L times; zig-zag does the same without
//! the jump back to the lowest score at each cycle boundary.

use ordo::metrics::{continuity_stats, cycle_coverage};
use ordo::ordering::{cl_order, fold_order, rank_by_score, samples_from_scores, zigzag_order};
use ordo::Direction;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scores: Vec<f64> = (0..20).map(|i| i as f64 / 2.0).collect();
    let asc = rank_by_score(&samples_from_scores(&scores), Direction::Ascending)?;

    let fo = fold_order(&asc, 3)?;
    let zig = zigzag_order(&asc, 3)?;
    println!("FO-3  {:?}", fo.apply(&scores).collect::<Vec<_>>());
    println!("ZIG-3 {:?}", zig.apply(&scores).collect::<Vec<_>>());

    for (name, plan) in [("CL", cl_order(&asc)?), ("FO-3", fo), ("ZIG-3", zig)] {
        let c = continuity_stats(&plan, &scores)?;
        let cov = cycle_coverage(&plan, &scores, 3)?;
        let spans: Vec<String> = cov
            .iter()
            .map(|r| format!("[{}, {}]", r.min, r.max))
            .collect();
        println!(
            "{name:<6} max gap {:>5.2}  mean gap {:>5.2}  thirds cover {}",
            c.max_gap,
            c.mean_abs_gap,
            spans.join(" ")
        );
    }
    Ok(())
}
