//! Rank a scored corpus, keep the top 30%, and order the kept samples from
//! easiest to hardest.

use ordo::ordering::{cl_order, rank_by_score, select_top_k, ScoredSample};
use ordo::Direction;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let samples: Vec<ScoredSample> = [
        ("doc-a", 0.91),
        ("doc-b", 0.12),
        ("doc-c", 0.55),
        ("doc-d", 0.78),
        ("doc-e", 0.33),
        ("doc-f", 0.67),
        ("doc-g", 0.05),
        ("doc-h", 0.49),
        ("doc-i", 0.88),
        ("doc-j", 0.21),
    ]
    .into_iter()
    .map(|(id, s)| ScoredSample::inline(id, s))
    .collect();

    let desc = rank_by_score(&samples, Direction::Descending)?;
    let kept = select_top_k(&desc, 0.3)?;
    println!("top 30%:");
    for &i in &kept {
        println!("  {} {:.2}", samples[i].id, samples[i].score);
    }

    let subset: Vec<ScoredSample> = kept.iter().map(|&i| samples[i].clone()).collect();
    let plan = cl_order(&rank_by_score(&subset, Direction::Ascending)?)?;
    let order: Vec<&str> = plan
        .permutation
        .iter()
        .map(|&i| subset[i].id.as_str())
        .collect();
    println!("curriculum order of the kept samples: {order:?}");
    Ok(())
}
