//! Segment orderings: place chosen score percentiles at the start or end of
//! training. Prints where the top decile lands for each named layout.

use ordo::ordering::{rank_by_score, samples_from_scores, seg_order, SegPreset};
use ordo::Direction;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 1000;
    // Sample i has the i-th highest score.
    let scores: Vec<f64> = (0..n).map(|i| (n - i) as f64).collect();
    let desc = rank_by_score(&samples_from_scores(&scores), Direction::Descending)?;

    for preset in SegPreset::ALL {
        let allow_gaps = preset == SegPreset::L10;
        let plan = seg_order(&desc, &preset.intervals(), 7, allow_gaps)?;
        let sizes = plan.params.segment_sizes.clone().unwrap_or_default();
        let top_positions: Vec<usize> = plan
            .permutation
            .iter()
            .enumerate()
            .filter(|(_, &i)| i < n / 10)
            .map(|(p, _)| p)
            .collect();
        let first = top_positions.first().copied();
        let last = top_positions.last().copied();
        println!(
            "{:<8} segments {:?}  kept {:>4}  top-decile positions {:?}..{:?}",
            preset.name(),
            sizes,
            plan.len(),
            first,
            last
        );
    }
    Ok(())
}
