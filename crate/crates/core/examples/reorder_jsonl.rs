//! Reorder a JSONL corpus on disk: index it, build a plan, save the
//! permutation, and stream the reordered file with its manifest.

use std::io::Write;

use ordo::io::{
    export_permutation, import_permutation, load_scored_jsonl, manifest_path_for, materialize,
    PermFormat,
};
use ordo::ordering::{jitter, rank_by_score, zigzag_order};
use ordo::Direction;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let src = dir.path().join("corpus.jsonl");
    let mut f = std::fs::File::create(&src)?;
    for i in 0..12 {
        let edu = (i * 5 % 12) as f64 / 4.0;
        writeln!(
            f,
            r#"{{"id":"page-{i:02}","edu_score":{edu},"text":"..."}}"#
        )?;
    }
    drop(f);

    let (handle, samples) = load_scored_jsonl(&src, "edu_score")?;
    let asc = rank_by_score(&samples, Direction::Ascending)?;
    let plan = jitter(&zigzag_order(&asc, 2)?, 3, 42)?;

    let perm = dir.path().join("order.perm");
    export_permutation(&plan, &perm, PermFormat::Binary)?;
    let restored = import_permutation(&perm)?;
    assert_eq!(restored.permutation, plan.permutation);

    let out = dir.path().join("reordered.jsonl");
    let manifest = materialize(&handle, &plan, &out)?;
    print!("{}", std::fs::read_to_string(&out)?);
    println!("manifest at {}:", manifest_path_for(&out).display());
    println!("{}", serde_json::to_string_pretty(&manifest)?);
    Ok(())
}
