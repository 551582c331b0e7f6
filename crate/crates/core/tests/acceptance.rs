//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use ordo::io::{load_scored_jsonl, materialize};
use ordo::metrics::{continuity_stats, local_diversity};
use ordo::ordering::{
    cl_order, cross_order, fold_order, jitter, random_order, rank_by_score, samples_from_scores,
    seg_order, validate_plan, zigzag_order, CrossConfig, CrossMode, PercentileInterval, SegPreset,
};
use ordo::scaling::{fit_pipeline, joint_gradient, FitConfig, ScalingConstants};
use ordo::{Direction, OrderingPlan, Strategy};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Option<Duration>, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------------------
// Random ordering cases

#[derive(Debug, Clone)]
enum Case {
    Cl,
    Fo(usize),
    Zig(usize),
    Seg(Vec<PercentileInterval>),
    Jit(Box<Case>, usize),
    Cross(CrossConfig),
    Random,
}

fn random_intervals(rng: &mut RefRng) -> Vec<PercentileInterval> {
    if rng.below(2) == 0 {
        let presets = [
            SegPreset::H10,
            SegPreset::L90,
            SegPreset::H90,
            SegPreset::H10L10,
            SegPreset::L10H10,
            SegPreset::L10L10,
            SegPreset::H10H10,
        ];
        return presets[rng.below(presets.len() as u64) as usize].intervals();
    }
    let mut cuts: Vec<f64> = (0..rng.below(5))
        .map(|_| (1 + rng.below(99)) as f64 / 100.0)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut bounds = vec![0.0];
    bounds.extend(cuts);
    bounds.push(1.0);
    bounds
        .windows(2)
        .map(|w| {
            let overlap = if rng.below(3) == 0 {
                rng.uniform() * 0.1
            } else {
                0.0
            };
            PercentileInterval::new(w[0], (w[1] + overlap).min(1.0)).unwrap()
        })
        .collect()
}

fn random_case(n: usize, rng: &mut RefRng, allow_jit: bool) -> Case {
    let layers = 1 + rng.below(n.min(100) as u64) as usize;
    match rng.below(if allow_jit { 8 } else { 7 }) {
        0 => Case::Cl,
        1 => Case::Fo(layers),
        2 => Case::Zig(layers),
        3 => Case::Seg(random_intervals(rng)),
        4 | 5 => {
            let mode = if rng.below(2) == 0 {
                CrossMode::Str
            } else {
                CrossMode::Saw
            };
            match random_cross_config(n, rng, mode) {
                Some(mut cfg) => {
                    cfg.jit_window = if rng.below(2) == 0 {
                        0
                    } else {
                        1 + rng.below(2 * n as u64) as usize
                    };
                    Case::Cross(cfg)
                }
                None => Case::Fo(layers),
            }
        }
        6 => Case::Random,
        _ => {
            let base = random_case(n, rng, false);
            Case::Jit(Box::new(base), 1 + rng.below(2 * n as u64) as usize)
        }
    }
}

fn build(case: &Case, scores: &[f64], seed: u64) -> OrderingPlan {
    let samples = samples_from_scores(scores);
    let asc = || rank_by_score(&samples, Direction::Ascending).unwrap();
    match case {
        Case::Cl => cl_order(&asc()).unwrap(),
        Case::Fo(l) => fold_order(&asc(), *l).unwrap(),
        Case::Zig(l) => zigzag_order(&asc(), *l).unwrap(),
        Case::Seg(iv) => {
            let desc = rank_by_score(&samples, Direction::Descending).unwrap();
            seg_order(&desc, iv, seed, false).unwrap()
        }
        Case::Jit(base, w) => jitter(&build(base, scores, seed), *w, seed).unwrap(),
        Case::Cross(cfg) => cross_order(&asc(), cfg, seed).unwrap(),
        Case::Random => random_order(scores.len(), seed),
    }
}

fn random_scores(n: usize, rng: &mut RefRng) -> Vec<f64> {
    // Coarse values so ties are frequent.
    let levels = 1 + rng.below(n as u64 + 1);
    (0..n).map(|_| rng.below(levels) as f64).collect()
}

fn log_uniform(rng: &mut RefRng, max: usize) -> usize {
    ((rng.uniform() * (max as f64).ln()).exp() as usize).clamp(1, max)
}

// ---------------------------------------------------------------------------
// Criteria

fn structural_oracles() -> Outcome {
    let mut rng = RefRng::new(0xF01D);
    let mut checked = 0;
    for n in 1..=1000usize {
        let scores = random_scores(n, &mut rng);
        let asc = rank(&scores, Direction::Ascending);
        let sorted = ascending(&scores);
        ensure(asc.order() == &sorted[..], || {
            format!("rank mismatch at N={n}")
        })?;
        for layers in [1usize, 2, 3, 4, 5, 20, 100]
            .into_iter()
            .filter(|&l| l <= n)
        {
            let fo = fold_order(&asc, layers).unwrap().permutation;
            let zig = zigzag_order(&asc, layers).unwrap().permutation;
            ensure(fo == brute_fold(&sorted, layers, false), || {
                format!("FO mismatch N={n} L={layers}")
            })?;
            ensure(zig == brute_fold(&sorted, layers, true), || {
                format!("ZIG mismatch N={n} L={layers}")
            })?;
            checked += 2;
        }
    }
    Ok(format!("{checked} (N, L, variant) triples"))
}

fn bijection_determinism() -> Outcome {
    let mut rng = RefRng::new(0xB17E);
    let mut total_n = 0usize;
    let mut kinds = std::collections::BTreeMap::new();
    for case_no in 0..10_000 {
        let n = log_uniform(&mut rng, 100_000);
        let scores = random_scores(n, &mut rng);
        let case = random_case(n, &mut rng, true);
        let seed = rng.next_u64();
        let a = build(&case, &scores, seed);
        let b = build(&case, &scores, seed);
        ensure(validate_plan(&a, n).is_ok(), || {
            format!("case {case_no}: {case:?} N={n} seed={seed} is not a bijection")
        })?;
        ensure(a.to_le_bytes() == b.to_le_bytes(), || {
            format!("case {case_no}: {case:?} N={n} seed={seed} not deterministic")
        })?;
        *kinds.entry(a.strategy.name()).or_insert(0) += 1;
        total_n += n;
    }
    Ok(format!(
        "10000 cases, mean N {}, by strategy {kinds:?}",
        total_n / 10_000
    ))
}

fn continuity_separation() -> Outcome {
    let mut rng = RefRng::new(0xC0);
    let n = 10_000;
    let mut worst_zig = 0.0f64;
    let mut worst_fo = f64::INFINITY;
    for v in 0..100 {
        let scores = monotone_scores(n, &mut rng);
        let delta = min_spacing(&scores);
        let asc = rank(&scores, Direction::Ascending);
        for layers in [2usize, 3, 5] {
            let zig = continuity_stats(&zigzag_order(&asc, layers).unwrap(), &scores)
                .unwrap()
                .max_gap;
            let fo = continuity_stats(&fold_order(&asc, layers).unwrap(), &scores)
                .unwrap()
                .max_gap;
            let zig_bound = 2.0 * layers as f64 * delta;
            let fo_bound = (n - 2 * layers) as f64 * delta;
            ensure(zig <= zig_bound, || {
                format!("vector {v} L={layers}: ZIG gap {zig} > {zig_bound}")
            })?;
            ensure(fo >= fo_bound, || {
                format!("vector {v} L={layers}: FO gap {fo} < {fo_bound}")
            })?;
            worst_zig = worst_zig.max(zig / zig_bound);
            worst_fo = worst_fo.min(fo / fo_bound);
        }
    }
    Ok(format!(
        "300 checks; max ZIG gap / bound {worst_zig:.3}, min FO gap / bound {worst_fo:.3}"
    ))
}

fn jit_locality() -> Outcome {
    let mut rng = RefRng::new(0x717);
    for c in 0..1000 {
        let n = log_uniform(&mut rng, 5000);
        let w = 1 + rng.below(n as u64 + 10) as usize;
        let seed = rng.next_u64();
        let base = random_order(n, rng.next_u64());
        let out = jitter(&base, w, seed).unwrap();
        let mut pos = vec![0; n];
        for (p, &i) in out.permutation.iter().enumerate() {
            pos[i] = p;
        }
        for (j, &i) in base.permutation.iter().enumerate() {
            let lo = j / w * w;
            let hi = (lo + w).min(n);
            ensure((lo..hi).contains(&pos[i]), || {
                format!(
                    "case {c}: N={n} w={w}: element from {j} moved to {}",
                    pos[i]
                )
            })?;
        }
        ensure(
            jitter(&base, 1, seed).unwrap().permutation == base.permutation,
            || format!("case {c}: w=1 is not the identity"),
        )?;

        let (a, b) = (0.1 + rng.uniform() * 10.0, rng.uniform() * 100.0 - 50.0);
        let scores: Vec<f64> = (0..n).map(|i| a * i as f64 + b).collect();
        let cl = cl_order(&rank(&scores, Direction::Ascending)).unwrap();
        let m = 1 + rng.below(n as u64) as usize;
        let plain = local_diversity(&cl, &scores, m).unwrap().mean_window_stddev;
        let jit = local_diversity(&jitter(&cl, w, seed).unwrap(), &scores, m)
            .unwrap()
            .mean_window_stddev;
        ensure(jit >= plain * (1.0 - 1e-12) - 1e-12, || {
            format!("case {c}: N={n} w={w} window={m}: JIT diversity {jit} < CL {plain}")
        })?;
    }
    Ok("1000 cases".into())
}

fn seg_boundaries() -> Outcome {
    let n = 10_000;
    // Sample i has descending rank i.
    let scores: Vec<f64> = (0..n).map(|i| (n - i) as f64).collect();
    let desc = rank(&scores, Direction::Descending);
    ensure(
        desc.order().iter().enumerate().all(|(r, &i)| r == i),
        || "rank setup".into(),
    )?;
    let top: Vec<usize> = (0..n / 10).collect();
    let mut sizes_seen = Vec::new();
    for seed in 0..20u64 {
        let plan = seg_order(&desc, &SegPreset::H10H10.intervals(), seed, false).unwrap();
        let sizes = plan.params.segment_sizes.clone().unwrap();
        ensure(sizes.len() == 3, || format!("{sizes:?}"))?;
        let head = &plan.permutation[..sizes[0]];
        let middle = &plan.permutation[sizes[0]..n - sizes[2]];
        let tail = &plan.permutation[n - sizes[2]..];
        ensure(head.iter().chain(tail).all(|&r| r < n / 10), || {
            format!("seed {seed}: a head or tail segment holds a rank outside the top decile")
        })?;
        let mut ends: Vec<usize> = head.iter().chain(tail).copied().collect();
        ends.sort();
        ensure(ends == top, || {
            format!("seed {seed}: head and tail together are not the top decile")
        })?;
        let mut mid: Vec<usize> = middle.to_vec();
        mid.sort();
        ensure(mid == (n / 10..n).collect::<Vec<_>>(), || {
            format!("seed {seed}: middle segment")
        })?;
        sizes_seen.push((sizes[0], sizes[2]));
    }
    Ok(format!(
        "20 seeds; head/tail segment sizes e.g. {:?}; their union is exactly ranks 0..1000",
        &sizes_seen[..3]
    ))
}

fn cross_hand_traces() -> Outcome {
    let scores: Vec<f64> = (0..12).map(|i| i as f64).collect();
    let asc = rank(&scores, Direction::Ascending);
    let cfg = |mode| CrossConfig {
        split_points: vec![6],
        radius: 2,
        layers: 2,
        mode,
        jit_window: 0,
    };
    let str_ = cross_order(&asc, &cfg(CrossMode::Str), 0)
        .unwrap()
        .permutation;
    let saw = cross_order(&asc, &cfg(CrossMode::Saw), 0)
        .unwrap()
        .permutation;
    ensure(str_ == [0, 1, 2, 3, 4, 6, 5, 7, 8, 9, 10, 11], || {
        format!("STR trace {str_:?}")
    })?;
    ensure(saw == [0, 1, 2, 3, 4, 6, 7, 5, 8, 9, 10, 11], || {
        format!("SAW trace {saw:?}")
    })?;
    let four = rank(&[0.0, 1.0, 2.0, 3.0], Direction::Ascending);
    let minimal = CrossConfig {
        split_points: vec![2],
        radius: 1,
        layers: 1,
        mode: CrossMode::Str,
        jit_window: 0,
    };
    ensure(
        cross_order(&four, &minimal, 0).unwrap().permutation == [0, 1, 2, 3],
        || "minimal N=4 case is not the identity".into(),
    )?;

    let mut rng = RefRng::new(0x5A3);
    let mut done = 0;
    while done < 100 {
        let n = 8 + rng.below(5000) as usize;
        let mode = if done % 2 == 0 {
            CrossMode::Str
        } else {
            CrossMode::Saw
        };
        let Some(cfg) = random_cross_config(n, &mut rng, mode) else {
            continue;
        };
        // Shuffled scores: the oracle works on ranks.
        let mut scores: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let mut idx: Vec<usize> = (0..n).collect();
        rng.shuffle(&mut idx);
        for (rank_pos, &i) in idx.iter().enumerate() {
            scores[i] = rank_pos as f64;
        }
        let plan = cross_order(&rank(&scores, Direction::Ascending), &cfg, rng.next_u64()).unwrap();
        let ranks: Vec<usize> = plan
            .permutation
            .iter()
            .map(|&i| scores[i] as usize)
            .collect();
        let mut pos = 0;
        for region in cross_regions(n, &cfg) {
            match region {
                Region::Stable(r) => {
                    let got = &ranks[pos..pos + r.len()];
                    ensure(got.iter().copied().eq(r.clone()), || {
                        format!("{cfg:?}: stable region {r:?} is not contiguous ascending")
                    })?;
                    pos += r.len();
                }
                Region::Transition(r) => {
                    let want = brute_fold(
                        &r.clone().collect::<Vec<_>>(),
                        cfg.layers,
                        mode == CrossMode::Saw,
                    );
                    ensure(ranks[pos..pos + r.len()] == want[..], || {
                        format!("{cfg:?}: transition region {r:?} fails the fold oracle")
                    })?;
                    pos += r.len();
                }
            }
        }
        done += 1;
    }
    Ok("N=12 STR and SAW traces exact; 100 random configurations".into())
}

fn relative_errors(c: &ScalingConstants, t: &ScalingConstants) -> [f64; 5] {
    [
        rel_err(c.a, t.a),
        rel_err(c.b, t.b),
        rel_err(c.e, t.e),
        rel_err(c.alpha, t.alpha),
        rel_err(c.beta, t.beta),
    ]
}

fn fmt_errors(e: &[f64; 5]) -> String {
    format!(
        "A {:.3e}% B {:.2}% E {:.2}% alpha {:.2}% beta {:.2}%",
        100.0 * e[0],
        100.0 * e[1],
        100.0 * e[2],
        100.0 * e[3],
        100.0 * e[4]
    )
}

fn scaling_noiseless() -> Outcome {
    let truth = random_baseline_constants();
    let fit = fit_pipeline(&checkpoint_grid(&truth, None), &FitConfig::default())
        .map_err(|e| e.to_string())?;
    let err = relative_errors(&fit.joint.constants, &truth);
    let r2: Vec<f64> = fit
        .slices
        .iter()
        .map(|s| s.r_squared.unwrap_or(f64::NAN))
        .collect();
    let detail = format!("{}; per-N R^2 {r2:.6?}", fmt_errors(&err));
    ensure(err.iter().all(|&e| e < 0.02), || {
        format!("outside 2%: {detail}")
    })?;
    ensure(r2.iter().all(|&r| r >= 0.99), || {
        format!("R^2 below 0.99: {detail}")
    })?;
    Ok(detail)
}

fn scaling_noisy() -> Outcome {
    let truth = random_baseline_constants();
    let seeds = 10;
    let mut worst = [0.0f64; 5];
    let mut all: Vec<[f64; 5]> = Vec::new();
    let mut worst_r2 = 1.0f64;
    let mut failing = 0;
    for seed in 0..seeds {
        let obs = checkpoint_grid(&truth, Some((1000 + seed, 0.01)));
        let fit = fit_pipeline(&obs, &FitConfig::default()).map_err(|e| e.to_string())?;
        let err = relative_errors(&fit.joint.constants, &truth);
        for k in 0..5 {
            worst[k] = worst[k].max(err[k]);
        }
        all.push(err);
        let min_r2 = fit
            .slices
            .iter()
            .map(|s| s.r_squared.unwrap_or(f64::NAN))
            .fold(1.0, f64::min);
        worst_r2 = worst_r2.min(min_r2);
        if err.iter().any(|&e| e >= 0.10) || min_r2.is_nan() || min_r2 < 0.99 {
            failing += 1;
        }
    }
    let mut median = [0.0f64; 5];
    for (k, m) in median.iter_mut().enumerate() {
        let mut col: Vec<f64> = all.iter().map(|e| e[k]).collect();
        col.sort_by(f64::total_cmp);
        *m = col[col.len() / 2];
    }
    let detail = format!(
        "{failing}/{seeds} noise draws outside tolerance; median errors {}; worst errors {}; worst per-N R^2 {worst_r2:.4}",
        fmt_errors(&median),
        fmt_errors(&worst)
    );
    ensure(failing == 0, || detail.clone())?;
    Ok(detail)
}

fn gradient_check() -> Outcome {
    let obs = checkpoint_grid(&random_baseline_constants(), Some((77, 0.01)));
    let mut rng = RefRng::new(0x62AD);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let p = random_log_params(&mut rng);
        let delta = [1e-3, 1e-2, 1e-1][i % 3];
        let g = joint_gradient(&p, &obs, delta).unwrap();
        let fd = numeric_gradient(&p, &obs, delta);
        let scale = g.iter().map(|v| v.abs()).fold(0.0, f64::max);
        for k in 0..5 {
            let rel = (g[k] - fd[k]).abs() / scale;
            worst = worst.max(rel);
            ensure(rel <= 1e-5, || {
                format!(
                    "point {i} component {k}: analytic {} numeric {}",
                    g[k], fd[k]
                )
            })?;
        }
    }
    Ok(format!("100 points; worst relative difference {worst:.2e}"))
}

fn materialization_fidelity() -> Outcome {
    let mut rng = RefRng::new(0x3A7);
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for c in 0..50 {
        let n = log_uniform(&mut rng, 3000);
        let newline = rng.below(4) != 0;
        let src = dir.path().join(format!("in{c}.jsonl"));
        let mut lines = Vec::with_capacity(n);
        for i in 0..n {
            let pad: String = (0..rng.below(60))
                .map(|_| char::from(b'a' + rng.below(26) as u8))
                .collect();
            lines.push(format!(
                "{{\"id\":{i},\"score\":{},\"text\":\"{pad} \\u00fc\"}}",
                rng.below(1000) as f64 / 7.0
            ));
        }
        let mut body = lines.join("\n");
        if newline {
            body.push('\n');
        }
        std::fs::write(&src, &body).map_err(|e| e.to_string())?;
        let (handle, samples) = load_scored_jsonl(&src, "score").map_err(|e| e.to_string())?;
        let scores: Vec<f64> = samples.iter().map(|s| s.score).collect();
        let case = random_case(n, &mut rng, true);
        let plan = build(&case, &scores, rng.next_u64());

        let out = dir.path().join(format!("out{c}.jsonl"));
        materialize(&handle, &plan, &out).map_err(|e| e.to_string())?;
        let text = std::fs::read_to_string(&out).map_err(|e| e.to_string())?;
        let got: Vec<&str> = text.lines().collect();
        ensure(got.len() == n, || {
            format!("corpus {c}: {} lines out of {n}", got.len())
        })?;
        for (pos, &i) in plan.permutation.iter().enumerate() {
            ensure(got[pos] == lines[i], || {
                format!("corpus {c}: line {pos} differs from source {i}")
            })?;
        }
        let mut a: Vec<&str> = got.clone();
        let mut b: Vec<&str> = lines.iter().map(String::as_str).collect();
        a.sort_unstable();
        b.sort_unstable();
        ensure(a == b, || format!("corpus {c}: line multisets differ"))?;

        let id = dir.path().join(format!("id{c}.jsonl"));
        materialize(
            &handle,
            &OrderingPlan::new(Strategy::External, (0..n).collect()),
            &id,
        )
        .map_err(|e| e.to_string())?;
        ensure(std::fs::read(&id).unwrap() == body.as_bytes(), || {
            format!("corpus {c}: identity plan is not byte-identical")
        })?;
    }
    Ok("50 corpora".into())
}

// ---------------------------------------------------------------------------

fn main() {
    let criteria: [Criterion; 10] = [
        (
            "structural oracles (FO/ZIG vs brute force)",
            Some(Duration::from_secs(10)),
            structural_oracles,
        ),
        (
            "bijection + determinism (10k cases)",
            Some(Duration::from_secs(60)),
            bijection_determinism,
        ),
        ("continuity separation", None, continuity_separation),
        ("JIT locality", None, jit_locality),
        ("SEG(h10-h10) boundary semantics", None, seg_boundaries),
        (
            "STR/SAW hand traces + random configs",
            None,
            cross_hand_traces,
        ),
        (
            "scaling-law recovery, noiseless (2%, R^2 >= 0.99)",
            Some(Duration::from_secs(30)),
            scaling_noiseless,
        ),
        (
            "scaling-law recovery, 1% noise (10%, R^2 >= 0.99)",
            Some(Duration::from_secs(30)),
            scaling_noisy,
        ),
        ("gradient check", None, gradient_check),
        ("materialization fidelity", None, materialization_fidelity),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, budget) {
            (Ok(_), Some(b)) if elapsed > b => Err(format!("over the {b:?} budget")),
            (o, _) => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} {name} [{:.2}s] {detail}", elapsed.as_secs_f64());
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
