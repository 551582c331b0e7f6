//! The `ordo` command line.
//!
//! Exit codes: 0 on success, 1 on data or convergence errors, 2 on usage
//! errors. [`run`] writes to the given streams instead of the process ones
//! so it can be driven from tests.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::io::{
    export_permutation, import_permutation, load_scored_jsonl, manifest_path_for, materialize,
    read_constants_json, read_observations_csv, ConstantsDocument, DatasetError, Manifest,
    PermFormat,
};
use crate::metrics::{summarize, trajectory, MetricsError, MetricsSummary};
use crate::ordering::{
    cl_order, cross_order, fold_order, jitter, random_order, rank_by_score, seg_order,
    zigzag_order, CrossConfig, CrossMode, Direction, OrderError, OrderingPlan, PercentileInterval,
    ScoredSample, SegPreset, Strategy,
};
use crate::scaling::{fit_pipeline, predict_loss, FitConfig, ScalingError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DATA: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "ordo",
    version,
    about = "Score-driven data ordering and scaling-law fitting"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Order a scored JSONL corpus.
    Order(OrderArgs),
    /// Score-trajectory metrics of an ordering.
    Metrics(MetricsArgs),
    /// Fit L(N, D) = E + A/N^alpha + B/D^beta to an observations CSV.
    FitScaling(FitArgs),
    /// Predict loss from fitted constants.
    Predict(PredictArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Cl,
    Seg,
    Fo,
    Zig,
    Str,
    Saw,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PermFormatArg {
    Text,
    Binary,
}

impl From<PermFormatArg> for PermFormat {
    fn from(f: PermFormatArg) -> Self {
        match f {
            PermFormatArg::Text => PermFormat::Text,
            PermFormatArg::Binary => PermFormat::Binary,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OrderArgs {
    /// JSONL corpus, one object per line.
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub strategy: StrategyArg,
    /// Layer count L (fo, zig, str, saw). Defaults to 2.
    #[arg(long)]
    pub layers: Option<usize>,
    /// SEG percentile intervals, e.g. `0-0.1,0.1-1`. Percentiles count from
    /// the highest score.
    #[arg(long, conflicts_with = "seg_preset")]
    pub intervals: Option<String>,
    /// Named SEG configuration such as `h10` or `h10-l10`.
    #[arg(long)]
    pub seg_preset: Option<String>,
    /// Drop samples no SEG interval covers instead of failing.
    #[arg(long)]
    pub allow_gaps: bool,
    /// Split points p_l as ascending-rank positions (str, saw).
    #[arg(long, value_delimiter = ',', conflicts_with = "sections")]
    pub splits: Option<Vec<usize>>,
    /// Evenly spaced sections instead of explicit splits (str, saw).
    #[arg(long)]
    pub sections: Option<usize>,
    /// Transition radius rho (str, saw).
    #[arg(long)]
    pub radius: Option<usize>,
    /// Jitter window w. For str/saw it defaults to 5000 and 0 turns it off;
    /// for other strategies the plan is jittered only when this is given.
    #[arg(long)]
    pub jit_window: Option<usize>,
    #[arg(long, env = "ORDO_SEED")]
    pub seed: Option<u64>,
    #[arg(long, default_value = "score")]
    pub score_field: String,
    /// Where to write the permutation; stdout when omitted.
    #[arg(long)]
    pub out_perm: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub perm_format: PermFormatArg,
    /// Write the reordered corpus here.
    #[arg(long)]
    pub materialize: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct MetricsArgs {
    pub input: PathBuf,
    /// Permutation file; the file order when omitted.
    #[arg(long)]
    pub perm: Option<PathBuf>,
    #[arg(long, default_value_t = 1000)]
    pub window: usize,
    #[arg(long, default_value_t = 0.1)]
    pub fraction: f64,
    /// Chunk count for cycle coverage.
    #[arg(long, default_value_t = 2)]
    pub layers: usize,
    #[arg(long, default_value = "score")]
    pub score_field: String,
    /// Trajectory CSV (`position,score`).
    #[arg(long)]
    pub csv_out: Option<PathBuf>,
    /// Metric table CSV (`metric,value`).
    #[arg(long)]
    pub metrics_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    /// CSV with `n_params,tokens,loss` columns.
    pub observations: PathBuf,
    #[arg(long, default_value_t = 1e-3)]
    pub delta: f64,
    #[arg(long, default_value_t = 0.05)]
    pub step: f64,
    #[arg(long, default_value_t = 50_000)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long)]
    pub json_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub constants: PathBuf,
    #[arg(long)]
    pub n: f64,
    #[arg(long)]
    pub d: f64,
}

/// Error carrying the exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn data(message: impl ToString) -> Self {
        Self {
            code: EXIT_DATA,
            message: message.to_string(),
        }
    }
}

impl From<OrderError> for CliError {
    fn from(e: OrderError) -> Self {
        Self::data(e)
    }
}

impl From<DatasetError> for CliError {
    fn from(e: DatasetError) -> Self {
        Self::data(e)
    }
}

impl From<MetricsError> for CliError {
    fn from(e: MetricsError) -> Self {
        Self::data(e)
    }
}

impl From<ScalingError> for CliError {
    fn from(e: ScalingError) -> Self {
        Self::data(e)
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |e| CliError::data(format!("{}: {e}", path.display()))
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Order(a) => cmd_order(a, out, err),
        Command::Metrics(a) => cmd_metrics(a, out),
        Command::FitScaling(a) => cmd_fit_scaling(a, out, err),
        Command::Predict(a) => cmd_predict(a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

/// Parses `a-b,c-d` into percentile intervals.
pub fn parse_intervals(text: &str) -> Result<Vec<PercentileInterval>, String> {
    text.split(',')
        .map(|pair| {
            let pair = pair.trim();
            let (a, b) = pair
                .split_once('-')
                .ok_or_else(|| format!("interval {pair:?} is not of the form a-b"))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("interval {pair:?}: {s:?} is not a number"))
            };
            PercentileInterval::new(parse(a)?, parse(b)?).map_err(|e| e.to_string())
        })
        .collect()
}

fn check_flags(a: &OrderArgs) -> Result<(), CliError> {
    use StrategyArg::*;
    let s = a.strategy;
    let name = format!("{s:?}").to_lowercase();
    let reject =
        |flag: &str| CliError::usage(format!("--{flag} does not apply to --strategy {name}"));
    if a.layers.is_some() && !matches!(s, Fo | Zig | Str | Saw) {
        return Err(reject("layers"));
    }
    if s != Seg {
        for (set, flag) in [
            (a.intervals.is_some(), "intervals"),
            (a.seg_preset.is_some(), "seg-preset"),
            (a.allow_gaps, "allow-gaps"),
        ] {
            if set {
                return Err(reject(flag));
            }
        }
    } else if a.intervals.is_none() && a.seg_preset.is_none() {
        return Err(CliError::usage(
            "--strategy seg needs --intervals or --seg-preset",
        ));
    }
    if !matches!(s, Str | Saw) {
        for (set, flag) in [
            (a.splits.is_some(), "splits"),
            (a.sections.is_some(), "sections"),
            (a.radius.is_some(), "radius"),
        ] {
            if set {
                return Err(reject(flag));
            }
        }
    } else if a.splits.is_some() && a.radius.is_none() {
        return Err(CliError::usage("--splits needs --radius"));
    }
    if a.layers == Some(0) {
        return Err(CliError::usage("--layers must be at least 1"));
    }
    if a.sections == Some(0) {
        return Err(CliError::usage("--sections must be at least 1"));
    }
    if a.jit_window == Some(0) && !matches!(s, Str | Saw) {
        return Err(CliError::usage("--jit-window must be at least 1"));
    }
    Ok(())
}

/// Builds the plan `ordo order` would produce for these arguments, from
/// samples already loaded.
pub fn build_plan(a: &OrderArgs, samples: &[ScoredSample]) -> Result<OrderingPlan, CliError> {
    check_flags(a)?;
    let seed = a.seed.unwrap_or(0);
    let layers = a.layers.unwrap_or(2);
    let asc = || rank_by_score(samples, Direction::Ascending);
    let plan = match a.strategy {
        StrategyArg::Cl => cl_order(&asc()?)?,
        StrategyArg::Fo => fold_order(&asc()?, layers)?,
        StrategyArg::Zig => zigzag_order(&asc()?, layers)?,
        StrategyArg::Random => {
            if samples.is_empty() {
                return Err(OrderError::EmptyCorpus.into());
            }
            random_order(samples.len(), seed)
        }
        StrategyArg::Seg => {
            let intervals = match (&a.intervals, &a.seg_preset) {
                (Some(text), _) => parse_intervals(text).map_err(CliError::usage)?,
                (None, Some(name)) => SegPreset::from_name(name)
                    .ok_or_else(|| CliError::usage(format!("unknown SEG preset {name:?}")))?
                    .intervals(),
                (None, None) => unreachable!("checked by check_flags"),
            };
            let rank = rank_by_score(samples, Direction::Descending)?;
            seg_order(&rank, &intervals, seed, a.allow_gaps)?
        }
        StrategyArg::Str | StrategyArg::Saw => {
            let mode = if a.strategy == StrategyArg::Str {
                CrossMode::Str
            } else {
                CrossMode::Saw
            };
            let n = samples.len();
            let mut cfg = match &a.splits {
                Some(splits) => CrossConfig {
                    split_points: splits.clone(),
                    radius: a.radius.unwrap_or(0),
                    layers,
                    mode,
                    jit_window: CrossConfig::DEFAULT_JIT_WINDOW,
                },
                None => CrossConfig::uniform(
                    n,
                    a.sections.unwrap_or(CrossConfig::DEFAULT_SECTIONS),
                    mode,
                ),
            };
            cfg.layers = layers;
            if let Some(r) = a.radius {
                cfg.radius = r;
            }
            if let Some(w) = a.jit_window {
                cfg.jit_window = w;
            }
            return Ok(cross_order(&asc()?, &cfg, seed)?);
        }
    };
    match a.jit_window {
        Some(w) => Ok(jitter(&plan, w, seed)?),
        None => Ok(plan),
    }
}

fn cmd_order(a: &OrderArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    check_flags(a)?;
    let (handle, samples) = load_scored_jsonl(&a.input, &a.score_field)?;
    let plan = build_plan(a, &samples)?;
    if let Some(sizes) = &plan.params.segment_sizes {
        for (i, _) in sizes.iter().enumerate().filter(|(_, &s)| s == 0) {
            let _ = writeln!(
                err,
                "warning: EmptySegment: SEG segment {i} holds no samples"
            );
        }
    }
    match &a.out_perm {
        Some(path) => {
            export_permutation(&plan, path, a.perm_format.into())?;
            let mut manifest = Manifest::for_plan(&plan, &handle);
            manifest.output_path = Some(path.clone());
            manifest.write(manifest_path_for(path))?;
        }
        None => {
            let bytes = crate::io::encode_permutation(&plan.permutation, PermFormat::Text);
            out.write_all(&bytes).map_err(CliError::data)?;
        }
    }
    if let Some(path) = &a.materialize {
        materialize(&handle, &plan, path)?;
    }
    let _ = writeln!(
        err,
        "ordered {} of {} samples with {}",
        plan.len(),
        handle.len(),
        plan.strategy
    );
    Ok(())
}

fn metric_rows(s: &MetricsSummary) -> Vec<(String, f64)> {
    let mut rows = vec![("n".to_string(), s.n as f64)];
    if let Some(c) = s.continuity {
        rows.push(("mean_abs_gap".into(), c.mean_abs_gap));
        rows.push(("max_gap".into(), c.max_gap));
    }
    rows.push(("window".into(), s.diversity.window as f64));
    rows.push(("mean_window_stddev".into(), s.diversity.mean_window_stddev));
    if let Some(b) = s.boundary {
        rows.push(("boundary_fraction".into(), b.fraction));
        rows.push(("head_mean".into(), b.head_mean));
        rows.push(("tail_mean".into(), b.tail_mean));
    }
    for (i, c) in s.coverage.iter().enumerate() {
        rows.push((format!("chunk{i}_min"), c.min));
        rows.push((format!("chunk{i}_max"), c.max));
    }
    rows
}

fn cmd_metrics(a: &MetricsArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if a.window == 0 {
        return Err(CliError::usage("--window must be at least 1"));
    }
    if a.layers == 0 {
        return Err(CliError::usage("--layers must be at least 1"));
    }
    if !(a.fraction > 0.0 && a.fraction <= 0.5) {
        return Err(CliError::usage("--fraction must lie in (0, 0.5]"));
    }
    let (_, samples) = load_scored_jsonl(&a.input, &a.score_field)?;
    let scores: Vec<f64> = samples.iter().map(|s| s.score).collect();
    let plan = match &a.perm {
        Some(path) => import_permutation(path)?,
        None => OrderingPlan::new(Strategy::External, (0..scores.len()).collect()),
    };
    let summary = summarize(&plan, &scores, a.window, a.fraction, a.layers)?;

    if let Some(path) = &a.csv_out {
        let mut w = csv::Writer::from_path(path).map_err(CliError::data)?;
        w.write_record(["position", "score"])
            .map_err(CliError::data)?;
        for p in trajectory(&plan, &scores)? {
            w.write_record([p.position.to_string(), p.score.to_string()])
                .map_err(CliError::data)?;
        }
        w.flush().map_err(io_err(path))?;
    }
    let rows = metric_rows(&summary);
    if let Some(path) = &a.metrics_out {
        let mut w = csv::Writer::from_path(path).map_err(CliError::data)?;
        w.write_record(["metric", "value"])
            .map_err(CliError::data)?;
        for (k, v) in &rows {
            w.write_record([k.clone(), v.to_string()])
                .map_err(CliError::data)?;
        }
        w.flush().map_err(io_err(path))?;
    }
    for (k, v) in &rows {
        writeln!(out, "{k:<20} {v}").map_err(CliError::data)?;
    }
    Ok(())
}

fn cmd_fit_scaling(a: &FitArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let cfg = FitConfig {
        huber_delta: a.delta,
        step_size: a.step,
        max_iterations: a.max_iter,
        convergence_tol: a.tol,
    };
    cfg.validate().map_err(|e| CliError::usage(e.to_string()))?;
    let obs = read_observations_csv(&a.observations)?;
    let fit = fit_pipeline(&obs, &cfg)?;
    let doc = ConstantsDocument::from_pipeline(&fit);
    if let Some(path) = &a.json_out {
        doc.write(path)?;
    }

    let c = fit.joint.constants;
    let w = |e: std::io::Error| CliError::data(e);
    writeln!(out, "A     = {}", c.a).map_err(w)?;
    writeln!(out, "B     = {}", c.b).map_err(w)?;
    writeln!(out, "E     = {}", c.e).map_err(w)?;
    writeln!(out, "alpha = {}", c.alpha).map_err(w)?;
    writeln!(out, "beta  = {}", c.beta).map_err(w)?;
    writeln!(
        out,
        "iterations = {}, objective = {:e}",
        fit.joint.iterations, fit.joint.objective
    )
    .map_err(w)?;
    writeln!(out, "{:>14}  {:>8}", "n_params", "R^2").map_err(w)?;
    for s in &fit.slices {
        let r2 = s.r_squared.map_or("n/a".to_string(), |r| format!("{r:.4}"));
        writeln!(out, "{:>14.4e}  {:>8}", s.n_params, r2).map_err(w)?;
    }
    if !fit.joint.converged {
        let _ = writeln!(
            err,
            "warning: {}",
            doc.warning.as_deref().unwrap_or_default()
        );
        return Err(CliError::data(format!(
            "ConvergenceError: no convergence within {} iterations",
            fit.joint.iterations
        )));
    }
    Ok(())
}

/// Fixed-point rendering with four significant digits.
pub fn format_sig4(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x:.3}");
    }
    let decimals = (3 - x.abs().log10().floor() as i32).max(0) as usize;
    format!("{x:.decimals$}")
}

fn cmd_predict(a: &PredictArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let doc = read_constants_json(&a.constants).map_err(|e| CliError::usage(e.to_string()))?;
    let loss =
        predict_loss(&doc.constants, a.n, a.d).map_err(|e| CliError::usage(e.to_string()))?;
    writeln!(out, "{}", format_sig4(loss)).map_err(CliError::data)
}
