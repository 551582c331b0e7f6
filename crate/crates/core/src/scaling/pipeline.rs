use serde::Serialize;

use super::{
    fit_data_scaling, fit_joint, fit_model_scaling, init_from_stages, joint_objective,
    r_squared_data, r_squared_model, DataScalingFit, FitConfig, JointFit, LogParams,
    ModelScalingFit, Result, ScalingError, ScalingObservation,
};

/// Observations grouped by model size, ascending.
pub fn group_by_model_size(obs: &[ScalingObservation]) -> Vec<(f64, Vec<ScalingObservation>)> {
    let mut groups: Vec<(f64, Vec<ScalingObservation>)> = Vec::new();
    for o in obs {
        match groups
            .iter_mut()
            .find(|(n, _)| (n - o.n_params).abs() <= 1e-9 * n.abs())
        {
            Some((_, g)) => g.push(*o),
            None => groups.push((o.n_params, vec![*o])),
        }
    }
    groups.sort_by(|a, b| a.0.total_cmp(&b.0));
    groups
}

#[derive(Debug, Clone, Serialize)]
pub struct SliceFit {
    pub n_params: f64,
    pub data_fit: DataScalingFit,
    /// Token-axis R^2 of the joint constants on this model size.
    pub r_squared: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PipelineFit {
    pub slices: Vec<SliceFit>,
    pub model_fit: ModelScalingFit,
    /// True when the model-scaling curve had no interior optimum and the
    /// model-side initialization came from the exponent scan instead.
    pub model_fit_fallback: bool,
    pub init: LogParams,
    /// `converged == false` when the iteration cap was hit; the constants are
    /// then the best found.
    pub joint: JointFit,
    /// Model-axis R^2 at the largest token count, with that token count.
    pub model_r_squared: Option<(f64, f64)>,
}

/// Data-scaling fit per model size, model-scaling fit of their offsets,
/// initialization from both, then the joint Huber fit.
pub fn fit_pipeline(obs: &[ScalingObservation], cfg: &FitConfig) -> Result<PipelineFit> {
    for o in obs {
        o.check()?;
    }
    let groups = group_by_model_size(obs);
    if groups.len() < 3 {
        return Err(ScalingError::InsufficientData(format!(
            "the two-stage fit needs at least 3 model sizes, got {}",
            groups.len()
        )));
    }
    let data_fits = groups
        .iter()
        .map(|(_, g)| fit_data_scaling(g))
        .collect::<Result<Vec<_>>>()?;
    let offsets: Vec<(f64, f64)> = data_fits.iter().map(|f| (f.n_params, f.e_prime)).collect();
    let (model_fit, model_fit_fallback, init, joint) = match fit_model_scaling(&offsets) {
        Ok(model_fit) => {
            let init = init_from_stages(&data_fits, &model_fit)?;
            (model_fit, false, init, run_joint(obs, &init, cfg)?)
        }
        Err(ScalingError::SingularFit(_)) => {
            // Every scanned candidate is a start; the best end point wins.
            let mut best: Option<(ModelScalingFit, LogParams, JointFit)> = None;
            for candidate in scan_model_fits(&offsets, &data_fits)? {
                let init = init_from_stages(&data_fits, &candidate)?;
                if !joint_objective(&init, obs, cfg.huber_delta)?.is_finite() {
                    continue;
                }
                let joint = run_joint(obs, &init, cfg)?;
                if best
                    .as_ref()
                    .is_none_or(|(_, _, b)| joint.objective < b.objective)
                {
                    best = Some((candidate, init, joint));
                }
            }
            let (m, i, j) = best.ok_or_else(|| {
                ScalingError::SingularFit("no usable model-scaling initialization".into())
            })?;
            (m, true, i, j)
        }
        Err(e) => return Err(e),
    };

    let c = joint.constants;
    let slices = groups
        .iter()
        .zip(data_fits)
        .map(|((n, g), data_fit)| SliceFit {
            n_params: *n,
            data_fit,
            r_squared: r_squared_data(g, &c).ok(),
        })
        .collect();

    let d_max = obs
        .iter()
        .map(|o| o.tokens)
        .fold(f64::NEG_INFINITY, f64::max);
    let last: Vec<ScalingObservation> = obs
        .iter()
        .copied()
        .filter(|o| (o.tokens - d_max).abs() <= 1e-9 * d_max)
        .collect();
    let model_r_squared = r_squared_model(&last, &c).ok().map(|r| (d_max, r));

    Ok(PipelineFit {
        slices,
        model_fit,
        model_fit_fallback,
        init,
        joint,
        model_r_squared,
    })
}

fn run_joint(obs: &[ScalingObservation], init: &LogParams, cfg: &FitConfig) -> Result<JointFit> {
    match fit_joint(obs, init, cfg) {
        Ok(j) => Ok(j),
        Err(ScalingError::ConvergenceError { best }) => Ok(*best),
        Err(e) => Err(e),
    }
}

/// Model-side starting points for offsets that no decreasing power law fits
/// (noisy or non-monotone `E'(N)`). For each exponent on a grid in
/// `[0.025, 1]`, `E0` and `A0` come from linear least squares of `E'` on
/// `N^-alpha0`; where that gives a non-positive value, `E0 = 0.9 * min E'`
/// and `A0` is the mean amplitude that remains.
fn scan_model_fits(
    offsets: &[(f64, f64)],
    data_fits: &[DataScalingFit],
) -> Result<Vec<ModelScalingFit>> {
    if data_fits.is_empty() || offsets.is_empty() {
        return Err(ScalingError::InsufficientData(
            "no stage fits to initialize from".into(),
        ));
    }
    let k = offsets.len() as f64;
    let y_mean = offsets.iter().map(|p| p.1).sum::<f64>() / k;
    let y_min = offsets.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let mut out = Vec::new();
    for step in 1..=40 {
        let alpha0 = 0.025 * step as f64;
        let x: Vec<f64> = offsets.iter().map(|p| p.0.powf(-alpha0)).collect();
        let x_mean = x.iter().sum::<f64>() / k;
        let sxx: f64 = x.iter().map(|v| (v - x_mean).powi(2)).sum();
        let sxy: f64 = x
            .iter()
            .zip(offsets)
            .map(|(v, p)| (v - x_mean) * (p.1 - y_mean))
            .sum();
        let mut a0 = sxy / sxx;
        let mut e0 = y_mean - a0 * x_mean;
        if !(e0 > 0.0 && a0 > 0.0 && a0.is_finite()) {
            e0 = 0.9 * y_min;
            a0 = offsets
                .iter()
                .zip(&x)
                .map(|(p, v)| (p.1 - e0) / v)
                .sum::<f64>()
                / k;
        }
        if !(e0 > 0.0 && a0 > 0.0 && a0.is_finite()) {
            continue;
        }
        let rss = offsets
            .iter()
            .zip(&x)
            .map(|(p, v)| (p.1 - e0 - a0 * v).powi(2))
            .sum();
        out.push(ModelScalingFit {
            e0,
            a0,
            alpha0,
            rss,
        });
    }
    Ok(out)
}
