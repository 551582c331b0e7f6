use serde::{Deserialize, Serialize};

use super::{LogParams, Result, ScalingError, ScalingObservation};

/// `y = offset + amplitude * x^(-exponent)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OffsetPowerLaw {
    pub offset: f64,
    pub amplitude: f64,
    pub exponent: f64,
    /// Residual sum of squares at the returned parameters.
    pub rss: f64,
}

impl OffsetPowerLaw {
    pub fn eval(&self, x: f64) -> f64 {
        self.offset + self.amplitude * x.powf(-self.exponent)
    }

    pub fn rss_at(x: &[f64], y: &[f64], offset: f64, amplitude: f64, exponent: f64) -> f64 {
        x.iter()
            .zip(y)
            .map(|(&xi, &yi)| (yi - offset - amplitude * xi.powf(-exponent)).powi(2))
            .sum()
    }
}

const EXPONENT_MIN: f64 = 1e-4;
const EXPONENT_MAX: f64 = 10.0;
const GRID_POINTS: usize = 800;

/// Linear least squares of `y` on `z` for a fixed exponent; returns
/// `(offset, scaled amplitude, rss)`.
struct Profile<'a> {
    centered_log_x: Vec<f64>,
    y: &'a [f64],
    y_mean: f64,
}

impl<'a> Profile<'a> {
    fn new(x: &[f64], y: &'a [f64]) -> Self {
        let logs: Vec<f64> = x.iter().map(|v| v.ln()).collect();
        let m = logs.iter().sum::<f64>() / logs.len() as f64;
        let y_mean = y.iter().sum::<f64>() / y.len() as f64;
        Self {
            centered_log_x: logs.into_iter().map(|l| l - m).collect(),
            y,
            y_mean,
        }
    }

    fn solve(&self, k: f64) -> (f64, f64, f64) {
        let n = self.y.len() as f64;
        let z: Vec<f64> = self.centered_log_x.iter().map(|u| (-k * u).exp()).collect();
        let z_mean = z.iter().sum::<f64>() / n;
        let mut szz = 0.0;
        let mut szy = 0.0;
        for (zi, yi) in z.iter().zip(self.y) {
            szz += (zi - z_mean).powi(2);
            szy += (zi - z_mean) * (yi - self.y_mean);
        }
        let amp = if szz > 0.0 { szy / szz } else { 0.0 };
        let offset = self.y_mean - amp * z_mean;
        let rss = z
            .iter()
            .zip(self.y)
            .map(|(zi, yi)| (yi - offset - amp * zi).powi(2))
            .sum();
        (offset, amp, rss)
    }

    fn rss(&self, k: f64) -> f64 {
        self.solve(k).2
    }
}

/// Least-squares fit of `y = c + a * x^(-k)` with `c, a, k > 0`.
///
/// For fixed `k` the problem is linear in `(c, a)`, so the residual is
/// profiled over `k`: a log-spaced grid scan locates the basin and a
/// golden-section search polishes it.
pub fn fit_offset_power_law(x: &[f64], y: &[f64]) -> Result<OffsetPowerLaw> {
    assert_eq!(x.len(), y.len());
    if x.iter().chain(y).any(|v| !v.is_finite()) || x.iter().any(|&v| v <= 0.0) {
        return Err(ScalingError::InvalidObservation(
            "power-law inputs must be finite with positive abscissae".into(),
        ));
    }
    let mut distinct: Vec<f64> = x.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
    if distinct.len() < 3 {
        return Err(ScalingError::SingularFit(format!(
            "{} distinct abscissae cannot determine three parameters",
            distinct.len()
        )));
    }
    let profile = Profile::new(x, y);
    let syy: f64 = y.iter().map(|v| (v - profile.y_mean).powi(2)).sum();
    if syy <= 1e-24 * profile.y_mean.powi(2).max(1e-300) * y.len() as f64 {
        return Err(ScalingError::SingularFit(
            "response is constant; exponent is unidentifiable".into(),
        ));
    }

    let log_lo = EXPONENT_MIN.ln();
    let log_hi = EXPONENT_MAX.ln();
    let grid: Vec<f64> = (0..GRID_POINTS)
        .map(|i| (log_lo + (log_hi - log_lo) * i as f64 / (GRID_POINTS - 1) as f64).exp())
        .collect();
    let (best_i, _) = grid.iter().map(|&k| profile.rss(k)).enumerate().fold(
        (0, f64::INFINITY),
        |(bi, bv), (i, v)| if v < bv { (i, v) } else { (bi, bv) },
    );
    if best_i == 0 || best_i == GRID_POINTS - 1 {
        return Err(ScalingError::SingularFit(format!(
            "exponent runs to the search bound {}",
            grid[best_i]
        )));
    }
    let k = golden_section(|k| profile.rss(k), grid[best_i - 1], grid[best_i + 1]);
    let (offset, scaled_amp, rss) = profile.solve(k);
    let log_mean = x.iter().map(|v| v.ln()).sum::<f64>() / x.len() as f64;
    let amplitude = scaled_amp * (k * log_mean).exp();
    if !(offset > 0.0 && amplitude > 0.0) {
        return Err(ScalingError::SingularFit(format!(
            "fit left the positive domain (offset {offset}, amplitude {amplitude})"
        )));
    }
    Ok(OffsetPowerLaw {
        offset,
        amplitude,
        exponent: k,
        rss,
    })
}

fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if hi - lo <= 1e-15 * hi.abs() {
            break;
        }
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    if fc <= fd {
        c
    } else {
        d
    }
}

/// `L(D) = E' + B0 / D^beta0` at one model size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DataScalingFit {
    pub e_prime: f64,
    pub b0: f64,
    pub beta0: f64,
    pub n_params: f64,
    pub rss: f64,
}

/// `E' = E0 + A0 / N^alpha0` across model sizes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelScalingFit {
    pub e0: f64,
    pub a0: f64,
    pub alpha0: f64,
    pub rss: f64,
}

/// Fits the data-scaling curve to observations sharing one model size.
pub fn fit_data_scaling(obs: &[ScalingObservation]) -> Result<DataScalingFit> {
    if obs.len() < 4 {
        return Err(ScalingError::InsufficientData(format!(
            "data scaling needs at least 4 observations, got {}",
            obs.len()
        )));
    }
    for o in obs {
        o.check()?;
    }
    let n = obs[0].n_params;
    if obs.iter().any(|o| (o.n_params - n).abs() > 1e-9 * n) {
        return Err(ScalingError::InvalidObservation(
            "data scaling observations must share one model size".into(),
        ));
    }
    let d: Vec<f64> = obs.iter().map(|o| o.tokens).collect();
    let l: Vec<f64> = obs.iter().map(|o| o.loss).collect();
    let fit = fit_offset_power_law(&d, &l)?;
    Ok(DataScalingFit {
        e_prime: fit.offset,
        b0: fit.amplitude,
        beta0: fit.exponent,
        n_params: n,
        rss: fit.rss,
    })
}

/// Fits the model-size curve to `(N, E'(N))` pairs.
pub fn fit_model_scaling(points: &[(f64, f64)]) -> Result<ModelScalingFit> {
    let mut sizes: Vec<f64> = points.iter().map(|p| p.0).collect();
    sizes.sort_by(f64::total_cmp);
    sizes.dedup();
    if sizes.len() < 3 {
        return Err(ScalingError::InsufficientData(format!(
            "model scaling needs at least 3 distinct model sizes, got {}",
            sizes.len()
        )));
    }
    let n: Vec<f64> = points.iter().map(|p| p.0).collect();
    let e: Vec<f64> = points.iter().map(|p| p.1).collect();
    let fit = fit_offset_power_law(&n, &e)?;
    Ok(ModelScalingFit {
        e0: fit.offset,
        a0: fit.amplitude,
        alpha0: fit.exponent,
        rss: fit.rss,
    })
}

/// Joint-fit starting point: `a = ln A0`, `b = ln mean(B0)`,
/// `alpha = alpha0`, `beta = mean(beta0)`, `e = ln E0`.
pub fn init_from_stages(
    data_fits: &[DataScalingFit],
    model_fit: &ModelScalingFit,
) -> Result<LogParams> {
    if data_fits.is_empty() {
        return Err(ScalingError::InsufficientData(
            "initialization needs at least one data-scaling fit".into(),
        ));
    }
    let k = data_fits.len() as f64;
    let mean_b0 = data_fits.iter().map(|f| f.b0).sum::<f64>() / k;
    let mean_beta0 = data_fits.iter().map(|f| f.beta0).sum::<f64>() / k;
    Ok(LogParams {
        a: model_fit.a0.ln(),
        b: mean_b0.ln(),
        e: model_fit.e0.ln(),
        alpha: model_fit.alpha0,
        beta: mean_beta0,
    })
}
