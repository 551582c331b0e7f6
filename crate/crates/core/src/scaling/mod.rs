//! Chinchilla-form scaling laws, `L(N, D) = E + A / N^alpha + B / D^beta`.
//!
//! Fitting runs in two stages. Each model size gets its own data-scaling
//! curve `L(D) = E'(N) + B0(N) / D^beta0(N)`; the offsets `E'(N)` are then fit
//! with `E' = E0 + A0 / N^alpha0`. Those constants seed a joint fit of all
//! five parameters that minimizes a Huber loss over log-space residuals
//! `LSE(a - alpha ln N, b - beta ln D, e) - ln L`, with `A = e^a`, `B = e^b`,
//! `E = e^e`. All logarithms are natural.

mod goodness;
mod joint;
mod pipeline;
mod stages;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use goodness::{r_squared, r_squared_data, r_squared_model};
pub use joint::{fit_joint, joint_gradient, joint_objective, JointFit, LogParams};
pub use pipeline::{fit_pipeline, group_by_model_size, PipelineFit, SliceFit};
pub use stages::{
    fit_data_scaling, fit_model_scaling, fit_offset_power_law, init_from_stages, DataScalingFit,
    ModelScalingFit, OffsetPowerLaw,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScalingError {
    #[error("InvalidDelta: Huber delta must be positive, got {0}")]
    InvalidDelta(f64),
    #[error("InvalidScale: model size and token count must be positive and finite (N={n}, D={d})")]
    InvalidScale { n: f64, d: f64 },
    #[error("InvalidObservation: {0}")]
    InvalidObservation(String),
    #[error("InsufficientData: {0}")]
    InsufficientData(String),
    #[error("SingularFit: {0}")]
    SingularFit(String),
    #[error("DomainError: {0}")]
    DomainError(String),
    #[error("ConvergenceError: no convergence within {} iterations (objective {:.6e})", .best.iterations, .best.objective)]
    ConvergenceError { best: Box<JointFit> },
}

pub type Result<T> = std::result::Result<T, ScalingError>;

/// One `(model parameters, trained tokens, loss)` measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingObservation {
    pub n_params: f64,
    pub tokens: f64,
    pub loss: f64,
}

impl ScalingObservation {
    pub fn new(n_params: f64, tokens: f64, loss: f64) -> Result<Self> {
        let obs = Self {
            n_params,
            tokens,
            loss,
        };
        obs.check()?;
        Ok(obs)
    }

    pub fn check(&self) -> Result<()> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if ok(self.n_params) && ok(self.tokens) && ok(self.loss) {
            Ok(())
        } else {
            Err(ScalingError::InvalidObservation(format!(
                "N={}, D={}, L={} must all be positive and finite",
                self.n_params, self.tokens, self.loss
            )))
        }
    }
}

/// The five scaling-law constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingConstants {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "E")]
    pub e: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl ScalingConstants {
    pub fn validate(&self) -> Result<()> {
        let vals = [self.a, self.b, self.e, self.alpha, self.beta];
        if vals.iter().all(|v| v.is_finite() && *v > 0.0) {
            Ok(())
        } else {
            Err(ScalingError::DomainError(format!(
                "scaling constants must be positive and finite: {self:?}"
            )))
        }
    }

    pub fn model_term(&self, n: f64) -> f64 {
        self.a / n.powf(self.alpha)
    }

    pub fn data_term(&self, d: f64) -> f64 {
        self.b / d.powf(self.beta)
    }

    pub fn log_params(&self) -> LogParams {
        LogParams {
            a: self.a.ln(),
            b: self.b.ln(),
            e: self.e.ln(),
            alpha: self.alpha,
            beta: self.beta,
        }
    }
}

/// `E + A / N^alpha + B / D^beta`.
pub fn predict_loss(c: &ScalingConstants, n: f64, d: f64) -> Result<f64> {
    if !(n.is_finite() && n > 0.0 && d.is_finite() && d > 0.0) {
        return Err(ScalingError::InvalidScale { n, d });
    }
    Ok(c.e + c.model_term(n) + c.data_term(d))
}

/// Quadratic for `|r| <= delta`, linear with matching slope beyond.
pub fn huber(r: f64, delta: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(ScalingError::InvalidDelta(delta));
    }
    Ok(huber_unchecked(r, delta))
}

pub(crate) fn huber_unchecked(r: f64, delta: f64) -> f64 {
    let a = r.abs();
    if a <= delta {
        0.5 * r * r
    } else {
        delta * (a - 0.5 * delta)
    }
}

/// Derivative of the Huber loss.
pub(crate) fn huber_slope(r: f64, delta: f64) -> f64 {
    r.clamp(-delta, delta)
}

/// Settings for the joint fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    pub huber_delta: f64,
    /// Length of the first, steepest-descent step of the quasi-Newton
    /// iteration (relative to the unit-normalized gradient).
    pub step_size: f64,
    pub max_iterations: usize,
    /// Stop once an accepted step improves the objective by less than this.
    pub convergence_tol: f64,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            huber_delta: 1e-3,
            step_size: 0.05,
            max_iterations: 50_000,
            convergence_tol: 1e-10,
        }
    }
}

impl FitConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.huber_delta > 0.0) {
            return Err(ScalingError::InvalidDelta(self.huber_delta));
        }
        if !(self.step_size > 0.0) || self.max_iterations == 0 || !(self.convergence_tol > 0.0) {
            return Err(ScalingError::DomainError(format!(
                "fit configuration values must be positive: {self:?}"
            )));
        }
        Ok(())
    }
}
