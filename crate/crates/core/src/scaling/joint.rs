use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{
    huber_slope, huber_unchecked, FitConfig, Result, ScalingConstants, ScalingError,
    ScalingObservation,
};

/// Log-space parameters of the joint objective: `A = e^a`, `B = e^b`,
/// `E = e^e`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogParams {
    pub a: f64,
    pub b: f64,
    pub e: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl LogParams {
    pub fn to_array(self) -> [f64; 5] {
        [self.a, self.b, self.e, self.alpha, self.beta]
    }

    pub fn from_array(v: [f64; 5]) -> Self {
        Self {
            a: v[0],
            b: v[1],
            e: v[2],
            alpha: v[3],
            beta: v[4],
        }
    }

    pub fn to_constants(self) -> ScalingConstants {
        ScalingConstants {
            a: self.a.exp(),
            b: self.b.exp(),
            e: self.e.exp(),
            alpha: self.alpha,
            beta: self.beta,
        }
    }
}

/// Observations pre-transformed to logs.
struct LogData {
    ln_n: Vec<f64>,
    ln_d: Vec<f64>,
    ln_l: Vec<f64>,
}

impl LogData {
    fn new(obs: &[ScalingObservation]) -> Result<Self> {
        for o in obs {
            o.check()?;
        }
        Ok(Self {
            ln_n: obs.iter().map(|o| o.n_params.ln()).collect(),
            ln_d: obs.iter().map(|o| o.tokens.ln()).collect(),
            ln_l: obs.iter().map(|o| o.loss.ln()).collect(),
        })
    }

    /// Objective and (optionally) its gradient, in `[a, b, e, alpha, beta]`
    /// order.
    fn eval(&self, p: &[f64; 5], delta: f64, grad: Option<&mut [f64; 5]>) -> f64 {
        let [a, b, e, alpha, beta] = *p;
        let mut total = 0.0;
        let mut g = [0.0; 5];
        for i in 0..self.ln_l.len() {
            let t1 = a - alpha * self.ln_n[i];
            let t2 = b - beta * self.ln_d[i];
            let t3 = e;
            let m = t1.max(t2).max(t3);
            let (x1, x2, x3) = ((t1 - m).exp(), (t2 - m).exp(), (t3 - m).exp());
            let sum = x1 + x2 + x3;
            let lse = m + sum.ln();
            let r = lse - self.ln_l[i];
            total += huber_unchecked(r, delta);
            let psi = huber_slope(r, delta);
            let (w1, w2, w3) = (x1 / sum, x2 / sum, x3 / sum);
            g[0] += psi * w1;
            g[1] += psi * w2;
            g[2] += psi * w3;
            g[3] -= psi * w1 * self.ln_n[i];
            g[4] -= psi * w2 * self.ln_d[i];
        }
        if let Some(out) = grad {
            *out = g;
        }
        total
    }
}

/// `sum_i Huber_delta(LSE(a - alpha ln N_i, b - beta ln D_i, e) - ln L_i)`.
pub fn joint_objective(params: &LogParams, obs: &[ScalingObservation], delta: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(ScalingError::InvalidDelta(delta));
    }
    Ok(LogData::new(obs)?.eval(&params.to_array(), delta, None))
}

/// Analytic gradient of [`joint_objective`] in `[a, b, e, alpha, beta]`
/// order.
pub fn joint_gradient(
    params: &LogParams,
    obs: &[ScalingObservation],
    delta: f64,
) -> Result<[f64; 5]> {
    if !(delta > 0.0) {
        return Err(ScalingError::InvalidDelta(delta));
    }
    let mut g = [0.0; 5];
    LogData::new(obs)?.eval(&params.to_array(), delta, Some(&mut g));
    Ok(g)
}

/// Result of the joint fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointFit {
    pub constants: ScalingConstants,
    pub params: LogParams,
    pub init: LogParams,
    pub iterations: usize,
    pub objective: f64,
    pub init_objective: f64,
    pub converged: bool,
    /// Objective after every accepted step, starting with the initial value.
    #[serde(skip)]
    pub trace: Vec<f64>,
}

fn dot(a: &[f64; 5], b: &[f64; 5]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(x: &[f64; 5], t: f64, d: &[f64; 5]) -> [f64; 5] {
    std::array::from_fn(|i| x[i] + t * d[i])
}

const HISTORY: usize = 10;
const ARMIJO_C: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 60;

/// L-BFGS direction from the stored curvature pairs (two-loop recursion).
fn lbfgs_direction(g: &[f64; 5], history: &VecDeque<([f64; 5], [f64; 5])>) -> [f64; 5] {
    let mut q = g.map(|v| -v);
    let mut alphas = Vec::with_capacity(history.len());
    for (s, y) in history.iter().rev() {
        let rho = 1.0 / dot(y, s);
        let alpha = rho * dot(s, &q);
        q = axpy(&q, -alpha, y);
        alphas.push((rho, alpha));
    }
    if let Some((s, y)) = history.back() {
        let gamma = dot(s, y) / dot(y, y);
        q = q.map(|v| v * gamma);
    }
    for ((s, y), (rho, alpha)) in history.iter().zip(alphas.into_iter().rev()) {
        let beta = rho * dot(y, &q);
        q = axpy(&q, alpha - beta, s);
    }
    q
}

/// Minimizes the joint Huber objective from `init` with L-BFGS and an
/// Armijo backtracking line search.
///
/// The first step (and any restart after a failed quasi-Newton step) is a
/// steepest-descent step of length `cfg.step_size * min(1, 1/|g|_1)`. The
/// iteration stops once an accepted step improves the objective by less than
/// `cfg.convergence_tol`, or when no descent step can be found.
pub fn fit_joint(
    obs: &[ScalingObservation],
    init: &LogParams,
    cfg: &FitConfig,
) -> Result<JointFit> {
    cfg.validate()?;
    let mut n_sizes: Vec<f64> = obs.iter().map(|o| o.n_params).collect();
    n_sizes.sort_by(f64::total_cmp);
    n_sizes.dedup();
    let mut d_sizes: Vec<f64> = obs.iter().map(|o| o.tokens).collect();
    d_sizes.sort_by(f64::total_cmp);
    d_sizes.dedup();
    if obs.len() < 6 || n_sizes.len() < 2 || d_sizes.len() < 3 {
        return Err(ScalingError::InsufficientData(format!(
            "joint fit needs >= 6 observations over >= 2 model sizes and >= 3 token counts \
             (got {} observations, {} sizes, {} token counts)",
            obs.len(),
            n_sizes.len(),
            d_sizes.len()
        )));
    }
    let data = LogData::new(obs)?;
    let delta = cfg.huber_delta;
    let eval = |p: &[f64; 5], g: &mut [f64; 5]| data.eval(p, delta, Some(g));

    let mut x = init.to_array();
    if x.iter().any(|v| !v.is_finite()) {
        return Err(ScalingError::DomainError(format!(
            "initial parameters are not finite: {init:?}"
        )));
    }
    let mut g = [0.0; 5];
    let mut f = eval(&x, &mut g);
    let init_objective = f;
    let mut trace = vec![f];
    let mut history: VecDeque<([f64; 5], [f64; 5])> = VecDeque::with_capacity(HISTORY);
    let mut iterations = 0;

    let finish = |x: [f64; 5], f: f64, iterations: usize, trace: Vec<f64>, converged: bool| {
        let params = LogParams::from_array(x);
        JointFit {
            constants: params.to_constants(),
            params,
            init: *init,
            iterations,
            objective: f,
            init_objective,
            converged,
            trace,
        }
    };

    loop {
        if g.iter().all(|v| v.abs() <= f64::MIN_POSITIVE) {
            return Ok(finish(x, f, iterations, trace, true));
        }
        if iterations >= cfg.max_iterations {
            let best = finish(x, f, iterations, trace, false);
            return Err(ScalingError::ConvergenceError {
                best: Box::new(best),
            });
        }

        let mut accepted = None;
        for attempt in 0..2 {
            let steepest = history.is_empty();
            let d = if steepest {
                g.map(|v| -v)
            } else {
                lbfgs_direction(&g, &history)
            };
            let gd = dot(&g, &d);
            if !(gd < 0.0) {
                history.clear();
                if attempt == 0 {
                    continue;
                }
                break;
            }
            let mut t = if steepest {
                let l1: f64 = g.iter().map(|v| v.abs()).sum();
                cfg.step_size * (1.0 / l1).min(1.0)
            } else {
                1.0
            };
            let mut g_new = [0.0; 5];
            for _ in 0..MAX_BACKTRACKS {
                let x_new = axpy(&x, t, &d);
                let f_new = eval(&x_new, &mut g_new);
                if f_new.is_finite() && f_new <= f + ARMIJO_C * t * gd {
                    accepted = Some((x_new, f_new, g_new));
                    break;
                }
                t *= 0.5;
            }
            if accepted.is_some() {
                break;
            }
            if steepest {
                break;
            }
            history.clear();
        }

        let Some((x_new, f_new, g_new)) = accepted else {
            return Ok(finish(x, f, iterations, trace, true));
        };
        let s: [f64; 5] = std::array::from_fn(|i| x_new[i] - x[i]);
        let y: [f64; 5] = std::array::from_fn(|i| g_new[i] - g[i]);
        let sy = dot(&s, &y);
        if sy > 1e-12 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
            if history.len() == HISTORY {
                history.pop_front();
            }
            history.push_back((s, y));
        }
        let improvement = f - f_new;
        x = x_new;
        f = f_new;
        g = g_new;
        iterations += 1;
        trace.push(f);
        if improvement < cfg.convergence_tol {
            return Ok(finish(x, f, iterations, trace, true));
        }
    }
}
