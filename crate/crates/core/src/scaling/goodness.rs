use super::{Result, ScalingConstants, ScalingError, ScalingObservation};

/// `1 - SS_res / SS_tot`.
pub fn r_squared(y: &[f64], y_hat: &[f64]) -> Result<f64> {
    if y.len() != y_hat.len() || y.len() < 2 {
        return Err(ScalingError::InsufficientData(
            "R^2 needs at least two paired values".into(),
        ));
    }
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let ss_tot: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    if ss_tot <= 0.0 {
        return Err(ScalingError::InsufficientData(
            "R^2 is undefined for a constant response".into(),
        ));
    }
    let ss_res: f64 = y.iter().zip(y_hat).map(|(a, b)| (a - b).powi(2)).sum();
    Ok(1.0 - ss_res / ss_tot)
}

fn shared(values: impl Iterator<Item = f64>, what: &str) -> Result<f64> {
    let mut first = None;
    for v in values {
        match first {
            None => first = Some(v),
            Some(f) if (v - f).abs() > 1e-9 * f.abs() => {
                return Err(ScalingError::InvalidObservation(format!(
                    "observations must share one {what}"
                )))
            }
            _ => {}
        }
    }
    first.ok_or_else(|| ScalingError::InsufficientData("no observations".into()))
}

fn distinct_count(mut v: Vec<f64>) -> usize {
    v.sort_by(f64::total_cmp);
    v.dedup();
    v.len()
}

/// Goodness of fit along the token axis at one model size: regresses
/// `ln(L - E - A/N^alpha)` against `ln B - beta ln D`.
pub fn r_squared_data(obs: &[ScalingObservation], c: &ScalingConstants) -> Result<f64> {
    let n = shared(obs.iter().map(|o| o.n_params), "model size")?;
    if distinct_count(obs.iter().map(|o| o.tokens).collect()) < 2 {
        return Err(ScalingError::InsufficientData(
            "data R^2 needs at least two token counts".into(),
        ));
    }
    let floor = c.e + c.model_term(n);
    let mut y = Vec::with_capacity(obs.len());
    let mut y_hat = Vec::with_capacity(obs.len());
    for o in obs {
        let rest = o.loss - floor;
        if !(rest > 0.0) {
            return Err(ScalingError::DomainError(format!(
                "loss {} at D={} does not exceed E + A/N^alpha = {floor}",
                o.loss, o.tokens
            )));
        }
        y.push(rest.ln());
        y_hat.push(c.b.ln() - c.beta * o.tokens.ln());
    }
    r_squared(&y, &y_hat)
}

/// Goodness of fit along the model-size axis at one token count: regresses
/// `ln(L - E - B/D^beta)` against `ln A - alpha ln N`.
pub fn r_squared_model(obs: &[ScalingObservation], c: &ScalingConstants) -> Result<f64> {
    let d = shared(obs.iter().map(|o| o.tokens), "token count")?;
    if distinct_count(obs.iter().map(|o| o.n_params).collect()) < 2 {
        return Err(ScalingError::InsufficientData(
            "model R^2 needs at least two model sizes".into(),
        ));
    }
    let floor = c.e + c.data_term(d);
    let mut y = Vec::with_capacity(obs.len());
    let mut y_hat = Vec::with_capacity(obs.len());
    for o in obs {
        let rest = o.loss - floor;
        if !(rest > 0.0) {
            return Err(ScalingError::DomainError(format!(
                "loss {} at N={} does not exceed E + B/D^beta = {floor}",
                o.loss, o.n_params
            )));
        }
        y.push(rest.ln());
        y_hat.push(c.a.ln() - c.alpha * o.n_params.ln());
    }
    r_squared(&y, &y_hat)
}
