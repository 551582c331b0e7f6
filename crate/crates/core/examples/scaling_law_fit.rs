//! Fit L(N, D) = E + A/N^alpha + B/D^beta to a grid of (model size, tokens,
//! loss) observations and extrapolate.

use ordo::scaling::{fit_pipeline, predict_loss, FitConfig, ScalingConstants, ScalingObservation};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let truth = ScalingConstants {
        a: 482.0,
        b: 5120.0,
        e: 1.693,
        alpha: 0.354,
        beta: 0.295,
    };
    let mut obs = Vec::new();
    for n in [1.6e8, 4.7e8, 1.0e9, 1.7e9] {
        for k in 1..=20 {
            let d = 2.5e9 * k as f64;
            obs.push(ScalingObservation::new(n, d, predict_loss(&truth, n, d)?)?);
        }
    }

    let fit = fit_pipeline(&obs, &FitConfig::default())?;
    for s in &fit.slices {
        let f = &s.data_fit;
        println!(
            "N={:.1e}: E'={:.4} B0={:.1} beta0={:.4} R^2={:.6}",
            s.n_params,
            f.e_prime,
            f.b0,
            f.beta0,
            s.r_squared.unwrap_or(f64::NAN)
        );
    }
    let c = fit.joint.constants;
    println!(
        "joint: A={:.2} B={:.2} E={:.4} alpha={:.4} beta={:.4} ({} iterations, objective {:.3e})",
        c.a, c.b, c.e, c.alpha, c.beta, fit.joint.iterations, fit.joint.objective
    );
    for (n, d) in [(7e9, 1e11), (7e10, 1.4e12)] {
        println!(
            "predicted loss at N={n:.0e}, D={d:.0e}: {:.4}",
            predict_loss(&c, n, d)?
        );
    }
    Ok(())
}
