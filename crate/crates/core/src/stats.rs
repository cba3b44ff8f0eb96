//! Small statistics helpers for the experiments: Wilson confidence limits
//! and log-log slope fits.

use crate::error::{invalid, Result};

/// Standard normal 0.99 quantile.
pub const Z_99: f64 = 2.326_347_874_040_841;

/// One-sided Wilson score upper confidence limit for a binomial rate.
pub fn wilson_upper(successes: u64, trials: u64, z: f64) -> Result<f64> {
    if trials == 0 {
        return Err(invalid("Wilson bound needs at least one trial"));
    }
    if successes > trials {
        return Err(invalid(format!("{successes} successes out of {trials} trials")));
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let center = p + z2 / (2.0 * n);
    let spread = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    Ok(((center + spread) / (1.0 + z2 / n)).min(1.0))
}

/// [`wilson_upper`] at the 99% level.
pub fn wilson_upper_99(successes: u64, trials: u64) -> Result<f64> {
    wilson_upper(successes, trials, Z_99)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(invalid("slope fit needs two or more paired points"));
    }
    if xs.iter().chain(ys).any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(invalid("slope fit needs positive finite values"));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(invalid("slope fit needs distinct x values"));
    }
    Ok(sxy / sxx)
}
