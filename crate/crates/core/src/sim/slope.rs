//! High-SNR slope estimation: least-squares fit of rate against `log2 p`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::sweep::RateCurve;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeEstimate {
    pub d1_hat: f64,
    pub d2_hat: f64,
    /// SNR points (dB) inside the window.
    pub window: Vec<f64>,
    /// Regression standard errors of `(d1_hat, d2_hat)`; absent with fewer
    /// than three points.
    pub stderr: Option<(f64, f64)>,
}

/// Slope and its standard error for `y ≈ a + b x`.
fn fit(x: &[f64], y: &[f64]) -> (f64, Option<f64>) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|xi| (xi - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(xi, yi)| (xi - mx) * (yi - my)).sum();
    let b = sxy / sxx;
    let se = (x.len() > 2).then(|| {
        let sse: f64 = x.iter().zip(y).map(|(xi, yi)| (yi - my - b * (xi - mx)).powi(2)).sum();
        (sse / (n - 2.0) / sxx).sqrt()
    });
    (b, se)
}

/// Fits both rates over the grid points with `snr_db >= min_snr_db`.
pub fn estimate_slopes(curve: &RateCurve, min_snr_db: f64) -> Result<SlopeEstimate> {
    let idx: Vec<usize> = (0..curve.snr_db.len()).filter(|&i| curve.snr_db[i] >= min_snr_db).collect();
    if idx.len() < 2 {
        return Err(Error::Domain(format!(
            "slope window at or above {min_snr_db} dB has {} point(s), need 2",
            idx.len()
        )));
    }
    let x: Vec<f64> = idx.iter().map(|&i| curve.snr_db[i] / 10.0 * 10f64.log2()).collect();
    let pick = |v: &[f64]| idx.iter().map(|&i| v[i]).collect::<Vec<_>>();
    let (d1, se1) = fit(&x, &pick(&curve.r1));
    let (d2, se2) = fit(&x, &pick(&curve.r2));
    if !(d1.is_finite() && d2.is_finite()) {
        return Err(Error::Domain("slope window produced a non-finite fit".into()));
    }
    Ok(SlopeEstimate {
        d1_hat: d1,
        d2_hat: d2,
        window: pick(&curve.snr_db),
        stderr: se1.zip(se2),
    })
}
