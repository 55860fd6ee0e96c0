//! Gaussian-input log-det rates of one block under a scheme.

use crate::error::{Error, Result};
use crate::linalg::{identity, kron, log2_det_identity_plus};
use crate::scheme::{effective_direct_channel, Scheme};

use super::channel::ChannelBlock;

/// Per-slot rates `(r1, r2)` in bits per channel use at transmit SNR `p`.
///
/// `r1 = log2 det(I + (p/M1) Σ⁻¹ ÃÃ†) / T` with `Σ = Q̃Q̃†`, a scaled
/// identity; `r2 = log2 det(I + (p/s2) GG†) / T` with `G = (I_T ⊗ H22) P̃`.
pub fn block_rates(block: &ChannelBlock, scheme: &Scheme, p_linear: f64) -> Result<(f64, f64)> {
    if !(p_linear >= 0.0 && p_linear.is_finite()) {
        return Err(Error::Domain(format!("transmit power {p_linear} must be finite and nonnegative")));
    }
    let t = scheme.expansion;
    if block.coherence < t {
        return Err(Error::Domain(format!("coherence {} shorter than expansion {t}", block.coherence)));
    }
    if block.h22.ncols() * t != scheme.beamforming.nrows() {
        return Err(Error::Domain(format!(
            "H22 has {} columns, scheme expects {}",
            block.h22.ncols(),
            scheme.beamforming.nrows() / t
        )));
    }
    let a = effective_direct_channel(&block.bank, &scheme.pattern, &scheme.nulling)?;
    let s1 = scheme.nulling.nrows();
    let sigma = if s1 == 0 {
        1.0
    } else {
        (&scheme.nulling * scheme.nulling.adjoint()).trace().re / s1 as f64
    };
    let m1 = scheme.config.m1() as f64;
    let r1 = log2_det_identity_plus(&a, p_linear / (m1 * sigma))? / t as f64;

    let s2 = scheme.beamforming.ncols();
    let r2 = if s2 == 0 {
        0.0
    } else {
        let g = kron(&identity(t), &block.h22) * &scheme.beamforming;
        log2_det_identity_plus(&g, p_linear / s2 as f64)? / t as f64
    };
    Ok((r1, r2))
}
