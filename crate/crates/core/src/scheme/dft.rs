//! DFT-based nulling/beamforming pairs and the closed-form alternatives.
//!
//! Roots of unity follow `ω_N = exp(-j2π/N)`.

use crate::error::{Error, Result};
use crate::linalg::{c, identity, kron, rank_margin, root_of_unity, vandermonde, CMatrix};

use super::pattern::ModeSwitchPattern;

/// First `m` rows of the `n`-point DFT: `Q[i][k] = ω_n^{ik}`, i.e.
/// `[V_n(1, ω_n, …, ω_n^{m-1})]ᵀ`.
pub fn dft_rows(n: usize, m: usize) -> CMatrix {
    CMatrix::from_fn(m, n, |i, k| root_of_unity(n, (i * k) as i64))
}

/// `V_n(ω_n^{-m}, …, ω_n^{-(n-1)})`: the `n - m` DFT columns orthogonal to
/// [`dft_rows`]`(n, m)`.
pub fn dft_complement(n: usize, m: usize) -> CMatrix {
    CMatrix::from_fn(n, n - m, |k, j| root_of_unity(n, -(((m + j) * k) as i64)))
}

/// `(Q, P)` with `Q` the `m1 × n1` partial DFT and `P` the `n1 × (n1-m1)`
/// complement, so `Q·P = 0` and `[Q†, P]` is an unnormalised IDFT matrix.
pub fn dft_nulling_pair(n1: usize, m1: usize) -> Result<(CMatrix, CMatrix)> {
    if m1 == 0 || m1 >= n1 {
        return Err(Error::Domain(format!("need 1 <= m1 < n1, got m1={m1}, n1={n1}")));
    }
    Ok((dft_rows(n1, m1), dft_complement(n1, m1)))
}

/// `I_{m1} ⊗ 1_βᵀ` with `β = n1 / m1`.
pub fn beta_nulling(n1: usize, m1: usize) -> Result<CMatrix> {
    if m1 == 0 || !n1.is_multiple_of(m1) {
        return Err(Error::Domain(format!("n1 = {n1} is not a multiple of m1 = {m1}")));
    }
    let beta = n1 / m1;
    let ones = CMatrix::from_element(1, beta, c(1.0, 0.0));
    Ok(kron(&identity(m1), &ones))
}

/// `[I_{β-1}; -1ᵀ]`: lower-triangular beamformer annihilated by `1_βᵀ`, so
/// each user-2 stream only sees interference from streams already decoded.
pub fn successive_beamformer(beta: usize) -> Result<CMatrix> {
    if beta < 2 {
        return Err(Error::Domain(format!("β = {beta} must be at least 2")));
    }
    Ok(CMatrix::from_fn(beta, beta - 1, |i, j| {
        if i == beta - 1 {
            c(-1.0, 0.0)
        } else if i == j {
            c(1.0, 0.0)
        } else {
            c(0.0, 0.0)
        }
    }))
}

/// The `m1·n1 × m1·n1` matrix whose block `(i, a)` is `(ω_{n1}^{-a} G)^i`,
/// `G = diag(1, ω_{n1}, …, ω_{n1}^{n1-1})`. Under cyclic switching the
/// column-regrouped effective channel factors as `(I_{m1} ⊗ Ĥ) · R`.
pub fn r_matrix(n1: usize, m1: usize) -> CMatrix {
    let mut r = CMatrix::zeros(m1 * n1, m1 * n1);
    for i in 0..m1 {
        for a in 0..m1 {
            for k in 0..n1 {
                let e = (k as i64 - a as i64) * i as i64;
                r[(i * n1 + k, a * n1 + k)] = root_of_unity(n1, e);
            }
        }
    }
    r
}

/// Whether [`r_matrix`] is numerically nonsingular (`σ_min > 1e-9·σ_max`).
/// Returns `false` outside `1 <= m1 < n1`.
pub fn r_matrix_check(n1: usize, m1: usize) -> bool {
    if m1 == 0 || m1 >= n1 {
        return false;
    }
    rank_margin(&r_matrix(n1, m1)) > 1e-9
}

/// Mode bank and pattern that make the effective channel an exact
/// Vandermonde matrix: `K = m1·n1` modes, mode `a·n1 + t` is
/// `g_{n1}(ω^{a·n1+t})` with `ω = exp(-j2π/n1²)`, and slot `t` uses modes
/// `t, n1+t, …, (m1-1)n1+t`.
pub fn permuted_dft_bank(n1: usize, m1: usize) -> Result<(CMatrix, ModeSwitchPattern)> {
    if m1 == 0 || m1 >= n1 {
        return Err(Error::Domain(format!("need 1 <= m1 < n1, got m1={m1}, n1={n1}")));
    }
    let nn = n1 * n1;
    let nodes: Vec<_> = (0..m1 * n1).map(|e| root_of_unity(nn, e as i64)).collect();
    let bank = vandermonde(n1, &nodes);
    let slots = (0..n1)
        .map(|t| (0..m1).map(|a| a * n1 + t + 1).collect())
        .collect();
    Ok((bank, ModeSwitchPattern::new(m1 * n1, slots)?))
}

/// The Vandermonde matrix the permuted-DFT bank must produce:
/// `V_{m1 n1}(ω^{0}, ω^{n1}, …, ω^{(m1-1)n1}, ω^{1}, ω^{n1+1}, …)`.
pub fn permuted_dft_vandermonde(n1: usize, m1: usize) -> CMatrix {
    let nn = n1 * n1;
    let nodes: Vec<_> = (0..n1)
        .flat_map(|t| (0..m1).map(move |a| root_of_unity(nn, (a * n1 + t) as i64)))
        .collect();
    vandermonde(m1 * n1, &nodes)
}
