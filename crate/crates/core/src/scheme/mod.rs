//! Time-expanded beamforming and nulling constructions driven by antenna
//! mode switching at transmitter 1, and the checks of their defining
//! conditions.
//!
//! Over `T` slots receiver 1 sees
//! `ỹ = H̃11 x̃1 + (I_T ⊗ H12) P̃ x̃2 + z̃` and applies `Q̃`. A scheme works when
//! `Q̃ (I_T ⊗ H12) P̃ = 0`, `Ã = Q̃ H̃11` is square and nonsingular, and `P̃`
//! has full column rank. Transmitter 2 never needs CSIT; only the
//! limited-mode construction makes `Q̃` depend on the realised `H12`.

pub mod dft;
pub mod pattern;

use serde::{Deserialize, Serialize};

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::linalg::{
    block_diag, hcat, identity, kron, left_null_space, matrix_serde, max_abs, rank_margin, selector,
    CMatrix,
};

pub use dft::{
    beta_nulling, dft_complement, dft_nulling_pair, dft_rows, permuted_dft_bank,
    permuted_dft_vandermonde, r_matrix, r_matrix_check, successive_beamformer,
};
pub use pattern::{cyclic_pattern, ModeSwitchPattern};

/// Nulling residual must stay below this times `‖H12‖_F`.
pub const NULLING_TOLERANCE: f64 = 1e-10;
/// Minimum `σ_min/σ_max` for a matrix to count as full rank.
pub const RANK_TOLERANCE: f64 = 1e-8;
/// Maximum relative deviation of `Q̃Q̃†` from a scaled identity.
pub const WHITENING_TOLERANCE: f64 = 1e-10;

/// Constituent matrices kept for audit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SchemeFactors {
    /// `Q̃ = Q ⊗ I_{N1}`, `P̃ = P ⊗ I_{M2}`.
    FullMode {
        #[serde(with = "matrix_serde")]
        q: CMatrix,
        #[serde(with = "matrix_serde")]
        p: CMatrix,
    },
    /// `Q̃ = Q^F ⊗ Q^S`, `P̃ = [P_a^F ⊗ P_a^S, P_b^F ⊗ P_b^S]`.
    SpaceFrequency {
        #[serde(with = "matrix_serde")]
        q_freq: CMatrix,
        #[serde(with = "matrix_serde")]
        q_space: CMatrix,
        #[serde(with = "matrix_serde")]
        pa_freq: CMatrix,
        #[serde(with = "matrix_serde")]
        pa_space: CMatrix,
        #[serde(with = "matrix_serde")]
        pb_freq: CMatrix,
        #[serde(with = "matrix_serde")]
        pb_space: CMatrix,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scheme {
    pub config: SystemConfig,
    /// Modes `K` available at transmitter 1.
    pub modes: usize,
    /// Slots `T` per block.
    pub expansion: usize,
    /// `Q̃`: `s1 × N1·T`.
    #[serde(with = "matrix_serde")]
    pub nulling: CMatrix,
    /// `P̃`: `M2·T × s2`, unit-norm columns.
    #[serde(with = "matrix_serde")]
    pub beamforming: CMatrix,
    pub pattern: ModeSwitchPattern,
    /// Streams `(s1, s2)` delivered per block.
    pub streams: (usize, usize),
    /// `true` when `Q̃` was built from a particular `H12`.
    pub channel_dependent: bool,
    pub factors: SchemeFactors,
}

impl Scheme {
    /// Streams per slot, i.e. the DoF pair the scheme is designed to reach.
    pub fn per_slot_streams(&self) -> (f64, f64) {
        let t = self.expansion as f64;
        (self.streams.0 as f64 / t, self.streams.1 as f64 / t)
    }

    /// Interference seen by receiver 1 after nulling: `Q̃ (I_T ⊗ H12) P̃`.
    pub fn residual_interference(&self, h12: &CMatrix) -> Result<CMatrix> {
        let t = self.expansion;
        if h12.ncols() * t != self.beamforming.nrows() || h12.nrows() * t != self.nulling.ncols() {
            return Err(Error::Domain(format!(
                "H12 is {}x{}, scheme expects {}x{}",
                h12.nrows(),
                h12.ncols(),
                self.nulling.ncols() / t,
                self.beamforming.nrows() / t
            )));
        }
        Ok(&self.nulling * kron(&identity(t), h12) * &self.beamforming)
    }
}

fn normalize_columns(mut m: CMatrix) -> CMatrix {
    for mut col in m.column_iter_mut() {
        let n = col.norm();
        if n > 0.0 {
            col.unscale_mut(n);
        }
    }
    m
}

/// `Q̃ = Q ⊗ I_{n1}` and `P̃ = P ⊗ I_{m2}`.
pub fn time_expand_pair(q: &CMatrix, p: &CMatrix, m2: usize, n1: usize) -> Result<(CMatrix, CMatrix)> {
    if q.ncols() != p.nrows() {
        return Err(Error::Domain(format!(
            "Q is {}x{} but P is {}x{}",
            q.nrows(),
            q.ncols(),
            p.nrows(),
            p.ncols()
        )));
    }
    if m2 == 0 || n1 == 0 {
        return Err(Error::Domain("antenna counts must be positive".into()));
    }
    Ok((kron(q, &identity(n1)), kron(p, &identity(m2))))
}

/// `Ã = Q̃ · blockdiag(H11(1), …, H11(T))` with `H11(t)` the bank columns
/// chosen by slot `t`.
pub fn effective_direct_channel(bank: &CMatrix, pattern: &ModeSwitchPattern, tilde_q: &CMatrix) -> Result<CMatrix> {
    let t = pattern.len();
    if tilde_q.ncols() != bank.nrows() * t {
        return Err(Error::Domain(format!(
            "nulling matrix has {} columns, expected N1·T = {}",
            tilde_q.ncols(),
            bank.nrows() * t
        )));
    }
    let blocks = (0..t).map(|s| pattern.select(bank, s)).collect::<Result<Vec<_>>>()?;
    Ok(tilde_q * block_diag(&blocks))
}

fn require_shape(config: &SystemConfig) -> Result<()> {
    if config.needs_switching_tx1() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{config} does not satisfy M1 < N1 < min(M2, N2)")))
    }
}

/// Transmitter 2 only drives its first `min(M2, N2)` antennas.
fn embed_tx2(config: &SystemConfig, slots: usize, p: &CMatrix) -> CMatrix {
    let used = config.user2_dims();
    if used == config.m2() {
        return p.clone();
    }
    kron(&identity(slots), &selector(config.m2(), used)) * p
}

/// Blind scheme with `K = N1` modes switched cyclically over `N1` slots: DFT
/// nulling at receiver 1, DFT-complement beamforming at transmitter 2.
/// Delivers `(M1·N1, m(N1-M1))` streams, `m = min(M2, N2)`.
pub fn build_full_mode_scheme(config: &SystemConfig) -> Result<Scheme> {
    require_shape(config)?;
    let (m1, n1) = (config.m1(), config.n1());
    let m = config.user2_dims();
    let (q, p) = dft_nulling_pair(n1, m1)?;
    let (tq, tp) = time_expand_pair(&q, &p, m, n1)?;
    Ok(Scheme {
        config: *config,
        modes: n1,
        expansion: n1,
        nulling: tq,
        beamforming: normalize_columns(embed_tx2(config, n1, &tp)),
        pattern: cyclic_pattern(n1, m1, n1)?,
        streams: (m1 * n1, m * (n1 - m1)),
        channel_dependent: false,
        factors: SchemeFactors::FullMode { q, p },
    })
}

/// Variant for `N1 = β·M1`: `Q = I_{M1} ⊗ 1_βᵀ`, `P = I_{M1} ⊗ [I_{β-1}; -1ᵀ]`,
/// using `N1` modes in `N1` slots.
pub fn build_beta_scheme(config: &SystemConfig) -> Result<Scheme> {
    require_shape(config)?;
    let (m1, n1) = (config.m1(), config.n1());
    let m = config.user2_dims();
    let q = beta_nulling(n1, m1)?;
    let p = kron(&identity(m1), &successive_beamformer(n1 / m1)?);
    let (tq, tp) = time_expand_pair(&q, &p, m, n1)?;
    Ok(Scheme {
        config: *config,
        modes: n1,
        expansion: n1,
        nulling: tq,
        beamforming: normalize_columns(embed_tx2(config, n1, &tp)),
        pattern: ModeSwitchPattern::beta_blocks(n1, m1)?,
        streams: (m1 * n1, m * (n1 - m1)),
        channel_dependent: false,
        factors: SchemeFactors::FullMode { q, p },
    })
}

/// Joint space-frequency nulling with `K` modes, `M1 <= K <= N1`, over `K`
/// slots. Frequency nulling removes the `K - M1` interference bins carried by
/// `P_a`; spatial zero forcing (`Q^S`, built from `h12`) removes the
/// `N1 - K` antenna streams carried by `P_b`.
///
/// `K = N1` reduces to [`build_full_mode_scheme`] and `K = M1` to plain
/// spatial zero forcing.
pub fn build_space_freq_scheme(config: &SystemConfig, k: usize, h12: &CMatrix) -> Result<Scheme> {
    require_shape(config)?;
    let (m1, n1, m2) = (config.m1(), config.n1(), config.m2());
    if k < m1 || k > n1 {
        return Err(Error::Domain(format!("K = {k} outside [{m1}, {n1}]")));
    }
    if h12.shape() != (n1, m2) {
        return Err(Error::Domain(format!(
            "H12 is {}x{}, expected {n1}x{m2}",
            h12.nrows(),
            h12.ncols()
        )));
    }
    let m = config.user2_dims();

    let q_freq = dft_rows(k, m1);
    let pa_freq = dft_complement(k, m1);
    let pb_freq = q_freq.adjoint();
    let pa_space = selector(m2, m);
    let pb_space = selector(m2, n1 - k);
    let q_space = left_null_space(&(h12 * &pb_space), NULLING_TOLERANCE)?;
    if q_space.nrows() != k {
        return Err(Error::Degenerate(format!(
            "left null space has dimension {}, expected {k}",
            q_space.nrows()
        )));
    }

    let nulling = kron(&q_freq, &q_space);
    let beamforming = normalize_columns(hcat(&kron(&pa_freq, &pa_space), &kron(&pb_freq, &pb_space)));
    Ok(Scheme {
        config: *config,
        modes: k,
        expansion: k,
        nulling,
        beamforming,
        pattern: cyclic_pattern(k, m1, k)?,
        streams: (k * m1, m * (k - m1) + m1 * (n1 - k)),
        channel_dependent: k < n1,
        factors: SchemeFactors::SpaceFrequency { q_freq, q_space, pa_freq, pa_space, pb_freq, pb_space },
    })
}

/// Numerical status of the scheme conditions on one channel realisation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    /// `max |Q̃ (I_T ⊗ H12) P̃|`.
    pub nulling_residual: f64,
    /// `σ_min/σ_max` of `Ã`.
    pub direct_rank_margin: f64,
    /// `σ_min/σ_max` of `P̃`.
    pub beamformer_rank_margin: f64,
    /// `max |Q̃Q̃†/c - I|` with `c` the mean diagonal.
    pub whitening_deviation: f64,
    pub nulling_ok: bool,
    pub direct_rank_ok: bool,
    pub beamformer_rank_ok: bool,
    pub whitening_ok: bool,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.nulling_ok && self.direct_rank_ok && self.beamformer_rank_ok && self.whitening_ok
    }
}

/// `max |Q̃Q̃†/c - I|`, `c` = mean diagonal of `Q̃Q̃†`.
pub fn whitening_deviation(tilde_q: &CMatrix) -> f64 {
    let sigma = tilde_q * tilde_q.adjoint();
    let n = sigma.nrows();
    if n == 0 {
        return 0.0;
    }
    let scale = sigma.trace().re / n as f64;
    if scale <= 0.0 {
        return f64::INFINITY;
    }
    max_abs(&(sigma / num_complex::Complex64::new(scale, 0.0) - identity(n)))
}

/// Evaluates nulling, decodability, beamformer rank and noise whiteness of
/// `scheme` against one bank and cross channel.
pub fn verify_conditions(scheme: &Scheme, bank: &CMatrix, h12: &CMatrix) -> Result<ConditionReport> {
    let residual = max_abs(&scheme.residual_interference(h12)?);
    let a = effective_direct_channel(bank, &scheme.pattern, &scheme.nulling)?;
    let direct = if a.is_square() { rank_margin(&a) } else { 0.0 };
    let beam = rank_margin(&scheme.beamforming);
    let white = whitening_deviation(&scheme.nulling);
    Ok(ConditionReport {
        nulling_residual: residual,
        direct_rank_margin: direct,
        beamformer_rank_margin: beam,
        whitening_deviation: white,
        nulling_ok: residual < NULLING_TOLERANCE * h12.norm(),
        direct_rank_ok: direct > RANK_TOLERANCE,
        beamformer_rank_ok: beam > RANK_TOLERANCE,
        whitening_ok: white < WHITENING_TOLERANCE,
    })
}

/// `max |P̃_a† P̃_b|` for a space-frequency scheme (zero by construction).
pub fn split_orthogonality(scheme: &Scheme) -> Option<f64> {
    match &scheme.factors {
        SchemeFactors::SpaceFrequency { pa_freq, pa_space, pb_freq, pb_space, .. } => {
            let pa = kron(pa_freq, pa_space);
            let pb = kron(pb_freq, pb_space);
            if pa.ncols() == 0 || pb.ncols() == 0 {
                return Some(0.0);
            }
            Some(max_abs(&(pa.adjoint() * pb)))
        }
        SchemeFactors::FullMode { .. } => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::testing::random_matrix;
    use crate::linalg::{c, rank};

    fn cfg(m1: usize, n1: usize, m2: usize, n2: usize) -> SystemConfig {
        SystemConfig::new(m1, n1, m2, n2).unwrap()
    }

    #[test]
    fn time_expand_shapes_and_kronecker_identity() {
        let (q, p) = dft_nulling_pair(2, 1).unwrap();
        let (tq, tp) = time_expand_pair(&q, &p, 3, 2).unwrap();
        assert_eq!(tp.shape(), (6, 3));
        assert_eq!(tq.shape(), (2, 4));
        assert!(max_abs(&(&tq * tq.adjoint() - identity(2) * c(2.0, 0.0))) < 1e-14);
        for seed in 0..100 {
            let h12 = random_matrix(2, 3, seed);
            let b = &tq * kron(&identity(2), &h12) * &tp;
            assert!(max_abs(&b) < 1e-12);
            let direct = kron(&(&q * &p), &h12);
            assert!(max_abs(&(b - direct)) < 1e-12);
        }
        assert!(time_expand_pair(&q, &q, 3, 2).is_err());
    }

    #[test]
    fn kronecker_identity_general() {
        let (q, p) = dft_nulling_pair(4, 1).unwrap();
        let (tq, tp) = time_expand_pair(&q, &p, 5, 4).unwrap();
        let h12 = random_matrix(4, 5, 77);
        let lhs = &tq * kron(&identity(4), &h12) * &tp;
        assert!(max_abs(&(lhs - kron(&(&q * &p), &h12))) < 1e-12);
    }

    #[test]
    fn cyclic_channel_is_decodable() {
        let s = build_full_mode_scheme(&cfg(1, 2, 3, 3)).unwrap();
        let mut good = 0;
        for seed in 0..100 {
            let bank = random_matrix(2, 2, seed);
            let a = effective_direct_channel(&bank, &s.pattern, &s.nulling).unwrap();
            assert_eq!(a.shape(), (2, 2));
            if rank_margin(&a) > 1e-6 {
                good += 1;
            }
        }
        assert!(good >= 99);
    }

    #[test]
    fn constant_pattern_loses_rank() {
        let s = build_full_mode_scheme(&cfg(1, 2, 3, 3)).unwrap();
        let pattern = ModeSwitchPattern::constant(2, 1, 2).unwrap();
        let bank = random_matrix(2, 2, 5);
        let a = effective_direct_channel(&bank, &pattern, &s.nulling).unwrap();
        assert_eq!(rank(&a, 1e-10), 1);
    }

    #[test]
    fn permuted_dft_bank_gives_vandermonde() {
        for (n1, m1) in [(2, 1), (3, 1), (3, 2), (4, 2), (5, 2)] {
            let (q, _) = dft_nulling_pair(n1, m1).unwrap();
            let tq = kron(&q, &identity(n1));
            let (bank, pattern) = permuted_dft_bank(n1, m1).unwrap();
            let a = effective_direct_channel(&bank, &pattern, &tq).unwrap();
            assert!(max_abs(&(&a - permuted_dft_vandermonde(n1, m1))) < 1e-10, "n1={n1} m1={m1}");
            assert!(rank_margin(&a) > RANK_TOLERANCE);
        }
    }

    #[test]
    fn cyclic_channel_factors_through_r() {
        // Regroup columns of Ã by (antenna a, mode j): Ã' = (I ⊗ Ĥ) R.
        let (n1, m1) = (5, 3);
        let s = build_full_mode_scheme(&cfg(m1, n1, 6, 6)).unwrap();
        let bank = random_matrix(n1, n1, 11);
        let a = effective_direct_channel(&bank, &s.pattern, &s.nulling).unwrap();
        let mut regrouped = CMatrix::zeros(a.nrows(), a.ncols());
        for aa in 0..m1 {
            for j in 0..n1 {
                let t = (j + n1 - aa) % n1;
                regrouped.set_column(aa * n1 + j, &a.column(t * m1 + aa));
            }
        }
        let expected = kron(&identity(m1), &bank) * r_matrix(n1, m1);
        assert!(max_abs(&(regrouped - expected)) < 1e-10);
    }

    #[test]
    fn beta_construction_full_rank() {
        let config = cfg(2, 4, 5, 5);
        let s = build_beta_scheme(&config).unwrap();
        for seed in 0..20 {
            let bank = random_matrix(4, 4, seed);
            let h12 = random_matrix(4, 5, 1000 + seed);
            let r = verify_conditions(&s, &bank, &h12).unwrap();
            assert!(r.passed(), "{r:?}");
        }
        // (1_βᵀ ⊗ I) blockdiag(H(1..β)) = [H(1), …, H(β)] is n1 × n1 and full rank.
        let blocks: Vec<CMatrix> = (0..2).map(|b| random_matrix(4, 2, 50 + b)).collect();
        let ones = CMatrix::from_element(1, 2, c(1.0, 0.0));
        let m = kron(&ones, &identity(4)) * block_diag(&blocks);
        assert_eq!(rank(&m, 1e-10), 4);
        assert!(build_beta_scheme(&cfg(2, 5, 6, 6)).is_err());
    }

    #[test]
    fn space_freq_dimensions() {
        let config = cfg(1, 3, 4, 4);
        let h12 = random_matrix(3, 4, 3);
        let s = build_space_freq_scheme(&config, 2, &h12).unwrap();
        assert_eq!(s.nulling.shape(), (2, 6));
        assert_eq!(s.beamforming.shape(), (8, 5));
        assert_eq!(s.streams, (2, 5));
        assert!(s.channel_dependent);
        let bank = random_matrix(3, 2, 4);
        let r = verify_conditions(&s, &bank, &h12).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(split_orthogonality(&s).unwrap() < 1e-12);
        for j in 0..s.beamforming.ncols() {
            assert!((s.beamforming.column(j).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn space_freq_endpoints() {
        let config = cfg(1, 3, 4, 4);
        let h12 = random_matrix(3, 4, 8);
        let full = build_space_freq_scheme(&config, 3, &h12).unwrap();
        let reference = build_full_mode_scheme(&config).unwrap();
        assert!(!full.channel_dependent);
        assert!(max_abs(&(&full.nulling - &reference.nulling)) < 1e-12);
        assert!(max_abs(&(&full.beamforming - &reference.beamforming)) < 1e-12);
        if let SchemeFactors::SpaceFrequency { pb_space, .. } = &full.factors {
            assert_eq!(pb_space.ncols(), 0);
        }

        let zf = build_space_freq_scheme(&config, 1, &h12).unwrap();
        assert_eq!(zf.streams, (1, 2));
        if let SchemeFactors::SpaceFrequency { pa_freq, .. } = &zf.factors {
            assert_eq!(pa_freq.ncols(), 0);
        }
        let bank = random_matrix(3, 1, 9);
        assert!(verify_conditions(&zf, &bank, &h12).unwrap().passed());
    }

    #[test]
    fn space_freq_is_channel_specific() {
        let config = cfg(1, 3, 4, 4);
        let h12 = random_matrix(3, 4, 21);
        let other = random_matrix(3, 4, 22);
        let s = build_space_freq_scheme(&config, 2, &h12).unwrap();
        let bank = random_matrix(3, 2, 23);
        let r = verify_conditions(&s, &bank, &other).unwrap();
        assert!(!r.nulling_ok);
        assert!(r.direct_rank_ok);
    }

    #[test]
    fn space_freq_rejects_degenerate_h12() {
        let config = cfg(1, 4, 5, 5);
        let mut h12 = random_matrix(4, 5, 30);
        let col = h12.column(0).into_owned();
        h12.set_column(1, &col);
        let err = build_space_freq_scheme(&config, 2, &h12).unwrap_err();
        assert!(matches!(err, Error::Degenerate(_)));
    }

    #[test]
    fn extra_tx2_antennas_stay_silent() {
        let config = cfg(1, 2, 5, 3);
        let s = build_full_mode_scheme(&config).unwrap();
        assert_eq!(s.beamforming.shape(), (10, 3));
        for slot in 0..2 {
            for ant in 3..5 {
                assert!(s.beamforming.row(slot * 5 + ant).iter().all(|z| z.norm() == 0.0));
            }
        }
        let h12 = random_matrix(2, 5, 1);
        assert!(max_abs(&s.residual_interference(&h12).unwrap()) < 1e-12);
    }

    #[test]
    fn scheme_json_round_trip() {
        let config = cfg(2, 4, 5, 5);
        let h12 = random_matrix(4, 5, 12);
        let s = build_space_freq_scheme(&config, 3, &h12).unwrap();
        let j = serde_json::to_string(&s).unwrap();
        let back: Scheme = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
        let v: serde_json::Value = serde_json::from_str(&j).unwrap();
        assert_eq!(v["factors"]["kind"], "space-frequency");
        assert_eq!(v["streams"], serde_json::json!([6, 7]));
    }
}
