//! Block-fading channel draws: i.i.d. `CN(0, 1)` entries, one mode bank per
//! coherence block.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::config::{Channel, SystemConfig};
use crate::error::{Error, Result};
use crate::linalg::{matrix_serde, CMatrix};

/// One coherence block. `bank` holds the receiver-1 channel of every mode of
/// transmitter 1 (one column per mode, one transmit antenna switches among
/// them); `h21` exists only for the full channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelBlock {
    #[serde(with = "matrix_serde")]
    pub bank: CMatrix,
    #[serde(with = "matrix_serde")]
    pub h12: CMatrix,
    #[serde(with = "matrix_serde")]
    pub h22: CMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "optional_matrix")]
    pub h21: Option<CMatrix>,
    /// Slots `L` over which the block stays constant.
    pub coherence: usize,
}

mod optional_matrix {
    use crate::linalg::{CMatrix, MatrixJson};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &Option<CMatrix>, s: S) -> Result<S::Ok, S::Error> {
        m.as_ref().map(MatrixJson::from).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<CMatrix>, D::Error> {
        Option::<MatrixJson>::deserialize(d)?
            .map(CMatrix::try_from)
            .transpose()
            .map_err(serde::de::Error::custom)
    }
}

/// `rows × cols` matrix of unit-variance circularly-symmetric Gaussians.
pub fn cscg_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re * s, im * s)
    })
}

/// Draws a block from `rng`. The bank has `k` modes; coherence is
/// `min(k, N1)`, the expansion of the scheme that uses it.
pub fn draw_block_with<R: Rng + ?Sized>(
    config: &SystemConfig,
    channel: Channel,
    k: usize,
    rng: &mut R,
) -> Result<ChannelBlock> {
    if k < config.m1() {
        return Err(Error::Domain(format!("K = {k} is fewer than M1 = {}", config.m1())));
    }
    let (m1, n1, m2, n2) = (config.m1(), config.n1(), config.m2(), config.n2());
    let bank = cscg_matrix(n1, k, rng);
    let h12 = cscg_matrix(n1, m2, rng);
    let h22 = cscg_matrix(n2, m2, rng);
    let h21 = match channel {
        Channel::Fic => Some(cscg_matrix(n2, m1, rng)),
        Channel::Zic => None,
    };
    Ok(ChannelBlock { bank, h12, h22, h21, coherence: k.min(n1) })
}

/// Deterministic block for `seed`.
pub fn draw_block(config: &SystemConfig, channel: Channel, k: usize, seed: u64) -> Result<ChannelBlock> {
    draw_block_with(config, channel, k, &mut ChaCha8Rng::seed_from_u64(seed))
}
