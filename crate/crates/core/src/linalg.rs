//! Small complex linear-algebra helpers on top of nalgebra.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `exp(-j 2π k / n)`, reduced mod `n` so large exponents stay accurate.
pub fn root_of_unity(n: usize, k: i64) -> Complex64 {
    let r = k.rem_euclid(n as i64) as f64;
    Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * r / n as f64)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// `n × m` Vandermonde matrix whose columns are `[1, a, a^2, …, a^{n-1}]ᵀ`.
pub fn vandermonde(n: usize, nodes: &[Complex64]) -> CMatrix {
    CMatrix::from_fn(n, nodes.len(), |i, j| nodes[j].powu(i as u32))
}

pub fn block_diag(blocks: &[CMatrix]) -> CMatrix {
    let rows = blocks.iter().map(|b| b.nrows()).sum();
    let cols = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMatrix::zeros(rows, cols);
    let (mut r, mut q) = (0, 0);
    for b in blocks {
        out.view_mut((r, q), (b.nrows(), b.ncols())).copy_from(b);
        r += b.nrows();
        q += b.ncols();
    }
    out
}

pub fn hcat(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.nrows(), b.nrows());
    let mut out = CMatrix::zeros(a.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), (a.nrows(), a.ncols())).copy_from(a);
    out.view_mut((0, a.ncols()), (b.nrows(), b.ncols())).copy_from(b);
    out
}

/// `[I_k; 0]` of size `n × k`.
pub fn selector(n: usize, k: usize) -> CMatrix {
    CMatrix::from_fn(n, k, |i, j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) })
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Singular values in descending order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// `σ_min / σ_max` over the `min(rows, cols)` singular values; 0 for an
/// all-zero or empty matrix.
pub fn rank_margin(m: &CMatrix) -> f64 {
    let sv = singular_values(m);
    match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) if hi > 0.0 => lo / hi,
        _ => 0.0,
    }
}

/// Numerical rank with relative tolerance `tol`.
pub fn rank(m: &CMatrix, tol: f64) -> usize {
    let sv = singular_values(m);
    let hi = sv.first().copied().unwrap_or(0.0);
    sv.iter().filter(|&&s| s > tol * hi).count()
}

/// Rows with orthonormal conjugates spanning the left null space of `a`
/// (`q · a = 0`). Fails when `a` does not have full column rank.
pub fn left_null_space(a: &CMatrix, tol: f64) -> Result<CMatrix> {
    let n = a.nrows();
    let r = a.ncols();
    if r > n {
        return Err(Error::Degenerate(format!("{n}x{r} matrix has no left null space")));
    }
    if r == 0 {
        return Ok(identity(n));
    }
    let margin = rank_margin(a);
    if margin <= tol {
        return Err(Error::Degenerate(format!(
            "matrix is rank deficient (σ_min/σ_max = {margin:.3e})"
        )));
    }
    // Zero-padding to square gives a full unitary U; the padded columns
    // contribute exactly zero singular values.
    let mut sq = CMatrix::zeros(n, n);
    sq.view_mut((0, 0), (n, r)).copy_from(a);
    let svd = sq.svd(true, false);
    let u = svd.u.ok_or_else(|| Error::Internal("SVD did not return U".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let null_cols = &order[r..];
    Ok(CMatrix::from_fn(n - r, n, |i, j| u[(j, null_cols[i])].conj()))
}

/// `log2 det(I + scale · X X†)`, computed through the smaller Gram matrix.
pub fn log2_det_identity_plus(x: &CMatrix, scale: f64) -> Result<f64> {
    if x.nrows() == 0 || x.ncols() == 0 {
        return Ok(0.0);
    }
    let gram = if x.ncols() <= x.nrows() {
        x.adjoint() * x
    } else {
        x * x.adjoint()
    };
    let n = gram.nrows();
    let m = identity(n) + gram * c(scale, 0.0);
    let chol = m
        .cholesky()
        .ok_or_else(|| Error::Internal("I + s·XX† is not positive definite".into()))?;
    let l = chol.l();
    let ln_det: f64 = (0..n).map(|i| 2.0 * l[(i, i)].re.ln()).sum();
    Ok(ln_det / std::f64::consts::LN_2)
}

/// Row-major JSON form: `{"rows":r,"cols":c,"data":[[re,im],…]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl From<&CMatrix> for MatrixJson {
    fn from(m: &CMatrix) -> Self {
        let mut data = Vec::with_capacity(m.len());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                data.push([z.re, z.im]);
            }
        }
        Self { rows: m.nrows(), cols: m.ncols(), data }
    }
}

impl TryFrom<MatrixJson> for CMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        if j.data.len() != j.rows * j.cols {
            return Err(Error::Parse(format!(
                "matrix data has {} entries, expected {}x{}",
                j.data.len(),
                j.rows,
                j.cols
            )));
        }
        Ok(CMatrix::from_fn(j.rows, j.cols, |i, k| {
            let [re, im] = j.data[i * j.cols + k];
            c(re, im)
        }))
    }
}

pub mod matrix_serde {
    //! `#[serde(with = …)]` adapter for [`CMatrix`](super::CMatrix).
    use super::{CMatrix, MatrixJson};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &CMatrix, s: S) -> Result<S::Ok, S::Error> {
        MatrixJson::from(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CMatrix, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        CMatrix::try_from(j).map_err(serde::de::Error::custom)
    }
}
