//! Region formulas for each CSIT / antenna-mode regime, plus the two
//! stream-counting helpers used by the achievable schemes.

use crate::config::{classify, CaseLabel, Governing, Scenario, Side, SystemConfig};
use crate::error::{Error, Result};

use super::polytope::{int, DofPoint, DofRegion, HalfPlane, Rational};

fn single_user_caps(c: &SystemConfig) -> Vec<HalfPlane> {
    vec![
        HalfPlane::d1_at_most(int(c.m1().min(c.n1()))),
        HalfPlane::d2_at_most(int(c.m2().min(c.n2()))),
    ]
}

fn sum_bound(b: usize) -> HalfPlane {
    HalfPlane { a1: int(1), a2: int(1), b: int(b) }
}

/// Z channel with CSIT:
/// `d1 + d2 <= min(max(N1, M2), N1 + N2, M1 + M2)`.
pub fn zic_csit_region(c: &SystemConfig) -> Result<DofRegion> {
    let (m1, n1, m2, n2) = (c.m1(), c.n1(), c.m2(), c.n2());
    let mut hs = single_user_caps(c);
    hs.push(sum_bound(n1.max(m2).min(n1 + n2).min(m1 + m2)));
    DofRegion::new(hs)
}

/// Full channel with CSIT:
/// `d1 + d2 <= min(max(N1, M2), max(M1, N2), N1 + N2, M1 + M2)`.
pub fn fic_csit_region(c: &SystemConfig) -> Result<DofRegion> {
    let (m1, n1, m2, n2) = (c.m1(), c.n1(), c.m2(), c.n2());
    let mut hs = single_user_caps(c);
    hs.push(sum_bound(n1.max(m2).min(m1.max(n2)).min(n1 + n2).min(m1 + m2)));
    DofRegion::new(hs)
}

/// `d1 + min(N1,N2,M2)/min(N2,M2) * d2 <= min(M1+M2, N1)`.
fn receiver1_weighted_bound(c: &SystemConfig) -> HalfPlane {
    let (m1, n1, m2, n2) = (c.m1(), c.n1(), c.m2(), c.n2());
    HalfPlane {
        a1: int(1),
        a2: Rational::new(n1.min(n2).min(m2) as i64, n2.min(m2) as i64),
        b: int((m1 + m2).min(n1)),
    }
}

/// Z channel without CSIT when transmitter 1 has at least `N1` modes (or the
/// shape needs no switching at all).
pub fn zic_no_csit_region(c: &SystemConfig) -> Result<DofRegion> {
    let mut hs = single_user_caps(c);
    hs.push(receiver1_weighted_bound(c));
    DofRegion::new(hs)
}

/// The no-CSIT outer bound of the full channel. It is the exact region once
/// the reconfigurable transmitter has enough modes.
pub fn fic_no_csit_region(c: &SystemConfig) -> Result<DofRegion> {
    let mut hs = single_user_caps(c);
    hs.push(receiver1_weighted_bound(c));
    let mirrored = receiver1_weighted_bound(&c.swapped());
    hs.push(HalfPlane { a1: mirrored.a2, a2: mirrored.a1, b: mirrored.b });
    DofRegion::new(hs)
}

/// Full channel without CSIT under i.i.d. isotropic fading (no switching),
/// valid for `N1 <= N2`:
/// `d1 + (min(N1,M2) - α)/(min(N2,M2) - α) * (d2 - α) <= min(M1, N1)`
/// with `α = min(M1+M2, N1) - min(M1, N1)`.
pub fn iid_region(c: &SystemConfig) -> Result<DofRegion> {
    let (m1, n1, m2, n2) = (c.m1(), c.n1(), c.m2(), c.n2());
    if n1 > n2 {
        return Err(Error::Domain(format!("i.i.d. region needs N1 <= N2, got {c}")));
    }
    let alpha = (m1 + m2).min(n1) - m1.min(n1);
    let num = n1.min(m2) as i64 - alpha as i64;
    let den = n2.min(m2) as i64 - alpha as i64;
    if den <= 0 || num < 0 {
        return Err(Error::Domain(format!("i.i.d. region slope is undefined for {c}")));
    }
    let slope = Rational::new(num, den);
    let mut hs = single_user_caps(c);
    hs.push(HalfPlane::new(int(1), slope, int(m1.min(n1)) + slope * int(alpha))?);
    DofRegion::new(hs)
}

fn require_switching_shape(c: &SystemConfig) -> Result<()> {
    if c.needs_switching_tx1() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{c} does not satisfy M1 < N1 < min(M2, N2)")))
    }
}

/// Region with `K` modes at transmitter 1, `M1 <= K <= N1`:
/// `d1 + K/(m - (N1-K)) * d2 <= M1 + (K(N1-M1) + (m-N1)(K-M1)) / (m - (N1-K))`
/// where `m = min(M2, N2)`. `K = N1` reproduces the enough-modes region and
/// `K = M1` the i.i.d. one.
pub fn limited_modes_region(c: &SystemConfig, k: usize) -> Result<DofRegion> {
    require_switching_shape(c)?;
    let (m1, n1) = (c.m1(), c.n1());
    if k < m1 || k > n1 {
        return Err(Error::Domain(format!("K = {k} outside [{m1}, {n1}] for {c}")));
    }
    let m = c.user2_dims();
    let den = (m + k - n1) as i64;
    let num = (k * (n1 - m1) + (m - n1) * (k - m1)) as i64;
    let mut hs = single_user_caps(c);
    hs.push(HalfPlane::new(
        int(1),
        Rational::new(k as i64, den),
        int(m1) + Rational::new(num, den),
    )?);
    DofRegion::new(hs)
}

/// Exact DoF region of the governing case.
pub fn build_region(config: &SystemConfig, scenario: &Scenario) -> Result<DofRegion> {
    let label = classify(config, scenario)?;
    region_for_case(config, &label)
}

pub fn region_for_case(config: &SystemConfig, label: &CaseLabel) -> Result<DofRegion> {
    let k = label.modes.unwrap_or(0);
    match label.governing {
        Governing::ZicCsit => zic_csit_region(config),
        Governing::FicCsit => fic_csit_region(config),
        Governing::ZicFullModes | Governing::ZicNoSwitchingNeeded => zic_no_csit_region(config),
        Governing::FicFullModesTx1
        | Governing::FicFullModesTx2
        | Governing::FicNoSwitchingNeeded => fic_no_csit_region(config),
        Governing::LimitedModes => match label.side {
            Side::Tx2 => limited_modes_region(&config.swapped(), k)?.swap_users(),
            _ => limited_modes_region(config, k),
        },
        Governing::IidNoSwitching => match label.side {
            Side::Tx2 => iid_region(&config.swapped())?.swap_users(),
            _ => iid_region(config),
        },
    }
}

/// Streams user 2 can carry by zero forcing when user 1 sends `d1` streams
/// in the Z channel with CSIT.
pub fn zic_csit_zf_allocation(config: &SystemConfig, d1: usize) -> Result<usize> {
    let (m1, n1, m2, n2) = (config.m1(), config.n1(), config.m2(), config.n2());
    if d1 > m1.min(n1) {
        return Err(Error::Domain(format!("d1 = {d1} exceeds min(M1, N1) = {}", m1.min(n1))));
    }
    if m2 >= n1 {
        // (M2 - N1) streams in the null space of H12, N1 - d1 more in its row space.
        return Ok(((m2 - n1) + (n1 - d1)).min(n2));
    }
    let cap = m2.min(n2);
    Ok((0..=cap)
        .rev()
        .find(|&d2| n1.saturating_sub(d2).min(m1) >= d1)
        .unwrap_or(0))
}

/// Per-slot corner `(M1, (m(K-M1) + M1(N1-K)) / K)` reached by the
/// space-frequency scheme over `K` slots, `m = min(M2, N2)`.
pub fn limited_modes_corner(config: &SystemConfig, k: usize) -> Result<DofPoint> {
    require_switching_shape(config)?;
    let (m1, n1) = (config.m1(), config.n1());
    if k < m1 || k > n1 {
        return Err(Error::Domain(format!("K = {k} outside [{m1}, {n1}] for {config}")));
    }
    let m = config.user2_dims();
    let d2 = Rational::new((m * (k - m1) + m1 * (n1 - k)) as i64, k as i64);
    Ok(DofPoint::new(int(m1), d2))
}

/// The corner `(M1, min(M2,N2)(N1-M1)/N1)` that zero forcing over a single
/// slot cannot reach.
pub fn unknown_corner(config: &SystemConfig) -> DofPoint {
    let (m1, n1) = (config.m1(), config.n1());
    let m = config.user2_dims();
    DofPoint::new(int(m1), Rational::new((m * n1.saturating_sub(m1)) as i64, n1 as i64))
}
