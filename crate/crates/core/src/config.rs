//! Antenna configurations, channel scenarios and the case analysis that
//! decides which region formula and which construction apply.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest antenna count accepted anywhere in the crate. Time-expanded
/// matrices grow like `n1^2 * m1 * n1`, so this keeps them desk-sized.
pub const MAX_ANTENNAS: usize = 64;

/// Antenna counts of a two-user system `(M1, N1, M2, N2)`: transmitter `i`
/// has `Mi` antennas, receiver `i` has `Ni`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[usize; 4]", into = "[usize; 4]")]
pub struct SystemConfig {
    m1: usize,
    n1: usize,
    m2: usize,
    n2: usize,
}

impl SystemConfig {
    pub fn new(m1: usize, n1: usize, m2: usize, n2: usize) -> Result<Self> {
        for (name, v) in [("M1", m1), ("N1", n1), ("M2", m2), ("N2", n2)] {
            if v == 0 || v > MAX_ANTENNAS {
                return Err(Error::Config(format!(
                    "{name} = {v} is outside 1..={MAX_ANTENNAS}"
                )));
            }
        }
        Ok(Self { m1, n1, m2, n2 })
    }

    pub fn m1(&self) -> usize {
        self.m1
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn m2(&self) -> usize {
        self.m2
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn as_array(&self) -> [usize; 4] {
        [self.m1, self.n1, self.m2, self.n2]
    }

    /// The same system with the two user indices exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            m1: self.m2,
            n1: self.n2,
            m2: self.m1,
            n2: self.n1,
        }
    }

    /// `min(M2, N2)`: the number of user-2 dimensions that matter.
    pub fn user2_dims(&self) -> usize {
        self.m2.min(self.n2)
    }

    /// `M1 < N1 < min(M2, N2)`: the only shape where mode switching at
    /// transmitter 1 enlarges the no-CSIT region.
    pub fn needs_switching_tx1(&self) -> bool {
        self.m1 < self.n1 && self.n1 < self.user2_dims()
    }

    /// Mirror shape `M2 < N2 < min(M1, N1)`, relevant to the full channel only.
    pub fn needs_switching_tx2(&self) -> bool {
        self.swapped().needs_switching_tx1()
    }

    /// Every configuration in `[1..=max]^4`, in lexicographic order.
    pub fn grid(max: usize) -> impl Iterator<Item = SystemConfig> {
        let r = 1..=max;
        r.clone().flat_map(move |m1| {
            let r = 1..=max;
            r.flat_map(move |n1| {
                (1..=max).flat_map(move |m2| {
                    (1..=max).map(move |n2| SystemConfig { m1, n1, m2, n2 })
                })
            })
        })
    }
}

impl TryFrom<[usize; 4]> for SystemConfig {
    type Error = Error;

    fn try_from(v: [usize; 4]) -> Result<Self> {
        Self::new(v[0], v[1], v[2], v[3])
    }
}

impl From<SystemConfig> for [usize; 4] {
    fn from(c: SystemConfig) -> Self {
        c.as_array()
    }
}

impl fmt::Display for SystemConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.m1, self.n1, self.m2, self.n2)
    }
}

impl FromStr for SystemConfig {
    type Err = Error;

    /// Parses `M1,N1,M2,N2`, optionally wrapped in parentheses.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad antenna count {p:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        match parts.as_slice() {
            &[m1, n1, m2, n2] => Self::new(m1, n1, m2, n2),
            _ => Err(Error::Parse(format!(
                "expected four comma-separated antenna counts, got {s:?}"
            ))),
        }
    }
}

/// Z channel (no link from transmitter 1 to receiver 2) or full channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    Zic,
    Fic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Csit {
    Present,
    Absent,
}

/// Channel type, transmitter knowledge and the mode count of the
/// reconfigurable transmitter.
///
/// `modes` is read only when CSIT is absent; `None` means no extra modes
/// (K equal to the antenna count of the reconfigurable side).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Scenario {
    pub channel: Channel,
    pub csit: Csit,
    pub modes: Option<usize>,
}

impl Scenario {
    pub fn with_csit(channel: Channel) -> Self {
        Self {
            channel,
            csit: Csit::Present,
            modes: None,
        }
    }

    pub fn without_csit(channel: Channel, modes: Option<usize>) -> Self {
        Self {
            channel,
            csit: Csit::Absent,
            modes,
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ch = match self.channel {
            Channel::Zic => "zic",
            Channel::Fic => "fic",
        };
        match (self.csit, self.modes) {
            (Csit::Present, _) => write!(f, "{ch} csit"),
            (Csit::Absent, Some(k)) => write!(f, "{ch} no-csit K={k}"),
            (Csit::Absent, None) => write!(f, "{ch} no-csit"),
        }
    }
}

/// Which transmitter carries the reconfigurable antennas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Tx1,
    Tx2,
    None,
}

/// The result that governs the DoF region of a (config, scenario) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Governing {
    /// Z channel with CSIT: zero forcing suffices.
    ZicCsit,
    /// Full channel with CSIT.
    FicCsit,
    /// Z channel, no CSIT, `M1 < N1 < min(M2,N2)` and `K >= N1`.
    ZicFullModes,
    /// Z channel, no CSIT, any other shape.
    ZicNoSwitchingNeeded,
    /// Full channel, no CSIT, `M1 < N1 < min(M2,N2)` and `K >= N1`.
    FicFullModesTx1,
    /// Full channel, no CSIT, `M2 < N2 < min(M1,N1)` and `K >= N2`.
    FicFullModesTx2,
    /// Full channel, no CSIT, neither switching shape.
    FicNoSwitchingNeeded,
    /// Switching shape with `M < K < N` modes at the reconfigurable side.
    LimitedModes,
    /// Switching shape with `K = M`: i.i.d. isotropic baseline.
    IidNoSwitching,
}

impl Governing {
    pub fn as_str(&self) -> &'static str {
        match self {
            Governing::ZicCsit => "zic-csit",
            Governing::FicCsit => "fic-csit",
            Governing::ZicFullModes => "zic-full-modes",
            Governing::ZicNoSwitchingNeeded => "zic-no-switching-needed",
            Governing::FicFullModesTx1 => "fic-full-modes-tx1",
            Governing::FicFullModesTx2 => "fic-full-modes-tx2",
            Governing::FicNoSwitchingNeeded => "fic-no-switching-needed",
            Governing::LimitedModes => "limited-modes",
            Governing::IidNoSwitching => "iid-no-switching",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CaseLabel {
    pub governing: Governing,
    pub side: Side,
    /// Effective mode count at the reconfigurable side (`None` with CSIT).
    pub modes: Option<usize>,
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.side {
            Side::Tx1 => "tx1",
            Side::Tx2 => "tx2",
            Side::None => "none",
        };
        write!(f, "{} (reconfigurable: {side}", self.governing.as_str())?;
        if let Some(k) = self.modes {
            write!(f, ", K={k}")?;
        }
        write!(f, ")")
    }
}

/// Decides the governing case for a configuration and scenario.
///
/// Transmitter 2 is the reconfigurable side only for the full channel in the
/// mirrored shape `M2 < N2 < min(M1, N1)`; everywhere else `modes` refers to
/// transmitter 1.
pub fn classify(config: &SystemConfig, scenario: &Scenario) -> Result<CaseLabel> {
    if scenario.csit == Csit::Present {
        let governing = match scenario.channel {
            Channel::Zic => Governing::ZicCsit,
            Channel::Fic => Governing::FicCsit,
        };
        return Ok(CaseLabel {
            governing,
            side: Side::None,
            modes: None,
        });
    }

    let tx2 = scenario.channel == Channel::Fic && config.needs_switching_tx2();
    let (m, n, side) = if tx2 {
        (config.m2(), config.n2(), Side::Tx2)
    } else {
        (config.m1(), config.n1(), Side::Tx1)
    };
    let k = scenario.modes.unwrap_or(m);
    if k < m {
        return Err(Error::Config(format!(
            "K = {k} modes is fewer than the {m} antennas of the reconfigurable transmitter"
        )));
    }

    let shaped = tx2 || config.needs_switching_tx1();
    if !shaped {
        let governing = match scenario.channel {
            Channel::Zic => Governing::ZicNoSwitchingNeeded,
            Channel::Fic => Governing::FicNoSwitchingNeeded,
        };
        return Ok(CaseLabel {
            governing,
            side: Side::None,
            modes: Some(k),
        });
    }

    let governing = if k >= n {
        match (scenario.channel, side) {
            (Channel::Zic, _) => Governing::ZicFullModes,
            (Channel::Fic, Side::Tx2) => Governing::FicFullModesTx2,
            (Channel::Fic, _) => Governing::FicFullModesTx1,
        }
    } else if k == m {
        Governing::IidNoSwitching
    } else {
        Governing::LimitedModes
    };
    Ok(CaseLabel {
        governing,
        side,
        modes: Some(k),
    })
}

/// `(M1, N1, M2, N2) -> (M1, N1, min(M2,N2), min(M2,N2))`. Without CSIT the Z
/// channel region only depends on `min(M2, N2)`.
pub fn reduce_min_antennas(config: &SystemConfig) -> SystemConfig {
    let m = config.user2_dims();
    SystemConfig {
        m1: config.m1,
        n1: config.n1,
        m2: m,
        n2: m,
    }
}
