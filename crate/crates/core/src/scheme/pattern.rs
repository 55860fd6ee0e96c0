//! Antenna mode selection over the slots of one coherence block.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Which modes each transmit antenna uses in each slot. Mode indices are
/// 1-based, `1..=modes`; every slot lists one distinct mode per antenna.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PatternJson", into = "PatternJson")]
pub struct ModeSwitchPattern {
    modes: usize,
    slots: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct PatternJson {
    modes: usize,
    slots: Vec<Vec<usize>>,
}

impl TryFrom<PatternJson> for ModeSwitchPattern {
    type Error = Error;

    fn try_from(j: PatternJson) -> Result<Self> {
        Self::new(j.modes, j.slots)
    }
}

impl From<ModeSwitchPattern> for PatternJson {
    fn from(p: ModeSwitchPattern) -> Self {
        Self { modes: p.modes, slots: p.slots }
    }
}

impl ModeSwitchPattern {
    pub fn new(modes: usize, slots: Vec<Vec<usize>>) -> Result<Self> {
        let width = slots.first().map_or(0, Vec::len);
        if slots.is_empty() || width == 0 {
            return Err(Error::Domain("pattern needs at least one slot and one antenna".into()));
        }
        for (t, s) in slots.iter().enumerate() {
            if s.len() != width {
                return Err(Error::Domain(format!("slot {} uses {} modes, expected {width}", t + 1, s.len())));
            }
            if let Some(&bad) = s.iter().find(|&&i| i == 0 || i > modes) {
                return Err(Error::Domain(format!("mode {bad} in slot {} outside 1..={modes}", t + 1)));
            }
            let mut sorted = s.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != s.len() {
                return Err(Error::Domain(format!("slot {} repeats a mode", t + 1)));
            }
        }
        Ok(Self { modes, slots })
    }

    /// `K` available modes.
    pub fn modes(&self) -> usize {
        self.modes
    }

    /// Transmit antennas (modes active per slot).
    pub fn antennas(&self) -> usize {
        self.slots[0].len()
    }

    /// Expansion length `T`.
    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn slots(&self) -> &[Vec<usize>] {
        &self.slots
    }

    /// Distinct modes touched by the pattern.
    pub fn distinct_modes(&self) -> usize {
        let mut all: Vec<usize> = self.slots.iter().flatten().copied().collect();
        all.sort_unstable();
        all.dedup();
        all.len()
    }

    /// The per-slot direct channel: bank columns picked by slot `t` (0-based).
    pub fn select(&self, bank: &CMatrix, t: usize) -> Result<CMatrix> {
        let slot = &self.slots[t];
        if let Some(&bad) = slot.iter().find(|&&i| i > bank.ncols()) {
            return Err(Error::Domain(format!(
                "mode {bad} exceeds the {} columns of the mode bank",
                bank.ncols()
            )));
        }
        Ok(CMatrix::from_fn(bank.nrows(), slot.len(), |r, a| bank[(r, slot[a] - 1)]))
    }

    /// Same modes `1..=m` in all `t` slots: no switching at all.
    pub fn constant(k: usize, m: usize, t_slots: usize) -> Result<Self> {
        Self::new(k, vec![(1..=m).collect(); t_slots])
    }

    /// `β = n1/m1` groups of `m1` fresh modes, repeated `m1` times so that the
    /// block spans `n1` slots and `n1` modes.
    pub fn beta_blocks(n1: usize, m1: usize) -> Result<Self> {
        if m1 == 0 || !n1.is_multiple_of(m1) {
            return Err(Error::Domain(format!("n1 = {n1} is not a multiple of m1 = {m1}")));
        }
        let beta = n1 / m1;
        let slots = (0..n1)
            .map(|t| {
                let b = t % beta;
                (b * m1 + 1..=b * m1 + m1).collect()
            })
            .collect();
        Self::new(n1, slots)
    }
}

/// Slot `t` (1-based) selects modes `t, t+1, …, t+m1-1`, wrapping modulo `k`.
pub fn cyclic_pattern(k: usize, m1: usize, t_slots: usize) -> Result<ModeSwitchPattern> {
    if m1 == 0 || m1 > k {
        return Err(Error::Domain(format!("m1 = {m1} antennas cannot cycle over {k} modes")));
    }
    if t_slots == 0 {
        return Err(Error::Domain("pattern needs at least one slot".into()));
    }
    let slots = (0..t_slots)
        .map(|t| (0..m1).map(|a| (t + a) % k + 1).collect())
        .collect();
    ModeSwitchPattern::new(k, slots)
}
