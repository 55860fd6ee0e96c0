//! Degrees-of-freedom regions and blind interference-alignment schemes for
//! two-user MIMO Z (ZIC) and full (FIC) interference channels.
//!
//! The crate is organised bottom-up:
//!
//! - [`config`]: antenna configurations, scenarios and case classification.
//! - [`regions`]: exact rational DoF polytopes for every CSIT / mode regime.
//! - [`scheme`]: time-expanded beamforming and nulling constructions driven by
//!   transmit antenna mode switching, plus their algebraic checks.
//! - [`sim`]: block-fading Monte Carlo rate simulation and slope estimation.
//! - [`verify`]: bundled audit suites tying the above together.

pub mod config;
pub mod error;
pub mod linalg;
pub mod regions;
pub mod scheme;
pub mod sim;
pub mod verify;

pub use config::{classify, reduce_min_antennas, CaseLabel, Channel, Csit, Governing, Scenario, Side, SystemConfig};
pub use error::{Error, Result};
