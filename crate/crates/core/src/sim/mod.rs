//! Block-fading Monte Carlo simulation of the mode-switching schemes.

pub mod channel;
pub mod rates;
pub mod slope;
pub mod sweep;

pub use channel::{cscg_matrix, draw_block, draw_block_with, ChannelBlock};
pub use rates::block_rates;
pub use slope::{estimate_slopes, SlopeEstimate};
pub use sweep::{db_to_linear, format_g12, snr_sweep, RateCurve};
