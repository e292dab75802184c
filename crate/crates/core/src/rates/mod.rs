//! Achievable symmetric rates, outer bounds and the constant gap.
//!
//! The transmission scheme is superposition coding with a common/private
//! power split; the receivers cooperate by quantize-binning, i.e. each one
//! quantizes its received signal at a fixed distortion and forwards a bin
//! index over the conference link.

mod bounds;
mod lp;
mod theorem1;

pub use bounds::{achievable_sym_rate, gap, outer_bound_sym, RateBreakdown};
pub use lp::max_symmetric_rate_t1;
pub use theorem1::{theorem1_region, xi, Constraint, ConstraintSet, Receiver};

use serde::{Deserialize, Serialize};

use crate::channel::ChannelGains;
use crate::error::{invalid, Result};

/// Common and private transmit powers of one user.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerSplit {
    pub pc: f64,
    pub pp: f64,
}

impl PowerSplit {
    pub fn new(pc: f64, pp: f64) -> Result<Self> {
        let unit = 0.0..=1.0;
        if !(unit.contains(&pc) && unit.contains(&pp)) || pc + pp > 1.0 + 1e-12 {
            return Err(invalid(format!("power split ({pc}, {pp}) violates the unit power constraint")));
        }
        Ok(Self { pc, pp })
    }
}

/// Quantization distortions `Δ1`, `Δ2` at the two receivers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantizerConfig {
    pub delta1: f64,
    pub delta2: f64,
}

/// Private power that lands at the unintended receiver at the noise level:
/// `pp = min(1, 1/inr)` when `inr < snr`, otherwise everything is common.
pub fn etw_power_split(snr: f64, inr: f64) -> PowerSplit {
    let pp = if inr >= snr { 0.0 } else { (1.0 / inr).min(1.0) };
    PowerSplit { pc: 1.0 - pp, pp }
}

/// Distortion at the larger of the noise power and the private signal's
/// received power at its own receiver: `Δ = max(1, snr · pp)`.
pub fn quantization_distortion(snr: f64, split: &PowerSplit) -> QuantizerConfig {
    let delta = (snr * split.pp).max(1.0);
    QuantizerConfig { delta1: delta, delta2: delta }
}

/// The prescribed configuration for a symmetric channel: the power split
/// above for both users and the matching distortion at both receivers.
pub fn symmetric_config(gains: &ChannelGains) -> Result<(PowerSplit, QuantizerConfig)> {
    let (snr, inr) = gains
        .symmetric_magnitudes()
        .ok_or_else(|| invalid("channel magnitudes are not symmetric"))?;
    let split = etw_power_split(snr, inr);
    Ok((split, quantization_distortion(snr, &split)))
}
