//! Closed-form achievable symmetric rate, symmetric-capacity outer bound and
//! their gap.

use serde::Serialize;

use crate::channel::ChannelGains;
use crate::error::{invalid, Result};

/// A `min{...}` of labelled terms together with the one that binds.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateBreakdown {
    /// `max(0, min(terms))`.
    pub value: f64,
    pub terms: Vec<(&'static str, f64)>,
    pub binding: &'static str,
}

impl RateBreakdown {
    fn from_terms(terms: Vec<(&'static str, f64)>) -> Self {
        let (binding, min) = terms
            .iter()
            .copied()
            .fold(("", f64::INFINITY), |acc, t| if t.1 < acc.1 { t } else { acc });
        Self { value: min.max(0.0), terms, binding }
    }

    pub fn term(&self, label: &str) -> Option<f64> {
        self.terms.iter().find(|t| t.0 == label).map(|t| t.1)
    }
}

fn plus(x: f64) -> f64 {
    x.max(0.0)
}

fn symmetric(gains: &ChannelGains, cb: f64) -> Result<(f64, f64, f64)> {
    if !(cb.is_finite() && cb >= 0.0) {
        return Err(invalid(format!("conference capacity must be finite and >= 0, got {cb}")));
    }
    let (snr, inr) = gains
        .symmetric_magnitudes()
        .ok_or_else(|| invalid("channel magnitudes are not symmetric"))?;
    if snr < 1.0 || inr < 1.0 {
        return Err(invalid(format!("need snr, inr >= 1, got snr = {snr}, inr = {inr}")));
    }
    Ok((snr, inr, gains.det_sq()))
}

/// Achievable symmetric rate of quantize-binning with the prescribed power
/// split, in bits per channel use (clamped at zero).
pub fn achievable_sym_rate(gains: &ChannelGains, cb: f64) -> Result<RateBreakdown> {
    let (s, i, det) = symmetric(gains, cb)?;
    let log2 = f64::log2;
    let mimo = log2(1.0 + 2.0 * s + 2.0 * i + det);
    let terms = if s <= i {
        let spare = plus(cb - 1.0);
        vec![
            ("single_user_conference", log2(1.0 + s) + spare),
            ("mac", log2(1.0 + s + i) - 1.0),
            ("half_mac_conference", 0.5 * (log2(1.0 + s + i) + spare)),
            ("full_cooperation", 0.5 * (mimo - 1.0)),
        ]
    } else {
        let spare = plus(cb - 3f64.log2());
        vec![
            ("private_common_conference", log2(1.0 + s / i + i) + spare - 1.0),
            ("single_user", log2(1.0 + s) - 2.0),
            (
                "half_sum_conference",
                0.5 * (log2(1.0 + s + i) + log2(2.0 + s / i) + spare - 2.0),
            ),
            ("full_cooperation", 0.5 * (mimo - 3.0)),
        ]
    };
    Ok(RateBreakdown::from_terms(terms))
}

/// Upper bound on the symmetric capacity.
pub fn outer_bound_sym(gains: &ChannelGains, cb: f64) -> Result<RateBreakdown> {
    let (s, i, det) = symmetric(gains, cb)?;
    let log2 = f64::log2;
    Ok(RateBreakdown::from_terms(vec![
        ("cutset_conference", log2(1.0 + s) + cb.min(log2(1.0 + i / (1.0 + s)))),
        ("z_channel_conference", log2(1.0 + i + s / (1.0 + i)) + cb),
        (
            "half_sum_conference",
            0.5 * log2(1.0 + s + i) + 0.5 * log2(1.0 + s / (1.0 + i)) + 0.5 * cb,
        ),
        ("full_cooperation", 0.5 * log2(1.0 + 2.0 * s + 2.0 * i + det)),
    ]))
}

/// Outer bound minus achievable rate; at most 3 bits everywhere.
pub fn gap(gains: &ChannelGains, cb: f64) -> Result<f64> {
    Ok(outer_bound_sym(gains, cb)?.value - achievable_sym_rate(gains, cb)?.value)
}
