//! Channel parameterization.
//!
//! The transmitter-receiver links are the normalized Gaussian interference
//! channel `y1 = h11 x1 + h12 x2 + z1`, `y2 = h21 x1 + h22 x2 + z2` with unit
//! power constraints and `CN(0, 1)` noise. Everything downstream reads SNR,
//! INR and the determinant term from [`ChannelGains`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// A complex channel coefficient `h_ij`.
pub type ComplexGain = Complex64;

/// Converts a power ratio in dB to linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelGains {
    pub h11: ComplexGain,
    pub h12: ComplexGain,
    pub h21: ComplexGain,
    pub h22: ComplexGain,
}

impl ChannelGains {
    /// Builds a gain set, rejecting non-finite or zero coefficients.
    pub fn new(h11: ComplexGain, h12: ComplexGain, h21: ComplexGain, h22: ComplexGain) -> Result<Self> {
        for (name, h) in [("h11", h11), ("h12", h12), ("h21", h21), ("h22", h22)] {
            if !(h.re.is_finite() && h.im.is_finite()) {
                return Err(invalid(format!("{name} is not finite")));
            }
            if h.norm_sqr() <= 0.0 {
                return Err(invalid(format!("{name} has zero magnitude")));
            }
        }
        Ok(Self { h11, h12, h21, h22 })
    }

    /// Gains with `|h11|² = |h22|² = snr`, `|h12|² = |h21|² = inr` and the
    /// given phases (radians) in the order `h11, h12, h21, h22`.
    pub fn from_symmetric(params: &SymmetricParams, phases: [f64; 4]) -> Result<Self> {
        if let Some(p) = phases.iter().find(|p| !p.is_finite()) {
            return Err(invalid(format!("phase {p} is not finite")));
        }
        let direct = params.snr.sqrt();
        let cross = params.inr.sqrt();
        Self::new(
            Complex64::from_polar(direct, phases[0]),
            Complex64::from_polar(cross, phases[1]),
            Complex64::from_polar(cross, phases[2]),
            Complex64::from_polar(direct, phases[3]),
        )
    }

    pub fn snr1(&self) -> f64 {
        self.h11.norm_sqr()
    }

    pub fn snr2(&self) -> f64 {
        self.h22.norm_sqr()
    }

    pub fn inr1(&self) -> f64 {
        self.h12.norm_sqr()
    }

    pub fn inr2(&self) -> f64 {
        self.h21.norm_sqr()
    }

    /// `|h11 h22 − h12 h21|²`, the squared modulus of the channel matrix
    /// determinant.
    pub fn det_sq(&self) -> f64 {
        (self.h11 * self.h22 - self.h12 * self.h21).norm_sqr()
    }

    /// Returns `(snr, inr)` when both direct and both cross magnitudes agree
    /// to a relative tolerance of 1e-9.
    pub fn symmetric_magnitudes(&self) -> Option<(f64, f64)> {
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(b.abs());
        (close(self.snr1(), self.snr2()) && close(self.inr1(), self.inr2()))
            .then(|| (0.5 * (self.snr1() + self.snr2()), 0.5 * (self.inr1() + self.inr2())))
    }
}

/// SNR, INR (linear) and conference capacity `cb` (bits per channel use) of
/// the symmetric set-up.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetricParams {
    pub snr: f64,
    pub inr: f64,
    pub cb: f64,
}

impl SymmetricParams {
    pub fn new(snr: f64, inr: f64, cb: f64) -> Result<Self> {
        if !(snr.is_finite() && snr > 1.0) {
            return Err(invalid(format!("snr must be finite and > 1, got {snr}")));
        }
        if !(inr.is_finite() && inr > 1.0) {
            return Err(invalid(format!("inr must be finite and > 1, got {inr}")));
        }
        if !(cb.is_finite() && cb >= 0.0) {
            return Err(invalid(format!("cb must be finite and >= 0, got {cb}")));
        }
        Ok(Self { snr, inr, cb })
    }

    pub fn from_db(snr_db: f64, inr_db: f64, cb: f64) -> Result<Self> {
        Self::new(db_to_linear(snr_db), db_to_linear(inr_db), cb)
    }
}

/// See [`ChannelGains::from_symmetric`].
pub fn gains_from_symmetric(params: &SymmetricParams, phases: [f64; 4]) -> Result<ChannelGains> {
    ChannelGains::from_symmetric(params, phases)
}
