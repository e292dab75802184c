//! Generalized degrees of freedom per user.
//!
//! With `α = log INR / log SNR` and `κ = C^B / log SNR` held fixed,
//!
//! ```text
//! d = min{1, max(α, 1−α) + κ, 1 − (α−κ)/2}    0 ≤ α < 1
//! d = min{α, 1 + κ, (α+κ)/2}                  α ≥ 1
//! ```
//!
//! The first term is the full-cooperation ceiling, the second grows one for
//! one with `κ` and the third grows at half that rate. At `α = 1` the
//! limit depends on the channel phases, so such points are flagged.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::channel::{db_to_linear, ChannelGains, ComplexGain};
use crate::error::{invalid, Result};
use crate::rates::{achievable_sym_rate, outer_bound_sym};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GdofBranch {
    /// `1` (α < 1) or `α` (α ≥ 1).
    FullCooperation,
    /// `max(α, 1−α) + κ` or `1 + κ`.
    UnitSlope,
    /// `1 − (α−κ)/2` or `(α+κ)/2`.
    HalfSlope,
}

impl GdofBranch {
    pub fn as_str(self) -> &'static str {
        match self {
            GdofBranch::FullCooperation => "full_cooperation",
            GdofBranch::UnitSlope => "unit_slope",
            GdofBranch::HalfSlope => "half_slope",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GdofPoint {
    pub alpha: f64,
    pub kappa: f64,
    pub d: f64,
    pub binding: GdofBranch,
    /// Set at `α = 1`, where the limit depends on the channel phases.
    pub phase_sensitive: bool,
}

fn branches(alpha: f64, kappa: f64) -> [(GdofBranch, f64); 3] {
    if alpha < 1.0 {
        [
            (GdofBranch::FullCooperation, 1.0),
            (GdofBranch::UnitSlope, alpha.max(1.0 - alpha) + kappa),
            (GdofBranch::HalfSlope, 1.0 - (alpha - kappa) / 2.0),
        ]
    } else {
        [
            (GdofBranch::FullCooperation, alpha),
            (GdofBranch::UnitSlope, 1.0 + kappa),
            (GdofBranch::HalfSlope, (alpha + kappa) / 2.0),
        ]
    }
}

fn check_exponents(alpha: f64, kappa: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(invalid(format!("alpha must be finite and >= 0, got {alpha}")));
    }
    if !(kappa.is_finite() && kappa >= 0.0) {
        return Err(invalid(format!("kappa must be finite and >= 0, got {kappa}")));
    }
    Ok(())
}

pub fn gdof_formula(alpha: f64, kappa: f64) -> Result<GdofPoint> {
    check_exponents(alpha, kappa)?;
    let (binding, d) = branches(alpha, kappa)
        .into_iter()
        .fold((GdofBranch::FullCooperation, f64::INFINITY), |acc, b| if b.1 < acc.1 { b } else { acc });
    Ok(GdofPoint {
        alpha,
        kappa,
        d,
        binding,
        phase_sensitive: alpha == 1.0,
    })
}

/// `d(α, ∞)`, the full receiver cooperation value.
pub fn full_cooperation_gdof(alpha: f64) -> f64 {
    alpha.max(1.0)
}

/// Smallest `κ` at which `d(α, κ)` reaches `d(α, ∞)`, from the points where
/// the two growing branches meet the ceiling.
pub fn saturation_kappa(alpha: f64) -> Result<f64> {
    check_exponents(alpha, 0.0)?;
    let ceiling = full_cooperation_gdof(alpha);
    let (unit, half) = if alpha < 1.0 {
        // max(α, 1−α) + κ = 1 and 1 − (α−κ)/2 = 1
        (ceiling - alpha.max(1.0 - alpha), alpha)
    } else {
        // 1 + κ = α and (α+κ)/2 = α
        (ceiling - 1.0, alpha)
    };
    Ok(unit.max(half).max(0.0))
}

#[derive(Clone, Debug, Serialize)]
pub struct GdofCurve {
    pub alpha: f64,
    pub kappa_star: f64,
    pub d_full: f64,
    pub points: Vec<GdofPoint>,
}

pub fn gdof_curve(alpha: f64, kappa_grid: &[f64]) -> Result<GdofCurve> {
    if kappa_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(invalid("kappa grid must be sorted ascending"));
    }
    Ok(GdofCurve {
        alpha,
        kappa_star: saturation_kappa(alpha)?,
        d_full: full_cooperation_gdof(alpha),
        points: kappa_grid.iter().map(|&k| gdof_formula(alpha, k)).collect::<Result<_>>()?,
    })
}

/// Normalized bounds at one SNR: medians over the phase draws of
/// `R_sym / log2 SNR` and `C̄_sym / log2 SNR`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NumericPoint {
    pub snr_db: f64,
    pub r_lo: f64,
    pub r_hi: f64,
}

pub fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty());
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Uniform phase tuples in `[0, 2π)`.
pub fn draw_phases<R: Rng>(rng: &mut R) -> [f64; 4] {
    std::array::from_fn(|_| rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Finite-SNR estimate of `d(α, κ)`: at each SNR, `INR = SNR^α` and
/// `C^B = κ log2 SNR`. The phase draws at the `i`-th SNR come from ChaCha8
/// seeded with `seed` on stream `i`.
pub fn gdof_numeric(
    alpha: f64,
    kappa: f64,
    snr_db_list: &[f64],
    phase_samples: usize,
    seed: u64,
) -> Result<Vec<NumericPoint>> {
    check_exponents(alpha, kappa)?;
    if phase_samples == 0 {
        return Err(invalid("phase_samples must be positive"));
    }
    snr_db_list
        .iter()
        .enumerate()
        .map(|(i, &snr_db)| {
            if !(snr_db.is_finite() && snr_db > 0.0) {
                return Err(invalid(format!("snr_db must be > 0, got {snr_db}")));
            }
            let snr = db_to_linear(snr_db);
            let log_snr = snr.log2();
            let inr = snr.powf(alpha);
            let cb = kappa * log_snr;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let (mut lo, mut hi) = (Vec::with_capacity(phase_samples), Vec::with_capacity(phase_samples));
            for _ in 0..phase_samples {
                let p = draw_phases(&mut rng);
                let (d, c) = (snr.sqrt(), inr.sqrt());
                let gains = ChannelGains::new(
                    ComplexGain::from_polar(d, p[0]),
                    ComplexGain::from_polar(c, p[1]),
                    ComplexGain::from_polar(c, p[2]),
                    ComplexGain::from_polar(d, p[3]),
                )?;
                lo.push(achievable_sym_rate(&gains, cb)?.value / log_snr);
                hi.push(outer_bound_sym(&gains, cb)?.value / log_snr);
            }
            Ok(NumericPoint {
                snr_db,
                r_lo: median(&mut lo),
                r_hi: median(&mut hi),
            })
        })
        .collect()
}
