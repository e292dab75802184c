//! Constraint system of the quantize-binning coding theorem.
//!
//! Receiver 1 decodes `(m1c, m2c, m1p)` jointly with a quantization codeword
//! of receiver 2 from the forwarded bin. Each rate constraint appears twice:
//! once against `y1` alone plus the unused conference rate
//! `(C21 − ξ1)⁺`, and once against `(y1, ŷ2)`. Receiver 2 is the mirror
//! image. All sixteen constraints are imposed jointly.

use serde::Serialize;

use super::{PowerSplit, QuantizerConfig};
use crate::channel::ChannelGains;
use crate::covariance::{build_covariance, gaussian_mi, CovarianceModel, X1C, X1P, X2C, X2P, Y1, Y2, YH1, YH2};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Receiver {
    One,
    Two,
}

/// `coeffs · (R1c, R2c, R1p, R2p) ≤ bound`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Constraint {
    pub coeffs: [u8; 4],
    /// Right-hand side, clamped at zero.
    pub bound: f64,
    /// Mutual-information part of the right-hand side (before the
    /// conference term).
    pub mi: f64,
    pub label: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ConstraintSet {
    pub constraints: Vec<Constraint>,
}

impl ConstraintSet {
    /// Adds `coeffs · R ≤ (mi + bonus)⁺`.
    pub fn push(&mut self, coeffs: [u8; 4], mi: f64, bonus: f64, label: impl Into<String>) {
        self.constraints.push(Constraint {
            coeffs,
            bound: (mi + bonus).max(0.0),
            mi,
            label: label.into(),
        });
    }

    pub fn get(&self, label: &str) -> Option<&Constraint> {
        self.constraints.iter().find(|c| c.label == label)
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }
}

/// Signal roles seen from one receiver.
struct View {
    own_c: &'static str,
    own_p: &'static str,
    other_c: &'static str,
    y: &'static str,
    y_other: &'static str,
    yh_other: &'static str,
    /// Index of (own common, other common, own private) in the rate vector.
    slots: [usize; 3],
}

impl View {
    fn of(receiver: Receiver) -> Self {
        match receiver {
            Receiver::One => View {
                own_c: X1C,
                own_p: X1P,
                other_c: X2C,
                y: Y1,
                y_other: Y2,
                yh_other: YH2,
                slots: [0, 1, 2],
            },
            Receiver::Two => View {
                own_c: X2C,
                own_p: X2P,
                other_c: X1C,
                y: Y2,
                y_other: Y1,
                yh_other: YH1,
                slots: [1, 0, 3],
            },
        }
    }

    fn coeffs(&self, own_c: u8, other_c: u8, own_p: u8) -> [u8; 4] {
        let mut c = [0; 4];
        c[self.slots[0]] = own_c;
        c[self.slots[1]] = other_c;
        c[self.slots[2]] = own_p;
        c
    }
}

/// MI on the constructed model with zero-power inputs removed from every
/// label set; a deterministic zero carries and reveals nothing.
fn live<'a>(cov: &CovarianceModel, set: &[&'a str]) -> Result<Vec<&'a str>> {
    let mut out = Vec::with_capacity(set.len());
    for &l in set {
        if cov.variance(l)? > 0.0 {
            out.push(l);
        }
    }
    Ok(out)
}

fn mi(cov: &CovarianceModel, a: &[&str], b: &[&str], c: &[&str]) -> Result<f64> {
    let live = |set| live(cov, set);
    gaussian_mi(cov, &live(a)?, &live(b)?, &live(c)?)
}

fn xi_on(cov: &CovarianceModel, v: &View) -> Result<f64> {
    mi(cov, &[v.yh_other], &[v.y_other], &[v.own_c, v.own_p, v.other_c, v.y])
}

/// `ξ` at `receiver`: for receiver 1, `I(ŷ2; y2 | x1c, x1, x2c, y1)`, the
/// conference rate spent describing what receiver 1 cannot already infer.
pub fn xi(
    gains: &ChannelGains,
    split1: &PowerSplit,
    split2: &PowerSplit,
    quant: &QuantizerConfig,
    receiver: Receiver,
) -> Result<f64> {
    let cov = build_covariance(gains, split1, split2, quant.delta1, quant.delta2)?;
    xi_on(&cov, &View::of(receiver))
}

/// (coefficients, signals of interest, conditioning, name)
type Term<'a> = ([u8; 4], Vec<&'a str>, Vec<&'a str>, &'a str);

/// All sixteen constraints. `cb12` is the capacity of the link from
/// receiver 1 to receiver 2 and `cb21` the reverse.
pub fn theorem1_region(
    gains: &ChannelGains,
    cb12: f64,
    cb21: f64,
    split1: &PowerSplit,
    split2: &PowerSplit,
    quant: &QuantizerConfig,
) -> Result<ConstraintSet> {
    let cov = build_covariance(gains, split1, split2, quant.delta1, quant.delta2)?;
    let mut set = ConstraintSet::default();
    for (receiver, incoming, tag) in [(Receiver::One, cb21, "rx1"), (Receiver::Two, cb12, "rx2")] {
        let v = View::of(receiver);
        let spare = (incoming - xi_on(&cov, &v)?).max(0.0);
        let terms: [Term; 4] = [
            (v.coeffs(0, 0, 1), vec![v.own_p], vec![v.own_c, v.other_c], "Rp"),
            (v.coeffs(0, 1, 1), vec![v.other_c, v.own_p], vec![v.own_c], "Rc'+Rp"),
            (v.coeffs(1, 0, 1), vec![v.own_c, v.own_p], vec![v.other_c], "Rc+Rp"),
            (v.coeffs(1, 1, 1), vec![v.own_c, v.own_p, v.other_c], vec![], "Rc+Rc'+Rp"),
        ];
        for (coeffs, a, c, name) in &terms {
            let direct = mi(&cov, a, &[v.y], c)?;
            set.push(*coeffs, direct, spare, format!("{tag}.bin.{name}"));
        }
        for (coeffs, a, c, name) in &terms {
            let joint = mi(&cov, a, &[v.y, v.yh_other], c)?;
            set.push(*coeffs, joint, 0.0, format!("{tag}.quant.{name}"));
        }
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::SymmetricParams;
    use crate::rates::{etw_power_split, quantization_distortion};
    use approx::assert_relative_eq;

    fn aligned(snr: f64, inr: f64) -> ChannelGains {
        ChannelGains::from_symmetric(&SymmetricParams::new(snr, inr, 0.0).unwrap(), [0.0; 4]).unwrap()
    }

    #[test]
    fn xi_scalar_reduction() {
        // Given (x1, x2c, y1) only x2p is unknown; with s = snr·pp, t = inr·pp
        // the residual of y2 given y1 has variance (s + t + 1)/(t + 1).
        let g = aligned(100.0, 10.0);
        let split = etw_power_split(100.0, 10.0);
        let q = quantization_distortion(100.0, &split);
        let (s, t) = (10.0, 1.0);
        let residual = (s + t + 1.0) / (t + 1.0);
        let expected = (1.0f64 + residual / q.delta2).log2();
        assert_relative_eq!(expected, 1.6f64.log2(), epsilon = 1e-12);
        for r in [Receiver::One, Receiver::Two] {
            assert_relative_eq!(xi(&g, &split, &split, &q, r).unwrap(), expected, epsilon = 1e-9);
        }
    }

    #[test]
    fn xi_all_common_unit_distortion() {
        // Everything but the noise is known: ŷ2 − E[..] = z2 + ẑ2, so ξ = log2(1 + 1/Δ).
        let g = aligned(10.0, 100.0);
        let split = etw_power_split(10.0, 100.0);
        let q = quantization_distortion(10.0, &split);
        let v = xi(&g, &split, &split, &q, Receiver::One).unwrap();
        assert_relative_eq!(v, 1.0, epsilon = 1e-9);
        assert!(v <= 1.0 + 1e-9);
    }

    #[test]
    fn xi_vanishes_for_coarse_quantization() {
        let g = aligned(100.0, 10.0);
        let split = etw_power_split(100.0, 10.0);
        let q = QuantizerConfig { delta1: 1e12, delta2: 1e12 };
        assert!(xi(&g, &split, &split, &q, Receiver::One).unwrap() < 1e-9);
    }

    #[test]
    fn zero_distortion_is_degenerate() {
        let g = aligned(100.0, 10.0);
        let split = etw_power_split(100.0, 10.0);
        let q = QuantizerConfig { delta1: 0.0, delta2: 0.0 };
        assert!(matches!(
            xi(&g, &split, &split, &q, Receiver::One),
            Err(crate::Error::Degenerate { .. })
        ));
    }

    #[test]
    fn private_constraint_mi_part() {
        let g = aligned(100.0, 10.0);
        let split = etw_power_split(100.0, 10.0);
        let q = quantization_distortion(100.0, &split);
        let set = theorem1_region(&g, 1.0, 1.0, &split, &split, &q).unwrap();
        assert_eq!(set.len(), 16);
        let c = set.get("rx1.bin.Rp").unwrap();
        assert_eq!(c.coeffs, [0, 0, 1, 0]);
        assert_relative_eq!(c.mi, (1.0f64 + 10.0 / 2.0).log2(), epsilon = 1e-9);
        assert_relative_eq!(c.mi, 2.585, epsilon = 1e-3);
        let xi1 = 1.6f64.log2();
        assert_relative_eq!(c.bound, c.mi + (1.0 - xi1), epsilon = 1e-9);
        let mirror = set.get("rx2.bin.Rp").unwrap();
        assert_eq!(mirror.coeffs, [0, 0, 0, 1]);
        assert_relative_eq!(mirror.bound, c.bound, epsilon = 1e-9);
    }

    #[test]
    fn no_cooperation_reduces_to_direct_forms() {
        let g = aligned(100.0, 10.0);
        let split = etw_power_split(100.0, 10.0);
        let q = QuantizerConfig { delta1: 1e15, delta2: 1e15 };
        let set = theorem1_region(&g, 0.0, 0.0, &split, &split, &q).unwrap();
        for name in ["Rp", "Rc'+Rp", "Rc+Rp", "Rc+Rc'+Rp"] {
            let bin = set.get(&format!("rx1.bin.{name}")).unwrap();
            let quant = set.get(&format!("rx1.quant.{name}")).unwrap();
            assert_eq!(bin.bound, bin.mi);
            assert!((quant.bound - bin.bound).abs() < 1e-6, "{name}");
        }
    }

    #[test]
    fn unbounded_conference_relaxes_bin_group() {
        let g = aligned(100.0, 10.0);
        let split = etw_power_split(100.0, 10.0);
        let q = quantization_distortion(100.0, &split);
        let set = theorem1_region(&g, 0.0, 1e6, &split, &split, &q).unwrap();
        for name in ["Rp", "Rc'+Rp", "Rc+Rp", "Rc+Rc'+Rp"] {
            let bin = set.get(&format!("rx1.bin.{name}")).unwrap();
            let quant = set.get(&format!("rx1.quant.{name}")).unwrap();
            assert!(bin.bound > quant.bound + 1e5);
        }
    }
}
