//! Linear cooperation schemes: encoders, forwarding maps and decoding.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::gf2::{low_mask, BitMatrix, LinearDecoder};
use super::{ldc_output, BitVec, LdcConfig};
use crate::error::{Error, Result};

/// Encoders `G1` (`q × r1`), `G2` (`q × r2`) and forwarding maps `F12`
/// (`k12 × q`, applied to `y1`), `F21` (`k21 × q`, applied to `y2`).
///
/// Receiver `i` decodes its own message by a linear solve from its received
/// vector stacked with the incoming conference bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LdcScheme {
    pub config: LdcConfig,
    pub g1: BitMatrix,
    pub g2: BitMatrix,
    pub f12: BitMatrix,
    pub f21: BitMatrix,
}

impl LdcScheme {
    pub fn new(config: LdcConfig, g1: BitMatrix, g2: BitMatrix, f12: BitMatrix, f21: BitMatrix) -> Result<Self> {
        config.validate()?;
        let q = config.q();
        let check = |name: &str, m: &BitMatrix, rows: usize, cols: Option<usize>| {
            if m.nrows() != rows || cols.is_some_and(|c| m.ncols() != c) {
                return Err(Error::Dimension(format!(
                    "{name} is {}x{}, expected {rows}x{}",
                    m.nrows(),
                    m.ncols(),
                    cols.map_or("r".to_string(), |c| c.to_string())
                )));
            }
            Ok(())
        };
        check("G1", &g1, q, None)?;
        check("G2", &g2, q, None)?;
        check("F12", &f12, config.k12, Some(q))?;
        check("F21", &f21, config.k21, Some(q))?;
        if g1.ncols() + g2.ncols() > 64 {
            return Err(Error::Dimension("at most 64 message bits in total".into()));
        }
        Ok(Self { config, g1, g2, f12, f21 })
    }

    /// Uncoded scheme with one fresh bit on each listed level (0-based, top
    /// first).
    pub fn level_activation(
        config: LdcConfig,
        levels1: &[usize],
        levels2: &[usize],
        f12: BitMatrix,
        f21: BitMatrix,
    ) -> Result<Self> {
        let q = config.q();
        let encoder = |levels: &[usize]| -> Result<BitMatrix> {
            let mut g = BitMatrix::zeros(q, levels.len());
            for (j, &l) in levels.iter().enumerate() {
                if l >= q {
                    return Err(Error::Dimension(format!("level {l} outside 0..{q}")));
                }
                g.set(l, j, true);
            }
            Ok(g)
        };
        Self::new(config, encoder(levels1)?, encoder(levels2)?, f12, f21)
    }

    pub fn r1(&self) -> usize {
        self.g1.ncols()
    }

    pub fn r2(&self) -> usize {
        self.g2.ncols()
    }

    /// Map from `(m1, m2)` (m1 in the low columns) to receiver `rx`'s
    /// observation `[y_rx ; incoming conference bits]`.
    pub fn observation_matrix(&self, rx: usize) -> BitMatrix {
        let c = &self.config;
        let received = |r: usize| c.link_matrix(r, 1).mul(&self.g1).hstack(&c.link_matrix(r, 2).mul(&self.g2));
        let (own, other, forward) = match rx {
            1 => (received(1), received(2), &self.f21),
            2 => (received(2), received(1), &self.f12),
            _ => panic!("receiver index is 1 or 2"),
        };
        own.vstack(&forward.mul(&other))
    }

    /// Whether receiver `rx` recovers its own message from every message pair.
    pub fn receiver_decodes(&self, rx: usize) -> bool {
        let obs = self.observation_matrix(rx);
        let (r1, r2) = (self.r1(), self.r2());
        let m1_mask = low_mask(r1);
        let m2_mask = low_mask(r1 + r2) & !m1_mask;
        let (other, own_bits) = if rx == 1 { (m2_mask, r1) } else { (m1_mask, r2) };
        obs.rank() == own_bits + obs.masked_rank(other)
    }

    pub fn to_file(&self) -> SchemeFile {
        SchemeFile {
            description: None,
            config: self.config,
            r1: self.r1(),
            r2: self.r2(),
            g1: self.g1.to_bit_rows(),
            g2: self.g2.to_bit_rows(),
            f12: self.f12.to_bit_rows(),
            f21: self.f21.to_bit_rows(),
        }
    }
}

/// Both receivers recover their own messages: no two message pairs that
/// differ in `m_i` give receiver `i` the same observation.
pub fn check_decodable(scheme: &LdcScheme) -> bool {
    scheme.receiver_decodes(1) && scheme.receiver_decodes(2)
}

/// JSON interchange format for schemes. Matrices are arrays of bit rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub config: LdcConfig,
    pub r1: usize,
    pub r2: usize,
    #[serde(rename = "G1")]
    pub g1: Vec<Vec<u8>>,
    #[serde(rename = "G2")]
    pub g2: Vec<Vec<u8>>,
    #[serde(rename = "F12")]
    pub f12: Vec<Vec<u8>>,
    #[serde(rename = "F21")]
    pub f21: Vec<Vec<u8>>,
}

impl SchemeFile {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn to_scheme(&self) -> Result<LdcScheme> {
        let q = self.config.q();
        LdcScheme::new(
            self.config,
            BitMatrix::from_bit_rows(&self.g1, self.r1)?,
            BitMatrix::from_bit_rows(&self.g2, self.r2)?,
            BitMatrix::from_bit_rows(&self.f12, q)?,
            BitMatrix::from_bit_rows(&self.f21, q)?,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimReport {
    pub trials: u64,
    /// Trials in which user 1 / user 2 was decoded wrongly.
    pub decode_errors: [u64; 2],
    /// Nominal rate of each user if it was always decoded, else 0.
    pub achieved_rates: [usize; 2],
    pub sum_rate: usize,
}

/// Runs `trials` channel uses with uniform messages through the channel,
/// the forwarding maps and the linear decoders.
pub fn simulate(scheme: &LdcScheme, trials: u64, seed: u64) -> SimReport {
    let q = scheme.config.q();
    let (r1, r2) = (scheme.r1(), scheme.r2());
    let dec1 = LinearDecoder::new(&scheme.observation_matrix(1));
    let dec2 = LinearDecoder::new(&scheme.observation_matrix(2));
    let m1_mask = low_mask(r1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut errors = [0u64; 2];
    for _ in 0..trials {
        let m1 = rng.gen::<u64>() & m1_mask;
        let m2 = rng.gen::<u64>() & low_mask(r2);
        let x1 = BitVec::from_word(scheme.g1.mul_vec(m1), q);
        let x2 = BitVec::from_word(scheme.g2.mul_vec(m2), q);
        let (y1, y2) = ldc_output(&scheme.config, &x1, &x2).expect("encoder output has q levels");
        let u12 = scheme.f12.mul_vec(y1.word());
        let u21 = scheme.f21.mul_vec(y2.word());
        let obs1 = y1.word() | (u21 << q);
        let obs2 = y2.word() | (u12 << q);
        let m1_hat = dec1.solve(obs1).map(|z| z & m1_mask);
        let m2_hat = dec2.solve(obs2).map(|z| z.checked_shr(r1 as u32).unwrap_or(0));
        if m1_hat != Some(m1) {
            errors[0] += 1;
        }
        if m2_hat != Some(m2) {
            errors[1] += 1;
        }
    }
    let achieved_rates = [
        if errors[0] == 0 { r1 } else { 0 },
        if errors[1] == 0 { r2 } else { 0 },
    ];
    SimReport {
        trials,
        decode_errors: errors,
        achieved_rates,
        sum_rate: achieved_rates[0] + achieved_rates[1],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    fn select(k: usize, q: usize, levels: &[usize]) -> BitMatrix {
        let mut f = BitMatrix::zeros(k, q);
        for (i, &l) in levels.iter().enumerate() {
            f.set(i, l, true);
        }
        f
    }

    #[test]
    fn interference_free_identity_is_decodable() {
        let c = LdcConfig::new(3, 0, 0, 3, 0, 0).unwrap();
        let s = LdcScheme::new(c, BitMatrix::identity(3), BitMatrix::identity(3), select(0, 3, &[]), select(0, 3, &[]))
            .unwrap();
        assert!(check_decodable(&s));
        assert_eq!(simulate(&s, 100, 0).sum_rate, 6);
    }

    #[test]
    fn two_thirds_scheme_needs_cooperation() {
        // a1, a2, a3 and b1, b3; receiver 1 forwards y1 level 2 (a2⊕b1),
        // receiver 2 forwards y2 level 1 (b1).
        let c = LdcConfig::symmetric(3, 2, 1).unwrap();
        let s = LdcScheme::level_activation(c, &[0, 1, 2], &[0, 2], select(1, 3, &[1]), select(1, 3, &[0])).unwrap();
        assert!(check_decodable(&s));
        let rep = simulate(&s, 1000, 1);
        assert_eq!(rep.decode_errors, [0, 0]);
        assert_eq!(rep.sum_rate, 5);

        let c0 = LdcConfig::symmetric(3, 2, 0).unwrap();
        let s0 = LdcScheme::level_activation(c0, &[0, 1, 2], &[0, 2], select(0, 3, &[]), select(0, 3, &[])).unwrap();
        assert!(!check_decodable(&s0));
        assert!(simulate(&s0, 1000, 1).decode_errors.iter().any(|&e| e > 0));
    }

    #[test]
    fn dimension_checks() {
        let c = LdcConfig::symmetric(3, 2, 1).unwrap();
        assert!(LdcScheme::new(c, BitMatrix::zeros(2, 1), BitMatrix::zeros(3, 1), select(1, 3, &[0]), select(1, 3, &[0]))
            .is_err());
        assert!(LdcScheme::new(c, BitMatrix::zeros(3, 1), BitMatrix::zeros(3, 1), select(0, 3, &[]), select(1, 3, &[0]))
            .is_err());
        assert!(LdcScheme::level_activation(c, &[3], &[], select(1, 3, &[0]), select(1, 3, &[0])).is_err());
    }

    #[test]
    fn file_round_trip() {
        let c = LdcConfig::symmetric(3, 2, 1).unwrap();
        let s = LdcScheme::level_activation(c, &[0, 1, 2], &[0, 2], select(1, 3, &[1]), select(1, 3, &[0])).unwrap();
        let text = serde_json::to_string(&s.to_file()).unwrap();
        assert!(text.contains("\"G1\"") && text.contains("\"F21\""));
        let back: SchemeFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_scheme().unwrap(), s);
    }

    fn random_scheme() -> impl Strategy<Value = LdcScheme> {
        (prop::array::uniform4(0usize..=4), 0usize..=2, 0usize..=2, 0usize..=4, 0usize..=4, any::<u64>()).prop_filter_map(
            "q > 0",
            |(n, k12, k21, r1, r2, bits)| {
                let c = LdcConfig::new(n[0], n[1], n[2], n[3], k12, k21).ok()?;
                let q = c.q();
                let mut rng = ChaCha8Rng::seed_from_u64(bits);
                let mut m = |rows: usize, cols: usize| {
                    let words = (0..rows).map(|_| rng.gen::<u64>() & ((1 << cols) - 1)).collect();
                    BitMatrix::from_words(words, cols).unwrap()
                };
                let (g1, g2, f12, f21) = (m(q, r1), m(q, r2), m(k12, q), m(k21, q));
                LdcScheme::new(c, g1, g2, f12, f21).ok()
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn simulation_agrees_with_rank_test(s in random_scheme(), seed in any::<u64>()) {
            let rep = simulate(&s, 10_000, seed);
            for rx in [1, 2] {
                let clean = rep.decode_errors[rx - 1] == 0;
                prop_assert_eq!(clean, s.receiver_decodes(rx), "receiver {}", rx);
            }
        }
    }
}
