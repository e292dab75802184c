//! Linear deterministic channel with limited receiver cooperation.
//!
//! Each transmit signal is a vector of `q` bit levels, most significant
//! first. A link of gain `n` delivers the top `n` levels of its input at the
//! bottom `n` levels of the receiver (a downward shift by `q − n`), and
//! signals arriving at the same receiver add bitwise modulo 2. Receiver `i`
//! may forward `k_ij` bits per channel use to receiver `j`.

mod gf2;
mod scenario;
mod scheme;
mod search;

pub use gf2::{rank_of_words, BitMatrix, LinearDecoder};
pub use scenario::{fig5_config, scenario_compare, ScenarioMode, ScenarioResult};
pub use scheme::{check_decodable, simulate, LdcScheme, SchemeFile, SimReport};
pub use search::{brute_force_search, EncoderClass, SearchOptions, SearchResult};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::gdof::gdof_formula;

/// Largest supported number of levels per signal.
pub const MAX_LEVELS: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LdcConfig {
    pub n11: usize,
    pub n12: usize,
    pub n21: usize,
    pub n22: usize,
    /// Conference bits from receiver 1 to receiver 2.
    pub k12: usize,
    /// Conference bits from receiver 2 to receiver 1.
    pub k21: usize,
}

impl LdcConfig {
    pub fn new(n11: usize, n12: usize, n21: usize, n22: usize, k12: usize, k21: usize) -> Result<Self> {
        let c = Self { n11, n12, n21, n22, k12, k21 };
        c.validate()?;
        Ok(c)
    }

    /// Direct gain `n`, cross gain `m`, `k` conference bits each way.
    pub fn symmetric(n: usize, m: usize, k: usize) -> Result<Self> {
        Self::new(n, m, m, n, k, k)
    }

    pub fn validate(&self) -> Result<()> {
        let q = self.q();
        if q == 0 {
            return Err(invalid("at least one link must have a positive number of levels"));
        }
        if q > MAX_LEVELS || self.k12 > MAX_LEVELS || self.k21 > MAX_LEVELS {
            return Err(invalid(format!("levels and conference bits are limited to {MAX_LEVELS}")));
        }
        Ok(())
    }

    /// Signal-space dimension.
    pub fn q(&self) -> usize {
        self.n11.max(self.n12).max(self.n21).max(self.n22)
    }

    /// Gain of the link from transmitter `tx` to receiver `rx` (1-based).
    pub fn gain(&self, rx: usize, tx: usize) -> usize {
        match (rx, tx) {
            (1, 1) => self.n11,
            (1, 2) => self.n12,
            (2, 1) => self.n21,
            (2, 2) => self.n22,
            _ => panic!("receiver and transmitter indices are 1 or 2"),
        }
    }

    /// The `q × q` matrix of the link `tx → rx`: a downward shift by
    /// `q − n`.
    pub fn link_matrix(&self, rx: usize, tx: usize) -> BitMatrix {
        shift_matrix(self.q(), self.gain(rx, tx))
    }
}

fn shift_matrix(q: usize, n: usize) -> BitMatrix {
    let s = q - n;
    let mut m = BitMatrix::zeros(q, q);
    for level in s..q {
        m.set(level, level - s, true);
    }
    m
}

/// A fixed-length bit vector; index 0 is the most significant level.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    word: u64,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        assert!(len <= 64);
        Self { len, word: 0 }
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        if bits.len() > 64 {
            return Err(Error::Dimension("bit vectors are limited to 64 entries".into()));
        }
        let mut word = 0;
        for (i, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => word |= 1 << i,
                other => return Err(invalid(format!("entry {other} is not a bit"))),
            }
        }
        Ok(Self { len: bits.len(), word })
    }

    /// Bit `i` of `word` is level `i`.
    pub fn from_word(word: u64, len: usize) -> Self {
        assert!(len <= 64);
        let mask = if len == 64 { u64::MAX } else { (1 << len) - 1 };
        Self { len, word: word & mask }
    }

    pub fn word(&self) -> u64 {
        self.word
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, level: usize) -> bool {
        (self.word >> level) & 1 == 1
    }

    pub fn bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| u8::from(self.get(i))).collect()
    }

    /// Moves every level down by `s`, dropping the lowest `s` levels.
    pub fn shift_down(&self, s: usize) -> Self {
        if s >= self.len {
            Self::zeros(self.len)
        } else {
            Self::from_word(self.word << s, self.len)
        }
    }
}

impl std::ops::BitXor for BitVec {
    type Output = BitVec;

    fn bitxor(self, rhs: BitVec) -> BitVec {
        assert_eq!(self.len, rhs.len, "length mismatch");
        BitVec { len: self.len, word: self.word ^ rhs.word }
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec(")?;
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        write!(f, ")")
    }
}

/// Received vectors `(y1, y2)` for transmit vectors `x1`, `x2`.
pub fn ldc_output(config: &LdcConfig, x1: &BitVec, x2: &BitVec) -> Result<(BitVec, BitVec)> {
    let q = config.q();
    if x1.len() != q || x2.len() != q {
        return Err(Error::Dimension(format!(
            "inputs have {} and {} levels, channel has {q}",
            x1.len(),
            x2.len()
        )));
    }
    let y1 = x1.shift_down(q - config.n11) ^ x2.shift_down(q - config.n12);
    let y2 = x1.shift_down(q - config.n21) ^ x2.shift_down(q - config.n22);
    Ok((y1, y2))
}

/// Symmetric capacity per user of the symmetric deterministic channel with
/// direct gain `n`, cross gain `m` and `k` conference bits each way:
/// `n · d(m/n, k/n)`. The flag is set when `m = n`, where the deterministic
/// and Gaussian pictures can differ.
pub fn ldc_sym_capacity_formula(n: usize, m: usize, k: usize) -> Result<(f64, bool)> {
    if n == 0 {
        return Err(invalid("direct gain n must be at least 1"));
    }
    let p = gdof_formula(m as f64 / n as f64, k as f64 / n as f64)?;
    Ok((n as f64 * p.d, m == n))
}
