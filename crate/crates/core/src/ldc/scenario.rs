//! One-round quantization versus decode-and-forward at receiver 2.
//!
//! Encoders are uncoded level selections. Receiver 1 may forward any linear
//! map of `y1`; what receiver 2 may forward depends on the mode.

use serde::Serialize;

use super::gf2::{BitMatrix, LinearDecoder};
use super::search::{codebooks, first_forwarding, guard, EncoderClass, Received};
use super::{LdcConfig, LdcScheme};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum ScenarioMode {
    /// Linear maps of the levels of `y2` at or above receiver 2's
    /// private-signal level.
    OneRoundQuantize,
    /// Linear maps of the message bits receiver 2 decodes from `y2` alone.
    DecodeForward,
}

#[derive(Clone, Debug)]
pub struct ScenarioResult {
    pub mode: ScenarioMode,
    pub r1: usize,
    pub r2: usize,
    pub witness: LdcScheme,
    /// Bits receiver 2 can forward from: raw levels (`y2.1`, ...) or decoded
    /// message bits (`a3`, `b2`, ...).
    pub forwardable: Vec<String>,
}

/// Reconstructed asymmetric example: user 1 has two direct levels and four
/// cross levels into receiver 2, receiver 2 sends one bit to receiver 1.
pub fn fig5_config() -> LdcConfig {
    LdcConfig {
        n11: 2,
        n12: 0,
        n21: 4,
        n22: 2,
        k12: 0,
        k21: 1,
    }
}

/// Level labels of the message bits of a level-activation pair.
fn message_labels(g1: &BitMatrix, g2: &BitMatrix) -> Vec<String> {
    let label = |prefix: char, g: &BitMatrix| -> Vec<String> {
        (0..g.ncols())
            .map(|j| {
                let level = (0..g.nrows()).find(|&l| g.get(l, j)).unwrap_or(0);
                format!("{prefix}{}", level + 1)
            })
            .collect()
    };
    let mut out = label('a', g1);
    out.extend(label('b', g2));
    out
}

/// Best `(R1, R2)` (lexicographic in `R1` first) over level-activation
/// schemes whose receiver-2 forwarding obeys `mode`.
pub fn scenario_compare(config: &LdcConfig, mode: ScenarioMode) -> Result<ScenarioResult> {
    config.validate()?;
    guard(config, EncoderClass::LevelActivation)?;
    let q = config.q();
    let keep = q - config.n22.saturating_sub(config.n12);
    let books = codebooks(q, EncoderClass::LevelActivation);
    let all_rows: Vec<u64> = (0..1u64 << q).collect();

    let mut best: Option<ScenarioResult> = None;
    for g1 in &books {
        for g2 in &books {
            let (r1, r2) = (g1.ncols(), g2.ncols());
            if best.as_ref().is_some_and(|b| (r1, r2) <= (b.r1, b.r2)) {
                continue;
            }
            let rec = Received::new(config, g1, g2);
            let Some(f12) = first_forwarding(&rec, 2, config.k12, &all_rows) else {
                continue;
            };
            let labels = message_labels(g1, g2);
            let (options, forwardable) = match mode {
                ScenarioMode::OneRoundQuantize => (
                    (0..1u64 << keep).collect::<Vec<_>>(),
                    (0..keep).map(|l| format!("y2.{}", l + 1)).collect::<Vec<_>>(),
                ),
                ScenarioMode::DecodeForward => {
                    // w with w·y2 = e_j for each individually decodable bit j
                    let y2 = BitMatrix::from_words(rec.y2.clone(), r1 + r2)?;
                    let solver = LinearDecoder::new(&y2.transpose());
                    let decoded: Vec<(usize, u64)> = (0..r1 + r2)
                        .filter_map(|j| solver.solve(1 << j).map(|w| (j, w)))
                        .collect();
                    let options = (0..1u64 << decoded.len())
                        .map(|c| {
                            decoded
                                .iter()
                                .enumerate()
                                .filter(|(i, _)| (c >> i) & 1 == 1)
                                .fold(0, |acc, (_, &(_, w))| acc ^ w)
                        })
                        .collect();
                    (options, decoded.iter().map(|&(j, _)| labels[j].clone()).collect())
                }
            };
            let Some(f21) = first_forwarding(&rec, 1, config.k21, &options) else {
                continue;
            };
            let witness = LdcScheme::new(
                *config,
                g1.clone(),
                g2.clone(),
                BitMatrix::from_words(f12, q)?,
                BitMatrix::from_words(f21, q)?,
            )?;
            best = Some(ScenarioResult {
                mode,
                r1,
                r2,
                witness,
                forwardable,
            });
        }
    }
    Ok(best.expect("the silent scheme is always decodable"))
}
