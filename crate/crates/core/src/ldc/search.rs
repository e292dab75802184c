//! Exhaustive search over linear cooperation schemes.
//!
//! Decodability at receiver `i` depends on the two codebooks (their column
//! spaces) and on the forwarding map into receiver `i` only, so for every
//! codebook pair the two directions are searched independently.
//!
//! Enumeration order, which fixes the reported witnesses: codebook of user 1,
//! then codebook of user 2, then `F12`, then `F21`. Codebooks list the
//! uncoded level selections first (by level mask, top level = bit 0), then
//! the remaining subspaces by dimension and membership bitmap. Forwarding
//! matrices are ordered by their packed index, row 0 in the low digits.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::gf2::{low_mask, rank_of_words, BitMatrix};
use super::{LdcConfig, LdcScheme};
use crate::error::{Error, Result};

pub const MAX_SEARCH_LEVELS: usize = 4;
pub const MAX_SEARCH_CONFERENCE: usize = 2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EncoderClass {
    /// Any linear code of one channel use (every subspace of the levels).
    #[default]
    Linear,
    /// Fresh independent bits on a subset of levels.
    LevelActivation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub encoders: EncoderClass,
    pub max_r1: usize,
    pub max_r2: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            encoders: EncoderClass::Linear,
            max_r1: usize::MAX,
            max_r2: usize::MAX,
        }
    }
}

/// One corner of the time-sharing mix that attains `best_sym`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricShare {
    pub rates: [usize; 2],
    pub weight: f64,
    pub scheme: LdcScheme,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub config: LdcConfig,
    pub best_sum: usize,
    /// Largest `R` with `(R, R)` in the time-sharing hull of the achievable
    /// rate pairs.
    pub best_sym: f64,
    /// First scheme in enumeration order with sum rate `best_sum`.
    pub witness: LdcScheme,
    pub symmetric_mix: Vec<SymmetricShare>,
    /// First scheme found for each achievable rate pair.
    pub by_rates: BTreeMap<[usize; 2], LdcScheme>,
    pub candidates: u128,
}

impl SearchResult {
    pub fn achievable(&self) -> impl Iterator<Item = [usize; 2]> + '_ {
        self.by_rates.keys().copied()
    }
}

/// Number of subspaces of GF(2)^q.
fn subspace_count(q: usize) -> f64 {
    (0..=q)
        .map(|r| {
            (0..r)
                .map(|i| (2f64.powi((q - i) as i32) - 1.0) / (2f64.powi(i as i32 + 1) - 1.0))
                .product::<f64>()
        })
        .sum()
}

pub(super) fn guard(config: &LdcConfig, encoders: EncoderClass) -> Result<()> {
    let q = config.q();
    if q <= MAX_SEARCH_LEVELS && config.k12 <= MAX_SEARCH_CONFERENCE && config.k21 <= MAX_SEARCH_CONFERENCE {
        return Ok(());
    }
    let books = match encoders {
        EncoderClass::Linear => subspace_count(q),
        EncoderClass::LevelActivation => 2f64.powi(q as i32),
    };
    let estimate = books * books * 2f64.powi(((config.k12 + config.k21) * q) as i32);
    Err(Error::SearchSpace {
        estimate: estimate as u128,
        reason: format!(
            "search needs q <= {MAX_SEARCH_LEVELS} and k12, k21 <= {MAX_SEARCH_CONFERENCE}, got q = {q}, k12 = {}, k21 = {}",
            config.k12, config.k21
        ),
    })
}

/// Generator matrices (`q × r`, columns are basis vectors) in enumeration
/// order.
pub(super) fn codebooks(q: usize, class: EncoderClass) -> Vec<BitMatrix> {
    let levels = |mask: u64| {
        let cols: Vec<usize> = (0..q).filter(|l| (mask >> l) & 1 == 1).collect();
        let mut g = BitMatrix::zeros(q, cols.len());
        for (j, &l) in cols.iter().enumerate() {
            g.set(l, j, true);
        }
        g
    };
    let mut books: Vec<BitMatrix> = (0..1u64 << q).map(levels).collect();
    if class == EncoderClass::LevelActivation {
        return books;
    }

    // Subspaces as membership bitmaps over the 2^q vectors.
    let span_bitmap = |basis: &[u64]| -> u64 {
        (0..1u64 << basis.len()).fold(0, |acc, s| {
            let v = basis.iter().enumerate().filter(|(i, _)| (s >> i) & 1 == 1).fold(0, |v, (_, &b)| v ^ b);
            acc | (1 << v)
        })
    };
    let mut seen = std::collections::BTreeSet::new();
    let mut frontier = vec![Vec::<u64>::new()];
    let mut found: Vec<(usize, u64, Vec<u64>)> = Vec::new();
    while let Some(basis) = frontier.pop() {
        let bitmap = span_bitmap(&basis);
        if !seen.insert(bitmap) {
            continue;
        }
        found.push((basis.len(), bitmap, basis.clone()));
        for v in 1..1u64 << q {
            if (bitmap >> v) & 1 == 0 {
                let mut next = basis.clone();
                next.push(v);
                frontier.push(next);
            }
        }
    }
    let coordinate: std::collections::BTreeSet<u64> = (0..1u64 << q)
        .map(|mask| span_bitmap(&(0..q).filter(|l| (mask >> l) & 1 == 1).map(|l| 1 << l).collect::<Vec<_>>()))
        .collect();
    found.retain(|(_, bitmap, _)| !coordinate.contains(bitmap));
    found.sort_by_key(|(dim, bitmap, _)| (*dim, *bitmap));
    for (_, bitmap, _) in found {
        // Greedy basis from the members in increasing order.
        let mut basis: Vec<u64> = Vec::new();
        for v in (1..1u64 << q).filter(|v| (bitmap >> v) & 1 == 1) {
            if rank_of_words(basis.iter().copied().chain([v])) > basis.len() {
                basis.push(v);
            }
        }
        let mut g = BitMatrix::zeros(q, basis.len());
        for (j, &v) in basis.iter().enumerate() {
            for l in 0..q {
                g.set(l, j, (v >> l) & 1 == 1);
            }
        }
        books.push(g);
    }
    books
}

/// What both receivers see, as rows (levels) of words over the message
/// coordinates `(m1, m2)`.
pub(super) struct Received {
    pub y1: Vec<u64>,
    pub y2: Vec<u64>,
    pub r1: usize,
    pub r2: usize,
}

impl Received {
    pub fn new(config: &LdcConfig, g1: &BitMatrix, g2: &BitMatrix) -> Self {
        let rows = |rx| {
            config
                .link_matrix(rx, 1)
                .mul(g1)
                .hstack(&config.link_matrix(rx, 2).mul(g2))
                .rows()
                .to_vec()
        };
        Self {
            y1: rows(1),
            y2: rows(2),
            r1: g1.ncols(),
            r2: g2.ncols(),
        }
    }

    pub fn own(&self, rx: usize) -> (&[u64], &[u64], usize, u64) {
        let m1 = low_mask(self.r1);
        let m2 = low_mask(self.r1 + self.r2) & !m1;
        match rx {
            1 => (&self.y1, &self.y2, self.r1, m2),
            _ => (&self.y2, &self.y1, self.r2, m1),
        }
    }
}

/// `table[mask]` is the XOR of the rows selected by `mask`.
pub(super) fn xor_table(rows: &[u64]) -> Vec<u64> {
    let mut t = vec![0u64; 1 << rows.len()];
    for mask in 1..t.len() {
        let low = mask.trailing_zeros() as usize;
        t[mask] = t[mask & (mask - 1)] ^ rows[low];
    }
    t
}

/// First `k`-row forwarding map (rows drawn from `options`, level masks)
/// under which receiver `rx` decodes, in packed-index order.
pub(super) fn first_forwarding(rec: &Received, rx: usize, k: usize, options: &[u64]) -> Option<Vec<u64>> {
    let (own, other_view, own_bits, other_mask) = rec.own(rx);
    let table = xor_table(other_view);
    let n = options.len();
    let total = n.checked_pow(k as u32).expect("forwarding space fits in usize");
    let mut obs: Vec<u64> = own.to_vec();
    for index in 0..total {
        obs.truncate(own.len());
        let mut rows = Vec::with_capacity(k);
        let mut rest = index;
        for _ in 0..k {
            let f = options[rest % n];
            rest /= n;
            rows.push(f);
            obs.push(table[f as usize]);
        }
        let full = rank_of_words(obs.iter().copied());
        if full == own_bits + rank_of_words(obs.iter().map(|&w| w & other_mask)) {
            return Some(rows);
        }
    }
    None
}

/// Exhaustive search for the best sum rate and symmetric rate of `config`.
pub fn brute_force_search(config: &LdcConfig, options: SearchOptions) -> Result<SearchResult> {
    config.validate()?;
    guard(config, options.encoders)?;
    let q = config.q();
    let books: Vec<BitMatrix> = codebooks(q, options.encoders);
    let all_rows: Vec<u64> = (0..1u64 << q).collect();

    let pairs: Vec<(usize, usize)> = (0..books.len())
        .flat_map(|i| (0..books.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| books[i].ncols() <= options.max_r1 && books[j].ncols() <= options.max_r2)
        .collect();
    let found: Vec<Option<LdcScheme>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let rec = Received::new(config, &books[i], &books[j]);
            let f21 = first_forwarding(&rec, 1, config.k21, &all_rows)?;
            let f12 = first_forwarding(&rec, 2, config.k12, &all_rows)?;
            let scheme = LdcScheme::new(
                *config,
                books[i].clone(),
                books[j].clone(),
                BitMatrix::from_words(f12, q).ok()?,
                BitMatrix::from_words(f21, q).ok()?,
            )
            .ok()?;
            Some(scheme)
        })
        .collect();

    let mut by_rates: BTreeMap<[usize; 2], LdcScheme> = BTreeMap::new();
    let mut best: Option<(usize, LdcScheme)> = None;
    for scheme in found.into_iter().flatten() {
        let rates = [scheme.r1(), scheme.r2()];
        let sum = rates[0] + rates[1];
        if best.as_ref().is_none_or(|(s, _)| sum > *s) {
            best = Some((sum, scheme.clone()));
        }
        by_rates.entry(rates).or_insert(scheme);
    }
    let (best_sum, witness) = best.expect("the silent scheme is always decodable");
    let (best_sym, mix) = symmetric_point(by_rates.keys().copied());
    let symmetric_mix = mix
        .into_iter()
        .map(|(rates, weight)| SymmetricShare {
            rates,
            weight,
            scheme: by_rates[&rates].clone(),
        })
        .collect();

    let fwd = 2f64.powi(((config.k12 + config.k21) * q) as i32);
    Ok(SearchResult {
        config: *config,
        best_sum,
        best_sym,
        witness,
        symmetric_mix,
        by_rates,
        candidates: (pairs.len() as f64 * fwd) as u128,
    })
}

/// Best symmetric rate over time-sharing between at most two rate pairs,
/// with the mix that attains it.
pub(super) fn symmetric_point(points: impl Iterator<Item = [usize; 2]>) -> (f64, Vec<([usize; 2], f64)>) {
    let points: Vec<[usize; 2]> = points.collect();
    let mut best = (0.0, vec![([0, 0], 1.0)]);
    for (i, &p) in points.iter().enumerate() {
        let v = p[0].min(p[1]) as f64;
        if v > best.0 {
            best = (v, vec![(p, 1.0)]);
        }
        for &s in &points[i + 1..] {
            let (dp, ds) = (p[0] as f64 - p[1] as f64, s[0] as f64 - s[1] as f64);
            if dp * ds < 0.0 {
                // weight t on s puts the mix on the diagonal
                let t = dp / (dp - ds);
                let v = p[0] as f64 + t * (s[0] as f64 - p[0] as f64);
                if v > best.0 + 1e-12 {
                    best = (v, vec![(p, 1.0 - t), (s, t)]);
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ldc::check_decodable;

    #[test]
    fn subspace_enumeration_counts() {
        assert_eq!(codebooks(1, EncoderClass::Linear).len(), 2);
        assert_eq!(codebooks(2, EncoderClass::Linear).len(), 5);
        assert_eq!(codebooks(3, EncoderClass::Linear).len(), 16);
        assert_eq!(codebooks(4, EncoderClass::Linear).len(), 67);
        assert_eq!(codebooks(4, EncoderClass::LevelActivation).len(), 16);
        for q in 1..=4 {
            assert_eq!(codebooks(q, EncoderClass::Linear).len() as f64, subspace_count(q));
            for g in codebooks(q, EncoderClass::Linear) {
                assert_eq!(g.rank(), g.ncols());
            }
        }
    }

    #[test]
    fn symmetric_point_time_shares() {
        let (v, mix) = symmetric_point([[3, 2], [2, 3], [1, 1]].into_iter());
        assert_eq!(v, 2.5);
        assert_eq!(mix.len(), 2);
        let (v, _) = symmetric_point([[3, 0], [0, 1]].into_iter());
        assert_eq!(v, 0.75);
        assert_eq!(symmetric_point([[2, 2], [4, 0]].into_iter()).0, 2.0);
    }

    #[test]
    fn two_thirds_example() {
        let r = brute_force_search(&LdcConfig::symmetric(3, 2, 1).unwrap(), SearchOptions::default()).unwrap();
        assert_eq!(r.best_sum, 5);
        assert_eq!(r.best_sym, 2.5);
        assert!(check_decodable(&r.witness));
        let r0 = brute_force_search(&LdcConfig::symmetric(3, 2, 0).unwrap(), SearchOptions::default()).unwrap();
        assert_eq!(r0.best_sum, 4);
    }

    #[test]
    fn half_alpha_example() {
        let r = brute_force_search(&LdcConfig::symmetric(4, 2, 1).unwrap(), SearchOptions::default()).unwrap();
        assert_eq!(r.best_sym, 3.0);
        assert_eq!(r.best_sum, 6);
    }

    #[test]
    fn rate_caps_are_respected() {
        let opts = SearchOptions {
            max_r1: 1,
            max_r2: 1,
            ..SearchOptions::default()
        };
        let r = brute_force_search(&LdcConfig::symmetric(3, 0, 0).unwrap(), opts).unwrap();
        assert_eq!(r.best_sum, 2);
    }

    #[test]
    fn guard_rejects_large_spaces() {
        let err = brute_force_search(&LdcConfig::symmetric(5, 2, 1).unwrap(), SearchOptions::default()).unwrap_err();
        match err {
            Error::SearchSpace { estimate, .. } => assert!(estimate > 1_000_000),
            other => panic!("unexpected {other:?}"),
        }
        assert!(brute_force_search(&LdcConfig::symmetric(3, 2, 3).unwrap(), SearchOptions::default()).is_err());
    }
}
