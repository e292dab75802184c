//! Grid sweeps over `(snr, inr, cb, phases)` and their run records.
//!
//! Randomness: the phase draws of the `c`-th `(snr, inr)` cell come from
//! ChaCha8 seeded with the user seed on stream `c`, so they are shared by
//! every conference capacity in that cell and do not depend on thread
//! scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{db_to_linear, ChannelGains, SymmetricParams};
use crate::error::{invalid, Result};
use crate::gdof::draw_phases;
use crate::rates::{
    achievable_sym_rate, max_symmetric_rate_t1, outer_bound_sym, symmetric_config, theorem1_region,
};

pub const GAP_MIN: f64 = -1e-6;
pub const GAP_MAX: f64 = 3.0 + 1e-6;

/// The two deterministic phase tuples appended to every random sweep cell:
/// all gains aligned, and the cross gains anti-aligned with the direct ones
/// (which maximizes `|h11 h22 - h12 h21|²`).
pub const ALIGNED: [f64; 4] = [0.0; 4];
pub const ANTI_ALIGNED: [f64; 4] = [0.0, std::f64::consts::PI, 0.0, 0.0];

/// Inclusive `start:stop:step` list, or a single value.
pub fn parse_range(text: &str) -> Result<Vec<f64>> {
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| invalid(format!("`{s}` is not a number")))
    };
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [v] => Ok(vec![num(v)?]),
        [a, b, c] => {
            let (start, stop, step) = (num(a)?, num(b)?, num(c)?);
            if !(step > 0.0 && step.is_finite()) || !(start.is_finite() && stop.is_finite()) {
                return Err(invalid(format!("range `{text}` needs a positive step and finite ends")));
            }
            if stop < start {
                return Err(invalid(format!("range `{text}` is empty")));
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize;
            // rounded to shed accumulated binary noise, e.g. 0.30000000000000004
            Ok((0..=n).map(|i| round12(start + i as f64 * step)).collect())
        }
        _ => Err(invalid(format!("`{text}` is neither a value nor start:stop:step"))),
    }
}

/// Comma-separated values and ranges, e.g. `0.5,0.6667` or `0:1:0.25`.
pub fn parse_list(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for part in text.split(',').filter(|p| !p.trim().is_empty()) {
        out.extend(parse_range(part)?);
    }
    if out.is_empty() {
        return Err(invalid("empty list"));
    }
    Ok(out)
}

fn round12(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

#[derive(Clone, Debug, PartialEq)]
pub enum InterferenceAxis {
    InrDb(Vec<f64>),
    /// `inr_db = alpha · snr_db`.
    Alpha(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConferenceAxis {
    Cb(Vec<f64>),
    /// `cb = kappa · log2 snr`.
    Kappa(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum PhasePlan {
    Fixed([f64; 4]),
    /// `samples` uniform draws followed by [`ALIGNED`] and [`ANTI_ALIGNED`].
    Random { samples: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub snr_db: Vec<f64>,
    pub interference: InterferenceAxis,
    pub conference: ConferenceAxis,
    pub phases: PhasePlan,
    /// Added to every outer-bound value. Only for exercising the gap
    /// contract check; zero otherwise.
    pub outer_bound_offset: f64,
}

impl SweepSpec {
    /// The certification grid: 5 to 70 dB in 5 dB steps on both axes,
    /// `cb` in 0..=10 and 16 random phase draws per cell.
    pub fn default_grid(seed: u64) -> Self {
        let db: Vec<f64> = (1..=14).map(|i| 5.0 * i as f64).collect();
        Self {
            snr_db: db.clone(),
            interference: InterferenceAxis::InrDb(db),
            conference: ConferenceAxis::Cb((0..=10).map(f64::from).collect()),
            phases: PhasePlan::Random { samples: 16, seed },
            outer_bound_offset: 0.0,
        }
    }

    fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: &[f64]| {
            if v.is_empty() {
                return Err(invalid(format!("{name} list is empty")));
            }
            match v.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
                Some(x) => Err(invalid(format!("{name} must be > 0, got {x}"))),
                None => Ok(()),
            }
        };
        let nonneg = |name: &str, v: &[f64]| {
            if v.is_empty() {
                return Err(invalid(format!("{name} list is empty")));
            }
            match v.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
                Some(x) => Err(invalid(format!("{name} must be >= 0, got {x}"))),
                None => Ok(()),
            }
        };
        positive("snr_db", &self.snr_db)?;
        match &self.interference {
            InterferenceAxis::InrDb(v) => positive("inr_db", v)?,
            InterferenceAxis::Alpha(v) => positive("alpha", v)?,
        }
        match &self.conference {
            ConferenceAxis::Cb(v) => nonneg("cb", v)?,
            ConferenceAxis::Kappa(v) => nonneg("kappa", v)?,
        }
        if let PhasePlan::Random { samples: 0, .. } = self.phases {
            return Err(invalid("phase_samples must be positive"));
        }
        Ok(())
    }

    fn cells(&self) -> Vec<(f64, f64)> {
        let mut cells = Vec::new();
        for &s in &self.snr_db {
            match &self.interference {
                InterferenceAxis::InrDb(v) => cells.extend(v.iter().map(|&i| (s, i))),
                InterferenceAxis::Alpha(v) => cells.extend(v.iter().map(|&a| (s, round12(a * s)))),
            }
        }
        cells
    }

    fn cbs(&self, snr_db: f64) -> Vec<f64> {
        match &self.conference {
            ConferenceAxis::Cb(v) => v.clone(),
            ConferenceAxis::Kappa(v) => v.iter().map(|&k| k * db_to_linear(snr_db).log2()).collect(),
        }
    }

    fn phase_tuples(&self, cell: usize) -> Vec<(&'static str, [f64; 4])> {
        match self.phases {
            PhasePlan::Fixed(p) => vec![("fixed", p)],
            PhasePlan::Random { samples, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(cell as u64);
                let mut out: Vec<_> = (0..samples).map(|_| ("random", draw_phases(&mut rng))).collect();
                out.push(("aligned", ALIGNED));
                out.push(("anti_aligned", ANTI_ALIGNED));
                out
            }
        }
    }
}

/// One evaluated grid point. Field order is the CSV column order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRecord {
    pub grid_index: usize,
    pub snr_db: f64,
    pub inr_db: f64,
    pub cb: f64,
    pub phase_kind: &'static str,
    pub phase_index: usize,
    pub phi11: f64,
    pub phi12: f64,
    pub phi21: f64,
    pub phi22: f64,
    pub det_sq: f64,
    pub r_sym: f64,
    pub r_sym_binding: &'static str,
    pub c_bar: f64,
    pub c_bar_binding: &'static str,
    pub gap: f64,
    /// Symmetric rate of the full constraint system with the prescribed
    /// power split and distortion.
    pub r_t1: f64,
}

impl RunRecord {
    pub const COLUMNS: [&'static str; 17] = [
        "grid_index",
        "snr_db",
        "inr_db",
        "cb",
        "phase_kind",
        "phase_index",
        "phi11",
        "phi12",
        "phi21",
        "phi22",
        "det_sq",
        "r_sym",
        "r_sym_binding",
        "c_bar",
        "c_bar_binding",
        "gap",
        "r_t1",
    ];

    fn numbers(&self) -> [f64; 12] {
        [
            self.snr_db, self.inr_db, self.cb, self.phi11, self.phi12, self.phi21, self.phi22, self.det_sq,
            self.r_sym, self.c_bar, self.gap, self.r_t1,
        ]
    }

    pub fn dominance_margin(&self) -> f64 {
        self.r_t1 - self.r_sym
    }

    pub fn gap_ok(&self) -> bool {
        (GAP_MIN..=GAP_MAX).contains(&self.gap)
    }
}

/// Bounds at one point. `outer_bound_offset` is the test hook of
/// [`SweepSpec`].
pub fn evaluate_point(
    snr_db: f64,
    inr_db: f64,
    cb: f64,
    phases: [f64; 4],
    outer_bound_offset: f64,
) -> Result<RunRecord> {
    let params = SymmetricParams::from_db(snr_db, inr_db, cb)?;
    let gains = ChannelGains::from_symmetric(&params, phases)?;
    let r = achievable_sym_rate(&gains, cb)?;
    let c = outer_bound_sym(&gains, cb)?;
    let (split, quant) = symmetric_config(&gains)?;
    let t1 = max_symmetric_rate_t1(&theorem1_region(&gains, cb, cb, &split, &split, &quant)?)?;
    let c_bar = c.value + outer_bound_offset;
    let rec = RunRecord {
        grid_index: 0,
        snr_db,
        inr_db,
        cb,
        phase_kind: "fixed",
        phase_index: 0,
        phi11: phases[0],
        phi12: phases[1],
        phi21: phases[2],
        phi22: phases[3],
        det_sq: gains.det_sq(),
        r_sym: r.value,
        r_sym_binding: r.binding,
        c_bar,
        c_bar_binding: c.binding,
        gap: c_bar - r.value,
        r_t1: t1,
    };
    if let Some(x) = rec.numbers().iter().find(|x| !x.is_finite()) {
        return Err(invalid(format!(
            "non-finite value {x} at snr_db = {snr_db}, inr_db = {inr_db}, cb = {cb}, phases = {phases:?}"
        )));
    }
    Ok(rec)
}

/// Evaluates the whole grid in parallel; records come back in grid order
/// (snr, then inr, then cb, then phase tuple).
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<RunRecord>> {
    spec.validate()?;
    let cells = spec.cells();
    let per_cell: Vec<Result<Vec<RunRecord>>> = cells
        .par_iter()
        .enumerate()
        .map(|(c, &(snr_db, inr_db))| {
            let phases = spec.phase_tuples(c);
            let mut out = Vec::new();
            for cb in spec.cbs(snr_db) {
                for (k, &(kind, p)) in phases.iter().enumerate() {
                    let mut rec = evaluate_point(snr_db, inr_db, cb, p, spec.outer_bound_offset)?;
                    rec.phase_kind = kind;
                    rec.phase_index = k;
                    out.push(rec);
                }
            }
            Ok(out)
        })
        .collect();
    let mut records = Vec::new();
    for cell in per_cell {
        records.extend(cell?);
    }
    for (i, r) in records.iter_mut().enumerate() {
        r.grid_index = i;
    }
    Ok(records)
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepSummary {
    pub points: usize,
    pub max_gap: f64,
    pub argmax_gap: RunRecord,
    pub min_gap: f64,
    pub argmin_gap: RunRecord,
    /// `min(r_t1 - r_sym)` over the grid.
    pub min_dominance_margin: f64,
    pub argmin_dominance: RunRecord,
    pub gap_contract: [f64; 2],
    pub within_contract: bool,
    /// First record outside the contract, if any.
    pub violation: Option<RunRecord>,
}

pub fn summarize(records: &[RunRecord]) -> Result<SweepSummary> {
    let first = records.first().ok_or_else(|| invalid("empty sweep"))?;
    let pick = |better: &dyn Fn(&RunRecord, &RunRecord) -> bool| {
        records.iter().fold(first, |best, r| if better(r, best) { r } else { best }).clone()
    };
    let argmax = pick(&|a, b| a.gap > b.gap);
    let argmin = pick(&|a, b| a.gap < b.gap);
    let argdom = pick(&|a, b| a.dominance_margin() < b.dominance_margin());
    let violation = records.iter().find(|r| !r.gap_ok()).cloned();
    Ok(SweepSummary {
        points: records.len(),
        max_gap: argmax.gap,
        min_gap: argmin.gap,
        min_dominance_margin: argdom.dominance_margin(),
        argmax_gap: argmax,
        argmin_gap: argmin,
        argmin_dominance: argdom,
        gap_contract: [GAP_MIN, GAP_MAX],
        within_contract: violation.is_none(),
        violation,
    })
}

pub fn write_csv<W: std::io::Write>(records: &[RunRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if records.is_empty() {
        w.write_record(RunRecord::COLUMNS)?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("5:20:5").unwrap(), vec![5.0, 10.0, 15.0, 20.0]);
        assert_eq!(parse_range("0:1:0.25").unwrap().len(), 5);
        assert_eq!(parse_range("0:0.3:0.1").unwrap(), vec![0.0, 0.1, 0.2, 0.3]);
        assert_eq!(parse_range("7").unwrap(), vec![7.0]);
        assert!(parse_range("1:0:1").is_err());
        assert!(parse_range("0:1:0").is_err());
        assert!(parse_range("a").is_err());
        assert_eq!(parse_list("0.5,1:3:1").unwrap(), vec![0.5, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn spot_record() {
        let r = evaluate_point(20.0, 10.0, 1.0, ALIGNED, 0.0).unwrap();
        assert_relative_eq!(r.r_sym, 3.392317, epsilon = 1e-5);
        assert_relative_eq!(r.c_bar, 5.328471, epsilon = 1e-5);
        assert_relative_eq!(r.gap, r.c_bar - r.r_sym, epsilon = 1e-12);
        assert!(r.dominance_margin() > -1e-6);
    }

    #[test]
    fn grid_order_and_phase_streams() {
        let spec = SweepSpec {
            snr_db: vec![10.0, 20.0],
            interference: InterferenceAxis::InrDb(vec![5.0, 15.0]),
            conference: ConferenceAxis::Cb(vec![0.0, 2.0]),
            phases: PhasePlan::Random { samples: 3, seed: 9 },
            outer_bound_offset: 0.0,
        };
        let a = run_sweep(&spec).unwrap();
        assert_eq!(a.len(), 2 * 2 * 2 * 5);
        assert!(a.iter().enumerate().all(|(i, r)| r.grid_index == i));
        assert_eq!(a[3].phase_kind, "aligned");
        assert_eq!(a[4].phase_kind, "anti_aligned");
        // same draws for every cb in a cell
        assert_eq!(a[0].phi12, a[5].phi12);
        assert_ne!(a[0].phi12, a[10].phi12);
        assert_eq!(a, run_sweep(&spec).unwrap());
    }

    #[test]
    fn offset_hook_breaks_contract() {
        let spec = SweepSpec {
            snr_db: vec![20.0],
            interference: InterferenceAxis::InrDb(vec![10.0]),
            conference: ConferenceAxis::Cb(vec![1.0]),
            phases: PhasePlan::Fixed(ALIGNED),
            outer_bound_offset: 5.0,
        };
        let s = summarize(&run_sweep(&spec).unwrap()).unwrap();
        assert!(!s.within_contract);
        assert!(s.violation.is_some());
    }

    #[test]
    fn alpha_kappa_axes() {
        let spec = SweepSpec {
            snr_db: vec![30.0],
            interference: InterferenceAxis::Alpha(vec![0.5]),
            conference: ConferenceAxis::Kappa(vec![0.25]),
            phases: PhasePlan::Fixed(ALIGNED),
            outer_bound_offset: 0.0,
        };
        let r = &run_sweep(&spec).unwrap()[0];
        assert_eq!(r.inr_db, 15.0);
        assert_relative_eq!(r.cb, 0.25 * 1000f64.log2(), epsilon = 1e-12);
    }

    #[test]
    fn rejects_bad_specs() {
        let mut spec = SweepSpec::default_grid(1);
        spec.snr_db = vec![0.0];
        assert!(run_sweep(&spec).is_err());
        let mut spec = SweepSpec::default_grid(1);
        spec.phases = PhasePlan::Random { samples: 0, seed: 1 };
        assert!(run_sweep(&spec).is_err());
    }
}
