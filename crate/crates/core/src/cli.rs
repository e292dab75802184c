//! The `icrc` command line.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::error::{invalid, Result};
use crate::gdof::{gdof_curve, gdof_numeric, GdofPoint, NumericPoint};
use crate::ldc::{
    brute_force_search, check_decodable, fig5_config, ldc_sym_capacity_formula, scenario_compare, simulate,
    EncoderClass, LdcConfig, ScenarioMode, SchemeFile, SearchOptions,
};
use crate::sweep::{
    parse_list, run_sweep, summarize, write_csv, ConferenceAxis, InterferenceAxis, PhasePlan, SweepSpec,
};

#[derive(Clone, Debug, PartialEq)]
pub struct FloatList(pub Vec<f64>);

impl FromStr for FloatList {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        parse_list(s).map(FloatList).map_err(|e| e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Phases(pub [f64; 4]);

impl FromStr for Phases {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let v: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|_| format!("`{p}` is not a number")))
            .collect::<std::result::Result<_, _>>()?;
        match <[f64; 4]>::try_from(v) {
            Ok(p) if p.iter().all(|x| x.is_finite()) => Ok(Phases(p)),
            _ => Err("expected four finite phases phi11,phi12,phi21,phi22 in radians".into()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "icrc", version, about = "Interference channel with conferencing receivers: bounds, gdof and LDC schemes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Achievable rate, outer bound and gap at the given points.
    Rates(RatesArgs),
    /// Checks the gap contract over a grid and prints a JSON summary.
    GapSweep(GapSweepArgs),
    /// Generalized degrees of freedom curves.
    Gdof(GdofArgs),
    /// Linear deterministic channel schemes.
    #[command(subcommand)]
    Ldc(LdcCommand),
}

#[derive(Debug, Args)]
pub struct PhaseArgs {
    /// Fixed phases phi11,phi12,phi21,phi22 in radians.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "phase_seed")]
    pub phases: Option<Phases>,
    /// Draw random phases from this seed (plus the aligned and anti-aligned
    /// extremes) instead of fixed ones.
    #[arg(long)]
    pub phase_seed: Option<u64>,
    #[arg(long, default_value_t = 16)]
    pub phase_samples: usize,
}

#[derive(Debug, Args)]
pub struct RatesArgs {
    /// SNR in dB: value, list or start:stop:step.
    #[arg(long)]
    pub snr_db: FloatList,
    #[arg(long)]
    pub inr_db: FloatList,
    /// Conference capacity per direction in bits.
    #[arg(long)]
    pub cb: FloatList,
    #[command(flatten)]
    pub phase: PhaseArgs,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GapSweepArgs {
    #[arg(long, default_value = "5:70:5")]
    pub snr_db: FloatList,
    /// INR in dB, 5:70:5 unless --alpha is given.
    #[arg(long, conflicts_with = "alpha")]
    pub inr_db: Option<FloatList>,
    /// Interference exponent: inr_db = alpha * snr_db.
    #[arg(long)]
    pub alpha: Option<FloatList>,
    /// Conference capacity in bits, 0:10:1 unless --kappa is given.
    #[arg(long, conflicts_with = "kappa")]
    pub cb: Option<FloatList>,
    /// Conference exponent: cb = kappa * log2 snr.
    #[arg(long)]
    pub kappa: Option<FloatList>,
    /// Fixed phases instead of random draws.
    #[arg(long, allow_hyphen_values = true)]
    pub phases: Option<Phases>,
    #[arg(long, default_value_t = 16)]
    pub phase_samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Full per-point CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, hide = true, default_value_t = 0.0, allow_hyphen_values = true)]
    pub corrupt_outer_bound: f64,
}

#[derive(Debug, Args)]
pub struct GdofArgs {
    #[arg(long)]
    pub alpha: FloatList,
    #[arg(long, default_value = "0:1:0.05")]
    pub kappa: FloatList,
    /// Also evaluate the normalized bounds at these SNRs (dB).
    #[arg(long)]
    pub numeric: Option<FloatList>,
    #[arg(long, default_value_t = 64)]
    pub phase_samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write one two-column `kappa d` file per alpha into this directory.
    #[arg(long)]
    pub plot_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum LdcCommand {
    /// Simulates a scheme file.
    Run {
        fixture: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive search for the best sum and symmetric rates.
    Search {
        #[command(flatten)]
        config: LdcConfigArgs,
        #[arg(long, value_enum, default_value = "linear")]
        encoders: EncoderArg,
        #[arg(long)]
        max_r1: Option<usize>,
        #[arg(long)]
        max_r2: Option<usize>,
        /// Write the best-sum witness as a scheme file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Best R1 when receiver 2 quantizes or decodes before forwarding.
    /// Without a configuration the reconstructed asymmetric example is used.
    Scenario {
        #[command(flatten)]
        config: LdcConfigArgs,
        #[arg(long, value_enum)]
        mode: ScenarioMode,
        /// Write the witness as a scheme file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum EncoderArg {
    Linear,
    LevelActivation,
}

#[derive(Debug, Args)]
pub struct LdcConfigArgs {
    /// Direct levels of a symmetric channel.
    #[arg(long, conflicts_with_all = ["n11", "n12", "n21", "n22", "k12", "k21"], requires_all = ["m", "k"])]
    pub n: Option<usize>,
    /// Cross levels of a symmetric channel.
    #[arg(long, requires = "n")]
    pub m: Option<usize>,
    /// Conference bits per direction of a symmetric channel.
    #[arg(long, requires = "n")]
    pub k: Option<usize>,
    #[arg(long, requires_all = ["n12", "n21", "n22"])]
    pub n11: Option<usize>,
    #[arg(long, requires = "n11")]
    pub n12: Option<usize>,
    #[arg(long, requires = "n11")]
    pub n21: Option<usize>,
    #[arg(long, requires = "n11")]
    pub n22: Option<usize>,
    #[arg(long, requires = "n11")]
    pub k12: Option<usize>,
    #[arg(long, requires = "n11")]
    pub k21: Option<usize>,
}

impl LdcConfigArgs {
    fn resolve(&self) -> Result<Option<LdcConfig>> {
        if let (Some(n), Some(m), Some(k)) = (self.n, self.m, self.k) {
            return LdcConfig::symmetric(n, m, k).map(Some);
        }
        match (self.n11, self.n12, self.n21, self.n22) {
            (Some(n11), Some(n12), Some(n21), Some(n22)) => LdcConfig::new(
                n11,
                n12,
                n21,
                n22,
                self.k12.unwrap_or(0),
                self.k21.unwrap_or(0),
            )
            .map(Some),
            _ => Ok(None),
        }
    }
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, bytes)?,
        None => std::io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut v = serde_json::to_vec_pretty(value)?;
    v.push(b'\n');
    Ok(v)
}

/// Runs a parsed command; returns the process exit code.
pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Rates(a) => cmd_rates(a),
        Command::GapSweep(a) => cmd_gap_sweep(a),
        Command::Gdof(a) => cmd_gdof(a),
        Command::Ldc(c) => cmd_ldc(c),
    }
}

fn cmd_rates(a: RatesArgs) -> Result<i32> {
    let phases = match (a.phase.phases, a.phase.phase_seed) {
        (_, Some(seed)) => PhasePlan::Random {
            samples: a.phase.phase_samples,
            seed,
        },
        (Some(p), None) => PhasePlan::Fixed(p.0),
        (None, None) => PhasePlan::Fixed([0.0; 4]),
    };
    let spec = SweepSpec {
        snr_db: a.snr_db.0,
        interference: InterferenceAxis::InrDb(a.inr_db.0),
        conference: ConferenceAxis::Cb(a.cb.0),
        phases,
        outer_bound_offset: 0.0,
    };
    let records = run_sweep(&spec)?;
    let bytes = match a.format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(&records, &mut buf)?;
            buf
        }
        Format::Json => json_bytes(&records)?,
    };
    emit(a.out.as_deref(), &bytes)?;
    Ok(0)
}

fn cmd_gap_sweep(a: GapSweepArgs) -> Result<i32> {
    let default_db = || (1..=14).map(|i| 5.0 * i as f64).collect::<Vec<_>>();
    let spec = SweepSpec {
        snr_db: a.snr_db.0,
        interference: match (a.inr_db, a.alpha) {
            (_, Some(alpha)) => InterferenceAxis::Alpha(alpha.0),
            (Some(inr), None) => InterferenceAxis::InrDb(inr.0),
            (None, None) => InterferenceAxis::InrDb(default_db()),
        },
        conference: match (a.cb, a.kappa) {
            (_, Some(kappa)) => ConferenceAxis::Kappa(kappa.0),
            (Some(cb), None) => ConferenceAxis::Cb(cb.0),
            (None, None) => ConferenceAxis::Cb((0..=10).map(f64::from).collect()),
        },
        phases: match a.phases {
            Some(p) => PhasePlan::Fixed(p.0),
            None => PhasePlan::Random {
                samples: a.phase_samples,
                seed: a.seed,
            },
        },
        outer_bound_offset: a.corrupt_outer_bound,
    };
    let records = run_sweep(&spec)?;
    if let Some(path) = &a.out {
        write_csv(&records, std::fs::File::create(path)?)?;
    }
    let summary = summarize(&records)?;
    emit(None, &json_bytes(&summary)?)?;
    if let Some(v) = &summary.violation {
        eprintln!(
            "gap contract violated: gap = {} at snr_db = {}, inr_db = {}, cb = {}",
            v.gap, v.snr_db, v.inr_db, v.cb
        );
        return Ok(1);
    }
    Ok(0)
}

#[derive(Serialize)]
struct GdofRow {
    alpha: f64,
    kappa: f64,
    d: f64,
    binding: &'static str,
    kappa_star: f64,
    d_full: f64,
    phase_caveat: bool,
    snr_db: Option<f64>,
    r_lo: Option<f64>,
    r_hi: Option<f64>,
}

impl GdofRow {
    fn new(p: &GdofPoint, kappa_star: f64, d_full: f64, n: Option<&NumericPoint>) -> Self {
        Self {
            alpha: p.alpha,
            kappa: p.kappa,
            d: p.d,
            binding: p.binding.as_str(),
            kappa_star,
            d_full,
            phase_caveat: p.phase_sensitive,
            snr_db: n.map(|n| n.snr_db),
            r_lo: n.map(|n| n.r_lo),
            r_hi: n.map(|n| n.r_hi),
        }
    }
}

fn cmd_gdof(a: GdofArgs) -> Result<i32> {
    let mut rows = Vec::new();
    let mut curves = Vec::new();
    for &alpha in &a.alpha.0 {
        let curve = gdof_curve(alpha, &a.kappa.0)?;
        for p in &curve.points {
            match &a.numeric {
                None => rows.push(GdofRow::new(p, curve.kappa_star, curve.d_full, None)),
                Some(snrs) => {
                    for n in gdof_numeric(alpha, p.kappa, &snrs.0, a.phase_samples, a.seed)? {
                        rows.push(GdofRow::new(p, curve.kappa_star, curve.d_full, Some(&n)));
                    }
                }
            }
        }
        curves.push(curve);
    }
    if let Some(dir) = &a.plot_dir {
        std::fs::create_dir_all(dir)?;
        for c in &curves {
            let mut text = String::from("# kappa d\n");
            for p in &c.points {
                text.push_str(&format!("{} {}\n", p.kappa, p.d));
            }
            std::fs::write(dir.join(format!("gdof_alpha_{}.dat", c.alpha)), text)?;
        }
    }
    let bytes = match a.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &rows {
                w.serialize(r)?;
            }
            w.into_inner().map_err(|e| invalid(e.to_string()))?
        }
        Format::Json => json_bytes(&rows)?,
    };
    emit(a.out.as_deref(), &bytes)?;
    Ok(0)
}

fn cmd_ldc(c: LdcCommand) -> Result<i32> {
    match c {
        LdcCommand::Run {
            fixture,
            trials,
            seed,
            out,
        } => {
            let file = SchemeFile::load(&fixture)?;
            let scheme = file.to_scheme()?;
            let report = simulate(&scheme, trials, seed);
            let value = json!({
                "fixture": fixture.file_name().map(|f| f.to_string_lossy().into_owned()),
                "description": file.description,
                "config": scheme.config,
                "rates": [scheme.r1(), scheme.r2()],
                "decodable": check_decodable(&scheme),
                "report": report,
            });
            emit(out.as_deref(), &json_bytes(&value)?)?;
            Ok(0)
        }
        LdcCommand::Search {
            config,
            encoders,
            max_r1,
            max_r2,
            out,
        } => {
            let config = config
                .resolve()?
                .ok_or_else(|| invalid("give --n, --m, --k or --n11 .. --n22"))?;
            let options = SearchOptions {
                encoders: match encoders {
                    EncoderArg::Linear => EncoderClass::Linear,
                    EncoderArg::LevelActivation => EncoderClass::LevelActivation,
                },
                max_r1: max_r1.unwrap_or(usize::MAX),
                max_r2: max_r2.unwrap_or(usize::MAX),
            };
            let result = brute_force_search(&config, options)?;
            let formula = (config.n11 == config.n22
                && config.n12 == config.n21
                && config.k12 == config.k21
                && config.n11 > 0)
                .then(|| ldc_sym_capacity_formula(config.n11, config.n12, config.k12))
                .transpose()?;
            if let Some(path) = &out {
                let mut file = result.witness.to_file();
                file.description = Some(format!("search witness, sum rate {}", result.best_sum));
                std::fs::write(path, json_bytes(&file)?)?;
            }
            let value = json!({
                "config": config,
                "encoders": options.encoders,
                "best_sum": result.best_sum,
                "best_sym": result.best_sym,
                "formula_sym": formula.map(|f| f.0),
                "phase_caveat": formula.map(|f| f.1),
                "achievable": result.achievable().collect::<Vec<_>>(),
                "symmetric_mix": result.symmetric_mix.iter().map(|s| json!({
                    "rates": s.rates,
                    "weight": s.weight,
                    "scheme": s.scheme.to_file(),
                })).collect::<Vec<_>>(),
                "witness": result.witness.to_file(),
                "candidates": result.candidates.to_string(),
            });
            emit(None, &json_bytes(&value)?)?;
            Ok(0)
        }
        LdcCommand::Scenario { config, mode, out } => {
            let config = config.resolve()?.unwrap_or_else(fig5_config);
            let r = scenario_compare(&config, mode)?;
            if let Some(path) = &out {
                let mut file = r.witness.to_file();
                file.description = Some(format!("scenario witness ({mode:?})"));
                std::fs::write(path, json_bytes(&file)?)?;
            }
            let value = json!({
                "config": config,
                "mode": mode,
                "r1": r.r1,
                "r2": r.r2,
                "forwardable": r.forwardable,
                "witness": r.witness.to_file(),
            });
            emit(None, &json_bytes(&value)?)?;
            Ok(0)
        }
    }
}
