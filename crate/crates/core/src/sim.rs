//! Complexity accounting and Monte-Carlo BLER sweeps.

use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{add_noise, llr_from_variance, modulate, ChannelConfig};
use crate::crc::CrcSpec;
use crate::decoder::{rscl_decode_with, sc_decode_with, BoxplusMode, DecodeStats, DecoderOptions, LVector};
use crate::error::{Error, Result};
use crate::multicrc::{multicrc_encode, multicrc_rscl_decode_with, LayoutSpec, MultiCrcLayout};
use crate::polar::{kron_encode_in_place, Construction, PolarCode};

/// Environment variable capping the number of simulation worker threads.
pub const THREADS_ENV: &str = "POLARLAB_THREADS";

pub const CSV_HEADER: &str = "snr_db,trials,block_errors,bler,mean_llr_updates,peak_space_units";

/// Worst-case memory and work of a (R-)SCL decoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityReport {
    /// `Σ L_m · 2^(n-m)` LLR slots.
    pub space_units: u64,
    /// `2^n · Σ L_m` LLR updates.
    pub time_units: u64,
}

pub fn complexity_report(n: usize, lvec: &LVector) -> Result<ComplexityReport> {
    lvec.check_exponent(n)?;
    let space_units = (1..=n).map(|m| (lvec.limit(m) as u64) << (n - m)).sum();
    let time_units = (1u64 << n) * lvec.as_slice().iter().map(|&l| l as u64).sum::<u64>();
    Ok(ComplexityReport {
        space_units,
        time_units,
    })
}

/// The list-size vectors `L1` to `L9` of the reference experiments.
pub fn named_lvector(name: &str) -> Option<LVector> {
    let v: Vec<usize> = match name {
        "L1" => vec![22, 24, 26, 28, 30, 32, 32, 32, 32, 32, 32],
        "L2" => vec![11, 12, 13, 14, 15, 16, 16, 16, 16, 16, 16],
        "L3" => vec![5, 6, 7, 7, 7, 8, 8, 8, 8, 8, 8],
        "L4" => vec![8, 16, 32, 32, 32, 32, 32, 32, 32, 32, 32],
        "L5" => vec![4, 8, 16, 16, 16, 16, 16, 16, 16, 16, 16],
        "L6" => vec![2, 4, 8, 8, 8, 8, 8, 8, 8, 8, 8],
        "L7" => [vec![1; 3], vec![32; 11]].concat(),
        "L8" => [vec![1; 3], vec![16; 11]].concat(),
        "L9" => [vec![1; 3], vec![8; 11]].concat(),
        _ => return None,
    };
    Some(LVector::new(v).expect("valid built-in L-vector"))
}

/// CRC length vectors of the reference multi-CRC experiments: `R1` is the
/// light `[2, 2, 2, 10]` layout, `R2` the `(16384, 8192)` layout with eight
/// CRC-10s and `R3` the heavy `[10, 10, 10, 10]` layout.
pub fn named_r_vector(name: &str) -> Option<Vec<usize>> {
    match name {
        "R1" => Some(vec![2, 2, 2, 10]),
        "R2" => Some(vec![10; 8]),
        "R3" => Some(vec![10; 4]),
        _ => None,
    }
}

/// An L-vector given inline or by name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LVectorSpec {
    Explicit(Vec<usize>),
    /// A name such as `L3`, or the compact `5,6,7x3,8x6` form.
    Text(String),
}

impl LVectorSpec {
    pub fn resolve(&self) -> Result<LVector> {
        match self {
            LVectorSpec::Explicit(v) => LVector::new(v.clone()),
            LVectorSpec::Text(s) => match named_lvector(s.trim()) {
                Some(lv) => Ok(lv),
                None => s.parse(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RVectorSpec {
    Explicit(Vec<usize>),
    Named(String),
}

impl RVectorSpec {
    pub fn resolve(&self) -> Result<Vec<usize>> {
        match self {
            RVectorSpec::Explicit(v) => Ok(v.clone()),
            RVectorSpec::Named(s) => {
                named_r_vector(s.trim()).ok_or_else(|| Error::Config(format!("unknown r-vector `{s}`")))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiCrcSpec {
    pub s: usize,
    pub r_vec: RVectorSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crc_polynomials: Option<Vec<String>>,
}

impl MultiCrcSpec {
    pub fn layout_spec(&self) -> Result<LayoutSpec> {
        Ok(LayoutSpec {
            s: self.s,
            r_vec: self.r_vec.resolve()?,
            crc_polynomials: self.crc_polynomials.clone(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrcMode {
    #[default]
    None,
    Single(CrcSpec),
    Multi(MultiCrcSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecoderSpec {
    Sc,
    Scl { list_size: usize },
    Rscl { lvec: LVectorSpec },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeSpec {
    pub n: usize,
    /// Message bits, CRC bits excluded.
    pub k: usize,
    #[serde(default)]
    pub construction: Construction,
}

fn default_max_block_errors() -> u64 {
    100
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub code: CodeSpec,
    #[serde(default)]
    pub crc: CrcMode,
    pub decoder: DecoderSpec,
    pub snr_points_db: Vec<f64>,
    pub max_trials: u64,
    #[serde(default = "default_max_block_errors")]
    pub max_block_errors: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub boxplus: BoxplusMode,
}

impl SimConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

#[derive(Debug, Clone)]
enum PreparedCrc {
    None,
    Single(CrcSpec),
    Multi(MultiCrcLayout),
}

#[derive(Debug, Clone)]
enum PreparedDecoder {
    Sc,
    List(LVector),
}

/// A validated configuration, ready to run trials.
#[derive(Debug, Clone)]
pub struct Simulation {
    code: PolarCode,
    crc: PreparedCrc,
    decoder: PreparedDecoder,
    message_len: usize,
    opts: DecoderOptions,
    config: SimConfig,
}

/// Result of a single trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOutcome {
    pub block_error: bool,
    pub llr_updates: u64,
    pub peak_space_units: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnrPoint {
    pub snr_db: f64,
    pub trials: u64,
    pub block_errors: u64,
    pub bler: f64,
    pub mean_llr_updates: f64,
    pub peak_space_units: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub points: Vec<SnrPoint>,
}

impl SimResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for p in &self.points {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                p.snr_db, p.trials, p.block_errors, p.bler, p.mean_llr_updates, p.peak_space_units
            )
            .expect("write to string");
        }
        out
    }
}

impl Simulation {
    pub fn new(config: &SimConfig) -> Result<Self> {
        Self::build(config, None)
    }

    /// Like [`Simulation::new`], but with a fixed information set instead of
    /// the configured construction. `code.n` must match and the set must hold
    /// exactly the message and CRC bits.
    pub fn with_code(config: &SimConfig, code: PolarCode) -> Result<Self> {
        Self::build(config, Some(code))
    }

    fn build(config: &SimConfig, fixed: Option<PolarCode>) -> Result<Self> {
        let cfg_err = |e: Error| match e {
            Error::Config(_) => e,
            other => Error::Config(other.to_string()),
        };
        if config.max_trials == 0 {
            return Err(Error::Config("max_trials must be at least 1".into()));
        }
        if config.snr_points_db.is_empty() {
            return Err(Error::Config("snr_points_db must not be empty".into()));
        }
        if let Some(bad) = config.snr_points_db.iter().find(|s| !s.is_finite()) {
            return Err(Error::Config(format!("SNR point {bad} is not finite")));
        }
        let n = config.code.n;
        let k = config.code.k;
        if k == 0 {
            return Err(Error::Config("message length k must be positive".into()));
        }
        let crc_bits = match &config.crc {
            CrcMode::None => 0,
            CrcMode::Single(spec) => spec.degree(),
            CrcMode::Multi(m) => m.layout_spec().map_err(cfg_err)?.total_crc_bits(),
        };
        let code = match fixed {
            Some(code) => {
                if code.exponent() != n || code.dimension() != k + crc_bits {
                    return Err(Error::Config(format!(
                        "information set has n={} and {} bits, expected n={n} and {}",
                        code.exponent(),
                        code.dimension(),
                        k + crc_bits
                    )));
                }
                code
            }
            None => PolarCode::construct(n, k + crc_bits, &config.code.construction).map_err(cfg_err)?,
        };
        let crc = match &config.crc {
            CrcMode::None => PreparedCrc::None,
            CrcMode::Single(spec) => PreparedCrc::Single(spec.clone()),
            CrcMode::Multi(m) => PreparedCrc::Multi(m.layout_spec().and_then(|l| l.build(&code)).map_err(cfg_err)?),
        };
        let decoder = match &config.decoder {
            DecoderSpec::Sc => PreparedDecoder::Sc,
            DecoderSpec::Scl { list_size } => PreparedDecoder::List(LVector::uniform(n, *list_size).map_err(cfg_err)?),
            DecoderSpec::Rscl { lvec } => PreparedDecoder::List(lvec.resolve().map_err(cfg_err)?),
        };
        if let PreparedDecoder::List(lv) = &decoder {
            lv.check_exponent(n).map_err(cfg_err)?;
        }
        if let PreparedCrc::Multi(layout) = &crc {
            if layout.message_len() != k {
                return Err(Error::Config(format!(
                    "layout carries {} message bits, expected {k}",
                    layout.message_len()
                )));
            }
        }
        Ok(Self {
            code,
            crc,
            decoder,
            message_len: k,
            opts: DecoderOptions {
                boxplus: config.boxplus,
                ..Default::default()
            },
            config: config.clone(),
        })
    }

    pub fn code(&self) -> &PolarCode {
        &self.code
    }

    /// Message bits over block length; CRC bits count as overhead.
    pub fn rate(&self) -> f64 {
        self.message_len as f64 / self.code.len() as f64
    }

    fn point_seed(&self, point: usize) -> u64 {
        self.config
            .seed
            .wrapping_add((point as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }

    /// Runs trial `trial` at SNR point `point`; deterministic in both.
    pub fn run_trial(&self, point: usize, trial: u64) -> TrialOutcome {
        let snr = self.config.snr_points_db[point];
        let channel = ChannelConfig::new(snr, self.rate(), self.point_seed(point)).expect("validated");
        let mut rng = channel.trial_rng(trial);
        let message: Vec<u8> = (0..self.message_len).map(|_| rng.random_range(0..2u8)).collect();
        let x = self.encode(&message).expect("validated dimensions");
        let variance = channel.noise_variance();
        let received = add_noise(&modulate(&x), variance, &mut rng);
        let llrs = llr_from_variance(&received, variance);
        let (decoded, stats) = self.decode(&llrs).expect("validated dimensions");
        TrialOutcome {
            block_error: decoded != message,
            llr_updates: stats.llr_updates,
            peak_space_units: stats.peak_space_units(),
        }
    }

    pub fn message_len(&self) -> usize {
        self.message_len
    }

    /// Attaches the configured CRCs to `message` and polar-encodes it.
    pub fn encode(&self, message: &[u8]) -> Result<Vec<u8>> {
        if message.len() != self.message_len {
            return Err(Error::dimension(self.message_len, message.len()));
        }
        let mut u = match &self.crc {
            PreparedCrc::None => self.code.map_payload(message),
            PreparedCrc::Single(spec) => self.code.map_payload(&spec.append(message)),
            PreparedCrc::Multi(layout) => multicrc_encode(message, layout, &self.code),
        }?;
        kron_encode_in_place(&mut u);
        Ok(u)
    }

    /// Decodes channel LLRs into a message estimate.
    pub fn decode(&self, llrs: &[f64]) -> Result<(Vec<u8>, DecodeStats)> {
        if llrs.len() != self.code.len() {
            return Err(Error::dimension(self.code.len(), llrs.len()));
        }
        let crc_bits = match &self.crc {
            PreparedCrc::Single(spec) => spec.degree(),
            _ => 0,
        };
        match (&self.decoder, &self.crc) {
            (PreparedDecoder::Sc, PreparedCrc::Multi(layout)) => {
                let out = sc_decode_with(llrs, &self.code, self.opts.boxplus).expect("validated");
                Ok((layout.extract_message(&out.decisions), out.stats))
            }
            (PreparedDecoder::Sc, _) => {
                let out = sc_decode_with(llrs, &self.code, self.opts.boxplus).expect("validated");
                let mut payload = self.code.extract_payload(&out.decisions);
                payload.truncate(self.message_len);
                debug_assert_eq!(payload.len() + crc_bits, self.code.dimension());
                Ok((payload, out.stats))
            }
            (PreparedDecoder::List(lv), PreparedCrc::Multi(layout)) => {
                let out = multicrc_rscl_decode_with(llrs, &self.code, layout, lv, &self.opts).expect("validated");
                Ok((out.message, out.stats))
            }
            (PreparedDecoder::List(lv), crc) => {
                let spec = match crc {
                    PreparedCrc::Single(s) => Some(s),
                    _ => None,
                };
                let out = rscl_decode_with(llrs, &self.code, lv, spec, &self.opts).expect("validated");
                Ok((out.message(&self.code, crc_bits), out.stats))
            }
        }
    }
}

/// Worker count from `POLARLAB_THREADS`, if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&t| t > 0)
}

const BATCH: u64 = 256;

/// Runs every SNR point of `config` until `max_trials` trials or
/// `max_block_errors` block errors, whichever comes first.
///
/// Trials are seeded by `(seed, point, trial index)` and accumulated in trial
/// order, so the result does not depend on the number of workers.
pub fn run_bler_sweep(config: &SimConfig) -> Result<SimResult> {
    run_bler_sweep_with_threads(config, threads_from_env())
}

pub fn run_bler_sweep_with_threads(config: &SimConfig, threads: Option<usize>) -> Result<SimResult> {
    let sim = Simulation::new(config)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| Error::Config(e.to_string()))?;
    let points = pool.install(|| {
        (0..config.snr_points_db.len())
            .map(|p| sweep_point(&sim, p))
            .collect::<Vec<_>>()
    });
    Ok(SimResult { points })
}

fn sweep_point(sim: &Simulation, point: usize) -> SnrPoint {
    let cfg = &sim.config;
    let (mut trials, mut errors, mut updates, mut peak) = (0u64, 0u64, 0u64, 0u64);
    'outer: while trials < cfg.max_trials && errors < cfg.max_block_errors {
        let end = (trials + BATCH).min(cfg.max_trials);
        let batch: Vec<TrialOutcome> = (trials..end).into_par_iter().map(|t| sim.run_trial(point, t)).collect();
        for out in batch {
            trials += 1;
            errors += out.block_error as u64;
            updates += out.llr_updates;
            peak = peak.max(out.peak_space_units);
            if errors >= cfg.max_block_errors {
                break 'outer;
            }
        }
    }
    SnrPoint {
        snr_db: cfg.snr_points_db[point],
        trials,
        block_errors: errors,
        bler: errors as f64 / trials as f64,
        mean_llr_updates: updates as f64 / trials as f64,
        peak_space_units: peak,
    }
}

/// 95% Wilson score interval of a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    const Z: f64 = 1.959_963_984_540_054;
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let denom = 1.0 + Z * Z / n;
    let centre = (p + Z * Z / (2.0 * n)) / denom;
    let half = Z * (p * (1.0 - p) / n + Z * Z / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if successes == trials {
        1.0
    } else {
        (centre + half).min(1.0)
    };
    (lo, hi)
}
