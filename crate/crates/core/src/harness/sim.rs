//! Monte Carlo FER runs and pruner equivalence audits.
//!
//! Frames are decoded in batches on a worker pool and folded back in frame
//! order, so results (early stop point included) do not depend on the
//! number of workers.

use rand::Rng;
use rayon::prelude::*;

use super::config::{PrunerKind, SimConfig};
use crate::channel::{frame_rng, transmit, ChannelConfig};
use crate::crossbar::{verify_proposition, CrossbarSpec, PropositionReport};
use crate::polar_code::PolarCode;
use crate::pruning::Pruner;
use crate::scl::{MetricKind, SclDecoder};
use crate::{Error, Result};

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "SCLLAB_THREADS";

const INFO_SALT: u64 = 0x1F0B_17C0_DE5E_ED00;

pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&t| t > 0)
}

fn worker_pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.or_else(threads_from_env).unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("worker pool: {e}")))
}

/// Uniform information bits of frame `frame`.
pub fn frame_info_bits(k: usize, seed: u64, frame: u64) -> Vec<u8> {
    let mut rng = frame_rng(seed ^ INFO_SALT, frame);
    (0..k).map(|_| rng.random_range(0..2u8)).collect()
}

/// Two-sided 95% Wilson score interval for `errors` out of `trials`.
pub fn wilson_interval(errors: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    const Z: f64 = 1.959_963_984_540_054;
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    // The bounds are exactly 0 and 1 at the extremes; avoid rounding residue.
    let lo = if errors == 0 {
        0.0
    } else {
        (center - half).max(0.0)
    };
    let hi = if errors == trials {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (lo, hi)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SnrPoint {
    pub snr_db: f64,
    pub frames: u64,
    pub frame_errors: u64,
    pub bit_errors: u64,
    pub fer: f64,
    pub ber: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

impl SnrPoint {
    fn new(snr_db: f64, frames: u64, frame_errors: u64, bit_errors: u64, k: usize) -> Self {
        let (ci_lo, ci_hi) = wilson_interval(frame_errors, frames);
        Self {
            snr_db,
            frames,
            frame_errors,
            bit_errors,
            fer: frame_errors as f64 / frames as f64,
            ber: bit_errors as f64 / (frames as f64 * k as f64),
            ci_lo,
            ci_hi,
        }
    }

    pub fn intervals_overlap(&self, other: &SnrPoint) -> bool {
        self.ci_lo <= other.ci_hi && other.ci_lo <= self.ci_hi
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub points: Vec<SnrPoint>,
}

/// Shared per-run decoding setup.
struct Bench {
    code: PolarCode,
    pruner: Box<dyn Pruner>,
    crossbar: CrossbarSpec,
    list_size: usize,
    metric: MetricKind,
}

impl Bench {
    fn new(cfg: &SimConfig, kind: PrunerKind) -> Result<Self> {
        Ok(Self {
            code: PolarCode::construct(cfg.n, cfg.k, cfg.z0)?,
            pruner: kind.build(cfg.list_size)?,
            crossbar: kind.crossbar(cfg.list_size)?,
            list_size: cfg.list_size,
            metric: if cfg.exact_metric {
                MetricKind::Exact
            } else {
                MetricKind::Approximate
            },
        })
    }

    fn decoder(&self) -> Result<SclDecoder<'_>> {
        Ok(SclDecoder::new(
            &self.code,
            self.list_size,
            self.pruner.as_ref(),
            &self.crossbar,
        )?
        .with_metric(self.metric)
        .without_audit())
    }
}

/// Frame `f` at one SNR: its info bits and channel LLRs.
fn frame_input(
    code: &PolarCode,
    channel: &ChannelConfig,
    frame: u64,
) -> Result<(Vec<u8>, Vec<f64>)> {
    let info = frame_info_bits(code.k(), channel.seed, frame);
    let llrs = transmit(&code.encode(&info)?, channel, frame);
    Ok((info, llrs))
}

fn bit_errors(a: &[u8], b: &[u8]) -> u64 {
    a.iter().zip(b).filter(|(x, y)| x != y).count() as u64
}

pub fn run_fer(cfg: &SimConfig) -> Result<SimResult> {
    run_fer_with_threads(cfg, None)
}

/// [`run_fer`] with an explicit worker count (`None` reads the environment).
pub fn run_fer_with_threads(cfg: &SimConfig, threads: Option<usize>) -> Result<SimResult> {
    cfg.validate()?;
    let bench = Bench::new(cfg, cfg.pruner)?;
    let pool = worker_pool(threads)?;
    let batch = (16 * pool.current_num_threads() as u64).max(64);
    let mut points = Vec::with_capacity(cfg.snr_points_db.len());

    for &snr in &cfg.snr_points_db {
        let channel = ChannelConfig::new(snr, bench.code.rate(), cfg.seed)?;
        let (mut frames, mut frame_errors, mut bit_errs) = (0u64, 0u64, 0u64);
        let mut next = 0u64;
        'point: while next < cfg.max_frames {
            let end = (next + batch).min(cfg.max_frames);
            let outcomes: Vec<Result<u64>> = pool.install(|| {
                (next..end)
                    .into_par_iter()
                    .map(|f| {
                        let (info, llrs) = frame_input(&bench.code, &channel, f)?;
                        let out = bench.decoder()?.decode(&llrs)?;
                        Ok(bit_errors(&info, &out.info_bits))
                    })
                    .collect()
            });
            for outcome in outcomes {
                let errs = outcome?;
                frames += 1;
                bit_errs += errs;
                frame_errors += u64::from(errs > 0);
                if frame_errors >= cfg.min_frame_errors {
                    break 'point;
                }
            }
            next = end;
        }
        points.push(SnrPoint::new(snr, frames, frame_errors, bit_errs, cfg.k));
    }
    Ok(SimResult { points })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalencePoint {
    pub snr_db: f64,
    pub frames: u64,
    /// Frames whose decoded vector or final metric differ between pruners.
    pub mismatches: u64,
    pub conventional_frame_errors: u64,
    pub proposed_frame_errors: u64,
}

impl EquivalencePoint {
    pub fn passed(&self) -> bool {
        self.mismatches == 0 && self.conventional_frame_errors == self.proposed_frame_errors
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub proposed: PrunerKind,
    pub points: Vec<EquivalencePoint>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.points.iter().all(EquivalencePoint::passed)
    }

    pub fn total_mismatches(&self) -> u64 {
        self.points.iter().map(|p| p.mismatches).sum()
    }
}

impl std::fmt::Display for EquivalenceReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "conventional vs {} (reduced crossbar)", self.proposed)?;
        writeln!(f, "snr_db,frames,mismatches,fer_conventional,fer_proposed")?;
        for p in &self.points {
            writeln!(
                f,
                "{},{},{},{},{}",
                p.snr_db,
                p.frames,
                p.mismatches,
                p.conventional_frame_errors as f64 / p.frames as f64,
                p.proposed_frame_errors as f64 / p.frames as f64
            )?;
        }
        write!(f, "result: {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Decodes `max_frames` frames per SNR point with the conventional pruner
/// (full crossbar) and with an index-sorting pruner (reduced crossbar), and
/// compares the outputs frame by frame. `cfg.pruner` is used as the
/// index-sorting side unless it is `conventional`.
pub fn run_equivalence(cfg: &SimConfig) -> Result<EquivalenceReport> {
    cfg.validate()?;
    let proposed_kind = if cfg.pruner.sorts_by_index() {
        cfg.pruner
    } else {
        PrunerKind::Proposed
    };
    let conventional = Bench::new(cfg, PrunerKind::Conventional)?;
    let proposed = Bench::new(cfg, proposed_kind)?;
    let pool = worker_pool(None)?;

    let mut points = Vec::new();
    for &snr in &cfg.snr_points_db {
        let channel = ChannelConfig::new(snr, conventional.code.rate(), cfg.seed)?;
        let per_frame: Vec<Result<(bool, bool, bool)>> = pool.install(|| {
            (0..cfg.max_frames)
                .into_par_iter()
                .map(|f| {
                    let (info, llrs) = frame_input(&conventional.code, &channel, f)?;
                    let a = conventional.decoder()?.decode(&llrs)?;
                    let b = proposed.decoder()?.decode(&llrs)?;
                    let same = a.decoded == b.decoded && a.metric.to_bits() == b.metric.to_bits();
                    Ok((!same, a.info_bits != info, b.info_bits != info))
                })
                .collect()
        });
        let mut point = EquivalencePoint {
            snr_db: snr,
            frames: cfg.max_frames,
            mismatches: 0,
            conventional_frame_errors: 0,
            proposed_frame_errors: 0,
        };
        for r in per_frame {
            let (mismatch, ea, eb) = r?;
            point.mismatches += u64::from(mismatch);
            point.conventional_frame_errors += u64::from(ea);
            point.proposed_frame_errors += u64::from(eb);
        }
        points.push(point);
    }
    Ok(EquivalenceReport {
        proposed: proposed_kind,
        points,
    })
}

pub fn run_proposition_audit(list_sizes: &[usize]) -> Result<Vec<PropositionReport>> {
    list_sizes.iter().map(|&l| verify_proposition(l)).collect()
}
