//! Exhaustive scans of `Δₜ(x)` over element ranges.
//!
//! The range is cut into blocks of [`BLOCK_SIZE`] consecutive elements. Blocks
//! are evaluated in parallel and folded back in block order, so the report (and
//! every checkpoint) depends only on the configuration, never on the number of
//! workers. Checkpoints are written between batches of `checkpoint_every`
//! blocks and a scan resumes from the last one it finds.

mod checkpoint;
mod output;

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::norm::{IntegerNorm, NormParameter};
use crate::perspicacity::{Certificate, CertificateStatus};
use crate::semigroup::{unimodal_order, GapRecord, NumericalSemigroup, SemigroupError};

pub use checkpoint::Checkpoint;
pub use output::{write_gaps_csv, write_histogram_csv};

/// Elements per work unit.
pub const BLOCK_SIZE: u64 = 4096;
/// Gaps this close to the target interval are reported as violations.
pub const TARGET_SLACK: f64 = 1e-9;
/// Default number of blocks between checkpoints.
pub const DEFAULT_CHECKPOINT_EVERY: u64 = 64;

// Cap on cached powers k^t (32 MiB); larger coordinates are evaluated directly.
const POWER_TABLE_CAP: u64 = 1 << 22;

#[derive(Debug, Error)]
pub enum ScanError {
    #[error("invalid scan configuration: {0}")]
    InvalidConfig(String),
    #[error("checkpoint {path} is corrupt (checksum mismatch)")]
    ChecksumMismatch { path: PathBuf },
    #[error("checkpoint {path} belongs to a different scan (config hash {found}, expected {expected})")]
    ConfigMismatch { path: PathBuf, expected: String, found: String },
    #[error("certificate must be unverified before verification (status is {0:?})")]
    AlreadyVerified(CertificateStatus),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub semigroup: NumericalSemigroup,
    pub t: NormParameter,
    /// Inclusive range; `x_lo > x_hi` is an empty scan.
    pub x_lo: u64,
    pub x_hi: u64,
    /// Open interval whose intersection with the gaps is reported.
    pub target: Option<(f64, f64)>,
    pub bin_width: Option<f64>,
    /// Blocks per checkpoint batch.
    pub checkpoint_every: u64,
    pub workers: usize,
}

impl ScanConfig {
    pub fn new(semigroup: NumericalSemigroup, t: NormParameter, x_lo: u64, x_hi: u64) -> Self {
        Self {
            semigroup,
            t,
            x_lo,
            x_hi,
            target: None,
            bin_width: None,
            checkpoint_every: DEFAULT_CHECKPOINT_EVERY,
            workers: 1,
        }
    }

    pub fn with_target(mut self, lo: f64, hi: f64) -> Self {
        self.target = Some((lo, hi));
        self
    }

    pub fn with_bin_width(mut self, w: f64) -> Self {
        self.bin_width = Some(w);
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_checkpoint_every(mut self, blocks: u64) -> Self {
        self.checkpoint_every = blocks;
        self
    }

    pub fn validate(&self) -> Result<(), ScanError> {
        if let Some((lo, hi)) = self.target {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(ScanError::InvalidConfig(format!("target interval ({lo}, {hi}) is empty")));
            }
        }
        if let Some(w) = self.bin_width {
            if !(w.is_finite() && w > 0.0) {
                return Err(ScanError::InvalidConfig(format!("bin width must be positive (got {w})")));
            }
        }
        if self.workers == 0 {
            return Err(ScanError::InvalidConfig("worker count must be positive".into()));
        }
        if self.checkpoint_every == 0 {
            return Err(ScanError::InvalidConfig("checkpoint_every must be positive".into()));
        }
        Ok(())
    }

    fn block_count(&self) -> u64 {
        if self.x_lo > self.x_hi {
            0
        } else {
            (self.x_hi - self.x_lo) / BLOCK_SIZE + 1
        }
    }

    fn bin_count(&self) -> Option<usize> {
        self.bin_width.map(|w| ((self.semigroup.a2() as f64 / w).ceil() as usize).max(1))
    }

    /// Identifies the scan's results: everything except worker count and
    /// checkpoint spacing.
    pub fn hash(&self) -> String {
        let bits = |v: f64| format!("{:016x}", v.to_bits());
        let t = match self.t {
            NormParameter::One => "one".to_string(),
            NormParameter::Infinity => "inf".to_string(),
            NormParameter::Finite(t) => bits(t),
        };
        let target = self.target.map(|(a, b)| format!("{}:{}", bits(a), bits(b))).unwrap_or_default();
        let bins = self.bin_width.map(bits).unwrap_or_default();
        let canon = format!(
            "nds-scan-v1;a1={};a2={};t={t};x_lo={};x_hi={};target={target};bin_width={bins};block={BLOCK_SIZE}",
            self.semigroup.a1(),
            self.semigroup.a2(),
            self.x_lo,
            self.x_hi,
        );
        hex::encode(Sha256::digest(canon.as_bytes()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    #[serde(with = "crate::real")]
    pub bin_width: f64,
    pub counts: Vec<u64>,
}

/// Outcome of a scan. `elapsed` is wall time of the last run and is excluded
/// from equality and serialization.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanReport {
    pub a1: u64,
    pub a2: u64,
    pub t: NormParameter,
    pub x_lo: u64,
    pub x_hi: u64,
    pub violations: Vec<GapRecord>,
    pub histogram: Option<Histogram>,
    pub x_completed: u64,
    pub gap_count: u64,
    #[serde(with = "crate::real::opt")]
    pub gap_min: Option<f64>,
    #[serde(with = "crate::real::opt")]
    pub gap_max: Option<f64>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl PartialEq for ScanReport {
    fn eq(&self, other: &Self) -> bool {
        self.a1 == other.a1
            && self.a2 == other.a2
            && self.t == other.t
            && self.x_lo == other.x_lo
            && self.x_hi == other.x_hi
            && self.violations == other.violations
            && self.histogram == other.histogram
            && self.x_completed == other.x_completed
            && self.gap_count == other.gap_count
            && self.gap_min == other.gap_min
            && self.gap_max == other.gap_max
    }
}

impl ScanReport {
    pub fn is_disjoint(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Running totals; also the checkpoint payload.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct ScanState {
    pub x_next: u64,
    pub histogram: Option<Vec<u64>>,
    pub violations: Vec<GapRecord>,
    pub gap_count: u64,
    pub gap_min: Option<f64>,
    pub gap_max: Option<f64>,
}

impl ScanState {
    fn fresh(config: &ScanConfig) -> Self {
        Self {
            x_next: config.x_lo,
            histogram: config.bin_count().map(|n| vec![0; n]),
            violations: Vec::new(),
            gap_count: 0,
            gap_min: None,
            gap_max: None,
        }
    }

    fn absorb(&mut self, block: BlockResult) {
        self.violations.extend(block.violations);
        if let (Some(h), Some(b)) = (self.histogram.as_mut(), block.histogram) {
            for (acc, c) in h.iter_mut().zip(b) {
                *acc += c;
            }
        }
        self.gap_count += block.gap_count;
        if block.gap_count > 0 {
            self.gap_min = Some(self.gap_min.map_or(block.gap_min, |m| m.min(block.gap_min)));
            self.gap_max = Some(self.gap_max.map_or(block.gap_max, |m| m.max(block.gap_max)));
        }
    }
}

struct BlockResult {
    violations: Vec<GapRecord>,
    histogram: Option<Vec<u64>>,
    gap_count: u64,
    gap_min: f64,
    gap_max: f64,
}

/// Read-only data shared by all workers.
struct Kernel {
    semigroup: NumericalSemigroup,
    norm: IntegerNorm,
    powers: Vec<f64>,
    target: Option<(f64, f64)>,
    bin_width: Option<f64>,
    bins: Option<usize>,
    x_lo: u64,
    x_hi: u64,
}

#[derive(Default)]
struct Scratch {
    lengths: Vec<f64>,
    order: Vec<u32>,
}

impl Kernel {
    fn new(config: &ScanConfig) -> Self {
        let norm = IntegerNorm::new(config.t);
        let powers = match config.t {
            NormParameter::Finite(_) if config.x_lo <= config.x_hi => {
                let top = (config.x_hi / config.semigroup.a1()).min(POWER_TABLE_CAP);
                let mut k = 0;
                let mut v = Vec::with_capacity(top as usize + 1);
                while k <= top && norm.is_power_safe(k) {
                    v.push(norm.power(k));
                    k += 1;
                }
                v
            }
            _ => Vec::new(),
        };
        Self {
            semigroup: config.semigroup,
            norm,
            powers,
            target: config.target,
            bin_width: config.bin_width,
            bins: config.bin_count(),
            x_lo: config.x_lo,
            x_hi: config.x_hi,
        }
    }

    #[inline]
    fn length(&self, m: u64, n: u64) -> f64 {
        let hi = m.max(n) as usize;
        if hi < self.powers.len() {
            self.norm.root(self.powers[m as usize] + self.powers[n as usize])
        } else {
            self.norm.length(m, n)
        }
    }

    fn block(&self, index: u64, scratch: &mut Scratch) -> BlockResult {
        let start = self.x_lo + index * BLOCK_SIZE;
        let end = start.saturating_add(BLOCK_SIZE - 1).min(self.x_hi);
        let mut out = BlockResult {
            violations: Vec::new(),
            histogram: self.bins.map(|n| vec![0; n]),
            gap_count: 0,
            gap_min: f64::INFINITY,
            gap_max: f64::NEG_INFINITY,
        };
        let finite = matches!(self.norm.parameter(), NormParameter::Finite(_));

        for x in start..=end {
            if self.semigroup.factorization_count(x) < 2 {
                continue;
            }
            scratch.lengths.clear();
            for f in self.semigroup.factorizations_iter(x) {
                scratch.lengths.push(self.length(f.m, f.n));
            }
            if finite {
                unimodal_order(&scratch.lengths, &mut scratch.order);
            } else {
                sorted_order(&scratch.lengths, &mut scratch.order);
            }
            let mut prev = scratch.lengths[scratch.order[0] as usize];
            for &i in &scratch.order[1..] {
                let cur = scratch.lengths[i as usize];
                self.record(x, prev, cur, &mut out);
                prev = cur;
            }
        }
        out
    }

    #[inline]
    fn record(&self, x: u64, lo: f64, hi: f64, out: &mut BlockResult) {
        let gap = hi - lo;
        out.gap_count += 1;
        out.gap_min = out.gap_min.min(gap);
        out.gap_max = out.gap_max.max(gap);
        if let (Some(h), Some(w)) = (out.histogram.as_mut(), self.bin_width) {
            let bin = ((gap / w) as usize).min(h.len() - 1);
            h[bin] += 1;
        }
        if let Some((t_lo, t_hi)) = self.target {
            if gap > t_lo - TARGET_SLACK && gap < t_hi + TARGET_SLACK {
                out.violations.push(GapRecord { x, lo, hi, gap });
            }
        }
    }
}

fn sorted_order(lengths: &[f64], order: &mut Vec<u32>) {
    order.clear();
    order.extend(0..lengths.len() as u32);
    order.sort_by(|&a, &b| lengths[a as usize].total_cmp(&lengths[b as usize]).then(a.cmp(&b)));
    order.dedup_by(|b, a| lengths[*a as usize] == lengths[*b as usize]);
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScanOutcome {
    Complete(ScanReport),
    /// Stopped early on request; the checkpoint (if any) holds progress.
    Interrupted {
        x_next: u64,
    },
}

/// A scan with optional checkpointing.
#[derive(Debug, Clone)]
pub struct Scanner {
    config: ScanConfig,
    checkpoint: Option<PathBuf>,
    stop_after_batches: Option<u64>,
}

impl Scanner {
    pub fn new(config: ScanConfig) -> Result<Self, ScanError> {
        config.validate()?;
        Ok(Self { config, checkpoint: None, stop_after_batches: None })
    }

    /// Resume from and write progress to `path`.
    pub fn checkpoint(mut self, path: impl Into<PathBuf>) -> Self {
        self.checkpoint = Some(path.into());
        self
    }

    /// Stop after this many batches in this run (for interruption tests and
    /// time-boxed runs).
    pub fn stop_after_batches(mut self, batches: u64) -> Self {
        self.stop_after_batches = Some(batches);
        self
    }

    pub fn config(&self) -> &ScanConfig {
        &self.config
    }

    pub fn run(&self) -> Result<ScanOutcome, ScanError> {
        let started = Instant::now();
        let config = &self.config;
        let hash = config.hash();
        let mut state = match &self.checkpoint {
            Some(path) if path.exists() => Checkpoint::load(path, &hash)?.into_state(),
            _ => ScanState::fresh(config),
        };

        let total = config.block_count();
        let mut next_block =
            if config.x_lo > config.x_hi { 0 } else { (state.x_next - config.x_lo).div_ceil(BLOCK_SIZE) };
        let kernel = Kernel::new(config);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(config.workers).build()?;
        let mut batches = 0;

        while next_block < total {
            if self.stop_after_batches.is_some_and(|n| batches >= n) {
                return Ok(ScanOutcome::Interrupted { x_next: state.x_next });
            }
            let last = (next_block + config.checkpoint_every).min(total);
            let results: Vec<BlockResult> = pool.install(|| {
                (next_block..last)
                    .into_par_iter()
                    .map_init(Scratch::default, |scratch, b| kernel.block(b, scratch))
                    .collect()
            });
            for r in results {
                state.absorb(r);
            }
            next_block = last;
            state.x_next = (config.x_lo + last * BLOCK_SIZE).min(config.x_hi + 1);
            batches += 1;
            if let Some(path) = &self.checkpoint {
                Checkpoint::from_state(&hash, &state).store(path)?;
            }
        }

        Ok(ScanOutcome::Complete(self.report(state, started.elapsed())))
    }

    fn report(&self, state: ScanState, elapsed: Duration) -> ScanReport {
        let c = &self.config;
        let x_completed = if c.x_lo > c.x_hi { 0 } else { state.x_next - c.x_lo };
        ScanReport {
            a1: c.semigroup.a1(),
            a2: c.semigroup.a2(),
            t: c.t,
            x_lo: c.x_lo,
            x_hi: c.x_hi,
            violations: state.violations,
            histogram: state.histogram.map(|counts| Histogram { bin_width: c.bin_width.unwrap_or(0.0), counts }),
            x_completed,
            gap_count: state.gap_count,
            gap_min: state.gap_min,
            gap_max: state.gap_max,
            elapsed,
        }
    }
}

/// Runs `config` to completion without checkpoints.
pub fn scan(config: &ScanConfig) -> Result<ScanReport, ScanError> {
    match Scanner::new(config.clone())?.run()? {
        ScanOutcome::Complete(r) => Ok(r),
        ScanOutcome::Interrupted { .. } => unreachable!("no batch limit was set"),
    }
}

/// Gap histogram over `[0, a₂]` and the fraction of bins that saw a gap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub a1: u64,
    pub a2: u64,
    pub t: NormParameter,
    pub x_max: u64,
    #[serde(with = "crate::real")]
    pub bin_width: f64,
    pub counts: Vec<u64>,
    pub covered_bins: usize,
    pub total_bins: usize,
    #[serde(with = "crate::real")]
    pub coverage: f64,
}

impl DensityReport {
    /// `[lo, hi)` of bin `i`.
    pub fn bin_bounds(&self, i: usize) -> (f64, f64) {
        (i as f64 * self.bin_width, ((i + 1) as f64 * self.bin_width).min(self.a2 as f64))
    }
}

pub fn density_report(
    s: &NumericalSemigroup,
    t: NormParameter,
    x_max: u64,
    bin_width: f64,
    workers: usize,
) -> Result<DensityReport, ScanError> {
    let cfg = ScanConfig::new(*s, t, 1, x_max).with_bin_width(bin_width).with_workers(workers);
    let report = scan(&cfg)?;
    let counts = report.histogram.map(|h| h.counts).unwrap_or_default();
    let covered_bins = counts.iter().filter(|&&c| c > 0).count();
    let total_bins = counts.len();
    Ok(DensityReport {
        a1: s.a1(),
        a2: s.a2(),
        t,
        x_max,
        bin_width,
        coverage: if total_bins == 0 { 0.0 } else { covered_bins as f64 / total_bins as f64 },
        counts,
        covered_bins,
        total_bins,
    })
}

/// Result of checking a certificate's window over `[1, x₀]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Verification {
    pub certificate: Certificate,
    pub first_violation: Option<GapRecord>,
    pub report: ScanReport,
}

/// Scans `[1, x₀]` for gaps inside `(d − ε, d + ε)`.
pub fn verify_certificate(cert: &Certificate, workers: usize) -> Result<Verification, ScanError> {
    verify_certificate_with(cert, workers, None, None)
}

/// [`verify_certificate`] with a checkpoint file and an optional cap on the
/// scanned range (a capped run checks only `[1, min(x₀, cap)]`).
pub fn verify_certificate_with(
    cert: &Certificate,
    workers: usize,
    checkpoint: Option<&Path>,
    x_cap: Option<u64>,
) -> Result<Verification, ScanError> {
    if cert.status != CertificateStatus::Unverified {
        return Err(ScanError::AlreadyVerified(cert.status));
    }
    let s = cert.semigroup()?;
    let t = NormParameter::from_f64(cert.t).map_err(|e| ScanError::InvalidConfig(e.to_string()))?;
    let (lo, hi) = cert.window();
    let x_hi = x_cap.map_or(cert.x0, |c| c.min(cert.x0));
    let cfg = ScanConfig::new(s, t, 1, x_hi).with_target(lo, hi).with_workers(workers);
    let mut scanner = Scanner::new(cfg)?;
    if let Some(p) = checkpoint {
        scanner = scanner.checkpoint(p);
    }
    let report = match scanner.run()? {
        ScanOutcome::Complete(r) => r,
        ScanOutcome::Interrupted { .. } => unreachable!("no batch limit was set"),
    };
    let first_violation = report.violations.first().copied();
    let status = if first_violation.is_some() { CertificateStatus::Refuted } else { CertificateStatus::Verified };
    Ok(Verification { certificate: cert.with_status(status), first_violation, report })
}
