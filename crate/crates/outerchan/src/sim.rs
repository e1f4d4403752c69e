//! Seeded Monte-Carlo frame-error-rate harness.
//!
//! Every trial is a pure function of `(master seed, trial index)`: the
//! trial's generator draws a uniform source block, encodes it, runs the
//! channel, and decodes with every requested scheme against the same
//! reception. Results are therefore identical for any worker count —
//! trials are evaluated in fixed-size batches, scanned in trial order, and
//! truncated at the exact trial where the stop rule fires.
//!
//! The stop rule is "some scheme reached `min_frame_errors`, or
//! `max_trials` ran": with paired schemes the weaker scheme governs, and
//! the cap is mandatory because joint decoding can sit below any error
//! count reachable at desk scale.

use std::time::Instant;

use rand::RngCore;
use thiserror::Error;

use crate::channel::{transmit_with_rng, trial_rng, RNG_ID};
use crate::gf2::BitMatrix;
use crate::ldpc::{ColumnDecoder, Encoder};
use crate::outer::{
    independent_decode, joint_decode_from_estimate, ConflictPolicy, DecodeOutcome,
};
use crate::params::{ChannelParams, CodeConfig};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Trials evaluated per scheduling batch. Fixed so that results never
/// depend on the worker count.
const TRIAL_BATCH: u64 = 256;

/// z for a 95% confidence interval.
const Z95: f64 = 1.959963984540054;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("bad configuration: {0}")]
    Config(String),
}

/// Decoding scheme under test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Independent,
    JointStrict,
    JointSkip,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Independent => "independent",
            Scheme::JointStrict => "joint-strict",
            Scheme::JointSkip => "joint-skip",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "independent" => Some(Scheme::Independent),
            "joint-strict" => Some(Scheme::JointStrict),
            "joint-skip" => Some(Scheme::JointSkip),
            _ => None,
        }
    }
}

/// The code under simulation: geometry, encoder, and the per-column
/// decoder shared by all trials.
pub struct FerCode<'a> {
    pub config: &'a CodeConfig,
    pub encoder: &'a Encoder,
    pub decoder: &'a (dyn ColumnDecoder + Sync),
}

/// One operating point of the harness.
#[derive(Debug, Clone)]
pub struct FerConfig {
    pub channel: ChannelParams,
    pub schemes: Vec<Scheme>,
    /// Stop once any scheme accumulates this many frame errors.
    pub min_frame_errors: u64,
    /// Hard trial cap; always enforced.
    pub max_trials: u64,
    pub master_seed: u64,
    /// 0 uses the process-wide thread pool, 1 forces sequential
    /// evaluation, anything else sizes a dedicated pool.
    pub workers: usize,
}

/// Counts for one scheme at one operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeResult {
    pub scheme: Scheme,
    pub frame_errors: u64,
    pub fer: f64,
    pub ci95_halfwidth: f64,
}

/// Outcome of [`run_fer`]: shared trial count plus per-scheme counts.
#[derive(Debug, Clone, PartialEq)]
pub struct FerResult {
    pub trials: u64,
    pub schemes: Vec<SchemeResult>,
    pub wall_ms: u64,
    pub seed: u64,
    pub rng_id: &'static str,
}

impl FerResult {
    pub fn scheme(&self, s: Scheme) -> Option<&SchemeResult> {
        self.schemes.iter().find(|r| r.scheme == s)
    }
}

/// Wilson score interval for `errors` successes in `trials` draws.
pub fn wilson_interval(errors: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Half-width of the 95% Wilson interval.
pub fn wilson_halfwidth95(errors: u64, trials: u64) -> f64 {
    let (lo, hi) = wilson_interval(errors, trials, Z95);
    (hi - lo) / 2.0
}

/// Uniform source block drawn from the trial generator.
fn draw_source(rng: &mut impl RngCore, k: usize, w: usize) -> BitMatrix {
    let mut u = BitMatrix::zeros(k, w);
    for r in 0..k {
        let mut word = 0u64;
        let mut left = 0u32;
        for c in 0..w {
            if left == 0 {
                word = rng.next_u64();
                left = 64;
            }
            if word & 1 == 1 {
                u.set(r, c, true);
            }
            word >>= 1;
            left -= 1;
        }
    }
    u
}

/// Run one trial; returns a frame-error flag per requested scheme.
/// A frame error is anything but bit-exact recovery of the drawn source.
fn run_trial(code: &FerCode, cfg: &FerConfig, trial: u64) -> Vec<bool> {
    let cc = code.config;
    let mut rng = trial_rng(cfg.master_seed, trial);
    let source = draw_source(&mut rng, cc.k, cc.w);
    let x = crate::outer::outer_encode(&source, code.encoder, cc.n, cc.a)
        .expect("geometry validated");
    let z = transmit_with_rng(&x, &cfg.channel, &mut rng);

    let (estimate, independent_outcome) =
        independent_decode(&z, &cfg.channel, cc, code.encoder, code.decoder)
            .expect("geometry validated");

    let is_error = |outcome: &DecodeOutcome| match outcome {
        DecodeOutcome::Recovered { source: got, .. } => *got != source,
        DecodeOutcome::Failure(_) => true,
    };

    cfg.schemes
        .iter()
        .map(|s| match s {
            Scheme::Independent => is_error(&independent_outcome),
            Scheme::JointStrict => is_error(&joint_decode_from_estimate(
                &z,
                cc,
                code.encoder,
                &estimate,
                ConflictPolicy::Strict,
            )),
            Scheme::JointSkip => is_error(&joint_decode_from_estimate(
                &z,
                cc,
                code.encoder,
                &estimate,
                ConflictPolicy::SkipConflicts,
            )),
        })
        .collect()
}

fn validate(code: &FerCode, cfg: &FerConfig) -> Result<(), SimError> {
    if cfg.schemes.is_empty() {
        return Err(SimError::Config("no schemes requested".into()));
    }
    if cfg.min_frame_errors < 1 {
        return Err(SimError::Config("min_frame_errors must be at least 1".into()));
    }
    if cfg.max_trials < cfg.min_frame_errors {
        return Err(SimError::Config(format!(
            "max_trials {} below min_frame_errors {}",
            cfg.max_trials, cfg.min_frame_errors
        )));
    }
    if cfg.channel.l != code.config.l {
        return Err(SimError::Config(format!(
            "channel row length {} differs from code row length {}",
            cfg.channel.l, code.config.l
        )));
    }
    if code.encoder.k() != code.config.k || code.encoder.n() != code.config.n {
        return Err(SimError::Config("encoder does not match code geometry".into()));
    }
    Ok(())
}

fn eval_batch(code: &FerCode, cfg: &FerConfig, from: u64, to: u64) -> Vec<Vec<bool>> {
    #[cfg(feature = "parallel")]
    {
        match cfg.workers {
            1 => (from..to).map(|t| run_trial(code, cfg, t)).collect(),
            0 => (from..to)
                .into_par_iter()
                .map(|t| run_trial(code, cfg, t))
                .collect(),
            n => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .expect("thread pool");
                pool.install(|| {
                    (from..to)
                        .into_par_iter()
                        .map(|t| run_trial(code, cfg, t))
                        .collect()
                })
            }
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        (from..to).map(|t| run_trial(code, cfg, t)).collect()
    }
}

/// Estimate the frame error rate of every requested scheme at one
/// operating point. All schemes decode the same receptions trial by
/// trial, so paired comparisons are exact.
pub fn run_fer(code: &FerCode, cfg: &FerConfig) -> Result<FerResult, SimError> {
    validate(code, cfg)?;
    let start = Instant::now();
    let mut counts = vec![0u64; cfg.schemes.len()];
    let mut trials = 0u64;

    'outer: while trials < cfg.max_trials {
        let to = (trials + TRIAL_BATCH).min(cfg.max_trials);
        let flags = eval_batch(code, cfg, trials, to);
        for per_scheme in flags {
            for (c, e) in counts.iter_mut().zip(&per_scheme) {
                *c += *e as u64;
            }
            trials += 1;
            if counts.iter().any(|&c| c >= cfg.min_frame_errors) {
                break 'outer;
            }
        }
    }

    let schemes = cfg
        .schemes
        .iter()
        .zip(&counts)
        .map(|(&scheme, &frame_errors)| SchemeResult {
            scheme,
            frame_errors,
            fer: frame_errors as f64 / trials as f64,
            ci95_halfwidth: wilson_halfwidth95(frame_errors, trials),
        })
        .collect();
    Ok(FerResult {
        trials,
        schemes,
        wall_ms: start.elapsed().as_millis() as u64,
        seed: cfg.master_seed,
        rng_id: RNG_ID,
    })
}

// ---------------------------------------------------------------------------
// CSV sweeps
// ---------------------------------------------------------------------------

/// Fixed column set of sweep output.
pub const CSV_HEADER: &str =
    "scheme,n,k,w,a,l,p_c,p_e,p_s,trials,frame_errors,fer,ci95_halfwidth,seed,rng_id,wall_ms,status";

/// Run each operating point and emit one CSV row per (point, scheme).
/// Per-point failures become rows with a non-`ok` status instead of
/// aborting the sweep.
pub fn sweep<'a, I>(points: I) -> String
where
    I: IntoIterator<Item = (&'a FerCode<'a>, &'a FerConfig)>,
{
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for (code, cfg) in points {
        let cc = code.config;
        let ch = &cfg.channel;
        let prefix_for = |scheme: Scheme| {
            format!(
                "{},{},{},{},{},{},{},{},{}",
                scheme.name(),
                cc.n,
                cc.k,
                cc.w,
                cc.a,
                cc.l,
                ch.p_c,
                ch.p_e,
                ch.p_s
            )
        };
        match run_fer(code, cfg) {
            Ok(result) => {
                for s in &result.schemes {
                    out.push_str(&format!(
                        "{},{},{},{},{},{},{},{},ok\n",
                        prefix_for(s.scheme),
                        result.trials,
                        s.frame_errors,
                        s.fer,
                        s.ci95_halfwidth,
                        result.seed,
                        result.rng_id,
                        result.wall_ms
                    ));
                }
            }
            Err(e) => {
                let status = e.to_string().replace(',', ";");
                for &scheme in &cfg.schemes {
                    out.push_str(&format!(
                        "{},0,0,0,0,{},{},0,{status}\n",
                        prefix_for(scheme),
                        cfg.master_seed,
                        RNG_ID
                    ));
                }
                if cfg.schemes.is_empty() {
                    out.push_str(&format!(
                        "{},0,0,0,0,{},{},0,{status}\n",
                        prefix_for(Scheme::Independent),
                        cfg.master_seed,
                        RNG_ID
                    ));
                }
            }
        }
    }
    out
}
