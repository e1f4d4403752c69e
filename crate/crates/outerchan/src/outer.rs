//! The outer code itself: address handling, the column encoder wrapper,
//! per-bit soft/hard information from address tallies, and the independent
//! and joint decoding schemes.
//!
//! Encoding appends an `a`-bit address to each row of the column-encoded
//! data block, so a received row claims a position regardless of where the
//! shuffle put it. Decoding counts, per claimed address `i` and data column
//! `j`, how many rows claim `i` (`t`) and how many of those carry a 0 at
//! `j` (`t0`); the posterior odds of the data bit follow in closed form
//! from the channel mixture. Independent decoding hands each column's LLRs
//! to a [`ColumnDecoder`]. Joint decoding ranks the received rows by
//! disagreement with the independent estimate and solves the parity
//! constraints over the shortest reliable prefix that pins a unique
//! solution.

use thiserror::Error;

use crate::channel::{ReceivedMatrix, ReceivedRow};
use crate::gf2::{BitMatrix, PinError, PinnedSystem, SystemStatus};
use crate::ldpc::{ColumnDecoder, Encoder, LLR_CLAMP};
use crate::params::{ChannelParams, CodeConfig, MixtureProbs, ParamError};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Errors from encoding and decoding entry points.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OuterError {
    #[error("address {index} does not fit {width} bits (valid range 1..=2^{width})")]
    AddressOutOfRange { index: usize, width: u32 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error(transparent)]
    Param(#[from] ParamError),
}

// ---------------------------------------------------------------------------
// Addresses
// ---------------------------------------------------------------------------

/// Encode 1-based row index `i` as `a` big-endian bits (`i = 1` maps to
/// `0..01`).
///
/// Indices up to `2^a` are accepted; `i = 2^a` wraps to the all-zero
/// pattern, which no decoder treats as valid, so the last row of a
/// power-of-two geometry is sacrificed rather than widening every address.
pub fn address_encode(i: usize, a: u32) -> Result<Vec<u8>, OuterError> {
    if i == 0 || (a < usize::BITS && i > (1usize << a)) {
        return Err(OuterError::AddressOutOfRange { index: i, width: a });
    }
    Ok((0..a).rev().map(|bit| ((i >> bit) & 1) as u8).collect())
}

/// Decode an address field back to a 1-based row index. Returns `None` for
/// the value 0 and for values above `n`.
pub fn address_decode(bits: &[u8], n: usize) -> Option<usize> {
    let mut value = 0usize;
    for &b in bits {
        value = (value << 1) | (b & 1) as usize;
    }
    if value == 0 || value > n {
        None
    } else {
        Some(value)
    }
}

// ---------------------------------------------------------------------------
// Encoding
// ---------------------------------------------------------------------------

/// Encode a `k x w` source block: column-encode the data part and append
/// the address tail to every row.
pub fn outer_encode(
    source: &BitMatrix,
    encoder: &Encoder,
    n: usize,
    a: u32,
) -> Result<BitMatrix, OuterError> {
    if encoder.k() != source.rows() {
        return Err(OuterError::DimensionMismatch(format!(
            "source has {} rows, encoder expects {}",
            source.rows(),
            encoder.k()
        )));
    }
    if encoder.n() != n {
        return Err(OuterError::DimensionMismatch(format!(
            "encoder length {} differs from n = {n}",
            encoder.n()
        )));
    }
    let w = source.cols();
    let v = encoder
        .encode_block(source)
        .map_err(|e| OuterError::DimensionMismatch(e.to_string()))?;
    let mut x = BitMatrix::zeros(n, w + a as usize);
    for r in 0..n {
        for c in 0..w {
            x.set(r, c, v.get(r, c));
        }
        for (off, bit) in address_encode(r + 1, a)?.into_iter().enumerate() {
            x.set(r, w + off, bit == 1);
        }
    }
    Ok(x)
}

// ---------------------------------------------------------------------------
// Tally and per-bit information
// ---------------------------------------------------------------------------

/// Address tallies: `t[i]` rows of `Z` claim address `i + 1`, of which
/// `t0[i][j]` carry a 0 in data column `j`. Erased and invalid-address
/// slots contribute nothing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tally {
    n: usize,
    w: usize,
    t: Vec<u32>,
    t0: Vec<u32>,
}

impl Tally {
    pub fn t(&self, i: usize) -> u32 {
        self.t[i]
    }

    pub fn t0(&self, i: usize, j: usize) -> u32 {
        self.t0[i * self.w + j]
    }
}

/// Count address claims and per-column zero bits over the received slots.
pub fn tally(z: &ReceivedMatrix, n: usize, w: usize, a: u32) -> Tally {
    let l = w + a as usize;
    let mut t = vec![0u32; n];
    let mut t0 = vec![0u32; n * w];
    for slot in z.slots() {
        let ReceivedRow::Present(bits) = slot else { continue };
        assert_eq!(bits.len(), l, "slot width must be w + a");
        let Some(addr) = address_decode(&bits[w..], n) else { continue };
        let i = addr - 1;
        t[i] += 1;
        for j in 0..w {
            if bits[j] == 0 {
                t0[i * w + j] += 1;
            }
        }
    }
    Tally { n, w, t, t0 }
}

/// Log-likelihood ratio of one data bit given its tally cell.
///
/// Positive favors 0. The value is exactly zero whenever `t0 = t/2`
/// (including empty cells) and is clamped to `[-LLR_CLAMP, LLR_CLAMP]`,
/// the degenerate substitution-free endpoints included.
pub fn llr_from_tally(t: u32, t0: u32, n: usize, mix: &MixtureProbs) -> f64 {
    debug_assert!(t0 <= t && t as usize <= n);
    let keep = (1.0 - mix.q) * (mix.p1 + mix.p4);
    let stray = (n as f64 - t as f64) * mix.q * (mix.p2 + mix.p3);
    let flip = (1.0 - mix.q) * mix.p5;
    let (t0, t1) = (t0 as f64, (t - t0) as f64);
    let num = 2.0 * t0 * keep + stray + 2.0 * t1 * flip;
    let den = 2.0 * t1 * keep + stray + 2.0 * t0 * flip;
    if num == den {
        // Covers t0 = t/2 and the doubly-degenerate 0/0 case.
        0.0
    } else if num == 0.0 {
        -LLR_CLAMP
    } else if den == 0.0 {
        LLR_CLAMP
    } else {
        (num.ln() - den.ln()).clamp(-LLR_CLAMP, LLR_CLAMP)
    }
}

/// Per-bit log-likelihood ratios for the data block, `n x w`, positive
/// favoring 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftMatrix {
    n: usize,
    w: usize,
    llr: Vec<f64>,
}

impl SoftMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.llr[i * self.w + j]
    }

    /// One data column of LLRs, as fed to a [`ColumnDecoder`].
    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.llr[i * self.w + j]).collect()
    }
}

/// Compute the soft information of every data bit from the address
/// tallies.
pub fn soft_info(
    z: &ReceivedMatrix,
    params: &ChannelParams,
    n: usize,
    w: usize,
    a: u32,
) -> Result<SoftMatrix, OuterError> {
    let mix = params.mixture_probs(a)?;
    let counts = tally(z, n, w, a);
    let mut llr = Vec::with_capacity(n * w);
    for i in 0..n {
        for j in 0..w {
            llr.push(llr_from_tally(counts.t(i), counts.t0(i, j), n, &mix));
        }
    }
    Ok(SoftMatrix { n, w, llr })
}

/// A bit that may be unresolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trit {
    Zero,
    One,
    Unknown,
}

impl Trit {
    pub fn from_bit(b: u8) -> Self {
        if b == 0 { Trit::Zero } else { Trit::One }
    }

    /// A concrete bit never equals `Unknown`.
    pub fn matches_bit(self, b: u8) -> bool {
        match self {
            Trit::Zero => b == 0,
            Trit::One => b != 0,
            Trit::Unknown => false,
        }
    }
}

/// An `n x w` matrix of trits: hard information or a per-column decode
/// estimate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TritMatrix {
    n: usize,
    w: usize,
    trits: Vec<Trit>,
}

impl TritMatrix {
    pub fn filled(n: usize, w: usize, value: Trit) -> Self {
        Self { n, w, trits: vec![value; n * w] }
    }

    pub fn from_rows(rows: Vec<Vec<Trit>>) -> Self {
        let n = rows.len();
        let w = rows.first().map_or(0, Vec::len);
        let mut trits = Vec::with_capacity(n * w);
        for row in rows {
            assert_eq!(row.len(), w, "ragged rows");
            trits.extend(row);
        }
        Self { n, w, trits }
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn cols(&self) -> usize {
        self.w
    }

    pub fn get(&self, i: usize, j: usize) -> Trit {
        self.trits[i * self.w + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Trit) {
        self.trits[i * self.w + j] = v;
    }

    pub fn contains_unknown(&self) -> bool {
        self.trits.contains(&Trit::Unknown)
    }
}

/// Majority-rule hard information: `?` when `t0 = t/2` (empty cells
/// included), 0 when zeros have the majority, 1 otherwise. This is exactly
/// the sign of [`llr_from_tally`].
pub fn hard_info(z: &ReceivedMatrix, n: usize, w: usize, a: u32) -> TritMatrix {
    let counts = tally(z, n, w, a);
    let mut m = TritMatrix::filled(n, w, Trit::Unknown);
    for i in 0..n {
        let t = counts.t(i);
        for j in 0..w {
            let t0 = counts.t0(i, j);
            let v = match (2 * t0).cmp(&t) {
                std::cmp::Ordering::Greater => Trit::Zero,
                std::cmp::Ordering::Less => Trit::One,
                std::cmp::Ordering::Equal => Trit::Unknown,
            };
            m.set(i, j, v);
        }
    }
    m
}

// ---------------------------------------------------------------------------
// Decoding
// ---------------------------------------------------------------------------

/// Why a decode attempt produced no source block.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FailureReason {
    #[error("columns {0:?} failed to decode")]
    ColumnsFailed(Vec<usize>),
    #[error("no prefix of the reliability ordering pins a unique solution")]
    NoUniquePrefix,
    #[error("slot {slot} conflicts with an earlier pin at address {address}")]
    ConflictingRows { slot: usize, address: usize },
    #[error("pins became inconsistent with the code after {pinned} rows")]
    PinsInconsistent { pinned: usize },
}

/// Result of a decode attempt. `Recovered` carries the source block and,
/// for joint decoding, how many sorted slots were consumed to reach
/// uniqueness.
#[derive(Debug, Clone, PartialEq)]
pub enum DecodeOutcome {
    Recovered { source: BitMatrix, rows_used: Option<usize> },
    Failure(FailureReason),
}

impl DecodeOutcome {
    pub fn is_recovered(&self) -> bool {
        matches!(self, DecodeOutcome::Recovered { .. })
    }

    /// The recovered source, if any.
    pub fn source(&self) -> Option<&BitMatrix> {
        match self {
            DecodeOutcome::Recovered { source, .. } => Some(source),
            DecodeOutcome::Failure(_) => None,
        }
    }
}

/// Decode each data column independently from its soft information.
///
/// Returns the per-column estimate (failed columns all `?`) and the
/// outcome: the source block if every column produced a codeword.
pub fn independent_decode(
    z: &ReceivedMatrix,
    params: &ChannelParams,
    cfg: &CodeConfig,
    encoder: &Encoder,
    decoder: &dyn ColumnDecoder,
) -> Result<(TritMatrix, DecodeOutcome), OuterError> {
    let (n, w) = (cfg.n, cfg.w);
    let soft = soft_info(z, params, n, w, cfg.a)?;

    let decode_one = |j: usize| decoder.decode_column(&soft.column(j));
    #[cfg(feature = "parallel")]
    let columns: Vec<Option<Vec<u8>>> = (0..w).into_par_iter().map(decode_one).collect();
    #[cfg(not(feature = "parallel"))]
    let columns: Vec<Option<Vec<u8>>> = (0..w).map(decode_one).collect();

    let mut estimate = TritMatrix::filled(n, w, Trit::Unknown);
    let mut failed = Vec::new();
    for (j, col) in columns.iter().enumerate() {
        match col {
            Some(bits) => {
                for i in 0..n {
                    estimate.set(i, j, Trit::from_bit(bits[i]));
                }
            }
            None => failed.push(j),
        }
    }

    let outcome = if failed.is_empty() {
        let mut source = BitMatrix::zeros(cfg.k, w);
        for (r, &pos) in encoder.info_positions().iter().enumerate() {
            for j in 0..w {
                source.set(r, j, estimate.get(pos, j) == Trit::One);
            }
        }
        DecodeOutcome::Recovered { source, rows_used: None }
    } else {
        DecodeOutcome::Failure(FailureReason::ColumnsFailed(failed))
    };
    Ok((estimate, outcome))
}

/// Disagreement of each received slot with the independent estimate at its
/// claimed address: erased and invalid-address slots score the maximum
/// `w`; an unresolved estimate bit counts as a mismatch.
pub fn reliability_distances(
    z: &ReceivedMatrix,
    estimate: &TritMatrix,
    n: usize,
    w: usize,
) -> Vec<usize> {
    z.slots()
        .iter()
        .map(|slot| {
            let ReceivedRow::Present(bits) = slot else { return w };
            let Some(addr) = address_decode(&bits[w..], n) else { return w };
            (0..w)
                .filter(|&j| !estimate.get(addr - 1, j).matches_bit(bits[j]))
                .count()
        })
        .collect()
}

/// How joint decoding reacts when two reliable rows claim one address with
/// different data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConflictPolicy {
    /// A conflict is a decoding failure: contradictory pins rule out every
    /// larger prefix.
    #[default]
    Strict,
    /// Skip the conflicting slot and keep growing the prefix.
    SkipConflicts,
}

/// Joint decoding: rank slots by reliability, then pin them one at a time
/// into the parity-check system until the remaining positions are uniquely
/// determined.
///
/// The sort is an ascending stable sort on the distance from
/// [`reliability_distances`], slot order breaking ties, with erased and
/// invalid-address slots after present slots of equal distance. Erased and
/// invalid slots pin nothing. The first prefix whose pins determine the
/// block uniquely yields the answer; its length is reported as
/// `rows_used`.
pub fn joint_decode(
    z: &ReceivedMatrix,
    params: &ChannelParams,
    cfg: &CodeConfig,
    encoder: &Encoder,
    decoder: &dyn ColumnDecoder,
    policy: ConflictPolicy,
) -> Result<DecodeOutcome, OuterError> {
    let (estimate, _) = independent_decode(z, params, cfg, encoder, decoder)?;
    Ok(joint_decode_from_estimate(z, cfg, encoder, &estimate, policy))
}

/// The pin-growth phase of joint decoding, reusing an existing independent
/// estimate.
pub fn joint_decode_from_estimate(
    z: &ReceivedMatrix,
    cfg: &CodeConfig,
    encoder: &Encoder,
    estimate: &TritMatrix,
    policy: ConflictPolicy,
) -> DecodeOutcome {
    let (n, w) = (cfg.n, cfg.w);
    let d = reliability_distances(z, estimate, n, w);
    let mut order: Vec<usize> = (0..z.len()).collect();
    order.sort_by_key(|&i| {
        let unpinnable = match z.slot(i) {
            ReceivedRow::Erased => true,
            ReceivedRow::Present(bits) => address_decode(&bits[w..], n).is_none(),
        };
        (d[i], unpinnable, i)
    });

    let mut sys = PinnedSystem::new(cfg.h.clone(), w);
    if sys.status() == SystemStatus::UniqueConsistent {
        return recovered_from_system(&sys, encoder, cfg, 0);
    }
    for (idx, &slot) in order.iter().enumerate() {
        let rows_used = idx + 1;
        let ReceivedRow::Present(bits) = z.slot(slot) else { continue };
        let Some(addr) = address_decode(&bits[w..], n) else { continue };
        match sys.pin(addr - 1, &bits[..w]) {
            Err(PinError::ConflictingPin(_)) => match policy {
                ConflictPolicy::Strict => {
                    return DecodeOutcome::Failure(FailureReason::ConflictingRows {
                        slot,
                        address: addr,
                    });
                }
                ConflictPolicy::SkipConflicts => continue,
            },
            Err(e) => unreachable!("pin within bounds: {e}"),
            Ok(SystemStatus::Underdetermined) => {}
            Ok(SystemStatus::Inconsistent) => {
                return DecodeOutcome::Failure(FailureReason::PinsInconsistent {
                    pinned: sys.pinned_count(),
                });
            }
            Ok(SystemStatus::UniqueConsistent) => {
                return recovered_from_system(&sys, encoder, cfg, rows_used);
            }
        }
    }
    DecodeOutcome::Failure(FailureReason::NoUniquePrefix)
}

fn recovered_from_system(
    sys: &PinnedSystem,
    encoder: &Encoder,
    cfg: &CodeConfig,
    rows_used: usize,
) -> DecodeOutcome {
    let block = sys.solve().expect("status checked");
    let mut source = BitMatrix::zeros(cfg.k, cfg.w);
    for (r, &pos) in encoder.info_positions().iter().enumerate() {
        source.assign_row(r, block.row_words(pos));
    }
    DecodeOutcome::Recovered { source, rows_used: Some(rows_used) }
}
