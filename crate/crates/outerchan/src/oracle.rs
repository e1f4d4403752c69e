//! Brute-force reference decoders and small-field machinery that validate
//! the fast pipeline: row-set intersection decoding, an exact
//! permutation-summing maximum-likelihood decoder for tiny blocks,
//! threshold decoding over random GF(2^w) linear codebooks, and exhaustive
//! nearest-codeword column decoding.
//!
//! Everything here trades speed for being unarguably correct at small
//! sizes; the test suites compare the production decoders against these.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::channel::{ReceivedMatrix, ReceivedRow};
use crate::gf2::BitMatrix;
use crate::ldpc::{ColumnDecoder, Encoder};
use crate::outer::{address_encode, Trit};
use crate::params::{min_address_width, ChannelParams};

/// Hard caps that keep the exhaustive decoders exhaustive.
const MAX_PERMUTATION_ROWS: usize = 8;
const MAX_CODEBOOK_BITS: usize = 20;
const MAX_FIELD_DEGREE: u32 = 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("{what} = {got} exceeds the brute-force cap {cap}")]
    TooLarge { what: &'static str, got: usize, cap: usize },
    #[error("row width mismatch: {0} vs {1}")]
    WidthMismatch(usize, usize),
    #[error("field degree {0} outside 1..=16")]
    BadFieldDegree(u32),
}

// ---------------------------------------------------------------------------
// GF(2^w)
// ---------------------------------------------------------------------------

/// Low-weight irreducible polynomials for GF(2^w), w = 1..=16, with the
/// leading term included (w = 4 is x^4+x+1, w = 8 is the usual 0x11B).
const FIELD_POLYS: [u32; 16] = [
    0x3, 0x7, 0xB, 0x13, 0x25, 0x43, 0x89, 0x11B, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443,
    0x8003, 0x1100B,
];

/// Arithmetic in GF(2^w) for w up to 16: addition is XOR, multiplication
/// reduces modulo a fixed irreducible polynomial so codebooks are
/// reproducible everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gf2wField {
    w: u32,
    poly: u32,
}

impl Gf2wField {
    pub fn new(w: u32) -> Result<Self, OracleError> {
        if w == 0 || w > MAX_FIELD_DEGREE {
            return Err(OracleError::BadFieldDegree(w));
        }
        Ok(Self { w, poly: FIELD_POLYS[(w - 1) as usize] })
    }

    pub fn degree(&self) -> u32 {
        self.w
    }

    /// Field order `2^w`.
    pub fn order(&self) -> u32 {
        1 << self.w
    }

    pub fn add(&self, a: u16, b: u16) -> u16 {
        a ^ b
    }

    pub fn mul(&self, a: u16, b: u16) -> u16 {
        let top = 1u32 << self.w;
        let mut acc = 0u32;
        let mut a = a as u32;
        let mut b = b as u32;
        while b != 0 {
            if b & 1 != 0 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & top != 0 {
                a ^= self.poly;
            }
        }
        acc as u16
    }

    pub fn pow(&self, mut base: u16, mut exp: u32) -> u16 {
        let mut acc = 1u16;
        while exp != 0 {
            if exp & 1 != 0 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn checked_inv(&self, a: u16) -> Option<u16> {
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.order() - 2))
        }
    }

    /// Dot product of two element vectors.
    pub fn dot(&self, a: &[u16], b: &[u16]) -> u16 {
        a.iter().zip(b).fold(0, |acc, (&x, &y)| acc ^ self.mul(x, y))
    }
}

// ---------------------------------------------------------------------------
// Row sets and intersection decoding
// ---------------------------------------------------------------------------

/// The set of distinct rows of a matrix or reception (erased slots
/// excluded), used for symbol-level intersection counting.
#[derive(Debug, Clone)]
pub struct RowSet {
    width: usize,
    rows: HashSet<Vec<u8>>,
}

impl RowSet {
    pub fn from_bit_matrix(m: &BitMatrix) -> Self {
        let rows = (0..m.rows()).map(|r| m.row_bits(r)).collect();
        Self { width: m.cols(), rows }
    }

    pub fn from_received(z: &ReceivedMatrix, width: usize) -> Self {
        let rows = z
            .slots()
            .iter()
            .filter_map(|s| match s {
                ReceivedRow::Present(bits) => Some(bits.clone()),
                ReceivedRow::Erased => None,
            })
            .collect();
        Self { width, rows }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Cardinality of the intersection of the two row sets.
    pub fn intersection_size(&self, other: &RowSet) -> Result<usize, OracleError> {
        if self.width != other.width {
            return Err(OracleError::WidthMismatch(self.width, other.width));
        }
        let (small, large) = if self.rows.len() <= other.rows.len() {
            (&self.rows, &other.rows)
        } else {
            (&other.rows, &self.rows)
        };
        Ok(small.iter().filter(|r| large.contains(*r)).count())
    }
}

/// Convenience wrapper for two dense matrices.
pub fn row_set_intersection_size(a: &BitMatrix, b: &BitMatrix) -> Result<usize, OracleError> {
    RowSet::from_bit_matrix(a).intersection_size(&RowSet::from_bit_matrix(b))
}

// ---------------------------------------------------------------------------
// Codebooks
// ---------------------------------------------------------------------------

/// Every encoded matrix of a tiny code, paired with its source block.
/// Addresses are identical across entries.
#[derive(Debug, Clone)]
pub struct Codebook {
    pub n: usize,
    pub k: usize,
    pub w: usize,
    pub a: u32,
    encoded: Vec<BitMatrix>,
    sources: Vec<BitMatrix>,
}

impl Codebook {
    pub fn len(&self) -> usize {
        self.encoded.len()
    }

    pub fn is_empty(&self) -> bool {
        self.encoded.is_empty()
    }

    pub fn encoded(&self, i: usize) -> &BitMatrix {
        &self.encoded[i]
    }

    pub fn source(&self, i: usize) -> &BitMatrix {
        &self.sources[i]
    }

    pub fn row_width(&self) -> usize {
        self.w + self.a as usize
    }
}

/// Enumerate the codebook of a random `(n, k)` linear code over GF(2^w):
/// a uniform generator matrix maps each of the `2^(kw)` source blocks to a
/// data block, and addresses are appended as usual.
///
/// Source blocks are enumerated by index: bit `h*w + j` of the index is
/// entry `(h, j)` of the source, and row `h` doubles as the field element
/// whose coefficient of `x^j` is that bit.
pub fn rlc_codebook(n: usize, k: usize, w: u32, seed: u64) -> Result<Codebook, OracleError> {
    let field = Gf2wField::new(w)?;
    let kw = k * w as usize;
    if kw > MAX_CODEBOOK_BITS {
        return Err(OracleError::TooLarge { what: "kw", got: kw, cap: MAX_CODEBOOK_BITS });
    }
    let a = min_address_width(n);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    // G^T has n rows of k elements; row i produces data row i.
    let gt: Vec<Vec<u16>> = (0..n)
        .map(|_| (0..k).map(|_| rng.gen_range(0..field.order()) as u16).collect())
        .collect();

    let count = 1usize << kw;
    let mut encoded = Vec::with_capacity(count);
    let mut sources = Vec::with_capacity(count);
    for index in 0..count {
        let u: Vec<u16> = (0..k)
            .map(|h| ((index >> (h * w as usize)) & ((1 << w) - 1)) as u16)
            .collect();
        let mut source = BitMatrix::zeros(k, w as usize);
        for (h, &e) in u.iter().enumerate() {
            for j in 0..w as usize {
                source.set(h, j, (e >> j) & 1 == 1);
            }
        }
        let mut x = BitMatrix::zeros(n, w as usize + a as usize);
        for i in 0..n {
            let v = field.dot(&gt[i], &u);
            for j in 0..w as usize {
                x.set(i, j, (v >> j) & 1 == 1);
            }
            for (off, bit) in address_encode(i + 1, a)
                .expect("address fits")
                .into_iter()
                .enumerate()
            {
                x.set(i, w as usize + off, bit == 1);
            }
        }
        encoded.push(x);
        sources.push(source);
    }
    Ok(Codebook { n, k, w: w as usize, a, encoded, sources })
}

// ---------------------------------------------------------------------------
// Reference decoders
// ---------------------------------------------------------------------------

/// A brute-force decode either lands on one codebook index or reports the
/// full argmax set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleDecode {
    Unique(usize),
    Tie(Vec<usize>),
}

impl OracleDecode {
    pub fn unique(&self) -> Option<usize> {
        match self {
            OracleDecode::Unique(i) => Some(*i),
            OracleDecode::Tie(_) => None,
        }
    }
}

/// Decode by maximizing the row-set intersection with the reception.
///
/// When all delivered rows are distinct this is exactly maximum
/// likelihood.
pub fn ml_intersection_decode(
    z: &ReceivedMatrix,
    codebook: &Codebook,
) -> Result<OracleDecode, OracleError> {
    let zset = RowSet::from_received(z, codebook.row_width());
    let mut best = 0usize;
    let mut arg = Vec::new();
    for i in 0..codebook.len() {
        let size = RowSet::from_bit_matrix(codebook.encoded(i)).intersection_size(&zset)?;
        if size > best || arg.is_empty() {
            best = size;
            arg = vec![i];
        } else if size == best {
            arg.push(i);
        }
    }
    Ok(if arg.len() == 1 {
        OracleDecode::Unique(arg[0])
    } else {
        OracleDecode::Tie(arg)
    })
}

/// Log-probability of one received slot given one transmitted row.
fn slot_log_prob(slot: &ReceivedRow, row: &[u8], params: &ChannelParams) -> f64 {
    match slot {
        ReceivedRow::Erased => params.p_e.ln(),
        ReceivedRow::Present(bits) if bits == row => params.p_c.ln(),
        ReceivedRow::Present(_) => {
            // ln(p_s / (2^l - 1)) in scaled form.
            params.p_s.ln() - (params.l as f64) * std::f64::consts::LN_2
                - (1.0 - (-(params.l as f64)).exp2()).ln()
        }
    }
}

/// Streaming log-sum-exp accumulator.
struct LogSum {
    max: f64,
    sum: f64,
}

impl LogSum {
    fn new() -> Self {
        Self { max: f64::NEG_INFINITY, sum: 0.0 }
    }

    fn add(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        if x > self.max {
            self.sum = self.sum * (self.max - x).exp() + 1.0;
            self.max = x;
        } else {
            self.sum += (x - self.max).exp();
        }
    }

    fn value(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + self.sum.ln()
        }
    }
}

/// Exact maximum-likelihood decoding by summing the transition probability
/// over all `n!` row permutations, in the log domain.
///
/// Limited to `n <= 8`; this is the ground truth the intersection rule is
/// checked against.
pub fn ml_exact_decode(
    z: &ReceivedMatrix,
    codebook: &Codebook,
    params: &ChannelParams,
) -> Result<OracleDecode, OracleError> {
    let n = codebook.n;
    if n > MAX_PERMUTATION_ROWS {
        return Err(OracleError::TooLarge {
            what: "n",
            got: n,
            cap: MAX_PERMUTATION_ROWS,
        });
    }
    if z.len() != n {
        return Err(OracleError::WidthMismatch(z.len(), n));
    }

    let mut scores = Vec::with_capacity(codebook.len());
    for c in 0..codebook.len() {
        let x = codebook.encoded(c);
        // lp[i][j] = log P(slot i | row j)
        let lp: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| slot_log_prob(z.slot(i), &x.row_bits(j), params))
                    .collect()
            })
            .collect();
        let mut acc = LogSum::new();
        let mut used = vec![false; n];
        fn dfs(
            depth: usize,
            partial: f64,
            lp: &[Vec<f64>],
            used: &mut [bool],
            acc: &mut LogSum,
        ) {
            if partial == f64::NEG_INFINITY {
                return;
            }
            if depth == lp.len() {
                acc.add(partial);
                return;
            }
            for j in 0..lp.len() {
                if !used[j] {
                    used[j] = true;
                    dfs(depth + 1, partial + lp[depth][j], lp, used, acc);
                    used[j] = false;
                }
            }
        }
        dfs(0, 0.0, &lp, &mut used, &mut acc);
        scores.push(acc.value());
    }

    let best = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let arg: Vec<usize> = (0..scores.len()).filter(|&i| scores[i] == best).collect();
    Ok(if arg.len() == 1 {
        OracleDecode::Unique(arg[0])
    } else {
        OracleDecode::Tie(arg)
    })
}

/// Margin between the best and second-best exact-ML scores, for filtering
/// numerically ambiguous instances in cross-oracle tests.
pub fn ml_exact_margin(
    z: &ReceivedMatrix,
    codebook: &Codebook,
    params: &ChannelParams,
) -> Result<f64, OracleError> {
    let n = codebook.n;
    if n > MAX_PERMUTATION_ROWS {
        return Err(OracleError::TooLarge { what: "n", got: n, cap: MAX_PERMUTATION_ROWS });
    }
    let mut best = f64::NEG_INFINITY;
    let mut second = f64::NEG_INFINITY;
    for c in 0..codebook.len() {
        let x = codebook.encoded(c);
        let lp: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| slot_log_prob(z.slot(i), &x.row_bits(j), params))
                    .collect()
            })
            .collect();
        let mut acc = LogSum::new();
        let mut used = vec![false; n];
        fn dfs(depth: usize, partial: f64, lp: &[Vec<f64>], used: &mut [bool], acc: &mut LogSum) {
            if partial == f64::NEG_INFINITY {
                return;
            }
            if depth == lp.len() {
                acc.add(partial);
                return;
            }
            for j in 0..lp.len() {
                if !used[j] {
                    used[j] = true;
                    dfs(depth + 1, partial + lp[depth][j], lp, used, acc);
                    used[j] = false;
                }
            }
        }
        dfs(0, 0.0, &lp, &mut used, &mut acc);
        let s = acc.value();
        if s > best {
            second = best;
            best = s;
        } else if s > second {
            second = s;
        }
    }
    Ok(best - second)
}

/// Threshold decoding: succeed on the unique codebook entry sharing at
/// least `n (p_c - eps)` rows with the reception, fail otherwise.
pub fn threshold_decode(
    z: &ReceivedMatrix,
    codebook: &Codebook,
    p_c: f64,
    eps: f64,
) -> Result<Option<usize>, OracleError> {
    assert!(eps > 0.0 && eps < p_c, "eps must lie in (0, p_c)");
    let threshold = codebook.n as f64 * (p_c - eps);
    let zset = RowSet::from_received(z, codebook.row_width());
    let mut hits = Vec::new();
    for i in 0..codebook.len() {
        let size = RowSet::from_bit_matrix(codebook.encoded(i)).intersection_size(&zset)?;
        if size as f64 >= threshold {
            hits.push(i);
            if hits.len() > 1 {
                return Ok(None);
            }
        }
    }
    Ok(if hits.len() == 1 { Some(hits[0]) } else { None })
}

// ---------------------------------------------------------------------------
// Nearest-codeword column decoding
// ---------------------------------------------------------------------------

/// Exhaustive list of the codewords of a tiny code.
pub fn enumerate_codewords(encoder: &Encoder) -> Result<Vec<Vec<u8>>, OracleError> {
    let k = encoder.k();
    if k > MAX_CODEBOOK_BITS {
        return Err(OracleError::TooLarge { what: "k", got: k, cap: MAX_CODEBOOK_BITS });
    }
    let mut out = Vec::with_capacity(1 << k);
    for index in 0..(1usize << k) {
        let info: Vec<u8> = (0..k).map(|b| ((index >> b) & 1) as u8).collect();
        out.push(encoder.encode(&info).expect("sizes match"));
    }
    Ok(out)
}

/// Decode a trit column as the nearest codeword by Hamming distance over
/// the resolved positions. A tie between minimizers is a failure.
pub fn nearest_codeword_decode(column: &[Trit], codewords: &[Vec<u8>]) -> Option<Vec<u8>> {
    let mut best = usize::MAX;
    let mut winner: Option<&Vec<u8>> = None;
    let mut tied = false;
    for cw in codewords {
        debug_assert_eq!(cw.len(), column.len());
        let dist = column
            .iter()
            .zip(cw)
            .filter(|(t, &b)| !matches!(t, Trit::Unknown) && !t.matches_bit(b))
            .count();
        match dist.cmp(&best) {
            std::cmp::Ordering::Less => {
                best = dist;
                winner = Some(cw);
                tied = false;
            }
            std::cmp::Ordering::Equal => tied = true,
            std::cmp::Ordering::Greater => {}
        }
    }
    if tied {
        None
    } else {
        winner.cloned()
    }
}

/// [`ColumnDecoder`] running exhaustive nearest-codeword search on the
/// signs of the column LLRs (zero means unresolved).
pub struct NearestCodewordDecoder {
    codewords: Vec<Vec<u8>>,
}

impl NearestCodewordDecoder {
    pub fn from_encoder(encoder: &Encoder) -> Result<Self, OracleError> {
        Ok(Self { codewords: enumerate_codewords(encoder)? })
    }

    pub fn codewords(&self) -> &[Vec<u8>] {
        &self.codewords
    }
}

impl ColumnDecoder for NearestCodewordDecoder {
    fn decode_column(&self, llr: &[f64]) -> Option<Vec<u8>> {
        let trits: Vec<Trit> = llr
            .iter()
            .map(|&v| {
                if v > 0.0 {
                    Trit::Zero
                } else if v < 0.0 {
                    Trit::One
                } else {
                    Trit::Unknown
                }
            })
            .collect();
        nearest_codeword_decode(&trits, &self.codewords)
    }
}

// ---------------------------------------------------------------------------
// Statistical checks
// ---------------------------------------------------------------------------

/// Agreement between the closed-form per-bit LLR and a Monte-Carlo
/// estimate of the same conditional log-odds.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrAgreement {
    /// Tally cells with enough samples to be judged.
    pub cells_checked: usize,
    /// Largest |empirical - formula| over the judged cells.
    pub max_abs_deviation: f64,
    /// Per-cell detail: (t, t0, samples, formula LLR, empirical LLR).
    pub cells: Vec<(u32, u32, u64, f64, f64)>,
}

/// Estimate `ln P(bit = 0 | t, t0) / P(bit = 1 | t, t0)` by simulating
/// `trials` transmissions of uniform data blocks (no column code; the
/// conditional law does not depend on it) and conditioning on the tally
/// cell of every data position. Cells with fewer than `min_cell_samples`
/// observations are skipped.
///
/// Deterministic for a fixed seed regardless of parallelism: trials derive
/// their generators by index and histogram merging is integer addition.
pub fn empirical_llr_agreement(
    params: &ChannelParams,
    n: usize,
    w: usize,
    a: u32,
    trials: u64,
    min_cell_samples: u64,
    seed: u64,
) -> LlrAgreement {
    use crate::channel::{transmit_with_rng, trial_rng};
    use crate::outer::{address_encode as addr, llr_from_tally, tally};

    let cells_total = (n + 1) * (n + 2) / 2;
    let cell_index = |t: u32, t0: u32| (t as usize * (t as usize + 1)) / 2 + t0 as usize;

    let simulate_chunk = |from: u64, to: u64| -> Vec<[u64; 2]> {
        let mut hist = vec![[0u64; 2]; cells_total];
        for trial in from..to {
            let mut rng = trial_rng(seed, trial);
            let mut x = BitMatrix::zeros(n, w + a as usize);
            let mut truth = vec![0u8; n * w];
            for i in 0..n {
                for j in 0..w {
                    let bit = rng.gen_range(0..2u8);
                    truth[i * w + j] = bit;
                    x.set(i, j, bit == 1);
                }
                for (off, b) in addr(i + 1, a).expect("fits").into_iter().enumerate() {
                    x.set(i, w + off, b == 1);
                }
            }
            let z = transmit_with_rng(&x, params, &mut rng);
            let counts = tally(&z, n, w, a);
            for i in 0..n {
                let t = counts.t(i);
                for j in 0..w {
                    let idx = cell_index(t, counts.t0(i, j));
                    hist[idx][truth[i * w + j] as usize] += 1;
                }
            }
        }
        hist
    };

    const CHUNK: u64 = 100_000;
    let ranges: Vec<(u64, u64)> = (0..trials)
        .step_by(CHUNK as usize)
        .map(|from| (from, (from + CHUNK).min(trials)))
        .collect();
    #[cfg(feature = "parallel")]
    let partials: Vec<Vec<[u64; 2]>> = {
        use rayon::prelude::*;
        ranges.par_iter().map(|&(a, b)| simulate_chunk(a, b)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let partials: Vec<Vec<[u64; 2]>> =
        ranges.iter().map(|&(a, b)| simulate_chunk(a, b)).collect();

    let mut hist = vec![[0u64; 2]; cells_total];
    for part in partials {
        for (acc, p) in hist.iter_mut().zip(part) {
            acc[0] += p[0];
            acc[1] += p[1];
        }
    }

    let mix = params.mixture_probs(a).expect("a < l");
    let mut cells = Vec::new();
    let mut max_dev = 0.0f64;
    for t in 0..=n as u32 {
        for t0 in 0..=t {
            let [c0, c1] = hist[cell_index(t, t0)];
            let samples = c0 + c1;
            if samples < min_cell_samples {
                continue;
            }
            let empirical = if c0 == 0 {
                f64::NEG_INFINITY
            } else if c1 == 0 {
                f64::INFINITY
            } else {
                (c0 as f64 / c1 as f64).ln()
            };
            let formula = llr_from_tally(t, t0, n, &mix);
            let dev = (empirical - formula).abs();
            max_dev = max_dev.max(dev);
            cells.push((t, t0, samples, formula, empirical));
        }
    }
    LlrAgreement { cells_checked: cells.len(), max_abs_deviation: max_dev, cells }
}

/// Empirical frequency of row coincidence between two random-codebook
/// entries: each sample draws a fresh pair of generator rows and two
/// distinct source blocks, and tests one row of each for equality. The
/// frequency concentrates at `2^-w`.
pub fn random_code_coincidence_rate(
    w: u32,
    k: usize,
    samples: usize,
    seed: u64,
) -> Result<f64, OracleError> {
    let field = Gf2wField::new(w)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut hits = 0usize;
    for _ in 0..samples {
        let u1: Vec<u16> = (0..k).map(|_| rng.gen_range(0..field.order()) as u16).collect();
        let u2: Vec<u16> = loop {
            let u: Vec<u16> =
                (0..k).map(|_| rng.gen_range(0..field.order()) as u16).collect();
            if u != u1 {
                break u;
            }
        };
        // Same generator row or different ones; both cases follow the
        // same coincidence law.
        let g1: Vec<u16> = (0..k).map(|_| rng.gen_range(0..field.order()) as u16).collect();
        let g2: Vec<u16> = if rng.gen_bool(0.5) {
            g1.clone()
        } else {
            (0..k).map(|_| rng.gen_range(0..field.order()) as u16).collect()
        };
        if field.dot(&g1, &u1) == field.dot(&g2, &u2) {
            hits += 1;
        }
    }
    Ok(hits as f64 / samples as f64)
}
