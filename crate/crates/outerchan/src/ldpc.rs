//! Parity-check matrix I/O (alist and quasi-cyclic), systematic encoding,
//! and sum-product belief-propagation decoding for the per-column ECC.
//!
//! The column code is any binary linear code given by a parity-check
//! matrix. Two sources are supported: MacKay alist files and quasi-cyclic
//! base matrices expanded with a configurable lifting size. The bundled
//! rate-5/6 base matrix ([`WIFI_1296_R56_QC`]) expands to the
//! `(1296, 1080)` code with lift 54 and to `(2592, 2160)` with lift 108.
//!
//! Decoding is exposed through the [`ColumnDecoder`] trait so that the
//! outer decoder can run belief propagation on large codes and exhaustive
//! nearest-codeword search on toy codes interchangeably.

use std::fmt::Write as _;

use thiserror::Error;

use crate::gf2::{BitMatrix, SparseBinMatrix};

/// Channel LLRs are clamped to this magnitude before decoding; substitution-
/// free operating points otherwise produce infinite ratios.
pub const LLR_CLAMP: f64 = 40.0;

/// IEEE 802.11n rate-5/6 quasi-cyclic base matrix for codeword length 1296
/// (lift 54), in the text format read by [`QcBase::parse`].
pub const WIFI_1296_R56_QC: &str = include_str!("../assets/wifi_1296_r56.qc");

/// Errors from code loading and encoding.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CodeError {
    #[error("line {line}: {msg}")]
    ParseError { line: usize, msg: String },
    #[error("line {line}: degree list promises {expected} entries, found {found}")]
    DegreeMismatch { line: usize, expected: usize, found: usize },
    #[error("parity-check matrix has no rows")]
    EmptyMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

// ---------------------------------------------------------------------------
// alist I/O
// ---------------------------------------------------------------------------

struct Tokens<'a> {
    iter: std::iter::Peekable<std::vec::IntoIter<(usize, &'a str)>>,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        let toks: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .flat_map(|(i, line)| line.split_whitespace().map(move |t| (i + 1, t)))
            .collect();
        Self { iter: toks.into_iter().peekable() }
    }

    fn next_usize(&mut self, what: &str) -> Result<(usize, usize), CodeError> {
        match self.iter.next() {
            Some((line, tok)) => {
                let v = tok.parse::<usize>().map_err(|_| CodeError::ParseError {
                    line,
                    msg: format!("expected {what}, found {tok:?}"),
                })?;
                Ok((line, v))
            }
            None => Err(CodeError::ParseError {
                line: 0,
                msg: format!("unexpected end of input while reading {what}"),
            }),
        }
    }
}

/// Parse a MacKay-format alist into a parity-check matrix.
///
/// The header is `cols rows`, followed by the maximum column/row degrees,
/// the per-column and per-row degree lists, and 1-based index lists.
/// Zero-padded index lists (padding entries written as `0`) are accepted.
/// The result has `rows` rows and `cols` columns.
pub fn load_alist(text: &str) -> Result<SparseBinMatrix, CodeError> {
    let mut toks = Tokens::new(text);
    let (_, cols) = toks.next_usize("column count")?;
    let (_, rows) = toks.next_usize("row count")?;
    let (_, _max_col_deg) = toks.next_usize("max column degree")?;
    let (_, _max_row_deg) = toks.next_usize("max row degree")?;

    let mut col_degs = Vec::with_capacity(cols);
    for _ in 0..cols {
        col_degs.push(toks.next_usize("column degree")?.1);
    }
    let mut row_degs = Vec::with_capacity(rows);
    for _ in 0..rows {
        row_degs.push(toks.next_usize("row degree")?.1);
    }

    // Column lists: for each column, the 1-based row indices of its ones.
    let mut by_rows: Vec<Vec<usize>> = vec![Vec::new(); rows];
    for (c, &deg) in col_degs.iter().enumerate() {
        let mut seen = 0usize;
        // A writer may either emit exactly `deg` indices or pad to the max
        // degree with zeros; read until the promised count, tolerating pads.
        while seen < deg {
            let (line, idx) = toks.next_usize("row index")?;
            if idx == 0 {
                continue;
            }
            if idx > rows {
                return Err(CodeError::ParseError {
                    line,
                    msg: format!("row index {idx} exceeds {rows} (1-based)"),
                });
            }
            by_rows[idx - 1].push(c);
            seen += 1;
        }
    }

    // Row lists are redundant; consume them and cross-check the degrees.
    for (r, &deg) in row_degs.iter().enumerate() {
        let mut seen = 0usize;
        let mut last_line = 0usize;
        while seen < deg {
            let (line, idx) = toks.next_usize("column index")?;
            last_line = line;
            if idx == 0 {
                continue;
            }
            if idx > cols {
                return Err(CodeError::ParseError {
                    line,
                    msg: format!("column index {idx} exceeds {cols} (1-based)"),
                });
            }
            seen += 1;
        }
        if by_rows[r].len() != deg {
            return Err(CodeError::DegreeMismatch {
                line: last_line,
                expected: deg,
                found: by_rows[r].len(),
            });
        }
    }

    SparseBinMatrix::from_rows(cols, by_rows).map_err(|e| CodeError::ParseError {
        line: 0,
        msg: e.to_string(),
    })
}

/// Serialize a parity-check matrix in MacKay alist format (unpadded lists).
pub fn write_alist(h: &SparseBinMatrix) -> String {
    let rows = h.rows();
    let cols = h.cols();
    let mut by_cols: Vec<Vec<usize>> = vec![Vec::new(); cols];
    for r in 0..rows {
        for &c in h.row(r) {
            by_cols[c].push(r);
        }
    }
    let max_col = by_cols.iter().map(Vec::len).max().unwrap_or(0);
    let max_row = (0..rows).map(|r| h.row(r).len()).max().unwrap_or(0);

    let mut out = String::new();
    let _ = writeln!(out, "{cols} {rows}");
    let _ = writeln!(out, "{max_col} {max_row}");
    let degs: Vec<String> = by_cols.iter().map(|c| c.len().to_string()).collect();
    let _ = writeln!(out, "{}", degs.join(" "));
    let degs: Vec<String> = (0..rows).map(|r| h.row(r).len().to_string()).collect();
    let _ = writeln!(out, "{}", degs.join(" "));
    for col in &by_cols {
        let idx: Vec<String> = col.iter().map(|&r| (r + 1).to_string()).collect();
        let _ = writeln!(out, "{}", idx.join(" "));
    }
    for r in 0..rows {
        let idx: Vec<String> = h.row(r).iter().map(|&c| (c + 1).to_string()).collect();
        let _ = writeln!(out, "{}", idx.join(" "));
    }
    out
}

// ---------------------------------------------------------------------------
// Quasi-cyclic codes
// ---------------------------------------------------------------------------

/// Quasi-cyclic base matrix: each entry is either `-1` (all-zero block) or a
/// right-shift `s` in `[0, lift)` of the `lift x lift` identity circulant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QcBase {
    pub base_rows: usize,
    pub base_cols: usize,
    pub lift: usize,
    entries: Vec<i32>,
}

impl QcBase {
    pub fn new(
        base_rows: usize,
        base_cols: usize,
        lift: usize,
        entries: Vec<i32>,
    ) -> Result<Self, CodeError> {
        if lift == 0 {
            return Err(CodeError::DimensionMismatch("lift must be positive".into()));
        }
        if entries.len() != base_rows * base_cols {
            return Err(CodeError::DimensionMismatch(format!(
                "expected {} entries, got {}",
                base_rows * base_cols,
                entries.len()
            )));
        }
        if let Some(&bad) = entries.iter().find(|&&e| e < -1 || e >= lift as i32) {
            return Err(CodeError::DimensionMismatch(format!(
                "shift {bad} outside [-1, {lift})"
            )));
        }
        Ok(Self { base_rows, base_cols, lift, entries })
    }

    /// Parse the text format: first line `rows cols lift`, then `rows` lines
    /// of `cols` integers where `-1` marks the zero block. `#` starts a
    /// comment.
    pub fn parse(text: &str) -> Result<Self, CodeError> {
        let mut nums = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("");
            for tok in line.split_whitespace() {
                let v = tok.parse::<i32>().map_err(|_| CodeError::ParseError {
                    line: i + 1,
                    msg: format!("expected integer, found {tok:?}"),
                })?;
                nums.push(v);
            }
        }
        if nums.len() < 3 {
            return Err(CodeError::ParseError {
                line: 1,
                msg: "header must be: rows cols lift".into(),
            });
        }
        let (rows, cols, lift) = (nums[0], nums[1], nums[2]);
        if rows <= 0 || cols <= 0 || lift <= 0 {
            return Err(CodeError::ParseError {
                line: 1,
                msg: format!("non-positive header {rows} {cols} {lift}"),
            });
        }
        let entries = nums.split_off(3);
        Self::new(rows as usize, cols as usize, lift as usize, entries)
    }

    /// Same base matrix with a different lifting size. Shift values must
    /// remain valid for the new lift.
    pub fn with_lift(&self, lift: usize) -> Result<Self, CodeError> {
        Self::new(self.base_rows, self.base_cols, lift, self.entries.clone())
    }

    pub fn entry(&self, r: usize, c: usize) -> i32 {
        self.entries[r * self.base_cols + c]
    }
}

/// Expand a quasi-cyclic base matrix into its binary parity-check matrix.
///
/// Entry `s >= 0` at block `(br, bc)` places ones at
/// `(br*Z + r, bc*Z + (r + s) mod Z)` for every `r`, with `Z` the lift.
pub fn expand_qc(base: &QcBase) -> SparseBinMatrix {
    let z = base.lift;
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); base.base_rows * z];
    for br in 0..base.base_rows {
        for bc in 0..base.base_cols {
            let s = base.entry(br, bc);
            if s < 0 {
                continue;
            }
            let s = s as usize;
            for r in 0..z {
                rows[br * z + r].push(bc * z + (r + s) % z);
            }
        }
    }
    SparseBinMatrix::from_rows(base.base_cols * z, rows)
        .expect("expansion produces valid indices")
}

// ---------------------------------------------------------------------------
// Systematic encoder
// ---------------------------------------------------------------------------

/// Systematic encoder for the code `{v : H v = 0}`.
///
/// Pivot columns are chosen scanning right-to-left, so the information
/// positions are the lowest-index non-pivot columns; each parity position
/// is a precomputed XOR of information bits. Rank-deficient matrices simply
/// yield more information positions.
#[derive(Debug, Clone)]
pub struct Encoder {
    h: SparseBinMatrix,
    info_positions: Vec<usize>,
    /// For each pivot column, (position, packed mask over the k info bits).
    parity_maps: Vec<(usize, Vec<u64>)>,
    info_words: usize,
}

impl Encoder {
    /// Build an encoder from a parity-check matrix.
    pub fn from_parity_check(h: SparseBinMatrix) -> Result<Self, CodeError> {
        let n = h.cols();
        if h.rows() == 0 || n == 0 {
            return Err(CodeError::EmptyMatrix);
        }
        let mut work = h.to_dense();
        let rows = work.rows();
        let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
        let mut row_used = vec![false; rows];
        // Right-to-left pivot scan with full reduction, so that each pivot
        // row ends up referencing only information columns.
        for col in (0..n).rev() {
            let Some(pr) = (0..rows).find(|&r| !row_used[r] && work.get(r, col)) else {
                continue;
            };
            row_used[pr] = true;
            pivot_of_col[col] = Some(pr);
            for r in 0..rows {
                if r != pr && work.get(r, col) {
                    work.xor_row_into(pr, r);
                }
            }
        }
        let info_positions: Vec<usize> =
            (0..n).filter(|&c| pivot_of_col[c].is_none()).collect();
        let k = info_positions.len();
        let info_index: Vec<Option<usize>> = {
            let mut v = vec![None; n];
            for (j, &c) in info_positions.iter().enumerate() {
                v[c] = Some(j);
            }
            v
        };
        let info_words = k.div_ceil(64).max(1);
        let mut parity_maps = Vec::with_capacity(n - k);
        for col in 0..n {
            let Some(pr) = pivot_of_col[col] else { continue };
            let mut mask = vec![0u64; info_words];
            for c in 0..n {
                if c != col && work.get(pr, c) {
                    let j = info_index[c].expect("fully reduced row touches only info columns");
                    mask[j / 64] |= 1 << (j % 64);
                }
            }
            parity_maps.push((col, mask));
        }
        Ok(Self { h, info_positions, parity_maps, info_words })
    }

    /// Codeword length.
    pub fn n(&self) -> usize {
        self.h.cols()
    }

    /// Number of information positions, `n - rank(H)`.
    pub fn k(&self) -> usize {
        self.info_positions.len()
    }

    /// Sorted information positions within the codeword.
    pub fn info_positions(&self) -> &[usize] {
        &self.info_positions
    }

    pub fn parity_check(&self) -> &SparseBinMatrix {
        &self.h
    }

    /// Encode a block of information columns: `info` is `k x w`, the result
    /// is the `n x w` matrix whose every column is a codeword carrying the
    /// corresponding info column at the information positions.
    pub fn encode_block(&self, info: &BitMatrix) -> Result<BitMatrix, CodeError> {
        if info.rows() != self.k() {
            return Err(CodeError::DimensionMismatch(format!(
                "expected {} info rows, got {}",
                self.k(),
                info.rows()
            )));
        }
        let w = info.cols();
        let mut v = BitMatrix::zeros(self.n(), w);
        for (j, &pos) in self.info_positions.iter().enumerate() {
            v.assign_row(pos, info.row_words(j));
        }
        let mut acc = vec![0u64; w.div_ceil(64).max(1)];
        for (pos, mask) in &self.parity_maps {
            acc.iter_mut().for_each(|x| *x = 0);
            for (word, &bits) in mask.iter().enumerate().take(self.info_words) {
                let mut bits = bits;
                while bits != 0 {
                    let j = word * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    for (a, &b) in acc.iter_mut().zip(info.row_words(j)) {
                        *a ^= b;
                    }
                }
            }
            v.assign_row(*pos, &acc);
        }
        Ok(v)
    }

    /// Encode one information column.
    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>, CodeError> {
        if info.len() != self.k() {
            return Err(CodeError::DimensionMismatch(format!(
                "expected {} info bits, got {}",
                self.k(),
                info.len()
            )));
        }
        let mut m = BitMatrix::zeros(self.k(), 1);
        for (j, &b) in info.iter().enumerate() {
            if b != 0 {
                m.set(j, 0, true);
            }
        }
        let v = self.encode_block(&m)?;
        Ok((0..self.n()).map(|r| v.get(r, 0) as u8).collect())
    }

    /// Extract the information bits of a codeword.
    pub fn extract_info(&self, codeword: &[u8]) -> Vec<u8> {
        self.info_positions.iter().map(|&p| codeword[p]).collect()
    }
}

/// `true` iff `H bits = 0`.
pub fn syndrome_check(h: &SparseBinMatrix, bits: &[u8]) -> bool {
    assert_eq!(bits.len(), h.cols(), "codeword length mismatch");
    (0..h.rows()).all(|r| h.row(r).iter().fold(0u8, |acc, &c| acc ^ (bits[c] & 1)) == 0)
}

// ---------------------------------------------------------------------------
// Column decoders
// ---------------------------------------------------------------------------

/// A decoder for one column of the data block, fed per-bit LLRs
/// (positive favors bit 0). Returns the decoded codeword, or `None` on
/// failure. Implementations must be deterministic and reentrant.
pub trait ColumnDecoder: Sync {
    fn decode_column(&self, llr: &[f64]) -> Option<Vec<u8>>;
}

/// Sum-product belief propagation in the log domain with a flooding
/// schedule, zero-initialized messages, and early exit on a zero syndrome.
#[derive(Debug, Clone)]
pub struct BpDecoder {
    h: SparseBinMatrix,
    max_iter: usize,
}

impl BpDecoder {
    pub fn new(h: SparseBinMatrix, max_iter: usize) -> Self {
        Self { h, max_iter }
    }

    pub fn parity_check(&self) -> &SparseBinMatrix {
        &self.h
    }

    /// Decode and also report the number of iterations run.
    ///
    /// Each iteration floods check updates (tanh rule) then variable
    /// updates; the loop exits as soon as the hard decision has a zero
    /// syndrome. Returned bits always satisfy `H v = 0`; `None` means
    /// `max_iter` ended without a valid codeword.
    pub fn decode(&self, llr: &[f64]) -> (Option<Vec<u8>>, usize) {
        let n = self.h.cols();
        assert_eq!(llr.len(), n, "LLR length mismatch");
        let llr: Vec<f64> = llr.iter().map(|&v| v.clamp(-LLR_CLAMP, LLR_CLAMP)).collect();

        // Messages live on edges, indexed row-major.
        let row_offsets: Vec<usize> = {
            let mut off = Vec::with_capacity(self.h.rows() + 1);
            off.push(0);
            for r in 0..self.h.rows() {
                off.push(off[r] + self.h.row(r).len());
            }
            off
        };
        let edges = row_offsets[self.h.rows()];
        let mut check_to_var = vec![0.0f64; edges];
        let mut var_to_check = vec![0.0f64; edges];
        let mut posterior = vec![0.0f64; n];
        let mut hard = vec![0u8; n];

        // First variable-to-check messages are the channel values.
        for r in 0..self.h.rows() {
            for (i, &c) in self.h.row(r).iter().enumerate() {
                var_to_check[row_offsets[r] + i] = llr[c];
            }
        }

        for iter in 1..=self.max_iter {
            // Check-node update. The excluded-edge product is formed in two
            // passes so a single zero message does not poison the row.
            for r in 0..self.h.rows() {
                let deg = self.h.row(r).len();
                let base = row_offsets[r];
                let mut prod = 1.0f64;
                let mut zero_count = 0usize;
                let mut zero_at = 0usize;
                for i in 0..deg {
                    let t = (var_to_check[base + i] * 0.5).tanh();
                    if t == 0.0 {
                        zero_count += 1;
                        zero_at = i;
                    } else {
                        prod *= t;
                    }
                    check_to_var[base + i] = t;
                }
                for i in 0..deg {
                    let out = match zero_count {
                        0 => prod / check_to_var[base + i],
                        1 if i == zero_at => prod,
                        _ => 0.0,
                    };
                    check_to_var[base + i] = if out.abs() >= 1.0 {
                        out.signum() * LLR_CLAMP
                    } else {
                        (2.0 * out.atanh()).clamp(-LLR_CLAMP, LLR_CLAMP)
                    };
                }
            }

            // Variable-node update and posterior.
            posterior.copy_from_slice(&llr);
            for r in 0..self.h.rows() {
                for (i, &c) in self.h.row(r).iter().enumerate() {
                    posterior[c] += check_to_var[row_offsets[r] + i];
                }
            }
            for r in 0..self.h.rows() {
                for (i, &c) in self.h.row(r).iter().enumerate() {
                    let m = posterior[c] - check_to_var[row_offsets[r] + i];
                    var_to_check[row_offsets[r] + i] = m.clamp(-LLR_CLAMP, LLR_CLAMP);
                }
            }

            for v in 0..n {
                hard[v] = (posterior[v] < 0.0) as u8;
            }
            if syndrome_check(&self.h, &hard) {
                return (Some(hard), iter);
            }
        }
        (None, self.max_iter)
    }
}

impl ColumnDecoder for BpDecoder {
    fn decode_column(&self, llr: &[f64]) -> Option<Vec<u8>> {
        self.decode(llr).0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn alist_round_trip_toy_code() {
        let h = fixtures::toy_parity_check();
        let text = write_alist(&h);
        let back = load_alist(&text).unwrap();
        assert_eq!(back, h);
        assert_eq!(back.rows(), 4);
        assert_eq!(back.cols(), 6);
    }

    #[test]
    fn alist_rejects_zero_based_index() {
        // A column of degree 1 whose only index is 0: padding zeros are
        // skipped, so the parse runs out of input.
        let text = "2 2\n1 1\n1 1\n1 1\n0\n2\n1\n2\n";
        assert!(load_alist(text).is_err());
    }

    #[test]
    fn alist_detects_degree_mismatch() {
        // Row degree list promises 2 ones in row 1, column lists give 1.
        let text = "2 2\n1 2\n1 1\n2 1\n1\n2\n1 2\n1\n";
        assert!(matches!(
            load_alist(text),
            Err(CodeError::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn alist_accepts_zero_padding() {
        let h = fixtures::toy_parity_check();
        // Pad every column list to the max degree with zeros.
        let mut text = String::from("6 4\n3 3\n3 3 1 1 1 1\n2 3 3 2\n");
        let pads = [
            vec![1, 2, 3],
            vec![2, 3, 4],
            vec![1, 0, 0],
            vec![2, 0, 0],
            vec![3, 0, 0],
            vec![4, 0, 0],
        ];
        for p in pads {
            text.push_str(&p.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "));
            text.push('\n');
        }
        text.push_str("1 3\n1 2 4\n1 2 5\n2 6\n");
        assert_eq!(load_alist(&text).unwrap(), h);
    }

    #[test]
    fn qc_identity_and_shift() {
        let base = QcBase::new(1, 1, 3, vec![0]).unwrap();
        let h = expand_qc(&base);
        assert_eq!(h.row(0), &[0]);
        assert_eq!(h.row(1), &[1]);
        assert_eq!(h.row(2), &[2]);
        let base = QcBase::new(1, 1, 3, vec![1]).unwrap();
        let h = expand_qc(&base);
        assert_eq!(h.row(0), &[1]);
        assert_eq!(h.row(1), &[2]);
        assert_eq!(h.row(2), &[0]);
    }

    #[test]
    fn qc_wifi_base_expands_full_rank() {
        let base = QcBase::parse(WIFI_1296_R56_QC).unwrap();
        assert_eq!((base.base_rows, base.base_cols, base.lift), (4, 24, 54));
        let h = expand_qc(&base);
        assert_eq!((h.rows(), h.cols()), (216, 1296));
        assert_eq!(h.to_dense().rank(), 216);
    }

    #[test]
    fn qc_wifi_relift_doubles_code() {
        let base = QcBase::parse(WIFI_1296_R56_QC).unwrap().with_lift(108).unwrap();
        let h = expand_qc(&base);
        assert_eq!((h.rows(), h.cols()), (432, 2592));
        assert_eq!(h.to_dense().rank(), 432);
    }

    #[test]
    fn encoder_reproduces_toy_codewords() {
        let enc = Encoder::from_parity_check(fixtures::toy_parity_check()).unwrap();
        assert_eq!(enc.info_positions(), &[0, 1]);
        assert_eq!(enc.encode(&[0, 0]).unwrap(), vec![0, 0, 0, 0, 0, 0]);
        assert_eq!(enc.encode(&[1, 0]).unwrap(), vec![1, 0, 1, 1, 1, 0]);
        assert_eq!(enc.encode(&[0, 1]).unwrap(), vec![0, 1, 0, 1, 1, 1]);
        assert_eq!(enc.encode(&[1, 1]).unwrap(), vec![1, 1, 1, 0, 0, 1]);
    }

    #[test]
    fn encoder_square_identity_has_no_info() {
        let h = SparseBinMatrix::from_rows(3, vec![vec![0], vec![1], vec![2]]).unwrap();
        let enc = Encoder::from_parity_check(h).unwrap();
        assert_eq!(enc.k(), 0);
        assert_eq!(enc.encode(&[]).unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn encoder_output_always_on_code() {
        let base = QcBase::parse(WIFI_1296_R56_QC).unwrap();
        let h = expand_qc(&base);
        let enc = Encoder::from_parity_check(h.clone()).unwrap();
        assert_eq!(enc.k(), 1080);
        let info: Vec<u8> = (0..1080).map(|i| ((i * 7 + 3) % 5 == 0) as u8).collect();
        let cw = enc.encode(&info).unwrap();
        assert!(syndrome_check(&h, &cw));
        assert_eq!(enc.extract_info(&cw), info);
    }

    #[test]
    fn syndrome_check_basics() {
        let h = fixtures::toy_parity_check();
        assert!(syndrome_check(&h, &[0; 6]));
        for i in 0..6 {
            let mut e = [0u8; 6];
            e[i] = 1;
            assert!(!syndrome_check(&h, &e), "unit vector {i}");
        }
        assert!(syndrome_check(&h, &[1, 1, 1, 0, 0, 1]));
    }

    #[test]
    fn bp_decodes_clean_input_in_one_iteration() {
        let dec = BpDecoder::new(fixtures::toy_parity_check(), 100);
        let (bits, iters) = dec.decode(&[10.0; 6]);
        assert_eq!(bits.unwrap(), vec![0; 6]);
        assert_eq!(iters, 1);
    }

    #[test]
    fn bp_fills_single_erasure() {
        // Hard information (?, 0, 0, 0, 0, 0): the all-zero codeword is the
        // unique nearest codeword, and BP agrees.
        let dec = BpDecoder::new(fixtures::toy_parity_check(), 100);
        let c = LLR_CLAMP;
        let (bits, _) = dec.decode(&[0.0, c, c, c, c, c]);
        assert_eq!(bits.unwrap(), vec![0; 6]);
    }

    #[test]
    fn bp_result_always_satisfies_syndrome() {
        let h = fixtures::toy_parity_check();
        let dec = BpDecoder::new(h.clone(), 50);
        // A mix of weak and contradictory values.
        let cases: &[[f64; 6]] = &[
            [1.0, -1.0, 0.5, -0.5, 2.0, -2.0],
            [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            [-3.0, 3.0, -3.0, 3.0, -3.0, 3.0],
        ];
        for llr in cases {
            if let (Some(bits), _) = dec.decode(llr) {
                assert!(syndrome_check(&h, &bits));
            }
        }
    }

    #[test]
    fn bp_survives_saturated_inputs() {
        let dec = BpDecoder::new(fixtures::toy_parity_check(), 100);
        let (bits, iters) = dec.decode(&[1e9, 1e9, 1e9, 1e9, 1e9, 1e9]);
        assert_eq!(bits.unwrap(), vec![0; 6]);
        assert_eq!(iters, 1);
    }
}
