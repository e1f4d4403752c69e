//! Bit-packed binary linear algebra: dense and sparse matrices over GF(2),
//! rank computation, and an incremental pinned-variable solver.
//!
//! The solver answers the question at the heart of joint decoding: given the
//! constraints `H v = 0` (applied column-wise to a block of right-hand
//! sides) and a growing set of pinned entries `v[pos] = bits`, is the system
//! underdetermined, uniquely determined, or contradictory? Pins arrive one
//! at a time and the status must be exact after every pin, so the solver
//! maintains an online row-echelon basis of `H` plus one unit row per pin.
//! Since every pin fixes the same position across all right-hand-side
//! columns, one elimination is shared by all of them; only the per-column
//! parity bits ride along as a mask.

use thiserror::Error;

const WORD_BITS: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

fn xor_words(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

fn lowest_set_bit(words: &[u64]) -> Option<usize> {
    for (i, &w) in words.iter().enumerate() {
        if w != 0 {
            return Some(i * WORD_BITS + w.trailing_zeros() as usize);
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Dense bit matrix
// ---------------------------------------------------------------------------

/// Dense binary matrix with bit-packed row-major storage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    /// All-zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_row = words_for(cols);
        Self {
            rows,
            cols,
            words_per_row,
            data: vec![0; rows * words_per_row],
        }
    }

    /// Build from rows of 0/1 bytes. All rows must share one length.
    pub fn from_bit_rows(rows: &[Vec<u8>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (c, &bit) in row.iter().enumerate() {
                if bit != 0 {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        let w = self.data[r * self.words_per_row + c / WORD_BITS];
        (w >> (c % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, bit: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.words_per_row + c / WORD_BITS];
        let mask = 1u64 << (c % WORD_BITS);
        if bit {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    /// Raw packed words of a row.
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    /// XOR row `src` into row `dst`.
    pub fn xor_row_into(&mut self, src: usize, dst: usize) {
        debug_assert_ne!(src, dst);
        let (src_off, dst_off) = (src * self.words_per_row, dst * self.words_per_row);
        for i in 0..self.words_per_row {
            let v = self.data[src_off + i];
            self.data[dst_off + i] ^= v;
        }
    }

    /// Overwrite row `dst` with the packed words `src`.
    pub fn assign_row(&mut self, dst: usize, src: &[u64]) {
        debug_assert_eq!(src.len(), self.words_per_row);
        self.data[dst * self.words_per_row..(dst + 1) * self.words_per_row].copy_from_slice(src);
    }

    /// Row as 0/1 bytes.
    pub fn row_bits(&self, r: usize) -> Vec<u8> {
        (0..self.cols).map(|c| self.get(r, c) as u8).collect()
    }

    /// GF(2) rank, computed on a scratch copy.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            let Some(pivot) = (rank..m.rows).find(|&r| m.get(r, col)) else {
                continue;
            };
            if pivot != rank {
                for i in 0..m.words_per_row {
                    m.data.swap(pivot * m.words_per_row + i, rank * m.words_per_row + i);
                }
            }
            for r in 0..m.rows {
                if r != rank && m.get(r, col) {
                    m.xor_row_into(rank, r);
                }
            }
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        rank
    }
}

// ---------------------------------------------------------------------------
// Sparse binary matrix
// ---------------------------------------------------------------------------

/// Sparse binary matrix stored as per-row sorted column-index lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseBinMatrix {
    cols: usize,
    rows: Vec<Vec<usize>>,
}

/// Errors from sparse-matrix construction.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SparseError {
    #[error("column index {index} out of range for {cols} columns (row {row})")]
    IndexOutOfRange { row: usize, index: usize, cols: usize },
    #[error("duplicate column index {index} in row {row}")]
    DuplicateIndex { row: usize, index: usize },
}

impl SparseBinMatrix {
    /// Build from per-row column-index lists. Indices are sorted here;
    /// duplicates and out-of-range indices are rejected.
    pub fn from_rows(cols: usize, mut rows: Vec<Vec<usize>>) -> Result<Self, SparseError> {
        for (r, row) in rows.iter_mut().enumerate() {
            row.sort_unstable();
            for pair in row.windows(2) {
                if pair[0] == pair[1] {
                    return Err(SparseError::DuplicateIndex { row: r, index: pair[0] });
                }
            }
            if let Some(&last) = row.last() {
                if last >= cols {
                    return Err(SparseError::IndexOutOfRange { row: r, index: last, cols });
                }
            }
        }
        Ok(Self { cols, rows })
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Sorted column indices of row `r`.
    pub fn row(&self, r: usize) -> &[usize] {
        &self.rows[r]
    }

    /// Number of stored ones.
    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn to_dense(&self) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.rows(), self.cols);
        for (r, row) in self.rows.iter().enumerate() {
            for &c in row {
                m.set(r, c, true);
            }
        }
        m
    }

    pub fn from_dense(m: &BitMatrix) -> Self {
        let rows = (0..m.rows())
            .map(|r| (0..m.cols()).filter(|&c| m.get(r, c)).collect())
            .collect();
        Self { cols: m.cols(), rows }
    }
}

// ---------------------------------------------------------------------------
// Pinned system
// ---------------------------------------------------------------------------

/// Solvability of a pinned system. Transitions are monotone: once
/// `Inconsistent`, further pins never leave it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemStatus {
    /// More than one assignment satisfies constraints and pins.
    Underdetermined,
    /// Exactly one assignment per right-hand-side column.
    UniqueConsistent,
    /// No assignment satisfies constraints and pins.
    Inconsistent,
}

/// Errors from [`PinnedSystem::pin`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PinError {
    /// The position was pinned before with different values. The system
    /// state is unchanged; the caller decides whether to skip or abort.
    #[error("position {0} already pinned with different values")]
    ConflictingPin(usize),
    #[error("position {pos} out of range for {n} variables")]
    OutOfRange { pos: usize, n: usize },
    #[error("expected {expected} value bits, got {got}")]
    WidthMismatch { expected: usize, got: usize },
}

/// Errors from [`PinnedSystem::solve`].
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum SolveError {
    #[error("system is not uniquely determined")]
    NotUnique,
    #[error("system is inconsistent")]
    Inconsistent,
}

struct EchelonRow {
    support: Vec<u64>,
    rhs: Vec<u64>,
}

/// Incremental solver for `H v = 0` over a block of right-hand-side columns
/// with a growing set of pinned entries.
///
/// Every pin fixes `v[pos]` to one bit per column. The status after each
/// pin is exact — a pure function of `(H, pins)` regardless of pin order —
/// and [`PinnedSystem::solve`] recovers the unique assignment once the
/// status reaches [`SystemStatus::UniqueConsistent`].
pub struct PinnedSystem {
    h: SparseBinMatrix,
    n: usize,
    rhs_count: usize,
    support_words: usize,
    rhs_words: usize,
    pins: Vec<Option<Vec<u64>>>,
    pinned_count: usize,
    pivot_row: Vec<Option<usize>>,
    rows: Vec<EchelonRow>,
    rank: usize,
    inconsistent: bool,
}

impl PinnedSystem {
    /// Start from the constraints alone: no pins, and a status of
    /// `Underdetermined` unless `H` already has full column rank.
    pub fn new(h: SparseBinMatrix, rhs_count: usize) -> Self {
        let n = h.cols();
        let mut sys = Self {
            n,
            rhs_count,
            support_words: words_for(n),
            rhs_words: words_for(rhs_count),
            pins: vec![None; n],
            pinned_count: 0,
            pivot_row: vec![None; n],
            rows: Vec::with_capacity(h.rows() + n),
            rank: 0,
            inconsistent: false,
            h,
        };
        for r in 0..sys.h.rows() {
            let mut support = vec![0u64; sys.support_words];
            for &c in sys.h.row(r) {
                support[c / WORD_BITS] |= 1 << (c % WORD_BITS);
            }
            sys.insert_row(support, vec![0u64; sys.rhs_words]);
        }
        sys
    }

    pub fn status(&self) -> SystemStatus {
        if self.inconsistent {
            SystemStatus::Inconsistent
        } else if self.rank == self.n {
            SystemStatus::UniqueConsistent
        } else {
            SystemStatus::Underdetermined
        }
    }

    /// Positions pinned so far.
    pub fn pinned_count(&self) -> usize {
        self.pinned_count
    }

    /// Number of variables.
    pub fn vars(&self) -> usize {
        self.n
    }

    /// Pin `v[pos]` to `values` (one 0/1 byte per right-hand-side column)
    /// and return the updated status.
    ///
    /// Re-pinning a position with identical values is a no-op. Re-pinning
    /// with different values fails with [`PinError::ConflictingPin`] and
    /// leaves the system untouched.
    pub fn pin(&mut self, pos: usize, values: &[u8]) -> Result<SystemStatus, PinError> {
        if pos >= self.n {
            return Err(PinError::OutOfRange { pos, n: self.n });
        }
        if values.len() != self.rhs_count {
            return Err(PinError::WidthMismatch {
                expected: self.rhs_count,
                got: values.len(),
            });
        }
        let mut rhs = vec![0u64; self.rhs_words];
        for (j, &bit) in values.iter().enumerate() {
            if bit != 0 {
                rhs[j / WORD_BITS] |= 1 << (j % WORD_BITS);
            }
        }
        if let Some(existing) = &self.pins[pos] {
            if *existing == rhs {
                return Ok(self.status());
            }
            return Err(PinError::ConflictingPin(pos));
        }
        self.pins[pos] = Some(rhs.clone());
        self.pinned_count += 1;
        // Once inconsistent the status can never recover, so further
        // elimination work is pointless.
        if !self.inconsistent {
            let mut support = vec![0u64; self.support_words];
            support[pos / WORD_BITS] |= 1 << (pos % WORD_BITS);
            self.insert_row(support, rhs);
        }
        Ok(self.status())
    }

    /// Reduce a row against the basis; keep it as a new pivot row or detect
    /// a contradiction when it vanishes with a nonzero right-hand side.
    fn insert_row(&mut self, mut support: Vec<u64>, mut rhs: Vec<u64>) {
        while let Some(lead) = lowest_set_bit(&support) {
            match self.pivot_row[lead] {
                Some(r) => {
                    xor_words(&mut support, &self.rows[r].support);
                    xor_words(&mut rhs, &self.rows[r].rhs);
                }
                None => {
                    self.pivot_row[lead] = Some(self.rows.len());
                    self.rows.push(EchelonRow { support, rhs });
                    self.rank += 1;
                    return;
                }
            }
        }
        if rhs.iter().any(|&w| w != 0) {
            self.inconsistent = true;
        }
    }

    /// Recover the unique assignment as an `n x rhs_count` matrix.
    ///
    /// Only valid in the `UniqueConsistent` state. The result is verified
    /// against `H` before returning: every column has a zero syndrome and
    /// every pin is honored.
    pub fn solve(&self) -> Result<BitMatrix, SolveError> {
        match self.status() {
            SystemStatus::Inconsistent => return Err(SolveError::Inconsistent),
            SystemStatus::Underdetermined => return Err(SolveError::NotUnique),
            SystemStatus::UniqueConsistent => {}
        }
        let mut solution = BitMatrix::zeros(self.n, self.rhs_count);
        // Back-substitute from the highest pivot down. Rows are only
        // forward-reduced, so a pivot row may reference higher columns,
        // all of which are already solved.
        let mut acc = vec![0u64; self.rhs_words];
        for col in (0..self.n).rev() {
            let row = &self.rows[self.pivot_row[col].expect("full rank")];
            acc.copy_from_slice(&row.rhs);
            for (w, &bits) in row.support.iter().enumerate() {
                let mut bits = bits;
                while bits != 0 {
                    let c = w * WORD_BITS + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    if c > col {
                        xor_words(&mut acc, solution.row_words(c));
                    }
                }
            }
            solution.assign_row(col, &acc);
        }
        self.verify(&solution);
        Ok(solution)
    }

    fn verify(&self, solution: &BitMatrix) {
        let mut acc = vec![0u64; self.rhs_words];
        for r in 0..self.h.rows() {
            acc.iter_mut().for_each(|w| *w = 0);
            for &c in self.h.row(r) {
                xor_words(&mut acc, solution.row_words(c));
            }
            assert!(
                acc.iter().all(|&w| w == 0),
                "solver bug: solution violates constraint row {r}"
            );
        }
        for (pos, pin) in self.pins.iter().enumerate() {
            if let Some(pin) = pin {
                assert_eq!(
                    solution.row_words(pos),
                    &pin[..],
                    "solver bug: solution violates pin at {pos}"
                );
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn toy_h() -> SparseBinMatrix {
        SparseBinMatrix::from_rows(
            6,
            vec![vec![0, 2], vec![0, 1, 3], vec![0, 1, 4], vec![1, 5]],
        )
        .unwrap()
    }

    /// The four codewords of the toy (6,2) code, indexed by info bits.
    fn toy_codewords() -> [[u8; 6]; 4] {
        [
            [0, 0, 0, 0, 0, 0],
            [0, 1, 0, 1, 1, 1],
            [1, 0, 1, 1, 1, 0],
            [1, 1, 1, 0, 0, 1],
        ]
    }

    #[test]
    fn rank_identity_and_zero() {
        let mut id = BitMatrix::zeros(4, 4);
        for i in 0..4 {
            id.set(i, i, true);
        }
        assert_eq!(id.rank(), 4);
        assert_eq!(BitMatrix::zeros(5, 7).rank(), 0);
    }

    #[test]
    fn rank_of_toy_parity_check() {
        assert_eq!(toy_h().to_dense().rank(), 4);
    }

    #[test]
    fn rank_handles_wide_and_tall() {
        let m = BitMatrix::from_bit_rows(&[vec![1, 1, 0, 1], vec![1, 1, 0, 1], vec![0, 0, 1, 0]]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn sparse_rejects_bad_rows() {
        assert!(SparseBinMatrix::from_rows(3, vec![vec![0, 3]]).is_err());
        assert!(SparseBinMatrix::from_rows(3, vec![vec![1, 1]]).is_err());
    }

    #[test]
    fn fresh_system_is_underdetermined() {
        let sys = PinnedSystem::new(toy_h(), 4);
        assert_eq!(sys.status(), SystemStatus::Underdetermined);
        let zero_rows = SparseBinMatrix::from_rows(5, vec![vec![]]).unwrap();
        assert_eq!(
            PinnedSystem::new(zero_rows, 1).status(),
            SystemStatus::Underdetermined
        );
    }

    #[test]
    fn invertible_square_system_is_unique_zero() {
        // x0 = x1 = x2 forced to zero: rows {0,1},{1,2},{2}.
        let h = SparseBinMatrix::from_rows(3, vec![vec![0, 1], vec![1, 2], vec![2]]).unwrap();
        let sys = PinnedSystem::new(h, 1);
        assert_eq!(sys.status(), SystemStatus::UniqueConsistent);
        let sol = sys.solve().unwrap();
        assert_eq!(sol, BitMatrix::zeros(3, 1));
    }

    #[test]
    fn toy_system_pins_reproduce_worked_solution() {
        // Pinning rows 2 and 4 (1-based) of the toy code with the encoded
        // values determines the whole block; pinning row 2 alone does not.
        let codewords = toy_codewords();
        // Data block columns are the codewords for info pairs
        // (0,0), (0,1), (1,0), (1,1).
        let block: Vec<[u8; 4]> = (0..6)
            .map(|r| [codewords[0][r], codewords[1][r], codewords[2][r], codewords[3][r]])
            .collect();
        let mut sys = PinnedSystem::new(toy_h(), 4);
        let st = sys.pin(1, &block[1]).unwrap();
        assert_eq!(st, SystemStatus::Underdetermined);
        let st = sys.pin(3, &block[3]).unwrap();
        assert_eq!(st, SystemStatus::UniqueConsistent);
        let sol = sys.solve().unwrap();
        for r in 0..6 {
            assert_eq!(sol.row_bits(r), block[r], "row {r}");
        }
    }

    #[test]
    fn repin_same_ok_flip_conflicts() {
        let mut sys = PinnedSystem::new(toy_h(), 2);
        sys.pin(2, &[1, 0]).unwrap();
        assert!(sys.pin(2, &[1, 0]).is_ok());
        assert_eq!(sys.pin(2, &[0, 0]), Err(PinError::ConflictingPin(2)));
        assert_eq!(sys.pinned_count(), 1);
    }

    #[test]
    fn contradictory_pins_are_inconsistent() {
        // Flip one bit of a valid codeword after pinning the rest.
        let cw = toy_codewords()[2];
        let mut sys = PinnedSystem::new(toy_h(), 1);
        for (pos, &bit) in cw.iter().enumerate().take(5) {
            sys.pin(pos, &[bit]).unwrap();
        }
        let st = sys.pin(5, &[cw[5] ^ 1]).unwrap();
        assert_eq!(st, SystemStatus::Inconsistent);
        assert_eq!(sys.solve(), Err(SolveError::Inconsistent));
        // Monotone: a redundant re-pin cannot recover the status.
        let st = sys.pin(0, &[cw[0]]).unwrap();
        assert_eq!(st, SystemStatus::Inconsistent);
    }

    #[test]
    fn full_codeword_pins_round_trip() {
        let cw = toy_codewords()[1];
        let mut sys = PinnedSystem::new(toy_h(), 1);
        let mut st = sys.status();
        for (pos, &bit) in cw.iter().enumerate() {
            st = sys.pin(pos, &[bit]).unwrap();
        }
        assert_eq!(st, SystemStatus::UniqueConsistent);
        let sol = sys.solve().unwrap();
        for (pos, &bit) in cw.iter().enumerate() {
            assert_eq!(sol.get(pos, 0), bit == 1);
        }
    }

    #[test]
    fn solve_before_unique_is_rejected() {
        let sys = PinnedSystem::new(toy_h(), 1);
        assert_eq!(sys.solve(), Err(SolveError::NotUnique));
    }

    /// Count satisfying assignments per right-hand-side column by brute
    /// force over all unpinned variables.
    fn brute_force_status(h: &SparseBinMatrix, pins: &[(usize, Vec<u8>)], w: usize) -> SystemStatus {
        let n = h.cols();
        let pinned: Vec<Option<&Vec<u8>>> = {
            let mut v = vec![None; n];
            for (pos, bits) in pins {
                v[*pos] = Some(bits);
            }
            v
        };
        let free: Vec<usize> = (0..n).filter(|&i| pinned[i].is_none()).collect();
        assert!(free.len() <= 20, "too many unknowns for brute force");
        let mut per_column = vec![0u64; w];
        for col in 0..w {
            for mask in 0u64..(1 << free.len()) {
                let mut v = vec![0u8; n];
                for (i, p) in pinned.iter().enumerate() {
                    if let Some(bits) = p {
                        v[i] = bits[col];
                    }
                }
                for (bit, &pos) in free.iter().enumerate() {
                    v[pos] = ((mask >> bit) & 1) as u8;
                }
                let ok = (0..h.rows())
                    .all(|r| h.row(r).iter().fold(0u8, |acc, &c| acc ^ v[c]) == 0);
                if ok {
                    per_column[col] += 1;
                }
            }
        }
        if per_column.iter().any(|&c| c == 0) {
            SystemStatus::Inconsistent
        } else if per_column.iter().all(|&c| c == 1) {
            SystemStatus::UniqueConsistent
        } else {
            SystemStatus::Underdetermined
        }
    }

    #[test]
    fn matches_brute_force_on_random_sparse_systems() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for trial in 0..200 {
            let n = rng.gen_range(4..=16);
            let m = rng.gen_range(1..=n);
            let w = rng.gen_range(1..=3);
            let rows: Vec<Vec<usize>> = (0..m)
                .map(|_| {
                    let deg = rng.gen_range(0..=3usize.min(n));
                    let mut cols: Vec<usize> = (0..n).collect();
                    for i in 0..deg {
                        let j = rng.gen_range(i..n);
                        cols.swap(i, j);
                    }
                    cols.truncate(deg);
                    cols
                })
                .collect();
            let h = SparseBinMatrix::from_rows(n, rows).unwrap();

            // Random pins, possibly wrong, leaving <= 12 unknowns free.
            let pin_count = rng.gen_range(n.saturating_sub(12)..=n);
            let mut pins: Vec<(usize, Vec<u8>)> = Vec::new();
            let mut order: Vec<usize> = (0..n).collect();
            for i in 0..pin_count {
                let j = rng.gen_range(i..n);
                order.swap(i, j);
            }
            for &pos in order.iter().take(pin_count) {
                let bits: Vec<u8> = (0..w).map(|_| rng.gen_range(0..2u8)).collect();
                pins.push((pos, bits));
            }

            let mut sys = PinnedSystem::new(h.clone(), w);
            let mut st = sys.status();
            for (pos, bits) in &pins {
                st = sys.pin(*pos, bits).unwrap();
            }
            let expected = brute_force_status(&h, &pins, w);
            assert_eq!(st, expected, "trial {trial}");
            if expected == SystemStatus::UniqueConsistent {
                let sol = sys.solve().unwrap();
                for (pos, bits) in &pins {
                    for (col, &b) in bits.iter().enumerate() {
                        assert_eq!(sol.get(*pos, col), b == 1);
                    }
                }
            }
        }
    }

    proptest! {
        /// Pin order never changes the final status or solution.
        #[test]
        fn pin_order_is_irrelevant(seed in 0u64..500) {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let n = rng.gen_range(4..=12);
            let m = rng.gen_range(1..=n);
            let rows: Vec<Vec<usize>> = (0..m)
                .map(|_| (0..n).filter(|_| rng.gen_bool(0.3)).collect())
                .collect();
            let h = SparseBinMatrix::from_rows(n, rows).unwrap();
            let pin_count = rng.gen_range(0..=n);
            let pins: Vec<(usize, Vec<u8>)> = (0..n)
                .take(pin_count)
                .map(|pos| (pos, vec![rng.gen_range(0..2u8)]))
                .collect();

            let mut forward = PinnedSystem::new(h.clone(), 1);
            for (pos, bits) in &pins {
                forward.pin(*pos, bits).unwrap();
            }
            let mut backward = PinnedSystem::new(h, 1);
            for (pos, bits) in pins.iter().rev() {
                backward.pin(*pos, bits).unwrap();
            }
            prop_assert_eq!(forward.status(), backward.status());
            if forward.status() == SystemStatus::UniqueConsistent {
                prop_assert_eq!(forward.solve().unwrap(), backward.solve().unwrap());
            }
        }
    }
}
