//! Hand-computed fixtures for the toy `(6, 2)` code, shared by unit tests,
//! the acceptance suite, and the `oracle-check` CLI self-checks.
//!
//! The toy code has minimum distance 4 and four codewords, small enough
//! that every derived quantity below was worked out by hand: the encoded
//! block for a fixed source, a specific corrupted reception, the hard
//! information it induces, the per-column decode results, and the
//! reliability ordering used by joint decoding.

use crate::channel::{ReceivedMatrix, ReceivedRow};
use crate::gf2::{BitMatrix, SparseBinMatrix};
use crate::outer::Trit;

/// Parity-check matrix of the toy `(6, 2)` code (4 rows, 6 columns,
/// minimum distance 4).
pub fn toy_parity_check() -> SparseBinMatrix {
    SparseBinMatrix::from_rows(
        6,
        vec![vec![0, 2], vec![0, 1, 3], vec![0, 1, 4], vec![1, 5]],
    )
    .expect("valid fixture")
}

/// The 2x4 source block used throughout the worked example.
pub fn toy_source() -> BitMatrix {
    BitMatrix::from_bit_rows(&[vec![0, 0, 1, 1], vec![0, 1, 0, 1]])
}

/// Column-wise encoding of [`toy_source`]: the 6x4 data block `V`.
pub fn toy_data_block() -> BitMatrix {
    BitMatrix::from_bit_rows(&[
        vec![0, 0, 1, 1],
        vec![0, 1, 0, 1],
        vec![0, 0, 1, 1],
        vec![0, 1, 1, 0],
        vec![0, 1, 1, 0],
        vec![0, 1, 0, 1],
    ])
}

/// [`toy_data_block`] with 3-bit addresses 1..=6 appended: the 6x7 encoded
/// matrix `X`.
pub fn toy_encoded() -> BitMatrix {
    BitMatrix::from_bit_rows(&[
        vec![0, 0, 1, 1, 0, 0, 1],
        vec![0, 1, 0, 1, 0, 1, 0],
        vec![0, 0, 1, 1, 0, 1, 1],
        vec![0, 1, 1, 0, 1, 0, 0],
        vec![0, 1, 1, 0, 1, 0, 1],
        vec![0, 1, 0, 1, 1, 1, 0],
    ])
}

/// A fixed corrupted reception of [`toy_encoded`], bypassing randomness.
///
/// Row 1 is substituted so that its address collides with row 2's, and row
/// 3 is substituted with its address intact; all other rows arrive clean
/// and nothing is erased. Rows are listed in transmission order (the
/// shuffle is the identity here; decoders must not rely on that).
pub fn toy_received() -> ReceivedMatrix {
    ReceivedMatrix::new(vec![
        ReceivedRow::Present(vec![0, 0, 0, 0, 0, 1, 0]),
        ReceivedRow::Present(vec![0, 1, 0, 1, 0, 1, 0]),
        ReceivedRow::Present(vec![1, 1, 1, 1, 0, 1, 1]),
        ReceivedRow::Present(vec![0, 1, 1, 0, 1, 0, 0]),
        ReceivedRow::Present(vec![0, 1, 1, 0, 1, 0, 1]),
        ReceivedRow::Present(vec![0, 1, 0, 1, 1, 1, 0]),
    ])
}

/// Hard information induced by [`toy_received`]: address 1 is never
/// claimed, address 2 is claimed twice with disagreeing bits masked to `?`,
/// and address 3 carries the substituted row's wrong bits.
pub fn toy_hard_info() -> Vec<Vec<Trit>> {
    use Trit::{One, Unknown, Zero};
    vec![
        vec![Unknown, Unknown, Unknown, Unknown],
        vec![Zero, Unknown, Zero, Unknown],
        vec![One, One, One, One],
        vec![Zero, One, One, Zero],
        vec![Zero, One, One, Zero],
        vec![Zero, One, Zero, One],
    ]
}

/// Per-column nearest-codeword decode of [`toy_hard_info`]: column 2 ties
/// between two codewords and fails; the other columns decode.
pub fn toy_independent_estimate() -> Vec<Vec<Trit>> {
    use Trit::{One, Unknown, Zero};
    vec![
        vec![Zero, Unknown, One, One],
        vec![Zero, Unknown, Zero, One],
        vec![Zero, Unknown, One, One],
        vec![Zero, Unknown, One, Zero],
        vec![Zero, Unknown, One, Zero],
        vec![Zero, Unknown, Zero, One],
    ]
}

/// Reliability distances of [`toy_received`] against
/// [`toy_independent_estimate`], in slot order.
pub fn toy_reliability_distances() -> Vec<usize> {
    vec![2, 1, 2, 1, 1, 1]
}

/// Slot order after the ascending stable sort by reliability distance:
/// slots 2, 4, 5, 6 precede slots 1 and 3 (1-based).
pub fn toy_reliability_order() -> Vec<usize> {
    vec![1, 3, 4, 5, 0, 2]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ldpc::syndrome_check;

    #[test]
    fn fixture_block_is_consistent() {
        let h = toy_parity_check();
        let v = toy_data_block();
        for c in 0..4 {
            let col: Vec<u8> = (0..6).map(|r| v.get(r, c) as u8).collect();
            assert!(syndrome_check(&h, &col), "column {c}");
        }
        // Data block plus addresses equals the encoded matrix.
        let x = toy_encoded();
        for r in 0..6 {
            for c in 0..4 {
                assert_eq!(v.get(r, c), x.get(r, c));
            }
        }
    }

    #[test]
    fn fixture_addresses_count_from_one() {
        let x = toy_encoded();
        for r in 0..6 {
            let addr = (4..7).fold(0usize, |acc, c| (acc << 1) | x.get(r, c) as usize);
            assert_eq!(addr, r + 1);
        }
    }
}
