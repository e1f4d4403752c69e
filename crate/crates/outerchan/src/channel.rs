//! The row channel: per-row correct/erase/substitute followed by a uniform
//! random shuffle of all rows.
//!
//! Randomness comes from a counter-based stream cipher (ChaCha, 12 rounds)
//! so that every run is reproducible across platforms from a single `u64`
//! seed. The generator identity is exported as [`RNG_ID`] and recorded in
//! simulation output.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::gf2::BitMatrix;
use crate::params::ChannelParams;

/// Identity of the random generator behind all simulation draws.
pub const RNG_ID: &str = "chacha12";

/// Deterministic per-trial generator: one key per master seed, one ChaCha
/// stream per trial index.
pub fn trial_rng(master_seed: u64, trial: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    rng
}

// ---------------------------------------------------------------------------
// Received rows
// ---------------------------------------------------------------------------

/// One received slot: erased, or a full row of bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReceivedRow {
    Erased,
    Present(Vec<u8>),
}

impl ReceivedRow {
    pub fn is_erased(&self) -> bool {
        matches!(self, ReceivedRow::Erased)
    }
}

/// Channel output: `n` slots in post-shuffle order. Erased slots are kept
/// in place so the slot count always equals the number of transmitted rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReceivedMatrix {
    slots: Vec<ReceivedRow>,
}

impl ReceivedMatrix {
    pub fn new(slots: Vec<ReceivedRow>) -> Self {
        Self { slots }
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn slot(&self, i: usize) -> &ReceivedRow {
        &self.slots[i]
    }

    pub fn slots(&self) -> &[ReceivedRow] {
        &self.slots
    }
}

// ---------------------------------------------------------------------------
// Channel stages
// ---------------------------------------------------------------------------

/// Per-row stage: each row of `x` is kept with `p_c`, erased with `p_e`,
/// or replaced with `p_s` by a uniform draw from the other `2^l - 1` rows.
///
/// Substitutes are produced by rejection: draw uniform `l`-bit rows until
/// one differs from the original. This is exactly uniform over the wrong
/// rows and needs fewer than two draws on average even at `l = 1`.
pub fn channel1(x: &BitMatrix, params: &ChannelParams, rng: &mut impl RngCore) -> ReceivedMatrix {
    assert_eq!(x.cols(), params.l as usize, "row width must match params.l");
    let slots = (0..x.rows())
        .map(|r| {
            let u: f64 = rng.gen();
            if u < params.p_c {
                ReceivedRow::Present(x.row_bits(r))
            } else if u < params.p_c + params.p_e {
                ReceivedRow::Erased
            } else {
                let original = x.row_bits(r);
                loop {
                    let candidate: Vec<u8> =
                        (0..original.len()).map(|_| rng.gen_range(0..2u8)).collect();
                    if candidate != original {
                        break ReceivedRow::Present(candidate);
                    }
                }
            }
        })
        .collect();
    ReceivedMatrix::new(slots)
}

/// Shuffle stage: a Fisher-Yates permutation of all slots, erased slots
/// included.
pub fn channel2(y: ReceivedMatrix, rng: &mut impl RngCore) -> ReceivedMatrix {
    let mut slots = y.slots;
    for i in (1..slots.len()).rev() {
        let j = rng.gen_range(0..=i);
        slots.swap(i, j);
    }
    ReceivedMatrix::new(slots)
}

/// Both stages driven from one seed. Identical `(x, params, seed)` give
/// identical output on every platform.
pub fn transmit(x: &BitMatrix, params: &ChannelParams, seed: u64) -> ReceivedMatrix {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    transmit_with_rng(x, params, &mut rng)
}

/// Both stages on a caller-provided generator.
pub fn transmit_with_rng(
    x: &BitMatrix,
    params: &ChannelParams,
    rng: &mut impl RngCore,
) -> ReceivedMatrix {
    channel2(channel1(x, params, rng), rng)
}
