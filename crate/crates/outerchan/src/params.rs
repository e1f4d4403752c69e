//! Channel and code parameters, capacity formulas, and the per-bit event
//! probabilities used to build soft information.
//!
//! The storage channel treats each length-`l` row as one symbol: a row is
//! delivered intact with probability `p_c`, erased with probability `p_e`,
//! or replaced by a uniformly random different row with probability `p_s`.
//! Everything in this module is a pure function of those parameters.
//!
//! All quantities that would nominally involve `2^l` are evaluated through
//! the scaled form `2^-l` instead. The operating points of interest use
//! `l = 100`, where `2^l` overflows both `u64` and exactly-representable
//! `f64` integers, while `2^-l` is a perfectly ordinary subnormal-free
//! float.

use thiserror::Error;

use crate::gf2::SparseBinMatrix;

/// Tolerance for probability sums (`p_c + p_e + p_s = 1` and the derived
/// identities).
pub const PROB_SUM_TOL: f64 = 1e-12;

/// Errors from parameter validation and the formula helpers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    /// `p_c + p_e + p_s` differs from 1 by more than [`PROB_SUM_TOL`].
    #[error("probabilities sum to {0}, expected 1")]
    SumNotOne(f64),
    /// The decodability constraint `p_c > p_s / (2^l - 1)` fails.
    #[error("p_c = {p_c} does not exceed p_s / (2^l - 1) for l = {l}")]
    ConstraintViolated { p_c: f64, p_s: f64, l: u32 },
    /// Row length below 1.
    #[error("row length l = {0} must be at least 1")]
    BadLength(u32),
    /// Generic precondition failure (non-finite input, empty range, ...).
    #[error("bad arguments: {0}")]
    BadArgs(String),
}

// ---------------------------------------------------------------------------
// Channel parameters
// ---------------------------------------------------------------------------

/// Row-level transition law of the storage channel: correct / erased /
/// uniformly substituted, over rows of `l` bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    /// Probability a row arrives unchanged.
    pub p_c: f64,
    /// Probability a row is erased.
    pub p_e: f64,
    /// Probability a row is replaced by a uniform draw from the `2^l - 1`
    /// other rows.
    pub p_s: f64,
    /// Bits per row.
    pub l: u32,
}

impl ChannelParams {
    /// Validate and construct channel parameters.
    ///
    /// Checks that each probability is a finite value in `[0, 1]`, that the
    /// three sum to 1 within [`PROB_SUM_TOL`], that `l >= 1`, and that the
    /// substitution mass keeps correct reception dominant:
    /// `p_c * (1 - 2^-l) > p_s * 2^-l`, the overflow-safe form of
    /// `p_c > p_s / (2^l - 1)`.
    pub fn new(p_c: f64, p_e: f64, p_s: f64, l: u32) -> Result<Self, ParamError> {
        if l < 1 {
            return Err(ParamError::BadLength(l));
        }
        for (name, p) in [("p_c", p_c), ("p_e", p_e), ("p_s", p_s)] {
            if !p.is_finite() || !(0.0..=1.0).contains(&p) {
                return Err(ParamError::BadArgs(format!("{name} = {p} out of [0,1]")));
            }
        }
        let sum = p_c + p_e + p_s;
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(ParamError::SumNotOne(sum));
        }
        // Substitution-free channels are always coherent; otherwise correct
        // reception must dominate any single wrong row.
        let pow = neg_pow2(l);
        if p_s > 0.0 && p_c * (1.0 - pow) <= p_s * pow {
            return Err(ParamError::ConstraintViolated { p_c, p_s, l });
        }
        Ok(Self { p_c, p_e, p_s, l })
    }

    /// Event probabilities of the address/bit mixture for `a` address bits.
    /// See [`MixtureProbs`].
    pub fn mixture_probs(&self, a: u32) -> Result<MixtureProbs, ParamError> {
        if a >= self.l {
            return Err(ParamError::BadArgs(format!(
                "address width a = {a} must be smaller than row length l = {}",
                self.l
            )));
        }
        // Scaled by 2^-l relative to the textbook expressions so that l = 100
        // stays finite: q = p_s 2^(l-a) / (2^l - 1) becomes the form below.
        let scale = 1.0 - neg_pow2(self.l);
        let q = self.p_s * neg_pow2(a) / scale;
        let p3 = self.p_s * (1.0 - neg_pow2(a)) / scale;
        let p4 = self.p_s * (neg_pow2(a + 1) - neg_pow2(self.l)) / scale;
        let p5 = self.p_s * neg_pow2(a + 1) / scale;
        Ok(MixtureProbs {
            q,
            p1: self.p_c,
            p2: self.p_e,
            p3,
            p4,
            p5,
        })
    }
}

/// `2^-e` without materializing `2^e`.
fn neg_pow2(e: u32) -> f64 {
    (-(e as f64)).exp2()
}

// ---------------------------------------------------------------------------
// Mixture probabilities
// ---------------------------------------------------------------------------

/// Probabilities of the five per-row events that drive the soft-information
/// formula, plus `q`, the probability that a substituted row lands on one
/// specific address.
///
/// * `p1` — row delivered intact.
/// * `p2` — row erased.
/// * `p3` — row substituted, address changed.
/// * `p4` — row substituted, address kept, observed bit kept.
/// * `p5` — row substituted, address kept, observed bit flipped.
///
/// Invariants: `p1 + ... + p5 = 1` and `p3 + p4 + p5 = p_s`, both within
/// [`PROB_SUM_TOL`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureProbs {
    pub q: f64,
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub p4: f64,
    pub p5: f64,
}

// ---------------------------------------------------------------------------
// Code geometry
// ---------------------------------------------------------------------------

/// Outer-code geometry: `n` coded rows of `l = w + a` bits, carrying `k`
/// source rows of `w` data bits, with the binary parity-check matrix applied
/// column-wise to the data part.
#[derive(Debug, Clone)]
pub struct CodeConfig {
    /// Coded rows (codeword length of the column code).
    pub n: usize,
    /// Source rows (information length of the column code).
    pub k: usize,
    /// Data bits per row.
    pub w: usize,
    /// Address bits per row.
    pub a: u32,
    /// Total bits per row, `w + a`.
    pub l: u32,
    /// Parity-check matrix with `n` columns.
    pub h: SparseBinMatrix,
}

impl CodeConfig {
    /// Build a configuration from a parity-check matrix and data width.
    ///
    /// `k` is derived as `n - rank(H)`. The address width defaults to
    /// `ceil(log2 n)` and may be widened explicitly; narrower widths are
    /// rejected.
    pub fn from_parity_check(
        h: SparseBinMatrix,
        w: usize,
        a: Option<u32>,
    ) -> Result<Self, ParamError> {
        let n = h.cols();
        if n < 2 {
            return Err(ParamError::BadArgs(format!("n = {n} must be at least 2")));
        }
        if w < 1 {
            return Err(ParamError::BadArgs("w must be at least 1".into()));
        }
        let min_a = min_address_width(n);
        let a = a.unwrap_or(min_a);
        if a < min_a {
            return Err(ParamError::BadArgs(format!(
                "address width {a} below ceil(log2 {n}) = {min_a}"
            )));
        }
        let k = n - h.to_dense().rank();
        Ok(Self {
            n,
            k,
            w,
            a,
            l: w as u32 + a,
            h,
        })
    }
}

/// `ceil(log2 n)` — the default address width for `n` rows.
pub fn min_address_width(n: usize) -> u32 {
    (n.max(2) - 1).ilog2() + 1
}

// ---------------------------------------------------------------------------
// Rate and capacity formulas
// ---------------------------------------------------------------------------

/// Row length measured in units of `log2 n`. The channel supports no
/// positive rate unless this exceeds 1.
pub fn beta(n: usize, l: u32) -> Result<f64, ParamError> {
    if n < 2 {
        return Err(ParamError::BadArgs(format!("n = {n} must be at least 2")));
    }
    if l < 1 {
        return Err(ParamError::BadLength(l));
    }
    Ok(l as f64 / (n as f64).log2())
}

/// Information bits stored per coded bit: `kw / (nl)`.
pub fn code_rate(n: usize, k: usize, w: usize, l: u32) -> Result<f64, ParamError> {
    if n == 0 || k == 0 || w == 0 || l == 0 || k > n || w as u32 > l {
        return Err(ParamError::BadArgs(format!(
            "invalid geometry n={n} k={k} w={w} l={l}"
        )));
    }
    Ok((k as f64 * w as f64) / (n as f64 * l as f64))
}

/// Capacity of the storage channel: `p_c (1 - 1/beta)` for `beta > 1`,
/// zero otherwise.
pub fn outer_capacity(p_c: f64, beta: f64) -> f64 {
    if beta > 1.0 {
        p_c * (1.0 - 1.0 / beta)
    } else {
        0.0
    }
}

/// Capacity of the erasure-only shuffling channel:
/// `(1 - p_erasure)(1 - 1/beta)` for `beta > 1`, zero otherwise.
///
/// With `p_erasure = p_e + p_s` this equals [`outer_capacity`], i.e. uniform
/// substitutions cost no more capacity than erasures.
pub fn noise_free_capacity(p_erasure: f64, beta: f64) -> f64 {
    if beta > 1.0 {
        (1.0 - p_erasure) * (1.0 - 1.0 / beta)
    } else {
        0.0
    }
}

/// Union bound on the probability that two delivered rows coincide:
/// `n^(2-beta) (2 p_c p_s + p_s^2)`, evaluated as
/// `2^(2 log2 n - l) (2 p_c p_s + p_s^2)` to survive `l = 100`.
///
/// When this is small, distinct received rows can be assumed and the
/// intersection rule is a true maximum-likelihood decoder.
pub fn duplicate_row_bound(n: usize, l: u32, p_c: f64, p_s: f64) -> Result<f64, ParamError> {
    if n < 2 {
        return Err(ParamError::BadArgs(format!("n = {n} must be at least 2")));
    }
    let log2_scale = 2.0 * (n as f64).log2() - l as f64;
    Ok(log2_scale.exp2() * (2.0 * p_c * p_s + p_s * p_s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::BitMatrix;
    use proptest::prelude::*;

    fn toy_h() -> SparseBinMatrix {
        // 4x6, rank 4; the hand-worked (6,2) code used across the crate.
        SparseBinMatrix::from_rows(
            6,
            vec![vec![0, 2], vec![0, 1, 3], vec![0, 1, 4], vec![1, 5]],
        )
        .unwrap()
    }

    #[test]
    fn validate_accepts_sane_params() {
        let p = ChannelParams::new(0.9, 0.05, 0.05, 100).unwrap();
        assert_eq!(p.l, 100);
    }

    #[test]
    fn validate_rejects_bad_sum() {
        assert!(matches!(
            ChannelParams::new(0.5, 0.5, 0.5, 10),
            Err(ParamError::SumNotOne(_))
        ));
    }

    #[test]
    fn validate_rejects_substitution_dominated_channel() {
        // p_c = 0 sits exactly on the boundary p_s / (2^1 - 1) = 1.
        assert!(matches!(
            ChannelParams::new(0.0, 0.0, 1.0, 1),
            Err(ParamError::ConstraintViolated { .. })
        ));
    }

    #[test]
    fn validate_rejects_zero_length() {
        assert!(matches!(
            ChannelParams::new(1.0, 0.0, 0.0, 0),
            Err(ParamError::BadLength(0))
        ));
    }

    #[test]
    fn beta_matches_hand_values() {
        assert_eq!(beta(1024, 2048).unwrap(), 204.8);
        assert_eq!(beta(2, 1).unwrap(), 1.0);
        let b = beta(1296, 100).unwrap();
        assert!((b - 100.0 / (1296f64).log2()).abs() < 1e-15);
        assert!((b - 9.6713).abs() < 1e-4);
        assert!(beta(1, 5).is_err());
    }

    #[test]
    fn code_rate_matches_hand_values() {
        assert!((code_rate(6, 2, 4, 7).unwrap() - 8.0 / 42.0).abs() < 1e-15);
        assert_eq!(code_rate(17, 17, 9, 9).unwrap(), 1.0);
        assert!((code_rate(1296, 1080, 89, 100).unwrap() - 1080.0 * 89.0 / 129600.0).abs() < 1e-15);
        assert!(code_rate(6, 7, 4, 7).is_err());
        assert!(code_rate(6, 2, 8, 7).is_err());
    }

    #[test]
    fn capacities_match_closed_forms() {
        assert!((outer_capacity(0.9, 2.0) - 0.45).abs() < 1e-15);
        assert_eq!(outer_capacity(0.7, 1.0), 0.0);
        assert_eq!(outer_capacity(0.0, 10.0), 0.0);
        assert!((noise_free_capacity(0.1, 2.0) - 0.45).abs() < 1e-15);
        assert_eq!(noise_free_capacity(1.0, 5.0), 0.0);
    }

    #[test]
    fn duplicate_row_bound_matches_hand_values() {
        assert_eq!(duplicate_row_bound(6, 7, 0.9, 0.0).unwrap(), 0.0);
        let b = duplicate_row_bound(4, 4, 0.9, 0.1).unwrap();
        assert!((b - 0.19).abs() < 1e-15);
        let b = duplicate_row_bound(1296, 100, 0.94, 0.05).unwrap();
        assert!((b - 1.28e-25).abs() < 0.02e-25, "got {b}");
    }

    #[test]
    fn mixture_probs_match_hand_values() {
        // l = 7, a = 3: denominators are 2^7 - 1 = 127.
        let p = ChannelParams::new(0.8, 0.1, 0.1, 7).unwrap();
        let m = p.mixture_probs(3).unwrap();
        assert!((m.q - 1.6 / 127.0).abs() < 1e-15);
        assert!((m.p3 - 11.2 / 127.0).abs() < 1e-15);
        assert!((m.p4 - 0.7 / 127.0).abs() < 1e-15);
        assert!((m.p5 - 0.8 / 127.0).abs() < 1e-15);
        let sum = m.p1 + m.p2 + m.p3 + m.p4 + m.p5;
        assert!((sum - 1.0).abs() < PROB_SUM_TOL);
    }

    #[test]
    fn mixture_probs_substitution_free() {
        let p = ChannelParams::new(0.9, 0.1, 0.0, 12).unwrap();
        let m = p.mixture_probs(4).unwrap();
        assert_eq!((m.q, m.p3, m.p4, m.p5), (0.0, 0.0, 0.0, 0.0));
        assert_eq!(m.p1, 0.9);
        assert_eq!(m.p2, 0.1);
    }

    #[test]
    fn mixture_probs_finite_at_l_100() {
        let p = ChannelParams::new(0.9, 0.05, 0.05, 100).unwrap();
        let m = p.mixture_probs(11).unwrap();
        for v in [m.q, m.p1, m.p2, m.p3, m.p4, m.p5] {
            assert!(v.is_finite());
        }
        let expect_p3 = 0.05 * (1.0 - (-11f64).exp2());
        assert!((m.p3 - expect_p3).abs() / expect_p3 < 1e-12);
    }

    #[test]
    fn mixture_probs_reject_wide_address() {
        let p = ChannelParams::new(0.9, 0.05, 0.05, 8).unwrap();
        assert!(p.mixture_probs(8).is_err());
    }

    #[test]
    fn code_config_derives_geometry() {
        let cfg = CodeConfig::from_parity_check(toy_h(), 4, None).unwrap();
        assert_eq!((cfg.n, cfg.k, cfg.w, cfg.a, cfg.l), (6, 2, 4, 3, 7));
        // Widening the address is allowed, narrowing is not.
        let cfg = CodeConfig::from_parity_check(toy_h(), 4, Some(5)).unwrap();
        assert_eq!(cfg.l, 9);
        assert!(CodeConfig::from_parity_check(toy_h(), 4, Some(2)).is_err());
    }

    #[test]
    fn min_address_width_handles_powers_of_two() {
        assert_eq!(min_address_width(2), 1);
        assert_eq!(min_address_width(4), 2);
        assert_eq!(min_address_width(5), 3);
        assert_eq!(min_address_width(1296), 11);
        assert_eq!(min_address_width(2592), 12);
    }

    #[test]
    fn rank_of_toy_h_is_full() {
        let dense: BitMatrix = toy_h().to_dense();
        assert_eq!(dense.rank(), 4);
    }

    fn arb_valid_params() -> impl Strategy<Value = (ChannelParams, u32)> {
        (0.05f64..1.0, 0.0f64..1.0, 8u32..120, 1u32..16).prop_filter_map(
            "valid channel params",
            |(p_c, split, l, a)| {
                let rest = 1.0 - p_c;
                let p_e = rest * split;
                let p_s = rest - p_e;
                let a = a.min(l - 1);
                ChannelParams::new(p_c, p_e, p_s, l).ok().map(|p| (p, a))
            },
        )
    }

    proptest! {
        #[test]
        fn mixture_prob_identities((params, a) in arb_valid_params()) {
            let m = params.mixture_probs(a).unwrap();
            let sum = m.p1 + m.p2 + m.p3 + m.p4 + m.p5;
            prop_assert!((sum - 1.0).abs() < PROB_SUM_TOL);
            prop_assert!((m.p3 + m.p4 + m.p5 - params.p_s).abs() < PROB_SUM_TOL);
            for v in [m.q, m.p1, m.p2, m.p3, m.p4, m.p5] {
                prop_assert!((0.0..=1.0).contains(&v));
            }
        }

        #[test]
        fn capacity_equals_genie_erasure_capacity((params, _) in arb_valid_params(),
                                                  n in 2usize..10_000) {
            let b = beta(n, params.l).unwrap();
            let c = outer_capacity(params.p_c, b);
            let c_nf = noise_free_capacity(params.p_e + params.p_s, b);
            prop_assert!((c - c_nf).abs() < 1e-12);
        }

        #[test]
        fn capacity_monotone(p1 in 0.0f64..1.0, p2 in 0.0f64..1.0,
                             b1 in 0.1f64..50.0, b2 in 0.1f64..50.0) {
            let (plo, phi) = if p1 <= p2 { (p1, p2) } else { (p2, p1) };
            let (blo, bhi) = if b1 <= b2 { (b1, b2) } else { (b2, b1) };
            prop_assert!(outer_capacity(plo, bhi) <= outer_capacity(phi, bhi) + 1e-15);
            prop_assert!(outer_capacity(phi, blo) <= outer_capacity(phi, bhi) + 1e-15);
            if bhi <= 1.0 {
                prop_assert_eq!(outer_capacity(phi, bhi), 0.0);
            }
        }
    }
}
