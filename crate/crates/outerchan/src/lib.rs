//! Outer-channel toolkit for unordered-row storage: column-wise ECC
//! encoding with row addresses, a correct/erase/substitute row channel with
//! random shuffling, soft/hard information extraction, independent and
//! joint decoders, brute-force reference decoders, and a seeded Monte-Carlo
//! frame-error-rate harness.
//!
//! The pipeline moves a `k x w` source bit matrix through:
//!
//! 1. column-wise encoding by a binary `(n, k)` code plus a per-row address
//!    tail ([`ldpc`], [`outer`]),
//! 2. the row channel — each row delivered, erased, or replaced, then all
//!    rows shuffled ([`channel`]),
//! 3. decoding back to the source, either column by column from per-bit
//!    soft information, or jointly by ranking received rows and solving the
//!    parity constraints over the most reliable ones ([`outer`], [`gf2`]).
//!
//! [`oracle`] holds small-scale exhaustive decoders used to validate the
//! fast path, and [`sim`] runs seeded, reproducible FER sweeps.

pub mod channel;
pub mod fixtures;
pub mod gf2;
pub mod ldpc;
pub mod oracle;
pub mod outer;
pub mod params;
pub mod sim;
