//! Best-relay selection for the two-source multiple-access relay channel
//! under analog network coding (ANC) and decode-and-forward network coding
//! (DF-NC).
//!
//! - [`model`]: scenario configuration, Rayleigh sampling, per-relay SNRs
//!   and max-min relay selection.
//! - [`analytic`]: order statistics of the best-relay SNR, MGF-based SER by
//!   quadrature, the published closed form, and outage probability.
//! - [`montecarlo`]: symbol-level simulation with joint ML detection.
//! - [`power`]: SER-minimising split of a total power budget.
//! - [`experiment`]: sweep specifications, CSV output and the resumable
//!   runner behind the `marc-relay` binary.

// Node tables and frozen reference values keep every published digit.
// `!(x <= y)` is used on purpose so that NaN fails the check.
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod errata;
pub mod experiment;
pub mod model;
pub mod montecarlo;
pub mod power;
pub mod quadrature;
pub mod stats;
