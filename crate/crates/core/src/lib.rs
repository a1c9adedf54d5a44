//! Movable-antenna aided secure transmission when the eavesdropper's channel
//! is unknown to the transmitter.
//!
//! The crate is organised bottom-up:
//!
//! - [`channel`]: field-response multipath channels and antenna layouts.
//! - [`optimizer2d`]: per-antenna gradient ascent with backtracking over a
//!   square transmit region.
//! - [`optimizer1d`]: block successive upper-bound minimization for a
//!   linear array.
//! - [`security`]: MRT beamforming, null-space artificial noise and
//!   secrecy rates.
//! - [`harness`]: seeded Monte-Carlo experiments, sweeps and CSV output.

// `!(x > 0.0)` is used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod error;
pub mod harness;
pub mod optimizer1d;
pub mod optimizer2d;
pub mod rng;
pub mod security;

pub use error::{Error, Result};

/// Complex scalar used for channel coefficients.
pub type C64 = num_complex::Complex64;

/// Convert a decibel value to a linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Convert a linear power ratio to decibels.
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

pub use nalgebra;
