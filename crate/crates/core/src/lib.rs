//! Solvers for a two-provider spectrum-sharing game.
//!
//! A mobile network operator (`SP_L`) leases spectrum from a regulator and
//! sublets part of it to a virtual operator (`SP_F`). The two bargain over
//! spectrum and money transfers, then compete on access fees for a common
//! pool of end users distributed on a hotelling line. This crate computes
//! the equilibrium-type solutions of that hybrid game, the disagreement
//! point of the fully non-cooperative game, and brute-force oracles that
//! check every closed form independently.
//!
//! The crate is `no_std` (with `alloc`); IO, configuration files and the CLI
//! live in the `specshare` companion crate.
#![cfg_attr(not(test), no_std)]
#![warn(missing_docs)]
// negated comparisons reject NaN on purpose
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod bargaining;
pub mod disagreement;
mod error;
pub mod model;
pub mod oracle;
pub mod outside;
mod params;
pub mod pricing;
pub mod search;

pub use error::{Error, Result};
pub use params::MarketParams;

/// Tolerance used when a parameter must equal a specific value (for example
/// `Δ = 0` for the outside-option game).
pub const EXACT_TOL: f64 = 1e-12;
