//! Config loading, sweeps, preset datasets and verification on top of
//! `specshare-core`, with CSV output.

pub mod config;
pub mod error;
pub mod figures;
pub mod pipeline;
pub mod sweep;
pub mod table;
pub mod verify;

pub use config::{Mode, RunConfig};
pub use error::{AppError, AppResult};
