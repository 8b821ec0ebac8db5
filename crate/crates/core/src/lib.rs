//! Subharmonic exhaustions of the unit disk and the weighted Hardy spaces
//! they induce.

pub mod disc;
pub mod duality;
pub mod error;
pub mod exhaustion;
pub mod hardy;

pub use error::{DiscError, Result};

/// Library version recorded in experiment results.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
