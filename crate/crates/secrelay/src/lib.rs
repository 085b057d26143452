//! File formats, Monte-Carlo experiments and the command-line front end for
//! the `secrelay-core` model.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod output;
pub mod wire;

pub use error::{Error, Result};
pub use secrelay_core as core;
