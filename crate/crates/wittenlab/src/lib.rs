//! Command-line front end for `wittenlab-core`: cache files, verification
//! suites and line-oriented output.

pub mod cache;
pub mod cli;
pub mod compute;
pub mod error;
pub mod record;
pub mod suites;

pub use error::{AppError, AppResult};
