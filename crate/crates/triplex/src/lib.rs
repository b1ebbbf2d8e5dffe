//! File formats and command-line front end for `triplex-core`.

pub mod cli;
pub mod formats;
