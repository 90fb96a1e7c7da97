//! File formats, parallel sweeps and experiments behind the `aware`
//! command-line tool.

pub mod cli;
pub mod experiments;
pub mod format;
pub mod sweep;
