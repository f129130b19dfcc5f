//! Command-line driver for `autorbit`: map files, witness traces, CSV
//! sweeps and the `autorbit` binary's dispatch.

pub mod bench;
pub mod cli;
pub mod format;

pub use cli::run;
