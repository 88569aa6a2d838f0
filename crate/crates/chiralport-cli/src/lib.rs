//! Library half of the `chiralport` command-line tool: configuration
//! parsing, sweep execution and table output, kept separate from the binary
//! so integration tests can drive the plumbing directly.

pub mod config;
pub mod output;
pub mod sweeps;

pub use config::{AxisSpec, Config, Scale, SweepSpec, Target};
pub use output::{Cell, Format, Table};
