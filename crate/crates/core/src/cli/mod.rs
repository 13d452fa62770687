//! Group specifications, per-group analysis, reports and the catalog.

pub mod analysis;
pub mod catalog;
pub mod constants;
pub mod report;
pub mod spec;

pub use analysis::{analyze, Analysis, AnalyzeError, AnalyzeOptions, MonteCarloOptions};
pub use spec::{parse_spec, GroupSpec, ParseError};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VERDICT_FAILED: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const CAP_EXCEEDED: i32 = 3;
}
