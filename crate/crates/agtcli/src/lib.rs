//! Verification pipelines over `agt-core`: each check runs two independent
//! computations of the same quantity and reports every exact comparison.

pub mod checks;
pub mod error;
pub mod identities;
pub mod report;
pub mod spec;

pub use checks::run_check;
pub use error::{CliError, CliResult};
pub use report::{CheckReport, Mismatch, Status, Tally};
pub use spec::{CheckName, CheckSpec, Format, Mode};
