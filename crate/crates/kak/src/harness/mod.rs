//! Verification reports, registry sweeps and matrix files.

mod io;
mod params;
mod report;
mod sweep;

pub use io::{format_matrix, parse_matrix, read_factors, read_matrix, write_factors, write_matrix};
pub use params::ParamArgs;
pub use report::{theta_deviation, verify_factored, verify_with, Thresholds, VerificationReport};
pub use sweep::{parse_fid, parse_filter, sweep, task_seed, CellRecord, CellSelector, SweepConfig, SweepReport};
