//! Exact solutions of the benchmarks, error norms and convergence orders.

mod exact;
mod norms;
mod report;

pub use exact::{builtin_benchmarks, Benchmark, ExactField, ExactTriple, Example};
pub use norms::{error_norms, error_norms_on, ControlLaw, ErrorNorms};
pub use report::{estimate_order, loglog_slope, ConvergenceReport, ReportRow, ERROR_NAMES};
