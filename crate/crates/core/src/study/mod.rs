//! Single runs and refinement studies of the built-in benchmarks.

mod config;
mod run;

pub use config::{ConfigError, StudyConfig};
pub use run::{
    build_level_mesh, emit_plot_series, run_case, run_level, run_study, write_csv, CaseReport, Timings,
    CSV_HEADER,
};
