//! Simulation harness: configuration, Monte Carlo runs and result output.

pub mod config;
pub mod output;
pub mod sim;

pub use config::{PrunerKind, SimConfig};
pub use output::{emit_csv, emit_plot_data, to_csv, to_plot_data, to_svg, CSV_HEADER};
pub use sim::{
    frame_info_bits, run_equivalence, run_fer, run_fer_with_threads, run_proposition_audit,
    threads_from_env, wilson_interval, EquivalencePoint, EquivalenceReport, SimResult, SnrPoint,
    THREADS_ENV,
};
