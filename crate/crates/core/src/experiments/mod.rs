//! Reproducible Monte Carlo campaigns and bound sweeps, emitted as tables.
//!
//! Every trial draws its randomness from its own generator seeded by
//! `(master seed, point index, trial index)` (see [`crate::seeds`]), and
//! results are collected in `(point, trial)` order, so output is
//! bit-identical whatever the thread count.

mod config;
mod distortion;
mod oracle;
mod sweep;
mod table;
mod xorsat;

pub use config::{
    information_bits, linspace, parse_degree_list, parse_float_list, parse_size_list,
    short_hash, variables_for_density, ExperimentConfig, ExperimentKind,
};
pub use distortion::{
    distortion_table, run_distortion_experiment, run_distortion_trials, PointParams, TrialRecord,
    DISTORTION_COLUMNS,
};
pub use oracle::{
    check_first_moment, check_induced_distribution, check_overlap_exponent, check_second_moment,
    run_oracle_checks, OracleReport, OracleRow, EXPONENT_TOLERANCE, ORACLE_COLUMNS,
    OVERLAP_LENGTHS, SIGNIFICANCE,
};
pub use sweep::{run_bound_sweep, SWEEP_COLUMNS};
pub use table::{Cell, Table};
pub use xorsat::{run_xorsat_experiment, transition_midpoint, XORSAT_COLUMNS};

pub use crate::gf2::oracles::mean_stderr;

use crate::error::Result;

/// Runs whichever experiment `config.kind` names and returns its table.
pub fn run(config: &ExperimentConfig) -> Result<Table> {
    match config.kind {
        ExperimentKind::Distortion => run_distortion_experiment(config),
        ExperimentKind::Xorsat => run_xorsat_experiment(config),
        ExperimentKind::BoundSweep => run_bound_sweep(config),
        ExperimentKind::OracleCheck => Ok(run_oracle_checks(config)?.to_table()),
    }
}
