//! Configuration, experiment drivers and text/CSV reports.
//!
//! Every command of the `fsp` binary is a thin wrapper over a function here,
//! so the numbers a user sees on the command line are the ones the tests check.

mod checks;
mod config;
mod run;

pub use checks::{
    appendix_checks, condition_checks, conditions_for, flux_differencing_gap, run_checks,
    watertight_check, CheckLine, CheckReport, Relation, APPENDIX_EXACT_TOL,
    APPENDIX_MISMATCH_MIN, CONDITION_TOL, FLUX_DIFFERENCING_TOL, WATERTIGHT_TOL,
};
pub use config::{Command, RunConfig, SweepRanges};
pub use run::{run_freestream, run_sweep, FreestreamReport, SweepOutput, SweepRow, CSV_HEADER};

use crate::error::Error;

/// Process exit status for a run that ended in `err`.
///
/// `0` success, `1` a failed check, `2` an invalid configuration, `3` a
/// solver blow-up; anything else is reported as `1`.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::Parse(_) | Error::MeshSpec(_) | Error::AdjacentRefinement(..) => 2,
        Error::InvalidDegree { .. } => 2,
        Error::BlowUp { .. } | Error::NonphysicalState { .. } => 3,
        _ => 1,
    }
}
