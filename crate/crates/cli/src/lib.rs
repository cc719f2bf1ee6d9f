//! Command-line front end for `simplexdet-core`: a verdict cache, a worker
//! pool for scans, and reproduction of the published tables and figure.

pub mod cache;
pub mod compute;
pub mod fig1;
pub mod output;
pub mod tables;

use simplexdet_core::Error;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_PARAMETER: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parameter(_) => EXIT_PARAMETER,
        Error::Budget(_) => EXIT_BUDGET,
        Error::Invariant(_) => EXIT_INTERNAL,
    }
}
