//! Batch front end for the hecke-core verifiers: case files, concurrent
//! execution, JSON reports and derivation transcripts.

pub mod case;
pub mod explain;
pub mod run;

pub use case::{parse_cases, parse_line, CaseParams, CaseSpec, Expect, Kind, ParseError, ParseOptions};
pub use explain::explain;
pub use run::{run_case, run_cases, CaseReport, IdentityReport, RunOptions, RunReport, Summary};

/// Exit status for a file that does not parse.
pub const EXIT_PARSE: i32 = 2;
/// Exit status for a verifier or I/O error.
pub const EXIT_INTERNAL: i32 = 3;
