use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph contains a directed cycle through vertex {vertex}")]
    CycleDetected { vertex: usize },
    #[error("no path from source {from} to destination {to}")]
    NoPath { from: usize, to: usize },
    #[error("graph has {count} source-destination paths, more than the cap of {cap}")]
    PathExplosion { count: u128, cap: usize },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("loss {value} for edge {edge} at round {round} is outside [0, 1]")]
    OutOfRange { round: u64, edge: usize, value: f64 },
    #[error("oblivious schedule has no row for round {round}")]
    ScheduleExhausted { round: u64 },
    #[error(
        "contamination of edge {edge} reaches {count} locations by round {round}, budget is {budget:.3}"
    )]
    BudgetViolation { edge: usize, round: u64, count: usize, budget: f64 },
    #[error("total path weight underflowed")]
    NumericUnderflow,
    #[error("edge {edge} was observed with zero sampling probability")]
    DivisionByZero { edge: usize },
    #[error("probe budget {budget} exceeds the {paths} available paths")]
    BudgetTooLarge { budget: usize, paths: usize },
    #[error("edge {edge} is not covered by any source-destination pair")]
    InfeasibleCover { edge: usize },
    #[error("perturbed probing mixture {value} is outside (0, 1]")]
    ProbabilityOutOfRange { value: f64 },
    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
    #[error("{path}: {message}")]
    Config { path: String, message: String },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {message}", path.display())]
    Parse { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config { path: path.into(), message: message.into() }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// Process exit code for the CLI: 2 for configuration and input
    /// problems, 3 for violated runtime invariants.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CycleDetected { .. }
            | Error::NoPath { .. }
            | Error::PathExplosion { .. }
            | Error::InvalidGraph(_)
            | Error::ScheduleExhausted { .. }
            | Error::BudgetViolation { .. }
            | Error::BudgetTooLarge { .. }
            | Error::InfeasibleCover { .. }
            | Error::Config { .. }
            | Error::Io { .. }
            | Error::Parse { .. } => 2,
            Error::OutOfRange { .. }
            | Error::NumericUnderflow
            | Error::DivisionByZero { .. }
            | Error::ProbabilityOutOfRange { .. }
            | Error::InternalInvariant(_) => 3,
        }
    }
}
