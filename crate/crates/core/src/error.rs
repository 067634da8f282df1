use thiserror::Error;

use crate::degree::TheoryConstants;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid degree law: {0}")]
    InvalidLaw(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("fixed-point iteration did not converge after {iterations} iterations (last iterate {last})")]
    NoConvergence { last: f64, iterations: usize },

    /// The law has `nu <= 1`; the constants that do not depend on
    /// supercriticality are still carried along.
    #[error("law is not supercritical (nu = {nu})")]
    Subcritical {
        nu: f64,
        constants: Box<TheoryConstants>,
    },

    #[error("no simple graph after {attempts} attempts (acceptance rate below {acceptance_upper_bound:.3e})")]
    RejectionFailure {
        attempts: usize,
        acceptance_upper_bound: f64,
    },

    #[error("infeasible request: {reason} (about {required_runs} runs needed)")]
    Infeasible { reason: String, required_runs: u64 },

    #[error("schema mismatch: {0}")]
    Schema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
