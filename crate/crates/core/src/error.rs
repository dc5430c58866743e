use thiserror::Error;

/// Errors raised by constructors and analyses.
///
/// Validation *failures* (a table that is not a no-signalling box, a
/// decomposition that does not exist) are reported through report types;
/// this enum is for structural problems and out-of-domain inputs.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("expected {expected} entries, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("bit fields must be 0 or 1, got {0}")]
    NotABit(u8),

    #[error("visibility {v} outside admissible range: {bound}")]
    VisibilityRange { v: f64, bound: String },

    #[error("correlator set does not describe a box: entry {index} = {value}")]
    NotABox { index: usize, value: f64 },

    #[error("correlator {value} outside [-1, 1]")]
    CorrelatorRange { value: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("state is not a density matrix: {0}")]
    InvalidState(String),

    #[error("invalid measurement: {0}")]
    InvalidMeasurement(String),

    #[error("empty party set")]
    EmptyPartySet,

    #[error("linear program did not converge after {iterations} pivots")]
    LpNonConvergence { iterations: usize },

    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
