//! Tripartite correlation boxes, Bell-type inequalities, Born-rule
//! reproduction and dimension-bounded LHV-LHS decompositions.

pub mod boxes;
pub mod cli;
pub mod decomposition;
pub mod error;
pub mod inequalities;
pub mod quantum;

pub use error::{Error, Result};

/// Default tolerances.
pub mod tol {
    /// Probability-table comparisons.
    pub const PROB: f64 = 1e-9;
    /// Matrix Hermiticity, trace and positivity checks.
    pub const MAT: f64 = 1e-9;
    /// Linear-program feasibility and residuals.
    pub const LP: f64 = 1e-7;
    /// Residual above which a linear system counts as inconsistent.
    pub const INCONSISTENT: f64 = 1e-7;
    /// Slack on the arcsine inequality.
    pub const TLM: f64 = 1e-12;
}
