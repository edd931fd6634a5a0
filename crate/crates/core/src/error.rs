use thiserror::Error;

use crate::model::Violation;

pub type Result<T> = std::result::Result<T, CawError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CawError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("no equilibrium: {0}")]
    NoEquilibrium(String),

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    /// The ceiling is zero while labor demand grows without bound as the
    /// wage goes to zero.
    #[error("degenerate ceiling: ceiling is 0 and labor demand is unbounded at a zero wage")]
    DegenerateCeiling,

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("ceiling {ceiling} is not binding (uncapped clearing wage {clearing_wage})")]
    CeilingNotBinding { ceiling: f64, clearing_wage: f64 },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("scenario has {} violation(s): {}", .0.len(), join_violations(.0))]
    Validation(Vec<Violation>),

    #[error("i/o error: {0}")]
    Io(String),
}

impl CawError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        CawError::InvalidInput(msg.into())
    }

    /// True for the failure modes of an iterative or equilibrium solve, as
    /// opposed to bad input.
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            CawError::NoEquilibrium(_)
                | CawError::NoConvergence { .. }
                | CawError::DegenerateCeiling
                | CawError::Infeasible(_)
                | CawError::CeilingNotBinding { .. }
        )
    }
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|v| v.message.as_str())
        .collect::<Vec<_>>()
        .join("; ")
}
