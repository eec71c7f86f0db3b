use thiserror::Error;

use crate::var::VarIndex;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown variable t({0}); expected one of 1, -1, 2, -2, 3, -3, 4, -4, 5")]
    UnknownVariable(i64),

    #[error("no substitution image for {0}")]
    MissingImage(VarIndex),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("polynomial {0} still depends on t(5)")]
    NotT5Free(String),

    #[error("sampling rejected {0} consecutive near-singular matrices")]
    SamplingRejected(usize),

    #[error("relation residual {residual:e} exceeds tolerance {tolerance:e}")]
    RelationResidual { residual: f64, tolerance: f64 },

    #[error("certification of {what} failed: residual {residual:e} > {tolerance:e}")]
    Certification {
        what: String,
        residual: f64,
        tolerance: f64,
    },

    #[error("t(5) action of {element} matches neither t(5) nor P - t(5)")]
    UnclassifiedAction { element: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
