use thiserror::Error;

use crate::numeric::{Field, TransposeKind};

/// Everything that can go wrong inside the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("transpose {kind:?} is not defined over {field:?}")]
    InvalidTranspose { kind: TransposeKind, field: Field },
    #[error("expected a matrix over {expected:?}, found {found:?}")]
    WrongField { expected: Field, found: Field },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("angle {index} = {value} lies outside its domain")]
    DomainViolation { index: usize, value: f64 },
    #[error("no factorization F{fid} over beta = {beta}")]
    EmptyCell { fid: u8, beta: u8 },
    #[error("bad partition: {0}")]
    BadPartition(String),
    #[error("unknown involution: {0}")]
    UnknownInvolution(String),
    #[error("matrix is singular")]
    Singular,
    #[error("input is not in the group (residual {residual:.3e})")]
    NotInGroup { residual: f64 },
    #[error("inertia mismatch: expected ({p}, {q}), found ({found_p}, {found_q})")]
    SignatureMismatch { p: usize, q: usize, found_p: usize, found_q: usize },
    #[error("matrix is not symmetric (residual {residual:.3e})")]
    NotSymmetric { residual: f64 },
    #[error("zero pivot at step {index}")]
    PivotBreakdown { index: usize },
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("no decomposition algorithm for F{fid} over beta = {beta}")]
    Unsupported { fid: u8, beta: u8 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Errors caused by how the library was called rather than by what the
    /// numbers turned out to be.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::ShapeMismatch(_)
                | Error::SizeMismatch(_)
                | Error::EmptyCell { .. }
                | Error::BadPartition(_)
                | Error::UnknownInvolution(_)
                | Error::Unsupported { .. }
                | Error::Parse(_)
                | Error::Io(_)
                | Error::WrongField { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
