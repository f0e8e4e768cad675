use thiserror::Error;

/// Errors raised by model construction, numerics and verification.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{kind} violation: {msg}")]
    Invariant { kind: InvariantKind, msg: String },

    #[error("region is not a disk: {0}")]
    RegionNotADisk(String),

    #[error("precondition refused: {0}")]
    Precondition(String),

    #[error("{what} cap exceeded: {size} > {cap}")]
    CapExceeded { what: &'static str, size: u128, cap: u128 },

    #[error("operator is not a projector (residual {0:e})")]
    NotAProjector(f64),

    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),

    #[error("eigensolver did not converge: {0}")]
    NonConvergence(String),
}

/// Which algebraic-data invariant failed on load or validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvariantKind {
    Pentagon,
    Unitarity,
    DimensionEquation,
    Associativity,
    Unit,
    Inverse,
    Duality,
    Multiplicity,
}

impl std::fmt::Display for InvariantKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            InvariantKind::Pentagon => "pentagon",
            InvariantKind::Unitarity => "unitarity",
            InvariantKind::DimensionEquation => "dimension equation",
            InvariantKind::Associativity => "associativity",
            InvariantKind::Unit => "unit",
            InvariantKind::Inverse => "inverse",
            InvariantKind::Duality => "duality",
            InvariantKind::Multiplicity => "multiplicity",
        };
        f.write_str(s)
    }
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CapExceeded { .. } => 3,
            Error::NonConvergence(_) => 4,
            _ => 2,
        }
    }

    pub(crate) fn cap(what: &'static str, size: u128, cap: u128) -> Self {
        Error::CapExceeded { what, size, cap }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
