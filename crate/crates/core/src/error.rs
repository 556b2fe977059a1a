use thiserror::Error;

/// Errors produced by the algebra, state and optimization layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("algebra order mismatch: {left} vs {right}")]
    OrderMismatch { left: u8, right: u8 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("parity error: {0}")]
    Parity(String),

    #[error("unsupported parity: {0}")]
    UnsupportedParity(String),

    #[error("not invertible: {0}")]
    NotInvertible(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("matrix is not nilpotent: {0}")]
    NotNilpotent(String),

    #[error("factors share Grassmann generators (mask {0:#x})")]
    OverlappingGenerators(u32),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no feasible point found: best violation {violation:e} exceeds tolerance {tolerance:e}")]
    Infeasible { violation: f64, tolerance: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
