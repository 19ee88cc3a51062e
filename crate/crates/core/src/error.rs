use thiserror::Error;

/// Errors produced by the diversity library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("element index {index} out of range for ground set of size {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("subset mask {mask:#x} is not contained in a ground set of size {n}")]
    SubsetOutOfRange { mask: u64, n: usize },

    #[error("ground set size {n} exceeds the cap of {cap} for {operation}")]
    CapExceeded {
        operation: &'static str,
        n: usize,
        cap: usize,
    },

    #[error("invalid diversity: {0}")]
    InvalidDiversity(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("invalid split weighting: {0}")]
    InvalidWeighting(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("embedded value vanishes on subset {mask:#x}; distortion is infinite")]
    InfiniteDistortion { mask: u64 },

    #[error("linear program: {0}")]
    Lp(#[from] crate::lp::LpError),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
