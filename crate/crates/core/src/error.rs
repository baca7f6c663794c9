use thiserror::Error;

/// Errors produced by the Gaussian toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("unphysical state: {0}")]
    Unphysical(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An encoded symplectic eigenvalue sits at, or just above, 1 while the
    /// encoding is lossy. The closed QFI formula is discontinuous there.
    #[error("rank-change regime: encoded symplectic eigenvalue {nu} is too close to 1 for a lossy encoding")]
    RankChange { nu: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::RankChange { .. } | Error::Numerical(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
