//! Quantum Fisher information for estimating the strength of a squeezing
//! operation of unknown direction, with one- and two-mode Gaussian probes,
//! optionally under photon loss.
//!
//! Quadratures are normalized so that the vacuum covariance matrix is the
//! identity. Mode 0 is the encoded mode A; mode 1, when present, is the
//! reference mode B.

pub mod avqfi;
pub mod error;
pub mod gaussian;
pub mod qfi;
pub mod sampler;
pub mod sweep;

pub use error::{Error, Result};
pub use gaussian::{EncodingParams, GaussianState, SingleModeProbeParams, StandardFormParams};
