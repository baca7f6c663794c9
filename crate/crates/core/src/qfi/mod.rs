//! Quantum Fisher information of a squeezing-encoded Gaussian state.

mod derivatives;
mod encoding;
mod engine;

pub use derivatives::{encoded_derivatives, DerivativeMode, EncodedDerivatives, FD_STEP};
pub use encoding::encode;
pub use engine::{
    displacement_contribution, qfi, qfi_single_mode, qfi_single_mode_with, qfi_two_mode, qfi_two_mode_with,
    qfi_with, verify_single_mode_identity, IdentityResidual, QfiResult, DEGENERACY_TOL, PURE_TOL,
    RANK_EXACT_TOL, RANK_WINDOW,
};
