//! Gaussian states, symplectic actions, lossy channels and the two-mode
//! standard form.

mod params;
mod standard_form;
mod state;
mod symplectic;

pub use params::{from_single_mode_params, reduce_angle, EncodingParams, SingleModeProbeParams};
pub use standard_form::{standard_form, StandardFormParams, StandardFormTransform};
pub use state::{symplectic_eigenvalues_of, GaussianState, ModeSelector, StateJson, PHYSICALITY_TOL};
pub use symplectic::{omega, rotation_symplectic, squeeze_symplectic, SymplecticMatrix, SYMPLECTIC_TOL};

pub(crate) use state::apply_loss_in_place;

use crate::error::Result;

/// Two-mode squeezed vacuum with squeezing `r`:
/// `a_x = a_p = b = cosh 2r`, `c = -d = sinh 2r`.
pub fn tmsv(r: f64) -> GaussianState {
    let s = SymplecticMatrix::two_mode_squeeze(r);
    let m = s.matrix();
    let gamma = m * m.transpose();
    let gamma = (&gamma + gamma.transpose()) * 0.5;
    GaussianState::from_parts_unchecked(gamma, nalgebra::DVector::zeros(4))
}

/// TMSV whose single-mode reductions have symplectic eigenvalue `nu` (`cosh 2r = ν`).
pub fn tmsv_from_reduced_nu(nu: f64) -> Result<GaussianState> {
    if !(nu >= 1.0) {
        return Err(crate::Error::InvalidParameter(format!("reduced eigenvalue ν = {nu} < 1")));
    }
    Ok(tmsv(0.5 * nu.acosh()))
}

/// Apply the symmetric loss channel to the state on `mode`.
pub fn apply_loss(state: &GaussianState, eta: f64, mode: usize) -> Result<GaussianState> {
    state.apply_loss(eta, mode)
}

pub fn apply_unitary(state: &GaussianState, s: &SymplecticMatrix, modes: ModeSelector) -> Result<GaussianState> {
    state.apply_unitary(s, modes)
}

pub fn symplectic_eigenvalues(state: &GaussianState) -> Result<Vec<f64>> {
    state.symplectic_eigenvalues()
}

pub fn mean_photon_number(state: &GaussianState, mode: usize) -> Result<f64> {
    state.mean_photon_number(mode)
}

pub fn partial_trace(state: &GaussianState, keep: usize) -> Result<GaussianState> {
    state.partial_trace(keep)
}
