//! Direction-averaged QFI: quadrature over θ, closed forms, θ-variance and
//! photon-number bounds.

mod closed;
mod noisy;
mod numeric;
mod prior;

pub use closed::{
    avqfi_bounds_noiseless, avqfi_sm_noiseless, avqfi_sm_noiseless_params, avqfi_tmsv_noiseless,
    avqfi_two_mode_noiseless, avqfi_two_mode_noiseless_state, qfi_sm_noiseless_theta, qfi_variance_noiseless,
    variance_amplitudes, AvqfiBounds, CLOSED_PURE_TOL,
};
pub use noisy::{avqfi_single_mode, qfi_sm_noisy_closed};
pub use numeric::{
    avqfi_numeric, avqfi_numeric_with, check_nodes, theta_average, AvqfiMethod, AvqfiResult, DEFAULT_NODES,
    MIN_NODES,
};
pub use prior::{ThetaPrior, PRIOR_NORM_TOL};

use crate::error::{Error, Result};
use crate::gaussian::{tmsv, EncodingParams};
use crate::qfi::qfi_two_mode;

/// AvQFI of TMSV(r) through the lossy encoding; the lossy QFI of TMSV does
/// not depend on θ, so a single direction is evaluated.
pub fn avqfi_tmsv(r: f64, epsilon: f64, eta: f64) -> Result<f64> {
    let p = EncodingParams::new(epsilon, 0.0, eta)?;
    if p.is_unitary() {
        return Ok(avqfi_tmsv_noiseless(r));
    }
    Ok(qfi_two_mode(&tmsv(r), &p)?.value)
}

/// [`avqfi_tmsv`] parametrized by the photon number `sinh²r` of each mode,
/// which keeps the noiseless value free of the `asinh` round trip.
pub fn avqfi_tmsv_photons(sinh2: f64, epsilon: f64, eta: f64) -> Result<f64> {
    if !(sinh2 >= 0.0) || !sinh2.is_finite() {
        return Err(Error::InvalidParameter(format!("photon number {sinh2} must be finite and ≥ 0")));
    }
    let p = EncodingParams::new(epsilon, 0.0, eta)?;
    if p.is_unitary() {
        return Ok(4.0 * sinh2 * sinh2 + 4.0 * sinh2 + 2.0);
    }
    Ok(qfi_two_mode(&tmsv(sinh2.sqrt().asinh()), &p)?.value)
}
