//! Single-mode QFI under the lossy encoding, in closed form, and the
//! single-mode AvQFI dispatcher built on it.

use super::closed::{avqfi_sm_noiseless_params, qfi_sm_noiseless_theta, qfi_variance_noiseless};
use super::numeric::{avqfi_numeric, theta_average, AvqfiResult};
use super::prior::ThetaPrior;
use crate::error::{Error, Result};
use crate::gaussian::{EncodingParams, SingleModeProbeParams};

/// `N₁/D₁ + N₂/D₂ + N₃/D₃` for a probe with `φ = 0` (a nonzero `φ` is
/// absorbed into `θ` and `ψ`). Valid for `ε > 0`.
pub fn qfi_sm_noisy_closed(p: &SingleModeProbeParams, epsilon: f64, eta: f64, theta: f64) -> Result<f64> {
    p.validate()?;
    EncodingParams::new(epsilon, theta, eta)?;
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "noisy closed form holds for ε > 0, got {epsilon}"
        )));
    }
    if eta == 0.0 {
        return Ok(0.0);
    }
    if eta == 1.0 {
        return qfi_sm_noiseless_theta(p, theta);
    }
    let th = theta + p.phi;
    let psi = p.psi + p.phi;
    let (nu, a, e) = (p.nu, p.alpha, epsilon);
    let xx = p.xi_mag * psi.cos();
    let xp = p.xi_mag * psi.sin();
    let en = eta * nu;
    let (e2a, e4a) = ((2.0 * a).exp(), (4.0 * a).exp());
    let (ch2a, ch4a, sh2a) = ((2.0 * a).cosh(), (4.0 * a).cosh(), (2.0 * a).sinh());
    let (ch2e, sh2e) = ((2.0 * e).cosh(), (2.0 * e).sinh());
    let (c2t, s2t, c4t, s4t) = ((2.0 * th).cos(), (2.0 * th).sin(), (4.0 * th).cos(), (4.0 * th).sin());
    let em1 = eta - 1.0;
    let eta2 = eta * eta;
    let r2 = xx * xx + xp * xp;

    let n1 = em1 * em1
        * eta2
        * (-4.0 * (a + e)).exp()
        * ((e4a - 1.0) * en * ((4.0 * e).exp() + 1.0) * c2t
            + 4.0 * (2.0 * (a + e)).exp() * sh2e * (en * ch2a - eta + 1.0))
            .powi(2);
    let n2 = (-2.0 * a).exp()
        * eta2
        * ((e4a - 1.0).powi(2) * en * en * c4t
            - 2.0 * e4a
                * (en * (en * ch4a - 8.0 * em1 * ch2a) + eta * (eta * (3.0 * nu * nu + 4.0) - 8.0) + 4.0));
    let n3 = eta2
        * (-eta
            * (-2.0 * (e4a - 1.0) * en * s4t * xp * xx
                + (e4a - 1.0) * en * c4t * (xp - xx) * (xp + xx)
                + 2.0 * e2a * r2 * (en * ch2a - eta + 1.0))
            + 2.0 * e2a * em1 * sh2e * (-c2t * xp * xp + 2.0 * s2t * xp * xx + c2t * xx * xx)
            + 2.0 * e2a * em1 * ch2e * r2);
    let d2 = 2.0
        * (e4a * em1 * eta2 * nu * (eta + c2t * sh2e + ch2e)
            - e2a * (eta * (eta * (eta * (eta * nu * nu + eta - 2.0) + 2.0) - 2.0) + 2.0 * eta * em1 * em1 * ch2e + 2.0)
            + em1 * eta2 * nu * (eta - c2t * sh2e + ch2e));
    let d3 = e2a
        * (2.0 * em1 * eta * (en * sh2a * c2t * sh2e + en * ch2a * (eta + ch2e) - em1 * ch2e)
            - eta.powi(4) * nu * nu
            - em1 * em1 * (eta2 + 1.0));
    let rhs = (e4a - 1.0) * (1.0 - eta) * eta2 * nu * ((4.0 * e).exp() - 1.0) * c2t
        + 2.0 * (2.0 * (a + e)).exp()
            * (2.0 * (1.0 - eta) * eta * (en * ch2a * (eta + ch2e) + (1.0 - eta) * ch2e)
                + eta.powi(4) * nu * nu
                + (1.0 - eta).powi(2) * (eta2 + 1.0));
    let d1 = 2.0 * (rhs * rhs / (4.0 * (4.0 * (a + e)).exp()) - 1.0);

    let first = if n1 == 0.0 { 0.0 } else { n1 / d1 };
    let v = first + n2 / d2 + n3 / d3;
    if !v.is_finite() {
        return Err(Error::Numerical(format!("noisy closed form diverges at {p:?}, ε={epsilon}, η={eta}, θ={theta}")));
    }
    Ok(v.max(0.0))
}

/// θ-averaged single-mode QFI under the (possibly lossy) encoding. Closed
/// form at `η ∈ {0, 1}`, quadrature of the noisy closed form for `ε > 0`,
/// and the generic engine otherwise.
pub fn avqfi_single_mode(
    p: &SingleModeProbeParams,
    epsilon: f64,
    eta: f64,
    nodes: usize,
) -> Result<AvqfiResult> {
    p.validate()?;
    EncodingParams::new(epsilon, 0.0, eta)?;
    if eta == 0.0 {
        return Ok(AvqfiResult::zero());
    }
    if eta == 1.0 {
        let mean = avqfi_sm_noiseless_params(p)?;
        let var = qfi_variance_noiseless(p)?;
        let amp = (2.0 * var).sqrt();
        return Ok(AvqfiResult::closed_form(mean, var, mean - amp, mean + amp));
    }
    if epsilon > 0.0 {
        theta_average(|t| qfi_sm_noisy_closed(p, epsilon, eta, t), &ThetaPrior::Uniform, nodes)
    } else {
        avqfi_numeric(&p.to_state()?, epsilon, eta, &ThetaPrior::Uniform, nodes)
    }
}
