//! Closed forms for the noiseless encoding.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{standard_form, GaussianState, SingleModeProbeParams, StandardFormParams};

/// Below this `det Γ - 1` the two-mode closed form is regularized.
pub const CLOSED_PURE_TOL: f64 = 1e-6;
const REG_DELTAS: [f64; 3] = [1e-3, 5e-4, 2.5e-4];

/// θ-resolved QFI of a single-mode probe with `φ = 0`. A nonzero `φ` is
/// absorbed as `H(θ; φ, ψ) = H(θ+φ; 0, ψ+φ)`.
pub fn qfi_sm_noiseless_theta(p: &SingleModeProbeParams, theta: f64) -> Result<f64> {
    p.validate()?;
    let (nu, a) = (p.nu, p.alpha);
    let theta = theta + p.phi;
    let psi = p.psi + p.phi;
    let xi2 = p.xi_mag * p.xi_mag;
    let (ch, sh) = (a.cosh(), a.sinh());
    let disp = 2.0 * xi2 / nu * ((2.0 * a).cosh() - (4.0 * theta - 2.0 * psi).cos() * (2.0 * a).sinh());
    let cov = 4.0 * nu * nu / (nu * nu + 1.0)
        * (ch.powi(4) + sh.powi(4) - 0.5 * (4.0 * theta).cos() * (2.0 * a).sinh().powi(2));
    Ok(disp + cov)
}

/// Amplitudes `(V₁, V₂)` of the `cos 4θ` and `cos(4θ - 2ψ)` harmonics.
pub fn variance_amplitudes(p: &SingleModeProbeParams) -> (f64, f64) {
    let nu2 = p.nu * p.nu;
    let s2 = (2.0 * p.alpha).sinh();
    (2.0 * nu2 / (nu2 + 1.0) * s2 * s2, 2.0 * p.xi_mag * p.xi_mag / p.nu * s2)
}

/// Variance over θ of the noiseless single-mode QFI, `(V₁² + V₂² + 2V₁V₂ cos 2ψ)/2`
/// (with `ψ` measured after removing `φ`).
pub fn qfi_variance_noiseless(p: &SingleModeProbeParams) -> Result<f64> {
    p.validate()?;
    let (v1, v2) = variance_amplitudes(p);
    let psi = p.psi + p.phi;
    Ok(0.5 * (v1 * v1 + v2 * v2 + 2.0 * v1 * v2 * (2.0 * psi).cos()).max(0.0))
}

/// `((Tr Γ)² + 4 det Γ) / (2(1 + det Γ)) + |ξ|² Tr Γ / det Γ`.
pub fn avqfi_sm_noiseless(gamma_a: &DMatrix<f64>, xi_mag: f64) -> Result<f64> {
    if gamma_a.shape() != (2, 2) {
        return Err(Error::Dimension("single-mode covariance must be 2×2".into()));
    }
    let state = GaussianState::new(gamma_a.clone(), nalgebra::DVector::zeros(2))?;
    let g = state.gamma();
    let (tr, det) = (g.trace(), g.determinant());
    Ok((tr * tr + 4.0 * det) / (2.0 * (1.0 + det)) + xi_mag * xi_mag * tr / det)
}

/// Noiseless single-mode AvQFI from the parameters: `Tr Γ = 2ν cosh 2α`, `det Γ = ν²`.
pub fn avqfi_sm_noiseless_params(p: &SingleModeProbeParams) -> Result<f64> {
    p.validate()?;
    let tr = 2.0 * p.nu * (2.0 * p.alpha).cosh();
    let det = p.nu * p.nu;
    Ok((tr * tr + 4.0 * det) / (2.0 * (1.0 + det)) + p.xi_mag * p.xi_mag * tr / det)
}

/// θ-average of a two-mode probe in standard form; pure states are reached
/// by the `(1+δ)Γ` limit since the expression is 0/0 there.
pub fn avqfi_two_mode_noiseless(p: &StandardFormParams) -> Result<f64> {
    p.to_state()?;
    let disp = standard_form_displacement(p);
    let det = p.gamma().determinant();
    let cov = if det - 1.0 < CLOSED_PURE_TOL {
        let h: Vec<f64> = REG_DELTAS.iter().map(|d| standard_form_covariance(&p.scaled(1.0 + d))).collect();
        (8.0 * h[2] - 6.0 * h[1] + h[0]) / 3.0
    } else {
        standard_form_covariance(p)
    };
    let v = cov + disp;
    if !v.is_finite() {
        return Err(Error::Numerical(format!("two-mode closed form not finite for {p:?}")));
    }
    Ok(v)
}

/// Same as [`avqfi_two_mode_noiseless`] for an arbitrary two-mode state.
pub fn avqfi_two_mode_noiseless_state(state: &GaussianState) -> Result<f64> {
    let (p, _) = standard_form(state)?;
    avqfi_two_mode_noiseless(&p)
}

fn standard_form_displacement(p: &StandardFormParams) -> f64 {
    let det = p.gamma().determinant();
    let (b, c, d) = (p.b, p.c, p.d);
    b * p.xi_norm_squared() / det * (b * (p.a_x + p.a_p) - c * c - d * d)
}

fn standard_form_covariance(p: &StandardFormParams) -> f64 {
    let (ax, ap, axp, b, c, d) = (p.a_x, p.a_p, p.a_xp, p.b, p.c, p.d);
    let (b2, c2, d2, axp2) = (b * b, c * c, d * d, axp * axp);
    let den1 = -b2 * axp2 + (c2 - ax * b) * (d2 - b * ap) - 1.0;
    let t1 = (c2 * (4.0 * d2 - b * (ax + 5.0 * ap))
        + b * (b * (ax * ax + 6.0 * ax * ap + ap * ap - 4.0 * axp2) - d2 * (5.0 * ax + ap)))
        / (2.0 * den1);
    let num2 = 4.0
        * (b2 + c * d + 1.0)
        * (-(b2 + 1.0) * axp2 + ax * (ap * b2 - b * d2 + ap) + c2 * (d2 - b * ap) + c * d)
        + (ax + b2 * (ax + ap) - b * (c2 + d2) + ap).powi(2);
    let den2 = 2.0
        * den1
        * (ax * ap + b2 * (ax * ap - axp2 + 1.0) - b * (ap * c2 + ax * d2) - axp2 + (c * d + 1.0).powi(2));
    t1 - num2 / den2
}

/// `4 sinh⁴r + 4 sinh²r + 2`.
pub fn avqfi_tmsv_noiseless(r: f64) -> f64 {
    let s2 = r.sinh().powi(2);
    4.0 * s2 * s2 + 4.0 * s2 + 2.0
}

/// Noiseless single-mode AvQFI at photon number `n`: squeezed vacuum (max),
/// thermal (min) and coherent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AvqfiBounds {
    pub max: f64,
    pub min: f64,
    pub coherent: f64,
}

pub fn avqfi_bounds_noiseless(n_a: f64) -> Result<AvqfiBounds> {
    if !(n_a >= 0.0) || !n_a.is_finite() {
        return Err(Error::InvalidParameter(format!("photon number {n_a} must be ≥ 0")));
    }
    let t = 2.0 * n_a + 1.0;
    Ok(AvqfiBounds {
        max: 4.0 * n_a * n_a + 4.0 * n_a + 2.0,
        min: 4.0 * t * t / (1.0 + t * t),
        coherent: 2.0 * t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::tmsv;
    use std::f64::consts::PI;

    fn sq(n: f64) -> SingleModeProbeParams {
        SingleModeProbeParams::new(1.0, n.sqrt().asinh(), 0.0, 0.0, 0.0).unwrap()
    }

    #[test]
    fn theta_resolved_examples() {
        assert!((qfi_sm_noiseless_theta(&sq(1.0), 0.0).unwrap() - 2.0).abs() < 1e-12);
        assert!((qfi_sm_noiseless_theta(&sq(1.0), PI / 4.0).unwrap() - 18.0).abs() < 1e-12);
        let coh = SingleModeProbeParams::new(1.0, 0.0, 0.0, 2f64.sqrt(), 0.7).unwrap();
        for th in [0.0, 0.3, 2.0] {
            assert!((qfi_sm_noiseless_theta(&coh, th).unwrap() - 6.0).abs() < 1e-12);
        }
    }

    #[test]
    fn variance_examples() {
        let flat = SingleModeProbeParams::new(1.7, 0.0, 0.0, 1.0, 0.4).unwrap();
        assert_eq!(qfi_variance_noiseless(&flat).unwrap(), 0.0);
        assert!((qfi_variance_noiseless(&sq(1.0)).unwrap() - 32.0).abs() < 1e-10);
        // V₁ = V₂ at ν = 1 needs |ξ|² = sinh(2α)/2; cancellation sits at ψ = π/2.
        let a: f64 = 0.6;
        let p = SingleModeProbeParams::new(1.0, a, 0.0, (0.5 * (2.0 * a).sinh()).sqrt(), PI / 2.0).unwrap();
        let (v1, v2) = variance_amplitudes(&p);
        assert!((v1 - v2).abs() < 1e-12);
        assert!(qfi_variance_noiseless(&p).unwrap() < 1e-20);
    }

    #[test]
    fn single_mode_average_examples() {
        let i = DMatrix::identity(2, 2);
        assert!((avqfi_sm_noiseless(&i, 0.0).unwrap() - 2.0).abs() < 1e-14);
        let s = sq(1.0).to_state().unwrap();
        assert!((avqfi_sm_noiseless(s.gamma(), 0.0).unwrap() - 10.0).abs() < 1e-12);
        assert!((avqfi_sm_noiseless(&(i * 3.0), 0.0).unwrap() - 3.6).abs() < 1e-12);
    }

    #[test]
    fn tmsv_examples() {
        assert_eq!(avqfi_tmsv_noiseless(0.0), 2.0);
        assert!((avqfi_tmsv_noiseless(1f64.asinh()) - 10.0).abs() < 1e-12);
        assert!((avqfi_tmsv_noiseless(2f64.sqrt().asinh()) - 26.0).abs() < 1e-12);
        let r = 1f64.asinh();
        let (p, _) = standard_form(&tmsv(r)).unwrap();
        assert!((avqfi_two_mode_noiseless(&p).unwrap() - 10.0).abs() < 1e-7);
    }

    #[test]
    fn uncorrelated_standard_form_ignores_b() {
        for b in [1.0, 2.5, 7.0] {
            let p = StandardFormParams { a_x: 3.0, a_p: 1.2, a_xp: 0.4, b, c: 0.0, d: 0.0, xi_x: 0.3, xi_p: -0.8 };
            let g = DMatrix::from_row_slice(2, 2, &[3.0, 0.4, 0.4, 1.2]);
            let single = avqfi_sm_noiseless(&g, p.xi_norm_squared().sqrt()).unwrap();
            assert!((avqfi_two_mode_noiseless(&p).unwrap() - single).abs() < 1e-10 * single);
        }
    }

    #[test]
    fn bounds_examples() {
        let b = avqfi_bounds_noiseless(0.0).unwrap();
        assert_eq!((b.max, b.min, b.coherent), (2.0, 2.0, 2.0));
        let b = avqfi_bounds_noiseless(1.0).unwrap();
        assert!((b.max - 10.0).abs() < 1e-14 && (b.min - 3.6).abs() < 1e-14 && b.coherent == 6.0);
        let b = avqfi_bounds_noiseless(5.0).unwrap();
        assert_eq!((b.max, b.coherent), (122.0, 22.0));
        assert!((b.min - 4.0 * 121.0 / 122.0).abs() < 1e-14);
        assert!(avqfi_bounds_noiseless(-1.0).is_err());
    }
}
