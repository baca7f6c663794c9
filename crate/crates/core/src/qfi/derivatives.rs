//! ε-derivatives of the encoded covariance, displacement and symplectic
//! eigenvalues, by a closed-form route and a finite-difference route.

use nalgebra::{DMatrix, DVector};

use super::encoding::encode_raw;
use crate::error::{Error, Result};
use crate::gaussian::{omega, symplectic_eigenvalues_of, EncodingParams, GaussianState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DerivativeMode {
    #[default]
    Analytic,
    FiniteDifference,
}

/// Everything the QFI formulas need about the encoded state.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedDerivatives {
    pub gamma_enc: DMatrix<f64>,
    pub xi_enc: DVector<f64>,
    pub dgamma: DMatrix<f64>,
    pub dxi: DVector<f64>,
    /// Encoded symplectic eigenvalues, descending.
    pub nus: Vec<f64>,
    pub dnus: Vec<f64>,
    /// `ΩΓ̃`; the complex matrix `M̃ = iΩΓ̃` is `i` times this.
    pub m_enc: DMatrix<f64>,
    pub mode: DerivativeMode,
}

/// Finite-difference base step, scaled by `max(1, |ε|)`.
pub const FD_STEP: f64 = 1e-4;

pub fn encoded_derivatives(
    probe: &GaussianState,
    params: &EncodingParams,
    mode: DerivativeMode,
) -> Result<EncodedDerivatives> {
    params.validate()?;
    encoded_derivatives_raw(probe.gamma(), probe.xi(), params, mode)
}

pub(crate) fn encoded_derivatives_raw(
    gamma: &DMatrix<f64>,
    xi: &DVector<f64>,
    params: &EncodingParams,
    mode: DerivativeMode,
) -> Result<EncodedDerivatives> {
    match mode {
        DerivativeMode::Analytic => analytic(gamma, xi, params),
        DerivativeMode::FiniteDifference => finite_difference(gamma, xi, params),
    }
}

fn analytic(gamma: &DMatrix<f64>, xi: &DVector<f64>, p: &EncodingParams) -> Result<EncodedDerivatives> {
    let raw = encode_raw(gamma, xi, p);
    let n = gamma.nrows();
    // dS_ε/dε · S_ε⁻¹ = diag(1, -1) on mode A.
    let mut z = DMatrix::zeros(n, n);
    z[(0, 0)] = 1.0;
    z[(1, 1)] = -1.0;
    let dy = &z * &raw.pre_loss_gamma + &raw.pre_loss_gamma * &z;
    let mut dgamma = dy;
    let mut dxi = &z * &raw.pre_loss_xi;
    // The second loss is affine: its derivative is Γ̇ → KΓ̇Kᵀ, ξ̇ → Kξ̇.
    let k = p.eta.sqrt();
    for i in 0..n {
        for j in 0..n {
            let fi = if i < 2 { k } else { 1.0 };
            let fj = if j < 2 { k } else { 1.0 };
            dgamma[(i, j)] *= fi * fj;
        }
    }
    dxi[0] *= k;
    dxi[1] *= k;
    let dgamma = (&dgamma + dgamma.transpose()) * 0.5;

    let nus = symplectic_eigenvalues_of(&raw.gamma)?;
    let dnus = if p.is_unitary() {
        vec![0.0; nus.len()]
    } else {
        eigenvalue_derivatives(&raw.gamma, &dgamma, &nus)?
    };
    let m_enc = omega(n / 2) * &raw.gamma;
    Ok(EncodedDerivatives {
        gamma_enc: raw.gamma,
        xi_enc: raw.xi,
        dgamma,
        dxi,
        nus,
        dnus,
        m_enc,
        mode: DerivativeMode::Analytic,
    })
}

/// Derivatives of the symplectic eigenvalues from those of the invariants
/// `det Γ = Πν²` and `Δ = Σν² = -½ Tr (ΩΓ)²`.
fn eigenvalue_derivatives(gamma: &DMatrix<f64>, dgamma: &DMatrix<f64>, nus: &[f64]) -> Result<Vec<f64>> {
    let inv = gamma
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Numerical("singular encoded covariance".into()))?;
    let det = gamma.determinant();
    let ddet = det * (&inv * dgamma).trace();
    match nus {
        [nu] => Ok(vec![ddet / (2.0 * nu)]),
        [nu1, nu2] => {
            let om = omega(2);
            let ddelta = -(&om * dgamma * &om * gamma).trace();
            let (a, b) = (nu1 * nu1, nu2 * nu2);
            let (da, db) = if a - b > 1e-10 * a {
                let da = (a * ddelta - ddet) / (a - b);
                (da, ddelta - da)
            } else {
                (0.5 * ddelta, 0.5 * ddelta)
            };
            Ok(vec![da / (2.0 * nu1), db / (2.0 * nu2)])
        }
        _ => Err(Error::Dimension("only one- and two-mode states are supported".into())),
    }
}

fn finite_difference(gamma: &DMatrix<f64>, xi: &DVector<f64>, p: &EncodingParams) -> Result<EncodedDerivatives> {
    let eps = p.epsilon;
    let h = FD_STEP * eps.abs().max(1.0);
    if !(h > 0.0) || eps + 0.5 * h == eps || eps - 0.5 * h == eps {
        return Err(Error::Numerical(format!("finite-difference step underflow at ε = {eps}")));
    }
    let eval = |e: f64| -> Result<(DMatrix<f64>, DVector<f64>, Vec<f64>)> {
        let raw = encode_raw(gamma, xi, &p.with_epsilon(e));
        let nus = symplectic_eigenvalues_of(&raw.gamma)?;
        Ok((raw.gamma, raw.xi, nus))
    };
    let central = |step: f64| -> Result<(DMatrix<f64>, DVector<f64>, Vec<f64>)> {
        let (gp, xp, np) = eval(eps + step)?;
        let (gm, xm, nm) = eval(eps - step)?;
        let inv = 0.5 / step;
        let dn = np.iter().zip(&nm).map(|(a, b)| (a - b) * inv).collect();
        Ok(((gp - gm) * inv, (xp - xm) * inv, dn))
    };
    let (g1, x1, n1) = central(h)?;
    let (g2, x2, n2) = central(0.5 * h)?;
    let dgamma = (g2 * 4.0 - g1) / 3.0;
    let dxi = (x2 * 4.0 - x1) / 3.0;
    let dnus: Vec<f64> = n2.iter().zip(&n1).map(|(b, a)| (4.0 * b - a) / 3.0).collect();

    let raw = encode_raw(gamma, xi, p);
    let nus = symplectic_eigenvalues_of(&raw.gamma)?;
    let m_enc = omega(gamma.nrows() / 2) * &raw.gamma;
    Ok(EncodedDerivatives {
        gamma_enc: raw.gamma,
        xi_enc: raw.xi,
        dgamma: (&dgamma + dgamma.transpose()) * 0.5,
        dxi,
        nus,
        dnus,
        m_enc,
        mode: DerivativeMode::FiniteDifference,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::tmsv;
    use crate::SingleModeProbeParams;
    use approx::assert_abs_diff_eq;

    #[test]
    fn unitary_eigenvalue_derivatives_vanish() {
        let probe = SingleModeProbeParams::new(1.8, 0.4, 0.6, 0.7, 2.0).unwrap().to_state().unwrap();
        let p = EncodingParams::unitary(0.3, 0.9).unwrap();
        let a = encoded_derivatives(&probe, &p, DerivativeMode::Analytic).unwrap();
        assert_eq!(a.dnus, vec![0.0]);
        let f = encoded_derivatives(&probe, &p, DerivativeMode::FiniteDifference).unwrap();
        assert!(f.dnus[0].abs() < 1e-6);

        let t = encoded_derivatives(&tmsv(0.5), &p, DerivativeMode::FiniteDifference).unwrap();
        assert!(t.dnus.iter().all(|d| d.abs() < 1e-6));
    }

    #[test]
    fn vacuum_derivative_at_zero() {
        let p = EncodingParams::unitary(0.0, 0.0).unwrap();
        let expected = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, -2.0]);
        for mode in [DerivativeMode::Analytic, DerivativeMode::FiniteDifference] {
            let d = encoded_derivatives(&GaussianState::vacuum(1), &p, mode).unwrap();
            assert_abs_diff_eq!((d.dgamma - &expected).amax(), 0.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn lossy_analytic_matches_finite_difference() {
        let probe = crate::gaussian::GaussianState::product(
            &SingleModeProbeParams::new(1.3, 0.5, 0.4, 0.9, 1.0).unwrap().to_state().unwrap(),
            &GaussianState::thermal(2.2).unwrap(),
        )
        .unwrap();
        let p = EncodingParams::new(0.7, 0.35, 0.6).unwrap();
        let a = encoded_derivatives(&probe, &p, DerivativeMode::Analytic).unwrap();
        let f = encoded_derivatives(&probe, &p, DerivativeMode::FiniteDifference).unwrap();
        assert_abs_diff_eq!((&a.dgamma - &f.dgamma).amax(), 0.0, epsilon = 1e-8);
        assert_abs_diff_eq!((&a.dxi - &f.dxi).amax(), 0.0, epsilon = 1e-8);
        for (x, y) in a.dnus.iter().zip(&f.dnus) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-7);
        }
    }
}
