use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::state::{GaussianState, PHYSICALITY_TOL};
use super::symplectic::SymplecticMatrix;
use crate::error::{Error, Result};

/// Reduces an angle to `[0, 2π)`.
pub fn reduce_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Single-mode probe `Γ = ν R_φ S_{2α} R_φᵀ`, `ξ = |ξ| (cos ψ, sin ψ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingleModeProbeParams {
    pub nu: f64,
    pub alpha: f64,
    pub phi: f64,
    pub xi_mag: f64,
    pub psi: f64,
}

impl SingleModeProbeParams {
    pub fn new(nu: f64, alpha: f64, phi: f64, xi_mag: f64, psi: f64) -> Result<Self> {
        let p = Self {
            nu,
            alpha,
            phi: reduce_angle(phi),
            xi_mag,
            psi: reduce_angle(psi),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let vals = [self.nu, self.alpha, self.phi, self.xi_mag, self.psi];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("probe parameters must be finite".into()));
        }
        if self.nu < 1.0 - PHYSICALITY_TOL {
            return Err(Error::Unphysical(format!("symplectic eigenvalue ν = {} < 1", self.nu)));
        }
        if self.alpha < 0.0 {
            return Err(Error::InvalidParameter(format!("squeezing α = {} < 0", self.alpha)));
        }
        if self.xi_mag < 0.0 {
            return Err(Error::InvalidParameter(format!("|ξ| = {} < 0", self.xi_mag)));
        }
        Ok(())
    }

    /// Mean photon number `(ν cosh 2α - 1 + |ξ|²) / 2`.
    pub fn photon_number(&self) -> f64 {
        0.5 * (self.nu * (2.0 * self.alpha).cosh() - 1.0 + self.xi_mag * self.xi_mag)
    }

    pub fn xi_x(&self) -> f64 {
        self.xi_mag * self.psi.cos()
    }

    pub fn xi_p(&self) -> f64 {
        self.xi_mag * self.psi.sin()
    }

    pub fn to_state(&self) -> Result<GaussianState> {
        from_single_mode_params(self)
    }
}

/// Builds the single-mode state of a parameter set.
pub fn from_single_mode_params(p: &SingleModeProbeParams) -> Result<GaussianState> {
    p.validate()?;
    let nu = p.nu.max(1.0);
    let r = SymplecticMatrix::rotation(p.phi);
    let r = r.matrix();
    let sq = DMatrix::from_diagonal(&DVector::from_vec(vec![
        (2.0 * p.alpha).exp(),
        (-2.0 * p.alpha).exp(),
    ]));
    let gamma = r * sq * r.transpose() * nu;
    let gamma = (&gamma + gamma.transpose()) * 0.5;
    let xi = DVector::from_vec(vec![p.xi_x(), p.xi_p()]);
    Ok(GaussianState::from_parts_unchecked(gamma, xi))
}

/// Squeezing strength `ε`, direction `θ` and transmissivity `η` of the encoding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EncodingParams {
    pub epsilon: f64,
    pub theta: f64,
    pub eta: f64,
}

impl EncodingParams {
    pub fn new(epsilon: f64, theta: f64, eta: f64) -> Result<Self> {
        let p = Self {
            epsilon,
            theta: reduce_angle(theta),
            eta,
        };
        p.validate()?;
        Ok(p)
    }

    /// Noiseless encoding (`η = 1`).
    pub fn unitary(epsilon: f64, theta: f64) -> Result<Self> {
        Self::new(epsilon, theta, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.epsilon.is_finite() || !self.theta.is_finite() {
            return Err(Error::InvalidParameter("encoding parameters must be finite".into()));
        }
        if !(0.0..=1.0).contains(&self.eta) {
            return Err(Error::InvalidParameter(format!(
                "transmissivity η = {} outside [0, 1]",
                self.eta
            )));
        }
        Ok(())
    }

    pub fn with_theta(&self, theta: f64) -> Self {
        Self {
            theta: reduce_angle(theta),
            ..*self
        }
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Self {
        Self { epsilon, ..*self }
    }

    pub fn is_unitary(&self) -> bool {
        self.eta == 1.0
    }
}
