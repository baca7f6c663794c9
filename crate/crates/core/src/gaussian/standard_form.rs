//! Reduction of a two-mode state to the standard form
//!
//! ```text
//!      [ a_x  a_xp  c  0 ]
//! Γ =  [ a_xp a_p   0  d ]      ξ = (ξ_x, ξ_p, 0, 0)
//!      [ c    0     b  0 ]
//!      [ 0    d     0  b ]
//! ```
//!
//! using only a phase rotation on mode A and a Gaussian unitary on mode B,
//! both of which leave the direction-averaged QFI unchanged.

use nalgebra::{DMatrix, DVector, Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use super::state::GaussianState;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StandardFormParams {
    pub a_x: f64,
    pub a_p: f64,
    pub a_xp: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub xi_x: f64,
    pub xi_p: f64,
}

impl StandardFormParams {
    pub fn gamma(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(
            4,
            4,
            &[
                self.a_x, self.a_xp, self.c, 0.0, //
                self.a_xp, self.a_p, 0.0, self.d, //
                self.c, 0.0, self.b, 0.0, //
                0.0, self.d, 0.0, self.b,
            ],
        )
    }

    /// Assembles the state, checking `b ≥ 1` and physicality.
    pub fn to_state(&self) -> Result<GaussianState> {
        if self.b < 1.0 - super::state::PHYSICALITY_TOL {
            return Err(Error::Unphysical(format!("b = {} < 1", self.b)));
        }
        GaussianState::new(
            self.gamma(),
            DVector::from_vec(vec![self.xi_x, self.xi_p, 0.0, 0.0]),
        )
    }

    pub fn xi_norm_squared(&self) -> f64 {
        self.xi_x * self.xi_x + self.xi_p * self.xi_p
    }

    /// Multiplies every covariance entry by `s`, leaving the displacement alone.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            a_x: self.a_x * s,
            a_p: self.a_p * s,
            a_xp: self.a_xp * s,
            b: self.b * s,
            c: self.c * s,
            d: self.d * s,
            ..*self
        }
    }
}

/// The local operations that took a state to its standard form:
/// `Γ → L Γ Lᵀ`, `ξ → L ξ + (0, 0, δ_B)` with `L = local_a ⊕ local_b`.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardFormTransform {
    /// Rotation applied on mode A.
    pub local_a: Matrix2<f64>,
    /// Williamson normalization followed by a rotation, on mode B.
    pub local_b: Matrix2<f64>,
    /// Displacement added on mode B after `local_b`.
    pub displacement_b: Vector2<f64>,
}

impl StandardFormTransform {
    pub fn identity() -> Self {
        Self {
            local_a: Matrix2::identity(),
            local_b: Matrix2::identity(),
            displacement_b: Vector2::zeros(),
        }
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        (self.local_a - Matrix2::identity()).amax() <= tol
            && (self.local_b - Matrix2::identity()).amax() <= tol
            && self.displacement_b.amax() <= tol
    }

    pub fn local_symplectic(&self) -> DMatrix<f64> {
        let mut l = DMatrix::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                l[(i, j)] = self.local_a[(i, j)];
                l[(i + 2, j + 2)] = self.local_b[(i, j)];
            }
        }
        l
    }

    pub fn apply(&self, state: &GaussianState) -> Result<GaussianState> {
        if state.modes() != 2 {
            return Err(Error::Dimension("standard-form transform needs a two-mode state".into()));
        }
        let l = self.local_symplectic();
        let gamma = &l * state.gamma() * l.transpose();
        let gamma = (&gamma + gamma.transpose()) * 0.5;
        let mut xi = &l * state.xi();
        xi[2] += self.displacement_b[0];
        xi[3] += self.displacement_b[1];
        Ok(GaussianState::from_parts_unchecked(gamma, xi))
    }
}

fn rot(a: f64) -> Matrix2<f64> {
    let (s, c) = a.sin_cos();
    Matrix2::new(c, -s, s, c)
}

fn flush(v: f64, scale: f64) -> f64 {
    if v.abs() <= 1e-15 * scale {
        0.0
    } else {
        v
    }
}

/// Closed-form decomposition `m = R(φ) diag(s₁, s₂) R(χ)` with `s₁ ≥ |s₂|`,
/// `R` proper rotations. Returns `(φ, s₁, s₂, χ)`.
pub(crate) fn svd_so2(m: &Matrix2<f64>) -> (f64, f64, f64, f64) {
    let scale = m.amax().max(f64::MIN_POSITIVE);
    let e = flush(0.5 * (m[(0, 0)] + m[(1, 1)]), scale);
    let f = flush(0.5 * (m[(0, 0)] - m[(1, 1)]), scale);
    let g = flush(0.5 * (m[(1, 0)] + m[(0, 1)]), scale);
    let h = flush(0.5 * (m[(1, 0)] - m[(0, 1)]), scale);
    let q = e.hypot(h);
    let r = f.hypot(g);
    let a1 = g.atan2(f);
    let a2 = h.atan2(e);
    let chi = 0.5 * (a2 - a1);
    let phi = 0.5 * (a2 + a1);
    (phi, q + r, q - r, chi)
}

/// Standard-form parameters of a two-mode state and the local operations used.
pub fn standard_form(state: &GaussianState) -> Result<(StandardFormParams, StandardFormTransform)> {
    if state.modes() != 2 {
        return Err(Error::Dimension("standard form needs a two-mode state".into()));
    }
    GaussianState::new(state.gamma().clone(), state.xi().clone())?;

    let g = state.gamma();
    let gb = Matrix2::new(g[(2, 2)], g[(2, 3)], g[(3, 2)], g[(3, 3)]);
    let b = gb.determinant().sqrt();
    // Williamson on B: Γ_B = b T Tᵀ with T the symmetric square root of Γ_B / b.
    let mb = gb / b;
    let t = (mb + Matrix2::identity()) / (mb.trace() + 2.0).sqrt();
    let t_inv = t
        .try_inverse()
        .ok_or_else(|| Error::Numerical("singular Williamson factor on mode B".into()))?;

    let off = Matrix2::new(g[(0, 2)], g[(0, 3)], g[(1, 2)], g[(1, 3)]) * t_inv.transpose();
    let (phi, c, d, chi) = svd_so2(&off);
    // off = R(φ) diag(c, d) R(χ): rotate A by R(φ)ᵀ and B by R(χ).
    let local_a = rot(phi).transpose();
    let local_b = rot(chi) * t_inv;

    let mut transform = StandardFormTransform {
        local_a,
        local_b,
        displacement_b: Vector2::zeros(),
    };
    let xb = Vector2::new(state.xi()[2], state.xi()[3]);
    transform.displacement_b = -(local_b * xb);

    let out = transform.apply(state)?;
    let og = out.gamma();
    let params = StandardFormParams {
        a_x: og[(0, 0)],
        a_p: og[(1, 1)],
        a_xp: og[(0, 1)],
        b,
        c,
        d,
        xi_x: out.xi()[0],
        xi_p: out.xi()[1],
    };
    Ok((params, transform))
}
