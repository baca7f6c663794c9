//! Real symplectic matrices acting on quadrature vectors `(x_A, p_A, x_B, p_B)`.

use nalgebra::{DMatrix, Matrix2};

use crate::error::{Error, Result};

/// Entrywise tolerance on `S Ω Sᵀ = Ω`.
pub const SYMPLECTIC_TOL: f64 = 1e-10;

/// The standard symplectic form `⊕ [[0, 1], [-1, 0]]` on `modes` modes.
pub fn omega(modes: usize) -> DMatrix<f64> {
    let mut om = DMatrix::zeros(2 * modes, 2 * modes);
    for j in 0..modes {
        om[(2 * j, 2 * j + 1)] = 1.0;
        om[(2 * j + 1, 2 * j)] = -1.0;
    }
    om
}

/// A `2m × 2m` real matrix satisfying `S Ω Sᵀ = Ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix {
    s: DMatrix<f64>,
}

impl SymplecticMatrix {
    pub fn new(s: DMatrix<f64>) -> Result<Self> {
        let n = s.nrows();
        if n != s.ncols() || n == 0 || n % 2 != 0 {
            return Err(Error::Dimension(format!(
                "symplectic matrix must be 2m x 2m, got {}x{}",
                s.nrows(),
                s.ncols()
            )));
        }
        if s.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("symplectic matrix has non-finite entries".into()));
        }
        let om = omega(n / 2);
        let dev = (&s * &om * s.transpose() - &om).amax();
        if dev > SYMPLECTIC_TOL {
            return Err(Error::InvalidParameter(format!(
                "matrix is not symplectic (max |SΩSᵀ - Ω| = {dev:e})"
            )));
        }
        Ok(Self { s })
    }

    pub(crate) fn from_matrix2_unchecked(m: Matrix2<f64>) -> Self {
        Self {
            s: DMatrix::from_fn(2, 2, |i, j| m[(i, j)]),
        }
    }

    /// Phase rotation `R_θ = [[cos θ, sin θ], [-sin θ, cos θ]]`.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::from_matrix2_unchecked(Matrix2::new(c, s, -s, c))
    }

    /// Single-mode squeezer `S_α = diag(e^α, e^-α)`.
    pub fn squeeze(alpha: f64) -> Self {
        Self::from_matrix2_unchecked(Matrix2::new(alpha.exp(), 0.0, 0.0, (-alpha).exp()))
    }

    /// Two-mode beam splitter mixing A and B with angle `tau`.
    pub fn beam_splitter(tau: f64) -> Self {
        let (s, c) = tau.sin_cos();
        let mut m = DMatrix::zeros(4, 4);
        for k in 0..2 {
            m[(k, k)] = c;
            m[(k + 2, k + 2)] = c;
            m[(k, k + 2)] = s;
            m[(k + 2, k)] = -s;
        }
        Self { s: m }
    }

    /// Two-mode squeezer; acting on the vacuum it prepares the two-mode squeezed vacuum.
    pub fn two_mode_squeeze(r: f64) -> Self {
        let (ch, sh) = (r.cosh(), r.sinh());
        let mut m = DMatrix::zeros(4, 4);
        for k in 0..4 {
            m[(k, k)] = ch;
        }
        m[(0, 2)] = sh;
        m[(2, 0)] = sh;
        m[(1, 3)] = -sh;
        m[(3, 1)] = -sh;
        Self { s: m }
    }

    pub fn identity(modes: usize) -> Self {
        Self {
            s: DMatrix::identity(2 * modes, 2 * modes),
        }
    }

    pub fn modes(&self) -> usize {
        self.s.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.s
    }

    /// Product `self · other` (apply `other` first).
    pub fn compose(&self, other: &SymplecticMatrix) -> Result<Self> {
        if self.modes() != other.modes() {
            return Err(Error::Dimension(format!(
                "cannot compose {}-mode and {}-mode symplectic matrices",
                self.modes(),
                other.modes()
            )));
        }
        Ok(Self { s: &self.s * &other.s })
    }

    pub fn inverse(&self) -> Self {
        // S⁻¹ = -Ω Sᵀ Ω for symplectic S.
        let om = omega(self.modes());
        Self {
            s: -(&om * self.s.transpose() * &om),
        }
    }

    /// Embeds a single-mode matrix on `mode` of a `total_modes` system, identity elsewhere.
    pub fn embed(&self, mode: usize, total_modes: usize) -> Result<Self> {
        if self.modes() == total_modes {
            return Ok(self.clone());
        }
        if self.modes() != 1 || mode >= total_modes {
            return Err(Error::Dimension(format!(
                "cannot embed a {}-mode matrix on mode {mode} of {total_modes} modes",
                self.modes()
            )));
        }
        let mut s = DMatrix::identity(2 * total_modes, 2 * total_modes);
        s.view_mut((2 * mode, 2 * mode), (2, 2)).copy_from(&self.s);
        Ok(Self { s })
    }
}

/// `R_θ` as a [`SymplecticMatrix`].
pub fn rotation_symplectic(theta: f64) -> SymplecticMatrix {
    SymplecticMatrix::rotation(theta)
}

/// `S_α` as a [`SymplecticMatrix`].
pub fn squeeze_symplectic(alpha: f64) -> SymplecticMatrix {
    SymplecticMatrix::squeeze(alpha)
}
