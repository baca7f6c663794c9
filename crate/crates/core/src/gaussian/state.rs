//! One- and two-mode Gaussian states in the convention where the vacuum
//! covariance matrix is the identity.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::symplectic::{omega, SymplecticMatrix};
use crate::error::{Error, Result};

/// States whose smallest symplectic eigenvalue falls below `1 - PHYSICALITY_TOL`
/// are rejected.
pub const PHYSICALITY_TOL: f64 = 1e-9;

/// Selects which modes a single-mode operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeSelector {
    /// The operation already spans every mode of the state.
    All,
    /// Embed a single-mode operation on this mode, identity elsewhere.
    Mode(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    gamma: DMatrix<f64>,
    xi: DVector<f64>,
}

impl GaussianState {
    /// Builds a state, symmetrizing `gamma` and checking physicality.
    pub fn new(gamma: DMatrix<f64>, xi: DVector<f64>) -> Result<Self> {
        let n = gamma.nrows();
        if gamma.ncols() != n || !(n == 2 || n == 4) {
            return Err(Error::Dimension(format!(
                "covariance matrix must be 2x2 or 4x4, got {}x{}",
                gamma.nrows(),
                gamma.ncols()
            )));
        }
        if xi.len() != n {
            return Err(Error::Dimension(format!(
                "displacement has length {}, expected {n}",
                xi.len()
            )));
        }
        if gamma.iter().chain(xi.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("state has non-finite entries".into()));
        }
        let gamma = (&gamma + gamma.transpose()) * 0.5;
        let state = Self { gamma, xi };
        let nus = state.symplectic_eigenvalues()?;
        let min = nus.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < 1.0 - PHYSICALITY_TOL {
            return Err(Error::Unphysical(format!(
                "smallest symplectic eigenvalue {min} < 1"
            )));
        }
        Ok(state)
    }

    pub(crate) fn from_parts_unchecked(gamma: DMatrix<f64>, xi: DVector<f64>) -> Self {
        Self { gamma, xi }
    }

    pub fn vacuum(modes: usize) -> Self {
        Self {
            gamma: DMatrix::identity(2 * modes, 2 * modes),
            xi: DVector::zeros(2 * modes),
        }
    }

    /// Single-mode thermal state `Γ = ν 𝟙`.
    pub fn thermal(nu: f64) -> Result<Self> {
        Self::new(DMatrix::identity(2, 2) * nu, DVector::zeros(2))
    }

    /// Single-mode coherent state with displacement `(x, p)`.
    pub fn coherent(x: f64, p: f64) -> Result<Self> {
        Self::new(DMatrix::identity(2, 2), DVector::from_vec(vec![x, p]))
    }

    /// Tensor product `a ⊗ b` of two single-mode states.
    pub fn product(a: &GaussianState, b: &GaussianState) -> Result<Self> {
        if a.modes() != 1 || b.modes() != 1 {
            return Err(Error::Dimension("product expects two single-mode states".into()));
        }
        let mut gamma = DMatrix::zeros(4, 4);
        gamma.view_mut((0, 0), (2, 2)).copy_from(&a.gamma);
        gamma.view_mut((2, 2), (2, 2)).copy_from(&b.gamma);
        let xi = DVector::from_iterator(4, a.xi.iter().chain(b.xi.iter()).cloned());
        Ok(Self { gamma, xi })
    }

    pub fn modes(&self) -> usize {
        self.gamma.nrows() / 2
    }

    pub fn gamma(&self) -> &DMatrix<f64> {
        &self.gamma
    }

    pub fn xi(&self) -> &DVector<f64> {
        &self.xi
    }

    /// Symplectic eigenvalues, descending.
    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        symplectic_eigenvalues_of(&self.gamma)
    }

    /// Mean photon number `(Tr Γ_j / 2 + |ξ_j|² - 1) / 2` of mode `j`.
    pub fn mean_photon_number(&self, mode: usize) -> Result<f64> {
        self.check_mode(mode)?;
        let g = self.gamma.view((2 * mode, 2 * mode), (2, 2));
        let x = self.xi.rows(2 * mode, 2);
        Ok((0.5 * g.trace() + x.norm_squared() - 1.0) * 0.5)
    }

    /// Reduced state of mode `keep`.
    pub fn partial_trace(&self, keep: usize) -> Result<GaussianState> {
        if self.modes() != 2 {
            return Err(Error::Dimension("partial trace needs a two-mode state".into()));
        }
        self.check_mode(keep)?;
        Ok(Self {
            gamma: self.gamma.view((2 * keep, 2 * keep), (2, 2)).into_owned(),
            xi: self.xi.rows(2 * keep, 2).into_owned(),
        })
    }

    /// Gaussian unitary `Γ → UΓUᵀ, ξ → Uξ`.
    pub fn apply_unitary(&self, s: &SymplecticMatrix, modes: ModeSelector) -> Result<GaussianState> {
        let u = match modes {
            ModeSelector::All => {
                if s.modes() != self.modes() {
                    return Err(Error::Dimension(format!(
                        "{}-mode symplectic matrix applied to {}-mode state",
                        s.modes(),
                        self.modes()
                    )));
                }
                s.clone()
            }
            ModeSelector::Mode(j) => {
                self.check_mode(j)?;
                if s.modes() != 1 {
                    return Err(Error::Dimension(
                        "mode-selected unitary must be single-mode".into(),
                    ));
                }
                s.embed(j, self.modes())?
            }
        };
        let m = u.matrix();
        Ok(Self {
            gamma: m * &self.gamma * m.transpose(),
            xi: m * &self.xi,
        })
    }

    /// Displacement `ξ → ξ + d` on every mode.
    pub fn displace(&self, d: &DVector<f64>) -> Result<GaussianState> {
        if d.len() != self.xi.len() {
            return Err(Error::Dimension("displacement length mismatch".into()));
        }
        Ok(Self {
            gamma: self.gamma.clone(),
            xi: &self.xi + d,
        })
    }

    /// Pure-loss channel of transmissivity `eta` on `mode`.
    pub fn apply_loss(&self, eta: f64, mode: usize) -> Result<GaussianState> {
        if !(0.0..=1.0).contains(&eta) || !eta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "transmissivity {eta} outside [0, 1]"
            )));
        }
        self.check_mode(mode)?;
        let mut out = self.clone();
        apply_loss_in_place(&mut out.gamma, &mut out.xi, eta, mode);
        Ok(out)
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.modes() {
            return Err(Error::Dimension(format!(
                "mode index {mode} out of range for a {}-mode state",
                self.modes()
            )));
        }
        Ok(())
    }
}

/// `Γ → KΓKᵀ + NNᵀ`, `ξ → Kξ` with `K = √η 𝟙` and `N = √(1-η) 𝟙` on `mode`.
pub(crate) fn apply_loss_in_place(gamma: &mut DMatrix<f64>, xi: &mut DVector<f64>, eta: f64, mode: usize) {
    let k = eta.sqrt();
    let n = gamma.nrows();
    let lo = 2 * mode;
    for i in 0..n {
        for j in 0..n {
            let fi = if (lo..lo + 2).contains(&i) { k } else { 1.0 };
            let fj = if (lo..lo + 2).contains(&j) { k } else { 1.0 };
            gamma[(i, j)] *= fi * fj;
        }
    }
    gamma[(lo, lo)] += 1.0 - eta;
    gamma[(lo + 1, lo + 1)] += 1.0 - eta;
    xi[lo] *= k;
    xi[lo + 1] *= k;
}

/// Symplectic eigenvalues of a covariance matrix, from the spectrum `±iν` of `ΩΓ`.
pub fn symplectic_eigenvalues_of(gamma: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = gamma.nrows();
    if n == 0 || n % 2 != 0 || gamma.ncols() != n {
        return Err(Error::Dimension("covariance matrix must be 2m x 2m".into()));
    }
    if gamma.clone().cholesky().is_none() {
        return Err(Error::Unphysical("covariance matrix is not positive definite".into()));
    }
    let m = n / 2;
    if m == 1 {
        let det = gamma[(0, 0)] * gamma[(1, 1)] - gamma[(0, 1)] * gamma[(1, 0)];
        return Ok(vec![det.sqrt()]);
    }
    let eig = (omega(m) * gamma).complex_eigenvalues();
    let mut ims: Vec<f64> = eig.iter().map(|z| z.im.abs()).collect();
    if ims.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("non-finite eigenvalue of ΩΓ".into()));
    }
    ims.sort_by(|a, b| b.total_cmp(a));
    let mut nus = Vec::with_capacity(m);
    for pair in ims.chunks(2) {
        let (a, b) = (pair[0], pair[1]);
        if (a - b).abs() > 1e-8 * a.max(1.0) {
            return Err(Error::Numerical(format!(
                "unpaired eigenvalues of ΩΓ: ±i{a} vs ±i{b}"
            )));
        }
        nus.push(0.5 * (a + b));
    }
    Ok(nus)
}

/// JSON wire form `{"modes": m, "gamma": [[..]], "xi": [..]}`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateJson {
    pub modes: usize,
    pub gamma: Vec<Vec<f64>>,
    pub xi: Vec<f64>,
}

impl From<&GaussianState> for StateJson {
    fn from(s: &GaussianState) -> Self {
        let n = s.gamma.nrows();
        Self {
            modes: s.modes(),
            gamma: (0..n).map(|i| (0..n).map(|j| s.gamma[(i, j)]).collect()).collect(),
            xi: s.xi.iter().cloned().collect(),
        }
    }
}

impl TryFrom<StateJson> for GaussianState {
    type Error = Error;

    fn try_from(j: StateJson) -> Result<Self> {
        let n = 2 * j.modes;
        if j.gamma.len() != n || j.gamma.iter().any(|row| row.len() != n) {
            return Err(Error::Dimension(format!(
                "gamma must be {n}x{n} for {} modes",
                j.modes
            )));
        }
        let gamma = DMatrix::from_fn(n, n, |r, c| j.gamma[r][c]);
        GaussianState::new(gamma, DVector::from_vec(j.xi))
    }
}

impl Serialize for GaussianState {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        StateJson::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GaussianState {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let j = StateJson::deserialize(deserializer)?;
        GaussianState::try_from(j).map_err(serde::de::Error::custom)
    }
}
