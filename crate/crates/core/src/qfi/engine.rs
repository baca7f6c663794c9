use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::derivatives::{encoded_derivatives_raw, DerivativeMode, EncodedDerivatives};
use super::encoding::encode_raw;
use crate::error::{Error, Result};
use crate::gaussian::{omega, symplectic_eigenvalues_of, EncodingParams, GaussianState};

/// Below this `|M̃| - 1` a unitary encoding is treated as pure and regularized.
pub const PURE_TOL: f64 = 1e-6;
/// Encoded eigenvalues within this of 1 count as exactly pure.
pub const RANK_EXACT_TOL: f64 = 1e-9;
/// Lossy encodings with an eigenvalue in `(1 + RANK_EXACT_TOL, 1 + RANK_WINDOW)` are rejected.
pub const RANK_WINDOW: f64 = 1e-6;
/// Degenerate-pair threshold for the eigenvalue term.
pub const DEGENERACY_TOL: f64 = 1e-6;
const REG_DELTAS: [f64; 3] = [1e-3, 5e-4, 2.5e-4];
const STATIONARY_PROBE: f64 = 1e-3;
const NEGATIVITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct QfiResult {
    pub value: f64,
    pub term_covariance: f64,
    pub term_eigenvalues: f64,
    pub term_displacement: f64,
    /// The pure-state regularization was used.
    pub regularized: bool,
}

impl QfiResult {
    fn from_terms(cov: f64, eig: f64, disp: f64, regularized: bool) -> Result<Self> {
        let value = cov + eig + disp;
        if !value.is_finite() {
            return Err(Error::Numerical(format!(
                "non-finite QFI (terms {cov}, {eig}, {disp})"
            )));
        }
        if value < -NEGATIVITY_TOL * value.abs().max(1.0) {
            return Err(Error::Numerical(format!("negative QFI {value}")));
        }
        Ok(Self {
            value: value.max(0.0),
            term_covariance: cov,
            term_eigenvalues: eig,
            term_displacement: disp,
            regularized,
        })
    }

    fn zero() -> Self {
        Self::default()
    }
}

/// QFI of the encoded state; dispatches on the number of modes.
pub fn qfi(probe: &GaussianState, params: &EncodingParams) -> Result<QfiResult> {
    qfi_with(probe, params, DerivativeMode::Analytic)
}

pub fn qfi_with(probe: &GaussianState, params: &EncodingParams, mode: DerivativeMode) -> Result<QfiResult> {
    match probe.modes() {
        1 => qfi_single_mode_with(probe, params, mode),
        2 => qfi_two_mode_with(probe, params, mode),
        m => Err(Error::Dimension(format!("{m}-mode probe"))),
    }
}

pub fn qfi_two_mode(probe: &GaussianState, params: &EncodingParams) -> Result<QfiResult> {
    qfi_two_mode_with(probe, params, DerivativeMode::Analytic)
}

pub fn qfi_two_mode_with(
    probe: &GaussianState,
    params: &EncodingParams,
    mode: DerivativeMode,
) -> Result<QfiResult> {
    params.validate()?;
    if probe.modes() != 2 {
        return Err(Error::Dimension(format!(
            "two-mode formula needs a two-mode probe, got {} mode(s)",
            probe.modes()
        )));
    }
    if params.eta == 0.0 {
        return Ok(QfiResult::zero());
    }
    let d = encoded_derivatives_raw(probe.gamma(), probe.xi(), params, mode)?;
    let unitary = params.is_unitary();
    let drop = if unitary {
        vec![false; 2]
    } else {
        stationary_pure_modes(probe, params, &d.nus)?
    };
    let (mdet, _) = invariants(&d)?;
    let disp = displacement_term(&d)?;

    if mdet - 1.0 >= PURE_TOL {
        let (cov, eig) = two_mode_terms(&d, unitary, &drop)?;
        return QfiResult::from_terms(cov, eig, disp, false);
    }
    if !unitary {
        return Err(Error::RankChange { nu: d.nus[0] });
    }
    // Pure encoded state: Γ → (1+δ)Γ, three-level Richardson in δ.
    let mut covs = [0.0; 3];
    for (slot, delta) in covs.iter_mut().zip(REG_DELTAS) {
        let g = probe.gamma() * (1.0 + delta);
        let dr = encoded_derivatives_raw(&g, probe.xi(), params, mode)?;
        *slot = two_mode_terms(&dr, true, &[false, false])?.0;
    }
    let cov = (8.0 * covs[2] - 6.0 * covs[1] + covs[0]) / 3.0;
    QfiResult::from_terms(cov, 0.0, disp, true)
}

/// Covariance line and eigenvalue line of the two-mode formula.
fn two_mode_terms(d: &EncodedDerivatives, unitary: bool, drop: &[bool]) -> Result<(f64, f64)> {
    let nus: Vec<f64> = d.nus.iter().map(|n| n.max(1.0)).collect();
    let (a, b) = (nus[0] * nus[0], nus[1] * nus[1]);
    let (mdet, sqrt_det) = invariants(d)?;
    let x = solve_spd(&d.gamma_enc, &d.dgamma)?;
    let tr_inv = (&x * &x).trace();
    let tr_res = resolvent_trace(&d.m_enc, &d.dgamma)?;
    let cov = (mdet * tr_inv + sqrt_det * tr_res) / (2.0 * (mdet - 1.0));

    let eig = if unitary || (nus[0] - nus[1]).abs() <= DEGENERACY_TOL {
        0.0
    } else {
        let piece = |i: usize| -> f64 {
            if drop[i] {
                0.0
            } else {
                d.dnus[i].powi(2) / (nus[i].powi(4) - 1.0)
            }
        };
        4.0 / (2.0 * (mdet - 1.0)) * (a - b) * (-piece(0) + piece(1))
    };
    Ok((cov, eig))
}

/// `|M̃| = ν₁²ν₂² = det Γ̃` and `√|1 + M̃²| = (1+ν₁²)(1+ν₂²) = 1 + Δ + det Γ̃`
/// with `Δ = -½ Tr (ΩΓ̃)²`; both avoid the eigen-solver's roundoff, which
/// the `1/(|M̃| - 1)` prefactor would amplify near purity.
fn invariants(d: &EncodedDerivatives) -> Result<(f64, f64)> {
    let chol = d
        .gamma_enc
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Numerical("encoded covariance not positive definite".into()))?;
    let det = chol.l().diagonal().iter().map(|v| v * v).product::<f64>().max(1.0);
    let delta = -0.5 * (&d.m_enc * &d.m_enc).trace();
    Ok((det, 1.0 + delta + det))
}

/// `Tr[((1 + M̃²)⁻¹ Ṁ)²]` with `M̃ = iΩΓ̃`; the `i²` from `Ṁ = iΩΓ̇` gives the sign.
fn resolvent_trace(m_enc: &DMatrix<f64>, dgamma: &DMatrix<f64>) -> Result<f64> {
    let n = m_enc.nrows();
    let one_minus = DMatrix::identity(n, n) - m_enc * m_enc;
    let y = one_minus
        .lu()
        .solve(&(omega(n / 2) * dgamma))
        .ok_or_else(|| Error::Numerical("singular 1 + M̃²".into()))?;
    Ok(-(&y * &y).trace())
}

fn displacement_term(d: &EncodedDerivatives) -> Result<f64> {
    displacement_contribution(&d.gamma_enc, &d.dxi)
}

fn solve_spd(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    a.clone()
        .cholesky()
        .map(|c| c.solve(b))
        .ok_or_else(|| Error::Numerical("encoded covariance not positive definite".into()))
}

fn inverse(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    m.clone()
        .try_inverse()
        .ok_or_else(|| Error::Numerical("singular matrix in QFI evaluation".into()))
}

/// For a lossy encoding, flags eigenvalues that are exactly 1 and stay so
/// around ε; rejects the near-pure window and rank changes.
fn stationary_pure_modes(probe: &GaussianState, params: &EncodingParams, nus: &[f64]) -> Result<Vec<bool>> {
    let mut out = vec![false; nus.len()];
    let mut neighbours: Option<(Vec<f64>, Vec<f64>)> = None;
    for (i, &nu) in nus.iter().enumerate() {
        if nu > 1.0 + RANK_WINDOW {
            continue;
        }
        if nu > 1.0 + RANK_EXACT_TOL {
            return Err(Error::RankChange { nu });
        }
        if neighbours.is_none() {
            let at = |e: f64| -> Result<Vec<f64>> {
                let raw = encode_raw(probe.gamma(), probe.xi(), &params.with_epsilon(e));
                symplectic_eigenvalues_of(&raw.gamma)
            };
            neighbours = Some((
                at(params.epsilon - STATIONARY_PROBE)?,
                at(params.epsilon + STATIONARY_PROBE)?,
            ));
        }
        let (lo, hi) = neighbours.as_ref().unwrap();
        if lo[i] > 1.0 + RANK_EXACT_TOL || hi[i] > 1.0 + RANK_EXACT_TOL {
            return Err(Error::RankChange { nu });
        }
        out[i] = true;
    }
    Ok(out)
}

pub fn qfi_single_mode(probe: &GaussianState, params: &EncodingParams) -> Result<QfiResult> {
    qfi_single_mode_with(probe, params, DerivativeMode::Analytic)
}

pub fn qfi_single_mode_with(
    probe: &GaussianState,
    params: &EncodingParams,
    mode: DerivativeMode,
) -> Result<QfiResult> {
    params.validate()?;
    if probe.modes() != 1 {
        return Err(Error::Dimension(format!(
            "single-mode formula needs a single-mode probe, got {} modes",
            probe.modes()
        )));
    }
    if params.eta == 0.0 {
        return Ok(QfiResult::zero());
    }
    let d = encoded_derivatives_raw(probe.gamma(), probe.xi(), params, mode)?;
    let unitary = params.is_unitary();
    let drop = if unitary {
        false
    } else {
        stationary_pure_modes(probe, params, &d.nus)?[0]
    };
    let nu = d.nus[0].max(1.0);
    // |M̃_A| = det(iΩΓ̃_A) = -ν̃².
    let mdet = -nu * nu;
    let tr_res = resolvent_trace(&d.m_enc, &d.dgamma)?;
    let cov = 0.5 * (mdet - 1.0) * tr_res;
    let eig = if unitary || drop {
        0.0
    } else {
        let dm = -2.0 * nu * d.dnus[0];
        dm * dm / (2.0 * (mdet * mdet - 1.0))
    };
    let disp = displacement_term(&d)?;
    QfiResult::from_terms(cov, eig, disp, false)
}

/// Both sides of the consistency relation that makes a single-mode probe's
/// QFI independent of an ancillary thermal mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityResidual {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

pub fn verify_single_mode_identity(probe: &GaussianState, params: &EncodingParams) -> Result<IdentityResidual> {
    params.validate()?;
    if probe.modes() != 1 {
        return Err(Error::Dimension("identity check needs a single-mode probe".into()));
    }
    let d = encoded_derivatives_raw(probe.gamma(), probe.xi(), params, DerivativeMode::Analytic)?;
    let det = d.gamma_enc.determinant();
    let mdet = -det;
    let ginv = inverse(&d.gamma_enc)?;
    let x = &ginv * &d.dgamma;
    let tr_inv = (&x * &x).trace();
    let ddet = det * x.trace();
    let dm = -ddet;
    let tr_res = resolvent_trace(&d.m_enc, &d.dgamma)?;
    let lhs = dm * dm / mdet;
    let rhs = mdet * tr_inv - (1.0 - mdet).powi(2) * tr_res;
    Ok(IdentityResidual {
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
    })
}

/// `2 ξ̃̇ᵀ Γ̃⁻¹ ξ̃̇` for given derivatives; exposed for cross-checks.
pub fn displacement_contribution(gamma_enc: &DMatrix<f64>, dxi: &DVector<f64>) -> Result<f64> {
    let chol = gamma_enc
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Numerical("encoded covariance not positive definite".into()))?;
    Ok(2.0 * dxi.dot(&chol.solve(dxi)))
}
