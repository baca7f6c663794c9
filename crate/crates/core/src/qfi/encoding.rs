use nalgebra::{DMatrix, DVector};

use crate::error::Result;
use crate::gaussian::{apply_loss_in_place, EncodingParams, GaussianState};

/// Encoded covariance and displacement, plus the intermediate `Y = U L_η(Γ) Uᵀ`
/// (before the second loss) needed by the analytic derivative.
pub(crate) struct RawEncoding {
    pub gamma: DMatrix<f64>,
    pub xi: DVector<f64>,
    pub pre_loss_gamma: DMatrix<f64>,
    pub pre_loss_xi: DVector<f64>,
}

/// Applies `L_η ∘ S_ε ∘ R_θ ∘ L_η` on mode A without any validation.
pub(crate) fn encode_raw(gamma: &DMatrix<f64>, xi: &DVector<f64>, p: &EncodingParams) -> RawEncoding {
    let mut g = gamma.clone();
    let mut x = xi.clone();
    apply_loss_in_place(&mut g, &mut x, p.eta, 0);

    // U = S_ε R_θ on mode A; only the first two rows change.
    let (s, c) = p.theta.sin_cos();
    let (e_plus, e_minus) = (p.epsilon.exp(), (-p.epsilon).exp());
    let u = [[e_plus * c, e_plus * s], [-e_minus * s, e_minus * c]];
    let n = g.nrows();
    let mut ug = g.clone();
    for j in 0..n {
        let (g0, g1) = (g[(0, j)], g[(1, j)]);
        ug[(0, j)] = u[0][0] * g0 + u[0][1] * g1;
        ug[(1, j)] = u[1][0] * g0 + u[1][1] * g1;
    }
    let mut y = ug.clone();
    for i in 0..n {
        let (g0, g1) = (ug[(i, 0)], ug[(i, 1)]);
        y[(i, 0)] = u[0][0] * g0 + u[0][1] * g1;
        y[(i, 1)] = u[1][0] * g0 + u[1][1] * g1;
    }
    let y = (&y + y.transpose()) * 0.5;
    let (x0, x1) = (x[0], x[1]);
    x[0] = u[0][0] * x0 + u[0][1] * x1;
    x[1] = u[1][0] * x0 + u[1][1] * x1;

    let mut out_g = y.clone();
    let mut out_x = x.clone();
    apply_loss_in_place(&mut out_g, &mut out_x, p.eta, 0);
    RawEncoding {
        gamma: out_g,
        xi: out_x,
        pre_loss_gamma: y,
        pre_loss_xi: x,
    }
}

/// The encoded state `L_η ∘ S_ε ∘ R_θ ∘ L_η (ρ)`, acting on mode A.
pub fn encode(probe: &GaussianState, params: &EncodingParams) -> Result<GaussianState> {
    params.validate()?;
    let raw = encode_raw(probe.gamma(), probe.xi(), params);
    GaussianState::new(raw.gamma, raw.xi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{tmsv, ModeSelector, SymplecticMatrix};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn matches_explicit_composition() {
        let probe = crate::SingleModeProbeParams::new(1.4, 0.3, 0.2, 0.9, 1.7)
            .unwrap()
            .to_state()
            .unwrap();
        let p = EncodingParams::new(0.45, 0.8, 0.7).unwrap();
        let expected = probe
            .apply_loss(p.eta, 0)
            .unwrap()
            .apply_unitary(&SymplecticMatrix::rotation(p.theta), ModeSelector::All)
            .unwrap()
            .apply_unitary(&SymplecticMatrix::squeeze(p.epsilon), ModeSelector::All)
            .unwrap()
            .apply_loss(p.eta, 0)
            .unwrap();
        let got = encode(&probe, &p).unwrap();
        assert_abs_diff_eq!((got.gamma() - expected.gamma()).amax(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!((got.xi() - expected.xi()).amax(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn rotation_only_when_epsilon_zero() {
        let probe = crate::SingleModeProbeParams::new(2.0, 0.4, 0.0, 0.5, 0.3)
            .unwrap()
            .to_state()
            .unwrap();
        let p = EncodingParams::unitary(0.0, 1.1).unwrap();
        let enc = encode(&probe, &p).unwrap();
        let rot = probe
            .apply_unitary(&SymplecticMatrix::rotation(1.1), ModeSelector::All)
            .unwrap();
        assert_abs_diff_eq!((enc.gamma() - rot.gamma()).amax(), 0.0, epsilon = 1e-14);
        assert_relative_eq!(
            enc.symplectic_eigenvalues().unwrap()[0],
            2.0,
            epsilon = 1e-13
        );
    }

    #[test]
    fn vacuum_is_squeezed() {
        let a = 0.6;
        let enc = encode(&GaussianState::vacuum(1), &EncodingParams::unitary(a, 0.0).unwrap()).unwrap();
        assert_relative_eq!(enc.gamma()[(0, 0)], (2.0 * a).exp(), epsilon = 1e-14);
        assert_relative_eq!(enc.gamma()[(1, 1)], (-2.0 * a).exp(), epsilon = 1e-14);
    }

    #[test]
    fn tmsv_stays_pure() {
        let enc = encode(&tmsv(0.9), &EncodingParams::unitary(0.7, 2.1).unwrap()).unwrap();
        for nu in enc.symplectic_eigenvalues().unwrap() {
            assert_relative_eq!(nu, 1.0, epsilon = 1e-9);
        }
    }
}
