//! Uniform sampling of Gaussian probes at fixed mean photon number.

use std::f64::consts::TAU;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{tmsv_from_reduced_nu, GaussianState, ModeSelector, SingleModeProbeParams, SymplecticMatrix};

/// Attempts before the mixed-state rejection sampler gives up.
pub const MAX_REJECTION_ATTEMPTS: u64 = 1_000_000;

/// Seeded, portable random stream.
#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    draws: u64,
    inner: ChaCha20Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            draws: 0,
            inner: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of uniforms drawn so far.
    pub fn draws(&self) -> u64 {
        self.draws
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.draws += 1;
        self.inner.gen::<f64>()
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn angle(&mut self) -> f64 {
        self.uniform_in(0.0, TAU)
    }
}

fn check_photons(n_a: f64) -> Result<()> {
    if !(n_a >= 0.0) || !n_a.is_finite() {
        return Err(Error::InvalidParameter(format!("photon number {n_a} must be finite and ≥ 0")));
    }
    Ok(())
}

/// Pure probe: `cosh α` uniform on `[1, √(n+1)]`, `φ, ψ` uniform, `|ξ|²` from
/// the photon-number constraint.
pub fn sample_pure_single_mode_params(n_a: f64, rng: &mut SeededRng) -> Result<SingleModeProbeParams> {
    check_photons(n_a)?;
    let ch = rng.uniform_in(1.0, (n_a + 1.0).sqrt());
    let phi = rng.angle();
    let psi = rng.angle();
    let xi2 = (2.0 * n_a + 2.0 - 2.0 * ch * ch).max(0.0);
    SingleModeProbeParams::new(1.0, ch.acosh(), phi, xi2.sqrt(), psi)
}

pub fn sample_pure_single_mode(n_a: f64, rng: &mut SeededRng) -> Result<GaussianState> {
    sample_pure_single_mode_params(n_a, rng)?.to_state()
}

/// Mixed probe: `(ν³, cosh α)` uniform on `{ν cosh 2α ≤ 2n+1}` by rejection,
/// `|ξ|²` from the constraint, `φ, ψ` uniform.
pub fn sample_mixed_single_mode_params(n_a: f64, rng: &mut SeededRng) -> Result<SingleModeProbeParams> {
    check_photons(n_a)?;
    let budget = 2.0 * n_a + 1.0;
    let ch_max = (n_a + 1.0).sqrt();
    for _ in 0..MAX_REJECTION_ATTEMPTS {
        let nu = rng.uniform_in(1.0, budget.powi(3)).cbrt();
        let ch = rng.uniform_in(1.0, ch_max);
        let c2a = 2.0 * ch * ch - 1.0;
        if nu * c2a <= budget {
            let phi = rng.angle();
            let psi = rng.angle();
            let xi2 = (budget - nu * c2a).max(0.0);
            return SingleModeProbeParams::new(nu, ch.acosh(), phi, xi2.sqrt(), psi);
        }
    }
    Err(Error::Numerical(format!(
        "mixed sampler exceeded {MAX_REJECTION_ATTEMPTS} attempts at n_A = {n_a}"
    )))
}

pub fn sample_mixed_single_mode(n_a: f64, rng: &mut SeededRng) -> Result<GaussianState> {
    sample_mixed_single_mode_params(n_a, rng)?.to_state()
}

/// Energy caps on the random local unitaries of the two-mode sampler.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalCaps {
    pub max_cosh_alpha: f64,
    pub max_xi_sq: f64,
}

impl Default for LocalCaps {
    fn default() -> Self {
        Self {
            max_cosh_alpha: 2.0,
            max_xi_sq: 4.0,
        }
    }
}

impl LocalCaps {
    fn validate(&self) -> Result<()> {
        if !(self.max_cosh_alpha >= 1.0) || !self.max_cosh_alpha.is_finite() {
            return Err(Error::InvalidParameter("max cosh α must be ≥ 1".into()));
        }
        if !(self.max_xi_sq >= 0.0) || !self.max_xi_sq.is_finite() {
            return Err(Error::InvalidParameter("max |ξ|² must be ≥ 0".into()));
        }
        Ok(())
    }
}

/// `D(ξ) R_φ S_α R_φ'` with `cosh α`, `|ξ|²` uniform below the caps.
fn local_unitary(caps: &LocalCaps, rng: &mut SeededRng) -> Result<(SymplecticMatrix, [f64; 2])> {
    let ch = rng.uniform_in(1.0, caps.max_cosh_alpha);
    let phi = rng.angle();
    let phi2 = rng.angle();
    let xi = rng.uniform_in(0.0, caps.max_xi_sq).sqrt();
    let psi = rng.angle();
    let s = SymplecticMatrix::rotation(phi)
        .compose(&SymplecticMatrix::squeeze(ch.acosh()))?
        .compose(&SymplecticMatrix::rotation(phi2))?;
    Ok((s, [xi * psi.cos(), xi * psi.sin()]))
}

/// TMSV with reduced eigenvalue `ν`, dressed by independent random local
/// Gaussian unitaries on both modes.
pub fn sample_two_mode_pure(nu: f64, caps: &LocalCaps, rng: &mut SeededRng) -> Result<GaussianState> {
    if !(nu >= 1.0) || !nu.is_finite() {
        return Err(Error::InvalidParameter(format!("reduced eigenvalue ν = {nu} < 1")));
    }
    caps.validate()?;
    let mut state = tmsv_from_reduced_nu(nu)?;
    let mut shift = DVector::zeros(4);
    for mode in 0..2 {
        let (s, d) = local_unitary(caps, rng)?;
        state = state.apply_unitary(&s, ModeSelector::Mode(mode))?;
        shift[2 * mode] = d[0];
        shift[2 * mode + 1] = d[1];
    }
    state.displace(&shift)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_photons_gives_vacuum() {
        let mut rng = SeededRng::new(3);
        for _ in 0..10 {
            for s in [sample_pure_single_mode(0.0, &mut rng).unwrap(), sample_mixed_single_mode(0.0, &mut rng).unwrap()] {
                assert!((s.gamma() - nalgebra::DMatrix::identity(2, 2)).amax() < 1e-15);
                assert!(s.xi().amax() < 1e-15);
            }
        }
    }

    #[test]
    fn invalid_inputs() {
        let mut rng = SeededRng::new(0);
        assert!(sample_pure_single_mode(-1.0, &mut rng).is_err());
        assert!(sample_mixed_single_mode(f64::NAN, &mut rng).is_err());
        assert!(sample_two_mode_pure(0.5, &LocalCaps::default(), &mut rng).is_err());
    }

    #[test]
    fn draw_counter_advances() {
        let mut rng = SeededRng::new(9);
        sample_pure_single_mode(1.0, &mut rng).unwrap();
        assert_eq!(rng.draws(), 3);
        assert_eq!(rng.seed(), 9);
    }
}
