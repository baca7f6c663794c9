//! Independent oracles: a hand-rolled encoder, finite differences, and the
//! Kronecker-product QFI formula for Gaussian states.
#![allow(dead_code)]

use gauss_avqfi::gaussian::SymplecticMatrix;
use gauss_avqfi::{GaussianState, SingleModeProbeParams};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn omega(m: usize) -> DMatrix<f64> {
    let mut o = DMatrix::zeros(2 * m, 2 * m);
    for k in 0..m {
        o[(2 * k, 2 * k + 1)] = 1.0;
        o[(2 * k + 1, 2 * k)] = -1.0;
    }
    o
}

fn loss_channel(g: &DMatrix<f64>, x: &DVector<f64>, eta: f64) -> (DMatrix<f64>, DVector<f64>) {
    let n = g.nrows();
    let mut k = DMatrix::identity(n, n);
    k[(0, 0)] = eta.sqrt();
    k[(1, 1)] = eta.sqrt();
    let mut noise = DMatrix::zeros(n, n);
    noise[(0, 0)] = 1.0 - eta;
    noise[(1, 1)] = 1.0 - eta;
    (&k * g * k.transpose() + noise, &k * x)
}

pub fn encode(g: &DMatrix<f64>, x: &DVector<f64>, eps: f64, theta: f64, eta: f64) -> (DMatrix<f64>, DVector<f64>) {
    let n = g.nrows();
    let (g, x) = loss_channel(g, x, eta);
    let rot = DMatrix::from_row_slice(2, 2, &[theta.cos(), theta.sin(), -theta.sin(), theta.cos()]);
    let sq = DMatrix::from_row_slice(2, 2, &[eps.exp(), 0.0, 0.0, (-eps).exp()]);
    let mut u = DMatrix::identity(n, n);
    u.view_mut((0, 0), (2, 2)).copy_from(&(sq * rot));
    let g = &u * g * u.transpose();
    let x = &u * x;
    loss_channel(&g, &x, eta)
}

pub fn fd_derivatives(g: &DMatrix<f64>, x: &DVector<f64>, eps: f64, theta: f64, eta: f64) -> (DMatrix<f64>, DVector<f64>) {
    let h = 1e-4 * eps.abs().max(1.0);
    let central = |h: f64| {
        let (gp, xp) = encode(g, x, eps + h, theta, eta);
        let (gm, xm) = encode(g, x, eps - h, theta, eta);
        ((gp - gm) / (2.0 * h), (xp - xm) / (2.0 * h))
    };
    let (g1, x1) = central(h);
    let (g2, x2) = central(h / 2.0);
    ((g2 * 4.0 - g1) / 3.0, (x2 * 4.0 - x1) / 3.0)
}

fn kron(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    DMatrix::from_fn(ra * rb, ca * cb, |i, j| a[(i / rb, j / cb)] * b[(i % rb, j % cb)])
}

/// `½ vec(Γ̇)ᵀ (Γ⊗Γ − Ω⊗Ω)⁺ vec(Γ̇) + 2 ξ̇ᵀ Γ⁻¹ ξ̇`.
pub fn monras_qfi(g: &DMatrix<f64>, x: &DVector<f64>, eps: f64, theta: f64, eta: f64) -> f64 {
    let (gt, _) = encode(g, x, eps, theta, eta);
    let (dg, dx) = fd_derivatives(g, x, eps, theta, eta);
    let m = gt.nrows() / 2;
    let o = omega(m);
    let a = kron(&gt, &gt) - kron(&o, &o);
    let v = DVector::from_iterator(dg.len(), dg.transpose().iter().copied());
    let pinv = a.pseudo_inverse(1e-10).unwrap();
    0.5 * v.dot(&(&pinv * &v)) + 2.0 * dx.dot(&(gt.try_inverse().unwrap() * &dx))
}

/// Pure encoded states only: `¼ Tr (Γ⁻¹Γ̇)² + 2 ξ̇ᵀ Γ⁻¹ ξ̇`.
pub fn pure_qfi(g: &DMatrix<f64>, x: &DVector<f64>, eps: f64, theta: f64, eta: f64) -> f64 {
    let (gt, _) = encode(g, x, eps, theta, eta);
    let (dg, dx) = fd_derivatives(g, x, eps, theta, eta);
    let inv = gt.try_inverse().unwrap();
    let y = &inv * dg;
    0.25 * (&y * &y).trace() + 2.0 * dx.dot(&(&inv * &dx))
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

pub fn random_single_mode<R: Rng>(rng: &mut R) -> SingleModeProbeParams {
    SingleModeProbeParams::new(
        1.0 + 2.0 * rng.gen::<f64>(),
        rng.gen::<f64>() * 0.9,
        rng.gen::<f64>() * std::f64::consts::TAU,
        rng.gen::<f64>() * 2.0,
        rng.gen::<f64>() * std::f64::consts::TAU,
    )
    .unwrap()
}

fn local(rng: &mut impl Rng, mode: usize) -> SymplecticMatrix {
    let s = SymplecticMatrix::rotation(rng.gen::<f64>() * std::f64::consts::TAU)
        .compose(&SymplecticMatrix::squeeze(rng.gen::<f64>() - 0.5))
        .unwrap()
        .compose(&SymplecticMatrix::rotation(rng.gen::<f64>() * std::f64::consts::TAU))
        .unwrap();
    s.embed(mode, 2).unwrap()
}

/// `S diag(ν₁,ν₁,ν₂,ν₂) Sᵀ + displacement` with `S` a product of local and
/// entangling operations.
pub fn random_two_mode<R: Rng>(rng: &mut R, nu_max: f64) -> GaussianState {
    let nu1 = 1.0 + (nu_max - 1.0) * rng.gen::<f64>();
    let nu2 = 1.0 + (nu_max - 1.0) * rng.gen::<f64>();
    random_two_mode_with(rng, nu1, nu2)
}

pub fn random_two_mode_with<R: Rng>(rng: &mut R, nu1: f64, nu2: f64) -> GaussianState {
    let s = local(rng, 0)
        .compose(&local(rng, 1))
        .unwrap()
        .compose(&SymplecticMatrix::beam_splitter(rng.gen::<f64>()))
        .unwrap()
        .compose(&SymplecticMatrix::two_mode_squeeze(rng.gen::<f64>() * 0.8))
        .unwrap()
        .compose(&local(rng, 0))
        .unwrap();
    let d = DMatrix::from_diagonal(&DVector::from_vec(vec![nu1, nu1, nu2, nu2]));
    let m = s.matrix();
    let g = m * d * m.transpose();
    let g = (&g + g.transpose()) * 0.5;
    let x = DVector::from_fn(4, |_, _| 2.0 * rng.gen::<f64>() - 1.0);
    GaussianState::new(g, x).unwrap()
}
