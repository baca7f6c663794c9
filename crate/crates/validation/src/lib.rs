//! Reference implementations that share no code with the library's QFI
//! path: a matrix-by-matrix encoder, finite differences, and the
//! Kronecker-product QFI formula for Gaussian states.

use nalgebra::{DMatrix, DVector};

pub fn omega(m: usize) -> DMatrix<f64> {
    let mut o = DMatrix::zeros(2 * m, 2 * m);
    for k in 0..m {
        o[(2 * k, 2 * k + 1)] = 1.0;
        o[(2 * k + 1, 2 * k)] = -1.0;
    }
    o
}

fn loss(g: &DMatrix<f64>, x: &DVector<f64>, eta: f64) -> (DMatrix<f64>, DVector<f64>) {
    let n = g.nrows();
    let mut k = DMatrix::identity(n, n);
    let mut noise = DMatrix::zeros(n, n);
    for i in 0..2 {
        k[(i, i)] = eta.sqrt();
        noise[(i, i)] = 1.0 - eta;
    }
    (&k * g * k.transpose() + noise, &k * x)
}

/// Loss, rotation by θ, squeezing by ε, loss; all on the first mode.
pub fn encode(g: &DMatrix<f64>, x: &DVector<f64>, eps: f64, theta: f64, eta: f64) -> (DMatrix<f64>, DVector<f64>) {
    let n = g.nrows();
    let (g, x) = loss(g, x, eta);
    let (s, c) = theta.sin_cos();
    let mut u = DMatrix::identity(n, n);
    u[(0, 0)] = eps.exp() * c;
    u[(0, 1)] = eps.exp() * s;
    u[(1, 0)] = -(-eps).exp() * s;
    u[(1, 1)] = (-eps).exp() * c;
    let g = &u * g * u.transpose();
    let x = &u * x;
    loss(&g, &x, eta)
}

/// Central differences at `h` and `h/2`, one Richardson step.
pub fn derivatives(g: &DMatrix<f64>, x: &DVector<f64>, eps: f64, theta: f64, eta: f64) -> (DMatrix<f64>, DVector<f64>) {
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

/// `½ vec(Γ̇)ᵀ (Γ⊗Γ − Ω⊗Ω)⁺ vec(Γ̇) + 2 ξ̇ᵀ Γ⁻¹ ξ̇` on the encoded state.
pub fn kronecker_qfi(g: &DMatrix<f64>, x: &DVector<f64>, eps: f64, theta: f64, eta: f64) -> f64 {
    let (gt, _) = encode(g, x, eps, theta, eta);
    let (dg, dx) = derivatives(g, x, eps, theta, eta);
    let o = omega(gt.nrows() / 2);
    let a = kron(&gt, &gt) - kron(&o, &o);
    let v = DVector::from_iterator(dg.len(), dg.transpose().iter().copied());
    let pinv = a.pseudo_inverse(1e-10).expect("pseudo-inverse");
    0.5 * v.dot(&(&pinv * &v)) + 2.0 * dx.dot(&(gt.try_inverse().expect("invertible") * &dx))
}

/// θ-average of [`kronecker_qfi`] on `nodes` equispaced directions, with
/// the node values.
pub fn kronecker_average(g: &DMatrix<f64>, x: &DVector<f64>, eps: f64, eta: f64, nodes: usize) -> (f64, Vec<f64>) {
    let vals: Vec<f64> = (0..nodes)
        .map(|j| kronecker_qfi(g, x, eps, std::f64::consts::TAU * j as f64 / nodes as f64, eta))
        .collect();
    (vals.iter().sum::<f64>() / nodes as f64, vals)
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
