use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Normalization slack for tabulated densities.
pub const PRIOR_NORM_TOL: f64 = 1e-9;

/// Distribution of the squeezing direction θ over `[0, 2π)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum ThetaPrior {
    #[default]
    Uniform,
    /// Density sampled at `θ_k = 2πk/K`, linearly interpolated (periodic).
    Tabulated(Vec<f64>),
}

impl ThetaPrior {
    /// Tabulated density that must already integrate to one.
    pub fn tabulated(density: Vec<f64>) -> Result<Self> {
        check_values(&density)?;
        let norm = TAU / density.len() as f64 * density.iter().sum::<f64>();
        if (norm - 1.0).abs() > PRIOR_NORM_TOL {
            return Err(Error::InvalidParameter(format!(
                "prior density integrates to {norm}, not 1"
            )));
        }
        Ok(Self::Tabulated(density))
    }

    /// Tabulated density rescaled to integrate to one.
    pub fn tabulated_normalized(values: Vec<f64>) -> Result<Self> {
        check_values(&values)?;
        let norm = TAU / values.len() as f64 * values.iter().sum::<f64>();
        if !(norm > 0.0) {
            return Err(Error::InvalidParameter("prior density is identically zero".into()));
        }
        Ok(Self::Tabulated(values.into_iter().map(|v| v / norm).collect()))
    }

    pub fn density(&self, theta: f64) -> f64 {
        match self {
            Self::Uniform => 1.0 / TAU,
            Self::Tabulated(p) => {
                let k = p.len();
                let x = theta.rem_euclid(TAU) / TAU * k as f64;
                let i = (x.floor() as usize).min(k - 1);
                let f = x - i as f64;
                p[i] * (1.0 - f) + p[(i + 1) % k] * f
            }
        }
    }

    /// Quadrature weights at `θ_j = 2πj/n`, summing to one.
    pub fn weights(&self, nodes: usize) -> Vec<f64> {
        match self {
            Self::Uniform => vec![1.0 / nodes as f64; nodes],
            Self::Tabulated(_) => {
                let w: Vec<f64> = (0..nodes).map(|j| self.density(TAU * j as f64 / nodes as f64)).collect();
                let s: f64 = w.iter().sum();
                w.into_iter().map(|x| x / s).collect()
            }
        }
    }
}

fn check_values(v: &[f64]) -> Result<()> {
    if v.len() < 2 {
        return Err(Error::InvalidParameter("prior table needs at least two points".into()));
    }
    if v.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::InvalidParameter("prior density must be finite and nonnegative".into()));
    }
    Ok(())
}
