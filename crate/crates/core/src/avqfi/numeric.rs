use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::prior::ThetaPrior;
use crate::error::{Error, Result};
use crate::gaussian::{EncodingParams, GaussianState};
use crate::qfi::{qfi_with, DerivativeMode};

pub const DEFAULT_NODES: usize = 256;
pub const MIN_NODES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AvqfiMethod {
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AvqfiResult {
    pub mean: f64,
    pub variance: f64,
    pub min_theta: f64,
    pub max_theta: f64,
    /// 0 for closed forms.
    pub quadrature_nodes: usize,
    pub method: AvqfiMethod,
    pub regularized: bool,
}

impl AvqfiResult {
    pub(crate) fn closed_form(mean: f64, variance: f64, min_theta: f64, max_theta: f64) -> Self {
        Self {
            mean,
            variance: variance.max(0.0),
            min_theta,
            max_theta,
            quadrature_nodes: 0,
            method: AvqfiMethod::ClosedForm,
            regularized: false,
        }
    }

    pub(crate) fn zero() -> Self {
        Self::closed_form(0.0, 0.0, 0.0, 0.0)
    }
}

pub fn check_nodes(nodes: usize) -> Result<()> {
    if nodes < MIN_NODES || nodes % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "quadrature needs an even node count ≥ {MIN_NODES}, got {nodes}"
        )));
    }
    Ok(())
}

/// Periodic trapezoid rule of `f` over θ against `prior`.
pub fn theta_average<F>(f: F, prior: &ThetaPrior, nodes: usize) -> Result<AvqfiResult>
where
    F: Fn(f64) -> Result<f64>,
{
    theta_average_flagged(|t| f(t).map(|v| (v, false)), prior, nodes)
}

fn theta_average_flagged<F>(f: F, prior: &ThetaPrior, nodes: usize) -> Result<AvqfiResult>
where
    F: Fn(f64) -> Result<(f64, bool)>,
{
    check_nodes(nodes)?;
    let weights = prior.weights(nodes);
    let mut values = Vec::with_capacity(nodes);
    let mut regularized = false;
    for j in 0..nodes {
        let (v, r) = f(TAU * j as f64 / nodes as f64)?;
        regularized |= r;
        values.push(v);
    }
    let mean: f64 = values.iter().zip(&weights).map(|(v, w)| v * w).sum();
    let variance: f64 = values.iter().zip(&weights).map(|(v, w)| w * (v - mean).powi(2)).sum();
    let min_theta = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let max_theta = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(AvqfiResult {
        mean,
        variance,
        min_theta: min_theta.min(mean),
        max_theta: max_theta.max(mean),
        quadrature_nodes: nodes,
        method: AvqfiMethod::Quadrature,
        regularized,
    })
}

/// θ-averaged QFI of any one- or two-mode probe through the generic engine.
pub fn avqfi_numeric(
    probe: &GaussianState,
    epsilon: f64,
    eta: f64,
    prior: &ThetaPrior,
    nodes: usize,
) -> Result<AvqfiResult> {
    avqfi_numeric_with(probe, epsilon, eta, prior, nodes, DerivativeMode::Analytic)
}

pub fn avqfi_numeric_with(
    probe: &GaussianState,
    epsilon: f64,
    eta: f64,
    prior: &ThetaPrior,
    nodes: usize,
    mode: DerivativeMode,
) -> Result<AvqfiResult> {
    let base = EncodingParams::new(epsilon, 0.0, eta)?;
    theta_average_flagged(
        |theta| {
            let r = qfi_with(probe, &base.with_theta(theta), mode)?;
            Ok((r.value, r.regularized))
        },
        prior,
        nodes,
    )
}
