use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::optimize::{ratio_probe, relative_increase_with, ComparisonMode, Increase};
use crate::avqfi::{avqfi_single_mode, check_nodes, DEFAULT_NODES};
use crate::error::{Error, Result};
use crate::sampler::{sample_mixed_single_mode_params, SeededRng};

/// Inclusive, evenly spaced axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(start: f64, end: f64, count: usize) -> Result<Self> {
        let a = Self { start, end, count };
        a.validate("axis")?;
        Ok(a)
    }

    pub fn point(v: f64) -> Self {
        Self { start: v, end: v, count: 1 }
    }

    fn validate(&self, name: &str) -> Result<()> {
        if self.count == 0 {
            return Err(Error::InvalidParameter(format!("{name}: empty range")));
        }
        if !self.start.is_finite() || !self.end.is_finite() || self.end < self.start {
            return Err(Error::InvalidParameter(format!(
                "{name}: invalid range [{}, {}]",
                self.start, self.end
            )));
        }
        if self.count == 1 && self.end != self.start {
            return Err(Error::InvalidParameter(format!("{name}: one point cannot span [{}, {}]", self.start, self.end)));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.end - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| if i + 1 == self.count { self.end } else { self.start + i as f64 * step })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    /// `n_A` or `N`, depending on `comparison_mode`.
    pub photons: Axis,
    pub eta: Axis,
    pub epsilon: f64,
    pub comparison_mode: ComparisonMode,
    pub nodes: usize,
    pub seed: u64,
    /// Mixed probes (`ν > 1`, `ψ = π/2`) to draw per point as a spot check of
    /// the pure-probe restriction; 0 disables it.
    pub mixed_samples: usize,
}

impl SweepSpec {
    pub fn new(photons: Axis, eta: Axis, epsilon: f64, comparison_mode: ComparisonMode) -> Self {
        Self {
            photons,
            eta,
            epsilon,
            comparison_mode,
            nodes: DEFAULT_NODES,
            seed: 0,
            mixed_samples: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.photons.validate("photon axis")?;
        self.eta.validate("η axis")?;
        if self.photons.start < 0.0 {
            return Err(Error::InvalidParameter("photon numbers must be ≥ 0".into()));
        }
        if self.eta.start < 0.0 || self.eta.end > 1.0 {
            return Err(Error::InvalidParameter("η axis must lie in [0, 1]".into()));
        }
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return Err(Error::InvalidParameter(format!("ε must be > 0, got {}", self.epsilon)));
        }
        check_nodes(self.nodes)
    }

    pub fn len(&self) -> usize {
        self.photons.count * self.eta.count
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub photons: f64,
    pub eta: f64,
    pub epsilon: f64,
    pub optimal_ratio: f64,
    pub avqfi_single_opt: f64,
    pub avqfi_tmsv: f64,
    pub increase: f64,
    pub flags: Vec<String>,
    pub mixed_best: Option<f64>,
    pub error: Option<String>,
}

pub const FLAG_FULLY_LOSSY: &str = "fully_lossy";
pub const FLAG_MIXED_BEATS_PURE: &str = "mixed_exceeds_pure";

/// Evaluates every grid point (photons outer, η inner). Points run in
/// parallel; output order follows the grid.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRecord>> {
    spec.validate()?;
    let points: Vec<(usize, f64, f64)> = spec
        .photons
        .values()
        .into_iter()
        .flat_map(|n| spec.eta.values().into_iter().map(move |e| (n, e)))
        .enumerate()
        .map(|(i, (n, e))| (i, n, e))
        .collect();
    Ok(points.par_iter().map(|&(i, n, e)| evaluate_point(spec, i, n, e)).collect())
}

fn evaluate_point(spec: &SweepSpec, index: usize, photons: f64, eta: f64) -> SweepRecord {
    let mut rec = SweepRecord {
        photons,
        eta,
        epsilon: spec.epsilon,
        optimal_ratio: f64::NAN,
        avqfi_single_opt: f64::NAN,
        avqfi_tmsv: f64::NAN,
        increase: f64::NAN,
        flags: Vec::new(),
        mixed_best: None,
        error: None,
    };
    if eta == 0.0 {
        rec.flags.push(FLAG_FULLY_LOSSY.into());
    }
    match relative_increase_with(photons, eta, spec.epsilon, spec.comparison_mode, spec.nodes) {
        Ok(Increase { optimal_ratio, avqfi_single_opt, avqfi_tmsv, increase }) => {
            rec.optimal_ratio = optimal_ratio;
            rec.avqfi_single_opt = avqfi_single_opt;
            rec.avqfi_tmsv = avqfi_tmsv;
            rec.increase = increase;
        }
        Err(e) => {
            rec.error = Some(e.to_string());
            return rec;
        }
    }
    if spec.mixed_samples > 0 {
        match mixed_spot_check(spec, index, photons, eta) {
            Ok(best) => {
                if best > rec.avqfi_single_opt * (1.0 + 1e-9) {
                    rec.flags.push(FLAG_MIXED_BEATS_PURE.into());
                }
                rec.mixed_best = Some(best);
            }
            Err(e) => rec.error = Some(format!("mixed spot check: {e}")),
        }
    }
    rec
}

/// Best AvQFI among random mixed probes with `φ = 0`, `ψ = π/2`; the stream
/// is seeded per grid index so results do not depend on scheduling.
fn mixed_spot_check(spec: &SweepSpec, index: usize, photons: f64, eta: f64) -> Result<f64> {
    let mut rng = SeededRng::new(spec.seed.wrapping_add(index as u64));
    let mut best = avqfi_single_mode(&ratio_probe(photons, 0.0)?, spec.epsilon, eta, spec.nodes)?.mean;
    for _ in 0..spec.mixed_samples {
        let mut p = sample_mixed_single_mode_params(photons, &mut rng)?;
        p.phi = 0.0;
        p.psi = std::f64::consts::FRAC_PI_2;
        best = best.max(avqfi_single_mode(&p, spec.epsilon, eta, spec.nodes)?.mean);
    }
    Ok(best)
}
