use serde::{Deserialize, Serialize};

use crate::avqfi::{avqfi_bounds_noiseless, avqfi_numeric, avqfi_single_mode, avqfi_tmsv_photons, AvqfiResult, ThetaPrior, DEFAULT_NODES};
use crate::error::{Error, Result};
use crate::gaussian::{GaussianState, SingleModeProbeParams};

pub const SCAN_POINTS: usize = 33;
pub const RATIO_TOL: f64 = 1e-4;
pub const BAND_NODES: usize = 512;

/// Pure probe (`ν = 1`, `φ = 0`, `ψ = π/2`) at photon number `n` putting a
/// fraction `ratio` of the energy into displacement: `|ξ|² = 2n·ratio`.
pub fn ratio_probe(n: f64, ratio: f64) -> Result<SingleModeProbeParams> {
    let t = ratio.clamp(0.0, 1.0);
    let c2a = 2.0 * n * (1.0 - t) + 1.0;
    SingleModeProbeParams::new(1.0, 0.5 * c2a.acosh(), 0.0, (2.0 * n * t).sqrt(), std::f64::consts::FRAC_PI_2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioOptimum {
    pub ratio: f64,
    pub avqfi: f64,
}

fn check_point(n: f64, eta: f64, epsilon: f64) -> Result<()> {
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::InvalidParameter(format!("photon number must be > 0, got {n}")));
    }
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidParameter(format!("ε must be > 0, got {epsilon}")));
    }
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::InvalidParameter(format!("η = {eta} outside [0, 1]")));
    }
    Ok(())
}

pub fn optimize_displacement_ratio(n_a: f64, eta: f64, epsilon: f64) -> Result<RatioOptimum> {
    optimize_displacement_ratio_with(n_a, eta, epsilon, DEFAULT_NODES)
}

/// Coarse scan over `ratio ∈ [0, 1]` followed by golden-section refinement
/// inside the bracket of the best scan point.
pub fn optimize_displacement_ratio_with(n_a: f64, eta: f64, epsilon: f64, nodes: usize) -> Result<RatioOptimum> {
    check_point(n_a, eta, epsilon)?;
    if eta == 1.0 {
        // Without loss the squeezed vacuum attains the single-mode bound.
        return Ok(RatioOptimum { ratio: 0.0, avqfi: avqfi_bounds_noiseless(n_a)?.max });
    }
    let f = |t: f64| -> Result<f64> { Ok(avqfi_single_mode(&ratio_probe(n_a, t)?, epsilon, eta, nodes)?.mean) };
    let step = 1.0 / (SCAN_POINTS - 1) as f64;
    let mut best = RatioOptimum { ratio: 0.0, avqfi: f64::NEG_INFINITY };
    let mut best_idx = 0;
    for i in 0..SCAN_POINTS {
        let t = i as f64 * step;
        let v = f(t)?;
        if v > best.avqfi {
            best = RatioOptimum { ratio: t, avqfi: v };
            best_idx = i;
        }
    }
    let lo = best_idx.saturating_sub(1) as f64 * step;
    let hi = ((best_idx + 1).min(SCAN_POINTS - 1)) as f64 * step;
    let refined = golden_max(&f, lo, hi, RATIO_TOL)?;
    if refined.avqfi > best.avqfi {
        best = refined;
    }
    Ok(best)
}

fn golden_max<F: Fn(f64) -> Result<f64>>(f: &F, mut a: f64, mut b: f64, tol: f64) -> Result<RatioOptimum> {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc >= fd {
        RatioOptimum { ratio: c, avqfi: fc }
    } else {
        RatioOptimum { ratio: d, avqfi: fd }
    })
}

/// How the TMSV and the single-mode optimum are matched in energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum ComparisonMode {
    /// Same photon number `n_A` in the encoded mode; `sinh²r = n_A`.
    #[default]
    #[serde(rename = "fixed_nA")]
    FixedNA,
    /// Same total photon number `N`; `2 sinh²r = N`.
    #[serde(rename = "fixed_N")]
    FixedN,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Increase {
    pub optimal_ratio: f64,
    pub avqfi_single_opt: f64,
    pub avqfi_tmsv: f64,
    /// `(H̄_TMSV − max H̄₁)/max H̄₁`; 0 when both vanish.
    pub increase: f64,
}

pub fn relative_increase(photons: f64, eta: f64, epsilon: f64, mode: ComparisonMode) -> Result<Increase> {
    relative_increase_with(photons, eta, epsilon, mode, DEFAULT_NODES)
}

pub fn relative_increase_with(
    photons: f64,
    eta: f64,
    epsilon: f64,
    mode: ComparisonMode,
    nodes: usize,
) -> Result<Increase> {
    let opt = optimize_displacement_ratio_with(photons, eta, epsilon, nodes)?;
    let sinh2 = match mode {
        ComparisonMode::FixedNA => photons,
        ComparisonMode::FixedN => 0.5 * photons,
    };
    let tm = avqfi_tmsv_photons(sinh2, epsilon, eta)?;
    let increase = if opt.avqfi == 0.0 && tm == 0.0 { 0.0 } else { (tm - opt.avqfi) / opt.avqfi };
    Ok(Increase {
        optimal_ratio: opt.ratio,
        avqfi_single_opt: opt.avqfi,
        avqfi_tmsv: tm,
        increase,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaBand {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

/// Extremes and mean of the QFI over a 512-node θ grid.
pub fn theta_band(probe: &GaussianState, epsilon: f64, eta: f64) -> Result<ThetaBand> {
    let r: AvqfiResult = avqfi_numeric(probe, epsilon, eta, &ThetaPrior::Uniform, BAND_NODES)?;
    Ok(ThetaBand {
        min: r.min_theta,
        max: r.max_theta,
        mean: r.mean,
    })
}

/// η distance between the points where the optimal ratio crosses 0.9 and
/// 0.1, scanning η upward; `None` if either crossing is missing.
pub fn ratio_transition_width(etas: &[f64], ratios: &[f64]) -> Option<f64> {
    let cross = |level: f64| -> Option<f64> {
        etas.windows(2).zip(ratios.windows(2)).find_map(|(e, r)| {
            if r[0] >= level && r[1] < level {
                Some(e[0] + (r[0] - level) / (r[0] - r[1]) * (e[1] - e[0]))
            } else {
                None
            }
        })
    };
    Some(cross(0.1)? - cross(0.9)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_probe_keeps_energy() {
        for t in [0.0, 0.3, 1.0] {
            let p = ratio_probe(5.0, t).unwrap();
            assert!((p.photon_number() - 5.0).abs() < 1e-12);
            assert!((p.xi_mag * p.xi_mag / 10.0 - t).abs() < 1e-12);
        }
    }

    #[test]
    fn golden_finds_interior_max() {
        let r = golden_max(&|t: f64| Ok(-(t - 0.37).powi(2)), 0.0, 1.0, 1e-6).unwrap();
        assert!((r.ratio - 0.37).abs() < 1e-5);
    }

    #[test]
    fn transition_width_interpolates() {
        let etas = [0.0, 0.25, 0.5, 0.75, 1.0];
        let ratios = [1.0, 1.0, 0.5, 0.0, 0.0];
        let w = ratio_transition_width(&etas, &ratios).unwrap();
        assert!((w - 0.4).abs() < 1e-12);
        assert!(ratio_transition_width(&etas, &[1.0; 5]).is_none());
    }
}
