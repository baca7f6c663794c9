use std::fs;

use gauss_avqfi::avqfi::ThetaPrior;
use gauss_avqfi::gaussian::tmsv;
use gauss_avqfi::sweep::Axis;
use gauss_avqfi::{GaussianState, SingleModeProbeParams};

use crate::args::{Preset, StateArgs};
use crate::CliError;

fn read(path: &str, what: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {what} '{path}': {e}")))
}

pub fn load_state(args: &StateArgs) -> Result<GaussianState, CliError> {
    match (&args.state, args.preset) {
        (Some(src), _) => parse_state(src),
        (None, Some(p)) => preset_state(p, args.n_a),
        (None, None) => Err(CliError::Config("one of --state or --preset is required".into())),
    }
}

fn parse_state(src: &str) -> Result<GaussianState, CliError> {
    let text = if src.trim_start().starts_with('{') { src.to_string() } else { read(src, "state file")? };
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("invalid state JSON: {e}")))
}

/// Presets put `n_a` photons in mode A: squeezed vacuum, thermal, coherent
/// along p, or TMSV with `sinh²r = n_a`.
pub fn preset_state(preset: Preset, n_a: f64) -> Result<GaussianState, CliError> {
    if !(n_a >= 0.0) || !n_a.is_finite() {
        return Err(CliError::Config(format!("--n-a must be a finite number ≥ 0, got {n_a}")));
    }
    let budget = 2.0 * n_a + 1.0;
    let params = match preset {
        Preset::Vacuum => return Ok(GaussianState::vacuum(1)),
        Preset::Tmsv => return Ok(tmsv(n_a.sqrt().asinh())),
        Preset::Squeezed => SingleModeProbeParams::new(1.0, 0.5 * budget.acosh(), 0.0, 0.0, 0.0),
        Preset::Thermal => SingleModeProbeParams::new(budget, 0.0, 0.0, 0.0, 0.0),
        Preset::Coherent => SingleModeProbeParams::new(1.0, 0.0, 0.0, (2.0 * n_a).sqrt(), std::f64::consts::FRAC_PI_2),
    }?;
    Ok(params.to_state()?)
}

/// `uniform`, or a file of density samples on an even θ grid; the samples
/// are normalized here.
pub fn load_prior(src: Option<&str>) -> Result<ThetaPrior, CliError> {
    let Some(src) = src else { return Ok(ThetaPrior::Uniform) };
    if src == "uniform" {
        return Ok(ThetaPrior::Uniform);
    }
    let text = read(src, "prior file")?;
    let values = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|e| CliError::Config(format!("prior value '{t}': {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ThetaPrior::tabulated_normalized(values)?)
}

/// `value` or `start:end:count`.
pub fn parse_axis(src: &str, name: &str) -> Result<Axis, CliError> {
    let bad = |m: String| CliError::Config(format!("{name} '{src}': {m}"));
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| bad(e.to_string()));
    let parts: Vec<&str> = src.split(':').collect();
    match parts.as_slice() {
        [v] => {
            let v = num(v)?;
            Axis::new(v, v, 1).map_err(|e| bad(e.to_string()))
        }
        [a, b, n] => {
            let n = n.trim().parse::<usize>().map_err(|e| bad(e.to_string()))?;
            Axis::new(num(a)?, num(b)?, n).map_err(|e| bad(e.to_string()))
        }
        _ => Err(bad("expected value or start:end:count".into())),
    }
}
