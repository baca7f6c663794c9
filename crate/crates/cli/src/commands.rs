use gauss_avqfi::avqfi::{
    avqfi_numeric, avqfi_numeric_with, avqfi_single_mode, avqfi_sm_noiseless, avqfi_two_mode_noiseless_state,
    AvqfiMethod, ThetaPrior,
};
use gauss_avqfi::gaussian::tmsv;
use gauss_avqfi::qfi::{qfi, qfi_two_mode_with, qfi_with, DerivativeMode};
use gauss_avqfi::sampler::{sample_mixed_single_mode_params, sample_pure_single_mode_params, SeededRng};
use gauss_avqfi::sweep::{ratio_probe, run_sweep, ComparisonMode, SweepRecord, SweepSpec};
use gauss_avqfi::{EncodingParams, GaussianState};
use serde::Serialize;

use crate::args::{AvqfiArgs, Format, Mode, OutputArgs, QfiArgs, SampleArgs, SampleKind, SweepArgs};
use crate::input::{load_prior, load_state, parse_axis};
use crate::output::{emit, num, opt_num, Table};
use crate::{CliError, Outcome};

const FD: DerivativeMode = DerivativeMode::FiniteDifference;

/// Relative difference, with a floor so that two tiny values do not read as
/// a large deviation.
pub fn rel_dev(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-6)
}

fn cells_or_blank(x: f64) -> String {
    if x.is_finite() {
        num(x)
    } else {
        String::new()
    }
}

fn header(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|c| c.to_string()).collect()
}

#[derive(Debug, Serialize)]
pub struct QfiReport {
    pub modes: usize,
    pub epsilon: f64,
    pub theta: f64,
    pub eta: f64,
    pub value: f64,
    pub term_covariance: f64,
    pub term_eigenvalues: f64,
    pub term_displacement: f64,
    pub regularized: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_deviation: Option<f64>,
}

pub fn cmd_qfi(a: &QfiArgs, out: &OutputArgs) -> Result<Outcome, CliError> {
    let state = load_state(&a.state)?;
    let params = EncodingParams::new(a.encoding.epsilon, a.theta, a.encoding.eta)?;
    let r = qfi(&state, &params)?;
    let (oracle_value, oracle_deviation) = if a.oracle {
        let fd = qfi_with(&state, &params, FD)?.value;
        (Some(fd), Some(rel_dev(r.value, fd)))
    } else {
        (None, None)
    };
    let report = QfiReport {
        modes: state.modes(),
        epsilon: params.epsilon,
        theta: params.theta,
        eta: params.eta,
        value: r.value,
        term_covariance: r.term_covariance,
        term_eigenvalues: r.term_eigenvalues,
        term_displacement: r.term_displacement,
        regularized: r.regularized,
        oracle_value,
        oracle_deviation,
    };
    emit(
        out,
        Format::Json,
        Table {
            header: header(&[
                "modes",
                "epsilon",
                "theta",
                "eta",
                "value",
                "term_covariance",
                "term_eigenvalues",
                "term_displacement",
                "regularized",
                "oracle_value",
                "oracle_deviation",
            ]),
            rows: &[report],
            cells: |r| {
                vec![
                    r.modes.to_string(),
                    num(r.epsilon),
                    num(r.theta),
                    num(r.eta),
                    num(r.value),
                    num(r.term_covariance),
                    num(r.term_eigenvalues),
                    num(r.term_displacement),
                    r.regularized.to_string(),
                    opt_num(r.oracle_value),
                    opt_num(r.oracle_deviation),
                ]
            },
            single: true,
        },
    )?;
    Ok(Outcome { oracle_deviation, ..Outcome::default() })
}

#[derive(Debug, Serialize)]
pub struct AvqfiReport {
    pub modes: usize,
    pub epsilon: f64,
    pub eta: f64,
    pub nodes: usize,
    pub prior: &'static str,
    /// Closed form when one applies, otherwise the quadrature mean.
    pub mean: f64,
    pub variance: f64,
    pub min_theta: f64,
    pub max_theta: f64,
    pub method: AvqfiMethod,
    pub quadrature_mean: f64,
    pub regularized: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_mean: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_deviation: Option<f64>,
}

/// Closed-form AvQFI for unit transmissivity under the uniform prior.
fn closed_form_mean(state: &GaussianState, eta: f64, prior: &ThetaPrior) -> Result<Option<f64>, CliError> {
    if eta != 1.0 || !matches!(prior, ThetaPrior::Uniform) {
        return Ok(None);
    }
    Ok(Some(match state.modes() {
        1 => avqfi_sm_noiseless(state.gamma(), state.xi().norm())?,
        _ => avqfi_two_mode_noiseless_state(state)?,
    }))
}

pub fn cmd_avqfi(a: &AvqfiArgs, out: &OutputArgs) -> Result<Outcome, CliError> {
    let state = load_state(&a.state)?;
    let prior = load_prior(a.prior.as_deref())?;
    let (eps, eta) = (a.encoding.epsilon, a.encoding.eta);
    let quad = avqfi_numeric(&state, eps, eta, &prior, a.nodes)?;
    let closed = closed_form_mean(&state, eta, &prior)?;
    let (oracle_mean, oracle_deviation) = if a.oracle {
        let fd = avqfi_numeric_with(&state, eps, eta, &prior, a.nodes, FD)?;
        let mut dev = rel_dev(quad.mean, fd.mean)
            .max(rel_dev(quad.min_theta, fd.min_theta))
            .max(rel_dev(quad.max_theta, fd.max_theta));
        if let Some(c) = closed {
            dev = dev.max(rel_dev(c, fd.mean));
        }
        (Some(fd.mean), Some(dev))
    } else {
        (None, None)
    };
    let report = AvqfiReport {
        modes: state.modes(),
        epsilon: eps,
        eta,
        nodes: a.nodes,
        prior: if matches!(prior, ThetaPrior::Uniform) { "uniform" } else { "tabulated" },
        mean: closed.unwrap_or(quad.mean),
        variance: quad.variance,
        min_theta: quad.min_theta,
        max_theta: quad.max_theta,
        method: if closed.is_some() { AvqfiMethod::ClosedForm } else { AvqfiMethod::Quadrature },
        quadrature_mean: quad.mean,
        regularized: quad.regularized,
        oracle_mean,
        oracle_deviation,
    };
    emit(
        out,
        Format::Json,
        Table {
            header: header(&[
                "modes",
                "epsilon",
                "eta",
                "nodes",
                "prior",
                "mean",
                "variance",
                "min_theta",
                "max_theta",
                "method",
                "quadrature_mean",
                "regularized",
                "oracle_mean",
                "oracle_deviation",
            ]),
            rows: &[report],
            cells: |r| {
                vec![
                    r.modes.to_string(),
                    num(r.epsilon),
                    num(r.eta),
                    r.nodes.to_string(),
                    r.prior.to_string(),
                    num(r.mean),
                    num(r.variance),
                    num(r.min_theta),
                    num(r.max_theta),
                    match r.method {
                        AvqfiMethod::ClosedForm => "closed_form",
                        AvqfiMethod::Quadrature => "quadrature",
                    }
                    .to_string(),
                    num(r.quadrature_mean),
                    r.regularized.to_string(),
                    opt_num(r.oracle_mean),
                    opt_num(r.oracle_deviation),
                ]
            },
            single: true,
        },
    )?;
    Ok(Outcome { oracle_deviation, ..Outcome::default() })
}

#[derive(Debug, Serialize)]
pub struct SampleRow {
    pub index: usize,
    pub nu: f64,
    pub alpha: f64,
    pub phi: f64,
    pub xi_mag: f64,
    pub psi: f64,
    pub photon_number: f64,
    pub avqfi: Option<f64>,
    pub error: Option<String>,
}

pub fn cmd_sample(a: &SampleArgs, out: &OutputArgs) -> Result<Outcome, CliError> {
    let (eps, eta) = (a.encoding.epsilon, a.encoding.eta);
    EncodingParams::new(eps, 0.0, eta)?;
    gauss_avqfi::avqfi::check_nodes(a.nodes)?;
    let mut rng = SeededRng::new(a.seed);
    let mut rows = Vec::with_capacity(a.count);
    let mut worst: Option<f64> = None;
    for index in 0..a.count {
        let p = match a.kind {
            SampleKind::Pure => sample_pure_single_mode_params(a.n_a, &mut rng)?,
            SampleKind::Mixed => sample_mixed_single_mode_params(a.n_a, &mut rng)?,
        };
        let (avqfi, error) = match avqfi_single_mode(&p, eps, eta, a.nodes) {
            Ok(r) => (Some(r.mean), None),
            Err(e) => (None, Some(e.to_string())),
        };
        if a.oracle {
            if let Some(v) = avqfi {
                let fd = avqfi_numeric_with(&p.to_state()?, eps, eta, &ThetaPrior::Uniform, a.nodes, FD)?.mean;
                let dev = rel_dev(v, fd);
                worst = Some(worst.map_or(dev, |w| w.max(dev)));
            }
        }
        rows.push(SampleRow {
            index,
            nu: p.nu,
            alpha: p.alpha,
            phi: p.phi,
            xi_mag: p.xi_mag,
            psi: p.psi,
            photon_number: p.photon_number(),
            avqfi,
            error,
        });
    }
    emit(
        out,
        Format::Csv,
        Table {
            header: header(&["index", "nu", "alpha", "phi", "xi_mag", "psi", "photon_number", "avqfi", "error"]),
            rows: &rows,
            cells: |r| {
                vec![
                    r.index.to_string(),
                    num(r.nu),
                    num(r.alpha),
                    num(r.phi),
                    num(r.xi_mag),
                    num(r.psi),
                    num(r.photon_number),
                    opt_num(r.avqfi),
                    r.error.clone().unwrap_or_default(),
                ]
            },
            single: false,
        },
    )?;
    Ok(Outcome { oracle_deviation: if a.oracle { Some(worst.unwrap_or(0.0)) } else { None }, ..Outcome::default() })
}

/// Reruns one sweep row through the finite-difference engine.
fn sweep_oracle(r: &SweepRecord, mode: ComparisonMode, nodes: usize) -> Result<f64, CliError> {
    let probe = ratio_probe(r.photons, r.optimal_ratio)?.to_state()?;
    let single = avqfi_numeric_with(&probe, r.epsilon, r.eta, &ThetaPrior::Uniform, nodes, FD)?.mean;
    let sinh2 = match mode {
        ComparisonMode::FixedNA => r.photons,
        ComparisonMode::FixedN => 0.5 * r.photons,
    };
    let params = EncodingParams::new(r.epsilon, 0.0, r.eta)?;
    let two = qfi_two_mode_with(&tmsv(sinh2.sqrt().asinh()), &params, FD)?.value;
    Ok(rel_dev(r.avqfi_single_opt, single).max(rel_dev(r.avqfi_tmsv, two)))
}

pub fn cmd_sweep(a: &SweepArgs, out: &OutputArgs) -> Result<Outcome, CliError> {
    let (mode, photons, col) = match (a.mode, &a.n_a, &a.n_total) {
        (Mode::FixedNA, Some(n), None) => (ComparisonMode::FixedNA, n, "n_A"),
        (Mode::FixedN, None, Some(n)) => (ComparisonMode::FixedN, n, "N"),
        (Mode::FixedNA, _, _) => return Err(CliError::Config("fixed_nA needs --n-a and no --n-total".into())),
        (Mode::FixedN, _, _) => return Err(CliError::Config("fixed_N needs --n-total and no --n-a".into())),
    };
    let mut spec = SweepSpec::new(
        parse_axis(photons, "photon range")?,
        parse_axis(&a.eta, "eta range")?,
        a.epsilon,
        mode,
    );
    spec.nodes = a.nodes;
    spec.seed = a.seed;
    spec.mixed_samples = a.mixed_samples;
    let records = run_sweep(&spec)?;
    let mut worst: Option<f64> = None;
    if a.oracle {
        for r in records.iter().filter(|r| r.error.is_none() && r.eta > 0.0) {
            let dev = sweep_oracle(r, mode, a.nodes)?;
            worst = Some(worst.map_or(dev, |w| w.max(dev)));
        }
    }
    emit(
        out,
        Format::Csv,
        Table {
            header: header(&[
                col,
                "eta",
                "epsilon",
                "optimal_ratio",
                "avqfi_single_opt",
                "avqfi_tmsv",
                "increase",
                "flags",
                "mixed_best",
                "error",
            ]),
            rows: &records,
            cells: |r| {
                vec![
                    num(r.photons),
                    num(r.eta),
                    num(r.epsilon),
                    cells_or_blank(r.optimal_ratio),
                    cells_or_blank(r.avqfi_single_opt),
                    cells_or_blank(r.avqfi_tmsv),
                    cells_or_blank(r.increase),
                    r.flags.join(";"),
                    opt_num(r.mixed_best),
                    r.error.clone().unwrap_or_default(),
                ]
            },
            single: false,
        },
    )?;
    Ok(Outcome { oracle_deviation: if a.oracle { Some(worst.unwrap_or(0.0)) } else { None }, ..Outcome::default() })
}
