use gauss_avqfi::avqfi::{
    avqfi_bounds_noiseless, avqfi_numeric, avqfi_tmsv_noiseless, qfi_sm_noisy_closed, ThetaPrior,
};
use gauss_avqfi::gaussian::tmsv;
use gauss_avqfi::qfi::{qfi, qfi_with, verify_single_mode_identity, DerivativeMode};
use gauss_avqfi::sampler::{sample_mixed_single_mode_params, sample_two_mode_pure, LocalCaps, SeededRng};
use gauss_avqfi::{EncodingParams, Result as CoreResult};
use serde::Serialize;

use crate::args::{Format, OutputArgs, Preset, VerifyArgs};
use crate::commands::rel_dev;
use crate::input::preset_state;
use crate::output::{emit, num, Table};
use crate::{CliError, Outcome};

const PHOTONS: [f64; 4] = [0.5, 1.0, 2.0, 5.0];

#[derive(Debug, Serialize)]
pub struct CheckRow {
    pub check: &'static str,
    pub cases: usize,
    pub errors: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

struct Check {
    name: &'static str,
    tol: f64,
    cases: usize,
    errors: usize,
    worst: f64,
}

impl Check {
    fn new(name: &'static str, tol: f64) -> Self {
        Self { name, tol, cases: 0, errors: 0, worst: 0.0 }
    }

    fn record(&mut self, dev: CoreResult<f64>) {
        self.cases += 1;
        match dev {
            Ok(d) => self.worst = self.worst.max(d),
            Err(_) => self.errors += 1,
        }
    }

    fn row(self) -> CheckRow {
        CheckRow {
            check: self.name,
            cases: self.cases,
            errors: self.errors,
            max_deviation: self.worst,
            tolerance: self.tol,
            pass: self.errors == 0 && self.worst <= self.tol,
        }
    }
}

fn random_encoding(rng: &mut SeededRng) -> CoreResult<EncodingParams> {
    let eps = rng.uniform_in(0.1, 1.0);
    let eta = rng.uniform_in(0.1, 0.95);
    let theta = rng.angle();
    EncodingParams::new(eps, theta, eta)
}

fn preset_avqfi(p: Preset, n: f64, nodes: usize) -> Result<f64, CliError> {
    Ok(avqfi_numeric(&preset_state(p, n)?, 1.0, 1.0, &ThetaPrior::Uniform, nodes)?.mean)
}

pub fn cmd_verify(a: &VerifyArgs, out: &OutputArgs) -> Result<Outcome, CliError> {
    gauss_avqfi::avqfi::check_nodes(a.nodes)?;
    let mut rows = Vec::new();

    // Photon-number bounds against the quadrature engine.
    let mut c = Check::new("noiseless_bounds", 1e-9);
    for n in PHOTONS {
        let b = avqfi_bounds_noiseless(n)?;
        for (p, v) in [(Preset::Squeezed, b.max), (Preset::Thermal, b.min), (Preset::Coherent, b.coherent)] {
            let q = preset_avqfi(p, n, a.nodes)?;
            c.record(Ok(rel_dev(q, v)));
        }
    }
    rows.push(c.row());

    let mut c = Check::new("tmsv_average", 1e-7);
    for n in PHOTONS {
        let r = n.sqrt().asinh();
        c.record(
            avqfi_numeric(&tmsv(r), 1.0, 1.0, &ThetaPrior::Uniform, a.nodes)
                .map(|q| rel_dev(q.mean, avqfi_tmsv_noiseless(r))),
        );
    }
    rows.push(c.row());

    let mut rng = SeededRng::new(a.seed);
    let mut c = Check::new("single_mode_identity", 1e-7);
    for _ in 0..a.count {
        let n = rng.uniform_in(0.2, 3.0);
        let dev = (|| {
            let probe = sample_mixed_single_mode_params(n, &mut rng)?.to_state()?;
            let r = verify_single_mode_identity(&probe, &random_encoding(&mut rng)?)?;
            Ok(r.residual / r.lhs.abs().max(1.0))
        })();
        c.record(dev);
    }
    rows.push(c.row());

    let mut c = Check::new("noisy_closed_form", 1e-6);
    for _ in 0..a.count {
        let n = rng.uniform_in(0.2, 3.0);
        let dev = (|| {
            let p = sample_mixed_single_mode_params(n, &mut rng)?;
            let e = random_encoding(&mut rng)?;
            let closed = qfi_sm_noisy_closed(&p, e.epsilon, e.eta, e.theta)?;
            let fd = qfi_with(&p.to_state()?, &e, DerivativeMode::FiniteDifference)?.value;
            Ok(rel_dev(closed, fd))
        })();
        c.record(dev);
    }
    rows.push(c.row());

    let mut c = Check::new("two_mode_analytic_vs_fd", 1e-5);
    for _ in 0..a.count {
        let nu = rng.uniform_in(1.0, 3.0);
        let dev = (|| {
            let probe = sample_two_mode_pure(nu, &LocalCaps::default(), &mut rng)?;
            let e = random_encoding(&mut rng)?;
            let e = if rng.uniform() < 0.5 { EncodingParams::unitary(e.epsilon, e.theta)? } else { e };
            let an = qfi(&probe, &e)?.value;
            let fd = qfi_with(&probe, &e, DerivativeMode::FiniteDifference)?.value;
            Ok(rel_dev(an, fd))
        })();
        c.record(dev);
    }
    rows.push(c.row());

    let failed_checks = rows.iter().filter(|r| !r.pass).count();
    emit(
        out,
        Format::Csv,
        Table {
            header: ["check", "cases", "errors", "max_deviation", "tolerance", "status"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            rows: &rows,
            cells: |r| {
                vec![
                    r.check.to_string(),
                    r.cases.to_string(),
                    r.errors.to_string(),
                    num(r.max_deviation),
                    num(r.tolerance),
                    if r.pass { "PASS" } else { "FAIL" }.to_string(),
                ]
            },
            single: false,
        },
    )?;
    Ok(Outcome { oracle_deviation: None, failed_checks })
}
