use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use oqrw_core::catalog::{closed_form, cut_unfold_distribution, ExampleSpec};
use oqrw_core::dual::distribution_via_dual;
use oqrw_core::lattice::{distribution, evolve, initial_state};
use oqrw_core::limit::{clt_params, ex5_alpha, invariant_residual, invariant_states};
use oqrw_core::trajectory::sample;
use oqrw_core::{compare, Comparison, DensityMat, Distribution, Error, KrausPair, Mat2};
use serde::Serialize;

use crate::config::{Format, Method, RunConfig, Walk};

/// A failed command: message plus process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_numerical() { 3 } else { 2 },
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: 2, message: e.to_string() }
    }
}

pub type CmdResult<T = ()> = std::result::Result<T, Failure>;

/// Writes to `path`, or stdout when absent.
pub fn emit(path: Option<&Path>, text: &str) -> CmdResult {
    match path {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

pub fn read_text(path: &Path) -> CmdResult<String> {
    fs::read_to_string(path).map_err(|e| Failure {
        code: 2,
        message: format!("{}: {e}", path.display()),
    })
}

fn lattice_law(kp: &KrausPair, rho0: &DensityMat, n: u64) -> Result<Distribution, Error> {
    distribution(&evolve(kp, &initial_state(rho0, 0), n)?)
}

#[derive(Serialize)]
struct DistReport<'a> {
    method: Method,
    steps: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    comparison: Option<Comparison>,
    distribution: &'a Distribution,
}

pub fn dist(cfg: &RunConfig) -> CmdResult {
    cfg.validate()?;
    let kp = cfg.walk.kraus_pair()?;
    let n = cfg.steps;
    let mut comparison = None;
    let law = match cfg.method {
        Method::Lattice => lattice_law(&kp, &cfg.rho0, n)?,
        Method::Dual => distribution_via_dual(&kp, &cfg.rho0, n)?,
        Method::Both => {
            let lat = lattice_law(&kp, &cfg.rho0, n)?;
            let dual = distribution_via_dual(&kp, &cfg.rho0, n)?;
            comparison = Some(compare(&lat, &dual));
            dual
        }
        Method::ClosedForm => {
            let spec = cfg.walk.example()?.expect("validated");
            closed_form(&spec, &cfg.rho0, n)?
        }
        Method::CutUnfold => {
            let n = usize::try_from(n).map_err(|_| Error::Parse("steps too large".into()))?;
            cut_unfold_distribution(cfg.rho0.diagonal(), n)?
        }
        Method::Trajectory => {
            let (seed, traj) = (cfg.seed.expect("validated"), cfg.n_traj.expect("validated"));
            sample(&kp, &cfg.rho0, n, traj, seed)?.empirical
        }
    };
    let text = match cfg.format {
        Format::Csv => {
            if let Some(c) = comparison {
                eprint!("{}", json(&c));
            }
            law.to_csv()
        }
        Format::Json => json(&DistReport {
            method: cfg.method,
            steps: n,
            comparison,
            distribution: &law,
        }),
    };
    emit(cfg.output.as_deref(), &text)
}

pub fn sample_cmd(cfg: &RunConfig, csv: Option<&Path>) -> CmdResult {
    let mut cfg = cfg.clone();
    cfg.method = Method::Trajectory;
    cfg.validate()?;
    let kp = cfg.walk.kraus_pair()?;
    let report = sample(&kp, &cfg.rho0, cfg.steps, cfg.n_traj.expect("validated"), cfg.seed.expect("validated"))?;
    if let Some(path) = csv {
        emit(Some(path), &report.empirical.to_csv())?;
    }
    emit(cfg.output.as_deref(), &json(&report))
}

#[derive(Serialize)]
struct Residuals {
    invariant: f64,
    solvability: f64,
    poisson: f64,
}

#[derive(Serialize)]
struct CltReport {
    fixed_space_dim: usize,
    m: f64,
    sigma2: f64,
    rho_inf: DensityMat,
    l: Mat2,
    residuals: Residuals,
}

pub fn clt(walk: &Walk, output: Option<&Path>) -> CmdResult {
    let kp = walk.kraus_pair()?;
    let report = invariant_states(&kp)?;
    let params = clt_params(&kp)?;
    let out = CltReport {
        fixed_space_dim: report.fixed_space_dim,
        m: params.m,
        sigma2: params.sigma2,
        rho_inf: params.rho_inf,
        l: params.l,
        residuals: Residuals {
            invariant: invariant_residual(&kp, &params.rho_inf),
            solvability: params.solvability,
            poisson: params.residual,
        },
    };
    emit(output, &json(&out))
}

/// `x,p,alpha,ratio,limit` at step `2n` for Example 5, with `limit` the
/// predicted value of `p/alpha` (`1/π` on even sites, 0 on odd ones).
pub fn asym(walk: &Walk, half_steps: u32, rho0: &DensityMat, output: Option<&Path>) -> CmdResult {
    if walk.example()? != Some(ExampleSpec::Ex5) {
        return Err(Error::UnsupportedExample("asymptotic ratios are implemented for ex5 only".into()).into());
    }
    let steps = 2 * half_steps;
    let law = distribution_via_dual(&walk.kraus_pair()?, rho0, steps as u64)?;
    let alpha = ex5_alpha(steps);
    let mut out = String::from("x,p,alpha,ratio,limit\n");
    for x in -(steps as i64)..=steps as i64 {
        let p = law.get(x);
        let limit = if x % 2 == 0 { std::f64::consts::FRAC_1_PI } else { 0.0 };
        writeln!(out, "{x},{p:?},{alpha:?},{:?},{limit:?}", p / alpha).expect("string write");
    }
    emit(output, &out)
}

pub fn compare_files(a: &Path, b: &Path) -> CmdResult {
    let da = Distribution::from_csv(&read_text(a)?)?;
    let db = Distribution::from_csv(&read_text(b)?)?;
    emit(None, &json(&compare(&da, &db)))
}
