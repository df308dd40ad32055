//! The five reference walks, their closed-form laws and Example 5 combinatorics.

mod closed_form;
mod cut_unfold;
mod spectrum;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::qop::{KrausPair, Mat2};

pub use closed_form::{binomial_row, closed_form, ex4_sector_weights};
pub use cut_unfold::{cut_unfold_distribution, CutUnfoldSeq, Move, MAX_CUT_UNFOLD_STEPS};
pub use spectrum::{ex5_lambda1, ex5_power_traces, ex5_spectrum, ex5_transfer_matrix, Ex5Spectrum};

/// A parameterized catalog walk.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExampleSpec {
    /// Diagonal pair; classical walk in the second sector, frozen drift in the first.
    Ex1 { p: f64 },
    /// Correlated walk from a split unitary; `phases` are the arguments of `b11`, `b21`, `c12`.
    Ex2 { p: f64, phases: [f64; 3] },
    /// Absorbing drift to the left with leakage `gamma`.
    Ex3 { p: f64, gamma: f64 },
    /// Commuting pair; mixture of two classical walks.
    Ex4 { eps: f64, theta: f64 },
    /// Upper/lower triangular pair with a non-normal dual symbol.
    Ex5,
}

impl ExampleSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ExampleSpec::Ex1 { .. } => "ex1",
            ExampleSpec::Ex2 { .. } => "ex2",
            ExampleSpec::Ex3 { .. } => "ex3",
            ExampleSpec::Ex4 { .. } => "ex4",
            ExampleSpec::Ex5 => "ex5",
        }
    }

    /// Default parameters for each example id.
    pub fn default_for(name: &str) -> Result<Self> {
        Ok(match name {
            "ex1" => ExampleSpec::Ex1 { p: 0.5 },
            "ex2" => ExampleSpec::Ex2 { p: 0.5, phases: [0.0; 3] },
            "ex3" => ExampleSpec::Ex3 { p: 0.5, gamma: 0.4 },
            "ex4" => ExampleSpec::Ex4 { eps: 0.1, theta: 0.7 },
            "ex5" => ExampleSpec::Ex5,
            other => return Err(Error::Parse(format!("unknown example `{other}`"))),
        })
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |name: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::Parameter(format!("{name} = {v} outside [0, 1]")))
            }
        };
        match *self {
            ExampleSpec::Ex1 { p } => unit("p", p),
            ExampleSpec::Ex2 { p, phases } => {
                unit("p", p)?;
                if phases.iter().all(|f| f.is_finite()) {
                    Ok(())
                } else {
                    Err(Error::Parameter("phases must be finite".into()))
                }
            }
            ExampleSpec::Ex3 { p, gamma } => {
                unit("p", p)?;
                let bound = (2.0 * p).sqrt().min((2.0 * (1.0 - p)).sqrt());
                if gamma > 0.0 && gamma <= bound {
                    Ok(())
                } else {
                    Err(Error::Parameter(format!(
                        "gamma = {gamma} violates 0 < gamma <= min(sqrt(2p), sqrt(2q)) = {bound}"
                    )))
                }
            }
            ExampleSpec::Ex4 { eps, theta } => {
                if !theta.is_finite() {
                    return Err(Error::Parameter("theta must be finite".into()));
                }
                if !(eps > 0.0 && eps * eps <= 0.5) {
                    return Err(Error::Parameter(format!("eps = {eps} violates 0 < eps <= 1/sqrt(2)")));
                }
                let a = (0.5 - eps * eps).sqrt();
                if 2.0 * eps * a < 0.5 {
                    Ok(())
                } else {
                    Err(Error::Parameter(format!("2 eps a(eps) = {} must be below 1/2", 2.0 * eps * a)))
                }
            }
            ExampleSpec::Ex5 => Ok(()),
        }
    }
}

impl fmt::Display for ExampleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExampleSpec::Ex1 { p } => write!(f, "ex1:p={p}"),
            ExampleSpec::Ex2 { p, phases } => {
                write!(f, "ex2:p={p}")?;
                for (name, v) in ["phi_b11", "phi_b21", "phi_c12"].iter().zip(phases) {
                    if *v != 0.0 {
                        write!(f, ",{name}={v}")?;
                    }
                }
                Ok(())
            }
            ExampleSpec::Ex3 { p, gamma } => write!(f, "ex3:p={p},gamma={gamma}"),
            ExampleSpec::Ex4 { eps, theta } => write!(f, "ex4:eps={eps},theta={theta}"),
            ExampleSpec::Ex5 => write!(f, "ex5"),
        }
    }
}

impl FromStr for ExampleSpec {
    type Err = Error;

    /// `ex1:p=0.3`, `ex3:p=0.5,gamma=0.4`, `ex4:eps=0.1,theta=0.7`, `ex5`.
    /// Missing keys take the defaults of [`ExampleSpec::default_for`]; unknown keys are rejected.
    fn from_str(s: &str) -> Result<Self> {
        let (name, params) = match s.split_once(':') {
            Some((n, p)) => (n.trim(), p.trim()),
            None => (s.trim(), ""),
        };
        let mut spec = ExampleSpec::default_for(name)?;
        for kv in params.split(',').map(str::trim).filter(|kv| !kv.is_empty()) {
            let (key, value) = kv
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, found `{kv}`")))?;
            let key = key.trim();
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("{key}: {e}")))?;
            let slot = match (&mut spec, key) {
                (ExampleSpec::Ex1 { p }, "p") => p,
                (ExampleSpec::Ex2 { p, .. }, "p") => p,
                (ExampleSpec::Ex2 { phases, .. }, "phi_b11") => &mut phases[0],
                (ExampleSpec::Ex2 { phases, .. }, "phi_b21") => &mut phases[1],
                (ExampleSpec::Ex2 { phases, .. }, "phi_c12") => &mut phases[2],
                (ExampleSpec::Ex3 { p, .. }, "p") => p,
                (ExampleSpec::Ex3 { gamma, .. }, "gamma") => gamma,
                (ExampleSpec::Ex4 { eps, .. }, "eps") => eps,
                (ExampleSpec::Ex4 { theta, .. }, "theta") => theta,
                _ => return Err(Error::Parse(format!("unknown key `{key}` for {name}"))),
            };
            *slot = value;
        }
        spec.validate()?;
        Ok(spec)
    }
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// The Kraus pair of a catalog example.
pub fn build(spec: &ExampleSpec) -> Result<KrausPair> {
    spec.validate()?;
    let zero = real(0.0);
    let (b, c) = match *spec {
        ExampleSpec::Ex1 { p } => (
            Mat2::real_diag(1.0, p.sqrt()),
            Mat2::real_diag(0.0, (1.0 - p).sqrt()),
        ),
        ExampleSpec::Ex2 { p, phases } => {
            let (sp, sq) = (p.sqrt(), (1.0 - p).sqrt());
            // Orthogonal columns of B + C force arg(c22) = arg(b21) - arg(b11) + arg(c12) + π.
            let phi_c22 = phases[1] - phases[0] + phases[2] + std::f64::consts::PI;
            let b11 = C64::from_polar(sp, phases[0]);
            let b21 = C64::from_polar(sq, phases[1]);
            let c12 = C64::from_polar(sq, phases[2]);
            let c22 = if phases == [0.0; 3] { real(-sp) } else { C64::from_polar(sp, phi_c22) };
            (Mat2::new([[b11, zero], [b21, zero]])?, Mat2::new([[zero, c12], [zero, c22]])?)
        }
        ExampleSpec::Ex3 { p, gamma } => {
            let pt = (p - gamma * gamma / 2.0).max(0.0);
            let qt = (1.0 - p - gamma * gamma / 2.0).max(0.0);
            (
                Mat2::real_diag(1.0, pt.sqrt()),
                Mat2::from_real([[0.0, gamma], [0.0, qt.sqrt()]])?,
            )
        }
        ExampleSpec::Ex4 { eps, theta } => {
            let a = real((0.5 - eps * eps).sqrt());
            let off = C64::from_polar(eps, theta);
            (Mat2::new([[a, off], [off, a]])?, Mat2::new([[a, -off], [-off, a]])?)
        }
        ExampleSpec::Ex5 => {
            let s = 1.0 / 3f64.sqrt();
            (
                Mat2::from_real([[s, s], [0.0, s]])?,
                Mat2::from_real([[s, 0.0], [-s, s]])?,
            )
        }
    };
    KrausPair::new(b, c)
}

/// `1/2 ± 2 ε a(ε) cos θ`, the eigenvalues of `B*B` (first) and `C*C` (second) for Example 4.
pub fn ex4_lambdas(eps: f64, theta: f64) -> (f64, f64) {
    let shift = 2.0 * eps * (0.5 - eps * eps).sqrt() * theta.cos();
    (0.5 + shift, 0.5 - shift)
}

/// The rotation diagonalizing Example 4's `B*B` and `C*C`: `(1/√2)[[1, 1], [1, -1]]`.
pub fn ex4_rotation() -> Mat2 {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Mat2([[real(h), real(h)], [real(h), real(-h)]])
}
