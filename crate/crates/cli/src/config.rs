use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::ValueEnum;
use oqrw_core::catalog::{build, ExampleSpec};
use oqrw_core::{DensityMat, Error, KrausPair, Result};
use serde::{Deserialize, Serialize};

/// Where the Kraus pair comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Walk {
    /// A catalog spec such as `ex4:eps=0.1,theta=0.7`.
    Example(String),
    Kraus(KrausPair),
}

impl Walk {
    pub fn kraus_pair(&self) -> Result<KrausPair> {
        match self {
            Walk::Example(s) => build(&s.parse()?),
            Walk::Kraus(kp) => Ok(*kp),
        }
    }

    pub fn example(&self) -> Result<Option<ExampleSpec>> {
        match self {
            Walk::Example(s) => s.parse().map(Some),
            Walk::Kraus(_) => Ok(None),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Method {
    Lattice,
    Dual,
    Trajectory,
    ClosedForm,
    CutUnfold,
    Both,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub walk: Walk,
    #[serde(default = "DensityMat::maximally_mixed")]
    pub rho0: DensityMat,
    pub steps: u64,
    pub method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_traj: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Method-specific requirements, checked before any engine runs.
    pub fn validate(&self) -> Result<()> {
        self.walk.kraus_pair()?;
        match self.method {
            Method::Trajectory => {
                if self.seed.is_none() {
                    return Err(Error::Parse("trajectory method requires a seed".into()));
                }
                match self.n_traj {
                    Some(t) if t > 0 => {}
                    _ => return Err(Error::Parse("trajectory method requires n_traj >= 1".into())),
                }
            }
            Method::ClosedForm => {
                let spec = self.walk.example()?.ok_or_else(|| Error::Parse("closed_form requires an example".into()))?;
                if matches!(spec, ExampleSpec::Ex2 { .. } | ExampleSpec::Ex5) {
                    return Err(Error::UnsupportedExample(spec.name().into()));
                }
            }
            Method::CutUnfold => {
                if self.walk.example()? != Some(ExampleSpec::Ex5) {
                    return Err(Error::Parse("cut_unfold applies to ex5 only".into()));
                }
                if self.rho0.matrix().get(0, 1).norm() != 0.0 {
                    return Err(Error::Parse("cut_unfold requires a diagonal rho0".into()));
                }
            }
            Method::Lattice | Method::Dual | Method::Both => {}
        }
        Ok(())
    }
}

/// `a,b` for `rho0 = diag(a, b)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiagArg(pub f64, pub f64);

impl FromStr for DiagArg {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (a, b) = s.split_once(',').ok_or("expected `a,b`")?;
        let parse = |v: &str| v.trim().parse::<f64>().map_err(|e| e.to_string());
        Ok(DiagArg(parse(a)?, parse(b)?))
    }
}

impl fmt::Display for DiagArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.0, self.1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(method: Method) -> RunConfig {
        RunConfig {
            walk: Walk::Example("ex5".into()),
            rho0: DensityMat::maximally_mixed(),
            steps: 4,
            method,
            seed: None,
            n_traj: None,
            output: None,
            format: Format::Csv,
        }
    }

    #[test]
    fn json_round_trip() {
        let mut c = config(Method::Trajectory);
        c.seed = Some(3);
        c.n_traj = Some(10);
        c.walk = Walk::Kraus(build(&"ex4:eps=0.2,theta=1.3".parse().unwrap()).unwrap());
        c.rho0 = DensityMat::diag(0.3, 0.7).unwrap();
        assert_eq!(RunConfig::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn method_requirements() {
        assert!(config(Method::Both).validate().is_ok());
        assert!(config(Method::Trajectory).validate().is_err());
        assert!(config(Method::ClosedForm).validate().is_err());
        assert!(config(Method::CutUnfold).validate().is_ok());
        let mut c = config(Method::CutUnfold);
        c.walk = Walk::Example("ex1".into());
        assert!(c.validate().is_err());
    }

    #[test]
    fn defaults_fill_optional_fields() {
        let c = RunConfig::from_json(r#"{"walk": {"example": "ex5"}, "steps": 4, "method": "dual"}"#).unwrap();
        assert_eq!(c, config(Method::Dual));
        assert!(RunConfig::from_json(r#"{"walk": {"example": "ex5"}, "steps": -1, "method": "dual"}"#).is_err());
    }
}
