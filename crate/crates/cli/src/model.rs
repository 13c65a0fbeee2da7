//! Loading a model from a spec file or a built-in bivariate shortcut.

use std::fs;
use std::io::Read;
use std::path::Path;

use clap::{Args, ValueEnum};
use vinegauge::gauge::{gauge_bivariate, gauge_for_spec, BivariateCase};
use vinegauge::{Error, ExponentMeasure, Gauge, PairCopula, Result, VineSpec};

/// Bivariate models available without a spec file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    /// Independent exponential margins.
    Independence,
    /// Gaussian copula, needs `--rho`.
    Gaussian,
    /// Inverted logistic copula, needs `--alpha`.
    Ilog,
    /// Logistic extreme-value copula, needs `--alpha`.
    Logistic,
    /// Asymmetric logistic extreme-value copula, needs `--alpha`.
    Alog,
}

/// Where the model comes from. Exactly one of a spec path and `--builtin`.
#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Vine specification JSON file (`-` reads standard input).
    #[arg(value_name = "SPEC", required_unless_present = "builtin")]
    pub spec: Option<String>,

    /// Use a built-in bivariate model instead of a spec file.
    #[arg(long, value_enum, conflicts_with = "spec")]
    pub builtin: Option<Builtin>,

    /// Correlation of the Gaussian built-in, in [0, 1).
    #[arg(long)]
    pub rho: Option<f64>,

    /// Dependence parameter of the logistic built-ins, in (0, 1].
    #[arg(long)]
    pub alpha: Option<f64>,
}

/// A loaded model. Built-ins have no vine specification.
pub enum Model {
    Spec(VineSpec),
    Builtin { case: BivariateCase, eta: f64 },
}

fn required(name: &str, v: Option<f64>, builtin: Builtin) -> Result<f64> {
    v.ok_or_else(|| Error::Domain(format!("built-in {builtin:?} needs --{name}").to_lowercase()))
}

/// Read and validate a vine specification.
pub fn read_spec(path: &str) -> Result<VineSpec> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(Path::new(path)).map_err(|e| Error::Io(format!("{path}: {e}")))?
    };
    VineSpec::from_json_str(&text)
}

impl ModelArgs {
    pub fn load(&self) -> Result<Model> {
        let Some(b) = self.builtin else {
            let path = self.spec.as_deref().expect("clap requires a spec or a builtin");
            return Ok(Model::Spec(read_spec(path)?));
        };
        let (case, eta) = match b {
            Builtin::Independence => (BivariateCase::Independence, 0.5),
            Builtin::Gaussian => {
                let rho = required("rho", self.rho, b)?;
                if !(0.0..1.0).contains(&rho) {
                    return Err(Error::Domain(format!("rho must lie in [0, 1), got {rho}")));
                }
                (BivariateCase::Gaussian { rho }, (1.0 + rho) / 2.0)
            }
            Builtin::Ilog => {
                let measure = ExponentMeasure::logistic(required("alpha", self.alpha, b)?)?;
                (BivariateCase::InvertedEv { measure }, 1.0 / measure.stdf(1.0, 1.0))
            }
            Builtin::Logistic => {
                let pc = PairCopula::ev_logistic(required("alpha", self.alpha, b)?)?;
                (BivariateCase::from_pair(&pc)?, 1.0)
            }
            Builtin::Alog => {
                let alpha = required("alpha", self.alpha, b)?;
                if !(alpha > 0.0 && alpha < 1.0) {
                    return Err(Error::Domain(format!("alpha must lie in (0, 1), got {alpha}")));
                }
                (BivariateCase::AsymmetricLogistic { alpha }, 1.0)
            }
        };
        Ok(Model::Builtin { case, eta })
    }
}

impl Model {
    pub fn dim(&self) -> usize {
        match self {
            Model::Spec(s) => s.dim(),
            Model::Builtin { .. } => 2,
        }
    }

    pub fn gauge(&self) -> Result<Gauge> {
        match self {
            Model::Spec(s) => gauge_for_spec(s),
            Model::Builtin { case, .. } => gauge_bivariate(*case),
        }
    }
}
