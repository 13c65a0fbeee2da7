//! Coefficients of tail dependence `η_C`.
//!
//! With `g` the gauge of a density on exponential margins,
//!
//! `η_C = [min { g(x) : x_i ≥ 1 for i ∈ C, x_i ≥ 0 otherwise }]⁻¹`.
//!
//! [`eta_numeric`] evaluates this for any gauge. The remaining functions are
//! analytic results for particular vines; each reports through
//! [`EtaMethod`] whether it used a closed form, a one-dimensional root
//! solve or fell back to numerical minimisation.
//!
//! Index sets are 0-based slices throughout (`&[0, 2]` is the pair `{1, 3}`).

mod closed;
mod numeric;

pub use closed::{
    eta13_trivariate_ilog, eta13_trivariate_ilog_rootsolve, eta_cvine, eta_dvine, eta_dvine_ilog_closed,
    eta_mixed_trivariate, eta_trivariate_ilog_closed, eta_vine_recursion,
};
pub use numeric::eta_numeric;

use serde::Serialize;

use crate::error::{Error, Result};

/// Which path produced an [`EtaResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EtaMethod {
    ClosedForm,
    RootSolve,
    NumericMin,
}

impl EtaMethod {
    /// Short lowercase name used in CLI output.
    pub fn as_str(&self) -> &'static str {
        match self {
            EtaMethod::ClosedForm => "closed",
            EtaMethod::RootSolve => "root",
            EtaMethod::NumericMin => "numeric",
        }
    }
}

/// Summary of the work behind a numeric result.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Diagnostics {
    /// Gauge evaluations spent.
    pub evaluations: usize,
    /// Boundary faces of the feasible region that were searched.
    pub faces: usize,
    /// Relative spread of the multi-start optima on the face that won.
    pub spread: f64,
    /// True when `spread` exceeds `1e-4`.
    pub suspicious: bool,
    /// Free-form remark, e.g. why a fallback was taken.
    pub note: String,
}

/// A coefficient of tail dependence and where the minimum of the gauge sits.
#[derive(Debug, Clone, Serialize)]
pub struct EtaResult {
    pub eta: f64,
    /// Minimiser `x*` of the gauge over the feasible region; `min_{i∈C} x*_i = 1`.
    pub argmin: Vec<f64>,
    pub method: EtaMethod,
    pub diagnostics: Diagnostics,
}

impl EtaResult {
    pub(crate) fn analytic(eta: f64, argmin: Vec<f64>, method: EtaMethod) -> Self {
        EtaResult {
            eta,
            argmin,
            method,
            diagnostics: Diagnostics::default(),
        }
    }
}

/// Parse a set written as digits (`"13"`) or comma-separated 1-based indices
/// (`"1,3"`) into sorted 0-based indices below `d`.
pub fn parse_index_set(s: &str, d: usize) -> Result<Vec<usize>> {
    let s = s.trim();
    let raw: Vec<usize> = if s.contains(',') {
        s.split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::domain(format!("bad index {t:?} in set {s:?}"))))
            .collect::<Result<_>>()?
    } else {
        s.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|v| v as usize)
                    .ok_or_else(|| Error::domain(format!("bad index {c:?} in set {s:?}")))
            })
            .collect::<Result<_>>()?
    };
    let mut out = Vec::with_capacity(raw.len());
    for i in raw {
        if i == 0 || i > d {
            return Err(Error::domain(format!("index {i} outside 1..={d}")));
        }
        out.push(i - 1);
    }
    out.sort_unstable();
    out.dedup();
    if out.is_empty() {
        return Err(Error::domain("empty index set"));
    }
    Ok(out)
}

pub(crate) fn check_set(set: &[usize], d: usize) -> Result<Vec<usize>> {
    let mut s = set.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.len() < 2 {
        return Err(Error::domain("η needs an index set with at least two elements"));
    }
    if let Some(&i) = s.iter().find(|&&i| i >= d) {
        return Err(Error::domain(format!("index {i} outside 0..{d}")));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_sets() {
        assert_eq!(parse_index_set("13", 3).unwrap(), vec![0, 2]);
        assert_eq!(parse_index_set("3,1", 3).unwrap(), vec![0, 2]);
        assert!(parse_index_set("14", 3).is_err());
        assert!(parse_index_set("x", 3).is_err());
        assert!(check_set(&[1], 3).is_err());
    }
}
