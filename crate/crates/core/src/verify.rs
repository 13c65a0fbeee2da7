//! Self-checks of the analytic results against numerical evaluation.
//!
//! The quick suite compares closed forms, root solves and recursions with
//! the generic minimiser on small parameter grids. The full suite adds Monte
//! Carlo estimates of `η` and cloud coverage. Each check reports a single
//! pass/fail row.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::copula::PairCopula;
use crate::empirical::{cloud_coverage, default_threshold, eta_hat};
use crate::error::Result;
use crate::eta::{
    eta13_trivariate_ilog, eta13_trivariate_ilog_rootsolve, eta_cvine, eta_dvine, eta_dvine_ilog_closed,
    eta_mixed_trivariate, eta_numeric, eta_trivariate_ilog_closed,
};
use crate::gauge::{gauge_bivariate, gauge_for_spec, BivariateCase};
use crate::measure::ExponentMeasure;
use crate::simulate::{sample_vine, scale_cloud};
use crate::vine::{Structure, VineSpec};

/// Which checks to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Quick,
    Full,
}

/// Outcome of one check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

/// Options for [`run_suite`].
#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub suite: Suite,
    /// Perturb one reference constant so that the gallery check must fail.
    /// Used to confirm that failures reach the exit code.
    pub corrupt: bool,
}

fn timed(name: &str, f: impl FnOnce() -> Result<(bool, String)>) -> CheckResult {
    let t = Instant::now();
    let (passed, detail) = match f() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    CheckResult {
        name: name.to_string(),
        passed,
        detail,
        seconds: t.elapsed().as_secs_f64(),
    }
}

/// Largest absolute difference over a list, with the case that produced it.
fn worst(diffs: Vec<(f64, String)>) -> (f64, String) {
    diffs
        .into_iter()
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .unwrap_or((0.0, String::new()))
}

fn check_gallery(corrupt: bool) -> Result<(bool, String)> {
    let ilog_ref = if corrupt { 2f64.powf(-0.5) + 1e-3 } else { 2f64.powf(-0.5) };
    let cases = [
        ("independence", BivariateCase::Independence, 0.5),
        ("gaussian(0.5)", BivariateCase::Gaussian { rho: 0.5 }, 0.75),
        (
            "inverted logistic(0.5)",
            BivariateCase::InvertedEv {
                measure: ExponentMeasure::logistic(0.5)?,
            },
            ilog_ref,
        ),
        ("logistic(0.5)", BivariateCase::from_pair(&PairCopula::ev_logistic(0.5)?)?, 1.0),
        (
            "asymmetric logistic",
            BivariateCase::from_pair(&PairCopula::new(
                crate::copula::Family::Ev,
                ExponentMeasure::asymmetric_logistic(0.5, 0.3, 0.6)?,
            )?)?,
            1.0,
        ),
    ];
    let mut diffs = Vec::new();
    for (name, case, want) in cases {
        let g = gauge_bivariate(case)?;
        let got = eta_numeric(&g, &[0, 1])?.eta;
        diffs.push(((got - want).abs(), format!("{name}: {got} vs {want}")));
    }
    let (d, at) = worst(diffs);
    Ok((d <= 1e-6, format!("max |Δη| = {d:.2e} ({at})")))
}

fn ilog3(a: f64, b: f64, c: f64) -> Result<VineSpec> {
    VineSpec::trivariate(PairCopula::iev_logistic(a)?, PairCopula::iev_logistic(b)?, PairCopula::iev_logistic(c)?)
}

fn check_trivariate_closed(grid: &[f64]) -> Result<(bool, String)> {
    let cases: Vec<(f64, f64, f64)> = grid
        .iter()
        .flat_map(|&a| grid.iter().flat_map(move |&b| grid.iter().map(move |&c| (a, b, c))))
        .collect();
    let diffs = cases
        .par_iter()
        .map(|&(a, b, c)| -> Result<(f64, f64, String)> {
            let g = gauge_for_spec(&ilog3(a, b, c)?)?;
            let r = eta_numeric(&g, &[0, 1, 2])?;
            let want = eta_trivariate_ilog_closed(a, b, c)?;
            let off = r.argmin.iter().map(|x| (x - 1.0).abs()).fold(0.0, f64::max);
            Ok(((r.eta - want).abs(), off, format!("({a},{b},{c})")))
        })
        .collect::<Result<Vec<_>>>()?;
    let n = diffs.len();
    let max_off = diffs.iter().map(|t| t.1).fold(0.0, f64::max);
    let (d, at) = worst(diffs.into_iter().map(|(d, _, at)| (d, at)).collect());
    Ok((
        d <= 1e-6 && max_off <= 1e-4,
        format!("{n} cases, worst {d:.2e} at {at}; argmin max |x − 1| = {max_off:.1e}"),
    ))
}

fn check_eta13(grid: &[f64]) -> Result<(bool, String)> {
    let mut diffs = Vec::new();
    let mut in_range = true;
    for &a in grid {
        for &c in grid {
            let closed = eta13_trivariate_ilog(a, a, c)?.eta;
            let root = eta13_trivariate_ilog_rootsolve(a, a, c)?.eta;
            in_range &= root > 0.5 && root < 1.0;
            diffs.push(((closed - root).abs(), format!("α={a}, γ={c}")));
        }
    }
    let (d, at) = worst(diffs);
    Ok((d <= 1e-8 && in_range, format!("worst {d:.2e} at {at}; all in (0.5,1): {in_range}")))
}

fn check_recursion(alphas: &[f64]) -> Result<(bool, String)> {
    let mut diffs = Vec::new();
    let mut monotone = true;
    for &a in alphas {
        let pc = PairCopula::iev_logistic(a)?;
        let mut prev = f64::INFINITY;
        for d in 3..=8 {
            let want = eta_dvine_ilog_closed(a, d)?;
            let dv = eta_dvine(&VineSpec::uniform(d, Structure::Dvine, pc)?)?.eta;
            let cv = eta_cvine(&VineSpec::uniform(d, Structure::Cvine, pc)?)?.eta;
            monotone &= dv < prev;
            prev = dv;
            diffs.push(((dv - want).abs().max((cv - want).abs()), format!("α={a}, d={d}")));
        }
    }
    let (d, at) = worst(diffs);
    Ok((d <= 1e-10 && monotone, format!("worst {d:.2e} at {at}; decreasing in d: {monotone}")))
}

fn check_mixed(pairs: &[(f64, f64)]) -> Result<(bool, String)> {
    use crate::copula::Family::{Ev, Iev};
    let patterns = [(Iev, Iev, Ev), (Ev, Iev, Iev), (Ev, Iev, Ev), (Ev, Ev, Iev), (Ev, Ev, Ev)];
    let mut diffs = Vec::new();
    let mut ordered = true;
    for &(a, b) in pairs {
        let gamma = 0.6;
        for (f12, f23, f13) in patterns {
            let pc = |f, t| -> Result<PairCopula> { PairCopula::new(f, ExponentMeasure::logistic(t)?) };
            let spec = VineSpec::trivariate(pc(f12, a)?, pc(f23, b)?, pc(f13, gamma)?)?;
            let want = match (f12, f23, f13) {
                (Iev, Iev, Ev) => 2f64.powf(-a).min(2f64.powf(-b)),
                (Ev, Iev, _) => 2f64.powf(-b),
                _ => 1.0,
            };
            let analytic = eta_mixed_trivariate(&spec, &[0, 1, 2])?.eta;
            let numeric = eta_numeric(&gauge_for_spec(&spec)?, &[0, 1, 2])?.eta;
            let tag = format!("({f12:?},{f23:?},{f13:?}) α={a} β={b}");
            diffs.push(((analytic - want).abs().max((numeric - want).abs()), tag));
            if (f12, f23, f13) == (Ev, Iev, Ev) {
                ordered &= eta_mixed_trivariate(&spec, &[0, 2])?.eta > analytic;
            }
        }
    }
    let (d, at) = worst(diffs);
    Ok((d <= 1e-6 && ordered, format!("worst {d:.2e} at {at}; η13 > η123 for (EV,IEV,EV): {ordered}")))
}

/// For `α ≥ 0.3` the inverse must reproduce `u` to `1e-9`. Below that the
/// h-function saturates, so the error is measured against the conditioning
/// bound `1e-9 + 8ε / c(u, v)` instead.
fn check_hinv(grid: &[f64]) -> Result<(bool, String)> {
    let mut forward: f64 = 0.0;
    let mut conditioned: f64 = 0.0;
    for &alpha in &[0.1, 0.5, 0.9] {
        for pc in [PairCopula::ev_logistic(alpha)?, PairCopula::iev_logistic(alpha)?] {
            for &u in grid {
                for &v in grid {
                    let err = (pc.hinv(pc.hfunc(u, v)?, v)? - u).abs();
                    if alpha >= 0.3 {
                        forward = forward.max(err);
                    }
                    conditioned = conditioned.max(err / (1e-9 + 8.0 * f64::EPSILON / pc.density(u, v)?));
                }
            }
        }
    }
    Ok((
        forward < 1e-9 && conditioned <= 1.0,
        format!("max |h⁻¹(h(u|v)|v) − u| = {forward:.2e} for α ≥ 0.3; worst error / conditioning bound = {conditioned:.2}"),
    ))
}

fn check_mc_eta(n: usize) -> Result<(bool, String)> {
    let cloud = sample_vine(&ilog3(0.5, 0.5, 0.5)?, n, 20_240_501)?;
    let want123 = eta_trivariate_ilog_closed(0.5, 0.5, 0.5)?;
    let want13 = eta13_trivariate_ilog(0.5, 0.5, 0.5)?.eta;
    let e123 = eta_hat(&cloud, &[0, 1, 2], default_threshold(&cloud, &[0, 1, 2]))?;
    let e13 = eta_hat(&cloud, &[0, 2], default_threshold(&cloud, &[0, 2]))?;
    let ok = (e123.estimate - want123).abs() <= 0.05 && (e13.estimate - want13).abs() <= 0.05;
    Ok((
        ok,
        format!(
            "η̂123 = {:.4} (±{:.4}) vs {want123:.6}; η̂13 = {:.4} (±{:.4}) vs {want13:.6}",
            e123.estimate, e123.stderr, e13.estimate, e13.stderr
        ),
    ))
}

fn check_coverage(n: usize) -> Result<(bool, String)> {
    let specs = [
        ("independence", VineSpec::uniform(2, Structure::Dvine, PairCopula::iev_logistic(1.0)?)?),
        ("inverted logistic", VineSpec::uniform(2, Structure::Dvine, PairCopula::iev_logistic(0.5)?)?),
        ("trivariate IEV", ilog3(0.5, 0.5, 0.5)?),
    ];
    let mut lowest = (f64::INFINITY, "");
    for (name, spec) in specs {
        let cloud = scale_cloud(&sample_vine(&spec, n, 7)?)?;
        let cov = cloud_coverage(&cloud, &gauge_for_spec(&spec)?, 0.15)?;
        if cov < lowest.0 {
            lowest = (cov, name);
        }
    }
    Ok((lowest.0 >= 0.99, format!("lowest coverage {:.4} ({})", lowest.0, lowest.1)))
}

/// Run the chosen suite. The caller decides how to report failures.
pub fn run_suite(opts: VerifyOptions) -> Vec<CheckResult> {
    let coarse = [0.2, 0.5, 0.8];
    let nine: Vec<f64> = (1..=9).map(|k| k as f64 / 10.0).collect();
    let unit = [0.001, 0.1, 0.3, 0.5, 0.7, 0.9, 0.999];
    let mut out = vec![
        timed("bivariate gallery", || check_gallery(opts.corrupt)),
        timed("trivariate IEV closed form vs minimiser", || check_trivariate_closed(&coarse)),
        timed("eta13 root solve vs closed form", || check_eta13(&nine)),
        timed("D-/C-vine recursion vs closed form", || check_recursion(&nine)),
        timed("mixed EV/IEV trivariate", || check_mixed(&[(0.3, 0.7), (0.7, 0.3)])),
        timed("h-function inverse round trip", || check_hinv(&unit)),
    ];
    if opts.suite == Suite::Full {
        out.push(timed("trivariate IEV Monte Carlo eta", || check_mc_eta(500_000)));
        out.push(timed("scaled cloud coverage", || check_coverage(100_000)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corruption_is_detected() {
        let r = check_gallery(true).unwrap();
        assert!(!r.0, "{}", r.1);
    }
}
