//! Analytic `η` results for trivariate vines and for D- and C-vines.

use super::{check_set, eta_numeric, EtaMethod, EtaResult};
use crate::copula::Family;
use crate::error::{Error, Result};
use crate::gauge::{gauge_cvine, gauge_dvine, gauge_trivariate, TrivariatePattern};
use crate::gauge::trivariate_canonical;
use crate::measure::ExponentMeasure;
use crate::optim::{bisect, scan_then_golden};
use crate::vine::{Structure, VineSpec};

const ROOT_LO: f64 = 1e-12;
const ROOT_HI: f64 = 1.0 - 1e-12;
const ROOT_TOL: f64 = 1e-12;

fn check_open(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must lie in (0, 1), got {v}")))
    }
}

fn check_half_open(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v <= 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must lie in (0, 1], got {v}")))
    }
}

/// Root in `(0, 1)` of a function that is negative near 0 and positive near 1.
///
/// Bisects on `[1e-12, 1 − 1e-12]` when that brackets the root. Roots below
/// `1e-12` occur (for `η₁₃` with `α` near one and `γ` near zero they fall
/// around `1e-29`), so otherwise the search continues on `ln v` down to
/// `v = 1e-300`.
fn unit_root(f: impl Fn(f64) -> f64) -> Result<f64> {
    if f(ROOT_LO) <= 0.0 {
        return bisect(&f, ROOT_LO, ROOT_HI, ROOT_TOL);
    }
    let t = bisect(|t: f64| f(t.exp()), -300.0 * std::f64::consts::LN_10, ROOT_LO.ln(), ROOT_TOL)?;
    Ok(t.exp())
}

/// Symmetric logistic stable tail dependence function `(a^{1/γ} + b^{1/γ})^γ`.
fn lg(gamma: f64, a: f64, b: f64) -> f64 {
    ExponentMeasure::Logistic { alpha: gamma }.stdf(a, b)
}

/// `η₁₂₃` of the trivariate vine with inverted logistic pair copulas
/// `(α, β, γ)` on `(c12, c23, c13|2)`; the gauge is minimised at `x = 1`.
///
/// Parameters equal to one are accepted as the continuous limit.
pub fn eta_trivariate_ilog_closed(alpha: f64, beta: f64, gamma: f64) -> Result<f64> {
    check_half_open("alpha", alpha)?;
    check_half_open("beta", beta)?;
    check_half_open("gamma", gamma)?;
    let a = 2f64.powf(alpha) - 1.0;
    let b = 2f64.powf(beta) - 1.0;
    Ok(1.0 / (1.0 + lg(gamma, a, b)))
}

/// `g(1, v, 1)` and its derivative in `v` for the inverted logistic vine.
fn ilog_profile(alpha: f64, beta: f64, gamma: f64, v: f64) -> (f64, f64) {
    let f1 = lg(alpha, 1.0, v) - v;
    let f2 = lg(beta, v, 1.0) - v;
    let df1 = ((alpha - 1.0) * v.powf(-1.0 / alpha).ln_1p()).exp() - 1.0;
    let df2 = ((beta - 1.0) * v.powf(-1.0 / beta).ln_1p()).exp() - 1.0;
    // Weights f_i^{1/γ} / (f1^{1/γ} + f2^{1/γ}), computed without overflow.
    let w1 = 1.0 / (1.0 + ((f2.ln() - f1.ln()) / gamma).exp());
    let w2 = 1.0 - w1;
    let value = v + lg(gamma, f1, f2);
    let slope = 1.0 + w1.powf(1.0 - gamma) * df1 + w2.powf(1.0 - gamma) * df2;
    (value, slope)
}

/// `η₁₃` of the inverted logistic trivariate vine by bisection on the
/// stationarity condition `d g(1, v, 1)/dv = 0`, whose root in `(0, 1)` is unique.
pub fn eta13_trivariate_ilog_rootsolve(alpha: f64, beta: f64, gamma: f64) -> Result<EtaResult> {
    check_open("alpha", alpha)?;
    check_open("beta", beta)?;
    check_open("gamma", gamma)?;
    let v = unit_root(|v| ilog_profile(alpha, beta, gamma, v).1)?;
    let (g, _) = ilog_profile(alpha, beta, gamma, v);
    Ok(EtaResult::analytic(1.0 / g, vec![1.0, v, 1.0], EtaMethod::RootSolve))
}

/// `η₁₃` of the inverted logistic trivariate vine; closed form when `α = β`.
pub fn eta13_trivariate_ilog(alpha: f64, beta: f64, gamma: f64) -> Result<EtaResult> {
    if alpha != beta {
        return eta13_trivariate_ilog_rootsolve(alpha, beta, gamma);
    }
    check_open("alpha", alpha)?;
    check_open("gamma", gamma)?;
    let q = 1.0 - 2f64.powf(-gamma);
    let k = q.powf(-1.0 / (1.0 - alpha)) - 1.0;
    let v = k.powf(-alpha);
    let two_g = 2f64.powf(gamma);
    let eta = k.powf(alpha) / (1.0 - two_g + two_g * q.powf(-alpha / (1.0 - alpha)));
    Ok(EtaResult::analytic(eta, vec![1.0, v, 1.0], EtaMethod::ClosedForm))
}

/// Root of `(1 + v^{1/β})^β − (1 − v)/α − v` on `(0, 1)` and the resulting
/// `η₁₃ = (1 + v^{1/β})^{−β}` for the logistic / inverted logistic / EV vine.
fn eta13_ev_iev_ev(alpha: f64, beta: f64) -> Result<EtaResult> {
    let f = |v: f64| lg(beta, 1.0, v) - (1.0 - v) / alpha - v;
    let v = unit_root(f)?;
    Ok(EtaResult::analytic(1.0 / lg(beta, 1.0, v), vec![1.0, v, 1.0], EtaMethod::RootSolve))
}

/// `η₁₃` for logistic EV `c12(α)`, inverted logistic `c23(β)` and `c13|2(γ)`
/// via the root of `d g(1, v, 1)/dv` on `(0, 1)`.
fn eta13_ev_iev_iev(alpha: f64, beta: f64, gamma: f64) -> Result<EtaResult> {
    let profile = |v: f64| {
        let a = (1.0 - v) / alpha;
        let b = lg(beta, v, 1.0) - v;
        let db = ((beta - 1.0) * v.powf(-1.0 / beta).ln_1p()).exp() - 1.0;
        let wa = 1.0 / (1.0 + ((b.ln() - a.ln()) / gamma).exp());
        let wb = 1.0 - wa;
        let value = v + lg(gamma, a, b);
        let slope = 1.0 - wa.powf(1.0 - gamma) / alpha + wb.powf(1.0 - gamma) * db;
        (value, slope)
    };
    let v = unit_root(|v| profile(v).1)?;
    Ok(EtaResult::analytic(1.0 / profile(v).0, vec![1.0, v, 1.0], EtaMethod::RootSolve))
}

fn numeric_fallback(spec: &VineSpec, set: &[usize], why: &str) -> Result<EtaResult> {
    let g = gauge_trivariate(spec)?;
    let mut r = eta_numeric(&g, set)?;
    r.diagnostics.note = why.to_string();
    Ok(r)
}

fn mirror_point(x: Vec<f64>, mirrored: bool) -> Vec<f64> {
    if mirrored {
        x.into_iter().rev().collect()
    } else {
        x
    }
}

/// `η_C` of a trivariate vine, using the analytic result for its EV/IEV
/// pattern where one exists and numerical minimisation otherwise.
pub fn eta_mixed_trivariate(spec: &VineSpec, set: &[usize]) -> Result<EtaResult> {
    let set = check_set(set, 3)?;
    let canon = trivariate_canonical(spec)?;
    let mirrored = canon.mirrored;
    // Work in the relabelled coordinates, where x1 ↔ x3.
    let cset: Vec<usize> = if mirrored {
        let mut s: Vec<usize> = set.iter().map(|&i| 2 - i).collect();
        s.sort_unstable();
        s
    } else {
        set.clone()
    };
    let ev = |pc: &crate::copula::PairCopula| pc.family == Family::Ev && !pc.measure.is_independence();
    let closed = |eta: f64, x: Vec<f64>| Ok(EtaResult::analytic(eta, mirror_point(x, mirrored), EtaMethod::ClosedForm));
    let pair_eta = |pc: &crate::copula::PairCopula| if ev(pc) { 1.0 } else { 1.0 / pc.measure.stdf(1.0, 1.0) };

    if cset.len() == 2 && cset != [0, 2] {
        // The margin of a first-tree pair is the pair copula itself; locate
        // the dropped coordinate on the trivariate gauge for the argmin.
        let (pc, drop) = if cset == [0, 1] { (&canon.c12, 2) } else { (&canon.c23, 0) };
        let g = gauge_trivariate(spec)?;
        let mut x = vec![1.0; 3];
        let orig_drop = if mirrored { 2 - drop } else { drop };
        x[orig_drop] = 0.0;
        let bound = g.eval(&x);
        let grid: Vec<f64> = (0..=64).map(|k| bound * k as f64 / 64.0).collect();
        let (z, _) = scan_then_golden(
            |z| {
                let mut p = x.clone();
                p[orig_drop] = z;
                g.eval(&p)
            },
            &grid,
            1e-12 * bound.max(1.0),
        );
        x[orig_drop] = z;
        return Ok(EtaResult::analytic(pair_eta(pc), x, EtaMethod::ClosedForm));
    }
    let full = cset.len() == 3;
    let l12 = canon.c12.measure.logistic_alpha();
    let l23 = canon.c23.measure.logistic_alpha();
    let l13 = canon.c13.measure.logistic_alpha();

    match canon.pattern {
        TrivariatePattern::IevIevIev => match (l12, l23, l13, full) {
            (Some(a), Some(b), Some(c), true) => closed(eta_trivariate_ilog_closed(a, b, c)?, vec![1.0; 3]),
            (Some(a), Some(b), Some(c), false) if a < 1.0 && b < 1.0 && c < 1.0 => {
                let mut r = eta13_trivariate_ilog(a, b, c)?;
                r.argmin = mirror_point(r.argmin, mirrored);
                Ok(r)
            }
            _ => numeric_fallback(spec, &set, "no analytic result for these measures"),
        },
        TrivariatePattern::IevIevEv => {
            if full {
                let v12 = canon.c12.measure.stdf(1.0, 1.0);
                let v23 = canon.c23.measure.stdf(1.0, 1.0);
                closed(1.0 / v12.max(v23), vec![1.0; 3])
            } else {
                closed(1.0, vec![1.0, 0.0, 1.0])
            }
        }
        TrivariatePattern::EvIevIev => {
            if full {
                closed(1.0 / canon.c23.measure.stdf(1.0, 1.0), vec![1.0; 3])
            } else {
                match (l12, l23, l13) {
                    (Some(a), Some(b), Some(c)) if b < 1.0 && c < 1.0 => {
                        let mut r = eta13_ev_iev_iev(a, b, c)?;
                        r.argmin = mirror_point(r.argmin, mirrored);
                        Ok(r)
                    }
                    _ => numeric_fallback(spec, &set, "no analytic result for these measures"),
                }
            }
        }
        TrivariatePattern::EvIevEv => match (l12, l23) {
            (Some(a), Some(b)) if b < 1.0 => {
                if full {
                    let x1 = a * 2f64.powf(b) + 1.0 - a;
                    closed(2f64.powf(-b), vec![x1, 1.0, 1.0])
                } else {
                    let mut r = eta13_ev_iev_ev(a, b)?;
                    r.argmin = mirror_point(r.argmin, mirrored);
                    Ok(r)
                }
            }
            _ => numeric_fallback(spec, &set, "no analytic result for these measures"),
        },
        TrivariatePattern::EvEvIev | TrivariatePattern::EvEvEv => closed(1.0, vec![1.0; 3]),
    }
}

/// `η_D` of a D- or C-vine by the recursion over sub-vines, assuming each
/// sub-vine gauge is minimised at its vector of ones (singletons have `η = 1`).
pub fn eta_vine_recursion(spec: &VineSpec) -> Result<f64> {
    let d = spec.dim();
    let measure = |a: usize, b: usize, given: Vec<usize>| -> Result<ExponentMeasure> {
        let pc = spec
            .edge(a, b, &given)
            .ok_or_else(|| Error::spec("/edges", format!("missing edge {a}{b}")))?;
        if pc.family == Family::Ev && !pc.measure.is_independence() {
            return Err(Error::UnsupportedMeasure(format!(
                "η recursion needs IEV pair copulas; edge {a},{b} is EV"
            )));
        }
        Ok(pc.measure)
    };
    match spec.structure() {
        Structure::Cvine => {
            // inv_prefix[k] = 1/η of {1..k}; inv_extra[j] = 1/η of {1..k} ∪ {j}.
            let mut inv_prefix = vec![0.0; d + 1];
            let mut inv_extra = vec![1.0; d];
            inv_prefix[1] = 1.0;
            for k in 1..d {
                let (p0, p1) = (inv_prefix[k - 1], inv_prefix[k]);
                for j in k..d {
                    let m = measure(k, j + 1, (1..k).collect())?;
                    inv_extra[j] = p0 + m.stdf(p1 - p0, inv_extra[j] - p0);
                }
                inv_prefix[k + 1] = inv_extra[k];
            }
            Ok(1.0 / inv_prefix[d])
        }
        Structure::Dvine | Structure::Trivariate => {
            // inv[i][j] = 1/η of the interval {i+1..j+1}.
            let mut inv = vec![vec![0.0; d]; d];
            for (i, row) in inv.iter_mut().enumerate() {
                row[i] = 1.0;
            }
            for len in 1..d {
                for i in 0..d - len {
                    let j = i + len;
                    let inner = if len >= 2 { inv[i + 1][j - 1] } else { 0.0 };
                    let m = measure(i + 1, j + 1, (i + 2..=j).collect())?;
                    inv[i][j] = inner + m.stdf(inv[i][j - 1] - inner, inv[i + 1][j] - inner);
                }
            }
            Ok(1.0 / inv[0][d - 1])
        }
    }
}

fn eta_vine(spec: &VineSpec, structure: Structure) -> Result<EtaResult> {
    let all_logistic = spec
        .edges()
        .iter()
        .all(|(_, pc)| pc.measure.logistic_alpha().is_some());
    if all_logistic {
        let eta = eta_vine_recursion(spec)?;
        return Ok(EtaResult::analytic(eta, vec![1.0; spec.dim()], EtaMethod::ClosedForm));
    }
    let g = match structure {
        Structure::Cvine => gauge_cvine(spec)?,
        _ => gauge_dvine(spec)?,
    };
    let set: Vec<usize> = (0..spec.dim()).collect();
    let mut r = eta_numeric(&g, &set)?;
    r.diagnostics.note = "non-logistic edges: minimum location not known analytically".into();
    Ok(r)
}

/// `η_D` of a D-vine with IEV pair copulas.
pub fn eta_dvine(spec: &VineSpec) -> Result<EtaResult> {
    if spec.structure() == Structure::Cvine {
        return Err(Error::spec("/structure", "expected a D-vine specification"));
    }
    eta_vine(spec, Structure::Dvine)
}

/// `η_D` of a C-vine with IEV pair copulas.
pub fn eta_cvine(spec: &VineSpec) -> Result<EtaResult> {
    if spec.structure() != Structure::Cvine {
        return Err(Error::spec("/structure", "expected a C-vine specification"));
    }
    eta_vine(spec, Structure::Cvine)
}

/// Closed form of `η_D` for a `d`-dimensional D-vine whose pair copulas are
/// all inverted logistic with the same `α`. At `α = 1` the value is `1/d`.
pub fn eta_dvine_ilog_closed(alpha: f64, d: usize) -> Result<f64> {
    check_half_open("alpha", alpha)?;
    if d < 2 {
        return Err(Error::domain(format!("dimension must be at least 2, got {d}")));
    }
    if alpha == 1.0 {
        return Ok(1.0 / d as f64);
    }
    let q = 2f64.powf(alpha) - 1.0;
    let denom = 2.0 - 2f64.powf(alpha);
    let inv = if d % 2 == 1 {
        1.0 + q * (1.0 - q.powi(d as i32 - 1)) / denom
    } else {
        (1.0 - q.powi(d as i32)) / denom
    };
    Ok(1.0 / inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::copula::PairCopula;
    use approx::assert_relative_eq;

    #[test]
    fn ilog_closed_reference_values() {
        assert_relative_eq!(eta_trivariate_ilog_closed(0.5, 0.5, 0.5).unwrap(), 0.630602, epsilon = 1e-6);
        assert_relative_eq!(eta_trivariate_ilog_closed(1.0, 1.0, 1.0).unwrap(), 1.0 / 3.0, max_relative = 1e-15);
        assert!(eta_trivariate_ilog_closed(1e-3, 1e-3, 1e-3).unwrap() > 0.999);
        assert!(eta_trivariate_ilog_closed(0.0, 0.5, 0.5).is_err());
    }

    #[test]
    fn eta13_closed_and_root_agree() {
        let c = eta13_trivariate_ilog(0.5, 0.5, 0.5).unwrap();
        assert_eq!(c.method, EtaMethod::ClosedForm);
        assert_relative_eq!(c.eta, 0.7395391542562347, max_relative = 1e-12);
        let r = eta13_trivariate_ilog_rootsolve(0.5, 0.5, 0.5).unwrap();
        assert_eq!(r.method, EtaMethod::RootSolve);
        assert!((c.eta - r.eta).abs() < 1e-8);
    }

    #[test]
    fn dvine_closed_reference_values() {
        assert_relative_eq!(eta_dvine_ilog_closed(0.5, 2).unwrap(), 2f64.powf(-0.5), max_relative = 1e-14);
        assert_relative_eq!(eta_dvine_ilog_closed(0.5, 4).unwrap(), 0.603553, epsilon = 1e-6);
        assert_relative_eq!(eta_dvine_ilog_closed(1.0, 7).unwrap(), 1.0 / 7.0);
    }

    #[test]
    fn recursion_d3_matches_odd_closed_form() {
        let a: f64 = 0.35;
        let spec = VineSpec::uniform(3, Structure::Dvine, PairCopula::iev_logistic(a).unwrap()).unwrap();
        let want = 1.0 / (1.0 + 2f64.powf(a) * (2f64.powf(a) - 1.0));
        assert_relative_eq!(eta_dvine(&spec).unwrap().eta, want, max_relative = 1e-13);
    }
}
