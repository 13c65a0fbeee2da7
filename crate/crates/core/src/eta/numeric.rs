//! Numerical minimisation of a gauge over the feasible region of `η_C`.
//!
//! The region `{x_i ≥ 1 (i ∈ C), x_i ≥ 0 (i ∉ C)}` is split into faces: each
//! coordinate is either pinned to its lower bound or free above it. A free
//! coordinate is parameterised as `x = 1 + e^y` or `x = e^y` so each face is
//! an unconstrained problem. Every face value is attainable, so the smallest
//! is an upper bound on the minimum and equals it on the face whose relative
//! interior holds the true minimiser. Searching faces explicitly catches
//! minima on the boundary, which a reparameterised search of the full
//! region can only approach asymptotically.

use super::{check_set, Diagnostics, EtaMethod, EtaResult};
use crate::error::{Error, Result};
use crate::gauge::Gauge;
use crate::optim::{nelder_mead, scan_then_golden};

const Y_MIN: f64 = -30.0;
const Y_STEP: f64 = 0.25;
const Y_TOL: f64 = 1e-12;
const STARTS: usize = 8;
const SPREAD_FLAG: f64 = 1e-4;

struct Face<'a> {
    g: &'a Gauge,
    base: Vec<f64>,
    free: Vec<usize>,
    evals: usize,
}

impl Face<'_> {
    fn point(&self, y: &[f64]) -> Vec<f64> {
        let mut x = self.base.clone();
        for (&i, &yi) in self.free.iter().zip(y) {
            x[i] = self.base[i] + yi.exp();
        }
        x
    }

    fn value(&mut self, y: &[f64]) -> f64 {
        self.evals += 1;
        let v = self.g.eval(&self.point(y));
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    }

    fn grid(&self, y_max: f64) -> Vec<f64> {
        let n = ((y_max - Y_MIN) / Y_STEP).ceil().max(1.0) as usize;
        (0..=n).map(|k| Y_MIN + k as f64 * Y_STEP).collect()
    }

    /// Minimise coordinate `k` of `y` with the others held fixed.
    fn line(&mut self, y: &mut [f64], k: usize, y_max: f64) -> f64 {
        let grid = self.grid(y_max);
        let mut probe = y.to_vec();
        let (best, v) = scan_then_golden(
            |t| {
                probe[k] = t;
                self.value(&probe)
            },
            &grid,
            Y_TOL,
        );
        y[k] = best;
        v
    }

    /// Returns (best value, best y, relative spread across starts).
    fn solve(&mut self, y_max: f64) -> (f64, Vec<f64>, f64) {
        let k = self.free.len();
        if k == 0 {
            return (self.value(&[]), Vec::new(), 0.0);
        }
        if k == 1 {
            let mut y = vec![0.0];
            let v = self.line(&mut y, 0, y_max);
            return (v, y, 0.0);
        }
        let mut starts: Vec<Vec<f64>> = (0..STARTS)
            .map(|s| {
                let t = -6.0 + (y_max + 6.0) * s as f64 / (STARTS - 1) as f64;
                vec![t; k]
            })
            .collect();
        starts.push(vec![-20.0; k]);

        let mut results: Vec<(f64, Vec<f64>)> = Vec::with_capacity(starts.len());
        for s in starts {
            let r = nelder_mead(|y| self.value(y), &s, 1.0, 1e-13, 4000);
            results.push((r.fx, r.x));
        }
        results.sort_by(|a, b| a.0.total_cmp(&b.0));
        let lo = results[0].0;
        let hi = results.last().map(|r| r.0).unwrap_or(lo);
        let spread = if lo.is_finite() && hi.is_finite() { (hi - lo) / lo.abs().max(1e-300) } else { f64::INFINITY };

        // Polish the best start: coordinate sweeps, then a fresh simplex.
        let (mut best, mut y) = results.swap_remove(0);
        for _ in 0..20 {
            let before = best;
            for c in 0..k {
                best = best.min(self.line(&mut y, c, y_max));
            }
            if before - best <= 1e-15 * before.abs() {
                break;
            }
        }
        let r = nelder_mead(|y| self.value(y), &y, 0.1, 1e-15, 4000);
        if r.fx < best {
            best = r.fx;
            y = r.x;
        }
        (best, y, spread)
    }
}

/// `η_C` of an arbitrary gauge by face-wise minimisation.
pub fn eta_numeric(g: &Gauge, set: &[usize]) -> Result<EtaResult> {
    let d = g.dim();
    let set = check_set(set, d)?;
    let in_set: Vec<bool> = (0..d).map(|i| set.contains(&i)).collect();
    let lower: Vec<f64> = in_set.iter().map(|&c| if c { 1.0 } else { 0.0 }).collect();

    let reference = g.eval(&lower);
    if !(reference.is_finite() && reference > 0.0) {
        return Err(Error::Numeric(format!("gauge at the corner of the feasible region is {reference}")));
    }

    // Masks ordered by number of free coordinates so that ties keep the
    // lower-dimensional (exactly representable) face.
    let mut masks: Vec<u32> = (0..(1u32 << d)).collect();
    masks.sort_by_key(|m| m.count_ones());

    let mut best_val = f64::INFINITY;
    let mut best_x = lower.clone();
    let mut best_spread = 0.0;
    let mut evaluations = 0;
    for &mask in &masks {
        let free: Vec<usize> = (0..d).filter(|i| mask >> i & 1 == 1).collect();
        let mut face = Face {
            g,
            base: lower.clone(),
            free,
            evals: 0,
        };
        // Any minimiser satisfies x_i ≤ g(x) ≤ g(lower), bounding the search.
        let y_max = reference.max(1.0).ln() + 0.5;
        let (v, y, spread) = face.solve(y_max);
        evaluations += face.evals;
        if v < best_val - 1e-13 * best_val.abs().min(1e300) {
            best_val = v;
            best_x = face.point(&y);
            best_spread = spread;
        }
    }
    if !(best_val.is_finite() && best_val > 0.0) {
        return Err(Error::Numeric(format!("no face produced a finite minimum (best {best_val})")));
    }
    Ok(EtaResult {
        eta: 1.0 / best_val,
        argmin: best_x,
        method: EtaMethod::NumericMin,
        diagnostics: Diagnostics {
            evaluations,
            faces: masks.len(),
            spread: best_spread,
            suspicious: best_spread > SPREAD_FLAG,
            note: String::new(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauge::{gauge_bivariate, BivariateCase};
    use approx::assert_relative_eq;

    #[test]
    fn independence_half() {
        let g = gauge_bivariate(BivariateCase::Independence).unwrap();
        let r = eta_numeric(&g, &[0, 1]).unwrap();
        assert_relative_eq!(r.eta, 0.5, max_relative = 1e-12);
        assert_eq!(r.argmin, vec![1.0, 1.0]);
        assert_eq!(r.method, EtaMethod::NumericMin);
    }

    #[test]
    fn gaussian_three_quarters() {
        let g = gauge_bivariate(BivariateCase::Gaussian { rho: 0.5 }).unwrap();
        assert_relative_eq!(eta_numeric(&g, &[0, 1]).unwrap().eta, 0.75, max_relative = 1e-12);
    }

    #[test]
    fn rejects_small_sets() {
        let g = gauge_bivariate(BivariateCase::Independence).unwrap();
        assert!(eta_numeric(&g, &[0]).is_err());
        assert!(eta_numeric(&g, &[0, 2]).is_err());
    }
}
