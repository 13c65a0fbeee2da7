//! Gauges of lower-dimensional margins by minimisation over dropped coordinates.
//!
//! `g_C(x_C) = min { g(x) : x_i ≥ 0 for i ∉ C }`. Because every gauge of a
//! density with exponential margins satisfies `g(x) ≥ max_i x_i`, any
//! minimiser has dropped coordinates no larger than the gauge value at the
//! current iterate, which gives a finite, scale-equivariant search bracket.

use super::{Gauge, Kind};
use crate::error::{Error, Result};
use crate::optim::{nelder_mead, scan_then_golden};

const ARG_TOL: f64 = 1e-10;
const SWEEP_TOL: f64 = 1e-8;
const MAX_SWEEPS: usize = 200;

/// Result of one projected evaluation.
#[derive(Debug, Clone)]
pub struct Projection {
    pub value: f64,
    /// Values of the dropped coordinates at the minimum, in their original order.
    pub argmin: Vec<f64>,
    pub sweeps: usize,
    pub converged: bool,
}

#[derive(Debug, Clone)]
pub(super) struct ProjectedGauge {
    inner: Gauge,
    keep: Vec<usize>,
    drop: Vec<usize>,
}

/// Grid of relative positions in `[0, 1]`: zero, log-spaced points down to
/// `1e-12`, and a coarse linear grid.
fn unit_grid() -> Vec<f64> {
    let mut g: Vec<f64> = (0..=48).map(|k| 10f64.powf(-(k as f64) / 4.0)).collect();
    g.extend((1..16).map(|i| i as f64 / 16.0));
    g.push(0.0);
    g.sort_by(f64::total_cmp);
    g.dedup();
    g
}

impl ProjectedGauge {
    fn full_point(&self, kept: &[f64], dropped: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; self.inner.dim()];
        for (&i, &v) in self.keep.iter().zip(kept) {
            x[i] = v;
        }
        for (&i, &v) in self.drop.iter().zip(dropped) {
            x[i] = v;
        }
        x
    }

    /// Minimise one dropped coordinate with the others fixed.
    fn line_min(&self, x: &mut [f64], coord: usize, grid: &[f64]) -> f64 {
        x[coord] = 0.0;
        let at_zero = self.inner.eval(x);
        let mut current = x.to_vec();
        let bound = at_zero.max(f64::MIN_POSITIVE);
        let pts: Vec<f64> = grid.iter().map(|t| t * bound).collect();
        let (z, v) = scan_then_golden(
            |z| {
                current[coord] = z;
                self.inner.eval(&current)
            },
            &pts,
            ARG_TOL * bound,
        );
        x[coord] = z;
        v
    }

    pub(super) fn project(&self, kept: &[f64]) -> Projection {
        let grid = unit_grid();
        let mut x = self.full_point(kept, &vec![0.0; self.drop.len()]);
        if self.drop.len() == 1 {
            let value = self.line_min(&mut x, self.drop[0], &grid);
            return Projection {
                value,
                argmin: vec![x[self.drop[0]]],
                sweeps: 1,
                converged: true,
            };
        }

        // Cyclic coordinate descent from the origin of the dropped block.
        let mut value = self.inner.eval(&x);
        let mut sweeps = 0;
        let mut converged = false;
        while sweeps < MAX_SWEEPS {
            sweeps += 1;
            let before = value;
            for &c in &self.drop {
                value = self.line_min(&mut x, c, &grid);
            }
            if before - value <= SWEEP_TOL * before.abs().max(f64::MIN_POSITIVE) {
                converged = true;
                break;
            }
        }

        // Nelder–Mead polish on the dropped block, clamped to the orthant.
        let scale = value.max(f64::MIN_POSITIVE);
        let start: Vec<f64> = self.drop.iter().map(|&c| x[c] / scale).collect();
        let mut probe = x.clone();
        let nm = nelder_mead(
            |z| {
                for (&c, &v) in self.drop.iter().zip(z) {
                    probe[c] = v.max(0.0) * scale;
                }
                self.inner.eval(&probe)
            },
            &start,
            0.05,
            1e-14,
            2000,
        );
        if nm.fx < value {
            for (&c, &v) in self.drop.iter().zip(&nm.x) {
                x[c] = v.max(0.0) * scale;
            }
            value = self.inner.eval(&x);
            // One more coordinate pass from the polished point.
            for &c in &self.drop {
                let before = x[c];
                let v = self.line_min(&mut x, c, &grid);
                if v > value {
                    x[c] = before;
                } else {
                    value = v;
                }
            }
        }
        Projection {
            value,
            argmin: self.drop.iter().map(|&c| x[c]).collect(),
            sweeps,
            converged,
        }
    }
}

/// Gauge of the margin on the 0-based coordinates `keep`.
pub fn gauge_project(g: &Gauge, keep: &[usize]) -> Result<Gauge> {
    let d = g.dim();
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.is_empty() || keep.len() >= d || keep.iter().any(|&i| i >= d) {
        return Err(Error::domain(format!(
            "projection set must be a non-empty proper subset of 0..{d}, got {keep:?}"
        )));
    }
    let drop: Vec<usize> = (0..d).filter(|i| !keep.contains(i)).collect();
    let name = format!(
        "{} projected onto {{{}}}",
        g.provenance(),
        keep.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
    );
    let dim = keep.len();
    Ok(Gauge::new(
        dim,
        Kind::Projected(Box::new(ProjectedGauge {
            inner: g.clone(),
            keep,
            drop,
        })),
        name,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauge::{gauge_bivariate, gauge_trivariate, BivariateCase};
    use crate::copula::{Family, PairCopula};
    use crate::measure::ExponentMeasure;
    use crate::vine::VineSpec;
    use approx::assert_relative_eq;

    fn all_iev(a: f64, b: f64, c: f64) -> Gauge {
        let s = VineSpec::trivariate(
            PairCopula::iev_logistic(a).unwrap(),
            PairCopula::iev_logistic(b).unwrap(),
            PairCopula::iev_logistic(c).unwrap(),
        )
        .unwrap();
        gauge_trivariate(&s).unwrap()
    }

    #[test]
    fn projection_onto_first_pair_is_pair_gauge() {
        let g = all_iev(0.4, 0.6, 0.5);
        let p = gauge_project(&g, &[0, 1]).unwrap();
        let pair = gauge_bivariate(BivariateCase::InvertedEv {
            measure: ExponentMeasure::logistic(0.4).unwrap(),
        })
        .unwrap();
        for &(a, b) in &[(1.0, 1.0), (0.3, 2.0), (2.5, 0.1)] {
            assert_relative_eq!(p.eval(&[a, b]), pair.eval(&[a, b]), max_relative = 1e-6);
        }
    }

    #[test]
    fn projection_onto_single_coordinate_is_identity() {
        let g = all_iev(0.3, 0.5, 0.7);
        for i in 0..3 {
            let p = gauge_project(&g, &[i]).unwrap();
            assert_relative_eq!(p.try_eval(&[1.3]).unwrap(), 1.3, max_relative = 1e-8);
        }
    }

    #[test]
    fn mixed_case_projection_attains_one() {
        let pc = |f, a| PairCopula::new(f, ExponentMeasure::logistic(a).unwrap()).unwrap();
        let s = VineSpec::trivariate(pc(Family::Iev, 0.5), pc(Family::Iev, 0.25), pc(Family::Ev, 0.5)).unwrap();
        let g = gauge_trivariate(&s).unwrap();
        let p = gauge_project(&g, &[0, 2]).unwrap();
        assert_relative_eq!(p.eval(&[1.0, 1.0]), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn rejects_bad_sets() {
        let g = all_iev(0.5, 0.5, 0.5);
        assert!(gauge_project(&g, &[]).is_err());
        assert!(gauge_project(&g, &[0, 1, 2]).is_err());
        assert!(gauge_project(&g, &[3]).is_err());
    }
}
