//! Gauges of D-vines and C-vines whose pair copulas are all IEV.
//!
//! Both recursions express the gauge of a variable set `S` through three
//! sub-vines: with `{a, b}` the pair joined by the last tree and `R = S∖{a,b}`,
//!
//! `g_S = g_R + ℓ_{ab|R}(g_{S∖b} − g_R, g_{S∖a} − g_R)`.
//!
//! For D-vines `S` is an interval and `{a, b}` its end points, giving a
//! triangular table over intervals. For C-vines `S` is `{1..k} ∪ {j}` and
//! `{a, b} = {k, j}`.

use super::{Gauge, Kind};
use crate::copula::Family;
use crate::error::{Error, Result};
use crate::measure::ExponentMeasure;
use crate::vine::{Structure, VineSpec};

#[derive(Debug, Clone)]
pub(super) struct VineGauge {
    structure: Structure,
    d: usize,
    /// Edge measures indexed `[i * d + j]` with 0-based `i < j`: the D-vine
    /// edge `{i+1, j+1 | i+2..j}` or the C-vine edge `{i+1, j+1 | 1..i}`.
    edges: Vec<ExponentMeasure>,
}

impl VineGauge {
    fn from_spec(spec: &VineSpec, structure: Structure) -> Result<Self> {
        let d = spec.dim();
        let placeholder = ExponentMeasure::Logistic { alpha: 1.0 };
        let mut edges = vec![placeholder; d * d];
        for (label, pc) in spec.edges() {
            if pc.family == Family::Ev && !pc.measure.is_independence() {
                return Err(Error::UnsupportedMeasure(format!(
                    "vine gauge recursion needs IEV pair copulas; edge {label} is EV"
                )));
            }
            edges[(label.a - 1) * d + (label.b - 1)] = pc.measure;
        }
        Ok(VineGauge { structure, d, edges })
    }

    #[inline]
    fn edge(&self, i: usize, j: usize) -> &ExponentMeasure {
        &self.edges[i * self.d + j]
    }

    pub(super) fn eval(&self, x: &[f64]) -> f64 {
        match self.structure {
            Structure::Cvine => self.eval_cvine(x),
            _ => self.eval_dvine(x),
        }
    }

    fn eval_dvine(&self, x: &[f64]) -> f64 {
        let d = self.d;
        // g[i * d + j] holds the gauge of the interval {i..j}.
        let mut g = vec![0.0; d * d];
        for i in 0..d {
            g[i * d + i] = x[i];
        }
        for len in 1..d {
            for i in 0..d - len {
                let j = i + len;
                let inner = if len >= 2 { g[(i + 1) * d + (j - 1)] } else { 0.0 };
                let left = (g[i * d + (j - 1)] - inner).max(0.0);
                let right = (g[(i + 1) * d + j] - inner).max(0.0);
                g[i * d + j] = inner + self.edge(i, j).stdf(left, right);
            }
        }
        g[d - 1]
    }

    fn eval_cvine(&self, x: &[f64]) -> f64 {
        let d = self.d;
        // prefix[k] = g({1..k}); extra[j] = g({1..k} ∪ {j}) for the current k.
        let mut prefix = vec![0.0; d + 1];
        let mut extra: Vec<f64> = x.to_vec();
        prefix[1] = x[0];
        for k in 1..d {
            // Promote extra from {1..k-1} ∪ {j} to {1..k} ∪ {j}, j > k (1-based).
            let (p_prev, p_k) = (prefix[k - 1], prefix[k]);
            for j in k..d {
                let left = (p_k - p_prev).max(0.0);
                let right = (extra[j] - p_prev).max(0.0);
                extra[j] = p_prev + self.edge(k - 1, j).stdf(left, right);
            }
            prefix[k + 1] = extra[k];
        }
        prefix[d]
    }
}

fn build(spec: &VineSpec, structure: Structure) -> Result<Gauge> {
    if spec.structure() != structure && !(spec.dim() == 3 && structure == Structure::Dvine && spec.structure() == Structure::Trivariate) {
        return Err(Error::spec(
            "/structure",
            format!("expected a {structure:?} specification, got {:?}", spec.structure()),
        ));
    }
    let g = VineGauge::from_spec(spec, structure)?;
    let name = match structure {
        Structure::Cvine => format!("C-vine d={} (all IEV)", spec.dim()),
        _ => format!("D-vine d={} (all IEV)", spec.dim()),
    };
    Ok(Gauge::new(spec.dim(), Kind::Vine(g), name))
}

/// Gauge of a D-vine with IEV pair copulas; a trivariate spec counts as a 3-d D-vine.
pub fn gauge_dvine(spec: &VineSpec) -> Result<Gauge> {
    build(spec, Structure::Dvine)
}

/// Gauge of a C-vine with IEV pair copulas.
pub fn gauge_cvine(spec: &VineSpec) -> Result<Gauge> {
    build(spec, Structure::Cvine)
}
