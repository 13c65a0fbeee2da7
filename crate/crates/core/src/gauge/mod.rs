//! Gauge functions of limit sets on exponential margins.
//!
//! For a density with exponential margins, `−ln f(t x) ~ t g(x)` as
//! `t → ∞`, and the gauge `g` is homogeneous of order one. Its unit level set
//! describes the limit of a scaled sample cloud, and residual tail
//! coefficients are read off its minima (see [`crate::eta`]).
//!
//! Gauges are immutable evaluators and may be shared between threads.

mod bivariate;
mod mesh;
mod project;
mod trivariate;
mod vine;

pub use bivariate::{gauge_bivariate, BivariateCase};
pub use mesh::{boundary_mesh, simplex_directions, MeshRow};
pub use project::{gauge_project, Projection};
pub use trivariate::{gauge_trivariate, TrivariatePattern};
pub use vine::{gauge_cvine, gauge_dvine};

use crate::error::{Error, Result};
use crate::measure::TailOrders;
use crate::vine::{Structure, VineSpec};

use bivariate::BivariateGauge;
pub(crate) use trivariate::CanonicalTrivariate;
use project::ProjectedGauge;
use trivariate::TrivariateGauge;
use vine::VineGauge;

#[derive(Debug, Clone)]
enum Kind {
    Bivariate(BivariateGauge),
    Trivariate(TrivariateGauge),
    Vine(VineGauge),
    Projected(Box<ProjectedGauge>),
}

/// A homogeneous gauge function on `[0, ∞)^d`.
#[derive(Debug, Clone)]
pub struct Gauge {
    dim: usize,
    kind: Kind,
    provenance: String,
}

impl Gauge {
    fn new(dim: usize, kind: Kind, provenance: impl Into<String>) -> Self {
        Gauge {
            dim,
            kind,
            provenance: provenance.into(),
        }
    }

    /// Number of coordinates.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Short description of the model the gauge was derived from.
    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// Evaluate without argument checks. `x` must have length [`Self::dim`]
    /// and non-negative entries.
    ///
    /// For projected gauges this returns the best value found by the inner
    /// minimiser; use [`Self::try_eval`] to surface its diagnostics.
    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        match &self.kind {
            Kind::Bivariate(g) => g.eval(x[0], x[1]),
            Kind::Trivariate(g) => g.eval(x[0], x[1], x[2]),
            Kind::Vine(g) => g.eval(x),
            Kind::Projected(g) => g.project(x).value,
        }
    }

    /// Checked evaluation.
    pub fn try_eval(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        match &self.kind {
            Kind::Projected(g) => {
                let p = g.project(x);
                if p.converged {
                    Ok(p.value)
                } else {
                    Err(Error::Numeric(format!(
                        "projection minimiser stalled at {:?} after {} sweeps (value {})",
                        p.argmin, p.sweeps, p.value
                    )))
                }
            }
            _ => Ok(self.eval(x)),
        }
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        if let Some(v) = x.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
            return Err(Error::domain(format!("gauge arguments must be finite and non-negative, got {v}")));
        }
        Ok(())
    }

    /// The point `w / g(w)` where the ray through `w` meets `{g = 1}`.
    pub fn boundary_point(&self, w: &[f64]) -> Result<Vec<f64>> {
        self.check_point(w)?;
        if w.iter().all(|&v| v == 0.0) {
            return Err(Error::domain("direction must be non-zero"));
        }
        let g = self.try_eval(w)?;
        Ok(w.iter().map(|v| v / g).collect())
    }
}

/// Edges of a trivariate spec after the relabelling used by the gauge.
pub(crate) fn trivariate_canonical(spec: &VineSpec) -> Result<CanonicalTrivariate> {
    CanonicalTrivariate::from_spec(spec)
}

/// Gauge of a vine specification, dispatched on its structure.
pub fn gauge_for_spec(spec: &VineSpec) -> Result<Gauge> {
    if spec.dim() == 2 {
        return gauge_bivariate(BivariateCase::from_pair(&spec.edges()[0].1)?);
    }
    match spec.structure() {
        Structure::Trivariate => gauge_trivariate(spec),
        Structure::Dvine if spec.dim() == 3 => gauge_trivariate(spec),
        Structure::Dvine => gauge_dvine(spec),
        Structure::Cvine => gauge_cvine(spec),
    }
}

/// `(2 + s_m) max(a, b) − (1 + s_m) min(a, b)` with `s_m = s₁` when `a ≥ b`
/// and `s₂` otherwise; the extreme-value pair gauge.
#[inline]
pub(crate) fn switched(a: f64, b: f64, t: &TailOrders) -> f64 {
    if a >= b {
        (2.0 + t.s1) * a - (1.0 + t.s1) * b
    } else {
        (2.0 + t.s2) * b - (1.0 + t.s2) * a
    }
}
