//! Bivariate gauges of the standard parametric examples.

use super::{switched, Gauge, Kind};
use crate::copula::{Family, PairCopula};
use crate::error::{Error, Result};
use crate::measure::{ExponentMeasure, TailOrders};

/// Bivariate models with a closed-form gauge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BivariateCase {
    /// `g = x₁ + x₂`.
    Independence,
    /// Gaussian copula with correlation `ρ ∈ [0, 1)`.
    Gaussian { rho: f64 },
    /// Inverted extreme-value copula: `g = V(1/x₁, 1/x₂)`.
    InvertedEv { measure: ExponentMeasure },
    /// Extreme-value copula whose conditional tails have orders `s₁, s₂ > −1`.
    Bev { s1: f64, s2: f64 },
    /// Extreme-value copula with asymmetric logistic measure, `α ∈ (0, 1)`,
    /// `θ₁, θ₂ ∈ (0, 1)`; the gauge does not depend on the `θ`s.
    AsymmetricLogistic { alpha: f64 },
}

impl BivariateCase {
    /// The case describing a pair copula.
    pub fn from_pair(pc: &PairCopula) -> Result<Self> {
        if pc.measure.is_independence() {
            return Ok(BivariateCase::Independence);
        }
        match (pc.family, pc.measure) {
            (Family::Iev, measure) => Ok(BivariateCase::InvertedEv { measure }),
            (Family::Ev, ExponentMeasure::AsymmetricLogistic { alpha, theta1, theta2 })
                if theta1 > 0.0 && theta1 < 1.0 && theta2 > 0.0 && theta2 < 1.0 =>
            {
                Ok(BivariateCase::AsymmetricLogistic { alpha })
            }
            (Family::Ev, m) => {
                let t = m.tail_orders()?;
                Ok(BivariateCase::Bev { s1: t.s1, s2: t.s2 })
            }
        }
    }
}

#[derive(Debug, Clone)]
pub(super) enum BivariateGauge {
    Independence,
    Gaussian { rho: f64 },
    InvertedEv(ExponentMeasure),
    Bev(TailOrders),
    AsymmetricLogistic { alpha: f64 },
}

impl BivariateGauge {
    #[inline]
    pub(super) fn eval(&self, x1: f64, x2: f64) -> f64 {
        match self {
            BivariateGauge::Independence => x1 + x2,
            BivariateGauge::Gaussian { rho } => {
                (x1 + x2 - 2.0 * rho * (x1 * x2).sqrt()) / (1.0 - rho * rho)
            }
            BivariateGauge::InvertedEv(m) => m.stdf(x1, x2),
            BivariateGauge::Bev(t) => switched(x1, x2, t),
            BivariateGauge::AsymmetricLogistic { alpha } => {
                let (hi, lo) = if x1 >= x2 { (x1, x2) } else { (x2, x1) };
                (x1 + x2).min(hi / alpha + (1.0 - 1.0 / alpha) * lo)
            }
        }
    }
}

/// Gauge of a bivariate model.
pub fn gauge_bivariate(case: BivariateCase) -> Result<Gauge> {
    let (g, name) = match case {
        BivariateCase::Independence => (BivariateGauge::Independence, "independence".to_string()),
        BivariateCase::Gaussian { rho } => {
            if !(0.0..1.0).contains(&rho) {
                return Err(Error::domain(format!("Gaussian correlation must lie in [0, 1), got {rho}")));
            }
            (BivariateGauge::Gaussian { rho }, format!("gaussian(rho={rho})"))
        }
        BivariateCase::InvertedEv { measure } => {
            measure.validate()?;
            (BivariateGauge::InvertedEv(measure), format!("inverted-ev({measure:?})"))
        }
        BivariateCase::Bev { s1, s2 } => {
            if !(s1 > -1.0 && s2 > -1.0 && s1.is_finite() && s2.is_finite()) {
                return Err(Error::domain(format!("tail orders must exceed -1, got ({s1}, {s2})")));
            }
            let t = TailOrders { s1, s2, c1: f64::NAN, c2: f64::NAN };
            (BivariateGauge::Bev(t), format!("ev(s1={s1}, s2={s2})"))
        }
        BivariateCase::AsymmetricLogistic { alpha } => {
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(Error::domain(format!("alpha must lie in (0, 1), got {alpha}")));
            }
            (BivariateGauge::AsymmetricLogistic { alpha }, format!("asymmetric-logistic(alpha={alpha})"))
        }
    };
    Ok(Gauge::new(2, Kind::Bivariate(g), format!("bivariate {name}")))
}
