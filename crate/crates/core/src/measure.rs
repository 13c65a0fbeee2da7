//! Bivariate exponent measures of extreme-value copulas.
//!
//! An exponent measure `V(x, y)` on Fréchet margins is homogeneous of order
//! −1. Most of the crate works with the reciprocal form
//! `ℓ(a, b) = V(1/a, 1/b)`, the stable tail dependence function, which is
//! homogeneous of order +1 and finite on the closed quadrant `[0, ∞)²`. The
//! Fréchet-scale API accepts `+∞` as an argument and maps it to `ℓ` at zero,
//! so `V(∞, y) = 1/y` and `V(∞, ∞) = 0` hold exactly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A parametric bivariate exponent measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ExponentMeasure {
    /// `V(x, y) = (x^{-1/α} + y^{-1/α})^α` with `α ∈ (0, 1]`.
    Logistic { alpha: f64 },
    /// `V(x, y) = θ₁/x + θ₂/y + [((1−θ₁)/x)^{1/α} + ((1−θ₂)/y)^{1/α}]^α`
    /// with `α ∈ (0, 1]` and `θ₁, θ₂ ∈ [0, 1]`.
    AsymmetricLogistic { alpha: f64, theta1: f64, theta2: f64 },
}

/// Second-order behaviour of the conditional tails of an extreme-value
/// copula: `V(r, 1) − 1/r ~ 2c₂ r^{s₂+1} / ((s₂+1)(s₂+2))` as `r → 0`, and
/// symmetrically for the first argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailOrders {
    pub s1: f64,
    pub s2: f64,
    pub c1: f64,
    pub c2: f64,
}

impl TailOrders {
    /// Orders of the copula with its arguments swapped.
    pub fn transposed(self) -> Self {
        TailOrders {
            s1: self.s2,
            s2: self.s1,
            c1: self.c2,
            c2: self.c1,
        }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("alpha must lie in (0, 1], got {alpha}")))
    }
}

fn check_theta(name: &str, theta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&theta) {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must lie in [0, 1], got {theta}")))
    }
}

/// `ln(a^r + b^r)` for `a ≥ b ≥ 0`, `a > 0`.
#[inline]
fn ln_power_sum(r: f64, hi: f64, lo: f64) -> f64 {
    r * hi.ln() + (lo / hi).powf(r).ln_1p()
}

#[inline]
fn logistic_stdf(alpha: f64, a: f64, b: f64) -> f64 {
    if a == 0.0 {
        return b;
    }
    if b == 0.0 {
        return a;
    }
    if alpha == 1.0 {
        return a + b;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi * (alpha * (lo / hi).powf(1.0 / alpha).ln_1p()).exp()
}

#[inline]
fn logistic_stdf_d1(alpha: f64, a: f64, b: f64) -> f64 {
    if alpha == 1.0 || b == 0.0 {
        return 1.0;
    }
    if a == 0.0 {
        return 0.0;
    }
    let r = 1.0 / alpha;
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    ((r - 1.0) * a.ln() + (alpha - 1.0) * ln_power_sum(r, hi, lo)).exp()
}

#[inline]
fn logistic_stdf_d12(alpha: f64, a: f64, b: f64) -> f64 {
    if alpha == 1.0 || a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let r = 1.0 / alpha;
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    -(r - 1.0) * ((r - 1.0) * (a.ln() + b.ln()) + (alpha - 2.0) * ln_power_sum(r, hi, lo)).exp()
}

/// `(ln ∂ℓ/∂b, ℓ − b)` for the logistic function, free of cancellation
/// when `a ≪ b`, where both tend to zero.
fn logistic_log_d2_excess(alpha: f64, a: f64, b: f64) -> (f64, f64) {
    if a == 0.0 {
        return (0.0, 0.0);
    }
    if alpha == 1.0 {
        return (0.0, a);
    }
    if b == 0.0 {
        return (f64::NEG_INFINITY, a);
    }
    let r = 1.0 / alpha;
    if b >= a {
        let lq = (a / b).powf(r).ln_1p();
        ((alpha - 1.0) * lq, b * (alpha * lq).exp_m1())
    } else {
        let lq = (b / a).powf(r).ln_1p();
        ((r - 1.0) * (b / a).ln() + (alpha - 1.0) * lq, a * (alpha * lq).exp() - b)
    }
}

fn check_frechet(x: f64) -> Result<()> {
    if x > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "exponent measure argument must lie in (0, ∞], got {x}"
        )))
    }
}

fn check_quadrant(a: f64) -> Result<()> {
    if a >= 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "stable tail dependence argument must lie in [0, ∞), got {a}"
        )))
    }
}

impl ExponentMeasure {
    /// Validated symmetric logistic measure.
    pub fn logistic(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(ExponentMeasure::Logistic { alpha })
    }

    /// Validated asymmetric logistic measure.
    pub fn asymmetric_logistic(alpha: f64, theta1: f64, theta2: f64) -> Result<Self> {
        let m = ExponentMeasure::AsymmetricLogistic {
            alpha,
            theta1,
            theta2,
        };
        m.validate()?;
        Ok(m)
    }

    /// Check parameter ranges; deserialised measures are unchecked until this runs.
    pub fn validate(&self) -> Result<()> {
        match *self {
            ExponentMeasure::Logistic { alpha } => check_alpha(alpha),
            ExponentMeasure::AsymmetricLogistic {
                alpha,
                theta1,
                theta2,
            } => {
                check_alpha(alpha)?;
                check_theta("theta1", theta1)?;
                check_theta("theta2", theta2)
            }
        }
    }

    /// Dependence parameter `α`.
    pub fn alpha(&self) -> f64 {
        match *self {
            ExponentMeasure::Logistic { alpha } | ExponentMeasure::AsymmetricLogistic { alpha, .. } => alpha,
        }
    }

    /// The logistic parameter if this is a symmetric logistic measure.
    pub fn logistic_alpha(&self) -> Option<f64> {
        match *self {
            ExponentMeasure::Logistic { alpha } => Some(alpha),
            ExponentMeasure::AsymmetricLogistic { .. } => None,
        }
    }

    /// Measure of the copula with its two arguments exchanged.
    pub fn transposed(&self) -> Self {
        match *self {
            ExponentMeasure::Logistic { alpha } => ExponentMeasure::Logistic { alpha },
            ExponentMeasure::AsymmetricLogistic {
                alpha,
                theta1,
                theta2,
            } => ExponentMeasure::AsymmetricLogistic {
                alpha,
                theta1: theta2,
                theta2: theta1,
            },
        }
    }

    /// True when `V(x, y) = 1/x + 1/y`, i.e. the copula is the independence copula.
    pub fn is_independence(&self) -> bool {
        match *self {
            ExponentMeasure::Logistic { alpha } => alpha == 1.0,
            ExponentMeasure::AsymmetricLogistic {
                alpha,
                theta1,
                theta2,
            } => alpha == 1.0 || (theta1 == 1.0 && theta2 == 1.0),
        }
    }

    /// Stable tail dependence function `ℓ(a, b) = V(1/a, 1/b)` for `a, b ≥ 0`.
    ///
    /// No argument checks; callers inside the crate guarantee the domain.
    #[inline]
    pub fn stdf(&self, a: f64, b: f64) -> f64 {
        match *self {
            ExponentMeasure::Logistic { alpha } => logistic_stdf(alpha, a, b),
            ExponentMeasure::AsymmetricLogistic {
                alpha,
                theta1,
                theta2,
            } => {
                theta1 * a
                    + theta2 * b
                    + logistic_stdf(alpha, (1.0 - theta1) * a, (1.0 - theta2) * b)
            }
        }
    }

    /// `∂ℓ/∂a`.
    #[inline]
    pub fn stdf_d1(&self, a: f64, b: f64) -> f64 {
        match *self {
            ExponentMeasure::Logistic { alpha } => logistic_stdf_d1(alpha, a, b),
            ExponentMeasure::AsymmetricLogistic {
                alpha,
                theta1,
                theta2,
            } => {
                theta1
                    + (1.0 - theta1)
                        * logistic_stdf_d1(alpha, (1.0 - theta1) * a, (1.0 - theta2) * b)
            }
        }
    }

    /// `∂ℓ/∂b`.
    #[inline]
    pub fn stdf_d2(&self, a: f64, b: f64) -> f64 {
        self.transposed().stdf_d1(b, a)
    }

    /// `∂²ℓ/∂a∂b`.
    #[inline]
    pub fn stdf_d12(&self, a: f64, b: f64) -> f64 {
        match *self {
            ExponentMeasure::Logistic { alpha } => logistic_stdf_d12(alpha, a, b),
            ExponentMeasure::AsymmetricLogistic {
                alpha,
                theta1,
                theta2,
            } => {
                (1.0 - theta1)
                    * (1.0 - theta2)
                    * logistic_stdf_d12(alpha, (1.0 - theta1) * a, (1.0 - theta2) * b)
            }
        }
    }

    /// `(ln ∂ℓ/∂b, ℓ(a, b) − b)`, both accurate to full relative precision
    /// as `a/b → 0`. These give the logarithm of the h-function without the
    /// cancellation in `1 − h` for inverted copulas.
    pub(crate) fn log_d2_and_excess(&self, a: f64, b: f64) -> (f64, f64) {
        match *self {
            ExponentMeasure::Logistic { alpha } => logistic_log_d2_excess(alpha, a, b),
            ExponentMeasure::AsymmetricLogistic {
                alpha,
                theta1,
                theta2,
            } => {
                let (ln_d2, excess) = logistic_log_d2_excess(alpha, (1.0 - theta1) * a, (1.0 - theta2) * b);
                // ℓ₂ = θ₂ + (1 − θ₂) e^{ln_d2} = 1 + (1 − θ₂)(e^{ln_d2} − 1).
                let ln_l2 = if theta2 == 1.0 { 0.0 } else { ((1.0 - theta2) * ln_d2.exp_m1()).ln_1p() };
                (ln_l2, theta1 * a + excess)
            }
        }
    }

    /// Checked `ℓ(a, b)`.
    pub fn eval_stdf(&self, a: f64, b: f64) -> Result<f64> {
        check_quadrant(a)?;
        check_quadrant(b)?;
        Ok(self.stdf(a, b))
    }

    /// `V(x, y)` for `x, y ∈ (0, ∞]`.
    pub fn eval_v(&self, x: f64, y: f64) -> Result<f64> {
        check_frechet(x)?;
        check_frechet(y)?;
        Ok(self.stdf(x.recip(), y.recip()))
    }

    /// `∂V/∂x`, homogeneous of order −2.
    pub fn eval_v1(&self, x: f64, y: f64) -> Result<f64> {
        check_frechet(x)?;
        check_frechet(y)?;
        if x.is_infinite() {
            return Ok(0.0);
        }
        Ok(-self.stdf_d1(x.recip(), y.recip()) / (x * x))
    }

    /// `∂V/∂y`, homogeneous of order −2.
    pub fn eval_v2(&self, x: f64, y: f64) -> Result<f64> {
        check_frechet(x)?;
        check_frechet(y)?;
        if y.is_infinite() {
            return Ok(0.0);
        }
        Ok(-self.stdf_d2(x.recip(), y.recip()) / (y * y))
    }

    /// `∂²V/∂x∂y`, homogeneous of order −3.
    pub fn eval_v12(&self, x: f64, y: f64) -> Result<f64> {
        check_frechet(x)?;
        check_frechet(y)?;
        if x.is_infinite() || y.is_infinite() {
            return Ok(0.0);
        }
        Ok(self.stdf_d12(x.recip(), y.recip()) / (x * x * y * y))
    }

    /// Tail orders `(s₁, s₂)` and constants `(c₁, c₂)` of the EV copula.
    ///
    /// Only the logistic measure with `α < 1` has a closed form; the
    /// asymmetric logistic puts mass on the axes and is rejected, as is the
    /// independence case.
    pub fn tail_orders(&self) -> Result<TailOrders> {
        match *self {
            ExponentMeasure::Logistic { alpha } if alpha < 1.0 => {
                let s = 1.0 / alpha - 2.0;
                let c = 0.5 * (1.0 / alpha - 1.0);
                Ok(TailOrders {
                    s1: s,
                    s2: s,
                    c1: c,
                    c2: c,
                })
            }
            ExponentMeasure::Logistic { .. } => Err(Error::UnsupportedMeasure(
                "logistic measure with alpha = 1 is the independence copula and has no finite tail order"
                    .into(),
            )),
            ExponentMeasure::AsymmetricLogistic { .. } => Err(Error::UnsupportedMeasure(
                "asymmetric logistic measure has no closed-form tail orders".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn logistic_half_at_ones() {
        let m = ExponentMeasure::logistic(0.5).unwrap();
        assert_relative_eq!(m.eval_v(1.0, 1.0).unwrap(), 2f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(m.stdf(1.0, 1.0), 2f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn infinite_arguments() {
        let m = ExponentMeasure::asymmetric_logistic(0.4, 0.3, 0.6).unwrap();
        assert_eq!(m.eval_v(f64::INFINITY, 2.0).unwrap(), 0.5);
        assert_eq!(m.eval_v(4.0, f64::INFINITY).unwrap(), 0.25);
        assert_eq!(m.eval_v(f64::INFINITY, f64::INFINITY).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(ExponentMeasure::logistic(0.0).is_err());
        assert!(ExponentMeasure::logistic(1.2).is_err());
        assert!(ExponentMeasure::logistic(f64::NAN).is_err());
        assert!(ExponentMeasure::asymmetric_logistic(0.5, -0.1, 0.0).is_err());
        let m = ExponentMeasure::logistic(0.5).unwrap();
        assert!(m.eval_v(0.0, 1.0).is_err());
        assert!(m.eval_v(-1.0, 1.0).is_err());
    }

    #[test]
    fn tail_orders_logistic_and_rejections() {
        let t = ExponentMeasure::logistic(0.25).unwrap().tail_orders().unwrap();
        assert_relative_eq!(t.s1, 2.0);
        assert_relative_eq!(t.c2, 1.5);
        assert!(matches!(
            ExponentMeasure::logistic(1.0).unwrap().tail_orders(),
            Err(Error::UnsupportedMeasure(_))
        ));
        assert!(matches!(
            ExponentMeasure::asymmetric_logistic(0.5, 0.2, 0.2)
                .unwrap()
                .tail_orders(),
            Err(Error::UnsupportedMeasure(_))
        ));
    }

    #[test]
    fn logistic_tail_expansion_matches_orders() {
        // V(r, 1) − 1/r against 2c r^{s+1}/((s+1)(s+2)) for small r.
        for &alpha in &[0.3, 0.5, 0.7] {
            let m = ExponentMeasure::logistic(alpha).unwrap();
            let t = m.tail_orders().unwrap();
            let r: f64 = 1e-3;
            let lhs = m.eval_v(r, 1.0).unwrap() - 1.0 / r;
            let rhs = 2.0 * t.c2 * r.powf(t.s2 + 1.0) / ((t.s2 + 1.0) * (t.s2 + 2.0));
            assert_relative_eq!(lhs, rhs, max_relative = 1e-2);
        }
    }

    #[test]
    fn asymmetric_reduces_to_logistic() {
        let a = ExponentMeasure::asymmetric_logistic(0.6, 0.0, 0.0).unwrap();
        let l = ExponentMeasure::logistic(0.6).unwrap();
        for &(x, y) in &[(0.3, 2.0), (1.0, 1.0), (5.0, 0.2)] {
            assert_relative_eq!(a.eval_v(x, y).unwrap(), l.eval_v(x, y).unwrap(), max_relative = 1e-14);
            assert_relative_eq!(a.eval_v12(x, y).unwrap(), l.eval_v12(x, y).unwrap(), max_relative = 1e-12);
        }
    }

    #[test]
    fn extreme_ratios_stay_finite() {
        let m = ExponentMeasure::logistic(0.05).unwrap();
        let v = m.stdf(1e-200, 1e200);
        assert!(v.is_finite());
        assert_relative_eq!(v, 1e200, max_relative = 1e-12);
        assert!(m.stdf_d12(1e-30, 1.0).is_finite());
    }
}
