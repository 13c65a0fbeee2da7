//! Extreme-value (EV) and inverted extreme-value (IEV) pair copulas.
//!
//! Both families are evaluated on an exponential scale. For the EV copula
//! the scale is `z = −ln u`, for the IEV copula it is `z = −ln(1 − u)`,
//! because the IEV copula is the survival copula of the EV copula with the
//! same exponent measure. In those coordinates
//!
//! * `C_EV(u, v) = exp{−ℓ(z_u, z_v)}`,
//! * `h_EV(u | v) = ℓ₂(z_u, z_v) · exp{z_v − ℓ(z_u, z_v)}`,
//! * `c_EV(u, v) = exp{z_u + z_v − ℓ}(ℓ₁ℓ₂ − ℓ₁₂)`,
//!
//! with `ℓ` the stable tail dependence function of the measure, and the IEV
//! quantities follow by reflection `u ↦ 1 − u`. The exponential form keeps
//! the tails accurate where `1 − u` is far below machine epsilon relative
//! to one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::ExponentMeasure;

/// Smallest distance to `{0, 1}` kept before logarithmic transforms.
pub const BOUNDARY_CLAMP: f64 = 1e-15;

const HINV_MAX_ITER: usize = 200;

/// Pair-copula family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Extreme-value copula, asymptotically dependent in the upper tail.
    Ev,
    /// Inverted extreme-value copula, asymptotically independent.
    Iev,
}

/// A bivariate copula `C(u, v)` of family EV or IEV driven by an exponent measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairCopula {
    pub family: Family,
    pub measure: ExponentMeasure,
}

fn clamp_unit(u: f64) -> f64 {
    u.clamp(BOUNDARY_CLAMP, 1.0 - BOUNDARY_CLAMP)
}

fn check_closed_unit(name: &str, u: f64) -> Result<()> {
    if (0.0..=1.0).contains(&u) {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must lie in [0, 1], got {u}")))
    }
}

fn check_open_unit(name: &str, u: f64) -> Result<()> {
    if u > 0.0 && u < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must lie in (0, 1), got {u}")))
    }
}

impl PairCopula {
    /// Validated pair copula.
    pub fn new(family: Family, measure: ExponentMeasure) -> Result<Self> {
        measure.validate()?;
        Ok(PairCopula { family, measure })
    }

    /// EV copula with a logistic measure (the Gumbel copula).
    pub fn ev_logistic(alpha: f64) -> Result<Self> {
        Self::new(Family::Ev, ExponentMeasure::logistic(alpha)?)
    }

    /// IEV copula with a logistic measure.
    pub fn iev_logistic(alpha: f64) -> Result<Self> {
        Self::new(Family::Iev, ExponentMeasure::logistic(alpha)?)
    }

    /// The copula of `(V, U)` when this is the copula of `(U, V)`.
    pub fn transposed(&self) -> Self {
        PairCopula {
            family: self.family,
            measure: self.measure.transposed(),
        }
    }

    /// Map a uniform to the exponential scale of this family.
    #[inline]
    fn u_to_z(self, u: f64) -> f64 {
        match self.family {
            Family::Ev => -u.ln(),
            Family::Iev => -(-u).ln_1p(),
        }
    }

    /// Inverse of [`Self::u_to_z`].
    #[inline]
    fn z_to_u(self, z: f64) -> f64 {
        match self.family {
            Family::Ev => (-z).exp(),
            Family::Iev => -(-z).exp_m1(),
        }
    }

    /// `ln H(z, z_v)` with `H = ℓ₂ · exp(z_v − ℓ)`, accurate as `H → 1`.
    #[inline]
    fn ln_h_z(&self, z: f64, zv: f64) -> f64 {
        let (ln_l2, excess) = self.measure.log_d2_and_excess(z, zv);
        ln_l2 - excess
    }

    /// `d ln H / dz = −(ℓ₁ℓ₂ − ℓ₁₂)/ℓ₂`.
    #[inline]
    fn ln_h_z_slope(&self, z: f64, zv: f64) -> f64 {
        let m = &self.measure;
        let l2 = m.stdf_d2(z, zv);
        -(m.stdf_d1(z, zv) * l2 - m.stdf_d12(z, zv)) / l2
    }

    /// `C(u, v)` for `u, v ∈ [0, 1]`.
    pub fn cdf(&self, u: f64, v: f64) -> Result<f64> {
        check_closed_unit("u", u)?;
        check_closed_unit("v", v)?;
        if u == 0.0 || v == 0.0 {
            return Ok(0.0);
        }
        if u == 1.0 {
            return Ok(v);
        }
        if v == 1.0 {
            return Ok(u);
        }
        let (u, v) = (clamp_unit(u), clamp_unit(v));
        let c = (-self.measure.stdf(self.u_to_z(u), self.u_to_z(v))).exp();
        Ok(match self.family {
            Family::Ev => c,
            Family::Iev => (u + v - 1.0 + c).max(0.0),
        })
    }

    /// Conditional distribution `h(u | v) = ∂C(u, v)/∂v`.
    pub fn hfunc(&self, u: f64, v: f64) -> Result<f64> {
        check_closed_unit("u", u)?;
        if v == 0.0 || v == 1.0 {
            return Err(Error::DegenerateConditioner(v));
        }
        check_open_unit("v", v)?;
        Ok(self.hfunc_unchecked(u, v))
    }

    pub(crate) fn hfunc_unchecked(&self, u: f64, v: f64) -> f64 {
        if u == 0.0 {
            return 0.0;
        }
        if u == 1.0 {
            return 1.0;
        }
        let (u, v) = (clamp_unit(u), clamp_unit(v));
        let ln_h = self.ln_h_z(self.u_to_z(u), self.u_to_z(v));
        let h = match self.family {
            Family::Ev => ln_h.exp(),
            Family::Iev => -ln_h.exp_m1(),
        };
        h.clamp(0.0, 1.0)
    }

    /// Inverse of `u ↦ h(u | v)`.
    ///
    /// Brackets the root on the exponential scale by doubling, then runs a
    /// bisection safeguarded Newton iteration on `ln H`. The returned `u` is
    /// within `1e-10` of the exact inverse.
    pub fn hinv(&self, p: f64, v: f64) -> Result<f64> {
        check_closed_unit("p", p)?;
        if v == 0.0 || v == 1.0 {
            return Err(Error::DegenerateConditioner(v));
        }
        check_open_unit("v", v)?;
        self.hinv_unchecked(p, v)
    }

    pub(crate) fn hinv_unchecked(&self, p: f64, v: f64) -> Result<f64> {
        if self.measure.is_independence() {
            return Ok(p);
        }
        // H(z) decreases from 1 at z = 0 to 0 at z = ∞. Solving for ln H keeps
        // full precision when the target H is close to one.
        let (ln_target, edge) = match self.family {
            Family::Ev => (p.ln(), p),
            Family::Iev => ((-p).ln_1p(), 1.0 - p),
        };
        if edge >= 1.0 {
            return Ok(self.z_to_u(0.0));
        }
        if edge <= 0.0 {
            return Ok(self.z_to_u(f64::INFINITY));
        }
        let zv = self.u_to_z(clamp_unit(v));
        let f = |z: f64| (self.ln_h_z(z, zv) - ln_target, self.ln_h_z_slope(z, zv));

        let mut lo = 0.0;
        let mut hi = 1.0;
        let mut steps = 0;
        while f(hi).0 > 0.0 {
            lo = hi;
            hi *= 2.0;
            steps += 1;
            if steps > 1100 || !hi.is_finite() {
                return Err(Error::NonBracketing { lo: 0.0, hi });
            }
        }

        let mut z = 0.5 * (lo + hi);
        for _ in 0..HINV_MAX_ITER {
            let (r, dr) = f(z);
            if r == 0.0 {
                return Ok(self.z_to_u(z));
            }
            if r > 0.0 {
                lo = z;
            } else {
                hi = z;
            }
            let newton = z - r / dr;
            let next = if dr < 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            let tol = 1e-15 * next.max(1.0);
            if (next - z).abs() <= tol || hi - lo <= tol {
                return Ok(self.z_to_u(next));
            }
            z = next;
        }
        Err(Error::Numeric(format!(
            "h-function inversion did not converge for p = {p}, v = {v}"
        )))
    }

    /// Copula density `c(u, v)` on `(0, 1)²`.
    pub fn density(&self, u: f64, v: f64) -> Result<f64> {
        check_open_unit("u", u)?;
        check_open_unit("v", v)?;
        let (u, v) = (clamp_unit(u), clamp_unit(v));
        let (zu, zv) = (self.u_to_z(u), self.u_to_z(v));
        let m = &self.measure;
        let l = m.stdf(zu, zv);
        let core = m.stdf_d1(zu, zv) * m.stdf_d2(zu, zv) - m.stdf_d12(zu, zv);
        Ok((zu + zv - l).exp() * core)
    }
}
