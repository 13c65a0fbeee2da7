//! Empirical tail coefficients and cloud-versus-gauge diagnostics.
//!
//! Both estimators work with `T = min_{i∈C} X_i` on an unscaled cloud and
//! rely on `P(T > x) ≈ L e^{−x/η}` above a high level `u`. Standard errors
//! are first order: they ignore the slowly varying factor `L`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gauge::Gauge;
use crate::simulate::SampleCloud;

/// Fewest exceedances for which an estimate is reported.
pub const MIN_EXCEEDANCES: usize = 30;

/// A tail estimate at level `threshold` on the exponential scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub threshold: f64,
    pub n_exceed: usize,
}

/// JSON record form of an estimate for index set `set` (1-based digits).
#[derive(Debug, Clone, Serialize)]
pub struct TailRecord {
    pub set: String,
    pub u: f64,
    pub estimate: f64,
    pub stderr: f64,
    pub n_exceed: usize,
}

impl TailEstimate {
    pub fn record(&self, set: &[usize]) -> TailRecord {
        TailRecord {
            set: set.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(","),
            u: self.threshold,
            estimate: self.estimate,
            stderr: self.stderr,
            n_exceed: self.n_exceed,
        }
    }
}

fn check_unscaled(c: &SampleCloud, set: &[usize], u: f64) -> Result<()> {
    if c.is_scaled() {
        return Err(Error::domain("tail estimators need an unscaled cloud"));
    }
    if !(u > 0.0 && u.is_finite()) {
        return Err(Error::domain(format!("threshold must be positive, got {u}")));
    }
    if set.is_empty() {
        return Err(Error::domain("empty index set"));
    }
    if let Some(&i) = set.iter().find(|&&i| i >= c.d) {
        return Err(Error::DimensionMismatch {
            expected: c.d,
            got: i + 1,
        });
    }
    Ok(())
}

/// `T = min_{i∈set} X_i` for every row.
pub fn row_minima(c: &SampleCloud, set: &[usize]) -> Vec<f64> {
    c.rows().map(|r| set.iter().map(|&i| r[i]).fold(f64::INFINITY, f64::min)).collect()
}

/// Empirical `p`-quantile (type 7, linear interpolation) of `values`.
pub fn quantile(values: &[f64], p: f64) -> f64 {
    assert!(!values.is_empty(), "quantile of an empty sample");
    let mut v = values.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    let h = (v.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    v[lo] + (h - lo as f64) * (v[hi] - v[lo])
}

/// The 95th percentile of `T` over `set`, the default estimation level.
pub fn default_threshold(c: &SampleCloud, set: &[usize]) -> f64 {
    quantile(&row_minima(c, set), 0.95)
}

/// `χ̂ = e^u · #{T > u} / n`, with binomial standard error.
pub fn chi_hat(c: &SampleCloud, set: &[usize], u: f64) -> Result<TailEstimate> {
    check_unscaled(c, set, u)?;
    let k = row_minima(c, set).into_iter().filter(|&t| t > u).count();
    if k < MIN_EXCEEDANCES {
        return Err(Error::LowData {
            n_exceed: k,
            required: MIN_EXCEEDANCES,
        });
    }
    let n = c.n as f64;
    let p = k as f64 / n;
    Ok(TailEstimate {
        estimate: u.exp() * p,
        stderr: u.exp() * (p * (1.0 - p) / n).sqrt(),
        threshold: u,
        n_exceed: k,
    })
}

/// `η̂` as the mean excess of `T` over `u`, the maximum likelihood estimate of
/// an exponential tail scale. Clipped to `(0, 1]`.
pub fn eta_hat(c: &SampleCloud, set: &[usize], u: f64) -> Result<TailEstimate> {
    check_unscaled(c, set, u)?;
    let (k, sum) = row_minima(c, set)
        .into_iter()
        .filter(|&t| t > u)
        .fold((0usize, 0.0), |(k, s), t| (k + 1, s + (t - u)));
    if k < MIN_EXCEEDANCES {
        return Err(Error::LowData {
            n_exceed: k,
            required: MIN_EXCEEDANCES,
        });
    }
    let mean = sum / k as f64;
    let eta = mean.clamp(f64::MIN_POSITIVE, 1.0);
    Ok(TailEstimate {
        estimate: eta,
        stderr: eta / (k as f64).sqrt(),
        threshold: u,
        n_exceed: k,
    })
}

/// Fraction of rows `x` of a scaled cloud with `g(x) ≤ 1 + slack`.
pub fn cloud_coverage(c: &SampleCloud, g: &Gauge, slack: f64) -> Result<f64> {
    if !c.is_scaled() {
        return Err(Error::domain("coverage is defined for a scaled cloud"));
    }
    if c.d != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            got: c.d,
        });
    }
    if slack.is_nan() || slack < 0.0 {
        return Err(Error::domain(format!("slack must be non-negative, got {slack}")));
    }
    if c.n == 0 {
        return Ok(1.0);
    }
    let level = 1.0 + slack;
    let inside = c
        .values
        .par_chunks_exact(c.d)
        .filter(|r| g.eval(r) <= level)
        .count();
    Ok(inside as f64 / c.n as f64)
}
