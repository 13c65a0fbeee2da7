//! Gauges of trivariate vines with EV and IEV pair copulas.
//!
//! The vine has edges `c12`, `c23` and `c13|2`. Below, `ℓ_e` is the stable
//! tail dependence function of edge `e` and `s₁^e, s₂^e` its tail orders.
//! Patterns with `c12` IEV and `c23` EV are evaluated through the relabelling
//! `x₁ ↔ x₃`, which transposes every pair copula.

use super::{switched, Gauge, Kind};
use crate::copula::{Family, PairCopula};
use crate::error::{Error, Result};
use crate::measure::{ExponentMeasure, TailOrders};
use crate::vine::VineSpec;

/// Families of `(c12, c23, c13|2)` after relabelling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TrivariatePattern {
    IevIevIev,
    IevIevEv,
    EvIevIev,
    EvIevEv,
    EvEvIev,
    EvEvEv,
}

impl TrivariatePattern {
    /// `(IEV,IEV,EV)`-style label.
    pub fn label(&self) -> &'static str {
        match self {
            TrivariatePattern::IevIevIev => "(IEV,IEV,IEV)",
            TrivariatePattern::IevIevEv => "(IEV,IEV,EV)",
            TrivariatePattern::EvIevIev => "(EV,IEV,IEV)",
            TrivariatePattern::EvIevEv => "(EV,IEV,EV)",
            TrivariatePattern::EvEvIev => "(EV,EV,IEV)",
            TrivariatePattern::EvEvEv => "(EV,EV,EV)",
        }
    }
}

/// The edges of a trivariate spec, relabelled so that `c12` is EV whenever
/// either first-tree edge is. An independence edge counts as IEV.
#[derive(Debug, Clone, Copy)]
pub(crate) struct CanonicalTrivariate {
    pub pattern: TrivariatePattern,
    pub mirrored: bool,
    pub c12: PairCopula,
    pub c23: PairCopula,
    pub c13: PairCopula,
}

fn effective_family(pc: &PairCopula) -> Family {
    if pc.measure.is_independence() {
        Family::Iev
    } else {
        pc.family
    }
}

impl CanonicalTrivariate {
    pub(crate) fn from_spec(spec: &VineSpec) -> Result<Self> {
        let (c12, c23, c13) = spec.trivariate_edges().ok_or_else(|| {
            Error::spec("/structure", "a trivariate gauge needs the edge set {12, 23, 13|2}")
        })?;
        let (f12, f23) = (effective_family(&c12), effective_family(&c23));
        let mirrored = f12 == Family::Iev && f23 == Family::Ev;
        let (c12, c23, c13) = if mirrored {
            (c23.transposed(), c12.transposed(), c13.transposed())
        } else {
            (c12, c23, c13)
        };
        use Family::{Ev, Iev};
        let pattern = match (effective_family(&c12), effective_family(&c23), effective_family(&c13)) {
            (Iev, Iev, Iev) => TrivariatePattern::IevIevIev,
            (Iev, Iev, Ev) => TrivariatePattern::IevIevEv,
            (Ev, Iev, Iev) => TrivariatePattern::EvIevIev,
            (Ev, Iev, Ev) => TrivariatePattern::EvIevEv,
            (Ev, Ev, Iev) => TrivariatePattern::EvEvIev,
            (Ev, Ev, Ev) => TrivariatePattern::EvEvEv,
            (Iev, Ev, _) => unreachable!("mirrored above"),
        };
        Ok(CanonicalTrivariate {
            pattern,
            mirrored,
            c12,
            c23,
            c13,
        })
    }
}

#[derive(Debug, Clone)]
pub(super) struct TrivariateGauge {
    pattern: TrivariatePattern,
    mirrored: bool,
    m12: ExponentMeasure,
    m23: ExponentMeasure,
    m13: ExponentMeasure,
    t12: TailOrders,
    t23: TailOrders,
    t13: TailOrders,
}

const UNUSED: TailOrders = TailOrders {
    s1: f64::NAN,
    s2: f64::NAN,
    c1: f64::NAN,
    c2: f64::NAN,
};

/// Tail orders of an edge. EV edges must have them. For an IEV edge they
/// are only read by the `(EV,IEV,IEV)` pattern, where `c13|2` enters through
/// `s₁`; an independent edge there behaves as `s = −1`.
fn orders(pc: &PairCopula, edge: &str) -> Result<TailOrders> {
    if pc.measure.is_independence() {
        return Ok(TailOrders {
            s1: -1.0,
            s2: -1.0,
            c1: 0.0,
            c2: 0.0,
        });
    }
    match (pc.family, pc.measure.tail_orders()) {
        (_, Ok(t)) => Ok(t),
        (Family::Iev, Err(_)) => Ok(UNUSED),
        (Family::Ev, Err(e)) => Err(Error::UnsupportedMeasure(format!(
            "EV edge {edge} needs finite tail orders: {e}"
        ))),
    }
}

#[inline]
fn pos(v: f64) -> f64 {
    v.max(0.0)
}

impl TrivariateGauge {
    #[inline]
    pub(super) fn eval(&self, x1: f64, x2: f64, x3: f64) -> f64 {
        if self.mirrored {
            self.eval_canonical(x3, x2, x1)
        } else {
            self.eval_canonical(x1, x2, x3)
        }
    }

    fn eval_canonical(&self, x1: f64, x2: f64, x3: f64) -> f64 {
        let (t12, t23, t13) = (&self.t12, &self.t23, &self.t13);
        match self.pattern {
            TrivariatePattern::IevIevIev => {
                let a = pos(self.m12.stdf(x1, x2) - x2);
                let b = pos(self.m23.stdf(x2, x3) - x2);
                x2 + self.m13.stdf(a, b)
            }
            TrivariatePattern::IevIevEv => {
                switched(self.m12.stdf(x1, x2), self.m23.stdf(x2, x3), t13)
            }
            TrivariatePattern::EvIevIev => {
                let l23 = self.m23.stdf(x2, x3);
                if x1 <= x2 {
                    (2.0 + t13.s1) * (1.0 + t12.s2) * (x2 - x1) + l23
                } else {
                    x2 + self.m13.stdf((x1 - x2) * (2.0 + t12.s1), pos(l23 - x2))
                }
            }
            TrivariatePattern::EvIevEv => {
                let b = pos(self.m23.stdf(x2, x3) - x2);
                if x1 <= x2 {
                    x2 + (1.0 + t12.s2) * (x2 - x1) + (2.0 + t13.s2) * b
                } else {
                    x2 + switched((2.0 + t12.s1) * (x1 - x2), b, t13)
                }
            }
            TrivariatePattern::EvEvIev => {
                if x1.max(x3) < x2 {
                    let p = (1.0 + t12.s2) * (x2 - x1);
                    let q = (1.0 + t23.s1) * (x2 - x3);
                    x2 + switched(p, q, t13)
                } else if x1 < x2 && x2 <= x3 {
                    x2 + (2.0 + t13.s1) * (1.0 + t12.s2) * (x2 - x1) + (2.0 + t23.s2) * (x3 - x2)
                } else if x3 < x2 && x2 <= x1 {
                    x2 + (2.0 + t13.s2) * (1.0 + t23.s1) * (x2 - x3) + (2.0 + t12.s1) * (x1 - x2)
                } else {
                    x2 + self
                        .m13
                        .stdf((2.0 + t12.s1) * (x1 - x2), (2.0 + t23.s2) * (x3 - x2))
                }
            }
            TrivariatePattern::EvEvEv => {
                if x1.max(x3) <= x2 {
                    x2 + self
                        .m13
                        .stdf((1.0 + t12.s2) * (x2 - x1), (1.0 + t23.s1) * (x2 - x3))
                } else if x1 <= x2 && x2 < x3 {
                    x2 + (2.0 + t13.s2) * (2.0 + t23.s2) * (x3 - x2) + (1.0 + t12.s2) * (x2 - x1)
                } else if x3 <= x2 && x2 < x1 {
                    x2 + (2.0 + t13.s1) * (2.0 + t12.s1) * (x1 - x2) + (1.0 + t23.s1) * (x2 - x3)
                } else {
                    let a = (2.0 + t12.s1) * (x1 - x2);
                    let b = (2.0 + t23.s2) * (x3 - x2);
                    x2 + switched(a, b, t13)
                }
            }
        }
    }
}

/// Gauge of a trivariate vine, for all six EV/IEV family patterns.
pub fn gauge_trivariate(spec: &VineSpec) -> Result<Gauge> {
    let canon = CanonicalTrivariate::from_spec(spec)?;
    let g = TrivariateGauge {
        pattern: canon.pattern,
        mirrored: canon.mirrored,
        m12: canon.c12.measure,
        m23: canon.c23.measure,
        m13: canon.c13.measure,
        t12: orders(&canon.c12, "12")?,
        t23: orders(&canon.c23, "23")?,
        t13: orders(&canon.c13, "13|2")?,
    };
    if g.pattern == TrivariatePattern::EvIevIev && g.t13.s1.is_nan() {
        return Err(Error::UnsupportedMeasure(
            "the (EV,IEV,IEV) gauge needs a finite tail order for c13|2".into(),
        ));
    }
    let name = format!(
        "trivariate vine {}{}",
        canon.pattern.label(),
        if canon.mirrored { " relabelled x1<->x3" } else { "" }
    );
    Ok(Gauge::new(3, Kind::Trivariate(g), name))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn spec(f: [Family; 3], a: [f64; 3]) -> VineSpec {
        let pc = |i: usize| PairCopula::new(f[i], ExponentMeasure::logistic(a[i]).unwrap()).unwrap();
        VineSpec::trivariate(pc(0), pc(1), pc(2)).unwrap()
    }

    use Family::{Ev, Iev};

    #[test]
    fn all_iev_at_ones() {
        let g = gauge_trivariate(&spec([Iev, Iev, Iev], [0.5; 3])).unwrap();
        let want = 1.0 + (2.0 * (2f64.sqrt() - 1.0).powi(2)).sqrt();
        assert_relative_eq!(g.eval(&[1.0, 1.0, 1.0]), want, max_relative = 1e-14);
    }

    #[test]
    fn mixed_case_values() {
        let g = gauge_trivariate(&spec([Iev, Iev, Ev], [0.5, 0.25, 0.5])).unwrap();
        assert_relative_eq!(g.eval(&[1.0, 0.0, 1.0]), 1.0, max_relative = 1e-15);
        let g = gauge_trivariate(&spec([Ev, Ev, Iev], [0.5, 0.3, 0.7])).unwrap();
        assert_relative_eq!(g.eval(&[1.0, 1.0, 1.0]), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn mirror_pattern_matches_relabelled_spec() {
        let direct = gauge_trivariate(&spec([Ev, Iev, Iev], [0.4, 0.6, 0.3])).unwrap();
        let mirror = gauge_trivariate(&spec([Iev, Ev, Iev], [0.6, 0.4, 0.3])).unwrap();
        for x in [[0.2, 0.5, 1.3], [1.0, 0.1, 0.4], [2.0, 2.0, 0.5]] {
            assert_relative_eq!(
                direct.eval(&x),
                mirror.eval(&[x[2], x[1], x[0]]),
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn asymmetric_logistic_ev_edge_is_rejected() {
        let c12 = PairCopula::new(Ev, ExponentMeasure::asymmetric_logistic(0.5, 0.3, 0.3).unwrap()).unwrap();
        let c = PairCopula::iev_logistic(0.5).unwrap();
        let s = VineSpec::trivariate(c12, c, c).unwrap();
        assert!(matches!(gauge_trivariate(&s), Err(Error::UnsupportedMeasure(_))));
    }
}
