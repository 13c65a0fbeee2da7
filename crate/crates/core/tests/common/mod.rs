//! Shared oracles for the integration tests: finite differences, a sampled
//! invariant suite and simple rank statistics.

#![allow(dead_code)]

use rand::Rng;

use vinegauge::copula::Family::{self, Ev, Iev};
use vinegauge::gauge::{gauge_bivariate, gauge_for_spec, BivariateCase};
use vinegauge::{ExponentMeasure, Gauge, PairCopula, Structure, VineSpec};

/// Central difference `(f(x + h) − f(x − h)) / 2h`.
pub fn central(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Relative error of `analytic` against a central difference of a function
/// of size `f_scale` with step `h`, after discounting the difference
/// quotient's own round-off `4 ε |f| / h`.
pub fn fd_err(analytic: f64, fd: f64, f_scale: f64, h: f64) -> f64 {
    let noise = 4.0 * f64::EPSILON * f_scale.abs() / h;
    ((analytic - fd).abs() - noise).max(0.0) / analytic.abs().max(f64::MIN_POSITIVE)
}

/// Hyper-dual number `f + f_x ε₁ + f_y ε₂ + f_xy ε₁ε₂` with `ε₁² = ε₂² = 0`,
/// giving exact first and mixed second partials of explicit formulas.
#[derive(Debug, Clone, Copy)]
pub struct HyperDual {
    pub f: f64,
    pub fx: f64,
    pub fy: f64,
    pub fxy: f64,
}

impl HyperDual {
    pub fn x(v: f64) -> Self {
        HyperDual { f: v, fx: 1.0, fy: 0.0, fxy: 0.0 }
    }

    pub fn y(v: f64) -> Self {
        HyperDual { f: v, fx: 0.0, fy: 1.0, fxy: 0.0 }
    }

    fn chain(self, f: f64, d1: f64, d2: f64) -> Self {
        HyperDual {
            f,
            fx: d1 * self.fx,
            fy: d1 * self.fy,
            fxy: d1 * self.fxy + d2 * self.fx * self.fy,
        }
    }

    pub fn powf(self, p: f64) -> Self {
        let a = self.f;
        self.chain(a.powf(p), p * a.powf(p - 1.0), p * (p - 1.0) * a.powf(p - 2.0))
    }

    pub fn recip(self) -> Self {
        self.powf(-1.0)
    }

    pub fn scale(self, k: f64) -> Self {
        HyperDual { f: k * self.f, fx: k * self.fx, fy: k * self.fy, fxy: k * self.fxy }
    }

    pub fn add(self, o: Self) -> Self {
        HyperDual { f: self.f + o.f, fx: self.fx + o.fx, fy: self.fy + o.fy, fxy: self.fxy + o.fxy }
    }
}

/// `V(x, y)` written out directly from its definition, in hyper-dual arithmetic.
pub fn v_hyper(m: &ExponentMeasure, x: f64, y: f64) -> HyperDual {
    let (alpha, t1, t2) = match *m {
        ExponentMeasure::Logistic { alpha } => (alpha, 0.0, 0.0),
        ExponentMeasure::AsymmetricLogistic { alpha, theta1, theta2 } => (alpha, theta1, theta2),
    };
    let (x, y) = (HyperDual::x(x), HyperDual::y(y));
    let r = 1.0 / alpha;
    let a = x.recip().scale(1.0 - t1).powf(r);
    let b = y.recip().scale(1.0 - t2).powf(r);
    x.recip().scale(t1).add(y.recip().scale(t2)).add(a.add(b).powf(alpha))
}

fn ulp_up(x: f64) -> f64 {
    f64::from_bits(x.to_bits() + 1)
}

fn ulp_down(x: f64) -> f64 {
    if x <= 0.0 {
        return x;
    }
    f64::from_bits(x.to_bits() - 1)
}

/// Largest change of `g` when coordinate `k` of `x` moves by up to two ulps.
pub fn jump(g: &Gauge, x: &[f64], k: usize) -> f64 {
    let base = g.eval(x);
    let mut worst: f64 = 0.0;
    let mut y = x.to_vec();
    for step in [ulp_up, ulp_down] {
        y[k] = x[k];
        for _ in 0..2 {
            y[k] = step(y[k]);
            worst = worst.max((g.eval(&y) - base).abs());
        }
    }
    worst
}

pub fn mixed(f: [Family; 3], a: [f64; 3]) -> VineSpec {
    let pc = |i: usize| PairCopula::new(f[i], ExponentMeasure::logistic(a[i]).unwrap()).unwrap();
    VineSpec::trivariate(pc(0), pc(1), pc(2)).unwrap()
}

pub fn random_measure(rng: &mut impl Rng) -> ExponentMeasure {
    let alpha = rng.gen_range(0.1..0.95);
    if rng.gen_bool(0.5) {
        ExponentMeasure::logistic(alpha).unwrap()
    } else {
        ExponentMeasure::asymmetric_logistic(alpha, rng.gen_range(0.05..0.95), rng.gen_range(0.05..0.95)).unwrap()
    }
}

/// A spread of analytic gauges in two to five dimensions.
pub fn gauge_zoo(rng: &mut impl Rng) -> Vec<Gauge> {
    let mut out = vec![
        gauge_bivariate(BivariateCase::Independence).unwrap(),
        gauge_bivariate(BivariateCase::Gaussian { rho: rng.gen_range(0.0..0.95) }).unwrap(),
        gauge_bivariate(BivariateCase::InvertedEv { measure: random_measure(rng) }).unwrap(),
        gauge_bivariate(BivariateCase::Bev { s1: rng.gen_range(-0.9..3.0), s2: rng.gen_range(-0.9..3.0) }).unwrap(),
        gauge_bivariate(BivariateCase::AsymmetricLogistic { alpha: rng.gen_range(0.1..0.95) }).unwrap(),
    ];
    let fams = [Ev, Iev];
    for f12 in fams {
        for f23 in fams {
            for f13 in fams {
                let a = [rng.gen_range(0.2..0.9), rng.gen_range(0.2..0.9), rng.gen_range(0.2..0.9)];
                out.push(gauge_for_spec(&mixed([f12, f23, f13], a)).unwrap());
            }
        }
    }
    for (d, s) in [(4, Structure::Dvine), (5, Structure::Dvine), (4, Structure::Cvine), (5, Structure::Cvine)] {
        let rng = std::cell::RefCell::new(&mut *rng);
        let spec = VineSpec::from_fn(d, s, |_| PairCopula::new(Iev, random_measure(*rng.borrow_mut())).unwrap())
            .unwrap();
        out.push(gauge_for_spec(&spec).unwrap());
    }
    out
}

/// Worst observed value of one sub-check against its tolerance.
pub struct Item {
    pub name: &'static str,
    pub worst: f64,
    pub tol: f64,
}

pub struct Report {
    pub items: Vec<Item>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.worst <= i.tol)
    }

    pub fn summary(&self) -> String {
        self.items
            .iter()
            .map(|i| {
                format!(
                    "{} {:.1e}{}{:.0e}",
                    i.name,
                    i.worst,
                    if i.worst <= i.tol { "<=" } else { ">" },
                    i.tol
                )
            })
            .collect::<Vec<_>>()
            .join("; ")
    }
}

fn measure_homogeneity(rng: &mut impl Rng) -> f64 {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let m = random_measure(rng);
        let (x, y, t) = (rng.gen_range(0.1..10.0), rng.gen_range(0.1..10.0), rng.gen_range(0.1..10.0));
        let pairs = [
            (m.eval_v(t * x, t * y).unwrap(), m.eval_v(x, y).unwrap() / t),
            (m.eval_v1(t * x, t * y).unwrap(), m.eval_v1(x, y).unwrap() / (t * t)),
            (m.eval_v2(t * x, t * y).unwrap(), m.eval_v2(x, y).unwrap() / (t * t)),
            (m.eval_v12(t * x, t * y).unwrap(), m.eval_v12(x, y).unwrap() / (t * t * t)),
        ];
        for (a, b) in pairs {
            worst = worst.max(rel_err(a, b));
        }
    }
    worst
}

fn gauge_homogeneity(rng: &mut impl Rng) -> f64 {
    let zoo = gauge_zoo(rng);
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let g = &zoo[rng.gen_range(0..zoo.len())];
        let x: Vec<f64> = (0..g.dim()).map(|_| rng.gen_range(0.0..5.0)).collect();
        let t = rng.gen_range(0.1..10.0);
        let tx: Vec<f64> = x.iter().map(|v| t * v).collect();
        worst = worst.max(rel_err(g.eval(&tx), t * g.eval(&x)));
    }
    worst
}

/// Grid of `n` log-spaced points in `[lo, hi]`.
fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64)).collect()
}

fn measure_derivatives(rng: &mut impl Rng) -> (f64, f64) {
    let grid = logspace(0.2, 5.0, 20);
    let mut fd: f64 = 0.0;
    let mut exact: f64 = 0.0;
    for _ in 0..4 {
        let m = random_measure(rng);
        for &x in &grid {
            for &y in &grid {
                let (hx, hy) = (1e-6 * x, 1e-6 * y);
                let v = m.eval_v(x, y).unwrap();
                let (v1, v2, v12) = (m.eval_v1(x, y).unwrap(), m.eval_v2(x, y).unwrap(), m.eval_v12(x, y).unwrap());
                let fd1 = central(|s| m.eval_v(s, y).unwrap(), x, hx);
                let fd2 = central(|s| m.eval_v(x, s).unwrap(), y, hy);
                let fd12 = central(|s| m.eval_v1(x, s).unwrap(), y, hy);
                fd = fd
                    .max(fd_err(v1, fd1, v, hx))
                    .max(fd_err(v2, fd2, v, hy))
                    .max(fd_err(v12, fd12, v1, hy));
                let hd = v_hyper(&m, x, y);
                exact = exact
                    .max(rel_err(v, hd.f))
                    .max(rel_err(v1, hd.fx))
                    .max(rel_err(v2, hd.fy))
                    .max(rel_err(v12, hd.fxy));
            }
        }
    }
    (fd, exact)
}

fn copula_derivatives(rng: &mut impl Rng) -> (f64, f64) {
    let grid: Vec<f64> = (1..=20).map(|k| k as f64 / 21.0).collect();
    let mut first: f64 = 0.0;
    let mut mixed: f64 = 0.0;
    for fam in [Ev, Iev] {
        let pc = PairCopula::new(fam, random_measure(rng)).unwrap();
        for &u in &grid {
            for &v in &grid {
                let h = 1e-6;
                let fd_h = central(|s| pc.cdf(u, s).unwrap(), v, h);
                let fd_c = central(|s| pc.hfunc(s, v).unwrap(), u, h);
                first = first
                    .max(fd_err(pc.hfunc(u, v).unwrap(), fd_h, 1.0, h))
                    .max(fd_err(pc.density(u, v).unwrap(), fd_c, 1.0, h));
                let k = 1e-4;
                let c = |a: f64, b: f64| pc.cdf(a, b).unwrap();
                let fd2 = (c(u + k, v + k) - c(u + k, v - k) - c(u - k, v + k) + c(u - k, v - k)) / (4.0 * k * k);
                mixed = mixed.max(rel_err(pc.density(u, v).unwrap(), fd2));
            }
        }
    }
    (first, mixed)
}

/// Round trip `u → h(u|v) → h⁻¹`. Returns the worst forward error for
/// `α ≥ 0.3` and the worst ratio to the conditioning bound
/// `1e-9 + 8ε / c(u, v)` over all `α`. Below `α ≈ 0.3`, `h(u|v)` can round to
/// within a few ulps of one, where `u` is not recoverable from `p`.
fn hinv_round_trip(rng: &mut impl Rng) -> (f64, f64) {
    let mut forward: f64 = 0.0;
    let mut conditioned: f64 = 0.0;
    for k in 0..2000 {
        let fam = if rng.gen_bool(0.5) { Ev } else { Iev };
        let strong = k % 2 == 1;
        let alpha = if strong { rng.gen_range(0.05..0.3) } else { rng.gen_range(0.3..0.95) };
        let m = if rng.gen_bool(0.5) {
            ExponentMeasure::logistic(alpha).unwrap()
        } else {
            ExponentMeasure::asymmetric_logistic(alpha, rng.gen_range(0.05..0.95), rng.gen_range(0.05..0.95)).unwrap()
        };
        let pc = PairCopula::new(fam, m).unwrap();
        let (u, v) = (rng.gen_range(1e-12..1.0), rng.gen_range(1e-12..1.0));
        let p = pc.hfunc(u, v).unwrap();
        let err = (pc.hinv(p, v).unwrap() - u).abs();
        if !strong {
            forward = forward.max(err);
        }
        let bound = 1e-9 + 8.0 * f64::EPSILON / pc.density(u, v).unwrap();
        conditioned = conditioned.max(err / bound);
    }
    (forward, conditioned)
}

/// Evaluate across every branch boundary of the piecewise trivariate gauges
/// and the piecewise bivariate ones.
fn branch_continuity(rng: &mut impl Rng) -> f64 {
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let a = [rng.gen_range(0.2..0.9), rng.gen_range(0.2..0.9), rng.gen_range(0.2..0.9)];
        let (s12, s23) = (1.0 / a[0] - 2.0, 1.0 / a[1] - 2.0);
        let x2 = rng.gen_range(0.1..5.0);
        let lo = rng.gen_range(0.0..x2);
        let hi = rng.gen_range(x2..x2 + 5.0);

        // Coordinate ties x1 = x2 and x3 = x2, with the other coordinate on either side.
        for p in [[Ev, Iev, Iev], [Ev, Iev, Ev], [Ev, Ev, Iev], [Ev, Ev, Ev]] {
            let g = gauge_for_spec(&mixed(p, a)).unwrap();
            for other in [lo, x2, hi] {
                worst = worst.max(jump(&g, &[x2, x2, other], 0));
                worst = worst.max(jump(&g, &[other, x2, x2], 2));
            }
        }

        // (IEV,IEV,EV): ℓ12(x1, x2) = ℓ23(x2, x3) holds exactly at x1 = x3 when c12 and c23 agree.
        let g = gauge_for_spec(&mixed([Iev, Iev, Ev], [a[0], a[0], a[2]])).unwrap();
        worst = worst.max(jump(&g, &[hi, x2, hi], 2)).max(jump(&g, &[lo, x2, lo], 0));

        // (EV,IEV,EV) for x1 > x2: the c13|2 switch sits at (2 + s12)(x1 − x2) = ℓ23(x2, x3) − x2.
        let spec = mixed([Ev, Iev, Ev], a);
        let g = gauge_for_spec(&spec).unwrap();
        let l23 = ExponentMeasure::logistic(a[1]).unwrap().stdf(x2, hi);
        worst = worst.max(jump(&g, &[x2 + (l23 - x2) / (2.0 + s12), x2, hi], 0));

        // (EV,EV,·) below the diagonal: the c13|2 switch at (1 + s12)(x2 − x1) = (1 + s23)(x2 − x3).
        for p in [[Ev, Ev, Iev], [Ev, Ev, Ev]] {
            let g = gauge_for_spec(&mixed(p, a)).unwrap();
            let x3 = x2 - (1.0 + s12) * (x2 - lo) / (1.0 + s23);
            if x3 > 0.0 {
                worst = worst.max(jump(&g, &[lo, x2, x3], 2));
            }
        }

        // Bivariate piecewise gauges switch on the diagonal.
        for case in [
            BivariateCase::Bev { s1: s12, s2: s23 },
            BivariateCase::AsymmetricLogistic { alpha: a[0] },
        ] {
            let g = gauge_bivariate(case).unwrap();
            worst = worst.max(jump(&g, &[x2, x2], 0));
        }
    }
    worst
}

/// The sampled structural invariant suite: homogeneity, derivative
/// consistency, h-inverse round trips and branch continuity.
pub fn invariant_suite(rng: &mut impl Rng) -> Report {
    let (first, mixed) = copula_derivatives(rng);
    let (fd, exact) = measure_derivatives(rng);
    let (forward, conditioned) = hinv_round_trip(rng);
    Report {
        items: vec![
            Item {
                name: "V homogeneity (orders -1/-2/-3)",
                worst: measure_homogeneity(rng),
                tol: 1e-12,
            },
            Item {
                name: "gauge homogeneity",
                worst: gauge_homogeneity(rng),
                tol: 1e-10,
            },
            Item {
                name: "V partials vs finite differences",
                worst: fd,
                tol: 1e-6,
            },
            Item {
                name: "V partials vs hyper-dual",
                worst: exact,
                tol: 1e-10,
            },
            Item {
                name: "h and c vs finite differences",
                worst: first,
                tol: 1e-6,
            },
            Item {
                name: "c vs mixed second difference of C",
                worst: mixed,
                tol: 1e-4,
            },
            Item {
                name: "hinv round trip (alpha>=0.3)",
                worst: forward,
                tol: 1e-9,
            },
            Item {
                name: "hinv error / conditioning bound (all alpha)",
                worst: conditioned,
                tol: 1.0,
            },
            Item {
                name: "branch continuity",
                worst: branch_continuity(rng),
                tol: 1e-12,
            },
        ],
    }
}

/// Kendall's tau-b in `O(n log n)` by merge-sort inversion counting.
pub fn kendall_tau(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let n = x.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]).then(y[a].total_cmp(&y[b])));
    let ties = |keys: &mut dyn Iterator<Item = f64>| -> u64 {
        let mut total = 0u64;
        let mut run = 0u64;
        let mut prev = f64::NAN;
        for k in keys {
            if k == prev {
                run += 1;
            } else {
                total += run * (run + 1) / 2;
                run = 0;
            }
            prev = k;
        }
        total + run * (run + 1) / 2
    };
    let tx = ties(&mut idx.iter().map(|&i| x[i]));
    let mut ys: Vec<f64> = idx.iter().map(|&i| y[i]).collect();
    let swaps = merge_count(&mut ys);
    let ty = ties(&mut ys.iter().copied());
    let n0 = (n as u64) * (n as u64 - 1) / 2;
    // Joint ties are negligible for continuous data and are ignored.
    let concordant_minus_discordant = n0 as f64 - tx as f64 - ty as f64 - 2.0 * swaps as f64;
    concordant_minus_discordant / (((n0 - tx) as f64) * ((n0 - ty) as f64)).sqrt()
}

fn merge_count(v: &mut [f64]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = merge_count(&mut v[..mid]) + merge_count(&mut v[mid..]);
    let mut merged = Vec::with_capacity(n);
    let (mut i, mut j) = (0, mid);
    while i < mid && j < n {
        if v[j] < v[i] {
            swaps += (mid - i) as u64;
            merged.push(v[j]);
            j += 1;
        } else {
            merged.push(v[i]);
            i += 1;
        }
    }
    merged.extend_from_slice(&v[i..mid]);
    merged.extend_from_slice(&v[j..n]);
    v.copy_from_slice(&merged);
    swaps
}

/// One-sample Kolmogorov–Smirnov statistic against Exp(1).
pub fn ks_exp1(sample: &[f64]) -> f64 {
    let mut s = sample.to_vec();
    s.sort_unstable_by(f64::total_cmp);
    let n = s.len() as f64;
    s.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = -(-x).exp_m1();
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}
