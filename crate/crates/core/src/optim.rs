//! Small derivative-free optimisers and a bracketing root finder.

use crate::error::{Error, Result};

/// Root of a continuous `f` on `[lo, hi]` by bisection.
///
/// Requires a sign change; stops when the bracket is narrower than `tol`.
pub fn bisect(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || flo.is_nan() || fhi.is_nan() {
        return Err(Error::NonBracketing { lo, hi });
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid == lo || mid == hi {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Golden-section search for a minimum of `f` on `[a, b]`.
///
/// Works on kinked unimodal functions, which parabolic steps handle badly.
pub fn golden(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Global-ish 1-D minimisation: evaluate `f` on `grid`, then refine the best
/// grid cell by golden-section search. `grid` must be sorted ascending.
pub fn scan_then_golden(mut f: impl FnMut(f64) -> f64, grid: &[f64], tol: f64) -> (f64, f64) {
    assert!(!grid.is_empty());
    let vals: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let mut best = 0;
    for (i, v) in vals.iter().enumerate() {
        if *v < vals[best] {
            best = i;
        }
    }
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(grid.len() - 1)];
    let (x, fx) = if hi > lo { golden(&mut f, lo, hi, tol) } else { (grid[best], vals[best]) };
    if fx <= vals[best] {
        (x, fx)
    } else {
        (grid[best], vals[best])
    }
}

/// Outcome of a Nelder–Mead run.
#[derive(Debug, Clone)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub fx: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Nelder–Mead simplex minimisation with standard coefficients.
///
/// Converges when the spread of function values across the simplex and its
/// diameter both fall below `tol`.
pub fn nelder_mead(
    mut f: impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    step: f64,
    tol: f64,
    max_iter: usize,
) -> SimplexResult {
    let n = x0.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += step;
        simplex.push(p);
    }
    let mut fv: Vec<f64> = simplex.iter().map(|p| f(p)).collect();
    let mut iterations = 0;
    let mut converged = false;
    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut trial2 = vec![0.0; n];

    while iterations < max_iter {
        iterations += 1;
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| fv[a].total_cmp(&fv[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        fv = order.iter().map(|&i| fv[i]).collect();

        let fspread = (fv[n] - fv[0]).abs();
        let diam = simplex[1..]
            .iter()
            .map(|p| p.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if fspread <= tol * (1.0 + fv[0].abs()) && diam <= tol.sqrt() {
            converged = true;
            break;
        }

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for p in &simplex[..n] {
            for (c, v) in centroid.iter_mut().zip(p) {
                *c += v / n as f64;
            }
        }
        let worst = simplex[n].clone();
        for k in 0..n {
            trial[k] = centroid[k] + (centroid[k] - worst[k]);
        }
        let fr = f(&trial);
        if fr < fv[0] {
            for k in 0..n {
                trial2[k] = centroid[k] + 2.0 * (centroid[k] - worst[k]);
            }
            let fe = f(&trial2);
            if fe < fr {
                simplex[n].copy_from_slice(&trial2);
                fv[n] = fe;
            } else {
                simplex[n].copy_from_slice(&trial);
                fv[n] = fr;
            }
            continue;
        }
        if fr < fv[n - 1] {
            simplex[n].copy_from_slice(&trial);
            fv[n] = fr;
            continue;
        }
        let (base, fbase) = if fr < fv[n] { (trial.clone(), fr) } else { (worst.clone(), fv[n]) };
        for k in 0..n {
            trial2[k] = centroid[k] + 0.5 * (base[k] - centroid[k]);
        }
        let fc = f(&trial2);
        if fc < fbase {
            simplex[n].copy_from_slice(&trial2);
            fv[n] = fc;
            continue;
        }
        let best = simplex[0].clone();
        for (p, v) in simplex.iter_mut().zip(fv.iter_mut()).skip(1) {
            for k in 0..n {
                p[k] = best[k] + 0.5 * (p[k] - best[k]);
            }
            *v = f(p);
        }
    }
    let mut bi = 0;
    for i in 1..=n {
        if fv[i] < fv[bi] {
            bi = i;
        }
    }
    SimplexResult {
        x: simplex[bi].clone(),
        fx: fv[bi],
        iterations,
        converged,
    }
}
