//! Boundary meshes of the unit level set of a gauge.

use super::Gauge;
use crate::error::{Error, Result};

/// One mesh point: a direction on the unit simplex, where its ray meets
/// `{g = 1}`, and `g` re-evaluated there.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshRow {
    pub direction: Vec<f64>,
    pub boundary: Vec<f64>,
    pub check: f64,
}

/// Lattice points `m / (k − 1)` of the unit simplex in `d` coordinates,
/// where `m` runs over the non-negative integer vectors summing to `k − 1`.
/// There are `k` points per edge of the simplex; for `d = 3` that is
/// `k(k + 1)/2` directions in total.
pub fn simplex_directions(d: usize, k: usize) -> Result<Vec<Vec<f64>>> {
    if d == 0 {
        return Err(Error::domain("dimension must be positive"));
    }
    if k < 2 {
        return Err(Error::domain(format!("resolution must be at least 2, got {k}")));
    }
    let total = k - 1;
    let mut out = Vec::new();
    let mut parts = vec![0usize; d];
    fill(&mut parts, 0, total, &mut out, total as f64);
    Ok(out)
}

fn fill(parts: &mut [usize], pos: usize, left: usize, out: &mut Vec<Vec<f64>>, total: f64) {
    if pos + 1 == parts.len() {
        parts[pos] = left;
        out.push(parts.iter().map(|&m| m as f64 / total).collect());
        return;
    }
    for m in (0..=left).rev() {
        parts[pos] = m;
        fill(parts, pos + 1, left - m, out, total);
    }
}

/// Boundary points of `{g = 1}` along every direction of
/// [`simplex_directions`].
pub fn boundary_mesh(g: &Gauge, k: usize) -> Result<Vec<MeshRow>> {
    simplex_directions(g.dim(), k)?
        .into_iter()
        .map(|w| {
            let b = g.boundary_point(&w)?;
            let check = g.try_eval(&b)?;
            Ok(MeshRow {
                direction: w,
                boundary: b,
                check,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauge::{gauge_bivariate, BivariateCase};

    #[test]
    fn lattice_sizes() {
        assert_eq!(simplex_directions(2, 3).unwrap(), vec![vec![1.0, 0.0], vec![0.5, 0.5], vec![0.0, 1.0]]);
        assert_eq!(simplex_directions(3, 5).unwrap().len(), 15);
        assert!(simplex_directions(3, 1).is_err());
    }

    #[test]
    fn independence_is_the_anti_diagonal() {
        let g = gauge_bivariate(BivariateCase::Independence).unwrap();
        for row in boundary_mesh(&g, 7).unwrap() {
            assert!((row.boundary[0] + row.boundary[1] - 1.0).abs() < 1e-15);
            assert!((row.check - 1.0).abs() < 1e-12);
        }
    }
}
