//! Fourth-order finite differences along one lattice axis, one-sided on the
//! two outermost shells.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::KGrid;

const CENTRAL: [(isize, f64); 4] = [(-2, 1.0), (-1, -8.0), (1, 8.0), (2, -1.0)];
const EDGE0: [f64; 5] = [-25.0, 48.0, -36.0, 16.0, -3.0];
const EDGE1: [f64; 5] = [-3.0, -10.0, 18.0, -6.0, 1.0];

/// `d f / d k_axis` on every node.
pub fn derivative(grid: &KGrid, f: &[Complex64], axis: usize) -> Result<Vec<Complex64>> {
    grid.check_len(f.len())?;
    let n = grid.n();
    if n < 6 {
        return Err(Error::InvalidGrid(format!("finite differences need n >= 6, got {n}")));
    }
    let stride = match axis {
        0 => n * n,
        1 => n,
        2 => 1,
        _ => return Err(Error::InvalidArgument(format!("axis {axis} out of range"))),
    };
    let inv = 1.0 / (12.0 * grid.dk());
    Ok((0..f.len())
        .into_par_iter()
        .map(|idx| {
            let i = grid.coords(idx)[axis];
            let base = idx - i * stride;
            let at = |p: usize| f[base + p * stride];
            let s = if i >= 2 && i + 2 < n {
                CENTRAL.iter().map(|&(o, w)| at((i as isize + o) as usize) * w).sum()
            } else if i < 2 {
                let w = if i == 0 { &EDGE0 } else { &EDGE1 };
                (0..5).map(|p| at(p) * w[p]).sum::<Complex64>()
            } else {
                let w = if i == n - 1 { &EDGE0 } else { &EDGE1 };
                -(0..5).map(|p| at(n - 1 - p) * w[p]).sum::<Complex64>()
            };
            s * inv
        })
        .collect())
}
