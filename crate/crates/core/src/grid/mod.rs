//! Momentum lattice, its dual position lattice and the Fourier bridges
//! between them.
//!
//! Arrays on either lattice are flat, row-major over `(axis1, axis2, axis3)`
//! with frequencies in signed (ascending) order, so index `i` on an axis maps
//! to `k_i = dk * (i - n/2 + offset/2)` and `x_i = dx * (i - n/2)`.

pub mod dump;
mod transform;

pub use transform::{k_to_x, spectral_divergence, spectral_gradient, x_to_k};

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Physical constants. Natural units (all ones) by default.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalConstants {
    pub c: f64,
    pub hbar: f64,
    pub eps0: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        PhysicalConstants { c: 1.0, hbar: 1.0, eps0: 1.0 }
    }
}

impl PhysicalConstants {
    pub fn new(c: f64, hbar: f64, eps0: f64) -> Result<Self> {
        let pc = PhysicalConstants { c, hbar, eps0 };
        pc.validate()?;
        Ok(pc)
    }

    /// SI values (CODATA 2018).
    pub fn si() -> Self {
        PhysicalConstants { c: 299_792_458.0, hbar: 1.054_571_817e-34, eps0: 8.854_187_812_8e-12 }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("c", self.c), ("hbar", self.hbar), ("eps0", self.eps0)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidConstants(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        Ok(())
    }

    pub fn mu0(&self) -> f64 {
        1.0 / (self.eps0 * self.c * self.c)
    }

    /// sqrt(hbar / eps0), the amplitude scale shared by A, E and pi.
    pub fn field_scale(&self) -> f64 {
        (self.hbar / self.eps0).sqrt()
    }

    /// Number-density coupling g = eps0 c / hbar.
    pub fn density_coupling(&self) -> f64 {
        self.eps0 * self.c / self.hbar
    }
}

/// Node weighting used by the k -> x bridge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureKind {
    /// Each node weighted by 1/(2 omega_k).
    Invariant,
    /// Unit weight.
    Trivial,
}

/// Frequency sign epsilon: `Plus` carries exp(-i omega t).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FrequencySign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl FrequencySign {
    pub const BOTH: [FrequencySign; 2] = [FrequencySign::Plus, FrequencySign::Minus];

    pub fn value(self) -> f64 {
        match self {
            FrequencySign::Plus => 1.0,
            FrequencySign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            FrequencySign::Plus => FrequencySign::Minus,
            FrequencySign::Minus => FrequencySign::Plus,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            FrequencySign::Plus => "+",
            FrequencySign::Minus => "-",
        }
    }
}

/// Uniform cubic momentum lattice with its dual periodic position lattice.
#[derive(Debug, Clone)]
pub struct KGrid {
    n: usize,
    dk: f64,
    offset: bool,
    constants: PhysicalConstants,
    omega: Vec<f64>,
}

impl PartialEq for KGrid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.dk == other.dk
            && self.offset == other.offset
            && self.constants == other.constants
    }
}

/// Build a lattice of `n` points per axis spanning `[-k_max, k_max)` in natural units.
pub fn make_grid(n: usize, k_max: f64, offset: bool) -> Result<KGrid> {
    KGrid::new(n, k_max, offset, PhysicalConstants::default())
}

impl KGrid {
    pub fn new(n: usize, k_max: f64, offset: bool, constants: PhysicalConstants) -> Result<KGrid> {
        if n < 4 {
            return Err(Error::InvalidGrid(format!("n must be >= 4, got {n}")));
        }
        if n % 2 != 0 {
            return Err(Error::InvalidGrid(format!("n must be even, got {n}")));
        }
        if !(k_max.is_finite() && k_max > 0.0) {
            return Err(Error::InvalidGrid(format!("k_max must be > 0, got {k_max}")));
        }
        constants.validate()?;
        let dk = 2.0 * k_max / n as f64;
        let mut grid = KGrid { n, dk, offset, constants, omega: Vec::new() };
        let omega = (0..grid.len()).map(|idx| constants.c * norm3(grid.k_at(idx))).collect();
        grid.omega = omega;
        Ok(grid)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dk(&self) -> f64 {
        self.dk
    }

    pub fn offset(&self) -> bool {
        self.offset
    }

    pub fn constants(&self) -> &PhysicalConstants {
        &self.constants
    }

    pub fn k_max(&self) -> f64 {
        self.dk * self.n as f64 / 2.0
    }

    /// Dual lattice spacing 2 pi / (n dk).
    pub fn dx(&self) -> f64 {
        2.0 * PI / (self.n as f64 * self.dk)
    }

    /// Period of the dual box, 2 pi / dk.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.dk
    }

    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// dk^3 / (2 pi)^3.
    pub fn k_cell(&self) -> f64 {
        (self.dk / (2.0 * PI)).powi(3)
    }

    /// dx^3.
    pub fn x_cell(&self) -> f64 {
        self.dx().powi(3)
    }

    fn shift(&self) -> f64 {
        if self.offset {
            0.5
        } else {
            0.0
        }
    }

    /// Per-axis momentum coordinate of index `i`.
    pub fn axis_k(&self, i: usize) -> f64 {
        self.dk * (i as f64 - (self.n / 2) as f64 + self.shift())
    }

    /// Per-axis position coordinate of dual index `j`.
    pub fn axis_x(&self, j: usize) -> f64 {
        self.dx() * (j as f64 - (self.n / 2) as f64)
    }

    pub fn index(&self, i: usize, j: usize, l: usize) -> usize {
        (i * self.n + j) * self.n + l
    }

    pub fn coords(&self, idx: usize) -> [usize; 3] {
        let n = self.n;
        [idx / (n * n), (idx / n) % n, idx % n]
    }

    pub fn k_at(&self, idx: usize) -> [f64; 3] {
        let [i, j, l] = self.coords(idx);
        [self.axis_k(i), self.axis_k(j), self.axis_k(l)]
    }

    pub fn x_at(&self, idx: usize) -> [f64; 3] {
        let [i, j, l] = self.coords(idx);
        [self.axis_x(i), self.axis_x(j), self.axis_x(l)]
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn has_zero_mode(&self) -> bool {
        !self.offset
    }

    /// Lattice index of wavevector `k`, if it is a node.
    pub fn node_index(&self, k: [f64; 3]) -> Result<usize> {
        let mut ids = [0usize; 3];
        for a in 0..3 {
            let f = k[a] / self.dk + (self.n / 2) as f64 - self.shift();
            let r = f.round();
            if (f - r).abs() > 1e-9 || r < 0.0 || r >= self.n as f64 {
                return Err(Error::OffLattice(k[0], k[1], k[2]));
            }
            ids[a] = r as usize;
        }
        Ok(self.index(ids[0], ids[1], ids[2]))
    }

    /// Dual-lattice index of position `x`, if it is a lattice point of the box.
    pub fn dual_index(&self, x: [f64; 3]) -> Result<usize> {
        let dx = self.dx();
        let mut ids = [0usize; 3];
        for a in 0..3 {
            let f = x[a] / dx + (self.n / 2) as f64;
            let r = f.round();
            if (f - r).abs() > 1e-9 || r < 0.0 || r >= self.n as f64 {
                return Err(Error::OffDualLattice(x[0], x[1], x[2]));
            }
            ids[a] = r as usize;
        }
        Ok(self.index(ids[0], ids[1], ids[2]))
    }

    /// True when the node lies within `width` nodes of the lattice edge on any axis.
    pub fn near_boundary(&self, idx: usize, width: usize) -> bool {
        self.coords(idx).iter().any(|&c| c < width || c + width >= self.n)
    }

    /// Index of the node at `-k`, when it lies on the lattice.
    pub fn negated_index(&self, idx: usize) -> Option<usize> {
        let n = self.n;
        let c = self.coords(idx);
        if self.offset {
            return Some(self.index(n - 1 - c[0], n - 1 - c[1], n - 1 - c[2]));
        }
        if c.iter().any(|&v| v == 0) {
            return None;
        }
        Some(self.index(n - c[0], n - c[1], n - c[2]))
    }

    pub fn check_len(&self, got: usize) -> Result<()> {
        if got != self.len() {
            return Err(Error::ShapeMismatch { expected: self.len(), got });
        }
        Ok(())
    }
}

/// c |k| for a lattice node.
pub fn omega_at(grid: &KGrid, k: [f64; 3]) -> Result<f64> {
    let idx = grid.node_index(k)?;
    Ok(grid.omega[idx])
}

pub(crate) fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unshifted_nodes() {
        let g = make_grid(8, 4.0, false).unwrap();
        assert_eq!(g.dk(), 1.0);
        let axis: Vec<f64> = (0..8).map(|i| g.axis_k(i)).collect();
        assert_eq!(axis, vec![-4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn shifted_nodes_avoid_origin() {
        let g = make_grid(8, 4.0, true).unwrap();
        let axis: Vec<f64> = (0..8).map(|i| g.axis_k(i)).collect();
        assert_eq!(axis, vec![-3.5, -2.5, -1.5, -0.5, 0.5, 1.5, 2.5, 3.5]);
        let min = g.omega().iter().cloned().fold(f64::INFINITY, f64::min);
        assert!((min - 3f64.sqrt() * 0.5).abs() < 1e-15);
        assert!(g.omega().iter().all(|&w| w > 0.0));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(make_grid(3, 4.0, false), Err(Error::InvalidGrid(_))));
        assert!(matches!(make_grid(2, 4.0, false), Err(Error::InvalidGrid(_))));
        assert!(matches!(make_grid(8, 0.0, false), Err(Error::InvalidGrid(_))));
        assert!(matches!(make_grid(8, -1.0, true), Err(Error::InvalidGrid(_))));
    }

    #[test]
    fn dual_lattice_geometry() {
        let g = make_grid(16, 4.0, true).unwrap();
        assert!((g.dx() - 2.0 * PI / (16.0 * 0.5)).abs() < 1e-15);
        assert!((g.period() - 16.0 * g.dx()).abs() < 1e-12);
    }

    #[test]
    fn omega_examples() {
        let g = make_grid(8, 4.0, false).unwrap();
        assert_eq!(omega_at(&g, [0.0, 0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(omega_at(&g, [3.0, -4.0, 0.0]).unwrap(), 5.0);
        let c2 = PhysicalConstants::new(2.0, 1.0, 1.0).unwrap();
        let g2 = KGrid::new(8, 4.0, false, c2).unwrap();
        assert!((omega_at(&g2, [1.0, 1.0, 1.0]).unwrap() - 2.0 * 3f64.sqrt()).abs() < 1e-15);
        assert!(matches!(omega_at(&g, [0.5, 0.0, 0.0]), Err(Error::OffLattice(..))));
    }

    #[test]
    fn omega_table_matches_lookup_exactly() {
        let g = make_grid(8, 2.0, true).unwrap();
        for idx in 0..g.len() {
            assert_eq!(omega_at(&g, g.k_at(idx)).unwrap(), g.omega()[idx]);
        }
    }

    #[test]
    fn constants_validation() {
        assert!(PhysicalConstants::new(0.0, 1.0, 1.0).is_err());
        assert!(PhysicalConstants::new(1.0, f64::NAN, 1.0).is_err());
        let si = PhysicalConstants::si();
        assert!((si.mu0() - 1.256_637_062e-6).abs() < 1e-14);
    }
}
