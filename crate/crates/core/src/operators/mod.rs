//! Observables acting on photon states.

pub mod fd;
mod position;

pub use position::{apply_position, apply_position_full, BOUNDARY_WIDTH};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{FrequencySign, PhysicalConstants};
use crate::polarization::{connection_ratio, Angles, Mode, Vec3};
use crate::products::{matched_product, norm_squared, weighted_product, ProductKind};
use crate::state::PhotonState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatorReport {
    pub expectation_re: f64,
    pub expectation_im: f64,
    pub norm_used: f64,
    pub hermiticity_residual: f64,
}

impl OperatorReport {
    pub fn expectation(&self) -> Complex64 {
        Complex64::new(self.expectation_re, self.expectation_im)
    }
}

/// `D^{1/2}`: multiply by `|k|`.
pub fn apply_d_sqrt(state: &PhotonState) -> PhotonState {
    let grid = state.grid_arc().clone();
    let c = grid.constants().c;
    state.map_nodes(move |_, idx, v| v * (grid.omega()[idx] / c))
}

/// `H = hbar c D^{1/2}`.
pub fn apply_hamiltonian(state: &PhotonState) -> PhotonState {
    let grid = state.grid_arc().clone();
    let hbar = grid.constants().hbar;
    state.map_nodes(move |_, idx, v| v * (hbar * grid.omega()[idx]))
}

/// `U^eps(tau)`: `c -> exp(-i eps omega tau) c`.
pub fn evolve(state: &PhotonState, tau: f64) -> PhotonState {
    let grid = state.grid_arc().clone();
    state.map_nodes(move |(_, sign), idx, v| v * Complex64::from_polar(1.0, -sign.value() * grid.omega()[idx] * tau))
}

/// Conjugate field `A_c = i D^{-1/2} d_ct A`: `c -> eps c`.
pub fn conjugate_field(state: &PhotonState) -> PhotonState {
    state.map_nodes(|(_, sign), _, v| v * sign.value())
}

/// Helicity `e_k . S`: transverse sectors scaled by lambda, others annihilated.
pub fn helicity_op(state: &PhotonState) -> PhotonState {
    state.map_nodes(|(mode, _), _, v| v * mode.helicity())
}

/// `P = hbar k`, one output per Cartesian component.
pub fn apply_momentum(state: &PhotonState) -> [PhotonState; 3] {
    let hbar = state.grid().constants().hbar;
    [0, 1, 2].map(|j| {
        let grid = state.grid_arc().clone();
        state.map_nodes(move |_, idx, v| v * (hbar * grid.k_at(idx)[j]))
    })
}

/// Intrinsic angular momentum along axis 3,
/// `hbar lambda [((cos t - m)/sin t)(e_theta . e3) + e_k . e3]`.
pub fn intrinsic_j3(k: Vec3, lambda: i32, m: i32, constants: &PhysicalConstants) -> Result<f64> {
    Mode::from_helicity(lambda)?;
    let a = Angles::of(k)?;
    let ratio = connection_ratio(&a, m)?;
    let e3_theta = a.e_theta()[2];
    let e3_k = a.e_k()[2];
    Ok(constants.hbar * lambda as f64 * (ratio * e3_theta + e3_k))
}

/// `<s, O s> / <s, s>` for a nodewise real multiplier `O(k)`.
fn nodewise_expectation<F: Fn(usize) -> f64 + Sync + Send>(state: &PhotonState, f: F) -> Result<f64> {
    let norm = norm_squared(state)?;
    let weighted = state.map_nodes(|_, idx, v| v * f(idx));
    let num = matched_product(state, &weighted)?.value().re;
    Ok(num / norm)
}

/// `<c e_k>`; the invariant (or Newton-Wigner) product supplies the weight.
pub fn velocity_expectation(state: &PhotonState) -> Result<Vec3> {
    let grid = state.grid();
    let c = grid.constants().c;
    let mut out = [0.0; 3];
    for (j, o) in out.iter_mut().enumerate() {
        *o = nodewise_expectation(state, |idx| {
            let w = grid.omega()[idx];
            if w == 0.0 {
                0.0
            } else {
                c * c * grid.k_at(idx)[j] / w
            }
        })?;
    }
    Ok(out)
}

/// `<hbar k>`.
pub fn momentum_expectation(state: &PhotonState) -> Result<Vec3> {
    let grid = state.grid();
    let hbar = grid.constants().hbar;
    let mut out = [0.0; 3];
    for (j, o) in out.iter_mut().enumerate() {
        *o = nodewise_expectation(state, |idx| hbar * grid.k_at(idx)[j])?;
    }
    Ok(out)
}

/// `<hbar omega>`.
pub fn energy_expectation(state: &PhotonState) -> Result<f64> {
    let grid = state.grid();
    let hbar = grid.constants().hbar;
    nodewise_expectation(state, |idx| hbar * grid.omega()[idx])
}

/// `<lambda>` over the transverse content.
pub fn helicity_expectation(state: &PhotonState) -> Result<f64> {
    let norm = norm_squared(state)?;
    Ok(matched_product(state, &helicity_op(state))?.value().re / norm)
}

/// `<x_j>` with the product matching the state's convention; the residual is
/// `|(s, x s) - (x s, s)*| / (|s|^2 L)` with `L` the box period.
pub fn position_report(state: &PhotonState) -> Result<[OperatorReport; 3]> {
    let norm = norm_squared(state)?;
    let xs = apply_position(state, state.alpha())?;
    let kind = ProductKind::of(state.normalization());
    let period = state.grid().period();
    let mut out = [OperatorReport { expectation_re: 0.0, expectation_im: 0.0, norm_used: norm, hermiticity_residual: 0.0 }; 3];
    for j in 0..3 {
        let left = weighted_product(state, &xs[j], kind)?.value();
        let right = weighted_product(&xs[j], state, kind)?.value();
        let e = left / norm;
        out[j] = OperatorReport {
            expectation_re: e.re,
            expectation_im: e.im,
            norm_used: norm,
            hermiticity_residual: (left - right.conj()).norm() / (norm * period),
        };
    }
    Ok(out)
}

/// `<x>` (real parts of [`position_report`]).
pub fn position_expectation(state: &PhotonState) -> Result<Vec3> {
    let r = position_report(state)?;
    Ok([r[0].expectation_re, r[1].expectation_re, r[2].expectation_re])
}

/// `|(s1, x_j s2) - (x_j s1, s2)| / (|s1| |s2| L)` for each component.
pub fn hermiticity_asymmetry(s1: &PhotonState, s2: &PhotonState) -> Result<Vec3> {
    s1.check_compatible(s2)?;
    let kind = ProductKind::of(s1.normalization());
    let n1 = norm_squared(s1)?.sqrt();
    let n2 = norm_squared(s2)?.sqrt();
    let x1 = apply_position(s1, s1.alpha())?;
    let x2 = apply_position(s2, s2.alpha())?;
    let period = s1.grid().period();
    let mut out = [0.0; 3];
    for j in 0..3 {
        let a = weighted_product(s1, &x2[j], kind)?.value();
        let b = weighted_product(&x1[j], s2, kind)?.value();
        out[j] = (a - b).norm() / (n1 * n2 * period);
    }
    Ok(out)
}

/// `|x c_y - y c_y| / |c_y|` over the whole lattice with unit node weights.
pub fn eigen_residual(state: &PhotonState, y: Vec3) -> Result<f64> {
    let xs = apply_position(state, state.alpha())?;
    let mut num = 0.0;
    let mut den = 0.0;
    for ((mode, sign), c) in state.sectors() {
        den += c.iter().map(|v| v.norm_sqr()).sum::<f64>();
        for j in 0..3 {
            let out = xs[j].coeff(mode, sign).ok_or(Error::InvalidArgument("missing output sector".into()))?;
            num += out.iter().zip(c).map(|(o, v)| (o - v * y[j]).norm_sqr()).sum::<f64>();
        }
    }
    if den == 0.0 {
        return Err(Error::NonNormalizable);
    }
    Ok((num / den).sqrt())
}

/// Keep only sectors of the given frequency sign.
pub fn project_sign(state: &PhotonState, sign: FrequencySign) -> PhotonState {
    state.filtered(|(_, s)| s == sign)
}
