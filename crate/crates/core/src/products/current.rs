//! Photon four-current, number density, continuity and Born density.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{k_to_x, spectral_divergence, FrequencySign, KGrid, MeasureKind};
use crate::polarization::{Mode, Vec3};
use crate::state::{PhotonState, SectorKey};
use crate::sum::{pairwise_map, pairwise_sum};
use crate::synthesis::polarized_components;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

type Four = [Vec<Complex64>; 4];

/// One sample of `J^mu`: `j0` is a number density, `jvec = c J^j` a flux.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurrentSample {
    pub j0: f64,
    pub jvec: Vec3,
    pub event: (f64, Vec3),
}

/// `J^0` and `c J^j` on the whole dual lattice. `imag_max` is the largest
/// imaginary part met before taking real parts.
#[derive(Debug, Clone, PartialEq)]
pub struct CurrentField {
    pub t: f64,
    pub j0: Vec<f64>,
    pub jvec: [Vec<f64>; 3],
    pub imag_max: f64,
}

impl CurrentField {
    /// `sum_x J^0 dx^3`.
    pub fn total(&self, grid: &KGrid) -> f64 {
        pairwise_sum(&self.j0) * grid.x_cell()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuityReport {
    pub t: f64,
    pub dt: f64,
    /// `max |d_t J^0 + div j|`.
    pub raw: f64,
    /// `max |J^0| c k_max`.
    pub scale: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BornDensity {
    pub rho: Vec<f64>,
    pub total: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParsevalReport {
    /// `sum_k dk^3/(2pi)^3 zeta |c|^2`.
    pub knorm: f64,
    /// `sum zeta |psi_lambda^eps|^2 dx^3` over sectors.
    pub xnorm: f64,
    pub relative: f64,
    /// `sum psi^2 dx^3` with the real `psi`; absent with negative-frequency content.
    pub real_xnorm: Option<f64>,
    /// `1/2 sum_k dk^3/(2pi)^3 [|C(k)|^2 + Re C(k) C(-k)]`, `C = sum_lambda c_lambda^+`.
    pub real_predicted: Option<f64>,
}

fn zeros(n: usize) -> Vec<Complex64> {
    vec![ZERO; n]
}

fn zeros4(n: usize) -> Four {
    [zeros(n), zeros(n), zeros(n), zeros(n)]
}

/// `i F sum_k dk^3/((2pi)^3 2 omega) f(k) c e^mu exp(-i eps(omega t - k.x))`.
fn potential_with<F>(state: &PhotonState, key: SectorKey, c: &[Complex64], t: f64, f: F) -> Result<Four>
where
    F: Fn(usize) -> Complex64 + Sync,
{
    let grid = state.grid();
    let (mode, sign) = key;
    let scaled: Vec<Complex64> = c.par_iter().enumerate().map(|(i, v)| if *v == ZERO { ZERO } else { v * f(i) }).collect();
    let comps = polarized_components(grid, mode, state.m(), &scaled)?;
    let pre = I * grid.constants().field_scale();
    let mut out = zeros4(grid.len());
    for (mu, comp) in comps.iter().enumerate() {
        if comp.iter().all(|v| *v == ZERO) {
            continue;
        }
        let mut x = k_to_x(grid, comp, MeasureKind::Invariant, sign, t)?;
        x.par_iter_mut().for_each(|v| *v *= pre);
        out[mu] = x;
    }
    Ok(out)
}

fn add_into(dst: &mut Four, src: &Four, w: f64) {
    for (d, s) in dst.iter_mut().zip(src) {
        d.par_iter_mut().zip(s.par_iter()).for_each(|(a, b)| *a += *b * w);
    }
}

/// `X*_nu Y^nu` with metric (+,-,-,-) at node `i`.
fn contract(x: &Four, y: &Four, i: usize) -> Complex64 {
    x[0][i].conj() * y[0][i] - x[1][i].conj() * y[1][i] - x[2][i].conj() * y[2][i] - x[3][i].conj() * y[3][i]
}

/// `J^mu = -(i eps0 c/hbar) A*_nu d<->^mu A_c^nu` with spectral derivatives.
pub fn current_field(state: &PhotonState, t: f64) -> Result<CurrentField> {
    let grid = state.grid();
    let n = grid.len();
    let consts = *grid.constants();
    let omega = grid.omega();
    let mut a = zeros4(n);
    let mut ac = zeros4(n);
    let mut dt_a = zeros4(n);
    let mut dt_ac = zeros4(n);
    let mut dx_a = [zeros4(n), zeros4(n), zeros4(n)];
    let mut dx_ac = [zeros4(n), zeros4(n), zeros4(n)];
    for (key, c) in state.sectors() {
        let eps = key.1.value();
        let f = potential_with(state, key, c, t, |_| Complex64::new(1.0, 0.0))?;
        add_into(&mut a, &f, 1.0);
        add_into(&mut ac, &f, eps);
        let d = potential_with(state, key, c, t, |i| Complex64::new(0.0, -eps * omega[i]))?;
        add_into(&mut dt_a, &d, 1.0);
        add_into(&mut dt_ac, &d, eps);
        for j in 0..3 {
            let d = potential_with(state, key, c, t, |i| Complex64::new(0.0, eps * grid.k_at(i)[j]))?;
            add_into(&mut dx_a[j], &d, 1.0);
            add_into(&mut dx_ac[j], &d, eps);
        }
    }
    let g = consts.density_coupling();
    let rows: Vec<(Complex64, [Complex64; 3])> = (0..n)
        .into_par_iter()
        .map(|i| {
            // d^0 = (1/c) d_t, d^j = -d_j
            let j0 = -I * g / consts.c * (contract(&a, &dt_ac, i) - contract(&dt_a, &ac, i));
            let jv = [0, 1, 2].map(|j| I * g * consts.c * (contract(&a, &dx_ac[j], i) - contract(&dx_a[j], &ac, i)));
            (j0, jv)
        })
        .collect();
    let imag_max = rows.iter().map(|(a, b)| b.iter().fold(a.im.abs(), |m, v| m.max(v.im.abs()))).fold(0.0, f64::max);
    Ok(CurrentField {
        t,
        j0: rows.iter().map(|r| r.0.re).collect(),
        jvec: [0, 1, 2].map(|j| rows.iter().map(|r| r.1[j].re).collect()),
        imag_max,
    })
}

/// `J^mu` at the dual-lattice point `x`.
pub fn four_current(state: &PhotonState, t: f64, x: Vec3) -> Result<CurrentSample> {
    let idx = state.grid().dual_index(x)?;
    let f = current_field(state, t)?;
    Ok(CurrentSample { j0: f.j0[idx], jvec: [f.jvec[0][idx], f.jvec[1][idx], f.jvec[2][idx]], event: (t, x) })
}

/// `(2 eps0 c/hbar) Re[-A*_nu D^{1/2} A^nu]` for each `(lambda, eps)` sector.
pub fn density_sector_resolved(state: &PhotonState, t: f64) -> Result<Vec<(SectorKey, Vec<f64>)>> {
    let grid = state.grid();
    let c_light = grid.constants().c;
    let g = 2.0 * grid.constants().density_coupling();
    let omega = grid.omega();
    state
        .sectors()
        .map(|(key, c)| {
            let a = potential_with(state, key, c, t, |_| Complex64::new(1.0, 0.0))?;
            let da = potential_with(state, key, c, t, |i| Complex64::new(omega[i] / c_light, 0.0))?;
            let rho = (0..grid.len()).into_par_iter().map(|i| -g * contract(&a, &da, i).re).collect();
            Ok((key, rho))
        })
        .collect()
}

/// Sum of [`density_sector_resolved`] over sectors.
pub fn density_epsilon_basis(state: &PhotonState, t: f64) -> Result<Vec<f64>> {
    let mut out = vec![0.0; state.grid().len()];
    for (_, rho) in density_sector_resolved(state, t)? {
        out.par_iter_mut().zip(rho.par_iter()).for_each(|(a, b)| *a += b);
    }
    Ok(out)
}

/// Continuity residual with `dt = dx/(10 c)`.
pub fn continuity_residual(state: &PhotonState, t: f64) -> Result<ContinuityReport> {
    let g = state.grid();
    continuity_residual_with_step(state, t, g.dx() / (10.0 * g.constants().c))
}

/// `max |d_t J^0 + div j| / (max |J^0| c k_max)`, `d_t` by centered difference.
pub fn continuity_residual_with_step(state: &PhotonState, t: f64, dt: f64) -> Result<ContinuityReport> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidArgument(format!("time step must be > 0, got {dt}")));
    }
    let grid = state.grid();
    let now = current_field(state, t)?;
    let scale = now.j0.iter().fold(0.0f64, |m, v| m.max(v.abs())) * grid.constants().c * grid.k_max();
    if scale == 0.0 {
        return Ok(ContinuityReport { t, dt, raw: 0.0, scale: 0.0, residual: 0.0 });
    }
    let fwd = current_field(state, t + dt)?;
    let bwd = current_field(state, t - dt)?;
    let jc = now.jvec.clone().map(|v| v.into_iter().map(|x| Complex64::new(x, 0.0)).collect::<Vec<_>>());
    let div = spectral_divergence(grid, &jc)?;
    let raw = (0..grid.len())
        .into_par_iter()
        .map(|i| ((fwd.j0[i] - bwd.j0[i]) / (2.0 * dt) + div[i].re).abs())
        .reduce(|| 0.0, f64::max);
    Ok(ContinuityReport { t, dt, raw, scale, residual: raw / scale })
}

/// `rho = psi^2` with its total `sum rho dx^3`.
pub fn born_density(grid: &KGrid, psi: &[f64]) -> Result<BornDensity> {
    grid.check_len(psi.len())?;
    let rho: Vec<f64> = psi.iter().map(|v| v * v).collect();
    let total = pairwise_sum(&rho) * grid.x_cell();
    Ok(BornDensity { rho, total })
}

/// As [`born_density`] for a complex array that must be real.
pub fn born_density_complex(grid: &KGrid, psi: &[Complex64]) -> Result<BornDensity> {
    let scale = psi.iter().fold(0.0f64, |m, v| m.max(v.re.abs()));
    if psi.iter().any(|v| v.im.abs() > 1e-12 * scale.max(f64::MIN_POSITIVE)) {
        return Err(Error::ComplexProfile);
    }
    born_density(grid, &psi.iter().map(|v| v.re).collect::<Vec<_>>())
}

/// k-space norm against the trivial-measure synthesis.
pub fn parseval_report(state: &PhotonState) -> Result<ParsevalReport> {
    if !state.is_normalizable() || state.is_zero() {
        return Err(Error::NonNormalizable);
    }
    let grid = state.grid();
    let mut knorm = 0.0;
    let mut xnorm = 0.0;
    for ((mode, sign), c) in state.sectors() {
        let psi = k_to_x(grid, c, MeasureKind::Trivial, sign, 0.0)?;
        knorm += mode.zeta() * pairwise_map(c.len(), |i| c[i].norm_sqr()) * grid.k_cell();
        xnorm += mode.zeta() * pairwise_map(psi.len(), |i| psi[i].norm_sqr()) * grid.x_cell();
    }
    if knorm == 0.0 {
        return Err(Error::NonNormalizable);
    }
    let has_minus = state.sector_keys().iter().any(|(m, s)| *s == FrequencySign::Minus && m.is_transverse());
    let (real_xnorm, real_predicted) = if has_minus {
        (None, None)
    } else {
        let psi = state.real_psi(0.0)?;
        let real = pairwise_map(psi.len(), |i| psi[i] * psi[i]) * grid.x_cell();
        let mut big_c = zeros(grid.len());
        for mode in Mode::TRANSVERSE {
            if let Some(c) = state.coeff(mode, FrequencySign::Plus) {
                big_c.iter_mut().zip(c).for_each(|(a, b)| *a += b);
            }
        }
        let pred = pairwise_map(grid.len(), |i| {
            let cross = grid.negated_index(i).map_or(0.0, |j| (big_c[i] * big_c[j]).re);
            big_c[i].norm_sqr() + cross
        }) * grid.k_cell()
            / 2.0;
        (Some(real), Some(pred))
    };
    Ok(ParsevalReport { knorm, xnorm, relative: (knorm - xnorm).abs() / knorm.abs(), real_xnorm, real_predicted })
}
