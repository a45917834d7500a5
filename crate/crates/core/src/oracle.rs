//! Slow reference sums: one node at a time, one thread, no transforms.

use std::time::{Duration, Instant};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::FrequencySign;
use crate::polarization::{Mode, Vec3};
use crate::state::{PhotonState, SectorKey};

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult<T> {
    pub value: T,
    pub node_count: usize,
    pub elapsed: Duration,
}

/// `A^mu` and the per-sector `psi` at one event.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleField {
    pub a: [Complex64; 4],
    pub psi: Vec<(SectorKey, Complex64)>,
}

fn zeta(mode: Mode) -> f64 {
    if mode == Mode::Scalar {
        -1.0
    } else {
        1.0
    }
}

fn same_grid(s1: &PhotonState, s2: &PhotonState) -> Result<()> {
    if s1.grid() != s2.grid() {
        return Err(Error::GridMismatch);
    }
    Ok(())
}

fn product(s1: &PhotonState, s2: &PhotonState, nw: bool) -> Result<OracleResult<Complex64>> {
    same_grid(s1, s2)?;
    let start = Instant::now();
    let g = s1.grid();
    let dk = g.dk();
    let cell = dk * dk * dk / (8.0 * std::f64::consts::PI.powi(3));
    let mut total = Complex64::new(0.0, 0.0);
    let mut count = 0;
    for mode in [Mode::Scalar, Mode::Plus, Mode::Minus, Mode::Longitudinal] {
        for sign in [FrequencySign::Plus, FrequencySign::Minus] {
            let (Some(a), Some(b)) = (s1.coeff(mode, sign), s2.coeff(mode, sign)) else {
                continue;
            };
            for idx in 0..g.len() {
                let mut term = a[idx].conj() * b[idx] * zeta(mode) * cell;
                if nw {
                    let k = g.k_at(idx);
                    let w = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt() * g.constants().c;
                    if term != Complex64::new(0.0, 0.0) {
                        if w == 0.0 {
                            return Err(Error::ZeroFrequencyNode);
                        }
                        term /= 2.0 * w;
                    }
                }
                total += term;
                count += 1;
            }
        }
    }
    Ok(OracleResult { value: total, node_count: count, elapsed: start.elapsed() })
}

/// `sum_k dk^3/(2pi)^3 sum_{lambda,eps} zeta c1* c2`, ignoring the convention tags.
pub fn oracle_inner_product(s1: &PhotonState, s2: &PhotonState) -> Result<OracleResult<Complex64>> {
    product(s1, s2, false)
}

/// Same sum with the extra weight `1/(2 omega)`.
pub fn oracle_inner_product_nw(s1: &PhotonState, s2: &PhotonState) -> Result<OracleResult<Complex64>> {
    product(s1, s2, true)
}

/// `e^mu` from the spherical basis: `(e_theta + i lambda e_phi) e^{i lambda m phi} / sqrt 2`.
fn unit(mode: Mode, k: Vec3, m: i32) -> Result<[Complex64; 4]> {
    let z = Complex64::new(0.0, 0.0);
    if mode == Mode::Scalar {
        return Ok([Complex64::new(1.0, 0.0), z, z, z]);
    }
    let r = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
    if r == 0.0 {
        return Err(Error::UndefinedDirection);
    }
    let theta = (k[2] / r).clamp(-1.0, 1.0).acos();
    let phi = k[1].atan2(k[0]);
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    if mode == Mode::Longitudinal {
        return Ok([z, (st * cp).into(), (st * sp).into(), ct.into()]);
    }
    let l = if mode == Mode::Plus { 1.0 } else { -1.0 };
    if st == 0.0 && (m as f64) != ct {
        return Err(Error::PoleSingularity { theta, m });
    }
    let et = [ct * cp, ct * sp, -st];
    let ep = [-sp, cp, 0.0];
    let ph = Complex64::from_polar(1.0 / 2f64.sqrt(), l * m as f64 * phi);
    Ok([z, ph * Complex64::new(et[0], l * ep[0]), ph * Complex64::new(et[1], l * ep[1]), ph * Complex64::new(et[2], l * ep[2])])
}

/// `A^mu = i sqrt(hbar/eps0) sum dk^3/((2pi)^3 2 omega) c e^mu e^{-i eps (omega t - k.x)}` and
/// `psi = sum dk^3/(2pi)^3 c e^{-i eps (omega t - k.x)}`, node by node.
pub fn oracle_field(state: &PhotonState, t: f64, x: Vec3) -> Result<OracleResult<OracleField>> {
    let start = Instant::now();
    let g = state.grid();
    let consts = g.constants();
    let dk = g.dk();
    let cell = dk * dk * dk / (8.0 * std::f64::consts::PI.powi(3));
    let f = (consts.hbar / consts.eps0).sqrt();
    let mut a = [Complex64::new(0.0, 0.0); 4];
    let mut psi = Vec::new();
    let mut count = 0;
    for mode in [Mode::Scalar, Mode::Plus, Mode::Minus, Mode::Longitudinal] {
        for sign in [FrequencySign::Plus, FrequencySign::Minus] {
            let Some(c) = state.coeff(mode, sign) else {
                continue;
            };
            let eps = if sign == FrequencySign::Plus { 1.0 } else { -1.0 };
            let mut p = Complex64::new(0.0, 0.0);
            for idx in 0..g.len() {
                count += 1;
                if c[idx] == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let k = g.k_at(idx);
                let w = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt() * consts.c;
                if w == 0.0 {
                    return Err(Error::ZeroFrequencyNode);
                }
                let phase = Complex64::from_polar(1.0, -eps * (w * t - k[0] * x[0] - k[1] * x[1] - k[2] * x[2]));
                let term = c[idx] * phase * cell;
                p += term;
                let e = unit(mode, k, state.m())?;
                for mu in 0..4 {
                    a[mu] += Complex64::new(0.0, f) * term * e[mu] / (2.0 * w);
                }
            }
            psi.push(((mode, sign), p));
        }
    }
    Ok(OracleResult { value: OracleField { a, psi }, node_count: count, elapsed: start.elapsed() })
}

/// `sum zeta hbar omega |c|^2 dk^3/(2pi)^3`, the unnormalized energy.
pub fn oracle_energy(state: &PhotonState) -> Result<OracleResult<f64>> {
    let start = Instant::now();
    let g = state.grid();
    let consts = g.constants();
    let dk = g.dk();
    let cell = dk * dk * dk / (8.0 * std::f64::consts::PI.powi(3));
    let mut total = 0.0;
    let mut count = 0;
    for ((mode, _), c) in state.sectors() {
        for (idx, v) in c.iter().enumerate() {
            let k = g.k_at(idx);
            let w = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt() * consts.c;
            total += zeta(mode) * consts.hbar * w * v.norm_sqr() * cell;
            count += 1;
        }
    }
    Ok(OracleResult { value: total, node_count: count, elapsed: start.elapsed() })
}
