//! Position operator `x^(alpha) = i d_k - i alpha k/k^2 + (k x S)/k^2 - sigma a^(m)`
//! in the Cartesian vector representation.

use num_complex::Complex64;
use rayon::prelude::*;

use super::fd::derivative;
use crate::error::{Error, Result};
use crate::grid::{FrequencySign, KGrid};
use crate::polarization::{add3, cdot, connection_ratio, mat_vec, Angles, CVec3, Mode, SpinMatrices, Tetrad, Vec3};
use crate::state::{boundary_ratio, Normalization, PhotonState, BOUNDARY_DECAY};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Nodes within this many shells of the edge must carry negligible content.
pub const BOUNDARY_WIDTH: usize = 2;

struct NodeGeometry {
    k2: f64,
    tetrad: Tetrad,
    /// `d_j e_lambda` for lambda = +1, -1.
    grad_e: [[CVec3; 3]; 2],
    /// `d_j khat`.
    grad_khat: [Vec3; 3],
    connection: Vec3,
    sigma: [[Complex64; 3]; 3],
    k_cross_s: [[[Complex64; 3]; 3]; 3],
}

fn geometry(k: Vec3, m: i32, spin: &SpinMatrices) -> Result<NodeGeometry> {
    let a = Angles::of(k)?;
    let tetrad = Tetrad::at(k, m)?;
    let ratio = connection_ratio(&a, m)?;
    let kn = a.k;
    let (et, ep, ek) = (a.e_theta(), a.e_phi(), a.e_k());
    let grad_e = [1i32, -1].map(|lambda| {
        let l = lambda as f64;
        let e = if lambda == 1 { tetrad.plus } else { tetrad.minus };
        let ph = Complex64::from_polar(std::f64::consts::FRAC_1_SQRT_2 / kn, (lambda * m) as f64 * a.phi);
        [0, 1, 2].map(|j| {
            [0, 1, 2].map(|c| -ph * (et[j] * ek[c]) + ep[j] * (-I * l * (ratio / kn) * e[c] - I * l * ph * ek[c]))
        })
    });
    let grad_khat = [0, 1, 2].map(|j| [0, 1, 2].map(|c| ((j == c) as i32 as f64 - ek[j] * ek[c]) / kn));
    let r = ratio / kn;
    Ok(NodeGeometry {
        k2: kn * kn,
        tetrad,
        grad_e,
        grad_khat,
        connection: [r * ep[0], r * ep[1], r * ep[2]],
        sigma: spin.dot(ek),
        k_cross_s: [0, 1, 2].map(|j| spin.cross(k, j)),
    })
}

/// Coefficient sets for one frequency sign, in the positive-frequency picture.
struct Sectors {
    plus: Option<Vec<Complex64>>,
    minus: Option<Vec<Complex64>>,
    longitudinal: Option<Vec<Complex64>>,
    scalar: Option<Vec<Complex64>>,
}

fn conj_all(v: &[Complex64]) -> Vec<Complex64> {
    v.par_iter().map(|c| c.conj()).collect()
}

/// Negative-frequency content maps onto the positive-frequency problem by
/// complex conjugation, under which `e_lambda* = e_-lambda`.
fn to_plus_picture(state: &PhotonState, sign: FrequencySign) -> Sectors {
    let get = |mode| state.coeff(mode, sign).map(|v| v.to_vec());
    match sign {
        FrequencySign::Plus => Sectors {
            plus: get(Mode::Plus),
            minus: get(Mode::Minus),
            longitudinal: get(Mode::Longitudinal),
            scalar: get(Mode::Scalar),
        },
        FrequencySign::Minus => {
            let getc = |mode| state.coeff(mode, sign).map(conj_all);
            Sectors {
                plus: getc(Mode::Minus),
                minus: getc(Mode::Plus),
                longitudinal: getc(Mode::Longitudinal),
                scalar: getc(Mode::Scalar),
            }
        }
    }
}

fn from_plus_picture(out: Sectors, sign: FrequencySign) -> Vec<(Mode, Vec<Complex64>)> {
    let mut v = Vec::new();
    let (p, mi) = match sign {
        FrequencySign::Plus => (Mode::Plus, Mode::Minus),
        FrequencySign::Minus => (Mode::Minus, Mode::Plus),
    };
    let fix = |x: Vec<Complex64>| if sign == FrequencySign::Plus { x } else { conj_all(&x) };
    if let Some(x) = out.plus {
        v.push((p, fix(x)));
    }
    if let Some(x) = out.minus {
        v.push((mi, fix(x)));
    }
    if let Some(x) = out.longitudinal {
        v.push((Mode::Longitudinal, fix(x)));
    }
    if let Some(x) = out.scalar {
        v.push((Mode::Scalar, fix(x)));
    }
    v
}

fn grad(grid: &KGrid, f: &Option<Vec<Complex64>>) -> Result<Option<[Vec<Complex64>; 3]>> {
    match f {
        None => Ok(None),
        Some(v) => Ok(Some([derivative(grid, v, 0)?, derivative(grid, v, 1)?, derivative(grid, v, 2)?])),
    }
}

fn apply_plus_picture(
    grid: &KGrid,
    geo: &[NodeGeometry],
    s: &Sectors,
    keep_longitudinal: bool,
) -> Result<[Sectors; 3]> {
    let gp = grad(grid, &s.plus)?;
    let gm = grad(grid, &s.minus)?;
    let gl = grad(grid, &s.longitudinal)?;
    let g0 = grad(grid, &s.scalar)?;
    let has_vector = s.plus.is_some() || s.minus.is_some() || s.longitudinal.is_some();
    let at = |v: &Option<Vec<Complex64>>, idx: usize| v.as_ref().map_or(ZERO, |x| x[idx]);
    let dat = |v: &Option<[Vec<Complex64>; 3]>, j: usize, idx: usize| v.as_ref().map_or(ZERO, |x| x[j][idx]);

    // per node, per component: (plus, minus, longitudinal, scalar)
    let rows: Vec<[[Complex64; 4]; 3]> = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let g = &geo[idx];
            let (cp, cm, c3) = (at(&s.plus, idx), at(&s.minus, idx), at(&s.longitudinal, idx));
            let khat = g.tetrad.khat;
            let kh_c = [khat[0].into(), khat[1].into(), khat[2].into()];
            let scale = |v: &CVec3, f: Complex64| [v[0] * f, v[1] * f, v[2] * f];
            let v = add3(add3(scale(&g.tetrad.plus, cp), scale(&g.tetrad.minus, cm)), scale(&kh_c, c3));
            let sigma_v = mat_vec(&g.sigma, &v);
            [0, 1, 2].map(|j| {
                let mut out = [ZERO; 4];
                if has_vector {
                    let gk: CVec3 = [g.grad_khat[j][0].into(), g.grad_khat[j][1].into(), g.grad_khat[j][2].into()];
                    let dv = add3(
                        add3(
                            add3(scale(&g.tetrad.plus, dat(&gp, j, idx)), scale(&g.grad_e[0][j], cp)),
                            add3(scale(&g.tetrad.minus, dat(&gm, j, idx)), scale(&g.grad_e[1][j], cm)),
                        ),
                        add3(scale(&kh_c, dat(&gl, j, idx)), scale(&gk, c3)),
                    );
                    let ks = mat_vec(&g.k_cross_s[j], &v);
                    let w: CVec3 = [0, 1, 2].map(|c| {
                        I * dv[c] + ks[c] / g.k2 - sigma_v[c] * g.connection[j]
                    });
                    out[0] = cdot(&g.tetrad.plus, &w);
                    out[1] = cdot(&g.tetrad.minus, &w);
                    out[2] = cdot(&kh_c, &w);
                }
                if s.scalar.is_some() {
                    out[3] = I * dat(&g0, j, idx);
                }
                out
            })
        })
        .collect();

    let column = |j: usize, c: usize| -> Vec<Complex64> { rows.iter().map(|r| r[j][c]).collect() };
    Ok([0, 1, 2].map(|j| Sectors {
        plus: (has_vector).then(|| column(j, 0)),
        minus: (has_vector).then(|| column(j, 1)),
        longitudinal: (has_vector && keep_longitudinal).then(|| column(j, 2)),
        scalar: s.scalar.is_some().then(|| column(j, 3)),
    }))
}

pub(crate) fn check_alpha(state: &PhotonState, alpha: f64) -> Result<()> {
    let conv = Normalization::from_alpha(alpha)?;
    if conv != state.normalization() {
        return Err(Error::ConventionMismatch { expected: state.alpha(), got: alpha });
    }
    Ok(())
}

fn apply_impl(state: &PhotonState, alpha: f64, keep_longitudinal: bool) -> Result<[PhotonState; 3]> {
    check_alpha(state, alpha)?;
    let grid = state.grid();
    if state.is_normalizable() {
        for (_, v) in state.sectors() {
            let ratio = boundary_ratio(grid, v, BOUNDARY_WIDTH);
            if ratio >= BOUNDARY_DECAY {
                return Err(Error::BoundarySupport { ratio, limit: BOUNDARY_DECAY });
            }
        }
    }
    // x^(alpha) = omega^alpha x^(0) omega^-alpha
    let omega = grid.omega();
    let inner = if alpha == 0.0 { state.clone() } else { state.map_nodes(|_, idx, v| v * omega[idx].powf(-alpha)) };
    let spin = SpinMatrices::new();
    let m = state.m();
    let geo: Vec<NodeGeometry> =
        (0..grid.len()).into_par_iter().map(|idx| geometry(grid.k_at(idx), m, &spin)).collect::<Result<_>>()?;
    let mut outs: [Vec<(FrequencySign, Mode, Vec<Complex64>)>; 3] = Default::default();
    for sign in FrequencySign::BOTH {
        if !state.sector_keys().iter().any(|(_, s)| *s == sign) {
            continue;
        }
        let sec = to_plus_picture(&inner, sign);
        let keep = keep_longitudinal || sec.longitudinal.is_some();
        let res = apply_plus_picture(grid, &geo, &sec, keep)?;
        for (j, r) in res.into_iter().enumerate() {
            for (mode, v) in from_plus_picture(r, sign) {
                outs[j].push((sign, mode, v));
            }
        }
    }
    let build = |parts: Vec<(FrequencySign, Mode, Vec<Complex64>)>| -> Result<PhotonState> {
        let mut s = PhotonState::zero(state.grid_arc(), state.normalization(), m);
        for (sign, mode, v) in parts {
            s = s.with_sector(mode, sign, v)?;
        }
        let s = if alpha == 0.0 { s } else { s.map_nodes(|_, idx, v| v * omega[idx].powf(alpha)) };
        Ok(s.with_normalizable(state.is_normalizable()))
    };
    let [a, b, c] = outs;
    Ok([build(a)?, build(b)?, build(c)?])
}

/// `x^(alpha)` applied to `state`, one output state per Cartesian component.
///
/// Transverse input stays transverse; a longitudinal output sector is produced
/// only when the input has one.
pub fn apply_position(state: &PhotonState, alpha: f64) -> Result<[PhotonState; 3]> {
    apply_impl(state, alpha, false)
}

/// As [`apply_position`] but always keeps the longitudinal projection.
pub fn apply_position_full(state: &PhotonState, alpha: f64) -> Result<[PhotonState; 3]> {
    apply_impl(state, alpha, true)
}
