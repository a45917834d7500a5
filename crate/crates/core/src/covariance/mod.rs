//! Off-lattice evaluation, the inner product on tilted hyperplanes and the
//! radially reduced causality integrals.

pub mod quadrature;
mod radial;

pub use radial::{
    hegerfeldt_correlator, hegerfeldt_correlator_with, localized_propagation, BandLimit, Propagation, RadialProfile,
    ShellReport,
};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::FrequencySign;
use crate::polarization::{Mode, Tetrad, Vec3};
use crate::state::{PhotonState, SectorKey};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Amplitude cut below which nodes are left out of hyperplane sums.
const SUPPORT_CUT: f64 = 1e-10;

/// Fields at one event.
#[derive(Debug, Clone, PartialEq)]
pub struct EventSample {
    pub t: f64,
    pub x: Vec3,
    pub a: [Complex64; 4],
    /// `psi_lambda^eps` for each sector present.
    pub psi: Vec<(SectorKey, Complex64)>,
}

fn four(mode: Mode, k: Vec3, m: i32) -> Result<[Complex64; 4]> {
    if mode == Mode::Scalar {
        return Ok([Complex64::new(1.0, 0.0), ZERO, ZERO, ZERO]);
    }
    Ok(Tetrad::at(k, m)?.four_vector(mode))
}

/// `A^mu(t,x)` and `psi(t,x)` by direct summation over every node.
///
/// On an offset grid the fields are antiperiodic over one box period and
/// periodic over two; on an unshifted grid they are periodic over one.
pub fn evaluate_at_event(state: &PhotonState, t: f64, x: Vec3) -> Result<EventSample> {
    let grid = state.grid();
    let f = grid.constants().field_scale();
    let cell = grid.k_cell();
    let omega = grid.omega();
    let mut a = [ZERO; 4];
    let mut psi = Vec::new();
    for ((mode, sign), c) in state.sectors() {
        let eps = sign.value();
        let terms: Vec<([Complex64; 4], Complex64)> = (0..grid.len())
            .into_par_iter()
            .filter(|&i| c[i] != ZERO)
            .map(|i| {
                let k = grid.k_at(i);
                let w = omega[i];
                if w == 0.0 {
                    return Err(Error::ZeroFrequencyNode);
                }
                let ph = Complex64::from_polar(1.0, -eps * (w * t - (k[0] * x[0] + k[1] * x[1] + k[2] * x[2])));
                let e = four(mode, k, state.m())?;
                let base = c[i] * ph * cell;
                let amp = base * (I * f / (2.0 * w));
                Ok((e.map(|v| v * amp), base))
            })
            .collect::<Result<_>>()?;
        let mut sa = [ZERO; 4];
        let mut sp = ZERO;
        for (v, b) in &terms {
            for mu in 0..4 {
                sa[mu] += v[mu];
            }
            sp += b;
        }
        for mu in 0..4 {
            a[mu] += sa[mu];
        }
        psi.push(((mode, sign), sp));
    }
    Ok(EventSample { t, x, a, psi })
}

/// Spacelike integration hyperplane with unit timelike normal `n^mu`
/// (`n.n = 1`, `n^0 > 0`), through the event `(t, x)`, integrated over
/// `[-extent, extent]^3` in its own orthonormal coordinates with
/// `resolution` midpoint cells per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyperplane {
    normal: [f64; 4],
    origin_t: f64,
    origin_x: Vec3,
    extent: f64,
    resolution: usize,
}

/// Density on the outer mesh layer relative to its peak.
pub const WINDOW_TAIL_LIMIT: f64 = 1e-6;

impl Hyperplane {
    pub fn new(normal: [f64; 4], origin_t: f64, origin_x: Vec3, extent: f64, resolution: usize) -> Result<Self> {
        let nn = normal[0] * normal[0] - normal[1] * normal[1] - normal[2] * normal[2] - normal[3] * normal[3];
        if !(nn - 1.0).abs().lt(&1e-12) || normal[0] <= 0.0 {
            return Err(Error::InvalidArgument(format!("normal must be unit timelike and future pointing, n.n = {nn}")));
        }
        if !(extent.is_finite() && extent > 0.0) || resolution == 0 {
            return Err(Error::InvalidArgument("extent must be > 0 and resolution >= 1".into()));
        }
        Ok(Hyperplane { normal, origin_t, origin_x, extent, resolution })
    }

    /// `t = origin_t` plane.
    pub fn simultaneity(origin_t: f64, origin_x: Vec3, extent: f64, resolution: usize) -> Result<Self> {
        Self::new([1.0, 0.0, 0.0, 0.0], origin_t, origin_x, extent, resolution)
    }

    /// Normal `(cosh eta, sinh eta u)` for rapidity `eta` along the unit vector `u`.
    pub fn boosted(rapidity: f64, axis: Vec3, origin_t: f64, origin_x: Vec3, extent: f64, resolution: usize) -> Result<Self> {
        let len = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if len == 0.0 {
            return Err(Error::InvalidArgument("boost axis must be nonzero".into()));
        }
        let (ch, sh) = (rapidity.cosh(), rapidity.sinh() / len);
        let n = [ch, sh * axis[0], sh * axis[1], sh * axis[2]];
        // renormalize away rounding in cosh^2 - sinh^2
        let nn = (n[0] * n[0] - n[1] * n[1] - n[2] * n[2] - n[3] * n[3]).sqrt();
        Self::new(n.map(|v| v / nn), origin_t, origin_x, extent, resolution)
    }

    pub fn normal(&self) -> [f64; 4] {
        self.normal
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// Spacelike unit vectors spanning the plane: the pure boost taking
    /// `(1,0,0,0)` to `n`, applied to the Cartesian axes.
    pub fn tangents(&self) -> [[f64; 4]; 3] {
        let n = self.normal;
        let g = n[0];
        [0, 1, 2].map(|j| {
            let mut u = [n[1 + j], 0.0, 0.0, 0.0];
            for i in 0..3 {
                u[1 + i] = (i == j) as i32 as f64 + n[1 + i] * n[1 + j] / (1.0 + g);
            }
            u
        })
    }

    fn mesh(&self) -> Vec<f64> {
        let h = 2.0 * self.extent / self.resolution as f64;
        (0..self.resolution).map(|a| -self.extent + (a as f64 + 0.5) * h).collect()
    }
}

/// Minkowski `k_mu v^mu` for `k^mu = (|k|, k)`.
fn k_dot(k: Vec3, kn: f64, v: &[f64; 4]) -> f64 {
    kn * v[0] - (k[0] * v[1] + k[1] * v[2] + k[2] * v[3])
}

/// A node with its plane-independent amplitude and per-axis phase tables.
struct Support {
    positive: bool,
    /// Nonzero components `lo..hi` of `e^mu`.
    lo: usize,
    hi: usize,
    /// `i F c e^mu dk^3 / ((2pi)^3 2 omega)` times the phase at the origin.
    amp: [Complex64; 4],
    /// `amp` times the `n^mu d_mu` eigenvalue `-i eps k.n`.
    damp: [Complex64; 4],
    tables: [Vec<Complex64>; 3],
}

fn support(state: &PhotonState, plane: &Hyperplane) -> Result<Vec<Support>> {
    let grid = state.grid();
    let consts = grid.constants();
    let f = consts.field_scale();
    let cell = grid.k_cell();
    let omega = grid.omega();
    let origin = [consts.c * plane.origin_t, plane.origin_x[0], plane.origin_x[1], plane.origin_x[2]];
    let tangents = plane.tangents();
    let mesh = plane.mesh();
    let mut out = Vec::new();
    for ((mode, sign), c) in state.sectors() {
        let peak = c.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let eps = sign.value();
        let (lo, hi) = if mode == Mode::Scalar { (0, 1) } else { (1, 4) };
        let part: Vec<Support> = (0..grid.len())
            .into_par_iter()
            .filter(|&i| c[i].norm() > SUPPORT_CUT * peak)
            .map(|i| {
                let k = grid.k_at(i);
                let w = omega[i];
                if w == 0.0 {
                    return Err(Error::ZeroFrequencyNode);
                }
                let kn = w / consts.c;
                let e = four(mode, k, state.m())?;
                let base = c[i] * cell * (I * f / (2.0 * w)) * Complex64::from_polar(1.0, -eps * k_dot(k, kn, &origin));
                let tables = [0, 1, 2].map(|j| {
                    let q = k_dot(k, kn, &tangents[j]);
                    mesh.iter().map(|xi| Complex64::from_polar(1.0, -eps * q * xi)).collect()
                });
                let dn = Complex64::new(0.0, -eps * k_dot(k, kn, &plane.normal));
                let amp = e.map(|v| v * base);
                Ok(Support { positive: eps > 0.0, lo, hi, amp, damp: amp.map(|v| v * dn), tables })
            })
            .collect::<Result<_>>()?;
        out.extend(part);
    }
    Ok(out)
}

type Four = [Complex64; 4];

/// `A`, `n.d A`, `A_c = sum eps A^eps` and `n.d A_c` at one mesh point.
#[derive(Clone, Copy)]
struct PlanePoint {
    a: Four,
    da: Four,
    ac: Four,
    dac: Four,
}

fn plane_fields(nodes: &[Support], res: usize) -> Vec<PlanePoint> {
    (0..res * res)
        .into_par_iter()
        .flat_map_iter(|ab| {
            let (a, b) = (ab / res, ab % res);
            // [positive, negative] frequency parts
            let mut f = vec![[[ZERO; 4]; 2]; res];
            let mut d = vec![[[ZERO; 4]; 2]; res];
            for s in nodes {
                let p = s.tables[0][a] * s.tables[1][b];
                let side = if s.positive { 0 } else { 1 };
                for (cix, t) in s.tables[2].iter().enumerate() {
                    let ph = p * t;
                    let (fs, ds) = (&mut f[cix][side], &mut d[cix][side]);
                    for mu in s.lo..s.hi {
                        fs[mu] += s.amp[mu] * ph;
                        ds[mu] += s.damp[mu] * ph;
                    }
                }
            }
            f.into_iter().zip(d).map(|([fp, fm], [dp, dm])| {
                let add = |x: Four, y: Four, w: f64| [0, 1, 2, 3].map(|mu| x[mu] + y[mu] * w);
                PlanePoint { a: add(fp, fm, 1.0), da: add(dp, dm, 1.0), ac: add(fp, fm, -1.0), dac: add(dp, dm, -1.0) }
            })
        })
        .collect()
}

fn contract(x: &Four, y: &Four) -> Complex64 {
    x[0].conj() * y[0] - x[1].conj() * y[1] - x[2].conj() * y[2] - x[3].conj() * y[3]
}

/// `A1*_nu n.d A_c2^nu - (n.d A1)*_nu A_c2^nu`.
fn integrand(p: &PlanePoint, q: &PlanePoint) -> Complex64 {
    contract(&p.a, &q.dac) - contract(&p.da, &q.ac)
}

/// Largest self-density on the outer mesh layer relative to its peak.
fn window_tail(fields: &[PlanePoint], res: usize) -> f64 {
    let mut peak = 0.0f64;
    let mut edge = 0.0f64;
    for (idx, p) in fields.iter().enumerate() {
        let (a, b, c) = (idx / (res * res), (idx / res) % res, idx % res);
        let v = integrand(p, p).norm();
        peak = peak.max(v);
        if [a, b, c].iter().any(|&i| i == 0 || i == res - 1) {
            edge = edge.max(v);
        }
    }
    if peak == 0.0 {
        0.0
    } else {
        edge / peak
    }
}

/// `-(i eps0 c/hbar) int dsigma n_mu A1*_nu d<->^mu A_c2^nu` by midpoint quadrature.
pub fn hyperplane_inner_product(s1: &PhotonState, s2: &PhotonState, plane: &Hyperplane) -> Result<Complex64> {
    s1.check_compatible(s2)?;
    let res = plane.resolution;
    let f1 = plane_fields(&support(s1, plane)?, res);
    let f2 = if std::ptr::eq(s1, s2) { None } else { Some(plane_fields(&support(s2, plane)?, res)) };
    let f2 = f2.as_ref().unwrap_or(&f1);
    let tail = window_tail(&f1, res).max(window_tail(f2, res));
    if tail > WINDOW_TAIL_LIMIT {
        return Err(Error::WindowTooSmall { tail, limit: WINDOW_TAIL_LIMIT });
    }
    let h = 2.0 * plane.extent / res as f64;
    let g = s1.grid().constants().density_coupling();
    let terms: Vec<Complex64> = f1.par_iter().zip(f2.par_iter()).map(|(p, q)| integrand(p, q)).collect();
    let sum: Complex64 = terms.iter().sum();
    Ok(-I * g * sum * h.powi(3))
}

/// Sector keys present with a given frequency sign.
pub fn sectors_with_sign(state: &PhotonState, sign: FrequencySign) -> Vec<SectorKey> {
    state.sector_keys().into_iter().filter(|(_, s)| *s == sign).collect()
}
