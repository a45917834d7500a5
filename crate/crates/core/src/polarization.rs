//! Per-wavevector polarization tetrad `{e0, e+1, e-1, e3}` for the Euler-angle
//! choice `chi = -m phi`, spin-1 matrices and the connection `a^(m)`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::{norm3, KGrid};

pub type Vec3 = [f64; 3];
pub type CVec3 = [Complex64; 3];
pub type FourVector = [Complex64; 4];

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Polarization mode label lambda.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// lambda = 0, time-like.
    #[serde(rename = "scalar")]
    Scalar,
    /// Transverse, helicity +1.
    #[serde(rename = "+1")]
    Plus,
    /// Transverse, helicity -1.
    #[serde(rename = "-1")]
    Minus,
    /// lambda = 3, along k.
    #[serde(rename = "longitudinal")]
    Longitudinal,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::Scalar, Mode::Plus, Mode::Minus, Mode::Longitudinal];
    pub const TRANSVERSE: [Mode; 2] = [Mode::Plus, Mode::Minus];

    /// Metric sign zeta = (-1, 1, 1, 1).
    pub fn zeta(self) -> f64 {
        match self {
            Mode::Scalar => -1.0,
            _ => 1.0,
        }
    }

    /// Helicity eigenvalue of the spatial unit vector (0 for scalar and longitudinal).
    pub fn helicity(self) -> f64 {
        match self {
            Mode::Plus => 1.0,
            Mode::Minus => -1.0,
            _ => 0.0,
        }
    }

    pub fn is_transverse(self) -> bool {
        matches!(self, Mode::Plus | Mode::Minus)
    }

    /// Mode whose unit vector is the complex conjugate of this one's.
    pub fn conjugate(self) -> Mode {
        match self {
            Mode::Plus => Mode::Minus,
            Mode::Minus => Mode::Plus,
            m => m,
        }
    }

    pub fn from_helicity(lambda: i32) -> Result<Mode> {
        match lambda {
            1 => Ok(Mode::Plus),
            -1 => Ok(Mode::Minus),
            _ => Err(Error::InvalidArgument(format!("helicity must be +1 or -1, got {lambda}"))),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Mode::Scalar => "scalar",
            Mode::Plus => "+1",
            Mode::Minus => "-1",
            Mode::Longitudinal => "longitudinal",
        }
    }
}

/// k-space spherical angles with `phi = atan2(ky, kx)` in (-pi, pi] and
/// `theta = atan2(|k_perp|, kz)` in [0, pi].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angles {
    pub k: f64,
    pub theta: f64,
    pub phi: f64,
}

impl Angles {
    pub fn of(k: Vec3) -> Result<Angles> {
        let kn = norm3(k);
        if kn == 0.0 {
            return Err(Error::UndefinedDirection);
        }
        let rho = (k[0] * k[0] + k[1] * k[1]).sqrt();
        let mut phi = k[1].atan2(k[0]);
        if phi <= -PI {
            phi = PI;
        }
        Ok(Angles { k: kn, theta: rho.atan2(k[2]), phi })
    }

    pub fn e_k(&self) -> Vec3 {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    pub fn e_theta(&self) -> Vec3 {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [ct * cp, ct * sp, -st]
    }

    pub fn e_phi(&self) -> Vec3 {
        let (sp, cp) = self.phi.sin_cos();
        [-sp, cp, 0.0]
    }

    /// True on the polar axis, where `sin(theta)` vanishes.
    pub fn on_axis(&self) -> bool {
        self.theta.sin().abs() < 1e-300 || self.theta == 0.0 || self.theta == PI
    }
}

/// `(cos(theta) - m) / sin(theta)`, with the finite polar limit when the numerator vanishes.
pub(crate) fn connection_ratio(angles: &Angles, m: i32) -> Result<f64> {
    let (st, ct) = angles.theta.sin_cos();
    if angles.on_axis() {
        // cos(theta) = +-1; only m matching it gives 0/0 -> 0
        let pole = if angles.theta < PI / 2.0 { 1 } else { -1 };
        if m == pole {
            return Ok(0.0);
        }
        return Err(Error::PoleSingularity { theta: angles.theta, m });
    }
    let num = match m {
        1 => -2.0 * (angles.theta / 2.0).sin().powi(2),
        -1 => 2.0 * (angles.theta / 2.0).cos().powi(2),
        _ => ct - m as f64,
    };
    Ok(num / st)
}

/// Transverse unit vector of helicity `lambda` for `chi = -m phi`, from the
/// Cartesian closed form
/// `[(cos t - l) e^{i(ml+1)p} (e1 - i e2) - 2 sin t e^{iml p} e3 + (cos t + l) e^{i(ml-1)p} (e1 + i e2)] / (2 sqrt 2)`.
pub fn transverse_spatial(k: Vec3, lambda: i32, m: i32) -> Result<CVec3> {
    if lambda != 1 && lambda != -1 {
        return Err(Error::InvalidArgument(format!("helicity must be +1 or -1, got {lambda}")));
    }
    let a = Angles::of(k)?;
    Ok(cartesian_terms(&a, lambda, m).iter().fold([ZERO; 3], |acc, t| add3(acc, t.vector)))
}

/// Four-vector form of [`transverse_spatial`] (time component zero).
pub fn transverse_unit(k: Vec3, lambda: i32, m: i32) -> Result<FourVector> {
    let s = transverse_spatial(k, lambda, m)?;
    Ok([ZERO, s[0], s[1], s[2]])
}

/// One term of the Cartesian decomposition of `e_lambda`, with its orbital
/// (`l3`) and spin (`s3`) angular momentum along axis 3 in units of hbar.
#[derive(Debug, Clone, Copy)]
pub struct CartesianTerm {
    pub vector: CVec3,
    pub l3: i32,
    pub s3: i32,
}

pub fn cartesian_terms(angles: &Angles, lambda: i32, m: i32) -> [CartesianTerm; 3] {
    let l = lambda as f64;
    let (st, ct) = angles.theta.sin_cos();
    let phi = angles.phi;
    let ml = m * lambda;
    let pre = 1.0 / (2.0 * 2f64.sqrt());
    let ph = |q: i32| Complex64::from_polar(1.0, q as f64 * phi);
    let minus = ph(ml + 1) * ((ct - l) * pre);
    let mid = ph(ml) * (-2.0 * st * pre);
    let plus = ph(ml - 1) * ((ct + l) * pre);
    [
        CartesianTerm { vector: [minus, -I * minus, ZERO], l3: ml + 1, s3: -1 },
        CartesianTerm { vector: [ZERO, ZERO, mid], l3: ml, s3: 0 },
        CartesianTerm { vector: [plus, I * plus, ZERO], l3: ml - 1, s3: 1 },
    ]
}

/// Euler-angle connection `a^(m) = (cos(theta) - m) / (k sin(theta)) e_phi`.
pub fn euler_connection(k: Vec3, m: i32) -> Result<Vec3> {
    let a = Angles::of(k)?;
    let r = connection_ratio(&a, m)? / a.k;
    let ep = a.e_phi();
    Ok([r * ep[0], r * ep[1], r * ep[2]])
}

/// Spin-1 matrices `(S_j)_{lm} = -i eps_{jlm}`.
#[derive(Debug, Clone)]
pub struct SpinMatrices {
    pub s: [[[Complex64; 3]; 3]; 3],
}

pub(crate) fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

impl Default for SpinMatrices {
    fn default() -> Self {
        Self::new()
    }
}

impl SpinMatrices {
    pub fn new() -> Self {
        let mut s = [[[ZERO; 3]; 3]; 3];
        for (j, sj) in s.iter_mut().enumerate() {
            for (l, row) in sj.iter_mut().enumerate() {
                for (m, v) in row.iter_mut().enumerate() {
                    *v = Complex64::new(0.0, -levi_civita(j, l, m));
                }
            }
        }
        SpinMatrices { s }
    }

    pub fn apply(&self, j: usize, v: &CVec3) -> CVec3 {
        mat_vec(&self.s[j], v)
    }

    /// `sum_b u_b S_b` for a real 3-vector `u`.
    pub fn dot(&self, u: Vec3) -> [[Complex64; 3]; 3] {
        let mut out = [[ZERO; 3]; 3];
        for (b, &ub) in u.iter().enumerate() {
            for l in 0..3 {
                for m in 0..3 {
                    out[l][m] += self.s[b][l][m] * ub;
                }
            }
        }
        out
    }

    /// `(u x S)_j = sum_{ab} eps_{jab} u_a S_b`.
    pub fn cross(&self, u: Vec3, j: usize) -> [[Complex64; 3]; 3] {
        let mut out = [[ZERO; 3]; 3];
        for a in 0..3 {
            for b in 0..3 {
                let e = levi_civita(j, a, b);
                if e == 0.0 {
                    continue;
                }
                for l in 0..3 {
                    for m in 0..3 {
                        out[l][m] += self.s[b][l][m] * (e * u[a]);
                    }
                }
            }
        }
        out
    }
}

pub(crate) fn mat_vec(m: &[[Complex64; 3]; 3], v: &CVec3) -> CVec3 {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

pub(crate) fn add3(a: CVec3, b: CVec3) -> CVec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// `sum_i conj(a_i) b_i`.
pub(crate) fn cdot(a: &CVec3, b: &CVec3) -> Complex64 {
    a[0].conj() * b[0] + a[1].conj() * b[1] + a[2].conj() * b[2]
}

pub(crate) fn real_to_c(v: Vec3) -> CVec3 {
    [v[0].into(), v[1].into(), v[2].into()]
}

/// The unit vectors of one node.
#[derive(Debug, Clone, Copy)]
pub struct Tetrad {
    pub plus: CVec3,
    pub minus: CVec3,
    pub khat: Vec3,
}

impl Tetrad {
    pub fn at(k: Vec3, m: i32) -> Result<Tetrad> {
        let a = Angles::of(k)?;
        let sum = |lambda| cartesian_terms(&a, lambda, m).iter().fold([ZERO; 3], |acc, t| add3(acc, t.vector));
        Ok(Tetrad { plus: sum(1), minus: sum(-1), khat: a.e_k() })
    }

    /// Spatial part of the unit vector of `mode` (zero for the scalar mode).
    pub fn spatial(&self, mode: Mode) -> CVec3 {
        match mode {
            Mode::Scalar => [ZERO; 3],
            Mode::Plus => self.plus,
            Mode::Minus => self.minus,
            Mode::Longitudinal => real_to_c(self.khat),
        }
    }

    pub fn four_vector(&self, mode: Mode) -> FourVector {
        match mode {
            Mode::Scalar => [Complex64::new(1.0, 0.0), ZERO, ZERO, ZERO],
            other => {
                let s = self.spatial(other);
                [ZERO, s[0], s[1], s[2]]
            }
        }
    }
}

/// Tetrads tabulated on every node of a grid.
#[derive(Debug, Clone)]
pub struct PolarizationFrame {
    pub m: i32,
    pub tetrads: Vec<Tetrad>,
}

pub fn frame_table(grid: &KGrid, m: i32) -> Result<PolarizationFrame> {
    if grid.has_zero_mode() {
        return Err(Error::UndefinedDirection);
    }
    let tetrads = (0..grid.len())
        .into_par_iter()
        .map(|idx| Tetrad::at(grid.k_at(idx), m))
        .collect::<Result<Vec<_>>>()?;
    Ok(PolarizationFrame { m, tetrads })
}

impl PolarizationFrame {
    pub fn vector(&self, mode: Mode, idx: usize) -> FourVector {
        self.tetrads[idx].four_vector(mode)
    }

    /// Largest deviation from the orthonormality, metric, completeness and
    /// helicity relations over all nodes.
    pub fn max_residual(&self) -> FrameResiduals {
        let spin = SpinMatrices::new();
        self.tetrads
            .par_iter()
            .map(|t| tetrad_residuals(t, &spin))
            .reduce(FrameResiduals::default, FrameResiduals::max)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FrameResiduals {
    pub orthonormality: f64,
    pub metric: f64,
    pub completeness: f64,
    pub helicity: f64,
    pub cross_product: f64,
}

impl FrameResiduals {
    fn max(a: Self, b: Self) -> Self {
        FrameResiduals {
            orthonormality: a.orthonormality.max(b.orthonormality),
            metric: a.metric.max(b.metric),
            completeness: a.completeness.max(b.completeness),
            helicity: a.helicity.max(b.helicity),
            cross_product: a.cross_product.max(b.cross_product),
        }
    }

    pub fn worst(&self) -> f64 {
        [self.orthonormality, self.metric, self.completeness, self.helicity, self.cross_product]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// Minkowski contraction `conj(a)_mu b^mu` with signature (+,-,-,-).
pub fn minkowski_cdot(a: &FourVector, b: &FourVector) -> Complex64 {
    a[0].conj() * b[0] - a[1].conj() * b[1] - a[2].conj() * b[2] - a[3].conj() * b[3]
}

fn cross_rc(u: Vec3, v: &CVec3) -> CVec3 {
    [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
}

pub(crate) fn tetrad_residuals(t: &Tetrad, spin: &SpinMatrices) -> FrameResiduals {
    let spatial = [Mode::Plus, Mode::Minus, Mode::Longitudinal];
    let mut r = FrameResiduals::default();
    for &a in &spatial {
        for &b in &spatial {
            let expect = if a == b { 1.0 } else { 0.0 };
            let d = cdot(&t.spatial(a), &t.spatial(b)) - expect;
            r.orthonormality = r.orthonormality.max(d.norm());
        }
    }
    for &a in &Mode::ALL {
        for &b in &Mode::ALL {
            let expect = if a == b { -a.zeta() } else { 0.0 };
            let d = minkowski_cdot(&t.four_vector(a), &t.four_vector(b)) - expect;
            r.metric = r.metric.max(d.norm());
        }
    }
    for l in 0..3 {
        for m in 0..3 {
            let mut s = ZERO;
            for &a in &spatial {
                let e = t.spatial(a);
                s += e[l] * e[m].conj();
            }
            let expect = if l == m { 1.0 } else { 0.0 };
            r.completeness = r.completeness.max((s - expect).norm());
        }
    }
    let sigma = spin.dot(t.khat);
    for &a in &spatial {
        let e = t.spatial(a);
        let se = mat_vec(&sigma, &e);
        let h = a.helicity();
        for c in 0..3 {
            r.helicity = r.helicity.max((se[c] - e[c] * h).norm());
        }
        if a.is_transverse() {
            let x = cross_rc(t.khat, &e);
            for c in 0..3 {
                r.cross_product = r.cross_product.max((x[c] + I * h * e[c]).norm());
            }
        }
    }
    r
}

#[cfg(test)]
pub(crate) const INV_SQRT2: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    fn spherical_form(k: Vec3, lambda: i32, m: i32) -> CVec3 {
        let a = Angles::of(k).unwrap();
        let et = a.e_theta();
        let ep = a.e_phi();
        let chi_phase = Complex64::from_polar(INV_SQRT2, (lambda * m) as f64 * a.phi);
        let l = lambda as f64;
        [0, 1, 2].map(|c| (Complex64::new(et[c], l * ep[c])) * chi_phase)
    }

    #[test]
    fn north_pole_plus_helicity() {
        let e = transverse_spatial([0.0, 0.0, 2.0], 1, 1).unwrap();
        let expect = [Complex64::new(INV_SQRT2, 0.0), Complex64::new(0.0, INV_SQRT2), ZERO];
        for c in 0..3 {
            assert!((e[c] - expect[c]).norm() < 1e-15);
        }
    }

    #[test]
    fn cartesian_form_equals_spherical_form() {
        for k in [[0.3, -1.2, 0.7], [-2.0, 0.1, -0.4], [0.0, 1.0, 0.0], [1.0, 1.0, -3.0]] {
            for lambda in [1, -1] {
                for m in [-2, 0, 1, 3] {
                    let a = transverse_spatial(k, lambda, m).unwrap();
                    let b = spherical_form(k, lambda, m);
                    for c in 0..3 {
                        assert!((a[c] - b[c]).norm() < 1e-14, "k={k:?} l={lambda} m={m}");
                    }
                }
            }
        }
    }

    #[test]
    fn zero_vector_has_no_direction() {
        assert_eq!(transverse_unit([0.0; 3], 1, 1), Err(Error::UndefinedDirection));
        assert_eq!(euler_connection([0.0; 3], 1), Err(Error::UndefinedDirection));
    }

    #[test]
    fn helicity_cross_product_at_generic_direction() {
        let k = [0.4, -0.9, 1.3];
        let khat = {
            let n = norm3(k);
            [k[0] / n, k[1] / n, k[2] / n]
        };
        for lambda in [1, -1] {
            let e = transverse_spatial(k, lambda, 1).unwrap();
            let x = cross_rc(khat, &e);
            for c in 0..3 {
                assert!((x[c] + I * lambda as f64 * e[c]).norm() < 1e-14);
            }
            assert!((cdot(&e, &e).re - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn euler_connection_examples() {
        // theta = pi/2, m = 0 -> 0
        let a = euler_connection([1.0, 0.0, 0.0], 0).unwrap();
        assert!(a.iter().all(|v| v.abs() < 1e-15));
        // theta = pi/3, m = 1, |k| = 2 along phi = 0: e_phi = e2
        let k = [2.0 * (PI / 3.0).sin(), 0.0, 2.0 * (PI / 3.0).cos()];
        let a = euler_connection(k, 1).unwrap();
        let expect = -1.0 / (2.0 * 3f64.sqrt());
        assert!(a[0].abs() < 1e-15 && a[2].abs() < 1e-15);
        assert!((a[1] - expect).abs() < 1e-14);
    }

    #[test]
    fn euler_connection_at_poles() {
        assert_eq!(euler_connection([0.0, 0.0, 1.0], 1).unwrap(), [0.0, 0.0, 0.0]);
        assert_eq!(euler_connection([0.0, 0.0, -1.0], -1).unwrap(), [0.0, 0.0, 0.0]);
        assert!(matches!(euler_connection([0.0, 0.0, 1.0], 0), Err(Error::PoleSingularity { .. })));
        assert!(matches!(euler_connection([0.0, 0.0, -1.0], 1), Err(Error::PoleSingularity { .. })));
    }

    #[test]
    fn connection_limit_near_north_pole_is_small() {
        // (cos t - 1)/sin t ~ -t/2
        for t in [1e-2f64, 1e-4, 1e-6] {
            let k = [t.sin(), 0.0, t.cos()];
            let a = euler_connection(k, 1).unwrap();
            assert!((a[1] + t / 2.0).abs() < t * t);
        }
    }

    #[test]
    fn spin_algebra() {
        let s = SpinMatrices::new();
        for i in 0..3 {
            for j in 0..3 {
                for l in 0..3 {
                    for m in 0..3 {
                        let mut comm = ZERO;
                        for p in 0..3 {
                            comm += s.s[i][l][p] * s.s[j][p][m] - s.s[j][l][p] * s.s[i][p][m];
                        }
                        let mut expect = ZERO;
                        for k in 0..3 {
                            expect += I * levi_civita(i, j, k) * s.s[k][l][m];
                        }
                        assert!((comm - expect).norm() < 1e-15);
                    }
                }
            }
        }
        for l in 0..3 {
            for m in 0..3 {
                let mut sq = ZERO;
                for j in 0..3 {
                    for p in 0..3 {
                        sq += s.s[j][l][p] * s.s[j][p][m];
                    }
                }
                let expect = if l == m { 2.0 } else { 0.0 };
                assert!((sq - expect).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn frame_on_shifted_grid_satisfies_all_relations() {
        let g = make_grid(8, 4.0, true).unwrap();
        let f = frame_table(&g, 1).unwrap();
        let r = f.max_residual();
        assert!(r.worst() < 1e-12, "{r:?}");
        // zeta check for the scalar mode: e0* . e0 = +1 = -zeta_0
        let e0 = f.vector(Mode::Scalar, 0);
        assert_eq!(minkowski_cdot(&e0, &e0), Complex64::new(1.0, 0.0));
        assert_eq!(-Mode::Scalar.zeta(), 1.0);
    }

    #[test]
    fn frame_rejects_grid_with_zero_mode() {
        let g = make_grid(8, 4.0, false).unwrap();
        assert!(frame_table(&g, 1).is_err());
    }

    #[test]
    fn angular_momentum_bookkeeping() {
        let spin = SpinMatrices::new();
        let k = [0.6, -0.3, 0.5];
        let a = Angles::of(k).unwrap();
        for lambda in [1, -1] {
            for m in [0, 1, 2] {
                let terms = cartesian_terms(&a, lambda, m);
                for t in &terms {
                    assert_eq!(t.l3 + t.s3, m * lambda);
                    let s3v = spin.apply(2, &t.vector);
                    for c in 0..3 {
                        assert!((s3v[c] - t.vector[c] * t.s3 as f64).norm() < 1e-15);
                    }
                    // L3 = -i d/dphi acting on the phi phase of the term
                    let h = 1e-6;
                    let shifted = Angles { phi: a.phi + h, ..a };
                    let back = Angles { phi: a.phi - h, ..a };
                    let tp = cartesian_terms(&shifted, lambda, m);
                    let tb = cartesian_terms(&back, lambda, m);
                    let idx = terms.iter().position(|x| x.l3 == t.l3).unwrap();
                    for c in 0..3 {
                        if t.vector[c].norm() < 1e-12 {
                            continue;
                        }
                        let d = (tp[idx].vector[c] - tb[idx].vector[c]) / (2.0 * h);
                        let l3 = (-I * d / t.vector[c]).re;
                        assert!((l3 - t.l3 as f64).abs() < 1e-6);
                    }
                }
            }
        }
    }
}
