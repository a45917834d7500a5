//! Photon states as coefficient functions `c_lambda^eps(k)` on a momentum lattice.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::dump::{self, GridManifest};
use crate::grid::{k_to_x, x_to_k, FrequencySign, KGrid, MeasureKind};
use crate::polarization::{cdot, Mode, Tetrad, Vec3};
use crate::sum::{pairwise_map, pairwise_sum};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Relative profile height allowed on the outermost lattice shell.
pub const BOUNDARY_DECAY: f64 = 1e-8;

/// Default Euler-angle index.
pub const DEFAULT_M: i32 = 1;

/// Plane-wave normalization convention, `alpha = 0` (invariant) or `alpha = 1/2` (Newton-Wigner).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    Invariant,
    NewtonWigner,
}

impl Normalization {
    pub fn alpha(self) -> f64 {
        match self {
            Normalization::Invariant => 0.0,
            Normalization::NewtonWigner => 0.5,
        }
    }

    pub fn from_alpha(alpha: f64) -> Result<Self> {
        if alpha == 0.0 {
            Ok(Normalization::Invariant)
        } else if alpha == 0.5 {
            Ok(Normalization::NewtonWigner)
        } else {
            Err(Error::InvalidArgument(format!("alpha must be 0 or 1/2, got {alpha}")))
        }
    }
}

pub type SectorKey = (Mode, FrequencySign);

/// Axis of a linearly polarized superposition of the two helicities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinearAxis {
    Theta,
    Phi,
}

#[derive(Debug, Clone)]
pub struct PhotonState {
    grid: Arc<KGrid>,
    coeffs: BTreeMap<SectorKey, Vec<Complex64>>,
    normalization: Normalization,
    m: i32,
    real_field: bool,
    lorenz: bool,
    normalizable: bool,
}

/// Real transverse `A` and `E` on the dual lattice at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryData {
    pub a0: [Vec<f64>; 3],
    pub e0: [Vec<f64>; 3],
}

impl BoundaryData {
    pub fn zeros(grid: &KGrid) -> Self {
        let z = || vec![0.0; grid.len()];
        BoundaryData { a0: [z(), z(), z()], e0: [z(), z(), z()] }
    }
}

/// `amp (2pi)^3 / dk^3` at node `q`: a lattice delta whose trivial-measure transform is `amp exp(i q.x)`.
pub fn delta_profile(grid: &KGrid, q: Vec3, amp: Complex64) -> Result<Vec<Complex64>> {
    let idx = grid.node_index(q)?;
    let mut v = vec![ZERO; grid.len()];
    v[idx] = amp / grid.k_cell();
    Ok(v)
}

/// Unnormalized `exp(-|k - k0|^2 s^2 / 2)` sampled on the lattice.
pub fn gaussian_profile(grid: &KGrid, k0: Vec3, s: f64) -> Vec<Complex64> {
    (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let k = grid.k_at(idx);
            let d2 = (0..3).map(|a| (k[a] - k0[a]).powi(2)).sum::<f64>();
            Complex64::new((-0.5 * d2 * s * s).exp(), 0.0)
        })
        .collect()
}

/// Largest modulus on the outermost shell relative to the overall peak.
pub fn boundary_ratio(grid: &KGrid, profile: &[Complex64], width: usize) -> f64 {
    let peak = profile.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return 0.0;
    }
    let edge = profile
        .iter()
        .enumerate()
        .filter(|(idx, _)| grid.near_boundary(*idx, width))
        .map(|(_, c)| c.norm())
        .fold(0.0, f64::max);
    edge / peak
}

fn check_real(profile: &[Complex64]) -> Result<()> {
    if profile.iter().any(|c| c.im != 0.0) {
        return Err(Error::ComplexProfile);
    }
    Ok(())
}

impl PhotonState {
    pub fn zero(grid: &Arc<KGrid>, normalization: Normalization, m: i32) -> Self {
        PhotonState {
            grid: Arc::clone(grid),
            coeffs: BTreeMap::new(),
            normalization,
            m,
            real_field: true,
            lorenz: true,
            normalizable: true,
        }
    }

    /// Single-sector state with arbitrary coefficients.
    pub fn from_profile(
        grid: &Arc<KGrid>,
        mode: Mode,
        sign: FrequencySign,
        profile: Vec<Complex64>,
        normalization: Normalization,
        m: i32,
    ) -> Result<Self> {
        PhotonState::zero(grid, normalization, m).with_sector(mode, sign, profile)
    }

    /// `amp (2pi)^3 2 omega_q delta_grid(k - q)` in one sector.
    pub fn plane_wave(grid: &Arc<KGrid>, q: Vec3, mode: Mode, sign: FrequencySign, amp: Complex64) -> Result<Self> {
        let idx = grid.node_index(q)?;
        let mut v = vec![ZERO; grid.len()];
        v[idx] = amp * (2.0 * grid.omega()[idx]) / grid.k_cell();
        let mut s = PhotonState::from_profile(grid, mode, sign, v, Normalization::Invariant, DEFAULT_M)?;
        s.normalizable = false;
        Ok(s)
    }

    /// Gaussian packet normalized to one under the invariant product.
    pub fn gaussian_packet(
        grid: &Arc<KGrid>,
        k0: Vec3,
        s: f64,
        mode: Mode,
        sign: FrequencySign,
        m: i32,
    ) -> Result<Self> {
        Self::gaussian_packet_in(grid, k0, s, mode, sign, m, Normalization::Invariant)
    }

    /// Gaussian packet normalized to one under the product matching `normalization`.
    pub fn gaussian_packet_in(
        grid: &Arc<KGrid>,
        k0: Vec3,
        s: f64,
        mode: Mode,
        sign: FrequencySign,
        m: i32,
        normalization: Normalization,
    ) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::InvalidArgument(format!("packet width must be positive, got {s}")));
        }
        let profile = gaussian_profile(grid, k0, s);
        let ratio = boundary_ratio(grid, &profile, 1);
        if ratio >= BOUNDARY_DECAY {
            return Err(Error::BoundarySupport { ratio, limit: BOUNDARY_DECAY });
        }
        let omega = grid.omega();
        let weight = |idx: usize| match normalization {
            Normalization::Invariant => 1.0,
            Normalization::NewtonWigner => 1.0 / (2.0 * omega[idx]),
        };
        if normalization == Normalization::NewtonWigner && grid.has_zero_mode() {
            return Err(Error::ZeroFrequencyNode);
        }
        let norm = mode.zeta() * grid.k_cell() * pairwise_map(grid.len(), |i| profile[i].norm_sqr() * weight(i));
        if norm <= 0.0 {
            return Err(Error::IndefiniteNorm(norm));
        }
        let scale = 1.0 / norm.sqrt();
        let profile = profile.into_iter().map(|c| c * scale).collect();
        PhotonState::from_profile(grid, mode, sign, profile, normalization, m)
    }

    /// Position eigenvector at `y`: `omega^alpha exp(-i eps k.y)`.
    pub fn localized_state(
        grid: &Arc<KGrid>,
        y: Vec3,
        mode: Mode,
        sign: FrequencySign,
        normalization: Normalization,
        m: i32,
    ) -> Result<Self> {
        grid.dual_index(y)?;
        let alpha = normalization.alpha();
        let eps = sign.value();
        let omega = grid.omega();
        let profile = (0..grid.len())
            .into_par_iter()
            .map(|idx| {
                let k = grid.k_at(idx);
                let phase = -eps * (k[0] * y[0] + k[1] * y[1] + k[2] * y[2]);
                Complex64::from_polar(omega[idx].powf(alpha), phase)
            })
            .collect();
        let mut s = PhotonState::from_profile(grid, mode, sign, profile, normalization, m)?;
        s.normalizable = false;
        Ok(s)
    }

    /// Single-helicity positive-frequency real-field state with a real profile.
    pub fn circular_state(grid: &Arc<KGrid>, profile: Vec<Complex64>, lambda0: i32, m: i32) -> Result<Self> {
        check_real(&profile)?;
        let mode = Mode::from_helicity(lambda0)?;
        let mut s = PhotonState::from_profile(grid, mode, FrequencySign::Plus, profile, Normalization::Invariant, m)?;
        s.normalizable = !is_lattice_delta(&s);
        Ok(s)
    }

    /// Linear polarization along `e_theta` (`c_pm = p/sqrt2`) or `e_phi` (`c_pm = -+ i p/sqrt2`).
    pub fn linear_state(grid: &Arc<KGrid>, profile: Vec<Complex64>, axis: LinearAxis, m: i32) -> Result<Self> {
        check_real(&profile)?;
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let (fp, fm) = match axis {
            LinearAxis::Theta => (Complex64::new(r, 0.0), Complex64::new(r, 0.0)),
            LinearAxis::Phi => (Complex64::new(0.0, -r), Complex64::new(0.0, r)),
        };
        let plus = profile.iter().map(|&p| p * fp).collect();
        let minus = profile.iter().map(|&p| p * fm).collect();
        let mut s = PhotonState::zero(grid, Normalization::Invariant, m)
            .with_sector(Mode::Plus, FrequencySign::Plus, plus)?
            .with_sector(Mode::Minus, FrequencySign::Plus, minus)?;
        s.normalizable = !is_lattice_delta(&s);
        Ok(s)
    }

    /// Reconstruct the positive-frequency transverse state whose real `A` and
    /// `E = -dA/dt` at `t0` equal `data`.
    pub fn from_boundary(grid: &Arc<KGrid>, data: &BoundaryData, t0: f64, m: i32) -> Result<Self> {
        if !grid.offset() {
            return Err(Error::InvalidGrid("boundary data needs a half-cell offset grid".into()));
        }
        for comp in data.a0.iter().chain(data.e0.iter()) {
            grid.check_len(comp.len())?;
        }
        let to_k = |f: &Vec<f64>| -> Result<Vec<Complex64>> {
            let c: Vec<Complex64> = f.iter().map(|&v| Complex64::new(v, 0.0)).collect();
            x_to_k(grid, &c)
        };
        let a = [to_k(&data.a0[0])?, to_k(&data.a0[1])?, to_k(&data.a0[2])?];
        let e = [to_k(&data.e0[0])?, to_k(&data.e0[1])?, to_k(&data.e0[2])?];
        let omega = grid.omega();
        let g: Vec<[Complex64; 3]> = (0..grid.len())
            .map(|idx| [0, 1, 2].map(|c| a[c][idx] - I * e[c][idx] / omega[idx]))
            .collect();
        let tetrads: Vec<Tetrad> =
            (0..grid.len()).into_par_iter().map(|idx| Tetrad::at(grid.k_at(idx), m)).collect::<Result<_>>()?;
        let total = pairwise_map(grid.len(), |i| g[i].iter().map(|v| v.norm_sqr()).sum());
        let longitudinal = pairwise_map(grid.len(), |i| {
            let kh = tetrads[i].khat;
            (g[i][0] * kh[0] + g[i][1] * kh[1] + g[i][2] * kh[2]).norm_sqr()
        });
        if total > 0.0 {
            let ratio = (longitudinal / total).sqrt();
            if ratio > 1e-10 {
                return Err(Error::NotTransverse(ratio));
            }
        }
        let pre = grid.constants().field_scale();
        let sector = |mode: Mode| -> Vec<Complex64> {
            (0..grid.len())
                .into_par_iter()
                .map(|idx| {
                    let w = omega[idx];
                    let proj = cdot(&tetrads[idx].spatial(mode), &g[idx]);
                    proj * (2.0 * w) / (I * pre) * Complex64::from_polar(1.0, w * t0)
                })
                .collect()
        };
        let mut s = PhotonState::zero(grid, Normalization::Invariant, m);
        if total > 0.0 {
            s = s
                .with_sector(Mode::Plus, FrequencySign::Plus, sector(Mode::Plus))?
                .with_sector(Mode::Minus, FrequencySign::Plus, sector(Mode::Minus))?;
        }
        Ok(s)
    }

    pub fn grid(&self) -> &KGrid {
        &self.grid
    }

    pub fn grid_arc(&self) -> &Arc<KGrid> {
        &self.grid
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn alpha(&self) -> f64 {
        self.normalization.alpha()
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    pub fn is_real_field(&self) -> bool {
        self.real_field
    }

    pub fn is_lorenz(&self) -> bool {
        self.lorenz
    }

    pub fn is_normalizable(&self) -> bool {
        self.normalizable
    }

    pub fn coeff(&self, mode: Mode, sign: FrequencySign) -> Option<&[Complex64]> {
        self.coeffs.get(&(mode, sign)).map(|v| v.as_slice())
    }

    pub fn sectors(&self) -> impl Iterator<Item = (SectorKey, &[Complex64])> {
        self.coeffs.iter().map(|(k, v)| (*k, v.as_slice()))
    }

    pub fn sector_keys(&self) -> Vec<SectorKey> {
        self.coeffs.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|v| v.iter().all(|c| *c == ZERO))
    }

    /// Replace (or add) one sector. Flags are updated conservatively.
    pub fn with_sector(mut self, mode: Mode, sign: FrequencySign, data: Vec<Complex64>) -> Result<Self> {
        self.grid.check_len(data.len())?;
        if sign == FrequencySign::Minus && data.iter().any(|c| *c != ZERO) {
            self.real_field = false;
        }
        self.coeffs.insert((mode, sign), data);
        self.lorenz = self.lorenz_residual() == 0.0;
        Ok(self)
    }

    pub fn without_sector(mut self, mode: Mode, sign: FrequencySign) -> Self {
        self.coeffs.remove(&(mode, sign));
        self.lorenz = self.lorenz_residual() == 0.0;
        self
    }

    /// Keep only the sectors selected by `keep`.
    pub fn filtered<F: Fn(SectorKey) -> bool>(&self, keep: F) -> Self {
        let mut out = self.clone();
        out.coeffs.retain(|k, _| keep(*k));
        out.lorenz = out.lorenz_residual() == 0.0;
        out
    }

    /// Relabel the Euler index of the frame the coefficients refer to.
    pub fn with_frame_index(mut self, m: i32) -> Self {
        self.m = m;
        self
    }

    pub(crate) fn with_normalizable(mut self, normalizable: bool) -> Self {
        self.normalizable = normalizable;
        self
    }

    pub fn with_normalization(mut self, normalization: Normalization) -> Self {
        self.normalization = normalization;
        self
    }

    /// Apply `f(sector, node, c)` to every stored coefficient. Flags are kept.
    pub fn map_nodes<F>(&self, f: F) -> Self
    where
        F: Fn(SectorKey, usize, Complex64) -> Complex64 + Sync,
    {
        let mut out = self.clone();
        for (key, v) in out.coeffs.iter_mut() {
            v.par_iter_mut().enumerate().for_each(|(idx, c)| *c = f(*key, idx, *c));
        }
        out
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        self.map_nodes(|_, _, c| c * factor)
    }

    /// Sector-wise sum; the result keeps a flag only when both inputs carry it.
    pub fn add(&self, other: &PhotonState) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (key, v) in &other.coeffs {
            let entry = out.coeffs.entry(*key).or_insert_with(|| vec![ZERO; v.len()]);
            entry.par_iter_mut().zip(v.par_iter()).for_each(|(a, b)| *a += *b);
        }
        out.real_field = self.real_field && other.real_field;
        out.normalizable = self.normalizable && other.normalizable;
        out.lorenz = out.lorenz_residual() == 0.0;
        Ok(out)
    }

    pub fn check_compatible(&self, other: &PhotonState) -> Result<()> {
        if *self.grid != *other.grid {
            return Err(Error::GridMismatch);
        }
        if self.normalization != other.normalization {
            return Err(Error::ConventionMismatch { expected: self.alpha(), got: other.alpha() });
        }
        Ok(())
    }

    /// Max over nodes and signs of `|c_0 - c_3|`.
    pub fn lorenz_residual(&self) -> f64 {
        let n = self.grid.len();
        let mut worst = 0.0f64;
        for sign in FrequencySign::BOTH {
            let s = self.coeffs.get(&(Mode::Scalar, sign));
            let l = self.coeffs.get(&(Mode::Longitudinal, sign));
            for idx in 0..n {
                let a = s.map_or(ZERO, |v| v[idx]);
                let b = l.map_or(ZERO, |v| v[idx]);
                worst = worst.max((a - b).norm());
            }
        }
        worst
    }

    /// Project onto the Lorenz gauge by copying the longitudinal amplitude into the scalar sector.
    pub fn enforce_lorenz(&self) -> Self {
        let mut out = self.clone();
        for sign in FrequencySign::BOTH {
            match self.coeffs.get(&(Mode::Longitudinal, sign)) {
                Some(v) => {
                    out.coeffs.insert((Mode::Scalar, sign), v.clone());
                }
                None => {
                    out.coeffs.remove(&(Mode::Scalar, sign));
                }
            }
        }
        out.lorenz = true;
        out
    }

    /// Shift in position by `d`: `c -> exp(-i eps k.d) c`.
    pub fn translate(&self, d: Vec3) -> Self {
        let grid = Arc::clone(&self.grid);
        self.map_nodes(move |(_, sign), idx, c| {
            let k = grid.k_at(idx);
            c * Complex64::from_polar(1.0, -sign.value() * (k[0] * d[0] + k[1] * d[1] + k[2] * d[2]))
        })
    }

    fn require_real_field(&self) -> Result<()> {
        let has_minus = self
            .coeffs
            .iter()
            .any(|((_, sign), v)| *sign == FrequencySign::Minus && v.iter().any(|c| *c != ZERO));
        if has_minus {
            return Err(Error::NegativeFrequencyContent);
        }
        Ok(())
    }

    /// `psi = Re sum_lambda psi_lambda^+` at time `t` over the transverse sectors.
    pub fn real_psi(&self, t: f64) -> Result<Vec<f64>> {
        self.require_real_field()?;
        let mut total = vec![ZERO; self.grid.len()];
        for mode in Mode::TRANSVERSE {
            if let Some(c) = self.coeffs.get(&(mode, FrequencySign::Plus)) {
                let psi = k_to_x(&self.grid, c, MeasureKind::Trivial, FrequencySign::Plus, t)?;
                total.par_iter_mut().zip(psi.par_iter()).for_each(|(a, b)| *a += *b);
            }
        }
        Ok(total.into_iter().map(|c| c.re).collect())
    }

    /// `sum_x psi^2 dx^3` for the real wave function at `t = 0`.
    pub fn real_field_norm(&self) -> Result<f64> {
        if !self.normalizable {
            return Err(Error::NonNormalizable);
        }
        let psi = self.real_psi(0.0)?;
        let sq: Vec<f64> = psi.iter().map(|v| v * v).collect();
        Ok(pairwise_sum(&sq) * self.grid.x_cell())
    }

    /// Rescale so that `sum_x psi^2 dx^3 = 1`.
    pub fn normalize_real_field(&self) -> Result<Self> {
        let n = self.real_field_norm()?;
        if n == 0.0 {
            return Err(Error::NonNormalizable);
        }
        let mut out = self.scaled(Complex64::new(1.0 / n.sqrt(), 0.0));
        out.real_field = true;
        Ok(out)
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let mut sectors = Vec::new();
        for ((mode, sign), v) in &self.coeffs {
            let file = format!("c_{}_{}.bin", file_tag(*mode), if *sign == FrequencySign::Plus { "p" } else { "m" });
            dump::write_complex(&dir.join(&file), v)?;
            sectors.push(SectorEntry { mode: *mode, sign: *sign, file });
        }
        let manifest = StateManifest {
            grid: GridManifest::of(&self.grid),
            normalization: self.normalization,
            m: self.m,
            real_field: self.real_field,
            lorenz: self.lorenz,
            normalizable: self.normalizable,
            sectors,
        };
        dump::write_manifest(&dir.join("state.json"), &manifest)
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let manifest: StateManifest = dump::read_manifest(&dir.join("state.json"))?;
        let grid = Arc::new(manifest.grid.to_grid()?);
        let mut s = PhotonState::zero(&grid, manifest.normalization, manifest.m);
        for e in &manifest.sectors {
            let v = dump::read_complex(&dir.join(&e.file), grid.len())?;
            s.coeffs.insert((e.mode, e.sign), v);
        }
        s.real_field = manifest.real_field;
        s.lorenz = manifest.lorenz;
        s.normalizable = manifest.normalizable;
        Ok(s)
    }
}

fn file_tag(mode: Mode) -> &'static str {
    match mode {
        Mode::Scalar => "scalar",
        Mode::Plus => "plus",
        Mode::Minus => "minus",
        Mode::Longitudinal => "longitudinal",
    }
}

fn is_lattice_delta(s: &PhotonState) -> bool {
    let mut support = std::collections::BTreeSet::new();
    for (_, v) in s.sectors() {
        for (idx, c) in v.iter().enumerate() {
            if *c != ZERO {
                support.insert(idx);
            }
        }
    }
    support.len() == 1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SectorEntry {
    mode: Mode,
    sign: FrequencySign,
    file: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateManifest {
    grid: GridManifest,
    normalization: Normalization,
    m: i32,
    real_field: bool,
    lorenz: bool,
    normalizable: bool,
    sectors: Vec<SectorEntry>,
}

/// `(2 pi)^3` appears in the lattice delta weights.
#[cfg(test)]
pub(crate) fn two_pi_cubed() -> f64 {
    (2.0 * std::f64::consts::PI).powi(3)
}
