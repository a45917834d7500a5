//! Configuration-space fields `A^mu`, `E`, `pi^mu` and `psi` from a photon state.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::dump::{self, ArrayEntry, ArrayKind, DumpManifest, GridManifest, Lattice};
use crate::grid::{k_to_x, FrequencySign, KGrid, MeasureKind};
use crate::polarization::{Mode, Tetrad};
use crate::state::{PhotonState, SectorKey};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Fields of one `(lambda, eps)` sector.
#[derive(Debug, Clone)]
pub struct SectorFields {
    pub mode: Mode,
    pub sign: FrequencySign,
    pub a: [Vec<Complex64>; 4],
    pub e: [Vec<Complex64>; 3],
    pub pi: [Vec<Complex64>; 4],
    pub psi: Vec<Complex64>,
}

/// Complex, epsilon-resolved snapshot at time `t`.
///
/// `E` collects the transverse sectors only; `psi` sums the transverse sectors.
#[derive(Debug, Clone)]
pub struct FieldSnapshot {
    pub t: f64,
    pub a: [Vec<Complex64>; 4],
    pub e: [Vec<Complex64>; 3],
    pub pi: [Vec<Complex64>; 4],
    pub psi: Vec<Complex64>,
    pub reality: bool,
    pub sectors: Vec<SectorFields>,
}

/// Real fields `Re sum_lambda X_lambda^+`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSnapshot {
    pub t: f64,
    pub a: [Vec<f64>; 4],
    pub e: [Vec<f64>; 3],
    pub pi: [Vec<f64>; 4],
    pub psi: Vec<f64>,
}

fn zeros(n: usize) -> Vec<Complex64> {
    vec![ZERO; n]
}

fn zeros4(n: usize) -> [Vec<Complex64>; 4] {
    [zeros(n), zeros(n), zeros(n), zeros(n)]
}

fn zeros3(n: usize) -> [Vec<Complex64>; 3] {
    [zeros(n), zeros(n), zeros(n)]
}

/// `c(k) e_lambda^mu(k)` for each component `mu`; frames are evaluated only where `c != 0`.
pub(crate) fn polarized_components(grid: &KGrid, mode: Mode, m: i32, c: &[Complex64]) -> Result<[Vec<Complex64>; 4]> {
    let n = grid.len();
    if mode == Mode::Scalar {
        return Ok([c.to_vec(), zeros(n), zeros(n), zeros(n)]);
    }
    let rows: Vec<[Complex64; 3]> = (0..n)
        .into_par_iter()
        .map(|idx| {
            if c[idx] == ZERO {
                return Ok([ZERO; 3]);
            }
            let e = Tetrad::at(grid.k_at(idx), m)?.spatial(mode);
            Ok([e[0] * c[idx], e[1] * c[idx], e[2] * c[idx]])
        })
        .collect::<Result<_>>()?;
    let col = |j: usize| rows.iter().map(|r| r[j]).collect::<Vec<_>>();
    Ok([zeros(n), col(0), col(1), col(2)])
}

fn is_zero(v: &[Complex64]) -> bool {
    v.iter().all(|c| *c == ZERO)
}

fn transform_components(
    grid: &KGrid,
    comps: &[Vec<Complex64>; 4],
    measure: MeasureKind,
    sign: FrequencySign,
    t: f64,
    factor: Complex64,
) -> Result<[Vec<Complex64>; 4]> {
    let mut out = zeros4(grid.len());
    for (mu, comp) in comps.iter().enumerate() {
        if is_zero(comp) {
            continue;
        }
        let mut f = k_to_x(grid, comp, measure, sign, t)?;
        f.par_iter_mut().for_each(|v| *v *= factor);
        out[mu] = f;
    }
    Ok(out)
}

fn sector_fields(state: &PhotonState, key: SectorKey, c: &[Complex64], t: f64) -> Result<SectorFields> {
    let grid = state.grid();
    let (mode, sign) = key;
    let consts = grid.constants();
    let f = consts.field_scale();
    let eps = sign.value();
    let comps = polarized_components(grid, mode, state.m(), c)?;
    let a = transform_components(grid, &comps, MeasureKind::Invariant, sign, t, I * f)?;
    // -d_t A: multiply the invariant integrand by i eps omega, i.e. trivial measure times -eps F / 2
    let minus_dt_a = transform_components(grid, &comps, MeasureKind::Trivial, sign, t, Complex64::new(-eps * f / 2.0, 0.0))?;
    let e = if mode.is_transverse() {
        [minus_dt_a[1].clone(), minus_dt_a[2].clone(), minus_dt_a[3].clone()]
    } else {
        zeros3(grid.len())
    };
    let pi = minus_dt_a.map(|v| v.into_iter().map(|x| x * consts.eps0).collect::<Vec<_>>());
    let psi = k_to_x(grid, c, MeasureKind::Trivial, sign, t)?;
    Ok(SectorFields { mode, sign, a, e, pi, psi })
}

fn accumulate(dst: &mut [Vec<Complex64>], src: &[Vec<Complex64>]) {
    for (d, s) in dst.iter_mut().zip(src) {
        d.par_iter_mut().zip(s.par_iter()).for_each(|(a, b)| *a += *b);
    }
}

/// Synthesize `A`, `E = -d_t A`, `pi = -eps0 d_t A` and `psi` at time `t`.
pub fn synthesize(state: &PhotonState, t: f64) -> Result<FieldSnapshot> {
    let n = state.grid().len();
    let mut snap =
        FieldSnapshot { t, a: zeros4(n), e: zeros3(n), pi: zeros4(n), psi: zeros(n), reality: false, sectors: Vec::new() };
    for (key, c) in state.sectors() {
        let s = sector_fields(state, key, c, t)?;
        accumulate(&mut snap.a, &s.a);
        accumulate(&mut snap.e, &s.e);
        accumulate(&mut snap.pi, &s.pi);
        if key.0.is_transverse() {
            accumulate(std::slice::from_mut(&mut snap.psi), std::slice::from_ref(&s.psi));
        }
        snap.sectors.push(s);
    }
    Ok(snap)
}

/// `psi_lambda^eps(x) = sum_k dk^3/(2pi)^3 c exp(-i eps (omega t - k.x))` per sector.
pub fn synthesize_psi(state: &PhotonState, t: f64) -> Result<Vec<(SectorKey, Vec<Complex64>)>> {
    state
        .sectors()
        .map(|(key, c)| Ok((key, k_to_x(state.grid(), c, MeasureKind::Trivial, key.1, t)?)))
        .collect()
}

/// `d_t A^mu` by the spectral route: multiply by `-i eps omega` before the invariant transform.
pub fn time_derivative_a(state: &PhotonState, t: f64) -> Result<[Vec<Complex64>; 4]> {
    let grid = state.grid();
    let f = grid.constants().field_scale();
    let omega = grid.omega();
    let mut out = zeros4(grid.len());
    for ((mode, sign), c) in state.sectors() {
        let eps = sign.value();
        let scaled: Vec<Complex64> = c.iter().zip(omega).map(|(v, w)| *v * Complex64::new(0.0, -eps * w)).collect();
        let comps = polarized_components(grid, mode, state.m(), &scaled)?;
        let part = transform_components(grid, &comps, MeasureKind::Invariant, sign, t, I * f)?;
        accumulate(&mut out, &part);
    }
    Ok(out)
}

fn re_sum<const N: usize>(sectors: &[&[Vec<Complex64>; N]], n: usize) -> [Vec<f64>; N] {
    std::array::from_fn(|mu| {
        let mut v = vec![0.0; n];
        for s in sectors {
            v.par_iter_mut().zip(s[mu].par_iter()).for_each(|(a, b)| *a += b.re);
        }
        v
    })
}

/// `Re sum_lambda` of the positive-frequency fields; rejects independent negative-frequency content.
pub fn reduce_real(snapshot: &FieldSnapshot) -> Result<RealSnapshot> {
    if snapshot.sectors.iter().any(|s| s.sign == FrequencySign::Minus && s.a.iter().chain([&s.psi]).any(|v| !is_zero(v))) {
        return Err(Error::NegativeFrequencyContent);
    }
    let n = snapshot.psi.len();
    let plus: Vec<&SectorFields> = snapshot.sectors.iter().filter(|s| s.sign == FrequencySign::Plus).collect();
    let a = re_sum(&plus.iter().map(|s| &s.a).collect::<Vec<_>>(), n);
    let pi = re_sum(&plus.iter().map(|s| &s.pi).collect::<Vec<_>>(), n);
    let e = re_sum(&plus.iter().filter(|s| s.mode.is_transverse()).map(|s| &s.e).collect::<Vec<_>>(), n);
    let [psi] = re_sum(&plus.iter().filter(|s| s.mode.is_transverse()).map(|s| std::array::from_ref(&s.psi)).collect::<Vec<_>>(), n);
    Ok(RealSnapshot { t: snapshot.t, a, e, pi, psi })
}

/// `Re sum_lambda psi_lambda^+` over the transverse sectors.
pub fn reduce_real_psi(parts: &[(SectorKey, Vec<Complex64>)]) -> Result<Vec<f64>> {
    let Some(n) = parts.first().map(|p| p.1.len()) else { return Ok(Vec::new()) };
    let mut out = vec![0.0; n];
    for ((mode, sign), v) in parts {
        if *sign == FrequencySign::Minus {
            if !is_zero(v) {
                return Err(Error::NegativeFrequencyContent);
            }
            continue;
        }
        if mode.is_transverse() {
            out.iter_mut().zip(v).for_each(|(a, b)| *a += b.re);
        }
    }
    Ok(out)
}

impl RealSnapshot {
    /// Already real: reduction is the identity.
    pub fn reduce_real(&self) -> RealSnapshot {
        self.clone()
    }

    pub fn save(&self, dir: &Path, grid: &KGrid) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let mut arrays = Vec::new();
        let mut put = |label: String, data: &[f64]| -> Result<()> {
            let file = format!("{label}.bin");
            dump::write_real(&dir.join(&file), data)?;
            arrays.push(ArrayEntry { file, label, kind: ArrayKind::Real, lattice: Lattice::X });
            Ok(())
        };
        for (mu, v) in self.a.iter().enumerate() {
            put(format!("A{mu}"), v)?;
        }
        for (j, v) in self.e.iter().enumerate() {
            put(format!("E{}", j + 1), v)?;
        }
        for (mu, v) in self.pi.iter().enumerate() {
            put(format!("pi{mu}"), v)?;
        }
        put("psi".into(), &self.psi)?;
        dump::write_manifest(&dir.join("manifest.json"), &DumpManifest { grid: GridManifest::of(grid), arrays })
    }
}

impl FieldSnapshot {
    pub fn save(&self, dir: &Path, grid: &KGrid) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let mut arrays = Vec::new();
        let mut put = |label: String, data: &[Complex64]| -> Result<()> {
            let file = format!("{label}.bin");
            dump::write_complex(&dir.join(&file), data)?;
            arrays.push(ArrayEntry { file, label, kind: ArrayKind::Complex, lattice: Lattice::X });
            Ok(())
        };
        for (mu, v) in self.a.iter().enumerate() {
            put(format!("A{mu}"), v)?;
        }
        for (j, v) in self.e.iter().enumerate() {
            put(format!("E{}", j + 1), v)?;
        }
        for (mu, v) in self.pi.iter().enumerate() {
            put(format!("pi{mu}"), v)?;
        }
        put("psi".into(), &self.psi)?;
        dump::write_manifest(&dir.join("manifest.json"), &DumpManifest { grid: GridManifest::of(grid), arrays })
    }
}

/// CSV rows `x,value` along `axis` through the dual-lattice point `through`.
pub fn line_csv(grid: &KGrid, field: &[f64], axis: usize, through: [usize; 3]) -> Result<String> {
    grid.check_len(field.len())?;
    if axis > 2 {
        return Err(Error::InvalidArgument(format!("axis {axis} out of range")));
    }
    let mut out = String::from("x,value\n");
    for j in 0..grid.n() {
        let mut c = through;
        c[axis] = j;
        let idx = grid.index(c[0], c[1], c[2]);
        writeln!(out, "{},{}", grid.axis_x(j), field[idx]).expect("string write");
    }
    Ok(out)
}

/// CSV rows `r,value` for every dual-lattice point, sorted by distance from `center`.
pub fn radial_csv(grid: &KGrid, field: &[f64], center: [f64; 3]) -> Result<String> {
    grid.check_len(field.len())?;
    let mut rows: Vec<(f64, f64)> = (0..grid.len())
        .map(|idx| {
            let x = grid.x_at(idx);
            let r = ((x[0] - center[0]).powi(2) + (x[1] - center[1]).powi(2) + (x[2] - center[2]).powi(2)).sqrt();
            (r, field[idx])
        })
        .collect();
    rows.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut out = String::from("r,value\n");
    for (r, v) in rows {
        writeln!(out, "{r},{v}").expect("string write");
    }
    Ok(out)
}
