use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftDirection, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;

use super::{FrequencySign, KGrid, MeasureKind};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// In-place unnormalized 3-D DFT along all three axes.
pub(crate) fn fft3(data: &mut [Complex64], n: usize, direction: FftDirection) {
    let plan: Arc<dyn Fft<f64>> = FftPlanner::new().plan_fft(n, direction);
    // axis 3 is contiguous
    data.par_chunks_mut(n).for_each(|line| plan.process(line));
    for stride in [n, n * n] {
        let mut lines = vec![ZERO; data.len()];
        // gather: line number enumerates the other two axes
        lines.par_chunks_mut(n).enumerate().for_each(|(line_no, line)| {
            let base = line_base(line_no, n, stride);
            for (t, v) in line.iter_mut().enumerate() {
                *v = data[base + t * stride];
            }
            plan.process(line);
        });
        for (line_no, line) in lines.chunks(n).enumerate() {
            let base = line_base(line_no, n, stride);
            for (t, v) in line.iter().enumerate() {
                data[base + t * stride] = *v;
            }
        }
    }
}

fn line_base(line_no: usize, n: usize, stride: usize) -> usize {
    if stride == n {
        // lines along axis 2: line_no = i * n + l
        let (i, l) = (line_no / n, line_no % n);
        i * n * n + l
    } else {
        // lines along axis 1: line_no = j * n + l
        line_no
    }
}

fn sign_alternate(i: usize) -> f64 {
    if i % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Per-axis phases turning the centered lattice sum into a plain DFT.
///
/// With `k_i = dk (i - n/2 + s)` and `x_j = dx (j - n/2)`,
/// `exp(i k_i x_j) = exp(2 pi i ij/n) * p_k(i) * p_x(j)` where
/// `p_k(i) = (-1)^i` and `p_x(j) = (-1)^(j + n/2) exp(-i pi s) exp(2 pi i s j/n)`.
struct AxisPhases {
    k_side: Vec<Complex64>,
    x_side: Vec<Complex64>,
}

impl AxisPhases {
    fn new(grid: &KGrid) -> Self {
        let n = grid.n();
        let s = if grid.offset() { 0.5 } else { 0.0 };
        let k_side = (0..n).map(|i| Complex64::new(sign_alternate(i), 0.0)).collect();
        let global = sign_alternate(n / 2) * Complex64::from_polar(1.0, -PI * s);
        let x_side = (0..n)
            .map(|j| global * sign_alternate(j) * Complex64::from_polar(1.0, 2.0 * PI * s * j as f64 / n as f64))
            .collect();
        AxisPhases { k_side, x_side }
    }

    fn apply(table: &[Complex64], grid: &KGrid, data: &mut [Complex64]) {
        data.par_iter_mut().enumerate().for_each(|(idx, v)| {
            let [i, j, l] = grid.coords(idx);
            *v *= table[i] * table[j] * table[l];
        });
    }
}

/// Evaluate `sum_k dk^3/(2pi)^3 w(k) coeff(k) exp(-i eps (omega_k t - k.x))`
/// on every dual-lattice point.
pub fn k_to_x(
    grid: &KGrid,
    coeff: &[Complex64],
    measure: MeasureKind,
    sign: FrequencySign,
    t: f64,
) -> Result<Vec<Complex64>> {
    grid.check_len(coeff.len())?;
    let eps = sign.value();
    let omega = grid.omega();
    if measure == MeasureKind::Invariant
        && omega.iter().zip(coeff).any(|(&w, c)| w == 0.0 && *c != ZERO)
    {
        return Err(Error::ZeroFrequencyNode);
    }
    let phases = AxisPhases::new(grid);
    let scale = grid.k_cell();
    let mut buf: Vec<Complex64> = coeff
        .par_iter()
        .zip(omega.par_iter())
        .map(|(&c, &w)| {
            if c == ZERO {
                return ZERO;
            }
            let weight = match measure {
                MeasureKind::Invariant => 1.0 / (2.0 * w),
                MeasureKind::Trivial => 1.0,
            };
            let v = c * weight * Complex64::from_polar(1.0, -eps * w * t);
            // the exp(-ik.x) kernel is the conjugate of the exp(+ik.x) one
            if eps > 0.0 {
                v
            } else {
                v.conj()
            }
        })
        .collect();
    AxisPhases::apply(&phases.k_side, grid, &mut buf);
    fft3(&mut buf, grid.n(), FftDirection::Inverse);
    AxisPhases::apply(&phases.x_side, grid, &mut buf);
    buf.par_iter_mut().for_each(|v| {
        *v *= scale;
        if eps < 0.0 {
            *v = v.conj();
        }
    });
    Ok(buf)
}

/// Exact inverse of `k_to_x(.., Trivial, Plus, 0)`: `c(k) = dx^3 sum_x psi(x) exp(-i k.x)`.
pub fn x_to_k(grid: &KGrid, field: &[Complex64]) -> Result<Vec<Complex64>> {
    grid.check_len(field.len())?;
    let phases = AxisPhases::new(grid);
    let scale = grid.x_cell();
    // sum_j psi_j exp(-i k_i x_j) = conj( sum_j conj(psi_j) exp(+i k_i x_j) )
    let mut buf: Vec<Complex64> = field.par_iter().map(|v| v.conj()).collect();
    AxisPhases::apply(&phases.x_side, grid, &mut buf);
    fft3(&mut buf, grid.n(), FftDirection::Inverse);
    AxisPhases::apply(&phases.k_side, grid, &mut buf);
    buf.par_iter_mut().for_each(|v| *v = v.conj() * scale);
    Ok(buf)
}

fn fft_wavenumber(m: usize, n: usize, dk: f64) -> f64 {
    if m < n / 2 {
        dk * m as f64
    } else if m == n / 2 {
        0.0
    } else {
        dk * (m as f64 - n as f64)
    }
}

/// Spectral gradient of a periodic field sampled on the dual lattice.
pub fn spectral_gradient(grid: &KGrid, field: &[Complex64]) -> Result<[Vec<Complex64>; 3]> {
    grid.check_len(field.len())?;
    let n = grid.n();
    let mut spec = field.to_vec();
    fft3(&mut spec, n, FftDirection::Forward);
    let norm = 1.0 / grid.len() as f64;
    let mut out: [Vec<Complex64>; 3] = Default::default();
    for (axis, slot) in out.iter_mut().enumerate() {
        let mut d: Vec<Complex64> = spec
            .par_iter()
            .enumerate()
            .map(|(idx, &v)| {
                let m = grid.coords(idx)[axis];
                v * Complex64::new(0.0, fft_wavenumber(m, n, grid.dk()) * norm)
            })
            .collect();
        fft3(&mut d, n, FftDirection::Inverse);
        *slot = d;
    }
    Ok(out)
}

/// Spectral divergence of a periodic vector field sampled on the dual lattice.
pub fn spectral_divergence(grid: &KGrid, field: &[Vec<Complex64>; 3]) -> Result<Vec<Complex64>> {
    let n = grid.n();
    let norm = 1.0 / grid.len() as f64;
    let mut acc = vec![ZERO; grid.len()];
    for (axis, comp) in field.iter().enumerate() {
        grid.check_len(comp.len())?;
        let mut spec = comp.clone();
        fft3(&mut spec, n, FftDirection::Forward);
        acc.par_iter_mut().zip(spec.par_iter()).enumerate().for_each(|(idx, (a, &v))| {
            let m = grid.coords(idx)[axis];
            *a += v * Complex64::new(0.0, fft_wavenumber(m, n, grid.dk()) * norm);
        });
    }
    fft3(&mut acc, n, FftDirection::Inverse);
    Ok(acc)
}
