//! Radially reduced k-integrals: the Hegerfeldt correlator and the causal
//! spreading of a smoothed localized state.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::quadrature::integrate;
use crate::error::{Error, Result};

const TOL: f64 = 1e-13;

/// Values on a radial grid at time `t`; `cutoff` is the band limit used.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub radii: Vec<f64>,
    pub values: Vec<Complex64>,
    pub t: f64,
    pub cutoff: f64,
}

impl RadialProfile {
    pub fn new(radii: Vec<f64>, values: Vec<Complex64>, t: f64, cutoff: f64) -> Result<Self> {
        check_radii(&radii)?;
        if radii.len() != values.len() {
            return Err(Error::ShapeMismatch { expected: radii.len(), got: values.len() });
        }
        Ok(RadialProfile { radii, values, t, cutoff })
    }

    /// `r,re,im` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,re,im\n");
        for (r, v) in self.radii.iter().zip(&self.values) {
            let _ = writeln!(out, "{r:.17e},{:.17e},{:.17e}", v.re, v.im);
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

fn check_radii(radii: &[f64]) -> Result<()> {
    if radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
        return Err(Error::InvalidArgument("radii must be finite and > 0".into()));
    }
    if radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("radii must be strictly increasing".into()));
    }
    Ok(())
}

/// How the k-integral is cut off at the band limit `K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandLimit {
    /// `int_0^K`.
    Sharp,
    /// `int_0^inf ... exp(-k^2/(2K^2))`.
    Gaussian,
}

impl BandLimit {
    fn range(self, k: f64) -> f64 {
        match self {
            BandLimit::Sharp => k,
            BandLimit::Gaussian => 10.0 * k,
        }
    }

    fn weight(self, q: f64, k: f64) -> f64 {
        match self {
            BandLimit::Sharp => 1.0,
            BandLimit::Gaussian => (-0.5 * (q / k).powi(2)).exp(),
        }
    }
}

/// `sin(kr)/r`, finite at `r = 0`.
fn sinc_r(k: f64, r: f64) -> f64 {
    let x = k * r;
    if x.abs() < 1e-4 {
        k * (1.0 - x * x / 6.0)
    } else {
        x.sin() / r
    }
}

fn panels(upper: f64, r: f64, ct: f64) -> usize {
    (upper * (r + ct.abs()) / PI).ceil() as usize + 1
}

/// `int_0^upper dk k sin(kr)/r e^{-ikct} w(k)`.
fn radial_integral<W: Fn(f64) -> f64>(r: f64, ct: f64, upper: f64, w: W) -> Complex64 {
    integrate(|k| Complex64::from_polar(k * sinc_r(k, r) * w(k), -k * ct), 0.0, upper, panels(upper, r, ct), TOL).value
}

/// Positive-frequency correlator `I+(t,r) = int_0^K dk k sin(kr) e^{-ikct} / ((2pi)^2 r)`
/// and the real total `I+ + I-` with `I- = conj(I+)`.
pub fn hegerfeldt_correlator(t: f64, radii: &[f64], k: f64, c: f64) -> Result<(RadialProfile, RadialProfile)> {
    hegerfeldt_correlator_with(t, radii, k, c, BandLimit::Sharp)
}

pub fn hegerfeldt_correlator_with(
    t: f64,
    radii: &[f64],
    k: f64,
    c: f64,
    band: BandLimit,
) -> Result<(RadialProfile, RadialProfile)> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::InvalidArgument(format!("band limit must be > 0, got {k}")));
    }
    check_radii(radii)?;
    let pre = 1.0 / (2.0 * PI).powi(2);
    let plus: Vec<Complex64> =
        radii.par_iter().map(|&r| radial_integral(r, c * t, band.range(k), |q| band.weight(q, k)) * pre).collect();
    let total = plus.iter().map(|v| Complex64::new(2.0 * v.re, 0.0)).collect();
    Ok((
        RadialProfile { radii: radii.to_vec(), values: plus, t, cutoff: k },
        RadialProfile { radii: radii.to_vec(), values: total, t, cutoff: k },
    ))
}

/// Fraction of `int |f|^2 r^2 dr` inside and outside the shell `|r - c|t|| < 5s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShellReport {
    pub t: f64,
    pub s: f64,
    pub total_mass: f64,
    pub shell_fraction: f64,
    pub out_of_shell: f64,
}

/// Radial profile of `psi` for `c(k) = exp(-k^2 s^2/2) exp(-ik.y)` about `y`,
/// with the real profile `Re psi+` and the positive-frequency profile `psi+`.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagation {
    pub y: [f64; 3],
    pub real: RadialProfile,
    pub positive: RadialProfile,
    pub real_shell: ShellReport,
    pub positive_shell: ShellReport,
}

impl Propagation {
    /// Out-of-shell fraction of the positive-frequency field over that of the real field.
    pub fn out_of_shell_ratio(&self) -> f64 {
        self.positive_shell.out_of_shell / self.real_shell.out_of_shell.max(f64::MIN_POSITIVE)
    }
}

fn shell(profile: &RadialProfile, s: f64, ct: f64, real: bool) -> ShellReport {
    let r = &profile.radii;
    let mass = |i: usize| {
        let v = profile.values[i];
        let m = if real { v.re * v.re } else { v.norm_sqr() };
        m * r[i] * r[i]
    };
    let mut total = 0.0;
    let mut inside = 0.0;
    for i in 1..r.len() {
        let piece = 0.5 * (mass(i - 1) + mass(i)) * (r[i] - r[i - 1]);
        total += piece;
        let mid = 0.5 * (r[i] + r[i - 1]);
        if (mid - ct.abs()).abs() < 5.0 * s {
            inside += piece;
        }
    }
    let frac = if total > 0.0 { inside / total } else { 0.0 };
    ShellReport { t: profile.t, s, total_mass: total, shell_fraction: frac, out_of_shell: 1.0 - frac }
}

/// Causal spreading of the smoothed localized state, sampled every `s/10`
/// out to `c|t| + 15 s`; `k_max` is the band limit of the k-integral.
pub fn localized_propagation(y: [f64; 3], s: f64, t: f64, c: f64, k_max: f64) -> Result<Propagation> {
    if !(s.is_finite() && s > 0.0 && k_max.is_finite() && k_max > 0.0) {
        return Err(Error::InvalidArgument("smoothing and band limit must be > 0".into()));
    }
    if s <= 2.0 * PI / k_max {
        return Err(Error::UnderResolved { s, k_max });
    }
    let ct = c * t;
    let step = s / 10.0;
    let count = ((ct.abs() + 15.0 * s) / step).ceil() as usize;
    let radii: Vec<f64> = (1..=count).map(|i| i as f64 * step).collect();
    let pre = 1.0 / (2.0 * PI * PI);
    let upper = k_max.min(12.0 / s);
    let values: Vec<Complex64> = radii
        .par_iter()
        .map(|&r| radial_integral(r, ct, upper, |q| (-0.5 * q * q * s * s).exp()) * pre)
        .collect();
    let positive = RadialProfile { radii: radii.clone(), values: values.clone(), t, cutoff: upper };
    let real = RadialProfile { radii, values: values.iter().map(|v| Complex64::new(v.re, 0.0)).collect(), t, cutoff: upper };
    Ok(Propagation {
        y,
        real_shell: shell(&real, s, ct, true),
        positive_shell: shell(&positive, s, ct, false),
        real,
        positive,
    })
}
