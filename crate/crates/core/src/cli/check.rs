use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use crate::covariance::hegerfeldt_correlator;
use crate::error::{Error, Result};
use crate::operators::{evolve, hermiticity_asymmetry};
use crate::oracle::{oracle_field, oracle_inner_product};
use crate::polarization::Mode;
use crate::products::{current_field, density_sector_resolved, parseval_report, weighted_product, ProductKind};
use crate::state::PhotonState;
use crate::synthesis::synthesize;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckLine {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub experiment: String,
    pub checks: Vec<CheckLine>,
    pub pass: bool,
}

fn line(name: &str, value: f64, tolerance: f64) -> CheckLine {
    CheckLine { name: name.into(), value, tolerance, pass: value.is_finite() && value < tolerance }
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

fn gauge_pair(state: &PhotonState) -> Result<PhotonState> {
    let ((_, sign), c) = state.sectors().next().ok_or(Error::NonNormalizable)?;
    state
        .filtered(|_| false)
        .with_sector(Mode::Longitudinal, sign, c.to_vec())
        .map(|s| s.enforce_lorenz())
}

/// Run every invariant on the configured grid and state.
pub fn run_checks(cfg: &RunConfig) -> Result<CheckReport> {
    let grid = cfg.build_grid()?;
    let s = cfg.build_state(&grid)?;
    if !s.is_normalizable() || s.is_zero() {
        return Err(Error::NonNormalizable);
    }
    let tol = cfg.tolerances;
    let kind = ProductKind::of(s.normalization());
    let norm = |x: &PhotonState| weighted_product(x, x, kind).map(|v| v.value().re);
    let mut out = Vec::new();

    let transverse = s.sector_keys().iter().all(|(m, _)| m.is_transverse());
    if transverse {
        out.push(line("parseval", parseval_report(&s)?.relative, tol.parseval));
    }

    let n0 = norm(&s)?;
    out.push(line("positivity", if transverse && n0 > 0.0 { 0.0 } else { 1.0 }, 0.5));

    let step = 0.1 * grid.dx() / grid.constants().c;
    let mut u = s.clone();
    for _ in 0..100 {
        u = evolve(&u, step);
    }
    out.push(line("unitarity", (norm(&u)? - n0).abs() / n0, tol.unitarity));

    let pair = gauge_pair(&s)?;
    let pv = weighted_product(&pair, &pair, kind)?;
    out.push(line("gauge_cancellation", pv.value().norm() / pv.max_sector().max(f64::MIN_POSITIVE), tol.gauge));

    let shifted = s.translate([grid.dx(), -grid.dx(), 0.0]);
    let h = hermiticity_asymmetry(&s, &shifted)?;
    out.push(line("position_hermiticity", h.iter().cloned().fold(0.0, f64::max), tol.hermiticity));

    let resolved = density_sector_resolved(&s, 0.0)?;
    let mut worst = 0.0f64;
    for (key, rho) in &resolved {
        let j0 = current_field(&s.filtered(|k| k == *key), 0.0)?.j0;
        let peak = j0.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let diff = j0.iter().zip(rho).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        worst = worst.max(diff / peak.max(f64::MIN_POSITIVE));
    }
    out.push(line("density_two_path", worst, tol.density));

    let total = current_field(&s, 0.0)?.total(&grid);
    let weighted = weighted_product(&s, &s, ProductKind::NewtonWigner)?.value();
    out.push(line("density_integral", rel(total.into(), weighted), tol.density));

    let o = oracle_inner_product(&s, &shifted)?.value;
    out.push(line("oracle_product", rel(o, weighted_product(&s, &shifted, ProductKind::Invariant)?.value()), tol.oracle));

    let t = 0.3;
    let snap = synthesize(&s, t)?;
    let peak = snap.a.iter().flatten().fold(0.0f64, |m, v| m.max(v.norm()));
    let n = grid.n();
    let mut worst = 0.0f64;
    for (i, j, l) in [(n / 2, n / 2, n / 2), (0, n - 1, n / 3), (n / 4, 1, n - 2)] {
        let x = [grid.axis_x(i), grid.axis_x(j), grid.axis_x(l)];
        let f = oracle_field(&s, t, x)?.value;
        let idx = grid.index(i, j, l);
        for mu in 0..4 {
            worst = worst.max((f.a[mu] - snap.a[mu][idx]).norm() / peak.max(f64::MIN_POSITIVE));
        }
    }
    out.push(line("oracle_field", worst, tol.oracle));

    let radii: Vec<f64> = (1..=50).map(|i| i as f64 * 0.02).collect();
    let (plus, _) = hegerfeldt_correlator(0.0, &radii, 64.0, grid.constants().c)?;
    let re = plus.values.iter().fold(0.0f64, |m, v| m.max(v.re.abs()));
    let im = plus.values.iter().fold(0.0f64, |m, v| m.max(v.im.abs()));
    out.push(line("hegerfeldt_t0", im / re, tol.cancellation));

    let pass = out.iter().all(|c| c.pass);
    Ok(CheckReport { experiment: cfg.experiment.clone(), checks: out, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_passes() {
        let r = run_checks(&RunConfig::default()).unwrap();
        for c in &r.checks {
            assert!(c.pass, "{c:?}");
        }
        assert!(r.pass);
        assert_eq!(r.checks.len(), 10);
    }

    #[test]
    fn plane_wave_is_refused() {
        let mut cfg = RunConfig::default();
        cfg.state = crate::cli::config::StateSpec::PlaneWave {
            q: [0.5, 0.5, 1.5],
            mode: Mode::Plus,
            sign: crate::grid::FrequencySign::Plus,
            amp: [1.0, 0.0],
        };
        assert_eq!(run_checks(&cfg).unwrap_err(), Error::NonNormalizable);
    }

    #[test]
    fn verdict_follows_tolerance() {
        let l = line("x", 2.0, 1.0);
        assert!(!l.pass);
        assert!(line("x", 0.5, 1.0).pass);
        assert!(!line("x", f64::NAN, 1.0).pass);
    }
}
