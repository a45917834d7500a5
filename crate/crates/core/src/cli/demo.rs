use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::ValueEnum;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use super::config::RunConfig;
use crate::covariance::{hegerfeldt_correlator, hyperplane_inner_product, localized_propagation, Hyperplane};
use crate::error::{Error, Result};
use crate::grid::{FrequencySign, KGrid};
use crate::polarization::Mode;
use crate::state::{delta_profile, LinearAxis, PhotonState};
use crate::synthesis::{reduce_real, synthesize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Demo {
    LinearWave,
    CircularWave,
    Localized,
    Hegerfeldt,
    Hyperplane,
}

/// Per-demo overrides; `None` keeps the built-in default.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct DemoParams {
    pub t: Option<f64>,
    pub ct: Option<f64>,
    pub s: Option<f64>,
    pub k: Option<f64>,
    pub rapidities: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DemoManifest {
    pub demo: Demo,
    pub params: DemoParams,
    pub files: Vec<String>,
    pub summary: serde_json::Value,
}

struct Out<'a> {
    dir: &'a Path,
    files: Vec<String>,
}

impl Out<'_> {
    fn put(&mut self, name: &str, text: &str) -> Result<()> {
        std::fs::write(self.dir.join(name), text)?;
        self.files.push(name.into());
        Ok(())
    }
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::InvalidArgument(format!("--{name} must be > 0, got {v}")));
    }
    Ok(v)
}

/// Single plane wave along `e3` at `q = 2 dk` on the unshifted version of the configured grid.
fn plane_wave_fields(cfg: &RunConfig, p: &DemoParams, out: &mut Out, circular: bool) -> Result<serde_json::Value> {
    let grid = Arc::new(KGrid::new(cfg.grid.n, cfg.grid.k_max, false, cfg.constants)?);
    let q = 2.0 * grid.dk();
    let profile = delta_profile(&grid, [0.0, 0.0, q], Complex64::new(1.0, 0.0))?;
    let state = if circular {
        PhotonState::circular_state(&grid, profile, 1, 1)?
    } else {
        PhotonState::linear_state(&grid, profile, LinearAxis::Theta, 1)?
    };
    let t = p.t.unwrap_or(0.0);
    let real = reduce_real(&synthesize(&state, t)?)?;
    let c = grid.constants().c;
    let amp = -0.5 * grid.constants().field_scale() / if circular { 2f64.sqrt() } else { 1.0 };
    let n = grid.n();
    let mut csv = String::from(if circular { "z,E1,E2,E1_expected,E2_expected\n" } else { "z,E1,E1_expected\n" });
    let mut worst = 0.0f64;
    for l in 0..n {
        let idx = grid.index(n / 2, n / 2, l);
        let z = grid.axis_x(l);
        let phase = q * (c * t - z);
        let (e1, e2) = (amp * phase.cos(), amp * phase.sin());
        worst = worst.max((real.e[0][idx] - e1).abs());
        if circular {
            worst = worst.max((real.e[1][idx] - e2).abs());
            let _ = writeln!(csv, "{z:.17e},{:.17e},{:.17e},{e1:.17e},{e2:.17e}", real.e[0][idx], real.e[1][idx]);
        } else {
            let _ = writeln!(csv, "{z:.17e},{:.17e},{e1:.17e}", real.e[0][idx]);
        }
    }
    out.put(if circular { "circular-wave.csv" } else { "linear-wave.csv" }, &csv)?;
    Ok(json!({ "q": q, "t": t, "amplitude": amp, "max_abs_error": worst }))
}

fn localized(cfg: &RunConfig, p: &DemoParams, out: &mut Out) -> Result<serde_json::Value> {
    let s = positive("s", p.s.unwrap_or(0.02))?;
    let ct = p.ct.unwrap_or(20.0 * s);
    let c = cfg.constants.c;
    let k = positive("k", p.k.unwrap_or(20.0 / s))?;
    let prop = localized_propagation([0.0; 3], s, ct / c, c, k)?;
    out.put("localized.csv", &prop.real.to_csv())?;
    out.put("localized-positive.csv", &prop.positive.to_csv())?;
    Ok(json!({
        "s": s,
        "ct": ct,
        "band_limit": prop.real.cutoff,
        "real": prop.real_shell,
        "positive": prop.positive_shell,
        "out_of_shell_ratio": prop.out_of_shell_ratio(),
    }))
}

fn hegerfeldt(cfg: &RunConfig, p: &DemoParams, out: &mut Out) -> Result<serde_json::Value> {
    let t = p.t.unwrap_or(0.0);
    let k = positive("k", p.k.unwrap_or(64.0))?;
    let radii: Vec<f64> = (1..=200).map(|i| i as f64 * 0.01).collect();
    let (plus, total) = hegerfeldt_correlator(t, &radii, k, cfg.constants.c)?;
    out.put("hegerfeldt-plus.csv", &plus.to_csv())?;
    out.put("hegerfeldt-total.csv", &total.to_csv())?;
    let max_im = plus.values.iter().fold(0.0f64, |m, v| m.max(v.im.abs()));
    let max_re = plus.values.iter().fold(0.0f64, |m, v| m.max(v.re.abs()));
    Ok(json!({ "t": t, "band_limit": k, "max_abs_re": max_re, "max_abs_im": max_im }))
}

/// Values of the covariant product on boosted planes, with the t-plane value first.
pub fn hyperplane_scan(state: &PhotonState, rapidities: &[f64], extent: f64, resolution: usize) -> Result<Vec<Complex64>> {
    rapidities
        .iter()
        .map(|&eta| {
            let plane = Hyperplane::boosted(eta, [0.0, 0.0, 1.0], 0.0, [0.0; 3], extent, resolution)?;
            hyperplane_inner_product(state, state, &plane)
        })
        .collect()
}

fn hyperplane(cfg: &RunConfig, p: &DemoParams, out: &mut Out) -> Result<serde_json::Value> {
    let grid = Arc::new(KGrid::new(42, 8.4, true, cfg.constants)?);
    let state = PhotonState::gaussian_packet(&grid, [0.0, 0.0, 4.0], 1.5, Mode::Plus, FrequencySign::Plus, 1)?;
    let mut etas = vec![0.0];
    etas.extend(p.rapidities.clone().unwrap_or_else(|| vec![0.1, 0.2, 0.3]));
    let values = hyperplane_scan(&state, &etas, 8.0, 24)?;
    let flat = values[0];
    let worst = values.iter().map(|v| (v - flat).norm() / flat.norm()).fold(0.0, f64::max);
    let rows: Vec<_> = etas.iter().zip(&values).map(|(e, v)| json!({ "rapidity": e, "re": v.re, "im": v.im })).collect();
    let report = json!({ "values": rows, "max_relative_deviation": worst });
    out.put("hyperplane.json", &serde_json::to_string_pretty(&report)?)?;
    Ok(report)
}

pub fn run_demo(demo: Demo, cfg: &RunConfig, params: &DemoParams, dir: &Path) -> Result<DemoManifest> {
    std::fs::create_dir_all(dir)?;
    let mut out = Out { dir, files: Vec::new() };
    let summary = match demo {
        Demo::LinearWave => plane_wave_fields(cfg, params, &mut out, false)?,
        Demo::CircularWave => plane_wave_fields(cfg, params, &mut out, true)?,
        Demo::Localized => localized(cfg, params, &mut out)?,
        Demo::Hegerfeldt => hegerfeldt(cfg, params, &mut out)?,
        Demo::Hyperplane => hyperplane(cfg, params, &mut out)?,
    };
    let manifest = DemoManifest { demo, params: params.clone(), files: out.files, summary };
    std::fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)?)?;
    Ok(manifest)
}

pub fn default_dir(cfg: &RunConfig, demo: Demo) -> PathBuf {
    let name = demo.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    cfg.output.join(name)
}
