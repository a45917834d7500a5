//! Inner products, the photon four-current, densities and norm reports.

mod current;

pub use current::{
    born_density, born_density_complex, continuity_residual, continuity_residual_with_step, current_field, density_epsilon_basis,
    density_sector_resolved, four_current, parseval_report, BornDensity, ContinuityReport, CurrentField,
    CurrentSample, ParsevalReport,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::FrequencySign;
use crate::polarization::Mode;
use crate::state::{Normalization, PhotonState};
use crate::sum::pairwise_map_c;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProductKind {
    Invariant,
    NewtonWigner,
}

impl ProductKind {
    pub fn normalization(self) -> Normalization {
        match self {
            ProductKind::Invariant => Normalization::Invariant,
            ProductKind::NewtonWigner => Normalization::NewtonWigner,
        }
    }

    pub fn of(normalization: Normalization) -> Self {
        match normalization {
            Normalization::Invariant => ProductKind::Invariant,
            Normalization::NewtonWigner => ProductKind::NewtonWigner,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorValue {
    pub mode: Mode,
    pub sign: FrequencySign,
    pub value_re: f64,
    pub value_im: f64,
}

impl SectorValue {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.value_re, self.value_im)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InnerProductValue {
    pub convention: ProductKind,
    pub value_re: f64,
    pub value_im: f64,
    pub sector_breakdown: Vec<SectorValue>,
}

impl InnerProductValue {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.value_re, self.value_im)
    }

    /// Partial sum over the transverse sectors.
    pub fn transverse(&self) -> Complex64 {
        self.sector_breakdown.iter().filter(|s| s.mode.is_transverse()).map(|s| s.value()).sum()
    }

    /// Largest sector magnitude.
    pub fn max_sector(&self) -> f64 {
        self.sector_breakdown.iter().map(|s| s.value().norm()).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

/// `sum_k dk^3/(2pi)^3 w(k) zeta c1* c2` over matching sectors, without convention checks.
pub(crate) fn weighted_product(s1: &PhotonState, s2: &PhotonState, kind: ProductKind) -> Result<InnerProductValue> {
    if *s1.grid() != *s2.grid() {
        return Err(Error::GridMismatch);
    }
    let grid = s1.grid();
    let omega = grid.omega();
    let mut sectors = Vec::new();
    let mut total = Complex64::new(0.0, 0.0);
    for ((mode, sign), a) in s1.sectors() {
        let Some(b) = s2.coeff(mode, sign) else { continue };
        let sum = match kind {
            ProductKind::Invariant => pairwise_map_c(a.len(), |i| a[i].conj() * b[i]),
            ProductKind::NewtonWigner => pairwise_map_c(a.len(), |i| {
                let p = a[i].conj() * b[i];
                if p == Complex64::new(0.0, 0.0) {
                    p
                } else {
                    p / (2.0 * omega[i])
                }
            }),
        };
        let v = sum * (mode.zeta() * grid.k_cell());
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::ZeroFrequencyNode);
        }
        total += v;
        sectors.push(SectorValue { mode, sign, value_re: v.re, value_im: v.im });
    }
    Ok(InnerProductValue { convention: kind, value_re: total.re, value_im: total.im, sector_breakdown: sectors })
}

fn check_convention(s: &PhotonState, want: Normalization) -> Result<()> {
    if s.normalization() != want {
        return Err(Error::ConventionMismatch { expected: want.alpha(), got: s.alpha() });
    }
    Ok(())
}

/// Invariant product `sum_k dk^3/(2pi)^3 sum zeta c1* c2` (alpha = 0 states).
pub fn inner_product(s1: &PhotonState, s2: &PhotonState) -> Result<InnerProductValue> {
    if *s1.grid() != *s2.grid() {
        return Err(Error::GridMismatch);
    }
    check_convention(s1, Normalization::Invariant)?;
    check_convention(s2, Normalization::Invariant)?;
    weighted_product(s1, s2, ProductKind::Invariant)
}

/// Newton-Wigner product with the extra weight `1/(2 omega_k)` (alpha = 1/2 states).
pub fn inner_product_nw(s1: &PhotonState, s2: &PhotonState) -> Result<InnerProductValue> {
    if *s1.grid() != *s2.grid() {
        return Err(Error::GridMismatch);
    }
    check_convention(s1, Normalization::NewtonWigner)?;
    check_convention(s2, Normalization::NewtonWigner)?;
    weighted_product(s1, s2, ProductKind::NewtonWigner)
}

/// Product matching the convention of the inputs.
pub fn matched_product(s1: &PhotonState, s2: &PhotonState) -> Result<InnerProductValue> {
    match s1.normalization() {
        Normalization::Invariant => inner_product(s1, s2),
        Normalization::NewtonWigner => inner_product_nw(s1, s2),
    }
}

/// `(s, s)` under the matching product; refuses non-normalizable and zero states.
pub fn norm_squared(s: &PhotonState) -> Result<f64> {
    if !s.is_normalizable() {
        return Err(Error::NonNormalizable);
    }
    let v = matched_product(s, s)?.value().re;
    if v == 0.0 {
        return Err(Error::NonNormalizable);
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use crate::state::gaussian_profile;
    use std::sync::Arc;

    fn g16() -> Arc<crate::grid::KGrid> {
        Arc::new(make_grid(16, 8.0, true).unwrap())
    }

    #[test]
    fn opposite_signs_are_orthogonal() {
        let g = g16();
        let a = PhotonState::gaussian_packet(&g, [0.0, 0.0, 1.0], 1.5, Mode::Plus, FrequencySign::Plus, 1).unwrap();
        let b = PhotonState::gaussian_packet(&g, [0.0, 0.0, 1.0], 1.5, Mode::Plus, FrequencySign::Minus, 1).unwrap();
        assert_eq!(inner_product(&a, &b).unwrap().value(), Complex64::new(0.0, 0.0));
        let c = PhotonState::gaussian_packet(&g, [0.0, 0.0, 1.0], 1.5, Mode::Minus, FrequencySign::Plus, 1).unwrap();
        assert_eq!(inner_product(&a, &c).unwrap().value(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn normalized_packet_has_unit_norm() {
        let g = g16();
        let a = PhotonState::gaussian_packet(&g, [1.0, 0.0, 1.0], 1.5, Mode::Minus, FrequencySign::Plus, 1).unwrap();
        assert!((inner_product(&a, &a).unwrap().value() - 1.0).norm() < 1e-10);
    }

    #[test]
    fn lorenz_pair_cancels() {
        let g = g16();
        let f = gaussian_profile(&g, [0.0, 0.5, 0.5], 1.5);
        let s = PhotonState::from_profile(&g, Mode::Longitudinal, FrequencySign::Plus, f, Normalization::Invariant, 1)
            .unwrap()
            .enforce_lorenz();
        let v = inner_product(&s, &s).unwrap();
        assert!(v.value().norm() < 1e-12 * v.max_sector());
        assert!(v.max_sector() > 0.0);
    }

    #[test]
    fn nw_product_is_invariant_product_over_two_omega() {
        let g = g16();
        let f = gaussian_profile(&g, [0.0, 0.5, 0.5], 1.5);
        let s = PhotonState::from_profile(&g, Mode::Plus, FrequencySign::Plus, f.clone(), Normalization::NewtonWigner, 1)
            .unwrap();
        let scaled: Vec<Complex64> = f.iter().zip(g.omega()).map(|(c, w)| c / (2.0 * w).sqrt()).collect();
        let t = PhotonState::from_profile(&g, Mode::Plus, FrequencySign::Plus, scaled, Normalization::Invariant, 1)
            .unwrap();
        let a = inner_product_nw(&s, &s).unwrap().value();
        let b = inner_product(&t, &t).unwrap().value();
        assert!((a - b).norm() < 1e-12 * a.norm());
        assert!(matches!(inner_product_nw(&s, &t), Err(Error::ConventionMismatch { .. })));
    }

    #[test]
    fn plane_wave_same_node_weight() {
        let g = Arc::new(make_grid(8, 4.0, true).unwrap());
        let q = [0.5, -1.5, 2.5];
        let amp = Complex64::new(0.3, 0.4);
        let s = PhotonState::plane_wave(&g, q, Mode::Plus, FrequencySign::Plus, amp).unwrap();
        let other = PhotonState::plane_wave(&g, [0.5, -1.5, 1.5], Mode::Plus, FrequencySign::Plus, amp).unwrap();
        assert_eq!(inner_product(&s, &other).unwrap().value(), Complex64::new(0.0, 0.0));
        let w = g.omega()[g.node_index(q).unwrap()];
        let expect = (2.0 * std::f64::consts::PI).powi(3) * (2.0 * w).powi(2) * amp.norm_sqr() / g.dk().powi(3);
        let v = inner_product(&s, &s).unwrap().value();
        assert!((v.re - expect).abs() < 1e-10 * expect);
        assert!(norm_squared(&s).is_err());
        let scalar = PhotonState::plane_wave(&g, q, Mode::Scalar, FrequencySign::Plus, amp).unwrap();
        assert!((inner_product(&scalar, &scalar).unwrap().value().re + expect).abs() < 1e-10 * expect);
    }

    #[test]
    fn grid_mismatch_is_rejected() {
        let a = PhotonState::zero(&g16(), Normalization::Invariant, 1);
        let b = PhotonState::zero(&Arc::new(make_grid(8, 8.0, true).unwrap()), Normalization::Invariant, 1);
        assert_eq!(inner_product(&a, &b).unwrap_err(), Error::GridMismatch);
    }
}
