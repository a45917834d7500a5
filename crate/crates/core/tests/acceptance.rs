//! Acceptance suite. Prints one line per criterion; exits nonzero if any
//! check not listed in `KNOWN_OPEN` fails.

use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use maxwellqm::cli::hyperplane_scan;
use maxwellqm::covariance::{hegerfeldt_correlator, localized_propagation};
use maxwellqm::grid::{make_grid, FrequencySign, KGrid};
use maxwellqm::operators::{eigen_residual, energy_expectation, evolve, hermiticity_asymmetry, intrinsic_j3};
use maxwellqm::oracle::{oracle_energy, oracle_field, oracle_inner_product, oracle_inner_product_nw};
use maxwellqm::polarization::Mode;
use maxwellqm::products::{
    continuity_residual_with_step, current_field, density_epsilon_basis, density_sector_resolved, inner_product,
    inner_product_nw, parseval_report,
};
use maxwellqm::state::{delta_profile, LinearAxis, Normalization, PhotonState};
use maxwellqm::synthesis::{reduce_real, synthesize};

/// Sub-checks that fail by construction; see the notes in the README.
const KNOWN_OPEN: &[&str] = &["integral_vs_invariant_product", "psi_cp_literal"];

struct Check {
    name: &'static str,
    value: f64,
    limit: f64,
    /// `true`: value must be below the limit, `false`: at or above it.
    below: bool,
}

impl Check {
    fn lt(name: &'static str, value: f64, limit: f64) -> Self {
        Check { name, value, limit, below: true }
    }

    fn ge(name: &'static str, value: f64, limit: f64) -> Self {
        Check { name, value, limit, below: false }
    }

    fn pass(&self) -> bool {
        self.value.is_finite() && if self.below { self.value < self.limit } else { self.value >= self.limit }
    }
}

fn grid(n: usize, k_max: f64, offset: bool) -> Arc<KGrid> {
    Arc::new(make_grid(n, k_max, offset).unwrap())
}

fn packet(g: &Arc<KGrid>, k0: [f64; 3], s: f64, mode: Mode, sign: FrequencySign) -> PhotonState {
    PhotonState::gaussian_packet(g, k0, s, mode, sign, 1).unwrap()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn random_c(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn random_sign(rng: &mut ChaCha8Rng) -> FrequencySign {
    if rng.gen_bool(0.5) {
        FrequencySign::Plus
    } else {
        FrequencySign::Minus
    }
}

fn random_helicity(rng: &mut ChaCha8Rng) -> Mode {
    if rng.gen_bool(0.5) {
        Mode::Plus
    } else {
        Mode::Minus
    }
}

fn parseval() -> Vec<Check> {
    let g = grid(32, 8.0, true);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut worst, mut worst_real, mut slowest) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..5 {
        let start = Instant::now();
        let k0 = [0, 1, 2].map(|_| rng.gen_range(-2.0..2.0));
        let s = rng.gen_range(1.5..2.5);
        let st = packet(&g, k0, s, random_helicity(&mut rng), random_sign(&mut rng));
        let r = parseval_report(&st).unwrap();
        worst = worst.max(r.relative);
        if let (Some(x), Some(p)) = (r.real_xnorm, r.real_predicted) {
            worst_real = worst_real.max((x - p).abs() / p);
        }
        slowest = slowest.max(start.elapsed().as_secs_f64());
    }
    vec![
        Check::lt("complex_route", worst, 1e-10),
        Check::lt("real_route", worst_real, 1e-10),
        Check::lt("seconds_per_packet", slowest, 2.0),
    ]
}

fn gauge() -> Vec<Check> {
    let g = grid(16, 8.0, true);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for sign in [FrequencySign::Plus, FrequencySign::Minus] {
        let random: Vec<Complex64> = (0..g.len()).map(|_| random_c(&mut rng)).collect();
        let profiles = [random, packet(&g, [0.5, -0.5, 1.0], 1.5, Mode::Plus, sign).coeff(Mode::Plus, sign).unwrap().to_vec()];
        for p in profiles {
            let s = PhotonState::from_profile(&g, Mode::Longitudinal, sign, p, Normalization::Invariant, 1)
                .unwrap()
                .enforce_lorenz();
            let v = inner_product(&s, &s).unwrap();
            worst = worst.max(v.value().norm() / v.max_sector());
        }
    }
    vec![Check::lt("relative_to_sector", worst, 1e-12)]
}

fn positivity() -> Vec<Check> {
    let g = grid(8, 4.0, true);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut out = Vec::new();
    for (name, sign) in [("plus_min_norm", FrequencySign::Plus), ("minus_min_norm", FrequencySign::Minus)] {
        let mut least = f64::INFINITY;
        for _ in 0..20 {
            let mut s = PhotonState::zero(&g, Normalization::Invariant, 1);
            for mode in [Mode::Plus, Mode::Minus] {
                let c: Vec<Complex64> = (0..g.len()).map(|_| random_c(&mut rng)).collect();
                s = s.with_sector(mode, sign, c).unwrap();
            }
            least = least.min(inner_product(&s, &s).unwrap().value().re);
        }
        out.push(Check::ge(name, least, f64::MIN_POSITIVE));
    }
    out
}

fn unitarity() -> Vec<Check> {
    let g = grid(16, 8.0, true);
    let s = packet(&g, [0.5, 0.0, 1.0], 1.5, Mode::Plus, FrequencySign::Plus)
        .add(&packet(&g, [0.0, -0.5, 1.0], 1.5, Mode::Minus, FrequencySign::Minus))
        .unwrap();
    let n0 = inner_product(&s, &s).unwrap().value().re;
    let mut u = s;
    let mut worst = 0.0f64;
    for step in 0..100 {
        u = evolve(&u, 0.037 * (1 + step % 7) as f64);
        worst = worst.max((inner_product(&u, &u).unwrap().value().re - n0).abs() / n0);
    }
    vec![Check::lt("norm_drift", worst, 1e-12)]
}

fn hermiticity() -> Vec<Check> {
    let g = grid(24, 12.0, true);
    let a = packet(&g, [0.0, 0.5, 4.5], 1.5, Mode::Plus, FrequencySign::Plus).translate([0.2, 0.0, -0.3]);
    let b = packet(&g, [0.5, 0.0, 4.0], 1.5, Mode::Plus, FrequencySign::Plus);
    let invariant = hermiticity_asymmetry(&a, &b).unwrap();
    let nw = |k0| PhotonState::gaussian_packet_in(&g, k0, 1.5, Mode::Minus, FrequencySign::Plus, 1, Normalization::NewtonWigner).unwrap();
    let newton_wigner = hermiticity_asymmetry(&nw([0.0, 0.5, 4.5]), &nw([0.5, 0.0, 4.0]).translate([0.1, 0.1, 0.0])).unwrap();
    vec![
        Check::lt("alpha_0", invariant.iter().cloned().fold(0.0, f64::max), 1e-6),
        Check::lt("alpha_half", newton_wigner.iter().cloned().fold(0.0, f64::max), 1e-6),
    ]
}

fn eigen_refinement() -> Vec<Check> {
    let residual = |n: usize| {
        let g = grid(n, 4.0, true);
        let y = [g.dx(), -g.dx(), 2.0 * g.dx()];
        let s = PhotonState::localized_state(&g, y, Mode::Plus, FrequencySign::Plus, Normalization::Invariant, 1).unwrap();
        eigen_residual(&s, y).unwrap()
    };
    let (coarse, fine) = (residual(16), residual(32));
    vec![Check::ge("ratio_16_to_32", coarse / fine, 3.5)]
}

fn orthogonality() -> Vec<Check> {
    let g = grid(16, 4.0, true);
    let h = g.dx();
    let x = [0.0, h, -h];
    let ys = [[h, h, -h], [0.0, 0.0, 0.0], [3.0 * h, -2.0 * h, 5.0 * h], [-7.0 * h, 7.0 * h, 0.0]];
    let mut out = Vec::new();
    for (name, norm) in [("alpha_0", Normalization::Invariant), ("alpha_half", Normalization::NewtonWigner)] {
        let at = |p| PhotonState::localized_state(&g, p, Mode::Plus, FrequencySign::Plus, norm, 1).unwrap();
        let product = |a: &PhotonState, b: &PhotonState| match norm {
            Normalization::Invariant => inner_product(a, b).unwrap().value(),
            Normalization::NewtonWigner => inner_product_nw(a, b).unwrap().value(),
        };
        let ax = at(x);
        let self_norm = product(&ax, &ax).re;
        let worst = ys.iter().map(|&y| product(&ax, &at(y)).norm() / self_norm).fold(0.0, f64::max);
        out.push(Check::lt(name, worst, 1e-12));
    }
    out
}

fn angular_momentum() -> Vec<Check> {
    let g = grid(32, 8.0, true);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for m in 0..=2 {
        for lambda in [1, -1] {
            for _ in 0..100 {
                let k = g.k_at(rng.gen_range(0..g.len()));
                let j3 = intrinsic_j3(k, lambda, m, g.constants()).unwrap();
                worst = worst.max((j3 - g.constants().hbar * (m * lambda) as f64).abs());
            }
        }
    }
    vec![Check::lt("max_abs_error", worst, 1e-10)]
}

fn causality() -> Vec<Check> {
    let start = Instant::now();
    let s = 0.05;
    let p = localized_propagation([0.0; 3], s, 20.0 * s, 1.0, 20.0 / s).unwrap();
    vec![
        Check::ge("real_shell_fraction", p.real_shell.shell_fraction, 0.99),
        Check::ge("out_of_shell_ratio", p.out_of_shell_ratio(), 100.0),
        Check::lt("seconds", start.elapsed().as_secs_f64(), 10.0),
    ]
}

fn hegerfeldt() -> Vec<Check> {
    let radii: Vec<f64> = (1..=50).map(|i| i as f64 * 0.02).collect();
    let (plus, _) = hegerfeldt_correlator(0.0, &radii, 64.0, 1.0).unwrap();
    let re = plus.values.iter().fold(0.0f64, |m, v| m.max(v.re.abs()));
    let im = plus.values.iter().fold(0.0f64, |m, v| m.max(v.im.abs()));
    vec![Check::lt("im_over_re", im / re, 1e-12)]
}

fn hyperplane() -> Vec<Check> {
    let start = Instant::now();
    let g = grid(42, 8.4, true);
    let s = packet(&g, [0.0, 0.0, 4.0], 1.5, Mode::Plus, FrequencySign::Plus);
    let values = hyperplane_scan(&s, &[0.0, 0.1, 0.2, 0.3], 8.0, 24).unwrap();
    let worst = values.iter().map(|v| rel(*v, values[0])).fold(0.0, f64::max);
    vec![Check::lt("relative_deviation", worst, 0.01), Check::lt("seconds", start.elapsed().as_secs_f64(), 60.0)]
}

fn densities() -> Vec<Check> {
    let g = grid(16, 8.0, true);
    let s = packet(&g, [0.5, 0.0, 1.0], 1.5, Mode::Plus, FrequencySign::Plus)
        .add(&packet(&g, [0.0, 0.5, -1.0], 1.5, Mode::Minus, FrequencySign::Minus))
        .unwrap();
    let t = 0.4;
    let resolved = density_sector_resolved(&s, t).unwrap();
    let mut per_sector = 0.0f64;
    let mut summed = vec![0.0; g.len()];
    for (key, rho) in &resolved {
        let direct = current_field(&s.filtered(|k| k == *key), t).unwrap().j0;
        per_sector = per_sector.max(max_diff(&direct, rho) / max_abs(&direct));
        summed.iter_mut().zip(rho).for_each(|(a, b)| *a += b);
    }
    let basis = density_epsilon_basis(&s, t).unwrap();
    let total = current_field(&s, t).unwrap().total(&g);
    let relabeled = s.clone().with_normalization(Normalization::NewtonWigner);
    let weighted = inner_product_nw(&relabeled, &relabeled).unwrap().value().re;
    let invariant = inner_product(&s, &s).unwrap().value().re;
    vec![
        Check::lt("per_sector_two_path", per_sector, 1e-10),
        Check::lt("epsilon_basis_sum", max_diff(&summed, &basis) / max_abs(&basis), 1e-10),
        Check::lt("integral_vs_weighted_norm", (total - weighted).abs() / weighted, 1e-10),
        Check::lt("integral_vs_invariant_product", (total - invariant).abs() / invariant, 1e-10),
    ]
}

fn continuity() -> Vec<Check> {
    let g = grid(24, 8.0, true);
    let s = packet(&g, [0.0, 0.0, 2.0], 2.5, Mode::Plus, FrequencySign::Plus);
    let dt = g.dx() / 10.0;
    let a = continuity_residual_with_step(&s, 0.5, dt).unwrap().residual;
    let b = continuity_residual_with_step(&s, 0.5, dt / 2.0).unwrap().residual;
    vec![Check::ge("halving_ratio", a / b, 3.5)]
}

fn plane_waves() -> Vec<Check> {
    let g = grid(16, 8.0, false);
    let q = 2.0 * g.dk();
    let t = 0.35;
    let f = g.constants().field_scale();
    let c = g.constants().c;
    let profile = || delta_profile(&g, [0.0, 0.0, q], Complex64::new(1.0, 0.0)).unwrap();
    let phase = |idx: usize| q * (c * t - g.x_at(idx)[2]);
    let fields = |s: PhotonState| reduce_real(&synthesize(&s, t).unwrap()).unwrap();
    let error = |e: &[Vec<f64>; 3], want: &dyn Fn(usize) -> [f64; 3]| {
        (0..g.len()).fold(0.0f64, |m, i| {
            let w = want(i);
            (0..3).fold(m, |m, j| m.max((e[j][i] - w[j]).abs()))
        })
    };
    let amp = -0.5 * f;
    let lin1 = fields(PhotonState::linear_state(&g, profile(), LinearAxis::Theta, 1).unwrap());
    let lin2 = fields(PhotonState::linear_state(&g, profile(), LinearAxis::Phi, 1).unwrap());
    let e_lin1 = error(&lin1.e, &|i| [amp * phase(i).cos(), 0.0, 0.0]);
    let e_lin2 = error(&lin2.e, &|i| [0.0, amp * phase(i).cos(), 0.0]);
    let (mut e_rot, mut e_psi, mut e_cp) = (0.0f64, 0.0f64, 0.0f64);
    for lambda in [1, -1] {
        let r = fields(PhotonState::circular_state(&g, profile(), lambda, 1).unwrap());
        let a = amp / 2f64.sqrt();
        e_rot = e_rot.max(error(&r.e, &|i| [a * phase(i).cos(), lambda as f64 * a * phase(i).sin(), 0.0]));
        for i in 0..g.len() {
            let kx = -phase(i);
            e_psi = e_psi.max((r.psi[i] - kx.cos()).abs());
            e_cp = e_cp.max((r.psi[i] - (kx.cos() + lambda as f64 * kx.sin())).abs());
        }
    }
    vec![
        Check::lt("linear_theta", e_lin1, 1e-12),
        Check::lt("linear_phi", e_lin2, 1e-12),
        Check::lt("rotating", e_rot, 1e-12),
        Check::lt("psi_cos_form", e_psi, 1e-12),
        Check::lt("psi_cp_literal", e_cp, 1e-12),
    ]
}

fn oracle() -> Vec<Check> {
    let g = grid(16, 8.0, true);
    let transverse = packet(&g, [0.5, 0.0, 1.0], 1.5, Mode::Plus, FrequencySign::Plus)
        .add(&packet(&g, [0.0, -0.5, 1.0], 1.5, Mode::Minus, FrequencySign::Minus))
        .unwrap();
    let pair = PhotonState::from_profile(
        &g,
        Mode::Longitudinal,
        FrequencySign::Plus,
        packet(&g, [0.0, 0.5, 0.5], 2.0, Mode::Plus, FrequencySign::Plus).coeff(Mode::Plus, FrequencySign::Plus).unwrap().to_vec(),
        Normalization::Invariant,
        1,
    )
    .unwrap()
    .enforce_lorenz();
    let s = transverse.add(&pair).unwrap();
    let other = s.translate([g.dx(), 0.0, -2.0 * g.dx()]);

    let product = rel(inner_product(&s, &other).unwrap().value(), oracle_inner_product(&s, &other).unwrap().value);
    let (a, b) = (s.clone().with_normalization(Normalization::NewtonWigner), other.with_normalization(Normalization::NewtonWigner));
    let product_nw = rel(inner_product_nw(&a, &b).unwrap().value(), oracle_inner_product_nw(&a, &b).unwrap().value);

    let energy_direct = oracle_energy(&transverse).unwrap().value / oracle_inner_product(&transverse, &transverse).unwrap().value.re;
    let energy = (energy_expectation(&transverse).unwrap() - energy_direct).abs() / energy_direct;

    let t = 0.3;
    let snap = synthesize(&s, t).unwrap();
    let peak_a = snap.a.iter().flatten().fold(0.0f64, |m, v| m.max(v.norm()));
    let peak_psi = snap.sectors.iter().flat_map(|f| &f.psi).fold(0.0f64, |m, v| m.max(v.norm()));
    let (mut field, mut psi) = (0.0f64, 0.0f64);
    for idx in 0..g.len() {
        let o = oracle_field(&s, t, g.x_at(idx)).unwrap().value;
        for mu in 0..4 {
            field = field.max((o.a[mu] - snap.a[mu][idx]).norm() / peak_a);
        }
        for (key, v) in &o.psi {
            let sec = snap.sectors.iter().find(|f| (f.mode, f.sign) == *key).unwrap();
            psi = psi.max((v - sec.psi[idx]).norm() / peak_psi);
        }
    }
    vec![
        Check::lt("inner_product", product, 1e-10),
        Check::lt("inner_product_nw", product_nw, 1e-10),
        Check::lt("energy", energy, 1e-10),
        Check::lt("potential_all_points", field, 1e-10),
        Check::lt("psi_all_points", psi, 1e-10),
    ]
}

fn main() {
    let criteria: [(&str, fn() -> Vec<Check>); 15] = [
        ("parseval", parseval),
        ("gauge_cancellation", gauge),
        ("positive_definiteness", positivity),
        ("unitarity", unitarity),
        ("position_hermiticity", hermiticity),
        ("eigenvector_residual", eigen_refinement),
        ("eigenvector_orthogonality", orthogonality),
        ("intrinsic_angular_momentum", angular_momentum),
        ("causality_shell", causality),
        ("hegerfeldt_cancellation", hegerfeldt),
        ("hyperplane_independence", hyperplane),
        ("two_path_density", densities),
        ("continuity", continuity),
        ("plane_wave_forms", plane_waves),
        ("oracle_equivalence", oracle),
    ];
    let mut unexpected = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let checks = run();
        let ok = checks.iter().all(Check::pass);
        let detail: Vec<String> = checks
            .iter()
            .map(|c| {
                let op = if c.below { "<" } else { ">=" };
                let mark = if c.pass() { "" } else { " FAIL" };
                format!("{}={:.3e}{op}{:.1e}{mark}", c.name, c.value, c.limit)
            })
            .collect();
        println!(
            "{:>2} {:<28} {}  [{:.2}s] {}",
            i + 1,
            name,
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            detail.join(" ")
        );
        for c in checks.iter().filter(|c| !c.pass() && !KNOWN_OPEN.contains(&c.name)) {
            unexpected.push(format!("{name}/{}", c.name));
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {}", unexpected.join(", "));
        std::process::exit(1);
    }
}
