use std::ffi::CStr;
use std::path::Path;
use std::process::Command;
use std::ptr;

use maxwellqm_ffi::*;

fn grid(n: usize, k_max: f64) -> *mut MqGrid {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { mq_grid_new(n, k_max, true, 1.0, 1.0, 1.0, &mut g) }, MqStatus::Ok);
    g
}

fn packet(g: *const MqGrid, k0: [f64; 3], mode: MqMode, sign: i32) -> *mut MqState {
    let mut s = ptr::null_mut();
    let st = unsafe { mq_state_gaussian(g, k0.as_ptr(), 1.5, mode as i32, sign, 1, false, &mut s) };
    assert_eq!(st, MqStatus::Ok);
    s
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(mq_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn handle_lifecycle_and_products() {
    let g = grid(16, 8.0);
    assert_eq!(unsafe { mq_grid_len(g) }, 4096);
    assert!((unsafe { mq_grid_dx(g) } - 2.0 * std::f64::consts::PI / 16.0).abs() < 1e-15);
    let a = packet(g, [0.0, 0.0, 1.0], MqMode::Plus, 1);
    let b = packet(g, [0.0, 0.5, -1.0], MqMode::Minus, -1);
    let mut sum = ptr::null_mut();
    assert_eq!(unsafe { mq_state_add(a, b, &mut sum) }, MqStatus::Ok);
    let (mut re, mut im) = (0.0, 0.0);
    assert_eq!(unsafe { mq_inner_product(sum, sum, &mut re, &mut im) }, MqStatus::Ok);
    assert!((re - 2.0).abs() < 1e-10 && im.abs() < 1e-12);
    let mut later = ptr::null_mut();
    assert_eq!(unsafe { mq_state_evolve(sum, 3.0, &mut later) }, MqStatus::Ok);
    assert_eq!(unsafe { mq_inner_product(later, later, &mut re, &mut im) }, MqStatus::Ok);
    assert!((re - 2.0).abs() < 1e-10);
    let mut x = [f64::NAN; 3];
    assert_eq!(unsafe { mq_position_expectation(a, x.as_mut_ptr()) }, MqStatus::Ok);
    assert!(x.iter().all(|v| v.abs() < 1e-6));
    let mut psi = vec![0.0; 4096];
    assert_eq!(unsafe { mq_state_real_psi(a, 0.0, psi.as_mut_ptr(), psi.len()) }, MqStatus::Ok);
    assert!(psi.iter().any(|v| *v != 0.0));
    assert_eq!(unsafe { mq_state_real_psi(sum, 0.0, psi.as_mut_ptr(), psi.len()) }, MqStatus::Numerical);
    assert_eq!(unsafe { mq_state_real_psi(a, 0.0, psi.as_mut_ptr(), 10) }, MqStatus::InvalidArgument);
    unsafe {
        mq_state_free(later);
        mq_state_free(sum);
        mq_state_free(b);
        mq_state_free(a);
        mq_grid_free(g);
        mq_state_free(ptr::null_mut());
        mq_grid_free(ptr::null_mut());
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { mq_grid_new(3, 4.0, true, 1.0, 1.0, 1.0, &mut g) }, MqStatus::InvalidGrid);
    assert!(g.is_null());
    assert!(last_error().contains("grid"));
    assert_eq!(unsafe { mq_grid_new(8, 4.0, true, 1.0, 1.0, 1.0, ptr::null_mut()) }, MqStatus::NullPointer);

    let g = grid(8, 4.0);
    let mut s = ptr::null_mut();
    let k0 = [0.0, 0.0, 3.5];
    assert_eq!(unsafe { mq_state_gaussian(g, k0.as_ptr(), 1.0, 1, 1, 1, false, &mut s) }, MqStatus::BoundarySupport);
    assert_eq!(unsafe { mq_state_gaussian(g, k0.as_ptr(), 1.0, 7, 1, 1, false, &mut s) }, MqStatus::InvalidArgument);
    assert_eq!(unsafe { mq_state_gaussian(g, k0.as_ptr(), 1.0, 1, 0, 1, false, &mut s) }, MqStatus::InvalidArgument);
    assert!(last_error().contains("sign"));

    let other = grid(16, 8.0);
    let a = packet(other, [0.0, 0.0, 1.0], MqMode::Plus, 1);
    let big = grid(16, 8.0);
    let b = packet(big, [0.0, 0.0, 1.0], MqMode::Plus, 1);
    let (mut re, mut im) = (0.0, 0.0);
    // equal lattices built separately are compatible
    assert_eq!(unsafe { mq_inner_product(a, b, &mut re, &mut im) }, MqStatus::Ok);
    let g2 = grid(16, 6.0);
    let c = packet(g2, [0.0, 0.0, 1.0], MqMode::Plus, 1);
    assert_eq!(unsafe { mq_inner_product(a, c, &mut re, &mut im) }, MqStatus::GridMismatch);
    let mut nw = ptr::null_mut();
    assert_eq!(unsafe { mq_state_gaussian(other, [0.0, 0.0, 1.0].as_ptr(), 1.5, 1, 1, 1, true, &mut nw) }, MqStatus::Ok);
    assert_eq!(unsafe { mq_inner_product(a, nw, &mut re, &mut im) }, MqStatus::ConventionMismatch);
    assert_eq!(unsafe { mq_inner_product(a, ptr::null(), &mut re, &mut im) }, MqStatus::NullPointer);
    unsafe {
        for s in [a, b, c, nw] {
            mq_state_free(s);
        }
        for g in [g, other, big, g2] {
            mq_grid_free(g);
        }
    }
}

#[test]
fn hegerfeldt_at_t_zero_is_real() {
    let radii: Vec<f64> = (1..=50).map(|i| i as f64 * 0.02).collect();
    let mut re = vec![0.0; 50];
    let mut im = vec![1.0; 50];
    let st = unsafe { mq_hegerfeldt(0.0, radii.as_ptr(), 50, 40.0, 1.0, re.as_mut_ptr(), im.as_mut_ptr()) };
    assert_eq!(st, MqStatus::Ok);
    assert!(im.iter().all(|v| *v == 0.0));
    assert!(re.iter().any(|v| v.abs() > 0.0));
    let bad = [0.5, 0.2];
    assert_eq!(unsafe { mq_hegerfeldt(0.0, bad.as_ptr(), 2, 40.0, 1.0, re.as_mut_ptr(), im.as_mut_ptr()) }, MqStatus::InvalidArgument);
}

#[test]
fn header_declares_the_api_and_parses_as_c() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("include").join("maxwellqm.h");
    let text = std::fs::read_to_string(&path).unwrap();
    for name in ["mq_grid_new", "mq_state_gaussian", "mq_inner_product", "mq_last_error", "MQ_STATUS_GRID_MISMATCH", "typedef struct MqState MqState"] {
        assert!(text.contains(name), "{name} missing");
    }
    if let Ok(out) = Command::new("cc").args(["-fsyntax-only", "-x", "c", "-std=c99"]).arg(&path).output() {
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
}
