//! C ABI over `maxwellqm`.
//!
//! Grids and states are opaque heap handles freed with their `*_free`
//! function. Every fallible call returns an [`MqStatus`]; the message of the
//! last failure on the calling thread is available from [`mq_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use maxwellqm::covariance::hegerfeldt_correlator;
use maxwellqm::grid::{FrequencySign, KGrid, PhysicalConstants};
use maxwellqm::operators::{evolve, position_expectation};
use maxwellqm::polarization::Mode;
use maxwellqm::products::matched_product;
use maxwellqm::state::{Normalization, PhotonState};
use maxwellqm::Error;

/// Opaque momentum lattice.
pub struct MqGrid(Arc<KGrid>);

/// Opaque photon state.
pub struct MqState(PhotonState);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidGrid = 3,
    OffLattice = 4,
    ZeroFrequency = 5,
    BoundarySupport = 6,
    NonNormalizable = 7,
    ConventionMismatch = 8,
    GridMismatch = 9,
    Numerical = 10,
    Panic = 11,
}

/// Polarization mode codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MqMode {
    Scalar = 0,
    Plus = 1,
    Minus = 2,
    Longitudinal = 3,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> MqStatus {
    match e {
        Error::InvalidArgument(_) | Error::ShapeMismatch { .. } | Error::ComplexProfile => MqStatus::InvalidArgument,
        Error::InvalidGrid(_) | Error::InvalidConstants(_) => MqStatus::InvalidGrid,
        Error::OffLattice(..) | Error::OffDualLattice(..) => MqStatus::OffLattice,
        Error::ZeroFrequencyNode | Error::UndefinedDirection => MqStatus::ZeroFrequency,
        Error::BoundarySupport { .. } => MqStatus::BoundarySupport,
        Error::NonNormalizable | Error::IndefiniteNorm(_) => MqStatus::NonNormalizable,
        Error::ConventionMismatch { .. } => MqStatus::ConventionMismatch,
        Error::GridMismatch => MqStatus::GridMismatch,
        _ => MqStatus::Numerical,
    }
}

fn guard<F: FnOnce() -> Result<(), Error>>(f: F) -> MqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MqStatus::Ok,
        Ok(Err(e)) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            MqStatus::Panic
        }
    }
}

macro_rules! non_null {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            set_error(format!("{} is null", stringify!($p)));
            return MqStatus::NullPointer;
        })+
    };
}

fn mode_of(code: i32) -> Result<Mode, Error> {
    match code {
        c if c == MqMode::Scalar as i32 => Ok(Mode::Scalar),
        c if c == MqMode::Plus as i32 => Ok(Mode::Plus),
        c if c == MqMode::Minus as i32 => Ok(Mode::Minus),
        c if c == MqMode::Longitudinal as i32 => Ok(Mode::Longitudinal),
        _ => Err(Error::InvalidArgument(format!("unknown mode code {code}"))),
    }
}

fn sign_of(eps: i32) -> Result<FrequencySign, Error> {
    match eps {
        1 => Ok(FrequencySign::Plus),
        -1 => Ok(FrequencySign::Minus),
        _ => Err(Error::InvalidArgument(format!("frequency sign must be +1 or -1, got {eps}"))),
    }
}

fn put<T>(out: *mut *mut T, v: T) {
    unsafe { *out = Box::into_raw(Box::new(v)) };
}

/// Message of the last failed call on this thread, or null. Valid until the next failing call.
#[no_mangle]
pub extern "C" fn mq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `out` must be a valid pointer to write the new handle to.
#[no_mangle]
pub unsafe extern "C" fn mq_grid_new(
    n: usize,
    k_max: f64,
    offset: bool,
    c: f64,
    hbar: f64,
    eps0: f64,
    out: *mut *mut MqGrid,
) -> MqStatus {
    non_null!(out);
    guard(|| {
        let consts = PhysicalConstants::new(c, hbar, eps0)?;
        put(out, MqGrid(Arc::new(KGrid::new(n, k_max, offset, consts)?)));
        Ok(())
    })
}

/// # Safety
/// `grid` must come from `mq_grid_new` and not be used afterwards; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn mq_grid_free(grid: *mut MqGrid) {
    if !grid.is_null() {
        drop(Box::from_raw(grid));
    }
}

/// Number of nodes `n^3`; 0 for a null handle.
///
/// # Safety
/// `grid` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn mq_grid_len(grid: *const MqGrid) -> usize {
    grid.as_ref().map_or(0, |g| g.0.len())
}

/// Position spacing `2 pi / (n dk)`; NaN for a null handle.
///
/// # Safety
/// `grid` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn mq_grid_dx(grid: *const MqGrid) -> f64 {
    grid.as_ref().map_or(f64::NAN, |g| g.0.dx())
}

/// Gaussian packet normalized under the product of its convention
/// (`newton_wigner = false`: invariant). `mode` is an `MqMode` code, `sign` is +1 or -1.
///
/// # Safety
/// `grid` must be live, `k0` must point to 3 doubles, `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mq_state_gaussian(
    grid: *const MqGrid,
    k0: *const f64,
    s: f64,
    mode: i32,
    sign: i32,
    m: i32,
    newton_wigner: bool,
    out: *mut *mut MqState,
) -> MqStatus {
    non_null!(grid, k0, out);
    guard(|| {
        let g = &(*grid).0;
        let k = std::slice::from_raw_parts(k0, 3);
        let norm = if newton_wigner { Normalization::NewtonWigner } else { Normalization::Invariant };
        let st = PhotonState::gaussian_packet_in(g, [k[0], k[1], k[2]], s, mode_of(mode)?, sign_of(sign)?, m, norm)?;
        put(out, MqState(st));
        Ok(())
    })
}

/// # Safety
/// `state` must come from this library and not be used afterwards; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn mq_state_free(state: *mut MqState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// `a + b` as a new state.
///
/// # Safety
/// `a`, `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mq_state_add(a: *const MqState, b: *const MqState, out: *mut *mut MqState) -> MqStatus {
    non_null!(a, b, out);
    guard(|| {
        put(out, MqState((*a).0.add(&(*b).0)?));
        Ok(())
    })
}

/// `U(tau)` applied to `state`, as a new state.
///
/// # Safety
/// `state` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mq_state_evolve(state: *const MqState, tau: f64, out: *mut *mut MqState) -> MqStatus {
    non_null!(state, out);
    guard(|| {
        if !tau.is_finite() {
            return Err(Error::InvalidArgument("tau must be finite".into()));
        }
        put(out, MqState(evolve(&(*state).0, tau)));
        Ok(())
    })
}

/// Inner product under the convention shared by both states.
///
/// # Safety
/// `a`, `b` must be live; `re`, `im` writable.
#[no_mangle]
pub unsafe extern "C" fn mq_inner_product(a: *const MqState, b: *const MqState, re: *mut f64, im: *mut f64) -> MqStatus {
    non_null!(a, b, re, im);
    guard(|| {
        let v = matched_product(&(*a).0, &(*b).0)?.value();
        *re = v.re;
        *im = v.im;
        Ok(())
    })
}

/// `<x>` of a normalizable state.
///
/// # Safety
/// `state` must be live; `out` must point to 3 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn mq_position_expectation(state: *const MqState, out: *mut f64) -> MqStatus {
    non_null!(state, out);
    guard(|| {
        let x = position_expectation(&(*state).0)?;
        std::slice::from_raw_parts_mut(out, 3).copy_from_slice(&x);
        Ok(())
    })
}

/// Real wave function `Re sum_lambda psi_lambda^+` at time `t` on the dual lattice.
///
/// # Safety
/// `state` must be live; `out` must hold `len` doubles and `len` must equal the node count.
#[no_mangle]
pub unsafe extern "C" fn mq_state_real_psi(state: *const MqState, t: f64, out: *mut f64, len: usize) -> MqStatus {
    non_null!(state, out);
    guard(|| {
        let s = &(*state).0;
        s.grid().check_len(len)?;
        let psi = s.real_psi(t)?;
        std::slice::from_raw_parts_mut(out, len).copy_from_slice(&psi);
        Ok(())
    })
}

/// Positive-frequency correlator `I+(t, r)` with a sharp band limit `k`.
///
/// # Safety
/// `radii`, `re`, `im` must each hold `count` doubles.
#[no_mangle]
pub unsafe extern "C" fn mq_hegerfeldt(
    t: f64,
    radii: *const f64,
    count: usize,
    k: f64,
    c: f64,
    re: *mut f64,
    im: *mut f64,
) -> MqStatus {
    non_null!(radii, re, im);
    guard(|| {
        let r = std::slice::from_raw_parts(radii, count);
        let (plus, _) = hegerfeldt_correlator(t, r, k, c)?;
        let (re, im) = (std::slice::from_raw_parts_mut(re, count), std::slice::from_raw_parts_mut(im, count));
        for (i, v) in plus.values.iter().enumerate() {
            re[i] = v.re;
            im[i] = v.im;
        }
        Ok(())
    })
}
