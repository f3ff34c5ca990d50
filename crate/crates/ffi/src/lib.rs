//! C ABI for `hyperbell`.
//!
//! Objects cross the boundary as opaque handles (`HbState`,
//! `HbBellOperator`) created by `hb_*` constructors and released with the
//! matching `*_free`. Every fallible call returns an `HbStatus`; on failure
//! `hb_last_error_message` describes the most recent error on the calling
//! thread. Panics are caught and reported as `HB_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hyperbell::bell::{self, BellOperator};
use hyperbell::lhv::{self, SearchOptions, StrategyClass};
use hyperbell::model::{self, DofKind, NoiseKind, NoiseModel, ObsName, ObservableId, QuantumState};
use hyperbell::simlab::{self, JointSetting, ViolationReport};
use hyperbell::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Numerical = 3,
    GuardExceeded = 4,
    DimensionMismatch = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

pub const HB_DOF_POLARIZATION: u32 = 0;
pub const HB_DOF_PATH: u32 = 1;

pub const HB_OBS_A: u32 = 0;
pub const HB_OBS_LOWER_A: u32 = 1;
pub const HB_OBS_B: u32 = 2;
pub const HB_OBS_LOWER_B: u32 = 3;

pub const HB_NOISE_NONE: u32 = 0;
pub const HB_NOISE_WHITE: u32 = 1;
pub const HB_NOISE_DEPHASING: u32 = 2;

pub const HB_CLASS_FACTORIZABLE: u32 = 0;
pub const HB_CLASS_CONTEXT_UNRESTRICTED: u32 = 1;

/// One local observable: `name` is an `HB_OBS_*` value, `kind` an
/// `HB_DOF_*` value.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct HbObservable {
    pub name: u32,
    pub kind: u32,
}

/// Result of an exhaustive local-hidden-variable search.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct HbBound {
    pub bound: i64,
    pub witness_u: u64,
    pub witness_d: u64,
    pub strategies_evaluated: u64,
}

/// A pure or mixed state.
pub struct HbState(QuantumState);

/// A Bell operator with its term table.
pub struct HbBellOperator(BellOperator);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(HbStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::DimensionMismatch { .. } | Error::DimensionTooLarge(_) => HbStatus::DimensionMismatch,
            Error::GuardExceeded { .. } => HbStatus::GuardExceeded,
            Error::Numerical(_) => HbStatus::Numerical,
            _ => HbStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(HbStatus::InvalidArgument, msg.into())
}

fn null(what: &str) -> Failure {
    Failure(HbStatus::NullPointer, format!("{what} is null"))
}

fn ffi_call(f: impl FnOnce() -> Result<(), Failure>) -> HbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HbStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            HbStatus::Panic
        }
    }
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn in_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

fn dof_kind(k: u32) -> Result<DofKind, Failure> {
    match k {
        HB_DOF_POLARIZATION => Ok(DofKind::Polarization),
        HB_DOF_PATH => Ok(DofKind::Path),
        _ => Err(invalid(format!("unknown DOF kind {k}"))),
    }
}

fn observable(o: HbObservable) -> Result<ObservableId, Failure> {
    let name = match o.name {
        HB_OBS_A => ObsName::A,
        HB_OBS_LOWER_A => ObsName::LowerA,
        HB_OBS_B => ObsName::B,
        HB_OBS_LOWER_B => ObsName::LowerB,
        n => return Err(invalid(format!("unknown observable name {n}"))),
    };
    Ok(ObservableId::new(name, dof_kind(o.kind)?))
}

unsafe fn setting(u: *const HbObservable, d: *const HbObservable, n_dof: usize) -> Result<JointSetting, Failure> {
    if u.is_null() || d.is_null() {
        return Err(null("observable array"));
    }
    if n_dof == 0 || n_dof > model::MAX_DOFS {
        return Err(invalid(format!("n_dof must be in 1..={}", model::MAX_DOFS)));
    }
    let conv = |p: *const HbObservable| -> Result<Vec<ObservableId>, Failure> {
        std::slice::from_raw_parts(p, n_dof).iter().map(|&o| observable(o)).collect()
    };
    Ok(JointSetting::new(conv(u)?, conv(d)?)?)
}

fn boxed<T>(out: &mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn hb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// `(|HH⟩ + e^{iθ}|VV⟩)/√2 ⊗ (|lr⟩ + e^{iφ}|rl⟩)/√2`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn hb_state_hyper(theta: f64, phi: f64, out: *mut *mut HbState) -> HbStatus {
    ffi_call(|| {
        let out = out_ref(out, "out")?;
        boxed(out, HbState(model::hyper_state(theta, phi)?));
        Ok(())
    })
}

/// Ideal N-DOF state, one maximally entangled pair per DOF.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn hb_state_ideal(n_dof: usize, out: *mut *mut HbState) -> HbStatus {
    ffi_call(|| {
        let out = out_ref(out, "out")?;
        boxed(out, HbState(model::ideal_state(n_dof)?));
        Ok(())
    })
}

/// New state with `noise` (an `HB_NOISE_*` value) applied; `state` is
/// left unchanged.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hb_state_apply_noise(
    state: *const HbState,
    noise: u32,
    v_pi: f64,
    v_k: f64,
    out: *mut *mut HbState,
) -> HbStatus {
    ffi_call(|| {
        let st = in_ref(state, "state")?;
        let out = out_ref(out, "out")?;
        let kind = match noise {
            HB_NOISE_NONE => NoiseKind::None,
            HB_NOISE_WHITE => NoiseKind::White,
            HB_NOISE_DEPHASING => NoiseKind::Dephasing,
            k => return Err(invalid(format!("unknown noise kind {k}"))),
        };
        let model = NoiseModel::new(kind, v_pi, v_k)?;
        boxed(out, HbState(model::apply_noise(&st.0, &model)?));
        Ok(())
    })
}

/// Hilbert-space dimension and DOF count of a state.
///
/// # Safety
/// `state` must be a live handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn hb_state_shape(state: *const HbState, out_dim: *mut usize, out_n_dof: *mut usize) -> HbStatus {
    ffi_call(|| {
        let st = in_ref(state, "state")?;
        *out_ref(out_dim, "out_dim")? = st.0.dim();
        *out_ref(out_n_dof, "out_n_dof")? = st.0.dofs().len();
        Ok(())
    })
}

/// # Safety
/// `state` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hb_state_free(state: *mut HbState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Product Bell operator over `n_dof` DOFs (polarization, path, ...).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hb_bell_build(n_dof: usize, out: *mut *mut HbBellOperator) -> HbStatus {
    ffi_call(|| {
        let out = out_ref(out, "out")?;
        boxed(out, HbBellOperator(bell::build_beta(n_dof)?));
        Ok(())
    })
}

/// # Safety
/// `bell` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hb_bell_free(bell: *mut HbBellOperator) {
    if !bell.is_null() {
        drop(Box::from_raw(bell));
    }
}

/// Signed `⟨β⟩` on a state with the same DOF layout.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hb_bell_quantum_value(
    bell: *const HbBellOperator,
    state: *const HbState,
    out: *mut f64,
) -> HbStatus {
    ffi_call(|| {
        let b = in_ref(bell, "bell")?;
        let st = in_ref(state, "state")?;
        *out_ref(out, "out")? = bell::quantum_value(&b.0, &st.0)?.signed;
        Ok(())
    })
}

/// # Safety
/// `bell` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hb_bell_spectral_radius(bell: *const HbBellOperator, out: *mut f64) -> HbStatus {
    ffi_call(|| {
        let b = in_ref(bell, "bell")?;
        *out_ref(out, "out")? = b.0.spectral_radius()?;
        Ok(())
    })
}

/// Exhaustive maximum over one strategy class (`HB_CLASS_*`). Refuses with
/// `HB_STATUS_GUARD_EXCEEDED` when the class has more than `guard`
/// strategy pairs; `guard = 0` selects the default of 2^32.
///
/// # Safety
/// `bell` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hb_lhv_max_bound(
    bell: *const HbBellOperator,
    class: u32,
    guard: u64,
    out: *mut HbBound,
) -> HbStatus {
    ffi_call(|| {
        let b = in_ref(bell, "bell")?;
        let out = out_ref(out, "out")?;
        let class = match class {
            HB_CLASS_FACTORIZABLE => StrategyClass::Factorizable,
            HB_CLASS_CONTEXT_UNRESTRICTED => StrategyClass::ContextUnrestricted,
            c => return Err(invalid(format!("unknown strategy class {c}"))),
        };
        let mut opts = SearchOptions::default();
        if guard != 0 {
            opts.guard = guard as u128;
        }
        let r = lhv::max_bound_with(&b.0, class, opts)?;
        *out = HbBound {
            bound: r.bound,
            witness_u: r.witness.u,
            witness_d: r.witness.d,
            strategies_evaluated: r.strategies_evaluated.min(u64::MAX as u128) as u64,
        };
        Ok(())
    })
}

unsafe fn write_buffer<T: Copy>(src: &[T], buf: *mut T, capacity: usize, out_len: *mut usize) -> Result<(), Failure> {
    *out_ref(out_len, "out_len")? = src.len();
    if capacity < src.len() {
        return Err(Failure(HbStatus::BufferTooSmall, format!("buffer holds {capacity} values, {} needed", src.len())));
    }
    if buf.is_null() {
        return Err(null("buffer"));
    }
    ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
    Ok(())
}

/// Born probabilities of the `4^n_dof` joint outcomes. Outcome index is
/// `o_u·2^n_dof + o_d`; DOF `j` reads bit `n_dof−1−j` of each local index,
/// 0 meaning +1. `out_len` always receives the required length.
///
/// # Safety
/// `u` and `d` must point to `n_dof` observables each; `probs` must hold
/// `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn hb_born_distribution(
    state: *const HbState,
    u: *const HbObservable,
    d: *const HbObservable,
    n_dof: usize,
    probs: *mut f64,
    capacity: usize,
    out_len: *mut usize,
) -> HbStatus {
    ffi_call(|| {
        let st = in_ref(state, "state")?;
        let s = setting(u, d, n_dof)?;
        let dist = simlab::born_distribution(&st.0, &s)?;
        write_buffer(&dist.probs, probs, capacity, out_len)
    })
}

/// Seeded multinomial sample of `n_events` outcomes, indexed as in
/// `hb_born_distribution`.
///
/// # Safety
/// As for `hb_born_distribution`, with `counts` holding `capacity` values.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn hb_sample(
    state: *const HbState,
    u: *const HbObservable,
    d: *const HbObservable,
    n_dof: usize,
    n_events: u64,
    seed: u64,
    counts: *mut u64,
    capacity: usize,
    out_len: *mut usize,
) -> HbStatus {
    ffi_call(|| {
        let st = in_ref(state, "state")?;
        let s = setting(u, d, n_dof)?;
        let dist = simlab::born_distribution(&st.0, &s)?;
        let c = simlab::sample(&dist, n_events, seed)?;
        write_buffer(&c.counts, counts, capacity, out_len)
    })
}

/// `(|β| − bound)/σ_β`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hb_violation_sigmas(beta: f64, std_err: f64, bound: f64, out: *mut f64) -> HbStatus {
    ffi_call(|| {
        let out = out_ref(out, "out")?;
        if !(std_err > 0.0 && std_err.is_finite()) {
            return Err(invalid("std_err must be positive and finite"));
        }
        *out = ViolationReport::from_summary(beta, std_err, bound).sigmas;
        Ok(())
    })
}
