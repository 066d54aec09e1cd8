//! C interface to `slicsim`.
//!
//! Objects are opaque heap handles created by `slicsim_*_new`-style
//! constructors and released with the matching `*_free`. Every fallible
//! call returns a [`SlicStatus`]; on failure a message is available from
//! [`slicsim_last_error`] on the same thread. Sequences built here live on
//! channel `H`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use slicsim::analysis::{self, Probe, TransferMap};
use slicsim::propagator::sequence_propagator;
use slicsim::pulse::{self, AdiabaticShape, CslicParams, Sequence};
use slicsim::{Channel, Error, OffsetSetting, SpinSystem};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlicStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Numeric = 4,
    Io = 5,
    Panic = 6,
}

pub struct SlicSystem(SpinSystem);
pub struct SlicSequence(Sequence);
pub struct SlicMap(TransferMap);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SlicStatus {
    match e {
        Error::Parse { .. } | Error::Config(_) | Error::Json(_) => SlicStatus::Parse,
        Error::Io(_) => SlicStatus::Io,
        Error::NotHermitian(_) | Error::NotUnitary(_) | Error::NonReal(_) | Error::Eigen => SlicStatus::Numeric,
        _ => SlicStatus::InvalidArgument,
    }
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SlicStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SlicStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer passed for {what}"));
            SlicStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            SlicStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn c_str<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Lib(Error::InvalidParameter(format!("{what} is not valid UTF-8"))))
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

fn proton() -> Channel {
    Channel::from("H")
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn slicsim_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Homonuclear pair with coupling `j_hz` and shift difference `delta_hz`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn slicsim_system_ab(j_hz: f64, delta_hz: f64, out: *mut *mut SlicSystem) -> SlicStatus {
    guard(|| {
        let sys = SpinSystem::ab(j_hz, delta_hz)?;
        write_out(out, boxed(SlicSystem(sys)), "out")
    })
}

/// System from TOML text (`num_spins`, `channels`, `offsets_hz`, `j_hz`).
///
/// # Safety
/// `toml` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn slicsim_system_from_toml(toml: *const c_char, out: *mut *mut SlicSystem) -> SlicStatus {
    guard(|| {
        let sys = SpinSystem::from_toml_str(c_str(toml, "toml")?)?;
        write_out(out, boxed(SlicSystem(sys)), "out")
    })
}

/// # Safety
/// `sys` must come from a `slicsim_system_*` constructor or be NULL.
#[no_mangle]
pub unsafe extern "C" fn slicsim_system_free(sys: *mut SlicSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn slicsim_sequence_slic(
    j_hz: f64,
    duration_s: f64,
    phase_rad: f64,
    out: *mut *mut SlicSequence,
) -> SlicStatus {
    guard(|| {
        let seq = pulse::build_slic(j_hz, duration_s, phase_rad, &proton())?;
        write_out(out, boxed(SlicSequence(seq)), "out")
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn slicsim_sequence_adslic(
    j_hz: f64,
    delta_max: f64,
    xi: f64,
    duration_s: f64,
    samples: usize,
    out: *mut *mut SlicSequence,
) -> SlicStatus {
    guard(|| {
        let shape = AdiabaticShape::new(delta_max, xi, duration_s, samples)?;
        let seq = pulse::build_adslic(&shape, j_hz, &proton())?;
        write_out(out, boxed(SlicSequence(seq)), "out")
    })
}

/// `n_reps` cSLIC elements; the strong amplitude follows from α.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn slicsim_sequence_cslic(
    j_hz: f64,
    alpha: f64,
    n_reps: u32,
    out: *mut *mut SlicSequence,
) -> SlicStatus {
    guard(|| {
        let seq = pulse::build_cslic(&CslicParams::new(j_hz, alpha, n_reps)?, &proton())?;
        write_out(out, boxed(SlicSequence(seq)), "out")
    })
}

/// Cycle string over `A`, `B`, `C1`–`C3`, `S1`–`S3`.
///
/// # Safety
/// `text` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn slicsim_sequence_parse(
    text: *const c_char,
    weak_nut_hz: f64,
    strong_nut_hz: f64,
    alpha: f64,
    out: *mut *mut SlicSequence,
) -> SlicStatus {
    guard(|| {
        let seq = pulse::parse_cycle(c_str(text, "text")?, weak_nut_hz, strong_nut_hz, alpha, &proton())?;
        write_out(out, boxed(SlicSequence(seq)), "out")
    })
}

/// # Safety
/// `seq` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn slicsim_sequence_duration(seq: *const SlicSequence, out: *mut f64) -> SlicStatus {
    guard(|| write_out(out, deref(seq, "seq")?.0.total_duration(), "out"))
}

/// # Safety
/// `seq` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn slicsim_sequence_len(seq: *const SlicSequence, out: *mut usize) -> SlicStatus {
    guard(|| write_out(out, deref(seq, "seq")?.0.len(), "out"))
}

/// # Safety
/// `seq` must come from a `slicsim_sequence_*` constructor or be NULL.
#[no_mangle]
pub unsafe extern "C" fn slicsim_sequence_free(seq: *mut SlicSequence) {
    if !seq.is_null() {
        drop(Box::from_raw(seq));
    }
}

fn probe_for(sys: &SpinSystem, seq: &Sequence) -> Result<Probe, Failure> {
    let channel = seq.channels().into_iter().next().unwrap_or_else(proton);
    Ok(Probe::singlet_order(sys, &channel, (1, 2))?)
}

/// Excited-magnetization to singlet-order amplitude of spins 1 and 2 at
/// resonance offset `offset_hz` and rf error `eps_rf`.
///
/// # Safety
/// `sys` and `seq` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn slicsim_transfer_amplitude(
    sys: *const SlicSystem,
    seq: *const SlicSequence,
    offset_hz: f64,
    eps_rf: f64,
    out: *mut f64,
) -> SlicStatus {
    guard(|| {
        let sys = &deref(sys, "sys")?.0;
        let seq = &deref(seq, "seq")?.0;
        let probe = probe_for(sys, seq)?;
        let off = OffsetSetting::with_resonance_offset(sys, &proton(), offset_hz)?;
        let u = sequence_propagator(seq, sys, &off, eps_rf)?;
        let v = analysis::transfer_amplitude(&u, &probe.source, &probe.target)?;
        write_out(out, v, "out")
    })
}

/// Transfer map on evenly spaced offset and ε axes.
///
/// # Safety
/// `sys` and `seq` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn slicsim_map_sweep(
    sys: *const SlicSystem,
    seq: *const SlicSequence,
    offset_start_hz: f64,
    offset_stop_hz: f64,
    offset_points: usize,
    eps_start: f64,
    eps_stop: f64,
    eps_points: usize,
    out: *mut *mut SlicMap,
) -> SlicStatus {
    guard(|| {
        let sys = &deref(sys, "sys")?.0;
        let seq = &deref(seq, "seq")?.0;
        let probe = probe_for(sys, seq)?;
        let offsets = analysis::linspace(offset_start_hz, offset_stop_hz, offset_points)?;
        let eps = analysis::linspace(eps_start, eps_stop, eps_points)?;
        let map = analysis::sweep_map(seq, sys, &offsets, &eps, &probe)?;
        write_out(out, boxed(SlicMap(map)), "out")
    })
}

/// # Safety
/// `map` must be a live handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn slicsim_map_dims(
    map: *const SlicMap,
    offset_points: *mut usize,
    eps_points: *mut usize,
) -> SlicStatus {
    guard(|| {
        let m = &deref(map, "map")?.0;
        write_out(offset_points, m.offset_axis_hz.len(), "offset_points")?;
        write_out(eps_points, m.eps_axis.len(), "eps_points")
    })
}

/// Copies the amplitudes (ε-major, offset fastest) into `buf`, which must
/// hold exactly `offset_points * eps_points` values.
///
/// # Safety
/// `map` must be a live handle; `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn slicsim_map_values(map: *const SlicMap, buf: *mut f64, len: usize) -> SlicStatus {
    guard(|| {
        let m = &deref(map, "map")?.0;
        let values = m.amplitudes();
        if len != values.len() {
            return Err(Failure::Lib(Error::Dimension { expected: values.len(), found: len }));
        }
        if buf.is_null() {
            return Err(Failure::Null("buf"));
        }
        ptr::copy_nonoverlapping(values.as_ptr(), buf, len);
        Ok(())
    })
}

/// Writes `offset_hz,eps_rf,amplitude` CSV.
///
/// # Safety
/// `map` must be a live handle; `path` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn slicsim_map_write_csv(map: *const SlicMap, path: *const c_char) -> SlicStatus {
    guard(|| {
        let m = &deref(map, "map")?.0;
        let file = std::fs::File::create(c_str(path, "path")?).map_err(Error::from)?;
        analysis::write_map_csv(m, std::io::BufWriter::new(file))?;
        Ok(())
    })
}

/// # Safety
/// `map` must come from `slicsim_map_sweep` or be NULL.
#[no_mangle]
pub unsafe extern "C" fn slicsim_map_free(map: *mut SlicMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// round(J / (√2 |Δ|)), at least 1.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn slicsim_optimal_repetitions(j_hz: f64, delta_hz: f64, out: *mut u32) -> SlicStatus {
    guard(|| write_out(out, pulse::optimal_repetitions(j_hz, delta_hz)?, "out"))
}

/// Closed-form SLIC response at the nominal duration (ω in rad/s).
#[no_mangle]
pub extern "C" fn slicsim_xi_slic_nominal(rabi_rad: f64, resonance_rad: f64, eps_rf: f64) -> f64 {
    analysis::xi_slic_nominal(rabi_rad, resonance_rad, eps_rf)
}

/// Closed-form cSLIC response at the nominal duration.
#[no_mangle]
pub extern "C" fn slicsim_xi_cslic_nominal(rabi_rad: f64, eps_rf: f64) -> f64 {
    analysis::xi_cslic_nominal(rabi_rad, eps_rf)
}
