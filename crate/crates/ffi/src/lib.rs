//! C ABI over `qcorr-core`.
//!
//! States and density operators are opaque handles owned by the caller and
//! released with the matching `*_free` function. Every fallible call returns
//! a [`QcStatus`]; on failure the message is available from
//! [`qc_last_error_message`] until the next failing call on the same thread.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;
use std::slice;

use num_complex::Complex64;
use qcorr_core::report::{self, PartitionSelection, StateSpec, Units};
use qcorr_core::{
    correlation, partitions, purification, qlinalg, qstates, ComplexMatrix, DensityOperator, Error, Partition,
    PureState, Region, StateLimits,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QcStatus {
    Ok = 0,
    NullPointer = 1,
    Argument = 2,
    Size = 3,
    Shape = 4,
    Index = 5,
    Partition = 6,
    Validation = 7,
    Precondition = 8,
    Parse = 9,
    Schema = 10,
    Io = 11,
    Panic = 12,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QcRegion {
    Classical = 0,
    Quantum = 1,
    Unattainable = 2,
}

/// Internal/external split of the total correlation, in nats.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct QcDecomposition {
    pub internal_alpha: f64,
    pub internal_beta: f64,
    pub external: f64,
    pub total: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct QcBounds {
    pub classical_upper: f64,
    pub quantum_upper: f64,
    pub gap_bound: f64,
}

/// Opaque pure state.
pub struct QcState {
    inner: PureState,
}

/// Opaque density operator.
pub struct QcDensity {
    inner: DensityOperator,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> QcStatus {
    match e.root() {
        Error::Size(_) => QcStatus::Size,
        Error::Shape(_) => QcStatus::Shape,
        Error::Index { .. } => QcStatus::Index,
        Error::Argument(_) => QcStatus::Argument,
        Error::Partition(_) => QcStatus::Partition,
        Error::Precondition(_) => QcStatus::Precondition,
        Error::Validation(_) => QcStatus::Validation,
        Error::Parse { .. } => QcStatus::Parse,
        Error::Schema(_) => QcStatus::Schema,
        Error::Io(_) => QcStatus::Io,
        Error::Context { .. } => QcStatus::Argument,
    }
}

struct Fail(QcStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(QcStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> QcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QcStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            QcStatus::Panic
        }
    }
}

unsafe fn slice_in<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn state_ref<'a>(s: *const QcState) -> Result<&'a PureState, Fail> {
    s.as_ref().map(|s| &s.inner).ok_or_else(|| null("state"))
}

unsafe fn density_ref<'a>(d: *const QcDensity) -> Result<&'a DensityOperator, Fail> {
    d.as_ref().map(|d| &d.inner).ok_or_else(|| null("density"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn str_in<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(QcStatus::Argument, format!("{what} is not valid UTF-8")))
}

fn complex_from(re: &[f64], im: &[f64]) -> Result<Vec<Complex64>, Fail> {
    if !im.is_empty() && im.len() != re.len() {
        return Err(Fail(
            QcStatus::Shape,
            "real and imaginary parts differ in length".into(),
        ));
    }
    Ok(re
        .iter()
        .enumerate()
        .map(|(i, &r)| Complex64::new(r, im.get(i).copied().unwrap_or(0.0)))
        .collect())
}

unsafe fn partition_in(d: &DensityOperator, alpha: *const usize, alpha_len: usize) -> Result<Partition, Fail> {
    let alpha = slice_in(alpha, alpha_len, "alpha")?.to_vec();
    Ok(Partition::from_alpha(d.n_qubits(), alpha)?)
}

fn boxed_state(s: PureState) -> *mut QcState {
    Box::into_raw(Box::new(QcState { inner: s }))
}

fn boxed_density(d: DensityOperator) -> *mut QcDensity {
    Box::into_raw(Box::new(QcDensity { inner: d }))
}

/// Message for the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// NUL-terminated crate version. Static; do not free.
#[no_mangle]
pub extern "C" fn qc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn qc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---- states ----

#[no_mangle]
pub unsafe extern "C" fn qc_state_ghz(n_qubits: usize, out: *mut *mut QcState) -> QcStatus {
    guard(|| write_out(out, boxed_state(qstates::ghz(n_qubits)?)))
}

/// Uniform superposition over `n_per_side` Bell pairs straddling the middle cut.
#[no_mangle]
pub unsafe extern "C" fn qc_state_uniform_entangled(n_per_side: usize, out: *mut *mut QcState) -> QcStatus {
    guard(|| write_out(out, boxed_state(qstates::uniform_entangled(n_per_side)?)))
}

#[no_mangle]
pub unsafe extern "C" fn qc_state_bell_product(pairs: usize, out: *mut *mut QcState) -> QcStatus {
    guard(|| write_out(out, boxed_state(qstates::bell_product(pairs)?)))
}

#[no_mangle]
pub unsafe extern "C" fn qc_state_ghz_block_product(n_per_block: usize, out: *mut *mut QcState) -> QcStatus {
    guard(|| write_out(out, boxed_state(qstates::ghz_block_product(n_per_block)?)))
}

/// Builds a state from `len` amplitudes. `im` may be NULL for real input.
#[no_mangle]
pub unsafe extern "C" fn qc_state_from_amplitudes(
    n_qubits: usize,
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut QcState,
) -> QcStatus {
    guard(|| {
        let re = slice_in(re, len, "re")?;
        let im = if im.is_null() {
            &[][..]
        } else {
            slice_in(im, len, "im")?
        };
        let amps = complex_from(re, im)?;
        write_out(out, boxed_state(PureState::new(n_qubits, amps)?))
    })
}

/// Builds a state from a spec string such as `ghz:4` or `file:state.json`.
#[no_mangle]
pub unsafe extern "C" fn qc_state_from_spec(spec: *const c_char, out: *mut *mut QcState) -> QcStatus {
    guard(|| {
        let spec: StateSpec = str_in(spec, "spec")?.parse()?;
        write_out(out, boxed_state(spec.build(&StateLimits::default())?))
    })
}

#[no_mangle]
pub unsafe extern "C" fn qc_state_load(path: *const c_char, out: *mut *mut QcState) -> QcStatus {
    guard(|| {
        let path = str_in(path, "path")?;
        write_out(out, boxed_state(report::load_state_file(Path::new(path))?))
    })
}

#[no_mangle]
pub unsafe extern "C" fn qc_state_save(s: *const QcState, path: *const c_char) -> QcStatus {
    guard(|| {
        let s = state_ref(s)?;
        let path = str_in(path, "path")?;
        Ok(report::dump_state_file(s, Path::new(path))?)
    })
}

/// Qubit count of `s`, or 0 for NULL.
#[no_mangle]
pub unsafe extern "C" fn qc_state_n_qubits(s: *const QcState) -> usize {
    s.as_ref().map_or(0, |s| s.inner.n_qubits())
}

/// Copies the `2^n` amplitudes into `re` and `im`, each of length `len`.
#[no_mangle]
pub unsafe extern "C" fn qc_state_amplitudes(s: *const QcState, re: *mut f64, im: *mut f64, len: usize) -> QcStatus {
    guard(|| {
        let amps = state_ref(s)?.amplitudes();
        if len != amps.len() {
            return Err(Fail(
                QcStatus::Shape,
                format!("buffer holds {len}, state has {}", amps.len()),
            ));
        }
        if re.is_null() || im.is_null() {
            return Err(null("amplitude buffer"));
        }
        let (re, im) = (slice::from_raw_parts_mut(re, len), slice::from_raw_parts_mut(im, len));
        for (k, z) in amps.iter().enumerate() {
            re[k] = z.re;
            im[k] = z.im;
        }
        Ok(())
    })
}

/// Moves qubit `i` to position `perm[i]`.
#[no_mangle]
pub unsafe extern "C" fn qc_state_permute(
    s: *const QcState,
    perm: *const usize,
    len: usize,
    out: *mut *mut QcState,
) -> QcStatus {
    guard(|| {
        let s = state_ref(s)?;
        let perm = slice_in(perm, len, "perm")?;
        write_out(out, boxed_state(qlinalg::permute_qubits(s, perm)?))
    })
}

#[no_mangle]
pub unsafe extern "C" fn qc_state_free(s: *mut QcState) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

// ---- density operators ----

#[no_mangle]
pub unsafe extern "C" fn qc_density_from_state(s: *const QcState, out: *mut *mut QcDensity) -> QcStatus {
    guard(|| write_out(out, boxed_density(qstates::to_density(state_ref(s)?))))
}

/// Validates a row-major `2^n x 2^n` matrix. `im` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn qc_density_from_matrix(
    n_qubits: usize,
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut QcDensity,
) -> QcStatus {
    guard(|| {
        let re = slice_in(re, len, "re")?;
        let im = if im.is_null() {
            &[][..]
        } else {
            slice_in(im, len, "im")?
        };
        let entries = complex_from(re, im)?;
        let dim = (len as f64).sqrt() as usize;
        let m = ComplexMatrix::new(dim, entries)?;
        write_out(out, boxed_density(qstates::validate_density(m, n_qubits)?))
    })
}

/// Reduced operator on `keep`, in ascending qubit order.
#[no_mangle]
pub unsafe extern "C" fn qc_density_reduce(
    d: *const QcDensity,
    keep: *const usize,
    len: usize,
    out: *mut *mut QcDensity,
) -> QcStatus {
    guard(|| {
        let d = density_ref(d)?;
        let keep = slice_in(keep, len, "keep")?;
        write_out(out, boxed_density(d.reduce(keep)?))
    })
}

#[no_mangle]
pub unsafe extern "C" fn qc_density_n_qubits(d: *const QcDensity) -> usize {
    d.as_ref().map_or(0, |d| d.inner.n_qubits())
}

#[no_mangle]
pub unsafe extern "C" fn qc_density_free(d: *mut QcDensity) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

// ---- functionals ----

#[no_mangle]
pub unsafe extern "C" fn qc_entropy(d: *const QcDensity, out: *mut f64) -> QcStatus {
    guard(|| write_out(out, correlation::von_neumann_entropy(density_ref(d)?)))
}

#[no_mangle]
pub unsafe extern "C" fn qc_subset_entropy(
    d: *const QcDensity,
    subset: *const usize,
    len: usize,
    out: *mut f64,
) -> QcStatus {
    guard(|| {
        let d = density_ref(d)?;
        let subset = slice_in(subset, len, "subset")?;
        write_out(out, correlation::subset_entropy(d, subset)?)
    })
}

#[no_mangle]
pub unsafe extern "C" fn qc_total_correlation(d: *const QcDensity, out: *mut f64) -> QcStatus {
    guard(|| write_out(out, correlation::total_correlation(density_ref(d)?)))
}

/// Index of correlation across the cut `alpha | rest`.
#[no_mangle]
pub unsafe extern "C" fn qc_index_of_correlation(
    d: *const QcDensity,
    alpha: *const usize,
    alpha_len: usize,
    out: *mut f64,
) -> QcStatus {
    guard(|| {
        let d = density_ref(d)?;
        let part = partition_in(d, alpha, alpha_len)?;
        write_out(out, correlation::index_of_correlation(d, &part)?)
    })
}

#[no_mangle]
pub unsafe extern "C" fn qc_decompose(
    d: *const QcDensity,
    alpha: *const usize,
    alpha_len: usize,
    out: *mut QcDecomposition,
) -> QcStatus {
    guard(|| {
        let d = density_ref(d)?;
        let part = partition_in(d, alpha, alpha_len)?;
        let r = partitions::decompose(d, &part)?;
        write_out(
            out,
            QcDecomposition {
                internal_alpha: r.internal_alpha,
                internal_beta: r.internal_beta,
                external: r.external,
                total: r.total,
            },
        )
    })
}

#[no_mangle]
pub unsafe extern "C" fn qc_is_product_across(
    d: *const QcDensity,
    alpha: *const usize,
    alpha_len: usize,
    tol: f64,
    out: *mut bool,
) -> QcStatus {
    guard(|| {
        let d = density_ref(d)?;
        let part = partition_in(d, alpha, alpha_len)?;
        write_out(out, partitions::is_product_across(d, &part, tol)?)
    })
}

#[no_mangle]
pub unsafe extern "C" fn qc_classify_region(
    value: f64,
    max_entropies: *const f64,
    len: usize,
    out: *mut QcRegion,
) -> QcStatus {
    guard(|| {
        let m = slice_in(max_entropies, len, "max_entropies")?;
        let region = match correlation::classify_region(value, m)? {
            Region::Classical => QcRegion::Classical,
            Region::Quantum => QcRegion::Quantum,
            Region::Unattainable => QcRegion::Unattainable,
        };
        write_out(out, region)
    })
}

#[no_mangle]
pub unsafe extern "C" fn qc_correlation_bounds(entropies: *const f64, len: usize, out: *mut QcBounds) -> QcStatus {
    guard(|| {
        let b = correlation::correlation_bounds(slice_in(entropies, len, "entropies")?)?;
        write_out(
            out,
            QcBounds {
                classical_upper: b.classical_upper,
                quantum_upper: b.quantum_upper,
                gap_bound: b.gap_bound,
            },
        )
    })
}

// ---- purification ----

#[no_mangle]
pub unsafe extern "C" fn qc_min_purifying_qubits(d: *const QcDensity, out: *mut usize) -> QcStatus {
    guard(|| write_out(out, purification::min_purifying_qubits(density_ref(d)?)))
}

/// Spectral purification with the ancilla register appended after the system
/// qubits. `ancilla_out` and `residual_out` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn qc_purify(
    d: *const QcDensity,
    out: *mut *mut QcState,
    ancilla_out: *mut usize,
    residual_out: *mut f64,
) -> QcStatus {
    guard(|| {
        let r = purification::purify(density_ref(d)?)?;
        if !ancilla_out.is_null() {
            ancilla_out.write(r.ancilla_qubits);
        }
        if !residual_out.is_null() {
            residual_out.write(r.residual);
        }
        write_out(out, boxed_state(r.purified))
    })
}

// ---- reports ----

/// JSON sweep over every bipartition of the state named by `spec`. Pass a
/// negative `side_size` for all cuts. Free the result with [`qc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn qc_sweep_json(spec: *const c_char, side_size: i64, out: *mut *mut c_char) -> QcStatus {
    guard(|| {
        let spec: StateSpec = str_in(spec, "spec")?.parse()?;
        let state = spec.build(&StateLimits::default())?;
        let selection = if side_size < 0 {
            PartitionSelection::All
        } else {
            PartitionSelection::SideSize(side_size as usize)
        };
        let r = report::report_for_state(&spec.to_string(), &state, &selection, Units::Nats)?;
        let json = CString::new(r.to_json()).map_err(|e| Fail(QcStatus::Argument, e.to_string()))?;
        write_out(out, json.into_raw())
    })
}
