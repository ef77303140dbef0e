//! C ABI for `polygas`.
//!
//! Graphs live behind an opaque `PgGraph` handle. Every fallible call
//! returns a `PgStatus`; on failure the message is kept per thread and can
//! be read with `pg_last_error_message`. Output parameters are written only
//! on success.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use polygas::criteria::{Criterion, CriterionKind, FixedPointConfig};
use polygas::models::ModelDescriptor;
use polygas::{Error, InteractionGraph};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    IndexOutOfRange = 3,
    CapExceeded = 4,
    OutsideRegion = 5,
    ParseError = 6,
    ConditionFails = 7,
    Disconnected = 8,
    Truncated = 9,
    Panic = 99,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PgCriterion {
    KoteckyPreiss = 0,
    Dobrushin = 1,
    ImprovedDobrushin = 2,
    FernandezProcacci = 3,
}

impl From<PgCriterion> for CriterionKind {
    fn from(k: PgCriterion) -> Self {
        match k {
            PgCriterion::KoteckyPreiss => CriterionKind::KoteckyPreiss,
            PgCriterion::Dobrushin => CriterionKind::Dobrushin,
            PgCriterion::ImprovedDobrushin => CriterionKind::ImprovedDobrushin,
            PgCriterion::FernandezProcacci => CriterionKind::FernandezProcacci,
        }
    }
}

/// Opaque interaction graph.
pub struct PgGraph {
    inner: InteractionGraph,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PgFixedPointInfo {
    pub iterations: usize,
    pub converged: bool,
    pub diverged: bool,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PgRadius {
    pub radius: f64,
    pub attained: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> PgStatus {
    match e {
        Error::IndexOutOfRange { .. } | Error::NotInVolume(_) => PgStatus::IndexOutOfRange,
        Error::CapExceeded { .. } => PgStatus::CapExceeded,
        Error::OutsideRegion { .. } => PgStatus::OutsideRegion,
        Error::Parse { .. } | Error::Json(_) => PgStatus::ParseError,
        Error::ConditionFails => PgStatus::ConditionFails,
        Error::Disconnected => PgStatus::Disconnected,
        Error::Truncated { .. } => PgStatus::Truncated,
        _ => PgStatus::InvalidArgument,
    }
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), PgStatus>) -> PgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            PgStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic".into());
            PgStatus::Panic
        }
    }
}

fn lift<T>(r: polygas::Result<T>) -> Result<T, PgStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

fn null_error(what: &str) -> PgStatus {
    set_error(format!("{what} is null"));
    PgStatus::NullPointer
}

/// # Safety
/// `p` must be null or point to `len` readable elements.
unsafe fn input<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], PgStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null_error(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

/// # Safety
/// `g` must be null or a live handle from this library.
unsafe fn graph<'a>(g: *const PgGraph) -> Result<&'a InteractionGraph, PgStatus> {
    g.as_ref()
        .map(|h| &h.inner)
        .ok_or_else(|| null_error("graph"))
}

fn check_out<T>(p: *mut T, what: &str) -> Result<(), PgStatus> {
    if p.is_null() {
        Err(null_error(what))
    } else {
        Ok(())
    }
}

/// Builds a graph on `n_polymers` polymers from `n_edges` incompatible
/// pairs stored flat in `edges` (`2 * n_edges` entries).
///
/// # Safety
/// `edges` must hold `2 * n_edges` entries; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pg_graph_new(
    n_polymers: usize,
    edges: *const usize,
    n_edges: usize,
    out: *mut *mut PgGraph,
) -> PgStatus {
    guard(|| {
        check_out(out, "out")?;
        let flat = input(edges, 2 * n_edges, "edges")?;
        let pairs: Vec<(usize, usize)> = flat.chunks_exact(2).map(|p| (p[0], p[1])).collect();
        let inner = lift(InteractionGraph::new(n_polymers, &pairs))?;
        *out = Box::into_raw(Box::new(PgGraph { inner }));
        Ok(())
    })
}

/// Parses a graph in the text (`n N` then `u v` lines) or JSON format.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pg_graph_parse(text: *const c_char, out: *mut *mut PgGraph) -> PgStatus {
    guard(|| {
        check_out(out, "out")?;
        if text.is_null() {
            return Err(null_error("text"));
        }
        let s = CStr::from_ptr(text).to_str().map_err(|e| {
            set_error(format!("text is not UTF-8: {e}"));
            PgStatus::ParseError
        })?;
        let inner = lift(InteractionGraph::parse(s))?;
        *out = Box::into_raw(Box::new(PgGraph { inner }));
        Ok(())
    })
}

/// Builds the graph of a builtin model such as `domino:5x5`.
///
/// # Safety
/// `descriptor` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pg_graph_from_model(
    descriptor: *const c_char,
    out: *mut *mut PgGraph,
) -> PgStatus {
    guard(|| {
        check_out(out, "out")?;
        let model = parse_model(descriptor)?;
        let inst = lift(model.instance())?.ok_or_else(|| {
            set_error(format!("{model} has no concrete graph"));
            PgStatus::InvalidArgument
        })?;
        *out = Box::into_raw(Box::new(PgGraph { inner: inst.graph }));
        Ok(())
    })
}

/// # Safety
/// `g` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pg_graph_free(g: *mut PgGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of polymers, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pg_graph_n_polymers(g: *const PgGraph) -> usize {
    g.as_ref().map_or(0, |h| h.inner.n_polymers())
}

/// `Ξ_Λ(z)` for the volume `lambda`. `z` has one entry per polymer.
///
/// # Safety
/// Arrays must hold the stated number of entries; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pg_partition_function(
    g: *const PgGraph,
    lambda: *const usize,
    lambda_len: usize,
    z: *const f64,
    z_len: usize,
    out: *mut f64,
) -> PgStatus {
    guard(|| {
        check_out(out, "out")?;
        let g = graph(g)?;
        let lambda = input(lambda, lambda_len, "lambda")?;
        let z = input(z, z_len, "z")?;
        *out = lift(polygas::gas::partition_function(g, lambda, z))?;
        Ok(())
    })
}

/// `φ^T(γ1..γn)`.
///
/// # Safety
/// `seq` must hold `len` entries; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pg_ursell_coefficient(
    g: *const PgGraph,
    seq: *const usize,
    len: usize,
    out: *mut i64,
) -> PgStatus {
    guard(|| {
        check_out(out, "out")?;
        let g = graph(g)?;
        let seq = input(seq, len, "seq")?;
        *out = lift(polygas::ursell::ursell_coefficient(g, seq))?.0;
        Ok(())
    })
}

/// Whether `ρ φ(μ) ≤ μ` holds componentwise.
///
/// # Safety
/// `rho` and `mu` must hold `len` entries; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pg_condition_holds(
    g: *const PgGraph,
    kind: PgCriterion,
    rho: *const f64,
    mu: *const f64,
    len: usize,
    out: *mut bool,
) -> PgStatus {
    guard(|| {
        check_out(out, "out")?;
        let g = graph(g)?;
        let rho = input(rho, len, "rho")?;
        let mu = input(mu, len, "mu")?;
        let c = lift(Criterion::new(kind.into(), g))?;
        *out = lift(c.condition_holds(rho, mu))?;
        Ok(())
    })
}

/// Iterates `T_ρ` from `ρ`. On return `rho_star` holds the last iterate
/// and `info` the outcome; divergence is reported through `info`, not the
/// status.
///
/// # Safety
/// `rho` and `rho_star` must hold `len` entries; `info` must be writable.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn pg_fixed_point(
    g: *const PgGraph,
    kind: PgCriterion,
    rho: *const f64,
    len: usize,
    tol: f64,
    max_iter: usize,
    cap: f64,
    rho_star: *mut f64,
    info: *mut PgFixedPointInfo,
) -> PgStatus {
    guard(|| {
        check_out(info, "info")?;
        if len > 0 {
            check_out(rho_star, "rho_star")?;
        }
        let g = graph(g)?;
        let rho = input(rho, len, "rho")?;
        if !(tol > 0.0 && cap > 0.0 && max_iter > 0) {
            set_error("tol, cap and max_iter must be positive".into());
            return Err(PgStatus::InvalidArgument);
        }
        let config = FixedPointConfig {
            tol,
            max_iter,
            cap,
            record_chain: false,
        };
        let c = lift(Criterion::new(kind.into(), g))?;
        let r = lift(c.fixed_point(rho, &config))?;
        if len > 0 {
            ptr::copy_nonoverlapping(r.rho_star.as_ptr(), rho_star, len);
        }
        *info = PgFixedPointInfo {
            iterations: r.iterations,
            converged: r.converged,
            diverged: r.diverged,
        };
        Ok(())
    })
}

unsafe fn parse_model(descriptor: *const c_char) -> Result<ModelDescriptor, PgStatus> {
    if descriptor.is_null() {
        return Err(null_error("descriptor"));
    }
    let s = CStr::from_ptr(descriptor).to_str().map_err(|e| {
        set_error(format!("descriptor is not UTF-8: {e}"));
        PgStatus::ParseError
    })?;
    lift(s.parse())
}

/// Homogeneous radius of a builtin model such as `degree:6`.
///
/// # Safety
/// `descriptor` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pg_radius(
    descriptor: *const c_char,
    kind: PgCriterion,
    out: *mut PgRadius,
) -> PgStatus {
    guard(|| {
        check_out(out, "out")?;
        let model = parse_model(descriptor)?;
        let r = lift(model.radius(kind.into()))?;
        *out = PgRadius {
            radius: r.radius,
            attained: r.attained,
        };
        Ok(())
    })
}

/// Length in bytes of the last error message on this thread, without the
/// terminating NUL.
#[no_mangle]
pub extern "C" fn pg_last_error_length() -> usize {
    LAST_ERROR.with(|e| e.borrow().len())
}

/// Copies the last error message, NUL-terminated and truncated to fit, into
/// `buf`. Returns the number of bytes written excluding the NUL.
///
/// # Safety
/// `buf` must be null or hold `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn pg_last_error_message(buf: *mut c_char, cap: usize) -> usize {
    if buf.is_null() || cap == 0 {
        return 0;
    }
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let n = msg.len().min(cap - 1);
        ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
        *buf.add(n) = 0;
        n
    })
}
