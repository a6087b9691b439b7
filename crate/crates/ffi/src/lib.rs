//! C ABI for `satqaoa`.
//!
//! Every fallible function returns a [`SatqaoaStatus`]; on failure a message
//! is available from [`satqaoa_last_error_message`] on the same thread.
//! Objects are opaque handles released with their `_free` function, and
//! strings returned through out-pointers are released with
//! [`satqaoa_string_free`].

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use libc::{c_char, c_double, size_t};
use satqaoa::experiment::{run_instance, RunConfig};
use satqaoa::optimizer::{Method, OptimizerConfig};
use satqaoa::resources::ResourceReport;
use satqaoa::{oracle, Ansatz, Error, Formula, ParamVector, VariantKind, VariantSpec};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SatqaoaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ResourceLimit = 3,
    ParseError = 4,
    BufferTooSmall = 5,
    RunFailed = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SatqaoaVariant {
    Baseline = 0,
    V1 = 1,
    V2 = 2,
    V3 = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SatqaoaOptimizer {
    Simplex = 0,
    QuasiNewton = 1,
    Spsa = 2,
}

/// Options for [`satqaoa_run_instance`]. Start from
/// [`satqaoa_run_options_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SatqaoaRunOptions {
    pub optimizer: SatqaoaOptimizer,
    /// Objective evaluations per restart.
    pub max_evaluations: size_t,
    pub restarts: size_t,
    pub shots: u64,
    /// Satisfying-fraction threshold in (0, 1]; 0 means any satisfying shot.
    pub threshold: c_double,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SatqaoaRunResult {
    pub decided_satisfiable: bool,
    pub ground_truth_satisfiable: bool,
    pub success: bool,
    /// Fraction of shots that satisfy the formula.
    pub sat_proportion: c_double,
    /// Exact expected binary cost at the optimized parameters.
    pub expectation: c_double,
    /// Best value of the optimized cost.
    pub objective: c_double,
}

/// Opaque 3SAT formula.
pub struct SatqaoaFormula(Formula);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: SatqaoaStatus, msg: impl Into<String>) -> SatqaoaStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> SatqaoaStatus {
    let status = match &e {
        Error::ResourceLimit(_) => SatqaoaStatus::ResourceLimit,
        Error::Parse { .. } | Error::Format { .. } => SatqaoaStatus::ParseError,
        _ => SatqaoaStatus::InvalidArgument,
    };
    fail(status, e.to_string())
}

/// Run `body`, turning errors and panics into status codes.
fn guard<F>(body: F) -> SatqaoaStatus
where
    F: FnOnce() -> Result<(), SatqaoaStatus>,
{
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => SatqaoaStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(SatqaoaStatus::Panic, "internal panic"),
    }
}

fn lift<T>(r: satqaoa::Result<T>) -> Result<T, SatqaoaStatus> {
    r.map_err(from_error)
}

unsafe fn formula_ref<'a>(f: *const SatqaoaFormula) -> Result<&'a Formula, SatqaoaStatus> {
    f.as_ref()
        .map(|f| &f.0)
        .ok_or_else(|| fail(SatqaoaStatus::NullPointer, "formula handle is null"))
}

fn check_out<T>(out: *mut T) -> Result<(), SatqaoaStatus> {
    if out.is_null() {
        Err(fail(SatqaoaStatus::NullPointer, "output pointer is null"))
    } else {
        Ok(())
    }
}

unsafe fn params<'a>(ptr: *const c_double, len: size_t) -> Result<&'a [f64], SatqaoaStatus> {
    if len == 0 {
        Ok(&[])
    } else if ptr.is_null() {
        Err(fail(SatqaoaStatus::NullPointer, "parameter pointer is null"))
    } else {
        Ok(std::slice::from_raw_parts(ptr, len))
    }
}

fn spec(variant: SatqaoaVariant, p: size_t) -> Result<VariantSpec, SatqaoaStatus> {
    let kind = match variant {
        SatqaoaVariant::Baseline => VariantKind::Baseline,
        SatqaoaVariant::V1 => VariantKind::V1,
        SatqaoaVariant::V2 => VariantKind::V2,
        SatqaoaVariant::V3 => VariantKind::V3,
    };
    lift(VariantSpec::new(kind, p))
}

fn into_c_string(s: String, out: *mut *mut c_char) -> Result<(), SatqaoaStatus> {
    let c = CString::new(s).map_err(|_| fail(SatqaoaStatus::InvalidArgument, "string contains nul"))?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn satqaoa_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Release a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn satqaoa_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Random formula with `m` clauses over `n` variables.
///
/// # Safety
/// `out` must be a valid pointer to write a handle to.
#[no_mangle]
pub unsafe extern "C" fn satqaoa_formula_generate(
    n: size_t,
    m: size_t,
    seed: u64,
    out: *mut *mut SatqaoaFormula,
) -> SatqaoaStatus {
    guard(|| {
        check_out(out)?;
        let f = lift(Formula::generate_random(n, m, seed))?;
        *out = Box::into_raw(Box::new(SatqaoaFormula(f)));
        Ok(())
    })
}

/// Parse DIMACS CNF text.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn satqaoa_formula_from_dimacs(
    text: *const c_char,
    out: *mut *mut SatqaoaFormula,
) -> SatqaoaStatus {
    guard(|| {
        check_out(out)?;
        if text.is_null() {
            return Err(fail(SatqaoaStatus::NullPointer, "text is null"));
        }
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| fail(SatqaoaStatus::ParseError, "text is not UTF-8"))?;
        let f = lift(Formula::from_dimacs(text))?;
        *out = Box::into_raw(Box::new(SatqaoaFormula(f)));
        Ok(())
    })
}

/// Serialize to DIMACS CNF. Free the result with [`satqaoa_string_free`].
///
/// # Safety
/// `f` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn satqaoa_formula_to_dimacs(f: *const SatqaoaFormula, out: *mut *mut c_char) -> SatqaoaStatus {
    guard(|| {
        check_out(out)?;
        into_c_string(formula_ref(f)?.to_dimacs(), out)
    })
}

/// Release a formula. NULL is ignored.
///
/// # Safety
/// `f` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn satqaoa_formula_free(f: *mut SatqaoaFormula) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Variable count, or 0 for NULL.
///
/// # Safety
/// `f` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn satqaoa_formula_num_vars(f: *const SatqaoaFormula) -> size_t {
    f.as_ref().map_or(0, |f| f.0.num_vars())
}

/// Clause count, or 0 for NULL.
///
/// # Safety
/// `f` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn satqaoa_formula_num_clauses(f: *const SatqaoaFormula) -> size_t {
    f.as_ref().map_or(0, |f| f.0.num_clauses())
}

/// Classical satisfiability check.
///
/// # Safety
/// `f` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn satqaoa_formula_is_satisfiable(f: *const SatqaoaFormula, out: *mut bool) -> SatqaoaStatus {
    guard(|| {
        check_out(out)?;
        *out = oracle::is_satisfiable(formula_ref(f)?).0;
        Ok(())
    })
}

/// Exact expected binary cost of the ansatz state. `params` holds the free
/// parameters: `p` gammas then `p` betas for Baseline and V1, `p` betas for
/// V2 and V3.
///
/// # Safety
/// `f` must be a live handle, `params` must point to `len` doubles, `out`
/// must be valid.
#[no_mangle]
pub unsafe extern "C" fn satqaoa_expected_cost(
    f: *const SatqaoaFormula,
    variant: SatqaoaVariant,
    p: size_t,
    params: *const c_double,
    len: size_t,
    out: *mut c_double,
) -> SatqaoaStatus {
    guard(|| {
        check_out(out)?;
        let v = spec(variant, p)?;
        let theta = lift(ParamVector::from_free(&v, self::params(params, len)?))?;
        let ansatz = lift(Ansatz::new(formula_ref(f)?, v))?;
        *out = lift(ansatz.expected_cost(&theta))?;
        Ok(())
    })
}

/// Basis-state probabilities of the ansatz state, written to `buf`, which
/// must hold `2^n` doubles. `params` is laid out as in
/// [`satqaoa_expected_cost`].
///
/// # Safety
/// `f` must be a live handle, `params` must point to `len` doubles, `buf`
/// to `buf_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn satqaoa_probabilities(
    f: *const SatqaoaFormula,
    variant: SatqaoaVariant,
    p: size_t,
    params: *const c_double,
    len: size_t,
    buf: *mut c_double,
    buf_len: size_t,
) -> SatqaoaStatus {
    guard(|| {
        check_out(buf)?;
        let f = formula_ref(f)?;
        let dim = 1usize.checked_shl(f.num_vars() as u32).unwrap_or(usize::MAX);
        if buf_len < dim {
            return Err(fail(
                SatqaoaStatus::BufferTooSmall,
                format!("buffer holds {buf_len} values, need {dim}"),
            ));
        }
        let v = spec(variant, p)?;
        let theta = lift(ParamVector::from_free(&v, self::params(params, len)?))?;
        let state = lift(Ansatz::new(f, v).and_then(|a| a.prepare_state(&theta)))?;
        std::slice::from_raw_parts_mut(buf, dim).copy_from_slice(&state.probabilities());
        Ok(())
    })
}

#[no_mangle]
pub extern "C" fn satqaoa_run_options_default() -> SatqaoaRunOptions {
    let cfg = RunConfig::default();
    SatqaoaRunOptions {
        optimizer: SatqaoaOptimizer::Simplex,
        max_evaluations: cfg.optimizer.max_evaluations,
        restarts: cfg.restarts,
        shots: cfg.shots,
        threshold: 0.0,
    }
}

/// Optimize, sample and decide, scoring against classical ground truth.
///
/// # Safety
/// `f` must be a live handle; `options` NULL or valid; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn satqaoa_run_instance(
    f: *const SatqaoaFormula,
    variant: SatqaoaVariant,
    p: size_t,
    options: *const SatqaoaRunOptions,
    seed: u64,
    out: *mut SatqaoaRunResult,
) -> SatqaoaStatus {
    guard(|| {
        check_out(out)?;
        let f = formula_ref(f)?;
        let v = spec(variant, p)?;
        let o = options
            .as_ref()
            .copied()
            .unwrap_or_else(|| satqaoa_run_options_default());
        let method = match o.optimizer {
            SatqaoaOptimizer::Simplex => Method::Simplex,
            SatqaoaOptimizer::QuasiNewton => Method::QuasiNewton,
            SatqaoaOptimizer::Spsa => Method::Spsa,
        };
        let cfg = RunConfig {
            optimizer: OptimizerConfig::new(method).with_budget(o.max_evaluations),
            restarts: o.restarts,
            shots: o.shots,
            threshold: (o.threshold != 0.0).then_some(o.threshold),
            ..Default::default()
        };
        lift(cfg.validate())?;
        let rec = run_instance(f, 0, v, &cfg, seed);
        if let Some(e) = rec.error {
            return Err(fail(SatqaoaStatus::RunFailed, e));
        }
        *out = SatqaoaRunResult {
            decided_satisfiable: rec.decision.is_some_and(|d| d.is_sat()),
            ground_truth_satisfiable: rec.ground_truth,
            success: rec.success,
            sat_proportion: rec.sat_proportion,
            expectation: rec.expectation,
            objective: rec.objective.unwrap_or(f64::NAN),
        };
        Ok(())
    })
}

/// Gate-count report as JSON. Free the result with
/// [`satqaoa_string_free`].
///
/// # Safety
/// `f` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn satqaoa_resources_json(
    f: *const SatqaoaFormula,
    variant: SatqaoaVariant,
    p: size_t,
    out: *mut *mut c_char,
) -> SatqaoaStatus {
    guard(|| {
        check_out(out)?;
        let report = ResourceReport::new(formula_ref(f)?, &spec(variant, p)?);
        let json = serde_json::to_string(&report).map_err(|e| fail(SatqaoaStatus::InvalidArgument, e.to_string()))?;
        into_c_string(json, out)
    })
}
