//! C ABI over `poset_secretary`.
//!
//! Posets cross the boundary as opaque `PsPoset` handles created by one of
//! the `ps_poset_*` constructors and released with `ps_poset_free`. Every
//! fallible call returns a `PsStatus`; on failure a message is kept per
//! thread and can be copied out with `ps_last_error_message`. Panics are
//! caught at the boundary and reported as `PS_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use poset_secretary::bounds::{chain_lower_bound, known_max_lower_bound, p_star};
use poset_secretary::exact::{exact_success_rule, exact_success_tau, optimal_value};
use poset_secretary::montecarlo::{estimate_success_labeled, PosetInfo};
use poset_secretary::poset::{parse_poset, width_and_chain_cover};
use poset_secretary::strategy::{make_classical_threshold, make_tau_k};
use poset_secretary::{make_family, Error, FamilySpec, Poset};

/// Result code of every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Cycle = 3,
    OutOfRange = 4,
    TooLarge = 5,
    Parse = 6,
    Panic = 7,
}

/// Opaque poset handle.
pub struct PsPoset {
    inner: Poset,
}

/// Monte Carlo estimate with its 95% Wilson interval.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PsReport {
    pub n: usize,
    pub k_max: usize,
    pub width: usize,
    pub trials: u64,
    pub successes: u64,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub std_error: f64,
    pub seed: u64,
}

/// Components of the lower bound for posets with a known maximal count.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PsKnownMaxBound {
    pub bound: f64,
    pub conditional: f64,
    pub rejection_factor: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn status_of(err: &Error) -> PsStatus {
    match err {
        Error::Cycle(_) => PsStatus::Cycle,
        Error::ElementOutOfRange { .. } => PsStatus::OutOfRange,
        Error::Size { .. } => PsStatus::TooLarge,
        Error::Parse { .. } => PsStatus::Parse,
        Error::Param(_) | Error::Spec(_) | Error::RandomRule(_) | Error::EmptyGrid(_) => {
            PsStatus::InvalidArgument
        }
    }
}

/// Runs `f`, translating errors and panics into a status code.
fn guard<F>(f: F) -> PsStatus
where
    F: FnOnce() -> Result<(), (PsStatus, String)>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            PsStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(format!("panic: {msg}"));
            PsStatus::Panic
        }
    }
}

fn lift(err: Error) -> (PsStatus, String) {
    (status_of(&err), err.to_string())
}

fn null(what: &str) -> (PsStatus, String) {
    (PsStatus::NullPointer, format!("{what} is null"))
}

unsafe fn poset_ref<'a>(handle: *const PsPoset) -> Result<&'a Poset, (PsStatus, String)> {
    handle.as_ref().map(|h| &h.inner).ok_or_else(|| null("poset handle"))
}

unsafe fn c_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (PsStatus, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (PsStatus::InvalidArgument, format!("{what} is not valid UTF-8")))
}

unsafe fn store_poset(out: *mut *mut PsPoset, poset: Poset) {
    *out = Box::into_raw(Box::new(PsPoset { inner: poset }));
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ps_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf` (truncated and
/// NUL-terminated when `len > 0`). Returns the full message length without
/// the terminator, so a caller can size a buffer with a first call using
/// `len == 0`.
///
/// # Safety
/// `buf` must be valid for `len` bytes or null when `len == 0`.
#[no_mangle]
pub unsafe extern "C" fn ps_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Builds a poset on `n` elements from `count` pairs `(u, v)` meaning
/// `u < v`, stored flat in `pairs` (length `2 * count`). The transitive
/// closure is taken.
///
/// # Safety
/// `pairs` must point to `2 * count` values (may be null when `count == 0`);
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ps_poset_from_relations(
    n: usize,
    pairs: *const usize,
    count: usize,
    out: *mut *mut PsPoset,
) -> PsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if pairs.is_null() && count > 0 {
            return Err(null("pairs"));
        }
        let flat: &[usize] = if count == 0 {
            &[]
        } else {
            std::slice::from_raw_parts(pairs, 2 * count)
        };
        let relations: Vec<(usize, usize)> = flat.chunks_exact(2).map(|c| (c[0], c[1])).collect();
        let poset = Poset::from_relations(n, &relations).map_err(lift)?;
        store_poset(out, poset);
        Ok(())
    })
}

/// Parses the text format (`poset <n>` header followed by `u < v` lines).
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ps_poset_parse(text: *const c_char, out: *mut *mut PsPoset) -> PsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let poset = parse_poset(c_str(text, "text")?).map_err(lift)?;
        store_poset(out, poset);
        Ok(())
    })
}

/// Builds a family member from a descriptor such as
/// `disjoint_chains(k=2,x=3)`, `binary_tree(depth=3)` or
/// `random(n=6,density=0.3,seed=1)`.
///
/// # Safety
/// `descriptor` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ps_poset_family(
    descriptor: *const c_char,
    out: *mut *mut PsPoset,
) -> PsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let spec: FamilySpec = c_str(descriptor, "descriptor")?.parse().map_err(lift)?;
        let poset = make_family(&spec).map_err(lift)?;
        store_poset(out, poset);
        Ok(())
    })
}

/// Releases a handle. Null is accepted.
///
/// # Safety
/// `poset` must come from a `ps_poset_*` constructor and not be used again.
#[no_mangle]
pub unsafe extern "C" fn ps_poset_free(poset: *mut PsPoset) {
    if !poset.is_null() {
        drop(Box::from_raw(poset));
    }
}

/// Number of elements (0 for a null handle).
///
/// # Safety
/// `poset` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn ps_poset_len(poset: *const PsPoset) -> usize {
    poset.as_ref().map_or(0, |p| p.inner.len())
}

/// Number of maximal elements (0 for a null handle).
///
/// # Safety
/// `poset` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn ps_poset_maximal_count(poset: *const PsPoset) -> usize {
    poset.as_ref().map_or(0, |p| p.inner.maximal_elements().len())
}

/// Width, the size of a largest antichain (0 for a null handle).
///
/// # Safety
/// `poset` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn ps_poset_width(poset: *const PsPoset) -> usize {
    poset.as_ref().map_or(0, |p| width_and_chain_cover(&p.inner).0)
}

/// Whether `u < v` in the poset. Out-of-range ids and null give false.
///
/// # Safety
/// `poset` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn ps_poset_less(poset: *const PsPoset, u: usize, v: usize) -> bool {
    match poset.as_ref() {
        Some(p) if u < p.inner.len() && v < p.inner.len() => p.inner.less(u, v),
        _ => false,
    }
}

/// Exact success probability of the randomized rule τ_k(p).
///
/// # Safety
/// `poset` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ps_exact_tau(
    poset: *const PsPoset,
    k: usize,
    p: f64,
    out: *mut f64,
) -> PsStatus {
    guard(|| {
        let poset = poset_ref(poset)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        make_tau_k(poset.len(), k, p).map_err(lift)?;
        *out = exact_success_tau(poset, k, p).map_err(lift)?.value;
        Ok(())
    })
}

/// Exact success probability of the classical rule that skips the first
/// `r - 1` arrivals.
///
/// # Safety
/// `poset` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ps_exact_threshold(
    poset: *const PsPoset,
    r: usize,
    out: *mut f64,
) -> PsStatus {
    guard(|| {
        let poset = poset_ref(poset)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let rule = make_classical_threshold(poset.len(), r).map_err(lift)?;
        *out = exact_success_rule(poset, &rule).map_err(lift)?.value;
        Ok(())
    })
}

/// Optimal success probability over all stopping rules.
///
/// # Safety
/// `poset` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ps_optimal_value(poset: *const PsPoset, out: *mut f64) -> PsStatus {
    guard(|| {
        let poset = poset_ref(poset)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = optimal_value(poset).map_err(lift)?.result.value;
        Ok(())
    })
}

/// Monte Carlo estimate for τ_k(p). `threads == 0` uses every core; the
/// result does not depend on the thread count.
///
/// # Safety
/// `poset` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ps_estimate_tau(
    poset: *const PsPoset,
    k: usize,
    p: f64,
    trials: u64,
    seed: u64,
    threads: usize,
    out: *mut PsReport,
) -> PsStatus {
    guard(|| {
        let poset = poset_ref(poset)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let rule = make_tau_k(poset.len(), k, p).map_err(lift)?;
        let info = PosetInfo::new(poset.describe(), poset);
        let threads = (threads > 0).then_some(threads);
        let r = estimate_success_labeled(poset, &info, &rule, trials, seed, threads)
            .map_err(lift)?;
        *out = PsReport {
            n: r.n,
            k_max: r.k_max,
            width: r.width,
            trials: r.trials,
            successes: r.successes,
            estimate: r.estimate,
            ci_low: r.ci_low,
            ci_high: r.ci_high,
            std_error: r.std_error(),
            seed: r.seed,
        };
        Ok(())
    })
}

/// Recommended warm-up probability for τ_k; NaN when `k == 0`.
#[no_mangle]
pub extern "C" fn ps_p_star(k: usize) -> f64 {
    if k == 0 {
        f64::NAN
    } else {
        p_star(k)
    }
}

/// Lower bound on τ_k(p) for posets of width at most k.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ps_chain_lower_bound(k: usize, p: f64, out: *mut f64) -> PsStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = chain_lower_bound(k, p).map_err(lift)?;
        Ok(())
    })
}

/// Lower bound on τ_k(p) for posets with exactly k maximal elements.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ps_known_max_lower_bound(
    k: usize,
    p: f64,
    out: *mut PsKnownMaxBound,
) -> PsStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let b = known_max_lower_bound(k, p).map_err(lift)?;
        *out = PsKnownMaxBound {
            bound: b.bound,
            conditional: b.conditional,
            rejection_factor: b.rejection_factor,
        };
        Ok(())
    })
}
