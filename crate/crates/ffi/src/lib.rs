//! C ABI for the binrec library.
//!
//! Handles are opaque; every fallible entry point returns a status code
//! and writes its result through an out-pointer. Strings handed out this
//! way are heap-allocated, NUL-terminated UTF-8 and must be released with
//! `binrec_string_free`. On any non-zero status the out-pointer is left
//! untouched unless documented otherwise, and a message is available from
//! `binrec_last_error_message` until the next failing call on the same
//! thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fmt::Display;

use num_bigint::BigUint;

use binrec::appearance::order_of_appearance;
use binrec::arith::{factor, is_probable_prime, ArithError, EffortBudget};
use binrec::cert::{canonical, factorization_json};
use binrec::cfrac::{
    baker_davenport_reduce, reduction_instance_from_json, reduction_outcome_json, CfracError,
};
use binrec::lucas::{LucasPair, Side};

/// Status code returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum BinrecStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullArgument = 1,
    /// An argument was rejected (bad pair, bad index, unparsable input).
    InvalidArgument = 2,
    /// The factoring or precision budget ran out before an answer.
    BudgetExhausted = 3,
}

/// Which half of a sequence pair an operation addresses.
#[repr(C)]
#[derive(Clone, Copy)]
pub enum BinrecSide {
    /// The sequence starting 0, 1 (u side).
    Fundamental = 0,
    /// The companion sequence starting 2, r (v side).
    Companion = 1,
}

impl From<BinrecSide> for Side {
    fn from(side: BinrecSide) -> Side {
        match side {
            BinrecSide::Fundamental => Side::Fundamental,
            BinrecSide::Companion => Side::Companion,
        }
    }
}

/// Opaque handle to a validated sequence pair.
pub struct BinrecPair(LucasPair);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(code: BinrecStatus, message: impl Display) -> BinrecStatus {
    let text = message.to_string().replace('\0', " ");
    let c = CString::new(text).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
    code
}

fn null_argument() -> BinrecStatus {
    fail(BinrecStatus::NullArgument, "null pointer argument")
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("output never contains NUL").into_raw()
}

/// Message describing the most recent failure on this thread. The pointer
/// stays valid until the next failing call on the same thread; never free
/// it.
#[no_mangle]
pub extern "C" fn binrec_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Release a string obtained from this library.
///
/// # Safety
/// `s` must have come from a binrec function and not have been freed yet.
/// NULL is accepted and ignored.
#[no_mangle]
pub unsafe extern "C" fn binrec_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Create a pair handle for x^2 = r*x + s. Fails for degenerate input
/// (r or s zero, gcd(r, s) > 1, nonpositive discriminant, |r| or |s|
/// beyond 2^31).
///
/// # Safety
/// `out` must be a valid pointer. On success `*out` owns the handle;
/// release it with `binrec_pair_free`.
#[no_mangle]
pub unsafe extern "C" fn binrec_pair_new(
    r: i64,
    s: i64,
    out: *mut *mut BinrecPair,
) -> BinrecStatus {
    if out.is_null() {
        return null_argument();
    }
    match LucasPair::new(r, s) {
        Ok(pair) => {
            *out = Box::into_raw(Box::new(BinrecPair(pair)));
            BinrecStatus::Ok
        }
        Err(e) => fail(BinrecStatus::InvalidArgument, e),
    }
}

/// Release a pair handle. NULL is accepted and ignored.
///
/// # Safety
/// `pair` must have come from `binrec_pair_new` and not have been freed
/// yet.
#[no_mangle]
pub unsafe extern "C" fn binrec_pair_free(pair: *mut BinrecPair) {
    if !pair.is_null() {
        drop(Box::from_raw(pair));
    }
}

/// Decimal rendering of the term at index `n` on the chosen side.
/// Negative indices are accepted only when |s| = 1.
///
/// # Safety
/// `pair` must be a live handle; `out` must be a valid pointer. On
/// success `*out` holds a string to release with `binrec_string_free`.
#[no_mangle]
pub unsafe extern "C" fn binrec_term_decimal(
    pair: *const BinrecPair,
    side: BinrecSide,
    n: i64,
    out: *mut *mut c_char,
) -> BinrecStatus {
    if pair.is_null() || out.is_null() {
        return null_argument();
    }
    match binrec::lucas::term(&(*pair).0, n) {
        Ok(t) => {
            *out = into_c_string(t.side(side.into()).to_string());
            BinrecStatus::Ok
        }
        Err(e) => fail(BinrecStatus::InvalidArgument, e),
    }
}

/// Order of appearance of the prime `p` and the exponent of `p` in the
/// term it first divides.
///
/// # Safety
/// `pair` must be a live handle; `z_out` and `e_out` must be valid
/// pointers.
#[no_mangle]
pub unsafe extern "C" fn binrec_order_of_appearance(
    pair: *const BinrecPair,
    p: u64,
    z_out: *mut u64,
    e_out: *mut u32,
) -> BinrecStatus {
    if pair.is_null() || z_out.is_null() || e_out.is_null() {
        return null_argument();
    }
    match order_of_appearance(&(*pair).0, p) {
        Ok(rec) => {
            *z_out = rec.z;
            *e_out = rec.e;
            BinrecStatus::Ok
        }
        Err(e) => fail(BinrecStatus::InvalidArgument, e),
    }
}

/// Eventual period and preperiod of the residue pair sequence modulo `m`.
///
/// # Safety
/// `pair` must be a live handle; `period_out` and `preperiod_out` must be
/// valid pointers.
#[no_mangle]
pub unsafe extern "C" fn binrec_period(
    pair: *const BinrecPair,
    m: u64,
    period_out: *mut u64,
    preperiod_out: *mut u64,
) -> BinrecStatus {
    if pair.is_null() || period_out.is_null() || preperiod_out.is_null() {
        return null_argument();
    }
    match binrec::lucas::period_mod(&(*pair).0, m) {
        Ok(rec) => {
            *period_out = rec.period;
            *preperiod_out = rec.preperiod;
            BinrecStatus::Ok
        }
        Err(e) => fail(BinrecStatus::InvalidArgument, e),
    }
}

/// Whether the decimal integer in `decimal` is a (deterministically
/// checked below 2^64, otherwise strongly probable) prime. Writes 1 or 0.
///
/// # Safety
/// `decimal` must be a NUL-terminated string; `result_out` must be a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn binrec_is_probable_prime(
    decimal: *const c_char,
    result_out: *mut i32,
) -> BinrecStatus {
    if decimal.is_null() || result_out.is_null() {
        return null_argument();
    }
    let n = match parse_decimal(decimal) {
        Ok(n) => n,
        Err(status) => return status,
    };
    *result_out = i32::from(is_probable_prime(&n));
    BinrecStatus::Ok
}

/// Factor the decimal integer in `decimal` with the given Pollard rho
/// iteration budget and write the factorization as canonical JSON. When
/// the budget runs out the partial factorization is still written and the
/// status is BudgetExhausted.
///
/// # Safety
/// `decimal` must be a NUL-terminated string; `out` must be a valid
/// pointer. Any written string is released with `binrec_string_free`.
#[no_mangle]
pub unsafe extern "C" fn binrec_factor_json(
    decimal: *const c_char,
    effort: u64,
    out: *mut *mut c_char,
) -> BinrecStatus {
    if decimal.is_null() || out.is_null() {
        return null_argument();
    }
    let n = match parse_decimal(decimal) {
        Ok(n) => n,
        Err(status) => return status,
    };
    match factor(&n, &EffortBudget::new(effort)) {
        Ok(f) => {
            *out = into_c_string(canonical(&factorization_json(&f)));
            BinrecStatus::Ok
        }
        Err(ArithError::EffortExceeded(partial)) => {
            *out = into_c_string(canonical(&factorization_json(&partial)));
            fail(
                BinrecStatus::BudgetExhausted,
                "factoring budget exhausted; partial factorization written",
            )
        }
        Err(e) => fail(BinrecStatus::InvalidArgument, e),
    }
}

/// Run the continued-fraction reduction on a JSON instance (string fields
/// gamma, mu, a, b in expression syntax, m a decimal integer) and write
/// the outcome as canonical JSON.
///
/// # Safety
/// `instance_json` must be a NUL-terminated string; `out` must be a valid
/// pointer. The written string is released with `binrec_string_free`.
#[no_mangle]
pub unsafe extern "C" fn binrec_reduce_json(
    instance_json: *const c_char,
    out: *mut *mut c_char,
) -> BinrecStatus {
    if instance_json.is_null() || out.is_null() {
        return null_argument();
    }
    let text = match CStr::from_ptr(instance_json).to_str() {
        Ok(t) => t,
        Err(_) => return fail(BinrecStatus::InvalidArgument, "input is not UTF-8"),
    };
    let inst = match reduction_instance_from_json(text) {
        Ok(inst) => inst,
        Err(e) => return fail(BinrecStatus::InvalidArgument, e),
    };
    match baker_davenport_reduce(&inst) {
        Ok(outcome) => {
            *out = into_c_string(canonical(&reduction_outcome_json(&outcome)));
            BinrecStatus::Ok
        }
        Err(e @ CfracError::PrecisionExhausted(_)) => fail(BinrecStatus::BudgetExhausted, e),
        Err(e) => fail(BinrecStatus::InvalidArgument, e),
    }
}

unsafe fn parse_decimal(decimal: *const c_char) -> Result<BigUint, BinrecStatus> {
    let text = match CStr::from_ptr(decimal).to_str() {
        Ok(t) => t,
        Err(_) => return Err(fail(BinrecStatus::InvalidArgument, "input is not UTF-8")),
    };
    text.trim().parse().map_err(|_| {
        fail(
            BinrecStatus::InvalidArgument,
            format!("not an unsigned decimal integer: {text:?}"),
        )
    })
}
