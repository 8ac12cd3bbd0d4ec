//! C ABI over the curvature-measure algebra.
//!
//! The surface is handle-based: `cv_algebra_new` builds an immutable context
//! for one `n` behind an opaque pointer, every query returns a status code
//! and writes a heap-allocated NUL-terminated string (JSON unless a format
//! argument says otherwise) through an out-parameter. Strings are freed with
//! `cv_string_free`, handles with `cv_algebra_free`. On any failure the
//! status identifies the class of error and `cv_last_error_message` returns
//! the diagnostic for the calling thread.

// Pointer validity is the C caller's side of the contract; the entry points
// themselves stay non-unsafe so bindings stay uniform.
#![allow(clippy::not_unsafe_ptr_arg_deref)]

use std::cell::RefCell;
use std::ffi::{CStr, CString, c_char};
use std::panic::{AssertUnwindSafe, catch_unwind};

use curvalg::Error;
use curvalg::angular::is_angular_valuation;
use curvalg::dual::{global_kinematic, local_kinematic};
use curvalg::ring::Algebra;
use curvalg::serialize::{
    ImageJson, angular_to_json, curv_from_json, curv_to_json, dims_json, dual_to_json,
    global_to_csv, global_to_json, global_to_latex, local_to_csv, local_to_json, local_to_latex,
};
use curvalg::spaceform::LambdaContext;
use curvalg::text::{parse_poly, parse_rational, poly_to_text};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CvStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    DomainError = 4,
    InternalError = 5,
}

/// Opaque algebra context for one fixed `n`.
pub struct CvAlgebra {
    inner: Algebra,
}

/// Output text format selector.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CvFormat {
    Json = 0,
    Csv = 1,
    Latex = 2,
}

/// Quotient ring selector.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CvRing {
    Val = 0,
    Tilde = 1,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let cstring = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(cstring));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn status_of(err: &Error) -> CvStatus {
    match err {
        Error::Parse(_) => CvStatus::ParseError,
        Error::Singular(_) => CvStatus::InternalError,
        _ => CvStatus::DomainError,
    }
}

fn write_out(out: *mut *mut c_char, text: String) -> CvStatus {
    let cstring = match CString::new(text) {
        Ok(c) => c,
        Err(_) => {
            set_error("output contained an interior NUL");
            return CvStatus::InternalError;
        }
    };
    unsafe { *out = cstring.into_raw() };
    CvStatus::Ok
}

/// Runs a closure producing a string, mapping errors and panics to codes.
fn guarded(out: *mut *mut c_char, f: impl FnOnce() -> Result<String, Error>) -> CvStatus {
    if out.is_null() {
        set_error("null output pointer");
        return CvStatus::NullArgument;
    }
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(text)) => write_out(out, text),
        Ok(Err(e)) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            CvStatus::InternalError
        }
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, CvStatus> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(CvStatus::NullArgument);
    }
    unsafe { CStr::from_ptr(ptr) }.to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        CvStatus::InvalidUtf8
    })
}

unsafe fn read_alg<'a>(alg: *const CvAlgebra) -> Result<&'a Algebra, CvStatus> {
    if alg.is_null() {
        set_error("null algebra handle");
        return Err(CvStatus::NullArgument);
    }
    Ok(unsafe { &(*alg).inner })
}

fn json<T: serde::Serialize>(value: &T) -> Result<String, Error> {
    serde_json::to_string(value).map_err(|e| Error::Domain(format!("serialization: {e}")))
}

/// Builds the algebra context for `n >= 1`. The handle must be released
/// with `cv_algebra_free`.
#[unsafe(no_mangle)]
pub extern "C" fn cv_algebra_new(n: u32, out: *mut *mut CvAlgebra) -> CvStatus {
    if out.is_null() {
        set_error("null output pointer");
        return CvStatus::NullArgument;
    }
    clear_error();
    if n < 1 {
        set_error("n must be at least 1");
        return CvStatus::DomainError;
    }
    match catch_unwind(|| Algebra::try_new(n)) {
        Ok(Ok(inner)) => {
            unsafe { *out = Box::into_raw(Box::new(CvAlgebra { inner })) };
            CvStatus::Ok
        }
        Ok(Err(e)) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            CvStatus::InternalError
        }
    }
}

/// Releases an algebra handle. Null is a no-op.
#[unsafe(no_mangle)]
pub extern "C" fn cv_algebra_free(alg: *mut CvAlgebra) {
    if !alg.is_null() {
        drop(unsafe { Box::from_raw(alg) });
    }
}

/// Releases a string returned by any query. Null is a no-op.
#[unsafe(no_mangle)]
pub extern "C" fn cv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// The diagnostic for the most recent failure on this thread, as a fresh
/// string the caller frees; empty when no error is pending.
#[unsafe(no_mangle)]
pub extern "C" fn cv_last_error_message() -> *mut c_char {
    let msg = LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map(|c| c.clone())
            .unwrap_or_default()
    });
    msg.into_raw()
}

/// Quotient dimensions and basis size as JSON.
#[unsafe(no_mangle)]
pub extern "C" fn cv_dims_json(alg: *const CvAlgebra, out: *mut *mut c_char) -> CvStatus {
    let a = match unsafe { read_alg(alg) } {
        Ok(a) => a,
        Err(s) => return s,
    };
    guarded(out, || json(&dims_json(a)))
}

/// Normal form of an expression in the chosen quotient ring, as canonical
/// polynomial text.
#[unsafe(no_mangle)]
pub extern "C" fn cv_reduce_text(
    alg: *const CvAlgebra,
    ring: CvRing,
    expr: *const c_char,
    out: *mut *mut c_char,
) -> CvStatus {
    let a = match unsafe { read_alg(alg) } {
        Ok(a) => a,
        Err(s) => return s,
    };
    let src = match unsafe { read_str(expr) } {
        Ok(s) => s.to_owned(),
        Err(s) => return s,
    };
    guarded(out, move || {
        let p = parse_poly(&src)?;
        if p.has_v() {
            return Err(Error::Parse("expression must not involve v".into()));
        }
        Ok(match ring {
            CvRing::Val => poly_to_text(a.reduce_val(&p).poly()),
            CvRing::Tilde => poly_to_text(a.reduce_tilde(&p).poly()),
        })
    })
}

/// Product of two dual elements given as expressions in `t, s, v`,
/// returned as element JSON.
#[unsafe(no_mangle)]
pub extern "C" fn cv_dual_mul_json(
    alg: *const CvAlgebra,
    left: *const c_char,
    right: *const c_char,
    out: *mut *mut c_char,
) -> CvStatus {
    let a = match unsafe { read_alg(alg) } {
        Ok(a) => a,
        Err(s) => return s,
    };
    let (l, r) = match (unsafe { read_str(left) }, unsafe { read_str(right) }) {
        (Ok(l), Ok(r)) => (l.to_owned(), r.to_owned()),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    guarded(out, move || {
        let x = poly_to_dual(a, &parse_poly(&l)?);
        let y = poly_to_dual(a, &parse_poly(&r)?);
        json(&dual_to_json(&a.dual_mul(&x, &y)))
    })
}

/// The local kinematic tensor in the requested format.
#[unsafe(no_mangle)]
pub extern "C" fn cv_local_kinematic(
    alg: *const CvAlgebra,
    format: CvFormat,
    out: *mut *mut c_char,
) -> CvStatus {
    let a = match unsafe { read_alg(alg) } {
        Ok(a) => a,
        Err(s) => return s,
    };
    guarded(out, move || {
        let kin = local_kinematic(a);
        Ok(match format {
            CvFormat::Json => json(&local_to_json(a, &kin))?,
            CvFormat::Csv => local_to_csv(a, &kin),
            CvFormat::Latex => local_to_latex(a, &kin),
        })
    })
}

/// The global kinematic tensor in the requested format.
#[unsafe(no_mangle)]
pub extern "C" fn cv_global_kinematic(
    alg: *const CvAlgebra,
    format: CvFormat,
    out: *mut *mut c_char,
) -> CvStatus {
    let a = match unsafe { read_alg(alg) } {
        Ok(a) => a,
        Err(s) => return s,
    };
    guarded(out, move || {
        let kin = global_kinematic(a);
        Ok(match format {
            CvFormat::Json => json(&global_to_json(&kin))?,
            CvFormat::Csv => global_to_csv(&kin),
            CvFormat::Latex => global_to_latex(&kin),
        })
    })
}

/// Globalizes a curvature measure passed as element JSON; returns
/// `{"n":..,"valuation":"..."}`.
#[unsafe(no_mangle)]
pub extern "C" fn cv_globalize_json(
    alg: *const CvAlgebra,
    element_json: *const c_char,
    out: *mut *mut c_char,
) -> CvStatus {
    let a = match unsafe { read_alg(alg) } {
        Ok(a) => a,
        Err(s) => return s,
    };
    let src = match unsafe { read_str(element_json) } {
        Ok(s) => s.to_owned(),
        Err(s) => return s,
    };
    guarded(out, move || {
        let parsed: curvalg::serialize::ElementJson = serde_json::from_str(&src)
            .map_err(|e| Error::Parse(format!("bad element JSON: {e}")))?;
        if parsed.n != a.n() {
            return Err(Error::Domain(format!(
                "element has n = {}, handle has n = {}",
                parsed.n,
                a.n()
            )));
        }
        let phi = curv_from_json(&parsed)?;
        let val = a.globalize(&phi);
        json(&serde_json::json!({"n": a.n(), "valuation": poly_to_text(val.poly())}))
    })
}

/// Module-multiplies a valuation expression against a measure passed as
/// element JSON; returns the resulting element JSON.
#[unsafe(no_mangle)]
pub extern "C" fn cv_module_mul_json(
    alg: *const CvAlgebra,
    valuation: *const c_char,
    element_json: *const c_char,
    out: *mut *mut c_char,
) -> CvStatus {
    let a = match unsafe { read_alg(alg) } {
        Ok(a) => a,
        Err(s) => return s,
    };
    let (v, e) = match (unsafe { read_str(valuation) }, unsafe {
        read_str(element_json)
    }) {
        (Ok(v), Ok(e)) => (v.to_owned(), e.to_owned()),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    guarded(out, move || {
        let p = parse_poly(&v)?;
        if p.has_v() {
            return Err(Error::Parse("valuations must not involve v".into()));
        }
        let parsed: curvalg::serialize::ElementJson =
            serde_json::from_str(&e).map_err(|e| Error::Parse(format!("bad element JSON: {e}")))?;
        if parsed.n != a.n() {
            return Err(Error::Domain(format!(
                "element has n = {}, handle has n = {}",
                parsed.n,
                a.n()
            )));
        }
        let phi = curv_from_json(&parsed)?;
        let res = a.module_mul_flat(&a.reduce_val(&p), &phi);
        json(&curv_to_json(&res))
    })
}

/// The dual image of the curved generator for a rational curvature
/// parameter given as `p/q` text; returns element JSON.
#[unsafe(no_mangle)]
pub extern "C" fn cv_t_lambda_json(
    alg: *const CvAlgebra,
    lambda: *const c_char,
    out: *mut *mut c_char,
) -> CvStatus {
    let a = match unsafe { read_alg(alg) } {
        Ok(a) => a,
        Err(s) => return s,
    };
    let l = match unsafe { read_str(lambda) } {
        Ok(l) => l.to_owned(),
        Err(s) => return s,
    };
    guarded(out, move || {
        let ctx = LambdaContext::new(a, parse_rational(&l)?);
        json(&dual_to_json(&ctx.t_lambda_bar()))
    })
}

/// Membership of `p1 + p2 w` in the curved valuation image; returns
/// `{"member":bool,"preimage":text|null}`.
#[unsafe(no_mangle)]
pub extern "C" fn cv_image_check_json(
    alg: *const CvAlgebra,
    lambda: *const c_char,
    p1: *const c_char,
    p2: *const c_char,
    out: *mut *mut c_char,
) -> CvStatus {
    let a = match unsafe { read_alg(alg) } {
        Ok(a) => a,
        Err(s) => return s,
    };
    let (l, x, y) = match (
        unsafe { read_str(lambda) },
        unsafe { read_str(p1) },
        unsafe { read_str(p2) },
    ) {
        (Ok(l), Ok(x), Ok(y)) => (l.to_owned(), x.to_owned(), y.to_owned()),
        (Err(s), _, _) | (_, Err(s), _) | (_, _, Err(s)) => return s,
    };
    guarded(out, move || {
        let ctx = LambdaContext::new(a, parse_rational(&l)?);
        let preimage = ctx.image_membership(&parse_poly(&x)?, &parse_poly(&y)?);
        json(&ImageJson {
            member: preimage.is_some(),
            preimage: preimage.map(|q| poly_to_text(&q)),
        })
    })
}

/// Angularity of a valuation expression on the space form with the given
/// rational curvature parameter; returns the report JSON.
#[unsafe(no_mangle)]
pub extern "C" fn cv_angular_check_json(
    alg: *const CvAlgebra,
    lambda: *const c_char,
    expr: *const c_char,
    out: *mut *mut c_char,
) -> CvStatus {
    let a = match unsafe { read_alg(alg) } {
        Ok(a) => a,
        Err(s) => return s,
    };
    let (l, x) = match (unsafe { read_str(lambda) }, unsafe { read_str(expr) }) {
        (Ok(l), Ok(x)) => (l.to_owned(), x.to_owned()),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    guarded(out, move || {
        let ctx = LambdaContext::new(a, parse_rational(&l)?);
        let report = is_angular_valuation(&ctx, &parse_poly(&x)?)?;
        json(&angular_to_json(&report))
    })
}

/// Rewrites `v`-powers through the defining relation and evaluates the
/// polynomial as a dual element.
fn poly_to_dual(alg: &Algebra, p: &curvalg::Poly) -> curvalg::DualElement {
    use curvalg::Poly;
    let tu = Poly::t() * Poly::u();
    let tu2 = &tu * &tu;
    let max_v = p.terms().map(|((_, _, c), _)| c).max().unwrap_or(0);
    let mut parts: Vec<Poly> = vec![Poly::zero(); (max_v as usize) + 1];
    for ((a, b, c), coeff) in p.terms() {
        parts[c as usize].insert_term((a, b, 0), coeff.clone());
    }
    for c in (2..parts.len()).rev() {
        let top = std::mem::replace(&mut parts[c], Poly::zero());
        if top.is_zero() {
            continue;
        }
        parts[c - 1] += (&top * &tu).scale(&curvalg::Scalar::from_int(-2));
        parts[c - 2] += -(&top * &tu2);
    }
    let p2 = parts.get(1).cloned().unwrap_or_default();
    alg.from_presentation(&curvalg::Presentation {
        p1: alg.reduce_val(&parts[0]),
        p2: alg.reduce_tilde(&p2),
    })
}
