//! C interface to `ritt-core`.
//!
//! Objects are handed out as opaque pointers and released with the matching
//! `*_free` function. Every fallible call returns a [`RittStatus`]; on failure
//! [`ritt_last_error`] describes the cause for the calling thread. Strings
//! returned by the library are freed with [`ritt_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ritt_core::classify::{count_left_classes, ClassifyError};
use ritt_core::elliptic::{EllipticError, EllipticEvaluator};
use ritt_core::lattice::{Lattice, LatticeError, SublatticeSpec};
use ritt_core::permgroup::{genus_from_monodromy, MonodromyDatum, PermError};
use ritt_core::radical::{invert_chebyshev, invert_power, ForwardMap, RadicalError, RadicalExpr};
use ritt_core::ritt::{
    best_invariant_sublattice, build_ritt_function, default_parent, verify_identity,
    PartialFractionRational, RittError,
};
use ritt_core::{sampling, CaseTag, Complex};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RittStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    BadLattice = 3,
    NoSublattice = 4,
    AtPole = 5,
    Numerical = 6,
    Parse = 7,
    TooManyBranches = 8,
    BufferTooSmall = 9,
    Panic = 10,
}

/// A complex number as two doubles.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RittComplex {
    pub re: f64,
    pub im: f64,
}

impl From<RittComplex> for Complex {
    fn from(z: RittComplex) -> Self {
        Complex::new(z.re, z.im)
    }
}

impl From<Complex> for RittComplex {
    fn from(z: Complex) -> Self {
        RittComplex { re: z.re, im: z.im }
    }
}

/// Weierstrass ℘ for one lattice.
pub struct RittEvaluator {
    inner: EllipticEvaluator,
}

/// A rational map R with S_Λ'(z) = R(S_Λ(z)), together with the lattices it
/// was built from.
pub struct RittRational {
    inner: PartialFractionRational,
    case: CaseTag,
    parent: Lattice,
    spec: SublatticeSpec,
    tol: f64,
}

/// A radical expression in one variable.
pub struct RittRadical {
    inner: RadicalExpr,
}

struct Failure(RittStatus, String);

impl Failure {
    fn new(status: RittStatus, message: impl Into<String>) -> Self {
        Failure(status, message.into())
    }
}

impl From<LatticeError> for Failure {
    fn from(e: LatticeError) -> Self {
        let status = match e {
            LatticeError::NonPrimeIndex(_) | LatticeError::InvalidHnf { .. } => {
                RittStatus::InvalidArgument
            }
            _ => RittStatus::BadLattice,
        };
        Failure(status, e.to_string())
    }
}

impl From<EllipticError> for Failure {
    fn from(e: EllipticError) -> Self {
        let status = match e {
            EllipticError::Lattice(inner) => return inner.into(),
            EllipticError::Pole { .. } => RittStatus::AtPole,
            EllipticError::Degenerate => RittStatus::BadLattice,
            EllipticError::BadTolerance(_)
            | EllipticError::DerivativeOrder(_)
            | EllipticError::NotTorusCase(_) => RittStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

impl From<RittError> for Failure {
    fn from(e: RittError) -> Self {
        let status = match e {
            RittError::Elliptic(inner) => return inner.into(),
            RittError::Lattice(inner) => return inner.into(),
            RittError::NotTorusCase(_) => RittStatus::InvalidArgument,
            RittError::NoInvariantSublattice { .. } => RittStatus::NoSublattice,
            RittError::AtPole(_) => RittStatus::AtPole,
            RittError::IllConditioned { .. }
            | RittError::PoleCollision(..)
            | RittError::ConstantMismatch { .. }
            | RittError::Sampling(_) => RittStatus::Numerical,
        };
        Failure(status, e.to_string())
    }
}

impl From<RadicalError> for Failure {
    fn from(e: RadicalError) -> Self {
        let status = match e {
            RadicalError::Parse(_) | RadicalError::Malformed(_) => RittStatus::Parse,
            RadicalError::TooManyBranches(_) => RittStatus::TooManyBranches,
            RadicalError::LeadingZero | RadicalError::NotInvertible(_) => {
                RittStatus::InvalidArgument
            }
            RadicalError::BranchesLost { .. } => RittStatus::Numerical,
        };
        Failure(status, e.to_string())
    }
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Self {
        Failure(RittStatus::InvalidArgument, e.to_string())
    }
}

impl From<PermError> for Failure {
    fn from(e: PermError) -> Self {
        let status = match e {
            PermError::Parse(_) => RittStatus::Parse,
            _ => RittStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).expect("NUL bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

/// Runs `f`, records any failure or panic, and returns its status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> RittStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            RittStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("internal error: {message}"));
            RittStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure::new(RittStatus::NullPointer, format!("{name} is NULL")))
}

unsafe fn out<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| Failure::new(RittStatus::NullPointer, format!("{name} is NULL")))
}

unsafe fn text<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::new(
            RittStatus::NullPointer,
            format!("{name} is NULL"),
        ));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::new(RittStatus::InvalidArgument, format!("{name} is not UTF-8")))
}

fn case_tag(s: &str) -> Result<CaseTag, Failure> {
    s.parse().map_err(|e: ritt_core::UnknownCase| {
        Failure::new(RittStatus::InvalidArgument, e.to_string())
    })
}

fn new_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure::new(RittStatus::Numerical, "string contains NUL"))
}

/// Message for the last failed call on this thread, or NULL after a
/// successful call. Valid until the next call into the library.
#[no_mangle]
pub extern "C" fn ritt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by the library.
///
/// # Safety
/// `s` is NULL or a string from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn ritt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Evaluator for the lattice `omega1·ℤ + omega2·ℤ` with `Im(omega2/omega1) > 0`.
///
/// # Safety
/// `out_evaluator` is a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ritt_evaluator_new(
    omega1: RittComplex,
    omega2: RittComplex,
    tol: f64,
    out_evaluator: *mut *mut RittEvaluator,
) -> RittStatus {
    guard(|| {
        let slot = out(out_evaluator, "out_evaluator")?;
        let lattice = Lattice::new(omega1.into(), omega2.into())?;
        let inner = EllipticEvaluator::new(lattice, tol)?;
        *slot = Box::into_raw(Box::new(RittEvaluator { inner }));
        Ok(())
    })
}

/// `k`-th derivative of ℘ at `z`.
///
/// # Safety
/// `evaluator` comes from [`ritt_evaluator_new`]; `out_value` is valid.
#[no_mangle]
pub unsafe extern "C" fn ritt_evaluator_wp(
    evaluator: *const RittEvaluator,
    z: RittComplex,
    k: u32,
    out_value: *mut RittComplex,
) -> RittStatus {
    guard(|| {
        let ev = deref(evaluator, "evaluator")?;
        let slot = out(out_value, "out_value")?;
        *slot = ev.inner.wp(z.into(), k as usize)?.into();
        Ok(())
    })
}

/// Invariants `g2` and `g3` of the lattice.
///
/// # Safety
/// `evaluator` comes from [`ritt_evaluator_new`]; the outputs are valid.
#[no_mangle]
pub unsafe extern "C" fn ritt_evaluator_invariants(
    evaluator: *const RittEvaluator,
    out_g2: *mut RittComplex,
    out_g3: *mut RittComplex,
) -> RittStatus {
    guard(|| {
        let ev = deref(evaluator, "evaluator")?;
        *out(out_g2, "out_g2")? = ev.inner.g2().into();
        *out(out_g3, "out_g3")? = ev.inner.g3().into();
        Ok(())
    })
}

/// # Safety
/// `evaluator` is NULL or comes from [`ritt_evaluator_new`] and is not used again.
#[no_mangle]
pub unsafe extern "C" fn ritt_evaluator_free(evaluator: *mut RittEvaluator) {
    if !evaluator.is_null() {
        drop(Box::from_raw(evaluator));
    }
}

/// Builds the degree-`p` map for a torus case ("2222", "333", "244" or
/// "236"). `tau` may be NULL to use the case's default parent lattice; the
/// sublattice is the invariant one of index `p` that is best conditioned.
///
/// # Safety
/// `case_name` is a NUL-terminated string; `tau` is NULL or valid; `out_rational` is valid.
#[no_mangle]
pub unsafe extern "C" fn ritt_rational_build(
    case_name: *const c_char,
    p: u64,
    tau: *const RittComplex,
    tol: f64,
    out_rational: *mut *mut RittRational,
) -> RittStatus {
    guard(|| {
        let slot = out(out_rational, "out_rational")?;
        let case = case_tag(text(case_name, "case_name")?)?;
        let parent = match tau.as_ref() {
            Some(&t) => Lattice::from_tau(t.into())?,
            None => default_parent(case)?,
        };
        let spec = best_invariant_sublattice(case, &parent, p)?;
        let inner = build_ritt_function(case, &parent, &spec, tol)?;
        *slot = Box::into_raw(Box::new(RittRational {
            inner,
            case,
            parent,
            spec,
            tol,
        }));
        Ok(())
    })
}

/// Degree of the map.
///
/// # Safety
/// `rational` comes from [`ritt_rational_build`]; `out_degree` is valid.
#[no_mangle]
pub unsafe extern "C" fn ritt_rational_degree(
    rational: *const RittRational,
    out_degree: *mut usize,
) -> RittStatus {
    guard(|| {
        *out(out_degree, "out_degree")? = deref(rational, "rational")?.inner.degree();
        Ok(())
    })
}

/// `R(w)`.
///
/// # Safety
/// `rational` comes from [`ritt_rational_build`]; `out_value` is valid.
#[no_mangle]
pub unsafe extern "C" fn ritt_rational_eval(
    rational: *const RittRational,
    w: RittComplex,
    out_value: *mut RittComplex,
) -> RittStatus {
    guard(|| {
        let r = deref(rational, "rational")?;
        let slot = out(out_value, "out_value")?;
        *slot = r.inner.eval(w.into())?.into();
        Ok(())
    })
}

/// Largest relative error of `S_Λ'(z) = R(S_Λ(z))` over `samples` random
/// points drawn from `seed`.
///
/// # Safety
/// `rational` comes from [`ritt_rational_build`]; `out_error` is valid.
#[no_mangle]
pub unsafe extern "C" fn ritt_rational_verify(
    rational: *const RittRational,
    samples: usize,
    seed: u64,
    out_error: *mut f64,
) -> RittStatus {
    guard(|| {
        let r = deref(rational, "rational")?;
        let slot = out(out_error, "out_error")?;
        let mut rng = sampling::rng(seed);
        *slot = verify_identity(
            &r.inner, r.case, &r.parent, &r.spec, samples, &mut rng, r.tol,
        )?;
        Ok(())
    })
}

/// The map as JSON; free the result with [`ritt_string_free`].
///
/// # Safety
/// `rational` comes from [`ritt_rational_build`]; `out_json` is valid.
#[no_mangle]
pub unsafe extern "C" fn ritt_rational_to_json(
    rational: *const RittRational,
    out_json: *mut *mut c_char,
) -> RittStatus {
    guard(|| {
        let r = deref(rational, "rational")?;
        let slot = out(out_json, "out_json")?;
        let json = serde_json::to_string(&r.inner)
            .map_err(|e| Failure::new(RittStatus::Numerical, e.to_string()))?;
        *slot = new_string(json)?;
        Ok(())
    })
}

/// # Safety
/// `rational` is NULL or comes from [`ritt_rational_build`] and is not used again.
#[no_mangle]
pub unsafe extern "C" fn ritt_rational_free(rational: *mut RittRational) {
    if !rational.is_null() {
        drop(Box::from_raw(rational));
    }
}

fn radical_out(
    slot: &mut *mut RittRadical,
    inner: Result<RadicalExpr, RadicalError>,
) -> Result<(), Failure> {
    *slot = Box::into_raw(Box::new(RittRadical { inner: inner? }));
    Ok(())
}

/// Parses the parenthesised text form.
///
/// # Safety
/// `source` is a NUL-terminated string; `out_radical` is valid.
#[no_mangle]
pub unsafe extern "C" fn ritt_radical_parse(
    source: *const c_char,
    out_radical: *mut *mut RittRadical,
) -> RittStatus {
    guard(|| {
        let slot = out(out_radical, "out_radical")?;
        radical_out(slot, RadicalExpr::parse(text(source, "source")?))
    })
}

/// Inverse of `z ↦ z^d`.
///
/// # Safety
/// `out_radical` is valid.
#[no_mangle]
pub unsafe extern "C" fn ritt_radical_invert_power(
    d: u32,
    out_radical: *mut *mut RittRadical,
) -> RittStatus {
    guard(|| radical_out(out(out_radical, "out_radical")?, invert_power(d)))
}

/// Inverse of the Chebyshev polynomial `T_n`.
///
/// # Safety
/// `out_radical` is valid.
#[no_mangle]
pub unsafe extern "C" fn ritt_radical_invert_chebyshev(
    n: u32,
    out_radical: *mut *mut RittRadical,
) -> RittStatus {
    guard(|| radical_out(out(out_radical, "out_radical")?, invert_chebyshev(n)))
}

/// Inverse of `z ↦ c[0]·z⁴ + c[1]·z³ + … + c[4]`.
///
/// # Safety
/// `coeffs` points to five values; `out_radical` is valid.
#[no_mangle]
pub unsafe extern "C" fn ritt_radical_invert_quartic(
    coeffs: *const RittComplex,
    out_radical: *mut *mut RittRadical,
) -> RittStatus {
    guard(|| {
        let slot = out(out_radical, "out_radical")?;
        if coeffs.is_null() {
            return Err(Failure::new(RittStatus::NullPointer, "coeffs is NULL"));
        }
        let coeffs: Vec<Complex> = std::slice::from_raw_parts(coeffs, 5)
            .iter()
            .rev()
            .map(|&c| c.into())
            .collect();
        radical_out(slot, ForwardMap::Quartic { coeffs }.inverse())
    })
}

/// Values of the expression at `w`, one per surviving branch. The number of
/// values goes to `out_count` even when `capacity` is too small, in which
/// case nothing is written to `values` and `BufferTooSmall` is returned.
///
/// # Safety
/// `radical` is a live handle; `values` holds `capacity` entries (or is NULL
/// when `capacity` is 0); `out_count` is valid.
#[no_mangle]
pub unsafe extern "C" fn ritt_radical_eval(
    radical: *const RittRadical,
    w: RittComplex,
    values: *mut RittComplex,
    capacity: usize,
    out_count: *mut usize,
) -> RittStatus {
    guard(|| {
        let expr = deref(radical, "radical")?;
        let count = out(out_count, "out_count")?;
        let eval = expr.inner.eval(w.into())?;
        *count = eval.values.len();
        if eval.values.len() > capacity {
            return Err(Failure::new(
                RittStatus::BufferTooSmall,
                format!("{} values, capacity {capacity}", eval.values.len()),
            ));
        }
        if values.is_null() && !eval.values.is_empty() {
            return Err(Failure::new(RittStatus::NullPointer, "values is NULL"));
        }
        for (i, v) in eval.values.into_iter().enumerate() {
            *values.add(i) = v.into();
        }
        Ok(())
    })
}

/// Text form; free the result with [`ritt_string_free`].
///
/// # Safety
/// `radical` is a live handle; `out_text` is valid.
#[no_mangle]
pub unsafe extern "C" fn ritt_radical_to_text(
    radical: *const RittRadical,
    out_text: *mut *mut c_char,
) -> RittStatus {
    guard(|| {
        let expr = deref(radical, "radical")?;
        *out(out_text, "out_text")? = new_string(expr.inner.to_text())?;
        Ok(())
    })
}

/// # Safety
/// `radical` is NULL or a handle that is not used again.
#[no_mangle]
pub unsafe extern "C" fn ritt_radical_free(radical: *mut RittRadical) {
    if !radical.is_null() {
        drop(Box::from_raw(radical));
    }
}

/// Number of left equivalence classes of degree-`p` maps for a torus case.
///
/// # Safety
/// `case_name` is a NUL-terminated string; `out_count` is valid.
#[no_mangle]
pub unsafe extern "C" fn ritt_count_left_classes(
    case_name: *const c_char,
    p: u64,
    out_count: *mut u64,
) -> RittStatus {
    guard(|| {
        let slot = out(out_count, "out_count")?;
        *slot = count_left_classes(case_tag(text(case_name, "case_name")?)?, p)?;
        Ok(())
    })
}

/// Genus of the covering described by local monodromies in 1-indexed cycle
/// notation separated by ';', e.g. "(1 2);(1 2)".
///
/// # Safety
/// `perms` is a NUL-terminated string; `out_genus` is valid.
#[no_mangle]
pub unsafe extern "C" fn ritt_monodromy_genus(
    perms: *const c_char,
    out_genus: *mut u64,
) -> RittStatus {
    guard(|| {
        let slot = out(out_genus, "out_genus")?;
        let datum = MonodromyDatum::parse(text(perms, "perms")?, None)?;
        *slot = genus_from_monodromy(&datum)?;
        Ok(())
    })
}
