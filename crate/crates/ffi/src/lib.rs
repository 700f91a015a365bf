//! C ABI for `scatter1d`.
//!
//! Every fallible function returns an [`S1dStatus`]; on failure a message
//! is kept per thread and can be read with [`s1d_last_error`]. Potentials
//! and zero lists are opaque handles owned by the caller and released with
//! their `_free` function. Panics never cross the boundary.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use scatter1d::complexplane::{find_zeros, jost_a_handle, FoundZero, Rectangle, ScanOptions};
use scatter1d::oracles::{a_pole_lattice, oracle_for};
use scatter1d::transfer::{compose, to_jost, transmission_reflection};
use scatter1d::{Complex64, Error, JostCoefficients, Potential, PotentialConfig, SolverOptions};

/// Status codes. Stable; new codes are only ever appended.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum S1dStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// Malformed potential configuration.
    Config = 3,
    /// Integration, quadrature or series failure.
    Compute = 4,
    /// κ outside the analyticity strip of the potential's tails.
    TailLimited = 5,
    /// κ at a pole or too close to κ = 0.
    Singular = 6,
    /// Contour scan failed.
    Scan = 7,
    /// No closed form for this potential.
    NoOracle = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct S1dComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for S1dComplex {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<S1dComplex> for Complex64 {
    fn from(z: S1dComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

/// Amplitudes at one momentum: α, β and a = 1 − α/2iκ, b = β/2iκ.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct S1dJost {
    pub kappa: S1dComplex,
    pub alpha: S1dComplex,
    pub beta: S1dComplex,
    pub a: S1dComplex,
    pub b: S1dComplex,
}

impl S1dJost {
    fn from_jost(j: &JostCoefficients) -> Self {
        let p = j.to_pair();
        Self {
            kappa: j.kappa.into(),
            alpha: p.alpha.into(),
            beta: p.beta.into(),
            a: j.a.into(),
            b: j.b.into(),
        }
    }

    fn to_jost(self) -> JostCoefficients {
        JostCoefficients::new(self.kappa.into(), self.a.into(), self.b.into())
    }
}

/// Solver tolerances; pass NULL for defaults.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct S1dOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Support cutoff relative to max V.
    pub support_eps: f64,
    pub max_step: f64,
}

impl From<S1dOptions> for SolverOptions {
    fn from(o: S1dOptions) -> Self {
        SolverOptions {
            ode_rel_tol: o.rel_tol,
            ode_abs_tol: o.abs_tol,
            support_eps: o.support_eps,
            max_step: o.max_step,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct S1dZero {
    pub location: S1dComplex,
    pub multiplicity: i32,
    pub residual: f64,
    /// 0 if the cell hit the depth limit before isolating the zero.
    pub resolved: i32,
}

/// Opaque potential handle.
pub struct S1dPotential(Potential);

/// Opaque list of zeros from a scan.
pub struct S1dZeroList {
    zeros: Vec<FoundZero>,
    winding: i64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> S1dStatus {
    match e {
        Error::InvalidParameter(_)
        | Error::UnknownFamily(_)
        | Error::OverlappingParts(..)
        | Error::NotPointwiseEvaluable(_)
        | Error::Extrapolation { .. } => S1dStatus::Config,
        Error::TailLimited { .. } => S1dStatus::TailLimited,
        Error::Pole(_) | Error::NearZeroMomentum(_) => S1dStatus::Singular,
        Error::ZeroOnContour { .. }
        | Error::PhaseTracking(_)
        | Error::NoConvergence(_)
        | Error::InvalidRectangle(_) => S1dStatus::Scan,
        Error::MismatchedKappa(..) | Error::MissingConjugate(_) => S1dStatus::InvalidArgument,
        _ => S1dStatus::Compute,
    }
}

/// Run `f`, record any failure, and map it to a status.
fn guard(f: impl FnOnce() -> Result<(), (S1dStatus, String)>) -> S1dStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => S1dStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            S1dStatus::Panic
        }
    }
}

fn lib(e: Error) -> (S1dStatus, String) {
    (status_of(&e), format!("{e} [{}]", e.code()))
}

fn null(what: &str) -> (S1dStatus, String) {
    (S1dStatus::NullPointer, format!("{what} is NULL"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, (S1dStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (S1dStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn opts_arg(p: *const S1dOptions) -> Result<SolverOptions, (S1dStatus, String)> {
    let o = if p.is_null() { SolverOptions::default() } else { SolverOptions::from(*p) };
    o.validate().map_err(lib)?;
    Ok(o)
}

/// Message of the last failure on this thread, or NULL. Valid until the
/// next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn s1d_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, static string.
#[no_mangle]
pub extern "C" fn s1d_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Default solver options.
#[no_mangle]
pub extern "C" fn s1d_options_default() -> S1dOptions {
    let o = SolverOptions::default();
    S1dOptions {
        rel_tol: o.ode_rel_tol,
        abs_tol: o.ode_abs_tol,
        support_eps: o.support_eps,
        max_step: o.max_step,
    }
}

/// Build a potential from a JSON config. On success `*out` owns a handle.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn s1d_potential_from_json(json: *const c_char, out: *mut *mut S1dPotential) -> S1dStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = str_arg(json, "json")?;
        let p = PotentialConfig::from_json(text).and_then(|c| c.build()).map_err(lib)?;
        *out = Box::into_raw(Box::new(S1dPotential(p)));
        Ok(())
    })
}

/// Build a named potential from keyed parameters, e.g. `"square"` with
/// keys `{"V0", "x0"}`.
///
/// Keys: square, exponential, poschl_teller, gaussian: `V0`, `x0`;
/// delta: `v0`, optional `position`; double: `V0`, `x0`, `d`; free: none.
///
/// # Safety
/// `name` and each of `keys[0..n]` must be NUL-terminated; `values` must
/// hold `n` doubles (both arrays may be NULL when `n` is 0); `out` writable.
#[no_mangle]
pub unsafe extern "C" fn s1d_potential_builtin(
    name: *const c_char,
    keys: *const *const c_char,
    values: *const f64,
    n: usize,
    out: *mut *mut S1dPotential,
) -> S1dStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let name = str_arg(name, "name")?;
        let mut params = BTreeMap::new();
        if n > 0 {
            if keys.is_null() || values.is_null() {
                return Err(null("keys or values"));
            }
            for i in 0..n {
                params.insert(str_arg(*keys.add(i), "key")?.to_string(), *values.add(i));
            }
        }
        let p = scatter1d::builtin(name, &params).map_err(lib)?;
        *out = Box::into_raw(Box::new(S1dPotential(p)));
        Ok(())
    })
}

/// Release a potential. NULL is a no-op.
///
/// # Safety
/// `p` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn s1d_potential_free(p: *mut S1dPotential) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// V(x); spikes (delta parts) are not included.
///
/// # Safety
/// `p` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn s1d_potential_eval(p: *const S1dPotential, x: f64, out: *mut f64) -> S1dStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("potential"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = p.0.evaluate(x).map_err(lib)?;
        Ok(())
    })
}

/// Amplitudes by direct integration. `opts` may be NULL.
///
/// # Safety
/// `p` must be a live handle; `opts` NULL or valid; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn s1d_amplitudes(
    p: *const S1dPotential,
    kappa: S1dComplex,
    opts: *const S1dOptions,
    out: *mut S1dJost,
) -> S1dStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("potential"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let o = opts_arg(opts)?;
        let ap = scatter1d::amplitudes(&p.0, kappa.into(), &o).map_err(lib)?;
        *out = S1dJost::from_jost(&to_jost(&ap).map_err(lib)?);
        Ok(())
    })
}

/// Closed-form amplitudes; `NoOracle` unless the potential is a centered
/// square, exponential, Pöschl–Teller or delta barrier.
///
/// # Safety
/// `p` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn s1d_oracle(p: *const S1dPotential, kappa: S1dComplex, out: *mut S1dJost) -> S1dStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("potential"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let fam = p
            .0
            .family()
            .ok_or((S1dStatus::NoOracle, "no closed form for this potential".to_string()))?;
        *out = S1dJost::from_jost(&oracle_for(fam, kappa.into()).map_err(lib)?.jost);
        Ok(())
    })
}

/// T = 1/|a|², R = |b/a|²; real κ only.
///
/// # Safety
/// `j` must be valid; `t`, `r` writable.
#[no_mangle]
pub unsafe extern "C" fn s1d_transmission_reflection(j: *const S1dJost, t: *mut f64, r: *mut f64) -> S1dStatus {
    guard(|| {
        let j = j.as_ref().ok_or_else(|| null("jost"))?;
        if t.is_null() || r.is_null() {
            return Err(null("t or r"));
        }
        let (tt, rr) = transmission_reflection(&j.to_jost()).map_err(lib)?;
        *t = tt;
        *r = rr;
        Ok(())
    })
}

/// Coefficients of two barriers displaced by `d1` and `d2` (`d1 < d2`,
/// non-overlapping), from those of the centered barriers at the same κ.
///
/// # Safety
/// `j1`, `j2` valid; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn s1d_compose(
    j1: *const S1dJost,
    d1: f64,
    j2: *const S1dJost,
    d2: f64,
    out: *mut S1dJost,
) -> S1dStatus {
    guard(|| {
        let j1 = j1.as_ref().ok_or_else(|| null("j1"))?;
        let j2 = j2.as_ref().ok_or_else(|| null("j2"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let c = compose(&j1.to_jost(), d1, &j2.to_jost(), d2).map_err(lib)?;
        *out = S1dJost::from_jost(&c);
        Ok(())
    })
}

/// Zeros of a(κ) in the rectangle. With `use_oracle` non-zero the closed
/// form is used when one exists (and may reach below the tail strip).
///
/// # Safety
/// `p` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn s1d_scan(
    p: *const S1dPotential,
    re_min: f64,
    re_max: f64,
    im_min: f64,
    im_max: f64,
    use_oracle: i32,
    out: *mut *mut S1dZeroList,
) -> S1dStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("potential"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let rect = Rectangle::new(re_min, re_max, im_min, im_max).map_err(lib)?;
        let family = if use_oracle != 0 { p.0.family() } else { None };
        if family.is_none() {
            if let Some(s) = p.0.min_tail_slope() {
                if im_min <= -s {
                    return Err((
                        S1dStatus::TailLimited,
                        format!("solver is analytic only for Im kappa > {}", -s),
                    ));
                }
            }
        }
        let mut so = ScanOptions::default();
        if let Some(f) = family {
            so.known_poles = a_pole_lattice(f, im_min - 1.0);
        }
        let h = jost_a_handle(&p.0, family.is_some(), SolverOptions::default());
        let r = find_zeros(&h, &rect, &so).map_err(lib)?;
        *out = Box::into_raw(Box::new(S1dZeroList {
            zeros: r.zeros,
            winding: r.total_winding,
        }));
        Ok(())
    })
}

/// Number of zeros in the list (0 for NULL).
///
/// # Safety
/// `l` NULL or a live list.
#[no_mangle]
pub unsafe extern "C" fn s1d_zero_list_len(l: *const S1dZeroList) -> usize {
    l.as_ref().map_or(0, |l| l.zeros.len())
}

/// Total winding of a around the scanned rectangle (0 for NULL).
///
/// # Safety
/// `l` NULL or a live list.
#[no_mangle]
pub unsafe extern "C" fn s1d_zero_list_winding(l: *const S1dZeroList) -> i64 {
    l.as_ref().map_or(0, |l| l.winding)
}

/// Zero `i`, ordered by imaginary then real part.
///
/// # Safety
/// `l` a live list; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn s1d_zero_list_get(l: *const S1dZeroList, i: usize, out: *mut S1dZero) -> S1dStatus {
    guard(|| {
        let l = l.as_ref().ok_or_else(|| null("list"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let z = l
            .zeros
            .get(i)
            .ok_or((S1dStatus::InvalidArgument, format!("index {i} out of range")))?;
        *out = S1dZero {
            location: z.location.into(),
            multiplicity: z.multiplicity as i32,
            residual: z.residual,
            resolved: z.resolved as i32,
        };
        Ok(())
    })
}

/// Release a zero list. NULL is a no-op.
///
/// # Safety
/// `l` must come from [`s1d_scan`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn s1d_zero_list_free(l: *mut S1dZeroList) {
    if !l.is_null() {
        drop(Box::from_raw(l));
    }
}
