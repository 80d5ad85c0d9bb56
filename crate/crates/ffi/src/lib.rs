//! C interface to `qstr`.
//!
//! Every fallible function returns a [`QstrStatus`]. On failure the message
//! is kept per thread and can be read with [`qstr_last_error`]. Objects are
//! opaque handles released with their `_free` function; strings handed out
//! by the library are released with [`qstr_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use qstr::network::{enforce_pc, extract_scenario_distributive, random_qcn, solve_backtrack, Qcn, SolveOutcome};
use qstr::sparse::{eliminate_variables, enforce_ppc, triangulate, ConstraintGraph, EliminationOrder, Heuristic};
use qstr::subalgebra::{enumerate_maximal_distributive, named_subalgebra};
use qstr::{calculi, Calculus, Error};

/// A qualitative calculus.
pub struct QstrCalculus(Arc<Calculus>);

/// A constraint network over one calculus.
pub struct QstrNetwork(Qcn);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QstrStatus {
    Ok = 0,
    NullPointer,
    InvalidUtf8,
    /// Unknown calculus, atom or subalgebra name.
    UnknownName,
    Parse,
    OutOfRange,
    InvalidArgument,
    Unsupported,
    /// A closure cap or enumeration guard was hit.
    LimitExceeded,
    Failure,
    /// A Rust panic was caught at the boundary.
    Panic,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QstrVerdict {
    Inconsistent = 0,
    Consistent = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QstrMethod {
    Pc = 0,
    Ppc,
    Ve,
    Backtrack,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(QstrStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::UnknownCalculus(_) | Error::UnknownAtomName(_) => QstrStatus::UnknownName,
            Error::Parse { .. } => QstrStatus::Parse,
            Error::IndexOutOfRange { .. } | Error::InvalidAtom(_) => QstrStatus::OutOfRange,
            Error::UnsupportedCalculus(_) | Error::NoCngOrder(_) | Error::NoDimensionMap(_) => QstrStatus::Unsupported,
            Error::CapExceeded(_) | Error::SearchSpaceTooLarge(_) => QstrStatus::LimitExceeded,
            Error::InvalidArgument(_) | Error::CalculusMismatch(_) | Error::EmptyPool | Error::NotASubalgebra(_) => {
                QstrStatus::InvalidArgument
            }
            _ => QstrStatus::Failure,
        };
        Failure(status, e.to_string())
    }
}

type FfiResult<T> = Result<T, Failure>;

/// Runs `f`, records any error or panic, and turns it into a status.
fn guard(f: impl FnOnce() -> FfiResult<()>) -> QstrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            QstrStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            QstrStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(QstrStatus::NullPointer, format!("{what} is null"))
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> FfiResult<&'a T> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(QstrStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> FfiResult<()> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("library text has no nul bytes").into_raw()
}

/// Message of the last failed call on this thread, or NULL after a
/// successful one. Valid until the next call into the library.
#[no_mangle]
pub extern "C" fn qstr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn qstr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be NULL or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn qstr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Looks up a built-in calculus: PA, IA, RCC5, RCC8, CRA or RA.
///
/// # Safety
/// `name` must be a valid C string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qstr_calculus_new(name: *const c_char, out: *mut *mut QstrCalculus) -> QstrStatus {
    guard(|| {
        let calc = calculi::by_name(text(name, "name")?)?;
        put(out, Box::into_raw(Box::new(QstrCalculus(calc))), "out")
    })
}

/// # Safety
/// `calc` must be NULL or a handle from [`qstr_calculus_new`], freed once.
#[no_mangle]
pub unsafe extern "C" fn qstr_calculus_free(calc: *mut QstrCalculus) {
    if !calc.is_null() {
        drop(Box::from_raw(calc));
    }
}

/// Number of atoms, or 0 for NULL.
///
/// # Safety
/// `calc` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qstr_calculus_atom_count(calc: *const QstrCalculus) -> usize {
    calc.as_ref().map_or(0, |c| c.0.atom_count())
}

/// Counts the maximal distributive subalgebras.
///
/// # Safety
/// `calc` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qstr_maximal_subalgebra_count(calc: *const QstrCalculus, out: *mut usize) -> QstrStatus {
    guard(|| {
        let calc = borrow(calc, "calc")?;
        put(out, enumerate_maximal_distributive(&calc.0)?.len(), "out")
    })
}

/// A network of `n` variables with every constraint universal.
///
/// # Safety
/// `calc` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qstr_network_new(calc: *const QstrCalculus, n: usize, out: *mut *mut QstrNetwork) -> QstrStatus {
    guard(|| {
        let calc = borrow(calc, "calc")?;
        put(out, Box::into_raw(Box::new(QstrNetwork(Qcn::new(calc.0.clone(), n)))), "out")
    })
}

/// Parses the textual network format.
///
/// # Safety
/// `src` must be a valid C string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qstr_network_parse(src: *const c_char, out: *mut *mut QstrNetwork) -> QstrStatus {
    guard(|| {
        let q = Qcn::parse(text(src, "src")?)?;
        put(out, Box::into_raw(Box::new(QstrNetwork(q))), "out")
    })
}

/// A random network over a named label pool, as produced by `qstr gen`.
///
/// # Safety
/// `calc` must be a live handle, `pool` a valid C string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qstr_network_random(
    calc: *const QstrCalculus,
    n: usize,
    density: f64,
    pool: *const c_char,
    seed: u64,
    out: *mut *mut QstrNetwork,
) -> QstrStatus {
    guard(|| {
        let calc = borrow(calc, "calc")?;
        let pool = named_subalgebra(&calc.0, text(pool, "pool")?)?;
        let q = random_qcn(&calc.0, n, density, &pool, seed)?;
        put(out, Box::into_raw(Box::new(QstrNetwork(q))), "out")
    })
}

/// # Safety
/// `net` must be NULL or a network handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn qstr_network_free(net: *mut QstrNetwork) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

/// Number of variables, or 0 for NULL.
///
/// # Safety
/// `net` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qstr_network_size(net: *const QstrNetwork) -> usize {
    net.as_ref().map_or(0, |q| q.0.n())
}

/// Sets the constraint between `i` and `j` (and its converse) from a
/// space-separated atom list; an empty list is the empty relation.
///
/// # Safety
/// `net` must be a live handle and `atoms` a valid C string.
#[no_mangle]
pub unsafe extern "C" fn qstr_network_set(net: *mut QstrNetwork, i: usize, j: usize, atoms: *const c_char) -> QstrStatus {
    guard(|| {
        let q = &mut net.as_mut().ok_or_else(|| null("net"))?.0;
        let r = q.calculus().parse_relation(text(atoms, "atoms")?)?;
        Ok(q.set(i, j, r)?)
    })
}

/// The constraint between `i` and `j` as a space-separated atom list.
/// Release with [`qstr_string_free`].
///
/// # Safety
/// `net` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qstr_network_get(net: *const QstrNetwork, i: usize, j: usize, out: *mut *mut c_char) -> QstrStatus {
    guard(|| {
        let q = &borrow(net, "net")?.0;
        for index in [i, j] {
            if index >= q.n() {
                return Err(Error::IndexOutOfRange { index, n: q.n() }.into());
            }
        }
        put(out, into_c_string(q.calculus().format_relation(&q.get(i, j))), "out")
    })
}

/// The network in the textual format. Release with [`qstr_string_free`].
///
/// # Safety
/// `net` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qstr_network_to_text(net: *const QstrNetwork, out: *mut *mut c_char) -> QstrStatus {
    guard(|| put(out, into_c_string(borrow(net, "net")?.0.to_text()), "out"))
}

fn run_method(q: &Qcn, method: QstrMethod) -> FfiResult<SolveOutcome> {
    Ok(match method {
        QstrMethod::Pc => enforce_pc(q),
        QstrMethod::Ppc => enforce_ppc(q, &triangulate(&ConstraintGraph::of_network(q), Heuristic::MinFill))?,
        QstrMethod::Ve => eliminate_variables(q, &EliminationOrder::MinDegree)?.outcome,
        QstrMethod::Backtrack => solve_backtrack(q),
    })
}

/// Decides consistency. When `refined` is not NULL it receives the refined
/// network, or NULL if the network is inconsistent.
///
/// # Safety
/// `net` must be a live handle, `verdict` writable, `refined` NULL or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn qstr_network_solve(
    net: *const QstrNetwork,
    method: QstrMethod,
    verdict: *mut QstrVerdict,
    refined: *mut *mut QstrNetwork,
) -> QstrStatus {
    guard(|| {
        let outcome = run_method(&borrow(net, "net")?.0, method)?;
        let v = if outcome.is_consistent() { QstrVerdict::Consistent } else { QstrVerdict::Inconsistent };
        put(verdict, v, "verdict")?;
        if !refined.is_null() {
            let handle = outcome.refined.map_or(ptr::null_mut(), |r| Box::into_raw(Box::new(QstrNetwork(r))));
            refined.write(handle);
        }
        Ok(())
    })
}

/// Finds one scenario. With a `subalgebra` name and all path-consistent
/// entries inside it, the scenario is built directly; otherwise by search.
/// `scenario` receives NULL when the network is inconsistent.
///
/// # Safety
/// `net` must be a live handle, `subalgebra` NULL or a valid C string,
/// `verdict` and `scenario` writable.
#[no_mangle]
pub unsafe extern "C" fn qstr_network_scenario(
    net: *const QstrNetwork,
    subalgebra: *const c_char,
    verdict: *mut QstrVerdict,
    scenario: *mut *mut QstrNetwork,
) -> QstrStatus {
    guard(|| {
        let q = &borrow(net, "net")?.0;
        let pool = if subalgebra.is_null() {
            None
        } else {
            Some(named_subalgebra(q.calculus(), text(subalgebra, "subalgebra")?)?)
        };
        let pc = enforce_pc(q);
        let found = match (&pc.refined, &pool) {
            (None, _) => None,
            (Some(r), Some(p)) if r.entries_in(p) => Some(extract_scenario_distributive(r, Some(p))?),
            _ => solve_backtrack(q).scenario,
        };
        let v = if found.is_some() { QstrVerdict::Consistent } else { QstrVerdict::Inconsistent };
        put(verdict, v, "verdict")?;
        let handle = found.map_or(ptr::null_mut(), |s| Box::into_raw(Box::new(QstrNetwork(s.into_qcn()))));
        put(scenario, handle, "scenario")
    })
}
