//! C ABI over `purity-core`.
//!
//! Ensembles and curves are opaque heap handles released with their `_free` function.
//! Every call returns a [`PurityStatus`]; on failure the message is available from
//! [`purity_last_error`] on the same thread. Panics never cross the boundary.

use purity_core::asymptotics::{typical_probability, typical_subspace_stats, TypicalSetSpec};
use purity_core::closed_forms::{bb84_ensemble, discretize_uniform_sphere, uniform_curve_point, UniformCurveParam};
use purity_core::ensemble::{cross_check_iybe, holevo_information, CQEnsemble, ClassicalChannel};
use purity_core::state::{DensityMatrix, ProbabilityDistribution};
use purity_core::tradeoff::{
    brute_force_oracle, compute_d_curve, compute_p_curve, kappa_arrow, lagrangian_objective, local_purity,
    AscentMethod, CurveKind, OptimizerOptions, TradeoffCurve,
};
use purity_core::{io, Error};
use num_complex::Complex64;
use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Result of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PurityStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    /// The computation was refused because it would be too large.
    Guard = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

/// Opaque classical-quantum ensemble.
pub struct PurityEnsemble(CQEnsemble);

/// Opaque tradeoff curve (points plus envelope).
pub struct PurityCurve(TradeoffCurve);

/// Optimizer settings; start from [`purity_options_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PurityOptions {
    /// Output alphabet size; 0 means |X| + 2.
    pub y_size: usize,
    pub restarts: usize,
    pub master_seed: u64,
    pub max_iterations: usize,
    pub convergence_tol: f64,
    /// 0 projected gradient, 1 alternating maximization, 2 both.
    pub method: u32,
    pub refinements: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> PurityStatus {
    match e {
        Error::Parse { .. } => PurityStatus::ParseError,
        Error::Guard(_) => PurityStatus::Guard,
        _ => PurityStatus::InvalidArgument,
    }
}

#[derive(Debug)]
struct Fail(PurityStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(PurityStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into a status.
fn guarded(f: impl FnOnce() -> Result<(), Fail>) -> PurityStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            PurityStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            PurityStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn boxed_ensemble(out: *mut *mut PurityEnsemble, ens: CQEnsemble) -> Result<(), Fail> {
    unsafe { write_out(out, Box::into_raw(Box::new(PurityEnsemble(ens))), "out") }
}

/// Copies the last error message of this thread into `buf` (NUL-terminated, truncated to
/// `cap`). Returns the full message length in bytes, excluding the terminator.
///
/// # Safety
/// `buf` must be null or point to `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn purity_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && cap > 0 {
            let n = msg.len().min(cap - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr(), buf as *mut u8, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn purity_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

#[no_mangle]
pub extern "C" fn purity_options_default() -> PurityOptions {
    let d = OptimizerOptions::default();
    PurityOptions {
        y_size: 0,
        restarts: d.restarts,
        master_seed: d.master_seed,
        max_iterations: d.max_iterations,
        convergence_tol: d.convergence_tol,
        method: 2,
        refinements: d.refinements,
    }
}

fn options(o: &PurityOptions) -> Result<OptimizerOptions, Fail> {
    let method = match o.method {
        0 => AscentMethod::ProjectedGradient,
        1 => AscentMethod::AlternatingMaximization,
        2 => AscentMethod::Hybrid,
        m => return Err(Fail(PurityStatus::InvalidArgument, format!("unknown method {m}"))),
    };
    Ok(OptimizerOptions {
        y_size: (o.y_size > 0).then_some(o.y_size),
        restarts: o.restarts,
        master_seed: o.master_seed,
        max_iterations: o.max_iterations,
        convergence_tol: o.convergence_tol,
        method,
        refinements: o.refinements,
        ..Default::default()
    })
}

/// Parses an ensemble in the text format (`|X| d` header, then one line per label).
///
/// # Safety
/// `text` must be a valid NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn purity_ensemble_parse(text: *const c_char, out: *mut *mut PurityEnsemble) -> PurityStatus {
    guarded(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| Fail(PurityStatus::ParseError, "text is not UTF-8".into()))?;
        boxed_ensemble(out, io::parse_ensemble(s)?)
    })
}

/// Builds an ensemble from `labels` probabilities and `labels` density matrices of size
/// `dim × dim`, given as interleaved (re, im) pairs in row-major order
/// (`labels · dim² · 2` doubles).
///
/// # Safety
/// Pointers must reference arrays of the stated lengths; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn purity_ensemble_new(
    labels: usize,
    dim: usize,
    probs: *const f64,
    states: *const f64,
    out: *mut *mut PurityEnsemble,
) -> PurityStatus {
    guarded(|| {
        if labels == 0 || dim == 0 {
            return Err(Fail(PurityStatus::InvalidArgument, "labels and dim must be positive".into()));
        }
        let p = slice(probs, labels, "probs")?;
        let raw = slice(states, labels * dim * dim * 2, "states")?;
        let states = raw
            .chunks(dim * dim * 2)
            .map(|c| {
                let entries: Vec<Complex64> = c.chunks(2).map(|z| Complex64::new(z[0], z[1])).collect();
                DensityMatrix::from_row_major(dim, &entries)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let ens = CQEnsemble::new(ProbabilityDistribution::new(p.to_vec())?, states)?;
        boxed_ensemble(out, ens)
    })
}

/// The four-state BB84 ensemble with angle `theta` ∈ [0, π/2].
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn purity_ensemble_bb84(theta: f64, out: *mut *mut PurityEnsemble) -> PurityStatus {
    guarded(|| boxed_ensemble(out, bb84_ensemble(theta)?))
}

/// Uniform ensemble over `nodes` symmetric points of the Bloch sphere.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn purity_ensemble_sphere(nodes: usize, out: *mut *mut PurityEnsemble) -> PurityStatus {
    guarded(|| boxed_ensemble(out, discretize_uniform_sphere(nodes)?))
}

/// # Safety
/// `ens` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn purity_ensemble_free(ens: *mut PurityEnsemble) {
    if !ens.is_null() {
        drop(Box::from_raw(ens));
    }
}

/// Number of labels, or 0 for a null handle.
///
/// # Safety
/// `ens` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn purity_ensemble_labels(ens: *const PurityEnsemble) -> usize {
    ens.as_ref().map_or(0, |e| e.0.labels())
}

/// Quantum dimension, or 0 for a null handle.
///
/// # Safety
/// `ens` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn purity_ensemble_dim(ens: *const PurityEnsemble) -> usize {
    ens.as_ref().map_or(0, |e| e.0.dim())
}

/// Holevo information of the ensemble, bits.
///
/// # Safety
/// `ens` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn purity_ensemble_holevo(ens: *const PurityEnsemble, out: *mut f64) -> PurityStatus {
    guarded(|| {
        let e = deref(ens, "ensemble")?;
        write_out(out, holevo_information(&e.0)?, "out")
    })
}

/// κ(ρ^X) + κ(ρ^B), bits.
///
/// # Safety
/// `ens` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn purity_ensemble_local_purity(ens: *const PurityEnsemble, out: *mut f64) -> PurityStatus {
    guarded(|| {
        let e = deref(ens, "ensemble")?;
        write_out(out, local_purity(&e.0)?, "out")
    })
}

unsafe fn channel(ens: &CQEnsemble, w: *const f64, outputs: usize) -> Result<ClassicalChannel, Fail> {
    let rows = ens.labels();
    let data = slice(w, rows * outputs, "channel")?;
    Ok(ClassicalChannel::from_flat(rows, outputs, data.to_vec())?)
}

/// `I(Y;B) − μ I(Y;X)` for the row-major `|X| × outputs` channel `w`.
///
/// # Safety
/// `w` must hold `labels · outputs` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn purity_lagrangian_objective(
    ens: *const PurityEnsemble,
    w: *const f64,
    outputs: usize,
    mu: f64,
    out: *mut f64,
) -> PurityStatus {
    guarded(|| {
        let e = deref(ens, "ensemble")?;
        let ch = channel(&e.0, w, outputs)?;
        write_out(out, lagrangian_objective(&e.0, &ch, mu)?, "out")
    })
}

/// `I(Y;BE)` of the purified state and `I(Y;X)` for channel `w`.
///
/// # Safety
/// `w` must hold `labels · outputs` doubles; both outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn purity_cross_check(
    ens: *const PurityEnsemble,
    w: *const f64,
    outputs: usize,
    i_ybe: *mut f64,
    i_yx: *mut f64,
) -> PurityStatus {
    guarded(|| {
        let e = deref(ens, "ensemble")?;
        let ch = channel(&e.0, w, outputs)?;
        let (a, b) = cross_check_iybe(&e.0, &ch)?;
        write_out(i_ybe, a, "i_ybe")?;
        write_out(i_yx, b, "i_yx")
    })
}

/// Computes a P curve (`kind == 0`, multipliers in [0, 1]) or a D curve (`kind == 1`).
/// A null `opts` uses the defaults.
///
/// # Safety
/// `mus` must hold `count` doubles; `opts` must be null or valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn purity_curve_compute(
    ens: *const PurityEnsemble,
    kind: u32,
    mus: *const f64,
    count: usize,
    opts: *const PurityOptions,
    out: *mut *mut PurityCurve,
) -> PurityStatus {
    guarded(|| {
        let e = deref(ens, "ensemble")?;
        let grid = slice(mus, count, "mus")?;
        let o = match opts.as_ref() {
            Some(o) => options(o)?,
            None => options(&purity_options_default())?,
        };
        let curve = match kind {
            0 => compute_p_curve(&e.0, grid, &o)?,
            1 => compute_d_curve(&e.0, grid, &o)?,
            k => return Err(Fail(PurityStatus::InvalidArgument, format!("unknown curve kind {k}"))),
        };
        write_out(out, Box::into_raw(Box::new(PurityCurve(curve))), "out")
    })
}

/// # Safety
/// `curve` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn purity_curve_free(curve: *mut PurityCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// Number of optimized points, or 0 for a null handle.
///
/// # Safety
/// `curve` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn purity_curve_len(curve: *const PurityCurve) -> usize {
    curve.as_ref().map_or(0, |c| c.0.points.len())
}

/// Point `index` (sorted by rate): multiplier, rate and value.
///
/// # Safety
/// `curve` must be a live handle; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn purity_curve_point(
    curve: *const PurityCurve,
    index: usize,
    mu: *mut f64,
    rate: *mut f64,
    value: *mut f64,
) -> PurityStatus {
    guarded(|| {
        let c = deref(curve, "curve")?;
        let p = c
            .0
            .points
            .get(index)
            .ok_or_else(|| Fail(PurityStatus::InvalidArgument, format!("index {index} out of range")))?;
        write_out(mu, p.multiplier, "mu")?;
        write_out(rate, p.rate, "rate")?;
        write_out(value, p.value, "value")
    })
}

/// Envelope value at `rate`.
///
/// # Safety
/// `curve` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn purity_curve_eval(curve: *const PurityCurve, rate: f64, out: *mut f64) -> PurityStatus {
    guarded(|| {
        let c = deref(curve, "curve")?;
        if !rate.is_finite() {
            return Err(Fail(PurityStatus::InvalidArgument, "rate must be finite".into()));
        }
        write_out(out, c.0.at(rate), "out")
    })
}

/// Writes the points CSV into `buf` (NUL-terminated) and its length into `len`. If `cap` is
/// too small nothing is written except `len`, and `BufferTooSmall` is returned.
///
/// # Safety
/// `buf` must be null or hold `cap` bytes; `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn purity_curve_csv(
    curve: *const PurityCurve,
    buf: *mut c_char,
    cap: usize,
    len: *mut usize,
) -> PurityStatus {
    guarded(|| {
        let c = deref(curve, "curve")?;
        let text = io::format_curve_csv(&c.0);
        write_out(len, text.len(), "len")?;
        if buf.is_null() || cap < text.len() + 1 {
            return Err(Fail(PurityStatus::BufferTooSmall, format!("need {} bytes", text.len() + 1)));
        }
        std::ptr::copy_nonoverlapping(text.as_ptr(), buf as *mut u8, text.len());
        *buf.add(text.len()) = 0;
        Ok(())
    })
}

/// κ(ρ^X) + κ(ρ^B) + P(rate) with P read from a P curve of the same ensemble.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn purity_kappa_arrow(
    ens: *const PurityEnsemble,
    curve: *const PurityCurve,
    rate: f64,
    out: *mut f64,
) -> PurityStatus {
    guarded(|| {
        let e = deref(ens, "ensemble")?;
        let c = deref(curve, "curve")?;
        if c.0.kind != CurveKind::Purity {
            return Err(Fail(PurityStatus::InvalidArgument, "expected a P curve".into()));
        }
        write_out(out, kappa_arrow(&e.0, rate, &c.0)?, "out")
    })
}

/// Best `I(Y;B)` over grid channels with `I(Y;X) ≤ rate`.
///
/// # Safety
/// `ens` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn purity_oracle(
    ens: *const PurityEnsemble,
    rate: f64,
    outputs: usize,
    grid_step: f64,
    out: *mut f64,
) -> PurityStatus {
    guarded(|| {
        let e = deref(ens, "ensemble")?;
        write_out(out, brute_force_oracle(&e.0, rate, outputs, grid_step)?, "out")
    })
}

/// Exact probability that `n` i.i.d. draws from `p` are `delta`-typical.
///
/// # Safety
/// `p` must hold `k` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn purity_typical_probability(
    p: *const f64,
    k: usize,
    n: usize,
    delta: f64,
    out: *mut f64,
) -> PurityStatus {
    guarded(|| {
        let dist = ProbabilityDistribution::new(slice(p, k, "p")?.to_vec())?;
        write_out(out, typical_probability(&TypicalSetSpec::new(dist, n, delta)?)?, "out")
    })
}

/// Typical-subspace rate and mass of a `dim × dim` state given as (re, im) pairs.
///
/// # Safety
/// `state` must hold `2 · dim²` doubles; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn purity_typical_subspace(
    state: *const f64,
    dim: usize,
    n: usize,
    delta: f64,
    rate: *mut f64,
    mass: *mut f64,
) -> PurityStatus {
    guarded(|| {
        let raw = slice(state, 2 * dim * dim, "state")?;
        let entries: Vec<Complex64> = raw.chunks(2).map(|z| Complex64::new(z[0], z[1])).collect();
        let rho = DensityMatrix::from_row_major(dim, &entries)?;
        let (r, m) = typical_subspace_stats(&rho, n, delta)?;
        write_out(rate, r, "rate")?;
        write_out(mass, m, "mass")
    })
}

/// Point `(R, P)` of the uniform-ensemble closed form at parameter `lambda > 0`.
///
/// # Safety
/// Outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn purity_uniform_curve_point(lambda: f64, rate: *mut f64, value: *mut f64) -> PurityStatus {
    guarded(|| {
        let (r, p) = uniform_curve_point(UniformCurveParam::new(lambda)?)?;
        write_out(rate, r, "rate")?;
        write_out(value, p, "value")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn last_error() -> String {
        let mut buf = vec![0 as c_char; 256];
        let n = unsafe { purity_last_error(buf.as_mut_ptr(), buf.len()) };
        let s = unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap().to_string();
        assert_eq!(s.len(), n.min(255));
        s
    }

    #[test]
    fn null_pointers_are_reported() {
        let mut out = 0.0;
        assert_eq!(unsafe { purity_ensemble_holevo(ptr::null(), &mut out) }, PurityStatus::NullPointer);
        assert!(last_error().contains("ensemble"));
        assert_eq!(unsafe { purity_ensemble_bb84(0.3, ptr::null_mut()) }, PurityStatus::NullPointer);
        unsafe { purity_ensemble_free(ptr::null_mut()) };
        unsafe { purity_curve_free(ptr::null_mut()) };
        assert_eq!(unsafe { purity_ensemble_labels(ptr::null()) }, 0);
    }

    #[test]
    fn errors_map_to_statuses() {
        let mut ens = ptr::null_mut();
        assert_eq!(unsafe { purity_ensemble_bb84(3.0, &mut ens) }, PurityStatus::InvalidArgument);
        assert!(ens.is_null());
        let text = c"2 1\n0.5 1 0\n0.5 x 0\n";
        assert_eq!(unsafe { purity_ensemble_parse(text.as_ptr(), &mut ens) }, PurityStatus::ParseError);
        assert!(last_error().contains("line 3"));

        assert_eq!(unsafe { purity_ensemble_bb84(0.3, &mut ens) }, PurityStatus::Ok);
        let mut v = 0.0;
        assert_eq!(unsafe { purity_oracle(ens, 1.0, 6, 0.01, &mut v) }, PurityStatus::Guard);
        unsafe { purity_ensemble_free(ens) };
    }

    #[test]
    fn options_round_trip() {
        let d = purity_options_default();
        let o = options(&d).unwrap();
        assert_eq!(o, OptimizerOptions::default());
        assert!(options(&PurityOptions { method: 7, ..d }).is_err());
    }
}
