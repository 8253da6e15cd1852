//! C ABI over the `roughdep` solver and analytic helpers.
//!
//! Conventions:
//! - every fallible call returns an [`RdStatus`]; results go through out
//!   pointers, which are left untouched on failure;
//! - spectral fields cross the boundary as interleaved `(re, im)` doubles,
//!   `(2K+1)²` complex entries per component, row-major with `k₁` outer;
//! - a Reynolds number `≤ 0` or non-finite means inviscid;
//! - after a failure, [`rd_last_error_message`] describes it. The message
//!   is per thread and stays valid until the next failing call on that
//!   thread.
//!
//! Panics never unwind into C; they surface as [`RdStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_complex::Complex64;
use roughdep::growth::{fit_exponential, fit_power, fit_sqrt_exponential, FitOptions};
use roughdep::oracles::{dsigma_h3_norm, exact_family_lower_bound, ExactFamilyParams, SeriesNorm};
use roughdep::solver::{diagnostics, read_checkpoint, write_checkpoint, Solver};
use roughdep::theorem::translation_derivative_normsq_total;
use roughdep::{Error, Reynolds, SimulationState, SolverConfig, SpectralField};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Numerical = 3,
    Io = 4,
    Format = 5,
    DegenerateFit = 6,
    Panic = 99,
}

/// Growth law selector for [`rd_fit`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RdModel {
    /// `y = A e^{σ√x}`
    SqrtExp = 0,
    /// `y = A e^{λx}`
    Exp = 1,
    /// `y = C x^p`
    Power = 2,
}

/// Flow diagnostics of the current solver state.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RdDiagnostics {
    pub time: f64,
    pub energy: f64,
    pub enstrophy: f64,
    pub palinstrophy: f64,
    /// Velocity Sobolev norms of index 0 through 4.
    pub velocity_norms: [f64; 5],
}

/// Parameters and statistics of a log-domain least-squares fit.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RdFit {
    /// `σ`, `λ` or `p`.
    pub rate: f64,
    /// `A` or `C`.
    pub scale: f64,
    pub residual: f64,
    pub rate_stderr: f64,
}

/// Opaque vorticity solver: configuration plus current state.
pub struct RdSolver {
    solver: Solver,
    state: SimulationState,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(RdStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Numerical { .. } => RdStatus::Numerical,
            Error::Io(_) => RdStatus::Io,
            Error::Format(_) => RdStatus::Format,
            Error::DegenerateFit(_) => RdStatus::DegenerateFit,
            _ => RdStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(RdStatus::InvalidArgument, msg.into())
}

fn null(what: &str) -> Failure {
    Failure(RdStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> RdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RdStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("panic: {msg}"));
            RdStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn deref_mut<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn path_arg(p: *const c_char) -> Result<String, Failure> {
    if p.is_null() {
        return Err(null("path"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map(str::to_owned)
        .map_err(|_| invalid("path is not valid UTF-8"))
}

fn modes(k_max: usize) -> usize {
    (2 * k_max + 1) * (2 * k_max + 1)
}

unsafe fn read_field(
    data: *const f64,
    len: usize,
    k_max: usize,
    components: usize,
) -> Result<SpectralField, Failure> {
    if data.is_null() {
        return Err(null("coefficients"));
    }
    let m = modes(k_max);
    if len != 2 * m * components {
        return Err(invalid(format!(
            "expected {} doubles for K={k_max} with {components} component(s), got {len}",
            2 * m * components
        )));
    }
    let raw = std::slice::from_raw_parts(data, len);
    let comps = raw
        .chunks_exact(2 * m)
        .map(|c| c.chunks_exact(2).map(|z| Complex64::new(z[0], z[1])).collect())
        .collect();
    let f = SpectralField::from_components(k_max, comps)?;
    if !f.is_finite() {
        return Err(invalid("coefficients are not finite"));
    }
    let tol = 1e-12 * f.max_abs().max(1.0);
    if f.reality_defect() > tol {
        return Err(invalid(format!(
            "coefficients violate conjugate symmetry by {:e}",
            f.reality_defect()
        )));
    }
    Ok(f)
}

/// Number of doubles holding one scalar field at truncation `k_max`.
#[no_mangle]
pub extern "C" fn rd_field_len(k_max: usize) -> usize {
    2 * modes(k_max)
}

/// Creates a solver at rest (zero vorticity) at `t = 0`.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn rd_solver_new(
    k_max: usize,
    reynolds: f64,
    dt: f64,
    mean_u1: f64,
    mean_u2: f64,
    out: *mut *mut RdSolver,
) -> RdStatus {
    guard(|| {
        let out = deref_mut(out, "out")?;
        if k_max == 0 {
            return Err(invalid("truncation must be at least 1"));
        }
        if !(mean_u1.is_finite() && mean_u2.is_finite()) {
            return Err(invalid("mean flow must be finite"));
        }
        let cfg = SolverConfig::new(k_max, Reynolds::from_f64(reynolds), dt, 0.0)
            .with_mean_flow([mean_u1, mean_u2]);
        cfg.validate()?;
        let solver = Solver::new(cfg)?;
        let state = SimulationState::new(SpectralField::zeros_scalar(k_max));
        *out = Box::into_raw(Box::new(RdSolver { solver, state }));
        Ok(())
    })
}

/// Releases a solver. Null is ignored.
///
/// # Safety
/// `solver` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rd_solver_free(solver: *mut RdSolver) {
    if !solver.is_null() {
        drop(Box::from_raw(solver));
    }
}

/// Replaces the vorticity; time and step count are kept.
///
/// # Safety
/// `solver` must be a live handle; `data` must point to `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn rd_solver_set_vorticity(
    solver: *mut RdSolver,
    data: *const f64,
    len: usize,
) -> RdStatus {
    guard(|| {
        let s = deref_mut(solver, "solver")?;
        let w = read_field(data, len, s.solver.config().k_max, 1)?;
        let mean = w.mean()[0];
        if mean != 0.0 {
            return Err(Error::NonzeroMeanVorticity(mean).into());
        }
        s.state.omega = w;
        Ok(())
    })
}

/// Copies the vorticity into `out`, which holds `len` doubles.
///
/// # Safety
/// `solver` must be a live handle; `out` must be valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn rd_solver_get_vorticity(
    solver: *const RdSolver,
    out: *mut f64,
    len: usize,
) -> RdStatus {
    guard(|| {
        let s = deref(solver, "solver")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let coeffs = s.state.omega.component(0);
        if len != 2 * coeffs.len() {
            return Err(invalid(format!("expected {} doubles, got {len}", 2 * coeffs.len())));
        }
        let dst = std::slice::from_raw_parts_mut(out, len);
        for (z, pair) in coeffs.iter().zip(dst.chunks_exact_mut(2)) {
            pair[0] = z.re;
            pair[1] = z.im;
        }
        Ok(())
    })
}

/// Advances `n_steps` steps of the configured size. On a numerical failure
/// the state is left at the last good step.
///
/// # Safety
/// `solver` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn rd_solver_step(solver: *mut RdSolver, n_steps: usize) -> RdStatus {
    guard(|| {
        let s = deref_mut(solver, "solver")?;
        for _ in 0..n_steps {
            let mut next = s.state.clone();
            s.solver.step(&mut next)?;
            s.state = next;
        }
        Ok(())
    })
}

/// Current time, or NaN for a null handle.
///
/// # Safety
/// `solver` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rd_solver_time(solver: *const RdSolver) -> f64 {
    solver.as_ref().map_or(f64::NAN, |s| s.state.t)
}

/// # Safety
/// `solver` must be a live handle; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn rd_solver_diagnostics(
    solver: *const RdSolver,
    out: *mut RdDiagnostics,
) -> RdStatus {
    guard(|| {
        let s = deref(solver, "solver")?;
        let out = deref_mut(out, "out")?;
        let d = diagnostics(&s.state, s.solver.config().mean_flow)?;
        *out = RdDiagnostics {
            time: s.state.t,
            energy: d.energy,
            enstrophy: d.enstrophy,
            palinstrophy: d.palinstrophy,
            velocity_norms: d.velocity_norms,
        };
        Ok(())
    })
}

/// Writes the current state as a binary checkpoint.
///
/// # Safety
/// `solver` must be a live handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn rd_solver_write_checkpoint(
    solver: *const RdSolver,
    path: *const c_char,
) -> RdStatus {
    guard(|| {
        let s = deref(solver, "solver")?;
        let path = path_arg(path)?;
        let mut w = BufWriter::new(File::create(&path).map_err(Error::from)?);
        write_checkpoint(&mut w, &s.state, s.solver.config().reynolds)?;
        w.flush().map_err(Error::from)?;
        Ok(())
    })
}

/// Creates a solver from a checkpoint, which fixes `K`, Re and the time.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` valid for one pointer.
#[no_mangle]
pub unsafe extern "C" fn rd_solver_from_checkpoint(
    path: *const c_char,
    dt: f64,
    mean_u1: f64,
    mean_u2: f64,
    out: *mut *mut RdSolver,
) -> RdStatus {
    guard(|| {
        let path = path_arg(path)?;
        let out = deref_mut(out, "out")?;
        let r = BufReader::new(File::open(&path).map_err(Error::from)?);
        let (state, reynolds) = read_checkpoint(r)?;
        let cfg = SolverConfig::new(state.omega.k_max(), reynolds, dt, 0.0)
            .with_mean_flow([mean_u1, mean_u2]);
        cfg.validate()?;
        let solver = Solver::new(cfg)?;
        *out = Box::into_raw(Box::new(RdSolver { solver, state }));
        Ok(())
    })
}

/// Sobolev norm `‖f‖ₙ` of a field with `components` (1 or 2) components.
///
/// # Safety
/// `data` must point to `len` doubles; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn rd_sobolev_norm(
    data: *const f64,
    len: usize,
    k_max: usize,
    components: usize,
    n: u32,
    out: *mut f64,
) -> RdStatus {
    guard(|| {
        let out = deref_mut(out, "out")?;
        if !(1..=2).contains(&components) {
            return Err(invalid("components must be 1 or 2"));
        }
        *out = read_field(data, len, k_max, components)?.sobolev_norm(n);
        Ok(())
    })
}

/// Closed-form squared `Hⁿ` norm of the translation derivative, summed
/// over both axes, for a velocity field (2 components).
///
/// # Safety
/// `data` must point to `len` doubles; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn rd_translation_derivative_normsq(
    data: *const f64,
    len: usize,
    k_max: usize,
    n: u32,
    t: f64,
    out: *mut f64,
) -> RdStatus {
    guard(|| {
        let out = deref_mut(out, "out")?;
        let u = read_field(data, len, k_max, 2)?;
        *out = translation_derivative_normsq_total(&u, n, t)?;
        Ok(())
    })
}

/// Lower bound on the `H³` norm of the σ-derivative of the exact family;
/// requires finite Re and `t > 0`.
///
/// # Safety
/// `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn rd_exact_family_lower_bound(
    gamma: f64,
    t: f64,
    reynolds: f64,
    out: *mut f64,
) -> RdStatus {
    guard(|| {
        let out = deref_mut(out, "out")?;
        *out = exact_family_lower_bound(gamma, t, Reynolds::from_f64(reynolds))?;
        Ok(())
    })
}

/// `H³` norm of the σ-derivative of the exact family. When the series
/// diverges, `*divergent` is set to 1 and `*out` to infinity.
///
/// # Safety
/// `out` and `divergent` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn rd_dsigma_h3_norm(
    gamma: f64,
    sigma: f64,
    reynolds: f64,
    t: f64,
    out: *mut f64,
    divergent: *mut i32,
) -> RdStatus {
    guard(|| {
        let out = deref_mut(out, "out")?;
        let divergent = deref_mut(divergent, "divergent")?;
        let p = ExactFamilyParams::new(gamma, sigma, Reynolds::from_f64(reynolds), 1)?;
        match dsigma_h3_norm(&p, t)? {
            SeriesNorm::Finite { value, .. } => {
                *out = value;
                *divergent = 0;
            }
            SeriesNorm::Divergent => {
                *out = f64::INFINITY;
                *divergent = 1;
            }
        }
        Ok(())
    })
}

/// Least-squares fit of `n` samples `(x[i], y[i])` to `model`.
///
/// # Safety
/// `x` and `y` must point to `n` doubles; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn rd_fit(
    model: RdModel,
    x: *const f64,
    y: *const f64,
    n: usize,
    out: *mut RdFit,
) -> RdStatus {
    guard(|| {
        let out = deref_mut(out, "out")?;
        if x.is_null() || y.is_null() {
            return Err(null("samples"));
        }
        let xs = std::slice::from_raw_parts(x, n);
        let ys = std::slice::from_raw_parts(y, n);
        let samples: Vec<(f64, f64)> = xs.iter().copied().zip(ys.iter().copied()).collect();
        let fit = match model {
            RdModel::SqrtExp => fit_sqrt_exponential(&samples, FitOptions::default()),
            RdModel::Exp => fit_exponential(&samples, FitOptions::default()),
            RdModel::Power => fit_power(&samples),
        }?;
        *out = RdFit {
            rate: fit.rate(),
            scale: fit.scale(),
            residual: fit.residual,
            rate_stderr: fit.rate_stderr,
        };
        Ok(())
    })
}

/// Message of the last failure on this thread; empty if none. Owned by
/// the library.
#[no_mangle]
pub extern "C" fn rd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
