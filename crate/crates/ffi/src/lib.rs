//! C interface.
//!
//! Every function returns an [`L1dStatus`]; on anything but `L1D_STATUS_OK`
//! the message is available from [`l1d_last_error_message`] on the same
//! thread. Simulations are opaque handles created by `l1d_simulation_new*`
//! and released with [`l1d_simulation_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use lagrangian1d::config::FileConfig;
use lagrangian1d::driver::{Method, RunConfig, Simulation};
use lagrangian1d::riemann::{exact_riemann_star, Primitive};
use lagrangian1d::{HydroError, ProblemSpec};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum L1dStatus {
    Ok = 0,
    NullPointer = 1,
    /// The integration failed (positivity loss, tangling, step collapse).
    SolverFailure = 2,
    InvalidConfig = 3,
    BufferTooSmall = 4,
    Panic = 5,
    Io = 6,
}

/// Conserved totals over the whole domain.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct L1dTotals {
    pub mass: f64,
    pub momentum: f64,
    pub energy: f64,
}

/// Opaque simulation handle.
pub struct L1dSimulation {
    sim: Simulation,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn status_of(err: &HydroError) -> L1dStatus {
    if err.is_solver_failure() {
        L1dStatus::SolverFailure
    } else if matches!(err, HydroError::Io(_)) {
        L1dStatus::Io
    } else {
        L1dStatus::InvalidConfig
    }
}

struct Fail(L1dStatus, String);

impl From<HydroError> for Fail {
    fn from(e: HydroError) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(L1dStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, turning errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> L1dStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            L1dStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            L1dStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(L1dStatus::InvalidConfig, format!("{what} is not UTF-8")))
}

unsafe fn sim_ref<'a>(p: *const L1dSimulation) -> Result<&'a L1dSimulation, Fail> {
    p.as_ref().ok_or_else(|| null("simulation"))
}

unsafe fn sim_mut<'a>(p: *mut L1dSimulation) -> Result<&'a mut L1dSimulation, Fail> {
    p.as_mut().ok_or_else(|| null("simulation"))
}

unsafe fn publish(cfg: RunConfig, out: *mut *mut L1dSimulation) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    let sim = Simulation::new(cfg)?;
    *out = Box::into_raw(Box::new(L1dSimulation { sim }));
    Ok(())
}

/// Copies the last error message of this thread into `buf` (NUL
/// terminated, truncated to `len`). Returns the full message length
/// without the terminator.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn l1d_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr(), buf as *mut u8, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Creates a simulation of a named benchmark with default settings.
///
/// # Safety
/// `problem` and `method` must be NUL-terminated strings, `out` a valid
/// pointer. On success `*out` owns a handle to release with
/// [`l1d_simulation_free`].
#[no_mangle]
pub unsafe extern "C" fn l1d_simulation_new(
    problem: *const c_char,
    method: *const c_char,
    n_cells: usize,
    out: *mut *mut L1dSimulation,
) -> L1dStatus {
    guard(|| {
        let problem = ProblemSpec::named(str_arg(problem, "problem")?)?;
        let method: Method = str_arg(method, "method")?.parse()?;
        let cfg = RunConfig::new(problem, method, n_cells);
        cfg.validate()?;
        publish(cfg, out)
    })
}

/// Creates a simulation from TOML run-configuration text.
///
/// # Safety
/// As for [`l1d_simulation_new`].
#[no_mangle]
pub unsafe extern "C" fn l1d_simulation_new_from_toml(
    text: *const c_char,
    out: *mut *mut L1dSimulation,
) -> L1dStatus {
    guard(|| {
        let cfg = FileConfig::parse(str_arg(text, "text")?)?.into_run_config()?;
        publish(cfg, out)
    })
}

/// # Safety
/// `sim` must be null or a handle from `l1d_simulation_new*` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn l1d_simulation_free(sim: *mut L1dSimulation) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

/// Takes one time step that does not pass `t_stop`; the step size goes to
/// `dt_out` when it is not null.
///
/// # Safety
/// `sim` must be a live handle; `dt_out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn l1d_simulation_step(sim: *mut L1dSimulation, t_stop: f64, dt_out: *mut f64) -> L1dStatus {
    guard(|| {
        let dt = sim_mut(sim)?.sim.step(t_stop)?;
        if !dt_out.is_null() {
            *dt_out = dt;
        }
        Ok(())
    })
}

/// Integrates up to time `t`.
///
/// # Safety
/// `sim` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn l1d_simulation_advance_to(sim: *mut L1dSimulation, t: f64) -> L1dStatus {
    guard(|| Ok(sim_mut(sim)?.sim.advance_to(t)?))
}

/// Integrates to the configured end time.
///
/// # Safety
/// `sim` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn l1d_simulation_run(sim: *mut L1dSimulation) -> L1dStatus {
    guard(|| {
        let s = sim_mut(sim)?;
        let t = s.sim.config().t_end();
        Ok(s.sim.advance_to(t)?)
    })
}

/// Current time, or NaN for a null handle.
///
/// # Safety
/// `sim` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn l1d_simulation_time(sim: *const L1dSimulation) -> f64 {
    sim.as_ref().map_or(f64::NAN, |s| s.sim.time())
}

/// Number of cells, or 0 for a null handle.
///
/// # Safety
/// `sim` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn l1d_simulation_n_cells(sim: *const L1dSimulation) -> usize {
    sim.as_ref().map_or(0, |s| s.sim.mesh().n_cells())
}

/// Steps taken so far, or 0 for a null handle.
///
/// # Safety
/// `sim` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn l1d_simulation_steps(sim: *const L1dSimulation) -> usize {
    sim.as_ref().map_or(0, |s| s.sim.steps())
}

/// # Safety
/// `sim` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn l1d_simulation_totals(sim: *const L1dSimulation, out: *mut L1dTotals) -> L1dStatus {
    guard(|| {
        let t = sim_ref(sim)?.sim.totals();
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = L1dTotals { mass: t.mass, momentum: t.momentum, energy: t.energy };
        Ok(())
    })
}

/// Copies a field into `buf`.
///
/// Cell fields: `x` (centers), `rho`, `u`, `p`, `eps`, `e_total`. Node
/// fields: `node_x`, and `node_u` for staggered runs. `*written` receives
/// the field length, also when `buf` is too small.
///
/// # Safety
/// `sim` must be a live handle, `name` a NUL-terminated string, `buf`
/// null or `len` writable doubles, `written` null or writable.
#[no_mangle]
pub unsafe extern "C" fn l1d_simulation_copy_field(
    sim: *const L1dSimulation,
    name: *const c_char,
    buf: *mut f64,
    len: usize,
    written: *mut usize,
) -> L1dStatus {
    guard(|| {
        let s = &sim_ref(sim)?.sim;
        let name = str_arg(name, "name")?;
        let profile;
        let data: &[f64] = match name {
            "node_x" => &s.mesh().node_x,
            "node_u" => s
                .node_velocities()
                .ok_or_else(|| Fail(L1dStatus::InvalidConfig, "node_u exists only for sgh runs".into()))?,
            _ => {
                profile = s.profile();
                profile
                    .field(name)
                    .ok_or_else(|| Fail(L1dStatus::InvalidConfig, format!("unknown field '{name}'")))?
            }
        };
        if !written.is_null() {
            *written = data.len();
        }
        if len < data.len() {
            return Err(Fail(L1dStatus::BufferTooSmall, format!("field {name} needs {} values, got {len}", data.len())));
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        std::ptr::copy_nonoverlapping(data.as_ptr(), buf, data.len());
        Ok(())
    })
}

/// Star pressure and velocity of the exact Riemann problem. When the data
/// generate vacuum, `*vacuum` is set and both star values are zero.
///
/// # Safety
/// `p_star` and `u_star` must be writable, `vacuum` null or writable.
#[no_mangle]
pub unsafe extern "C" fn l1d_riemann_star(
    rho_l: f64,
    u_l: f64,
    p_l: f64,
    rho_r: f64,
    u_r: f64,
    p_r: f64,
    gamma: f64,
    p_star: *mut f64,
    u_star: *mut f64,
    vacuum: *mut bool,
) -> L1dStatus {
    guard(|| {
        if p_star.is_null() || u_star.is_null() {
            return Err(null("output"));
        }
        let l = Primitive { rho: rho_l, u: u_l, p: p_l };
        let r = Primitive { rho: rho_r, u: u_r, p: p_r };
        let s = exact_riemann_star(&l, &r, gamma)?;
        *p_star = s.p;
        *u_star = s.u;
        if !vacuum.is_null() {
            *vacuum = s.vacuum;
        }
        Ok(())
    })
}
