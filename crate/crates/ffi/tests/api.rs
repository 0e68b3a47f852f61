use std::ffi::{c_char, CString};
use std::ptr;

use lagrangian1d_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0u8; 256];
    let n = unsafe { l1d_last_error_message(buf.as_mut_ptr() as *mut c_char, buf.len()) };
    buf.truncate(n.min(255));
    String::from_utf8(buf).unwrap()
}

fn new_sim(problem: &str, method: &str, n: usize) -> Result<*mut L1dSimulation, L1dStatus> {
    let (p, m) = (CString::new(problem).unwrap(), CString::new(method).unwrap());
    let mut sim = ptr::null_mut();
    match unsafe { l1d_simulation_new(p.as_ptr(), m.as_ptr(), n, &mut sim) } {
        L1dStatus::Ok => Ok(sim),
        s => Err(s),
    }
}

fn field(sim: *const L1dSimulation, name: &str) -> Vec<f64> {
    let name = CString::new(name).unwrap();
    let mut n = 0;
    let status = unsafe { l1d_simulation_copy_field(sim, name.as_ptr(), ptr::null_mut(), 0, &mut n) };
    assert!(status == L1dStatus::BufferTooSmall || n == 0);
    let mut buf = vec![0.0; n];
    let status = unsafe { l1d_simulation_copy_field(sim, name.as_ptr(), buf.as_mut_ptr(), n, &mut n) };
    assert_eq!(status, L1dStatus::Ok, "{}", last_error());
    buf
}

#[test]
fn sod_run_through_the_c_interface() {
    let sim = new_sim("sod", "sgh", 50).unwrap();
    unsafe {
        assert_eq!(l1d_simulation_n_cells(sim), 50);
        let mut before = L1dTotals::default();
        assert_eq!(l1d_simulation_totals(sim, &mut before), L1dStatus::Ok);
        let mut dt = 0.0;
        assert_eq!(l1d_simulation_step(sim, 0.2, &mut dt), L1dStatus::Ok);
        assert!(dt > 0.0 && l1d_simulation_time(sim) == dt);
        assert_eq!(l1d_simulation_run(sim), L1dStatus::Ok);
        assert_eq!(l1d_simulation_time(sim), 0.2);
        assert!(l1d_simulation_steps(sim) > 1);
        let mut after = L1dTotals::default();
        l1d_simulation_totals(sim, &mut after);
        assert_eq!(after.mass, before.mass);
    }
    assert_eq!(field(sim, "rho").len(), 50);
    assert_eq!(field(sim, "node_u").len(), 51);
    let x = field(sim, "node_x");
    assert!(x.windows(2).all(|w| w[1] > w[0]));
    unsafe { l1d_simulation_free(sim) };
}

#[test]
fn errors_map_to_status_codes() {
    assert_eq!(new_sim("nowhere", "sgh", 50), Err(L1dStatus::InvalidConfig));
    assert!(last_error().contains("nowhere"));
    assert_eq!(new_sim("sod", "ale", 50), Err(L1dStatus::InvalidConfig));
    assert_eq!(new_sim("sod", "cch", 1), Err(L1dStatus::InvalidConfig));
    unsafe {
        assert_eq!(l1d_simulation_run(ptr::null_mut()), L1dStatus::NullPointer);
        assert!(l1d_simulation_time(ptr::null()).is_nan());
        l1d_simulation_free(ptr::null_mut());
    }

    let sim = new_sim("sod", "cch", 20).unwrap();
    let name = CString::new("node_u").unwrap();
    let mut buf = [0.0; 64];
    let status = unsafe { l1d_simulation_copy_field(sim, name.as_ptr(), buf.as_mut_ptr(), 64, ptr::null_mut()) };
    assert_eq!(status, L1dStatus::InvalidConfig);
    let name = CString::new("rho").unwrap();
    let mut n = 0;
    let status = unsafe { l1d_simulation_copy_field(sim, name.as_ptr(), buf.as_mut_ptr(), 5, &mut n) };
    assert_eq!((status, n), (L1dStatus::BufferTooSmall, 20));
    unsafe { l1d_simulation_free(sim) };
}

#[test]
fn solver_failure_status() {
    let text = CString::new("problem = \"sod\"\nmax_steps = 2\n").unwrap();
    let mut sim = ptr::null_mut();
    unsafe {
        assert_eq!(l1d_simulation_new_from_toml(text.as_ptr(), &mut sim), L1dStatus::Ok);
        assert_eq!(l1d_simulation_run(sim), L1dStatus::SolverFailure);
        assert!(last_error().contains("collapse"), "{}", last_error());
        l1d_simulation_free(sim);
    }
    let bad = CString::new("problem = \"sod\"\ncfl = 3.0\n").unwrap();
    unsafe {
        assert_eq!(l1d_simulation_new_from_toml(bad.as_ptr(), &mut sim), L1dStatus::InvalidConfig);
    }
}

#[test]
fn error_message_truncates() {
    let _ = new_sim("a-problem-with-a-long-name", "sgh", 10);
    let mut small = [1 as c_char; 8];
    let n = unsafe { l1d_last_error_message(small.as_mut_ptr(), small.len()) };
    assert!(n > 8);
    assert_eq!(small[7], 0);
}

#[test]
fn riemann_star_values() {
    let (mut p, mut u, mut vac) = (0.0, 0.0, true);
    unsafe {
        assert_eq!(l1d_riemann_star(1.0, 0.0, 1.0, 0.125, 0.0, 0.1, 1.4, &mut p, &mut u, &mut vac), L1dStatus::Ok);
    }
    assert!((p - 0.30313).abs() < 1e-5 && (u - 0.92745).abs() < 1e-5 && !vac);
    unsafe {
        assert_eq!(l1d_riemann_star(1.0, -5.0, 0.4, 1.0, 5.0, 0.4, 1.4, &mut p, &mut u, &mut vac), L1dStatus::Ok);
        assert!(vac);
        assert_eq!(
            l1d_riemann_star(-1.0, 0.0, 1.0, 1.0, 0.0, 1.0, 1.4, &mut p, &mut u, ptr::null_mut()),
            L1dStatus::InvalidConfig
        );
    }
}

#[test]
fn header_declares_the_interface() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/lagrangian1d.h")).unwrap();
    for name in [
        "l1d_simulation_new",
        "l1d_simulation_new_from_toml",
        "l1d_simulation_free",
        "l1d_simulation_step",
        "l1d_simulation_run",
        "l1d_simulation_copy_field",
        "l1d_last_error_message",
        "l1d_riemann_star",
        "L1D_STATUS_SOLVER_FAILURE = 2",
        "typedef struct L1dSimulation L1dSimulation",
    ] {
        assert!(header.contains(name), "{name}");
    }
}
