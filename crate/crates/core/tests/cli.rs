use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lagrangian1d"))
}

#[test]
fn run_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let status = bin()
        .args(["run", "--problem", "sod", "--method", "sgh", "--cells", "40", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(0), "{}", String::from_utf8_lossy(&status.stderr));
    for ext in ["csv", "nodes", "summary", "timing"] {
        assert!(dir.path().join(format!("sod_sgh_40.{ext}")).exists(), "{ext}");
    }
    let csv = std::fs::read_to_string(dir.path().join("sod_sgh_40.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("x,rho,u,p,eps,e_total"));
    assert_eq!(csv.lines().count(), 41);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "problem = \"lax\"\nmethod = \"sgh\"\nn_cells = 30\nt_end = 0.01\n").unwrap();
    let out = bin()
        .args(["run", "--method", "cch", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = std::fs::read_to_string(dir.path().join("lax_cch_30.summary")).unwrap();
    assert!(summary.contains("final_time=0.01\n"));
}

#[test]
fn config_errors_exit_3() {
    for args in [
        vec!["run", "--problem", "nowhere", "--method", "sgh"],
        vec!["run", "--problem", "sod", "--method", "sgh", "--cfl", "1.5"],
        vec!["run", "--problem", "sod", "--method", "sgh", "--cells", "1"],
        vec!["run", "--method", "sgh"],
        vec!["run", "--no-such-flag"],
        vec!["reference", "--problem", "sod", "--t", "5", "--out", "x.csv"],
    ] {
        let out = bin().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(3), "{args:?}");
    }
}

#[test]
fn solver_failure_exits_2() {
    // A tiny step cap turns an ordinary run into a step-collapse failure.
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "problem = \"sod\"\nmax_steps = 3\n").unwrap();
    let out = bin().args(["run", "--config"]).arg(&cfg).arg("--out").arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn converge_and_reference() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["converge", "--problem", "sod", "--method", "sgh", "--cells", "20,40", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let table = std::fs::read_to_string(dir.path().join("sod_sgh_convergence.csv")).unwrap();
    assert_eq!(table.lines().count(), 4);
    assert!(table.lines().last().unwrap().starts_with("order,"));

    let file = dir.path().join("ref.csv");
    let out = bin().args(["reference", "--problem", "sod", "--t", "0.2", "--points", "10", "--out"]).arg(&file).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&file).unwrap().lines().count(), 11);
}
