//! The `egl` binary: outputs, resolved configs, replay and exit codes.

use std::path::Path;
use std::process::Command;

fn egl(out: &Path, args: &[&str]) -> (i32, String, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_egl")).args(args).arg("--out").arg(out).output().unwrap();
    (o.status.code().unwrap_or(-1), String::from_utf8_lossy(&o.stdout).into(), String::from_utf8_lossy(&o.stderr).into())
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn var_count_disk_example() {
    let d = tempfile::tempdir().unwrap();
    let (code, _, err) = egl(d.path(), &["var-count", "--tau", "0", "--n", "64", "--region", "disk:0.4"]);
    assert_eq!(code, 0, "{err}");
    let r = json(&d.path().join("var-count.json"));
    let v = r["exact_value"].as_f64().unwrap();
    assert!((v - 1.7942831972957).abs() < 1e-9, "{v}");
    assert_eq!(r["regime"], "bulk");
    assert!(r["relative_gap"].as_f64().unwrap() < 0.01);
    let cfg = json(&d.path().join("var-count.config.json"));
    assert_eq!(cfg["command"]["subcommand"], "var-count");
    assert_eq!(cfg["resolved"]["region"]["kind"], "disk");
}

#[test]
fn config_replay_reproduces_outputs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let (code, _, _) = egl(a.path(), &["sample", "--n", "5", "--tau", "0.4", "--seed", "3", "--count", "4"]);
    assert_eq!(code, 0);
    let cfg = a.path().join("sample.config.json");
    let (code, _, _) = egl(b.path(), &["--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (x, y) = (std::fs::read(a.path().join("sample.csv")).unwrap(), std::fs::read(b.path().join("sample.csv")).unwrap());
    assert_eq!(x, y);
    assert!(x.starts_with(b"re,im,sample_index\n"));
    assert_eq!(String::from_utf8(x).unwrap().lines().count(), 1 + 5 * 4);
}

#[test]
fn grids_and_regions_in_outputs() {
    let d = tempfile::tempdir().unwrap();
    let (code, _, err) = egl(d.path(), &["density", "--n", "8", "--tau", "0.3", "--x-grid", "-1:1:5", "--y-grid", "0:0.5:2"]);
    assert_eq!(code, 0, "{err}");
    let csv = std::fs::read_to_string(d.path().join("density.csv")).unwrap();
    assert!(csv.starts_with("x,y,density,limit\n"));
    assert_eq!(csv.lines().count(), 1 + 10);
    let (code, _, err) = egl(
        d.path(),
        &["entropy", "--n", "32", "--tau", "0.5", "--region", r#"{"kind":"square","half_side":0.3}"#, "--q", "2"],
    );
    assert_eq!(code, 0, "{err}");
    let e = json(&d.path().join("entropy.json"));
    assert_eq!(e["renyi"][0]["holds"], true);
}

#[test]
fn kernel_eval_and_smooth_variance() {
    let d = tempfile::tempdir().unwrap();
    let (code, _, err) = egl(d.path(), &["kernel-eval", "--n", "8", "--tau", "0.5", "--z", "0.5,0", "--w", "0.5,0"]);
    assert_eq!(code, 0, "{err}");
    let k = json(&d.path().join("kernel-eval.json"));
    assert!((k["re"].as_f64().unwrap() - 3.3886029241669891317).abs() < 1e-10);
    let (code, _, err) = egl(d.path(), &["var-smooth", "--n", "16", "--tau", "0.5", "--f", "re"]);
    assert_eq!(code, 0, "{err}");
    let v = json(&d.path().join("var-smooth.json"));
    assert!((v["exact_value"].as_f64().unwrap() - 0.75).abs() < 1e-8);
    assert_eq!(v["regime"], "fixed-tau");
}

#[test]
fn tabulated_sweeps() {
    let d = tempfile::tempdir().unwrap();
    let (code, _, err) = egl(d.path(), &["outside-decay", "--a", "1.2", "--n-list", "30,50"]);
    assert_eq!(code, 0, "{err}");
    let csv = std::fs::read_to_string(d.path().join("outside-decay.csv")).unwrap();
    assert!(csv.starts_with("n,exact,log_exact,formula,leading\n"));
    let (code, _, err) = egl(d.path(), &["edge-profile", "--n", "32", "--s-grid", "-1:1:3"]);
    assert_eq!(code, 0, "{err}");
    let (code, _, err) = egl(d.path(), &["phase-diagram", "--n", "32", "--alpha-grid", "0.5", "--gamma-grid", "0.3:0.5:2"]);
    assert_eq!(code, 0, "{err}");
    let csv = std::fs::read_to_string(d.path().join("phase-diagram.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[1].contains("GUE") && rows[2].contains("TRANSITION"));
}

#[test]
fn selftest_passes() {
    let d = tempfile::tempdir().unwrap();
    let (code, out, _) = egl(d.path(), &["selftest"]);
    assert_eq!(code, 0, "{out}");
    assert!(!out.contains("FAIL"));
}

#[test]
fn exit_codes() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(egl(d.path(), &["var-count", "--n", "16", "--region", "disk:-1"]).0, 1);
    assert_eq!(egl(d.path(), &["density", "--n", "8", "--x-grid", "0:1"]).0, 1);
    assert_eq!(egl(d.path(), &["no-such-command"]).0, 1);
    assert_eq!(egl(d.path(), &["clt-check", "--count", "10", "--n", "8"]).0, 1);
    // a convergence budget that cannot be met
    assert_eq!(egl(d.path(), &["var-smooth", "--n", "64", "--tau", "0.5", "--f", "re", "--tol", "1e-300"]).0, 2);
    let o = Command::new(env!("CARGO_BIN_EXE_egl")).env("EGL_THREADS", "0").arg("selftest").arg("--out").arg(d.path()).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
}
