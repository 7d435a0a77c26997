use std::path::Path;
use std::process::{Command, Output};

use fornberg_whitham::io::Manifest;

fn fw(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fw"))
        .arg("--out-dir")
        .arg(dir)
        .args(args)
        .env_remove("FW_SEED")
        .output()
        .expect("fw runs")
}

fn manifest(dir: &Path) -> Manifest {
    serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn profile_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("run1");
    let out = fw(&dir, &["profile", "--c", "1.2", "--k", "0"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.join("profile.csv")).unwrap();
    assert!(csv.starts_with("x,phi,phi_x\n"));
    assert_eq!(csv.lines().count(), 4098);
    let meta = json(&dir.join("profile.meta.json"));
    for key in ["c", "k", "alpha", "beta", "phi_max", "half_width", "n", "res1", "res2"] {
        assert!(meta.get(key).is_some(), "missing {key}");
    }
    let pot = json(&dir.join("potential.meta.json"));
    assert_eq!(pot["phi1"].as_f64().unwrap(), 0.0);
    let m = manifest(&dir);
    assert!(m.verify(&dir).is_empty());
    let files: Vec<_> = m.artifacts.iter().map(|a| a.file.as_str()).collect();
    assert!(files.contains(&"profile.csv") && files.contains(&"potential.csv"));
}

#[test]
fn speed_below_one_is_a_validation_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = fw(tmp.path(), &["profile", "--c", "0.9"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("(1, 4/3)"), "{err}");
    assert_eq!(err.trim().lines().count(), 1);
}

#[test]
fn critical_speed_command() {
    let tmp = tempfile::tempdir().unwrap();
    let out = fw(tmp.path(), &["find-c0"]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.starts_with("c0 = 1.33332"), "{stdout}");
    let c0 = json(&tmp.path().join("c0.json"));
    assert!((c0["c0"].as_f64().unwrap() - 1.333_328_9).abs() < 1e-6);
    for key in ["bracket_lo", "bracket_hi", "iterations", "residual"] {
        assert!(c0.get(key).is_some());
    }
}

#[test]
fn sweep_rows_are_ordered_and_stable() {
    let tmp = tempfile::tempdir().unwrap();
    let out = fw(tmp.path(), &["sweep-d2", "--cmin", "1.01", "--cmax", "1.33", "--steps", "33"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(tmp.path().join("d2_sweep.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("c,Q_closed,d2_closed,d2_fd,verdict"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 33);
    let mut prev = 0.0;
    for r in &rows {
        let c: f64 = r[0].parse().unwrap();
        assert!(c > prev);
        prev = c;
        assert_eq!(r[4], "Stable");
    }
}

#[test]
fn empty_sweep_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let out = fw(tmp.path(), &["sweep-d2", "--cmin", "1.2", "--cmax", "1.1", "--steps", "5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = fw(tmp.path(), &["sweep-d2", "--steps", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_failures_stay_in_their_row() {
    let tmp = tempfile::tempdir().unwrap();
    // the last point has c + h beyond 4/3
    let out = fw(tmp.path(), &["sweep-d2", "--cmin", "1.3", "--cmax", "1.3333", "--steps", "2"]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(tmp.path().join("d2_sweep.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert!(rows[0].ends_with(",Stable"));
    assert!(rows[1].contains("error:"), "{}", rows[1]);
}

#[test]
fn spectrum_report() {
    let tmp = tempfile::tempdir().unwrap();
    let out = fw(tmp.path(), &["spectrum", "--c", "1.2", "--oracle-n", "512"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let s = json(&tmp.path().join("spectrum.json"));
    assert_eq!(s["p0_sign_ok"], serde_json::Value::Bool(true));
    assert_eq!(s["matrix_oracle"]["n_negative"].as_u64(), Some(1));
    let lam = s["lambda_star"].as_f64().unwrap();
    assert!(lam < 0.0 && lam > s["lambda0"].as_f64().unwrap());
}

#[test]
fn stability_report() {
    let tmp = tempfile::tempdir().unwrap();
    let out = fw(tmp.path(), &["stability", "--c", "1.2"]);
    assert!(out.status.success());
    let s = json(&tmp.path().join("stability.json"));
    assert_eq!(s["verdict"], "Stable");
    assert!(s["functionals"]["first_variation_residual"].as_f64().unwrap() < 1e-6);
    let out = fw(tmp.path(), &["stability", "--c", "1.4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn evolve_with_config_env_and_flags() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.toml");
    std::fs::write(&cfg, "c = 1.2\nrho = 0.01\nshape = \"noise\"\nT = 100.0\nn = 2048\nseed = 1\n").unwrap();
    let run = |dir: &Path, seed: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_fw"));
        cmd.arg("--out-dir").arg(dir).args(["evolve", "--config"]).arg(&cfg).args(["--T", "1"]);
        match seed {
            Some(s) => cmd.env("FW_SEED", s),
            None => cmd.env_remove("FW_SEED"),
        };
        cmd.output().unwrap()
    };
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    let c = tmp.path().join("c");
    assert!(run(&a, None).status.success());
    assert!(run(&b, None).status.success());
    assert!(run(&c, Some("2")).status.success());
    let ta = std::fs::read(a.join("trace.csv")).unwrap();
    assert_eq!(ta, std::fs::read(b.join("trace.csv")).unwrap());
    assert_ne!(ta, std::fs::read(c.join("trace.csv")).unwrap());
    let text = String::from_utf8(ta).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert_eq!(manifest(&c).parameters["command"]["seed"], 2);
    assert_eq!(manifest(&a).parameters["command"]["T"], 1.0);
}

#[test]
fn evolve_validation() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(fw(tmp.path(), &["evolve", "--n", "1000"]).status.code(), Some(2));
    assert_eq!(fw(tmp.path(), &["evolve", "--shape", "square"]).status.code(), Some(2));
    assert_eq!(fw(tmp.path(), &["evolve", "--L", "10"]).status.code(), Some(2));
    let bad = tmp.path().join("bad.toml");
    std::fs::write(&bad, "speed = 2\n").unwrap();
    assert_eq!(fw(tmp.path(), &["evolve", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn outputs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    for d in [&a, &b] {
        assert!(fw(d, &["profile", "--c", "1.25"]).status.success());
        assert!(fw(d, &["spectrum", "--c", "1.25"]).status.success());
    }
    for f in ["profile.csv", "profile.meta.json", "potential.csv", "functionals.json", "spectrum.json"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn bad_flags_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(fw(tmp.path(), &["nonsense"]).status.code(), Some(2));
    assert_eq!(fw(tmp.path(), &["profile", "--c", "abc"]).status.code(), Some(2));
}
