use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sopkit-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

fn sopkit(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sopkit"))
        .args(args)
        .arg("--output")
        .arg(out)
        .env("SOPKIT_THREADS", "2")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(path: PathBuf) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn sop_table_for_ginibre() {
    let dir = scratch("sop");
    let o = sopkit(&["sop", "--ensemble", "ginibre", "--N", "4"], &dir);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r: Vec<f64> = stdout(&o).lines().skip(1).map(|l| l.split('\t').nth(1).unwrap().parse().unwrap()).collect();
    let want = [2.0 * PI, 12.0 * PI, 240.0 * PI, 10080.0 * PI];
    for (a, b) in r.iter().zip(want) {
        assert!((a / b - 1.0).abs() < 1e-14, "{a} vs {b}");
    }
    let sys = sopkit::skew::read_system(&std::fs::read_to_string(dir.join("sop.json")).unwrap()).unwrap();
    assert_eq!(sys.r, r);
    let run = json(dir.join("run.json"));
    assert_eq!(run["schema_version"], "sopkit-1");
    assert_eq!(run["command"], "sop");
    assert_eq!(run["N"], 4);
    assert_eq!(run["ensemble"], "ginibre");
}

#[test]
fn chebyshev_contour_skew_norm() {
    let dir = scratch("cheb");
    let o = sopkit(&["sop", "--ensemble", "chebyshev-ellipse", "--a", "2", "--b", "1", "--N", "2"], &dir);
    assert!(o.status.success());
    let r0: f64 = stdout(&o).lines().nth(1).unwrap().split('\t').nth(1).unwrap().parse().unwrap();
    // r_0 = π b ((a+b)² − (a−b)²) = 8π for a = 2, b = 1
    assert!((r0 / (8.0 * PI) - 1.0).abs() < 1e-12, "{r0}");
}

#[test]
fn usage_errors_exit_with_2() {
    let dir = scratch("usage");
    for args in [
        &["sop", "--ensemble", "elliptic", "--tau", "1.5", "--N", "2"][..],
        &["sop", "--ensemble", "ginibre", "--nu", "1", "--N", "2"],
        &["sop", "--ensemble", "nope", "--N", "2"],
        &["sop", "--ensemble", "truncated", "--alpha", "-1", "--N", "2"],
        &["sop", "--ensemble", "gegenbauer", "--alpha", "1", "--a", "1", "--b", "2", "--N", "2"],
        &["sop", "--ensemble", "mittag-leffler", "--lambda", "0", "--N", "2"],
        &["sop", "--ensemble", "chiral", "--tau", "0.5", "--nu", "-1", "--N", "2"],
        &["sop", "--ensemble", "ginibre"],
        &["kernel", "--limit", "laguerre", "--tau", "0.5"],
        &["kernel", "--limit", "hermite", "--tau", "0.5", "--grid", "21by21"],
        &["verify", "--suite", "bogus"],
        &["sample", "--ensemble", "truncated", "--alpha", "1", "--N", "2", "--method", "matrix"],
    ] {
        let o = sopkit(args, &dir);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn numerical_failure_exits_with_3() {
    // h_171 = 171! overflows a double
    let dir = scratch("numeric");
    let o = sopkit(&["sop", "--ensemble", "ginibre", "--N", "90"], &dir);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn hermite_kernel_grid() {
    let dir = scratch("kernel");
    let o = sopkit(&["kernel", "--limit", "hermite", "--tau", "0.5", "--grid", "21x21"], &dir);
    assert!(o.status.success());
    let text = std::fs::read_to_string(dir.join("kernel.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "re(z),im(z),re(u),im(u),re(val),im(val)");
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 441);
    for row in rows.iter().step_by(37) {
        let (z, u) = (sopkit::Complex64::new(row[0], row[1]), sopkit::Complex64::new(row[2], row[3]));
        assert_eq!(u, z.conj());
        let v = sopkit::kernels::s_hermite_limit(0.5, z, u).unwrap();
        assert_eq!((row[4], row[5]), (v.re, v.im));
    }
    assert_eq!(json(dir.join("kernel.json"))["tau"], 0.5);
}

#[test]
fn elliptic_density_integrates_to_n() {
    let dir = scratch("density");
    let o = sopkit(&["density", "--ensemble", "elliptic", "--tau", "0.5", "--N", "8"], &dir);
    assert!(o.status.success());
    let s = json(dir.join("density.json"));
    assert!((s["quadrature_integral"].as_f64().unwrap() - 8.0).abs() < 1e-3);
    assert!((s["grid_integral"].as_f64().unwrap() - 8.0).abs() < 1e-3);
    let text = std::fs::read_to_string(dir.join("density.csv")).unwrap();
    assert_eq!(text.lines().next().unwrap(), "re(z),im(z),density");
    assert_eq!(text.lines().count(), 1 + 100 * 100);
}

#[test]
fn sample_outputs_are_byte_identical() {
    let args = ["sample", "--ensemble", "mittag-leffler", "--lambda", "2", "--c", "1", "--N", "3", "--count", "100", "--chains", "3", "--seed", "9"];
    let (a, b) = (scratch("sample-a"), scratch("sample-b"));
    assert!(sopkit(&args, &a).status.success());
    // thread count must not matter
    let o = Command::new(env!("CARGO_BIN_EXE_sopkit")).args(args).arg("--output").arg(&b).env("SOPKIT_THREADS", "1").output().unwrap();
    assert!(o.status.success());
    for f in ["samples.csv", "samples.json", "run.json"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
    let text = std::fs::read_to_string(a.join("samples.csv")).unwrap();
    assert_eq!(text.lines().next().unwrap(), "config_id,re(z),im(z)");
    assert_eq!(text.lines().count(), 1 + 300 * 3);
    let meta = json(a.join("samples.json"));
    assert_eq!(meta["seed"], 9);
    assert!(meta["acceptance"].as_f64().unwrap() > 0.0);

    let m = scratch("sample-m");
    assert!(sopkit(&["sample", "--ensemble", "ginibre", "--N", "2", "--method", "matrix", "--count", "50"], &m).status.success());
    assert_eq!(std::fs::read_to_string(m.join("samples.csv")).unwrap().lines().count(), 1 + 50 * 2);
}

#[test]
fn perturb_writes_the_shorter_system() {
    let dir = scratch("perturb");
    let o = sopkit(&["perturb", "--ensemble", "ginibre", "--N", "3", "--m", "0.7"], &dir);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 1 + 2);
    let p = sopkit::christoffel::read_perturbed(&std::fs::read_to_string(dir.join("perturbed.json")).unwrap()).unwrap();
    assert_eq!(p.size(), 2);
    assert_eq!(p.m, 0.7);
}

#[test]
fn verify_reports_every_check() {
    let dir = scratch("verify");
    let o = sopkit(&["verify", "--suite", "skew,christoffel"], &dir);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let report = json(dir.join("report.json"));
    assert_eq!(report["passed"], true);
    let checks = report["checks"].as_array().unwrap();
    assert!(checks.len() >= 10);
    for c in checks {
        assert!(c["measured"].as_f64().unwrap() <= c["tolerance"].as_f64().unwrap());
    }
    assert!(checks.iter().any(|c| c["suite"] == "christoffel"));
}
