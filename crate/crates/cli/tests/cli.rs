use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn k3dyn(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3dyn"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("K3DYN_PRECISION")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn zero_parameter_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = k3dyn(dir.path(), &["run", "entropy-complex", "--parameter", "0"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("nonzero"));
}

#[test]
fn low_precision_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&k3dyn(dir.path(), &["run", "certify", "--precision", "33"])), 3);
    let o = Command::new(env!("CARGO_BIN_EXE_k3dyn"))
        .args(["run", "certify", "--out"])
        .arg(dir.path())
        .env("K3DYN_PRECISION", "20")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
}

#[test]
fn entropy_stage_reports_salem_root() {
    let dir = tempfile::tempdir().unwrap();
    let o = k3dyn(dir.path(), &["run", "entropy-complex", "--json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    let root: f64 = v["report"]["spectral_radius"].as_str().unwrap().parse().unwrap();
    assert!((root - 6.1393).abs() < 5e-5);
    assert_eq!(v["report"]["salem_factor"], serde_json::json!([1, -5, -6, -5, -6, -5, 1]));
}

#[test]
fn mclass_without_arcs_is_a_missing_dependency() {
    let dir = tempfile::tempdir().unwrap();
    let o = k3dyn(dir.path(), &["run", "mclass"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("arcs"));
}

#[test]
fn mclass_reads_an_arc_file() {
    let dir = tempfile::tempdir().unwrap();
    let arcs = dir.path().join("toy.txt");
    std::fs::write(
        &arcs,
        "punctures=4\n\
         start=0 end=2 events=(1,O)\n\
         start=2 end=1 events=(1,O)(1,U)(2,U)(3,U)(3,O)(2,U)\n\
         start=1 end=3 events=(2,U)(3,O)(3,U)(2,U)(1,U)(0,U)(0,O)(1,O)(2,O)(2,U)(1,O)(1,U)(2,U)\n",
    )
    .unwrap();
    let o = k3dyn(dir.path(), &["run", "mclass", "--arcs", arcs.to_str().unwrap(), "--json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["report"]["g"], "s2.s1.s0.s0.s1.s2.s2^-1.s2^-1.s1");
    let word = std::fs::read_to_string(dir.path().join("f2.word")).unwrap();
    assert_eq!(word.trim().split('.').count(), 18);
    assert!(word.trim().split('.').all(|t| t.starts_with("s_") || t.starts_with("S_")));

    let o = k3dyn(dir.path(), &["run", "mclass", "--arcs", arcs.to_str().unwrap(), "--mirror-word"]);
    assert_eq!(code(&o), 0);
    let mirrored = std::fs::read_to_string(dir.path().join("f2.word")).unwrap();
    let flip = |t: &str| if let Some(r) = t.strip_prefix("s_") { format!("S_{r}") } else { format!("s_{}", &t[2..]) };
    let expect: Vec<String> = word.trim().split('.').map(flip).collect();
    assert_eq!(mirrored.trim(), expect.join("."));
}

#[test]
fn full_run_is_deterministic_and_reads_bridge_report() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [a.path(), b.path()] {
        let o = k3dyn(d, &["run", "all", "--precision", "256"]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    for f in ["manifest.json", "certificate.json", "entropy.json", "arcs.txt", "mclass.json", "f2.word"] {
        let x = std::fs::read(a.path().join(f)).unwrap();
        let y = std::fs::read(b.path().join(f)).unwrap();
        assert_eq!(x, y, "{f} differs between runs");
    }
    let word = std::fs::read_to_string(a.path().join("f2.word")).unwrap();
    assert_eq!(word.trim().split('.').count(), 250);
    assert!(word.starts_with("s_5.S_6.S_7.s_8.s_8"));

    let o = k3dyn(a.path(), &["run", "all", "--precision", "256", "--require-bridge"]);
    assert_eq!(code(&o), 4);

    std::fs::write(
        a.path().join("bridge-report.json"),
        r#"{"word": "f2.word", "is_pseudo_anosov": true, "dilatation": 8.1998}"#,
    )
    .unwrap();
    let o = k3dyn(a.path(), &["run", "all", "--precision", "256"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("≳ 0.58"), "{}", stdout(&o));
}

#[test]
fn recheck_accepts_and_tampering_fails() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&k3dyn(dir.path(), &["run", "certify", "--precision", "256"])), 0);
    let cert = dir.path().join("certificate.json");
    let o = k3dyn(dir.path(), &["recheck", cert.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));

    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    v["declared"]["h3"]["pass"] = Value::Bool(false);
    let bad = dir.path().join("tampered.json");
    std::fs::write(&bad, v.to_string()).unwrap();
    let o = k3dyn(dir.path(), &["recheck", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn perturbed_orbit_fails_certification() {
    let dir = tempfile::tempdir().unwrap();
    let orbit = include_str!("../../core/data/orbit_a10.json")
        .replace("1.041643093944314148360673792017", "1.041643093944314148360673792917");
    let path = dir.path().join("perturbed.json");
    std::fs::write(&path, orbit).unwrap();
    let o = k3dyn(dir.path(), &["run", "certify", "--precision", "256", "--orbit", path.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("hypothesis (3)"));
    assert!(dir.path().join("certificate.json").exists());
}
