use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use darboux::forward::equal_up_to_scaling;
use darboux::{Poly, Vars};
use serde_json::Value;

fn darboux() -> Command {
    Command::new(env!("CARGO_BIN_EXE_darboux"))
}

/// Scratch directory removed on drop.
struct TempDir(PathBuf);

impl TempDir {
    fn new(name: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("darboux-cli-{}-{name}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        TempDir(dir)
    }

    fn path(&self) -> &Path {
        &self.0
    }
}

impl Drop for TempDir {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.0);
    }
}

fn code(cmd: &mut Command) -> Option<i32> {
    cmd.output().unwrap().status.code()
}

fn json(out: &[u8]) -> Value {
    serde_json::from_slice(out).unwrap()
}

/// Forward instance written as a contour file with a comment header.
fn contour_file(dir: &TempDir, seed: u64, case: &str) -> (PathBuf, String) {
    let out = darboux().args(["forward", "--seed", &seed.to_string(), "--case", case]).output().unwrap();
    assert!(out.status.success());
    let v = json(&out.stdout);
    let path = dir.path().join(format!("{case}-{seed}.txt"));
    fs::write(&path, format!("# {case} seed {seed}\n{}\n", v["U"].as_str().unwrap())).unwrap();
    (path, v["F"].as_str().unwrap().to_string())
}

#[test]
fn forward_reports_degrees() {
    let out = darboux().args(["forward", "--seed", "1", "--case", "cuspidal"]).output().unwrap();
    assert!(out.status.success());
    let v = json(&out.stdout);
    assert_eq!(v["caseTag"], "cuspidal");
    assert_eq!(v["degrees"]["U1"], 6);
    assert_eq!(v["degrees"]["k"], 3);
}

#[test]
fn forward_from_spec_file() {
    let dir = TempDir::new("spec");
    let spec = dir.path().join("torus.txt");
    fs::write(&spec, "# torus R = 2, r = 1 seen from a generic camera\nL = 0\nQ = -16*x^2 - 16*y^2 + 9*w^2\ncamera = 1/3, -2/7, 5/2\n").unwrap();
    let out = darboux().args(["forward", "-i"]).arg(&spec).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out.stdout);
    assert_eq!(v["caseTag"], "nodal");
}

#[test]
fn reconstruct_recovers_hidden_surface() {
    let dir = TempDir::new("recover");
    let (path, hidden) = contour_file(&dir, 1, "cuspidal");
    let out = darboux().args(["reconstruct", "-i"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out.stdout);
    let vars = Vars::xyzw();
    let hidden = Poly::parse(&hidden, &vars).unwrap();
    let found: Vec<_> = v["reports"].as_array().unwrap().iter().filter(|r| r["outcome"] == "success").collect();
    assert!(!found.is_empty());
    for r in &found {
        let f = Poly::parse(r["F"].as_str().unwrap(), &vars).unwrap();
        assert!(equal_up_to_scaling(&f, &hidden).is_some());
        assert_eq!(r["failedAssertion"], Value::Null);
        assert_eq!(r["abc"].as_array().unwrap().len(), 3);
    }
    for r in v["reports"].as_array().unwrap().iter().filter(|r| r["outcome"] == "fail") {
        assert!(r["failedAssertion"].as_str().unwrap().starts_with("line"));
    }
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new("determinism");
    let (path, _) = contour_file(&dir, 2, "cuspidal");
    let run = |name: &str, jobs: &str| {
        let out = dir.path().join(name);
        assert_eq!(code(darboux().args(["reconstruct", "--seed", "7", "--jobs", jobs, "-i"]).arg(&path).arg("-o").arg(&out)), Some(0));
        fs::read(out).unwrap()
    };
    let a = run("a.json", "1");
    assert_eq!(a, run("b.json", "1"));
    assert_eq!(a, run("c.json", "3"));
}

#[test]
fn analyze_lists_clusters() {
    let dir = TempDir::new("analyze");
    let (path, _) = contour_file(&dir, 1, "cuspidal");
    let out = darboux().args(["analyze", "-i"]).arg(&path).output().unwrap();
    assert!(out.status.success());
    let v = json(&out.stdout);
    assert_eq!(v["case"], "cuspidal");
    assert_eq!(v["degreeU1"], 6);
    assert!(!v["clusters"].as_array().unwrap().is_empty());
    assert!(v["guesses"].as_u64().unwrap() >= 1);
}

#[test]
fn malformed_input_is_a_parse_error() {
    let out = darboux().args(["analyze", "--poly", "x^2 + * y"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("byte 6"));
}

#[test]
fn wrong_degree_is_a_validation_error() {
    assert_eq!(code(darboux().args(["reconstruct", "--poly", "x^2 + y^2 - z^2"])), Some(2));
}

#[test]
fn garbage_fails_every_guess() {
    // Random sextic times (x^2 + y^2 + z^2)^3.
    let u1 = "3*x^6 - 2*x^5*y + x^4*z^2 - 5*x^3*y^3 + 4*x^2*y^2*z^2 + 2*x*y^5 - y^4*z^2 + 3*y^6 + x*z^5 - 4*y*z^5 + 2*z^6 + x^2*y*z^3";
    let u = format!("({u1})*(x^2 + y^2 + z^2)^3");
    let out = darboux().args(["reconstruct", "--poly", &u]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out.stdout);
    for r in v["reports"].as_array().unwrap() {
        assert_eq!(r["outcome"], "fail");
        assert!(r["failedAssertion"].is_string());
    }
}

#[test]
fn guess_overflow_is_a_resource_error() {
    let dir = TempDir::new("overflow");
    let (path, _) = contour_file(&dir, 1, "cuspidal");
    assert_eq!(code(darboux().args(["reconstruct", "--guess-limit", "1", "-i"]).arg(&path)), Some(4));
}

#[test]
fn roundtrip_reports_verdict_and_timings() {
    let out = darboux().args(["roundtrip", "--case", "cuspidal", "--seed", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out.stdout);
    let verdict = &v["verdicts"][0];
    assert_eq!(verdict["verdict"], true);
    for stage in ["generate", "analyze", "reconstruct", "compare"] {
        assert!(verdict["timings"][stage].as_f64().unwrap() >= 0.0);
    }
}
