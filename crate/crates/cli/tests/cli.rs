use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn conlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn write_phi(dir: &Path) -> String {
    let path = dir.join("phi.sexp");
    fs::write(&path, "(forall x (le (z) x))\n").unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn aset_run_then_stats() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run");
    let out = out.to_str().unwrap();
    json(&conlab(&[
        "aset", "run", "--alpha", "1", "--budget", "3", "--out", out,
    ]));
    for f in [
        "events.json",
        "formulas.tsv",
        "enumeration.sexp",
        "manifest.json",
    ] {
        assert!(Path::new(out).join(f).exists(), "{f} missing");
    }
    let stats = json(&conlab(&["stats", out]));
    assert_eq!(stats["numerated"], 15);
    assert_eq!(stats["per_stage"]["3"], 8);
    assert!(stats["sharing_ratio"].as_f64().unwrap() > 1.0);

    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(Path::new(out).join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["config"]["budget"], "3");
    assert_eq!(manifest["outputs"].as_object().unwrap().len(), 3);
}

#[test]
fn aset_runs_are_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    for d in [&a, &b] {
        json(&conlab(&[
            "aset",
            "run",
            "--alpha",
            "2",
            "--budget",
            "2",
            "--enum",
            "decidable",
            "--out",
            d.to_str().unwrap(),
        ]));
    }
    for f in ["events.json", "formulas.tsv", "manifest.json"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap());
    }
}

#[test]
fn stats_rejects_a_directory_without_a_run() {
    let tmp = tempfile::tempdir().unwrap();
    let out = conlab(&["stats", tmp.path().to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("does not contain"));
}

#[test]
fn suite_output_is_byte_identical() {
    let a = conlab(&["suite", "diagonal", "--seed", "3"]);
    let b = conlab(&["suite", "diagonal", "--seed", "3"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["suite"], "diagonal");
}

#[test]
fn unknown_suite_fails() {
    let out = conlab(&["suite", "nosuch"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown suite"));
}

#[test]
fn gl_prove_reports_verdicts() {
    let lob = json(&conlab(&["gl", "prove", "box(box p -> p) -> box p"]));
    assert_eq!(lob["status"], "established");
    let refl = json(&conlab(&["gl", "prove", "box p -> p"]));
    assert_eq!(refl["status"], "refuted");
}

#[test]
fn con_iter_and_export() {
    let tmp = tempfile::tempdir().unwrap();
    let phi = write_phi(tmp.path());
    let c = json(&conlab(&["con-iter", "--alpha", "w+1", "--phi", &phi]));
    assert_eq!(c["class"], "Pi_1");
    let u = json(&conlab(&[
        "con-iter", "--alpha", "1", "--phi", &phi, "--unfold",
    ]));
    assert_eq!(u["skeleton"], "~box ~(a0 & T)");
    let not_finite = conlab(&["con-iter", "--alpha", "w", "--phi", &phi, "--unfold"]);
    assert!(!not_finite.status.success());

    let out = tmp.path().join("export");
    json(&conlab(&[
        "export",
        "--alpha",
        "2",
        "--phi",
        &phi,
        "--out",
        out.to_str().unwrap(),
    ]));
    assert!(out.join("replay.json").exists());
}

#[test]
fn g_commands() {
    let tmp = tempfile::tempdir().unwrap();
    let phi = write_phi(tmp.path());
    let g = json(&conlab(&[
        "g",
        "apply",
        "--alpha",
        "1",
        "--phi",
        &phi,
        "--budget",
        "1",
        "--truncate",
    ]));
    assert_eq!(g["class"], "Pi_1");
    let v = json(&conlab(&[
        "g", "verify", "thm41", "--dir", "1", "--alpha", "1", "--budget", "2",
    ]));
    assert_eq!(v["status"], "established");
    let p = json(&conlab(&["g", "verify", "prop51", "--budget", "1"]));
    assert_eq!(p["status"], "established");
}
