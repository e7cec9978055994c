//! Golden reports for every subcommand. Set `GERMKIT_BLESS=1` to rewrite.

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_germkit"))
        .args(args)
        .current_dir(data_dir())
        .env_remove("GERMKIT_JET_CUTOFF")
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn report(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.push("--json");
    let (code, stdout, stderr) = run(&full);
    let mut v: Value = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{args:?}: {e}\n{stderr}"));
    let t = v.as_object_mut().unwrap().remove("timing_ms");
    assert!(t.is_some_and(|t| t.is_u64()));
    (code, v)
}

fn golden(name: &str, args: &[&str], code: i32) {
    let (got_code, v) = report(args);
    assert_eq!(got_code, code, "{name}: exit code");
    let text = serde_json::to_string_pretty(&v).unwrap() + "\n";
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"));
    if std::env::var_os("GERMKIT_BLESS").is_some() {
        std::fs::write(&path, &text).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(text, want, "{name}: report differs from {}", path.display());
}

#[test]
fn nicedim() {
    let (code, out, _) = run(&["nicedim", "9", "9"]);
    assert_eq!((code, out.as_str()), (0, "BoundaryNice, sigma=9\n"));
    golden("nicedim_10_7", &["nicedim", "10", "7"], 0);
}

#[test]
fn codim() {
    golden("codim_thom", &["codim", "--group", "K", "thom99.germ"], 0);
    golden("codim_f1l", &["codim", "f1l.germ"], 0);
    golden("codim_a3_ae", &["codim", "--group", "Ae", "a3.germ"], 0);
}

#[test]
fn analyze() {
    golden("analyze_thom", &["analyze", "thom99.germ"], 0);
    golden("analyze_cusp", &["analyze", "cusp.germ"], 0);
}

#[test]
fn determinacy() {
    golden("determinacy_a3", &["determinacy", "--group", "K", "a3.germ"], 0);
}

#[test]
fn stability() {
    golden("stability_cusp", &["stability", "cusp.germ"], 0);
    golden("stability_b22", &["stability", "b22.germ"], 0);
}

#[test]
fn unfold() {
    golden("unfold_b22", &["unfold", "b22.germ"], 0);
    golden("unfold_a3", &["unfold", "a3.germ"], 0);
    golden("unfold_pair_99", &["unfold", "--pair", "9,9", "--at", "3"], 0);
}

#[test]
fn classify() {
    golden("classify_b22", &["classify", "b22.germ"], 0);
}

#[test]
fn atlas_verify() {
    golden("atlas_verify_np8", &["atlas-verify", "--table", "StableNP8"], 0);
}

#[test]
fn ideal_check() {
    golden("ideal_check_i2", &["ideal-check", "--power", "3", "i2.germ"], 0);
    golden("ideal_check_thom", &["ideal-check", "--times", "2", "thom99.germ", "--at", "3"], 0);
}

#[test]
fn trivialize() {
    golden("trivialize_quartic", &["trivialize", "--time", "t", "--group", "A", "--order", "3", "quartic.germ"], 0);
    golden("trivialize_thom_k", &["trivialize", "--at", "3", "thom99.germ"], 1);
    golden("trivialize_lipschitz", &["trivialize", "--lipschitz", "--at", "3", "thom99.germ"], 0);
}

#[test]
fn deterministic() {
    let args = ["codim", "thom99.germ"];
    assert_eq!(report(&args), report(&args));
}

#[test]
fn echo_round_trips() {
    let (code, first, _) = run(&["--echo", "nicedim", "1", "1"]);
    assert_eq!(code, 0);
    assert_eq!(first, "Nice, sigma=inf\n");
    let (_, out, _) = run(&["stability", "--echo", "thom99.germ"]);
    let echoed: String = out.lines().take_while(|l| !l.starts_with("infinitesimally")).map(|l| format!("{l}\n")).collect();
    let tmp = std::env::temp_dir().join(format!("germkit-echo-{}.germ", std::process::id()));
    std::fs::write(&tmp, &echoed).unwrap();
    let (_, again, _) = run(&["stability", "--echo", tmp.to_str().unwrap()]);
    std::fs::remove_file(&tmp).unwrap();
    assert_eq!(again, out);
}

#[test]
fn exit_codes() {
    let (code, _, err) = run(&["analyze", "bad.germ"]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
    assert_eq!(run(&["codim", "--group", "Q", "a3.germ"]).0, 2);
    assert_eq!(run(&["codim", "missing.germ"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["codim", "--at", "1", "thom99.germ"]).0, 2);
    let out = Command::new(env!("CARGO_BIN_EXE_germkit"))
        .args(["codim", "flat.germ"])
        .current_dir(data_dir())
        .env("GERMKIT_JET_CUTOFF", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
