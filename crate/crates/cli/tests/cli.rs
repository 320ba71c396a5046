use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn data(file: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(file)
        .display()
        .to_string()
}

/// Runs the binary with `--json` and returns the exit code and the report.
fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_hopfcalc"))
        .args(args)
        .arg("--json")
        .output()
        .unwrap();
    let report = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code().unwrap(), report)
}

fn factors(r: &Value) -> Vec<u64> {
    r["results"]["factors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect()
}

#[test]
fn both_engines_agree_on_the_klein_group() {
    let (code, r) = run(&[
        "homology", "--named", "V4", "--degree", "2", "--method", "both",
    ]);
    assert_eq!(code, 0);
    assert_eq!(factors(&r), [2]);
    assert_eq!(r["results"]["agreement"], true);
    assert_eq!(r["status"], "ok");
    assert_eq!(r["inputs"][0]["kind"], "named");
}

#[test]
fn cyclic_and_trivial_groups_have_no_multiplier() {
    let (code, r) = run(&[
        "homology", "--named", "C6", "--degree", "2", "--method", "bar",
    ]);
    assert_eq!(code, 0);
    assert!(factors(&r).is_empty());
    assert!(r["results"]["hopf"].is_null());
    let (code, r) = run(&["homology", "--named", "trivial", "--degree", "2"]);
    assert_eq!(code, 0);
    assert!(factors(&r).is_empty());
}

#[test]
fn unstable_values_exit_non_zero_without_a_hopf_value() {
    let (code, r) = run(&[
        "homology", "--named", "V4", "--degree", "3", "--method", "hopf",
    ]);
    match r["results"]["hopf"]["stabilization"]["status"]
        .as_str()
        .unwrap()
    {
        "UNSTABLE" => {
            assert_eq!(code, 1);
            assert!(r["results"]["hopf"]["value"].is_null());
            assert!(r["results"]["factors"].is_null());
        }
        _ => assert_eq!(code, 0),
    }
}

#[test]
fn presentations_feed_the_hopf_engine_only() {
    let pres = std::env::temp_dir().join(format!("hopfcalc-cli-{}.pres", std::process::id()));
    std::fs::write(&pres, "gens: x y\nrels: x^2, y^4, [x,y]\nclass: 1\n").unwrap();
    let p = pres.display().to_string();
    let (code, r) = run(&[
        "homology",
        "--presentation",
        &p,
        "--degree",
        "2",
        "--method",
        "hopf",
    ]);
    assert_eq!(code, 0);
    assert_eq!(factors(&r), [2]);
    assert_eq!(r["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    let (code, r) = run(&[
        "homology",
        "--presentation",
        &p,
        "--degree",
        "2",
        "--method",
        "bar",
    ]);
    assert_eq!(code, 2);
    assert_eq!(r["status"], "error");
    std::fs::remove_file(pres).unwrap();
}

#[test]
fn galois_commands_on_shipped_homomorphisms() {
    let q8 = data("q8_to_v4.json");
    let (code, r) = run(&["galois", "is-normal", "--hom", &q8]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["holds"], true);
    let (_, r) = run(&["galois", "is-trivial", "--hom", &q8]);
    assert_eq!(r["results"]["holds"], false);
    let (code, r) = run(&["galois", "group", "--hom", &q8]);
    assert_eq!(code, 0);
    assert_eq!(factors(&r), [2]);
    let (code, r) = run(&["galois", "is-normal", "--hom", &data("id.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["holds"], true);
    // the kernel {1,-1} is 2-torsion, so it is not normal relative to {2}
    let (code, r) = run(&["galois", "characterisation", "--hom", &q8, "--primes", "2"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["mode"], "COMPOSITE");
    assert_eq!(r["results"]["holds"], false);
}

#[test]
fn mode_errors_and_bad_input_exit_with_two() {
    let (code, r) = run(&[
        "galois",
        "characterisation",
        "--hom",
        &data("q8_to_v4.json"),
    ]);
    assert_eq!(code, 2);
    assert_eq!(r["status"], "error");
    let (code, _) = run(&["galois", "group", "--hom", "/nonexistent/hom.json"]);
    assert_eq!(code, 2);
    let (code, _) = run(&[
        "homology", "--named", "V4", "--degree", "2", "--primes", "4",
    ]);
    assert_eq!(code, 2);
    let (code, _) = run(&["verify", "--suite", "bogus"]);
    assert_eq!(code, 2);
}

#[test]
fn verify_reports_suites_and_seed() {
    let (code, r) = run(&["verify", "--suite", "none"]);
    assert_eq!(code, 0);
    assert!(r["results"]["suites"].as_array().unwrap().is_empty());
    let (code, r) = run(&["verify", "--suite", "closure", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["seed"], 7);
    assert_eq!(r["results"]["suites"][0]["failed"], 0);
}

#[test]
fn rerunning_the_echoed_command_reproduces_the_results() {
    let (_, first) = run(&[
        "homology", "--named", "D4", "--degree", "2", "--method", "both",
    ]);
    let echoed: Vec<String> = first["command"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    let args: Vec<&str> = echoed
        .iter()
        .map(String::as_str)
        .filter(|a| *a != "--json")
        .collect();
    let (_, second) = run(&args);
    assert_eq!(first["results"], second["results"]);
    assert_eq!(first["inputs"], second["inputs"]);
}
