use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jumploci")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut a = args.to_vec();
    a.push("--json");
    let out = run(&a);
    let stdout = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(&stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}\nstdout: {stdout}\nstderr: {}", String::from_utf8_lossy(&out.stderr)));
    (v, out.status.code().unwrap())
}

fn tmp(name: &str, contents: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let p = dir.join(name);
    fs::write(&p, contents).unwrap();
    p
}

#[test]
fn conf_pipeline_is_non_formal() {
    let (v, code) = json(&["elliptic", "pipeline", "--fixture", "conf_e_star_2"]);
    assert_eq!(code, 2);
    assert_eq!(v["verdict"], "NON-FORMAL");
    assert!(v["data"]["checks"].as_array().unwrap().iter().all(|c| c["ok"] == true));
}

#[test]
fn heisenberg_resonance_is_origin() {
    let (v, code) = json(&["cdga", "resonance", "--fixture", "heisenberg", "--degree", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["data"]["locus"]["zero_sets"], serde_json::json!(["{0}"]));
    // reduced basis of a primary ideal at the origin
    assert_eq!(v["data"]["locus"]["pieces"][0].as_array().unwrap().len(), 3);
}

#[test]
fn corrupted_sign_reports_violations() {
    let good = fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures/cdga/heisenberg.json")).unwrap();
    // flip the sign of a·b; associativity and Leibniz then fail
    let bad = good.replacen(r#"["a", "b", ["-ba"]]"#, r#"["a", "b", ["ba"]]"#, 1);
    assert_ne!(good, bad);
    let p = tmp("corrupted.json", &bad);
    let (v, code) = json(&["cdga", "validate", "--input", p.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["data"]["valid"], false);
    assert!(!v["data"]["violations"].as_array().unwrap().is_empty());

    let p = tmp("good.json", &good);
    let (v, code) = json(&["cdga", "validate", "--input", p.to_str().unwrap()]);
    assert_eq!((code, &v["data"]["valid"]), (0, &Value::Bool(true)));
}

#[test]
fn malformed_input_reports_position() {
    let p = tmp("malformed.json", "{\n  \"degrees\": [[\"1\"],\n  oops\n}");
    let out = run(&["cdga", "validate", "--input", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 3"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn unknown_fixture_lists_known_names() {
    let out = run(&["cdga", "cohomology", "--fixture", "nope"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("heisenberg"));
}

#[test]
fn output_is_deterministic() {
    let args = ["arrangement", "r1", "--fixture", "pencil3", "--json"];
    let a = run(&args).stdout;
    let b = run(&args).stdout;
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn json_and_pretty_agree() {
    let a = run(&["fox", "v1", "--fixture", "trefoil", "--json"]);
    let b = run(&["fox", "v1", "--fixture", "trefoil", "--pretty"]);
    let a: Value = serde_json::from_slice(&a.stdout).unwrap();
    let b: Value = serde_json::from_slice(&b.stdout).unwrap();
    assert_eq!(a, b);
}

#[test]
fn timing_stays_out_of_digest() {
    let (a, _) = json(&["fox", "r1", "--fixture", "toy"]);
    let (b, _) = json(&["fox", "r1", "--fixture", "toy", "--timing"]);
    assert!(a.get("timing").is_none());
    assert!(b["timing"]["elapsed_ms"].is_number());
    assert_eq!(a["digest"], b["digest"]);
}

#[test]
fn inline_presentation_matches_fixture() {
    let fixture = fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures/groups/mobius.txt")).unwrap();
    let (a, _) = json(&["fox", "alexander", "--fixture", "mobius"]);
    let (b, _) = json(&["fox", "alexander", "--presentation", fixture.trim()]);
    assert_eq!(a["data"], b["data"]);
}

#[test]
fn linearization_needs_commutator_relators() {
    let out = run(&["fox", "linearized", "--fixture", "trefoil"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("commutators"));
}

#[test]
fn mobius_formality_consistent() {
    let (v, code) = json(&["formality", "--fixture", "mobius"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "CONSISTENT-WITH-FORMALITY");
}

#[test]
fn tcone_from_polynomials() {
    // V(t1 t2 - 1): τ₁ is the line z1 + z2 = 0, as is TC₁
    let (v, _) = json(&["tcone", "exp", "--poly", "t1*t2 - 1", "--nvars", "2"]);
    assert_eq!(v["data"]["components"][0]["forms"], serde_json::json!(["z1 + z2"]));
    let (v, _) = json(&["tcone", "classical", "--poly", "t1*t2 - 1", "--nvars", "2"]);
    assert_eq!(v["data"]["locus"]["pieces"][0], serde_json::json!(["z1 + z2"]));
}

#[test]
fn elliptic_non_unimodular_is_reported() {
    let p = tmp("double.json", r#"{"n": 1, "rows": [[2]]}"#);
    let (v, code) = json(&["elliptic", "check", "--input", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["data"]["unimodularity"]["status"], "fail");
    let out = run(&["elliptic", "model", "--input", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn translations_flagged() {
    let p = tmp("translated.json", r#"{"n": 1, "rows": [[1]], "translations": [0.5]}"#);
    let (v, _) = json(&["elliptic", "model", "--input", p.to_str().unwrap()]);
    assert_eq!(v["data"]["translations_ignored"], true);
}

/// Every fixture through the commands that apply to it, compared against
/// stored report digests. `UPDATE_GOLDEN=1` rewrites the file.
#[test]
fn golden_digests() {
    let mut cases: Vec<Vec<&str>> = Vec::new();
    for f in ["lambda_ab_dba", "heisenberg", "exterior_2", "exterior_3", "e_star", "boolean2", "conf_e_star_2"] {
        cases.push(vec!["cdga", "cohomology", "--fixture", f]);
        cases.push(vec!["cdga", "resonance", "--fixture", f]);
    }
    for f in ["lambda_ab_dba", "heisenberg"] {
        cases.push(vec!["cdga", "compare", "--fixture", f]);
        cases.push(vec!["cdga", "support", "--fixture", f]);
    }
    for f in ["toy", "mobius", "trefoil", "four_generator", "torus", "free"] {
        for a in ["alexander", "linearized", "v1", "r1"] {
            // the trefoil relator is not a product of commutators
            if f != "trefoil" || matches!(a, "alexander" | "v1") {
                cases.push(vec!["fox", a, "--fixture", f]);
            }
        }
    }
    for f in ["toy", "mobius", "torus", "free"] {
        cases.push(vec!["formality", "--fixture", f]);
    }
    for f in ["braid", "ceva3", "pencil3", "generic3", "generic4"] {
        for a in ["flats", "os", "r1"] {
            cases.push(vec!["arrangement", a, "--fixture", f]);
        }
    }
    for f in ["conf_e_star_2", "e_star", "boolean2"] {
        cases.push(vec!["elliptic", "check", "--fixture", f]);
        cases.push(vec!["elliptic", "model", "--fixture", f]);
    }
    cases.push(vec!["elliptic", "pipeline", "--fixture", "conf_e_star_2"]);
    cases.push(vec!["formality", "--fixture", "conf_e_star_2"]);
    cases.push(vec!["tcone", "exp", "--fixture", "conf_e_star_2_v1"]);
    cases.push(vec!["tcone", "classical", "--fixture", "conf_e_star_2_v1"]);

    let mut lines = Vec::new();
    for c in &cases {
        let (v, code) = json(c);
        assert!(code == 0 || code == 2, "{c:?} exited {code}");
        lines.push(format!("{}\t{}", c.join(" "), v["digest"].as_str().unwrap()));
    }
    let actual = lines.join("\n") + "\n";
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/digests.tsv");
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::create_dir_all(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden")).unwrap();
        fs::write(path, &actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(path).expect("golden file; run with UPDATE_GOLDEN=1 to create it");
    for (e, a) in expected.lines().zip(actual.lines()) {
        assert_eq!(e, a);
    }
    assert_eq!(expected.lines().count(), actual.lines().count());
}
