use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn dgorder(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dgorder"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn example(dir: &Path, file: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(file);
    let mut full = vec!["example"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["-o", path.to_str().unwrap()]);
    let o = dgorder(&full);
    assert!(o.status.success(), "{}", stderr(&o));
    path
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn homology_of_mat2_over_z() {
    let dir = TempDir::new().unwrap();
    let f = example(dir.path(), "m.txt", &["mat2_dx", "x=2"]);
    let o = dgorder(&["homology", f.to_str().unwrap(), "--ring", "Z", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let degrees = v["degrees"].as_array().unwrap();
    assert_eq!(degrees.len(), 2);
    for (d, want) in degrees.iter().zip([0, 1]) {
        assert_eq!(d["degree"], want);
        assert_eq!(d["free_rank"], 0);
        assert_eq!(d["torsion"], serde_json::json!([2]));
    }
    assert_eq!(v["invariant_factors"], serde_json::json!([2, 2]));
    assert_eq!(v["generators"].as_array().unwrap().len(), 2);

    let text = stdout(&dgorder(&["homology", f.to_str().unwrap(), "--ring", "Q"]));
    assert!(text.contains("acyclic"), "{text}");
}

#[test]
fn verify_names_the_failing_check() {
    let dir = TempDir::new().unwrap();
    let f = example(dir.path(), "h.txt", &["mat2_dx", "x=1/2", "order=standard"]);
    let o = dgorder(&["verify", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("verification failed: d-stability"), "{}", stdout(&o));
    let v = json(&dgorder(&["verify", f.to_str().unwrap(), "--json"]));
    assert_eq!(v["status"], "fail");
    assert_eq!(v["failure"], "d-stability");

    let g = example(dir.path(), "g.txt", &["lambda2"]);
    let o = dgorder(&["verify", g.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn broken_leibniz_rule_is_named() {
    let dir = TempDir::new().unwrap();
    let f = example(dir.path(), "m.txt", &["mat2_dx", "x=1"]);
    // d(e21) = 2 I still squares to zero but breaks the product rule
    let text = std::fs::read_to_string(&f)
        .unwrap()
        .replace("\n  e21 e11 1\n", "\n  e21 e11 2\n")
        .replace("\n  e21 e22 1\n", "\n  e21 e22 2\n");
    std::fs::write(&f, text).unwrap();
    let v = json(&dgorder(&["verify", f.to_str().unwrap(), "--json"]));
    assert_eq!(v["status"], "fail");
    assert_eq!(v["failure"], "leibniz");
}

#[test]
fn class_groups_of_the_congruence_order() {
    let dir = TempDir::new().unwrap();
    let f = example(dir.path(), "z.txt", &["zp_order", "p=5"]);
    let o = dgorder(&["classgroup", f.to_str().unwrap(), "--mode", "classical", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["invariant_factors"], serde_json::json!([2]));
    assert!(v["caveats"].as_array().unwrap().iter().any(|c| c.as_str().unwrap().contains("Eichler")));

    let v = json(&dgorder(&["classgroup", f.to_str().unwrap(), "--mode", "dg", "--json"]));
    assert_eq!(v["invariant_factors"], serde_json::json!([]));
    assert!(v["caveats"][0].as_str().unwrap().starts_with("upper bound"));

    let text = stdout(&dgorder(&["classgroup", f.to_str().unwrap(), "--mode", "classical"]));
    assert!(text.contains("class group: C2"), "{text}");
}

#[test]
fn mayer_vietoris_on_the_s3_order() {
    let dir = TempDir::new().unwrap();
    let f = example(dir.path(), "s.txt", &["s3_order"]);
    let o = dgorder(&["classgroup", f.to_str().unwrap(), "--mode", "mv", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    let squares = v["squares"].as_array().unwrap();
    assert_eq!(squares.len(), 3);
    assert!(squares.iter().all(|s| s["exact"] == true));
}

#[test]
fn hull_of_the_congruence_order() {
    let dir = TempDir::new().unwrap();
    let f = example(dir.path(), "z.txt", &["zp_order", "p=5"]);
    let v = json(&dgorder(&["hull", f.to_str().unwrap(), "--json"]));
    assert_eq!(v["classically_maximal"], true);
    assert_eq!(v["generators"].as_array().unwrap().len(), 4);
    assert_eq!(v["moves"][0]["prime"], 5);
}

#[test]
fn radicals_and_simples_over_f5() {
    let dir = TempDir::new().unwrap();
    let f = example(dir.path(), "f.txt", &["mat2_dx", "ring=F(5)"]);
    let v = json(&dgorder(&["radicals", f.to_str().unwrap(), "--json"]));
    let gens = v["generators"].as_array().unwrap();
    let dim = |name: &str| {
        gens.iter().find(|g| g["name"] == name).unwrap()["basis"].as_array().unwrap().len()
    };
    assert_eq!(dim("dgrad_l"), 2);
    assert_eq!(dim("dgrad_r"), 2);
    assert_eq!(dim("dgrad_2"), 0);
    assert_eq!(dim("dgrad_l n dgrad_r"), 1);

    let v = json(&dgorder(&["simples", f.to_str().unwrap(), "--json"]));
    assert_eq!(v["generators"].as_array().unwrap().len(), 1);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    assert_eq!(dgorder(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(dgorder(&["verify", "/nonexistent/file"]).status.code(), Some(2));
    assert_eq!(dgorder(&["example", "mat2_dx", "x"]).status.code(), Some(2));
    assert_eq!(dgorder(&["example", "nope"]).status.code(), Some(1));

    let f = example(dir.path(), "m.txt", &["mat2_dx"]);
    let o = dgorder(&["hull", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("no order"));

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "ring Q\nbasis\n  a 0\nmult\n  a a b 1\n").unwrap();
    let o = dgorder(&["verify", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 5, column 7"), "{}", stderr(&o));

    let big = example(dir.path(), "big.txt", &["zp_order", "p=101"]);
    let o = dgorder(&["classgroup", big.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let f = example(dir.path(), "s.txt", &["s3_order"]);
    let once = dgorder(&["classgroup", f.to_str().unwrap(), "--mode", "mv", "--json"]);
    let twice = dgorder(&["classgroup", f.to_str().unwrap(), "--mode", "mv", "--json"]);
    assert_eq!(once.stdout, twice.stdout);
    let a = dgorder(&["example", "green_order", "k=2", "p=5"]);
    let b = dgorder(&["example", "green_order", "k=2", "p=5"]);
    assert_eq!(a.stdout, b.stdout);
}
