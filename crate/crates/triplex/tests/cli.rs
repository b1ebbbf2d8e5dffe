use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn triplex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_triplex"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn chromatic_index_prints_a_number() {
    let out = triplex(&["chromatic-index", "--n", "7", "--lambda", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "18");
}

#[test]
fn extend_reports_quota_certificate() {
    let path = fixture("k6_to_k9.json");
    let out = triplex(&["extend", "--instance", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(
        stdout_json(&out),
        json!({"kind": "QuotaSum", "sum": 54, "edges": 45})
    );
}

#[test]
fn cube_fixture_verifies() {
    let path = fixture("order5_cube.json");
    let out = triplex(&["cube", "verify", "--in", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out), json!({"ok": true}));
}

#[test]
fn cube_build_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cube = dir.path().join("cube.json");
    let mf = fixture("order5_factorization.json");
    let out = triplex(&[
        "cube",
        "build",
        "--in",
        mf.to_str().unwrap(),
        "--out",
        cube.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = triplex(&["cube", "verify", "--in", cube.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn cube_search_statuses() {
    let out = triplex(&["cube", "search", "--n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["classes"].as_array().unwrap().len(), 25);
    let out = triplex(&["cube", "search", "--n", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out), json!({"kind": "NotFound"}));
    let out = triplex(&["cube", "search", "--n", "8"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn produced_colorings_verify() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("f.json");
    let f = file.to_str().unwrap();

    assert_eq!(
        triplex(&["factorize", "--n", "9", "--lambda", "2", "--out", f])
            .status
            .code(),
        Some(0)
    );
    let out = triplex(&["verify", "--coloring", f, "--factorization"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );

    let inst = dir.path().join("inst.json");
    let instance = json!({
        "nx": 3, "ny": 9, "lambda": 1,
        "coloring": {"k": 28, "classes": [{"color": 4, "edges": [[1, 2, 3]]}]}
    });
    std::fs::write(&inst, instance.to_string()).unwrap();
    let out = triplex(&["extend", "--instance", inst.to_str().unwrap(), "--out", f]);
    assert_eq!(out.status.code(), Some(0));
    let produced: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(produced["k"], 28);
    assert_eq!(
        triplex(&["verify", "--coloring", f, "--factorization"])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn oracle_extend_finds_witness() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    let instance = json!({
        "nx": 3, "ny": 6, "lambda": 1,
        "coloring": {"k": 10, "classes": [{"color": 2, "edges": [[1, 2, 3]]}]}
    });
    std::fs::write(&inst, instance.to_string()).unwrap();
    let out = triplex(&["oracle", "extend", "--instance", inst.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout_json(&out)["classes"][1]["edges"],
        json!([[1, 2, 3], [4, 5, 6]])
    );
    let k9 = fixture("k6_to_k9.json");
    let out = triplex(&[
        "oracle",
        "extend",
        "--instance",
        k9.to_str().unwrap(),
        "--limit",
        "84",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out), json!({"kind": "NoWitness"}));
    let out = triplex(&["oracle", "extend", "--instance", k9.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_rejects_conflicts() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("c.json");
    let bad = json!({"k": 1, "classes": [{"color": 1, "edges": [[1, 2, 3], [3, 4, 5]]}]});
    std::fs::write(&file, bad.to_string()).unwrap();
    let out = triplex(&["verify", "--coloring", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["ok"], false);
}

#[test]
fn evans_embeds_partial_coloring() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("p.json");
    let partial = json!({
        "nx": 4, "ny": 12, "lambda": 1, "q": 51,
        "coloring": {"k": 51, "classes": [{"color": 7, "edges": [[1, 2, 3]]}]}
    });
    std::fs::write(&inst, partial.to_string()).unwrap();
    let out = triplex(&["evans", "--instance", inst.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let c = stdout_json(&out);
    assert_eq!(c["k"], 55);
    assert_eq!(c["classes"][6]["edges"].as_array().unwrap().len(), 4);
}

#[test]
fn detach_with_seed_and_search() {
    let dir = tempfile::tempdir().unwrap();
    let task = dir.path().join("t.json");
    // Ten copies of {α,α,α} in ten colors, split into six vertices.
    let classes: Vec<Value> = (1..=10)
        .map(|c| json!({"color": c, "edges": [[1, 1, 1], [1, 1, 1]]}))
        .collect();
    let spec = json!({"graph": {"k": 10, "ground": 1, "classes": classes}, "alpha": 1, "m": 6});
    std::fs::write(&task, spec.to_string()).unwrap();
    let t = task.to_str().unwrap();
    for extra in [&[][..], &["--search-only", "--seed", "7"][..]] {
        let mut args = vec!["detach", "--task", t];
        args.extend_from_slice(extra);
        let out = triplex(&args);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert_eq!(stdout_json(&out)["ground"], 6);
    }
}

#[test]
fn oracle_enumerate_counts() {
    let out = triplex(&["oracle", "enumerate", "--n", "6", "--canonical"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out).as_array().unwrap().len(), 1);
    let out = triplex(&["oracle", "enumerate", "--n", "6", "--limit", "5"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn invalid_input_exits_two() {
    assert_eq!(triplex(&["bogus"]).status.code(), Some(2));
    assert_eq!(
        triplex(&["extend", "--instance", "/nonexistent.json"])
            .status
            .code(),
        Some(2)
    );
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    std::fs::write(&file, r#"{"nx": 3, "ny": 6, "lambda": 1, "coloring": {"k": 10, "classes": [{"color": 1, "edges": [[1, 2, 4]]}]}}"#).unwrap();
    assert_eq!(
        triplex(&["extend", "--instance", file.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}
