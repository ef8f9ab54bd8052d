use std::process::{Command, Output};

use serde_json::Value;

fn splitter(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_splitter"))
        .args(args)
        .output()
        .expect("run splitter")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn temp_file(name: &str, contents: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("splitter-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn rank_of_triangle_from_file() {
    let path = temp_file("k3.edges", "# triangle\n3 3\n0 1\n1 2\n0 2\n");
    let out = splitter(&["rank", "--graph", path.to_str().unwrap(), "--radius", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("rank 3\noptimal connectors: 0 1 2\n"), "{text}");
}

#[test]
fn rank_json_from_json_graph() {
    let path = temp_file("p5.json", r#"{"n":5,"edges":[[0,1],[1,2],[2,3],[3,4]]}"#);
    let out = splitter(&["rank", "--graph", path.to_str().unwrap(), "--radius", "1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["rank"], 2);
    assert_eq!(v["n"], 5);
    assert_eq!(v["per_connector"].as_array().unwrap().len(), 5);
}

#[test]
fn witness_of_triangle() {
    let out = splitter(&["witness", "--gen", "family=complete,n=3", "--radius", "1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["rank"], 3);
    assert_eq!(v["h"], serde_json::json!([0, 1, 2]));
    assert_eq!(v["levels"][0]["B"], serde_json::json!([0, 1, 2]));
}

#[test]
fn progressing_all_and_one_connector() {
    let all = splitter(&["progressing", "--gen", "family=path,n=3", "--radius", "1", "--json"]);
    let v = stdout_json(&all);
    assert_eq!(v["moves"].as_array().unwrap().len(), 3);
    assert_eq!(v["moves"][1]["progressing"], serde_json::json!([1]));

    let one = splitter(&[
        "progressing",
        "--gen",
        "family=path,n=3",
        "--radius",
        "1",
        "--connector",
        "1",
        "--json",
    ]);
    let v = stdout_json(&one);
    assert_eq!(v["moves"].as_array().unwrap().len(), 1);
    assert_eq!(v["moves"][0]["ball_rank"], 2);
}

#[test]
fn pruning_flags_do_not_change_rank() {
    let mut ranks = Vec::new();
    for flags in [
        &[][..],
        &["--no-dominance-pruning"][..],
        &["--no-sandwich-exit", "--no-component-split"][..],
    ] {
        let mut args = vec!["rank", "--gen", "family=grid,rows=2,cols=3", "--radius", "1", "--json"];
        args.extend_from_slice(flags);
        ranks.push(stdout_json(&splitter(&args))["rank"].clone());
    }
    assert!(ranks.iter().all(|r| r == &ranks[0]), "{ranks:?}");
}

#[test]
fn verify_all_labeled_passes() {
    let out = splitter(&[
        "verify",
        "--corpus",
        "all-labeled",
        "--max-n",
        "4",
        "--radius",
        "1",
        "--radius",
        "2",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["results"].as_array().unwrap().len(), 2 * (1 + 2 + 8 + 64));
}

#[test]
fn verify_custom_corpus_file() {
    let path = temp_file(
        "corpus.json",
        r#"{"name":"tiny","radii":[1],"entries":[{"kind":"family","family":"cycle","params":{"n":5}},{"kind":"graph","id":"edge","graph":{"n":2,"edges":[[0,1]]}}]}"#,
    );
    let out = splitter(&["verify", "--corpus", path.to_str().unwrap(), "--out", "/dev/null"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
}

#[test]
fn gen_is_deterministic() {
    let a = splitter(&["gen", "--gen", "family=gnp,n=8,p=0.3", "--seed", "5", "--json"]);
    let b = splitter(&["gen", "--gen", "family=gnp,n=8,p=0.3", "--seed", "5", "--json"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout_json(&a)["n"], 8);
}

#[test]
fn usage_and_input_errors_exit_2() {
    let cases: [&[&str]; 6] = [
        &["bogus"],
        &["rank", "--radius", "1"],
        &["rank", "--gen", "family=path,n=3", "--graph", "x", "--radius", "1"],
        &["rank", "--gen", "family=path,n=3", "--radius", "0"],
        &["rank", "--graph", "/nonexistent/graph.edges", "--radius", "1"],
        &["rank", "--gen", "family=nope,n=3", "--radius", "1"],
    ];
    for args in cases {
        let out = splitter(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn bad_edge_list_reports_line() {
    let path = temp_file("loop.edges", "3 1\n0 0\n");
    let out = splitter(&["rank", "--graph", path.to_str().unwrap(), "--radius", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2: self-loop at vertex 0"), "{err}");
}
