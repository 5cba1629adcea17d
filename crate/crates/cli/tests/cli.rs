//! End-to-end runs of the `widthlab` binary: exit codes, schema conformance
//! of every JSON output, golden files and determinism.
//!
//! Set `WIDTHLAB_BLESS=1` to rewrite the golden files.

use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_widthlab"));
    cmd.args(args).current_dir(root()).env_remove("WIDTHLAB_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", stdout(out)))
}

fn assert_schema(v: &Value) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/widthlab-output.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).expect("schema compiles");
    let msgs: Vec<String> = match compiled.validate(v) {
        Ok(()) => return,
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    panic!("schema violations:\n{}", msgs.join("\n"));
}

fn golden(name: &str, actual: &str) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("WIDTHLAB_BLESS").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap();
    assert_eq!(actual, want, "golden file {name} differs (WIDTHLAB_BLESS=1 to update)");
}

#[test]
fn check_exit_codes() {
    let ok = run(&["check", "data/double.tri"]);
    assert_eq!(code(&ok), 0);
    assert!(stdout(&ok).contains("H1: 0"));

    assert_eq!(code(&run(&["check", "data/open_double.tri"])), 1);
    assert_eq!(code(&run(&["check", "data/does_not_exist.tri"])), 2);
    // an edge list is not a gluing table
    assert_eq!(code(&run(&["check", "data/petersen.edges"])), 1);
    assert_eq!(code(&run(&["check"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn check_reports_lens_space_homology() {
    for (file, h1) in [("data/l41.tri", "Z/4"), ("data/l52.tri", "Z/5"), ("data/s3_one_tet.tri", "0")] {
        let out = run(&["check", file, "--format", "json"]);
        assert_eq!(code(&out), 0);
        let v = json(&out);
        assert_schema(&v);
        assert_eq!(v["homology"]["text"], h1, "{file}");
    }
    let v = json(&run(&["check", "data/open_double.tri", "--format", "json"]));
    assert_schema(&v);
    assert_eq!(v["validation"]["issues"][0]["kind"], "not_closed");
}

#[test]
fn petersen_widths_golden() {
    let out = run(&["width", "--graph", "data/petersen.edges", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_schema(&v);
    let values: Vec<u64> = v["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["value"].as_u64().unwrap())
        .collect();
    assert_eq!(values, vec![4, 5, 6, 5]);
    golden("petersen_width.json", &stdout(&out));
}

#[test]
fn double_certificates_golden() {
    let lin = run(&["certify", "data/double.tri", "--mode", "linear", "--format", "json"]);
    assert_eq!(code(&lin), 0);
    let v = json(&lin);
    assert_schema(&v);
    assert_eq!(v["certificate"]["k"], 4);
    assert_eq!(v["certificate"]["l_upper"], 31);
    assert_eq!(v["certificate"]["max_genus_sum"], 3);
    golden("double_linear.json", &stdout(&lin));

    let graph = run(&["certify", "data/double.tri", "--mode", "graph", "--format", "json"]);
    assert_eq!(code(&graph), 0);
    let v = json(&graph);
    assert_schema(&v);
    assert_eq!(v["certificate"]["bound_6k"], 24);
    assert_eq!(v["passes"], true);
    golden("double_graph.json", &stdout(&graph));
}

#[test]
fn width_bounds_follow_flags() {
    let plain = json(&run(&["width", "data/l41.tri", "--format", "json"]));
    assert_schema(&plain);
    assert_eq!(plain["bounds"]["conditional"].as_array().unwrap().len(), 0);
    // one tetrahedron: no graph width line
    let names: Vec<&str> = plain["bounds"]["unconditional"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, vec!["l_upper"]);

    let asserted = json(&run(&[
        "width",
        "data/l41.tri",
        "--assert-irreducible",
        "--assert-non-haken",
        "--format",
        "json",
    ]));
    assert_schema(&asserted);
    assert!(!asserted["bounds"]["conditional"].as_array().unwrap().is_empty());

    // flags describe a manifold, so they make no sense for a bare graph
    assert_eq!(
        code(&run(&["width", "--graph", "data/petersen.edges", "--assert-irreducible"])),
        1
    );
}

#[test]
fn heuristic_needs_a_seed_and_is_deterministic() {
    assert_eq!(code(&run(&["width", "--graph", "data/petersen.edges", "--heuristic"])), 1);
    let args = [
        "width",
        "--graph",
        "data/petersen.edges",
        "--heuristic",
        "--seed",
        "17",
        "--restarts",
        "5",
        "--format",
        "json",
    ];
    let a = run_env(&args, &[("WIDTHLAB_THREADS", "1")]);
    let b = run_env(&args, &[("WIDTHLAB_THREADS", "3")]);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b));
    let v = json(&a);
    assert_schema(&v);
    for (r, opt) in v["results"].as_array().unwrap().iter().zip([4, 5, 6, 5]) {
        assert_eq!(r["exact"], false);
        assert!(r["value"].as_u64().unwrap() >= opt);
    }
}

#[test]
fn exact_limits_are_enforced() {
    let out = run(&["width", "--graph", "data/petersen.edges", "--param", "cng", "--max-exact-cng", "5"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--heuristic"));
    assert_eq!(code(&run(&["width", "--graph", "data/petersen.edges", "--max-exact-tw", "40"])), 1);
}

#[test]
fn bad_thread_count_is_rejected() {
    let out = run_env(&["check", "data/double.tri"], &[("WIDTHLAB_THREADS", "many")]);
    assert_eq!(code(&out), 1);
}

#[test]
fn witness_files_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = run(&["width", "--graph", "data/petersen.edges", "--witness-dir", d, "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("param,value,exact,witness_file\n"));
    assert_eq!(text.lines().count(), 5);
    for p in ["tw", "pw", "cw", "cng"] {
        assert!(dir.path().join(format!("{p}.witness")).is_file(), "{p}");
    }
    let nice = std::fs::read_to_string(dir.path().join("tw.nice")).unwrap();
    assert!(nice.starts_with("nice "));
    let layout = std::fs::read_to_string(dir.path().join("cw.witness")).unwrap();
    assert!(layout.starts_with("layout"));
}

#[test]
fn certify_with_supplied_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let layout = dir.path().join("layout.txt");
    std::fs::write(&layout, "layout 1 0\n").unwrap();
    let cert = dir.path().join("cert.json");
    let out = run(&[
        "certify",
        "data/double.tri",
        "--mode",
        "linear",
        "--layout",
        layout.to_str().unwrap(),
        "--out",
        cert.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["witness_source"], "file");
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(written, v["certificate"]);

    std::fs::write(&layout, "layout 0 1 2\n").unwrap();
    let bad = run(&["certify", "data/double.tri", "--mode", "linear", "--layout", layout.to_str().unwrap()]);
    assert_eq!(code(&bad), 1);

    let host = dir.path().join("host.txt");
    std::fs::write(&host, "host 2\nleaf 0 1\nleaf 1 0\narc 0 1\n").unwrap();
    let out = run(&["certify", "data/double.tri", "--mode", "graph", "--host", host.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("result: PASS"));

    let out = run(&["certify", "data/double.tri", "--mode", "graph", "--root-arc", "3"]);
    assert_eq!(code(&out), 1);
    let out = run(&["certify", "data/open_double.tri", "--mode", "graph"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn single_tetrahedron_graph_certificate_is_vacuous() {
    let v = json(&run(&["certify", "data/l52.tri", "--mode", "graph", "--format", "json"]));
    assert_schema(&v);
    assert_eq!(v["certificate"]["single_tet_case"], true);
    assert_eq!(v["certificate"]["root"], Value::Null);
    assert_eq!(v["passes"], true);
}

#[test]
fn verify_ineq_directory() {
    let out = run(&["verify-ineq", "data/ineq"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    let all_hold = headers.iter().position(|h| h == "all_hold").unwrap();
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| &r[all_hold] == "true"));

    // unreadable or malformed files are reported, not fatal
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(root().join("data/ineq/k2.edges"), dir.path().join("a.edges")).unwrap();
    std::fs::write(dir.path().join("b.edges"), "3 2\n0 1\n").unwrap();
    let out = run(&["verify-ineq", dir.path().to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_schema(&v);
    assert_eq!(v["summary"]["checked"], 1);
    assert_eq!(v["summary"]["errors"], 1);
    assert!(v["rows"][1]["error"].as_str().unwrap().contains("parse error"));

    assert_eq!(code(&run(&["verify-ineq", "data/no_such_dir"])), 2);
}

#[test]
fn census_through_the_cli() {
    let out = run(&["census", "--max-tets", "3", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_schema(&v);
    assert_eq!(v["summary"]["count_by_size"], serde_json::json!([4, 16, 76]));
    assert_eq!(v["summary"]["failures"], serde_json::json!([]));
    for t in v["triangulations"].as_array().unwrap() {
        if t["tets"] == 1 {
            assert_eq!(t["dual_loops"], 2);
        }
    }
    assert_eq!(code(&run(&["census", "--max-tets", "4"])), 1);

    let csv_out = stdout(&run(&["census", "--max-tets", "2", "--format", "csv"]));
    assert_eq!(csv_out.lines().count(), 1 + 20);
}

#[test]
fn schema_rejects_malformed_output() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/widthlab-output.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).unwrap();
    let good = json(&run(&["width", "--graph", "data/petersen.edges", "--format", "json"]));
    assert!(compiled.is_valid(&good));

    let mut missing = good.clone();
    missing.as_object_mut().unwrap().remove("results");
    assert!(!compiled.is_valid(&missing));
    let mut bad_param = good.clone();
    bad_param["results"][0]["param"] = "bw".into();
    assert!(!compiled.is_valid(&bad_param));
    let mut bad_command = good;
    bad_command["command"] = "frobnicate".into();
    assert!(!compiled.is_valid(&bad_command));
}
