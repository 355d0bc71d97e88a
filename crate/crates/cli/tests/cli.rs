use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_holomorph"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn circles(svg: &str) -> usize {
    let doc = roxmltree::Document::parse(svg).expect("valid xml");
    assert!(doc.root_element().has_tag_name("svg"));
    doc.descendants().filter(|n| n.has_tag_name("circle")).count()
}

#[test]
fn check_constant_function_passes() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "c.json",
        r#"{"vertices": ["a", "b", "c", "d"], "edges": [["a","b"],["a","c"],["a","d"]], "values": {"a": 2, "b": 2, "c": 2, "d": 2}}"#,
    );
    for mode in ["harmonic", "holomorphic", "n-holomorphic"] {
        let out = run(dir.path(), &["check", "c.json", "--mode", mode]);
        assert_eq!(code(&out), 0, "{mode}");
        assert_eq!(stdout_json(&out)["verdict"], true);
    }
}

#[test]
fn check_z4_fails_with_unit_residual() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["fixture", "z-power", "--power", "4", "--json", "z4.json"]);
    assert_eq!(code(&out), 0);
    let out = run(dir.path(), &["check", "z4.json", "--mode", "harmonic"]);
    assert_eq!(code(&out), 1);
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], false);
    assert!((v["max_residual"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn check_rejects_truncated_input() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "t.json", r#"{"vertices": ["a", "b"], "edges": [["a","#);
    let out = run(dir.path(), &["check", "t.json"]);
    assert_eq!(code(&out), 2);
    assert!(!out.stderr.is_empty());
    assert_eq!(code(&run(dir.path(), &["check", "missing.json"])), 2);
}

#[test]
fn conjugate_of_constant_norm_fixture_is_found() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["fixture", "constant-norm", "--radius", "3", "--seed", "5", "--json", "f.json"]);
    assert_eq!(code(&out), 0);
    let out = run(dir.path(), &["conjugate", "f.json"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], true);
    assert!(v["residual"].as_f64().unwrap() < 1e-9);
    assert!(v["conjugate"]["values"].as_object().unwrap().len() > 1);
}

#[test]
fn conjugate_of_no_conjugate_fixture_is_certified_at_centre() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(dir.path(), &["fixture", "no-conjugate", "--radius", "3", "--json", "f.json"])), 0);
    let out = run(dir.path(), &["conjugate", "f.json"]);
    assert_eq!(code(&out), 1);
    let v = stdout_json(&out);
    assert_eq!(v["proved_infeasible"], true);
    let certs = v["certificates"].as_array().unwrap();
    assert_eq!(certs.len(), 1);
    // the centre of a vertex-centred ball has the empty address
    assert_eq!(certs[0]["vertex"], "C:");
}

#[test]
fn conjugate_rejects_non_harmonic_and_non_tree_input() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "p.json",
        r#"{"vertices": ["a", "b", "c"], "edges": [["a","b"],["b","c"]], "values": {"a": 0, "b": 1, "c": 5}}"#,
    );
    assert_eq!(code(&run(dir.path(), &["conjugate", "p.json"])), 2);
    write(
        dir.path(),
        "k3.json",
        r#"{"vertices": ["a", "b", "c"], "edges": [["a","b"],["b","c"],["c","a"]], "values": {"a": 0, "b": 0, "c": 0}}"#,
    );
    assert_eq!(code(&run(dir.path(), &["conjugate", "k3.json"])), 2);
}

#[test]
fn walk_of_length_one_is_a_single_admissible_step() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["walk", "--length", "1", "--seed", "9"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    let symbol: usize = lines[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!([0, 2, 4].contains(&symbol));
    assert_eq!(code(&run(dir.path(), &["walk", "--length", "0"])), 2);
}

#[test]
fn walk_is_byte_identical_under_a_fixed_seed() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["walk", "--length", "300", "--count", "4", "--seed", "17", "--csv", "a.csv", "--json", "a.json"];
    assert_eq!(code(&run(dir.path(), &args)), 0);
    let args2 = ["walk", "--length", "300", "--count", "4", "--seed", "17", "--csv", "b.csv", "--json", "b.json"];
    assert_eq!(code(&run(dir.path(), &args2)), 0);
    let read = |n: &str| std::fs::read(dir.path().join(n)).unwrap();
    assert_eq!(read("a.csv"), read("b.csv"));
    assert_eq!(read("a.json"), read("b.json"));
    let other = run(dir.path(), &["walk", "--length", "300", "--seed", "18"]);
    assert_ne!(other.stdout, read("a.csv"));
}

#[test]
fn long_walks_have_no_forbidden_transitions() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["walk", "--length", "1000", "--count", "10000", "--seed", "1", "--csv", "w.csv"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["forbidden_transitions"], 0);
    assert_eq!(v["walks"], 10000);
    let total: u64 = v["histogram"].as_object().unwrap().values().map(|c| c.as_u64().unwrap()).sum();
    assert_eq!(total, 10000);

    // independent scan of the emitted CSV against the incidence rule:
    // consecutive hexagon edges: b follows a only as a + 1 or a − 1 mod 6
    let csv = std::fs::read_to_string(dir.path().join("w.csv")).unwrap();
    let mut prev: Option<(usize, usize)> = None;
    let mut rows = 0;
    for line in csv.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let (w, s): (usize, usize) = (cols[0].parse().unwrap(), cols[2].parse().unwrap());
        if let Some((pw, ps)) = prev {
            if pw == w {
                assert!(s == (ps + 1) % 6 || s == (ps + 5) % 6, "walk {w}: {ps} then {s}");
            }
        }
        prev = Some((w, s));
        rows += 1;
    }
    assert_eq!(rows, 10_000_000);
}

#[test]
fn extension_commands_emit_svg_with_one_circle_per_point() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["extend-t3", "--radius", "6", "--svg", "t3.svg", "--csv", "t3.csv", "--json", "t3.json"]);
    assert_eq!(code(&out), 0);
    let svg = std::fs::read_to_string(dir.path().join("t3.svg")).unwrap();
    let csv = std::fs::read_to_string(dir.path().join("t3.csv")).unwrap();
    assert_eq!(circles(&svg), csv.lines().count() - 1);
    assert_eq!(circles(&svg), 254);

    let out = run(dir.path(), &["nholo", "--order", "4", "--radius", "4", "--svg", "n.svg", "--csv", "n.csv"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["check"]["verdict"], true);
    let svg = std::fs::read_to_string(dir.path().join("n.svg")).unwrap();
    let csv = std::fs::read_to_string(dir.path().join("n.csv")).unwrap();
    assert_eq!(circles(&svg), csv.lines().count() - 1);

    let args = ["extend-tr3", "--radius", "5", "--policy", "seeded", "--seed", "2", "--samples", "50", "--svg", "r.svg", "--csv", "r.csv"];
    let out = run(dir.path(), &args);
    assert_eq!(code(&out), 0);
    let svg = std::fs::read_to_string(dir.path().join("r.svg")).unwrap();
    let n = stdout_json(&out)["points"].as_u64().unwrap() as usize;
    assert_eq!(circles(&svg), n);

    assert_eq!(code(&run(dir.path(), &["render", "r.csv", "--svg", "again.svg"])), 0);
    assert_eq!(circles(&std::fs::read_to_string(dir.path().join("again.svg")).unwrap()), n);
}

#[test]
fn seeded_extension_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = run(dir.path(), &["extend-t3", "--radius", "4", "--policy", "seeded", "--seed", "3"]);
    let b = run(dir.path(), &["extend-t3", "--radius", "4", "--policy", "seeded", "--seed", "3"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let a = run(dir.path(), &["extend-tr3", "--radius", "4", "--policy", "seeded", "--seed", "3"]);
    let b = run(dir.path(), &["extend-tr3", "--radius", "4", "--policy", "seeded", "--seed", "3"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn policy_errors_and_caps() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(dir.path(), &["extend-t3", "--policy", "seeded"])), 2);
    assert_eq!(code(&run(dir.path(), &["extend-t3", "--radius", "40"])), 3);
    assert_eq!(code(&run(dir.path(), &["extend-t3", "--radius", "5", "--policy", "exhaustive"])), 3);
    assert_eq!(code(&run(dir.path(), &["extend-tr3", "--radius", "12", "--policy", "exhaustive"])), 3);
    assert_eq!(code(&run(dir.path(), &["extend-t3", "--width", "0", "--svg", "x.svg"])), 2);
    assert_eq!(code(&run(dir.path(), &["no-such-command"])), 2);
    write(dir.path(), "tri.json", r#"{"p": [0, 0], "e": [1, 0]}"#);
    assert_eq!(code(&run(dir.path(), &["extend-tr3", "--triangle", "tri.json"])), 2);
}

#[test]
fn exhaustive_t3_at_radius_four_all_cover() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["extend-t3", "--radius", "4", "--policy", "exhaustive"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["functions"], 1 << 15);
    assert_eq!(v["covering_passed"], 1 << 15);
}
