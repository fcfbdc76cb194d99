use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sperner-lab"))
        .args(args)
        .env("SPERNER_LAB_LOG", "error")
        .output()
        .expect("binary runs")
}

fn records(text: &str) -> Vec<Value> {
    text.lines().map(|l| serde_json::from_str(l).expect("json line")).collect()
}

fn stdout_records(out: &Output) -> Vec<Value> {
    records(std::str::from_utf8(&out.stdout).unwrap())
}

fn of<'a>(recs: &'a [Value], key: &str) -> Vec<&'a Value> {
    recs.iter().filter_map(|r| r.get(key)).collect()
}

fn face(rec: &Value) -> Vec<Vec<u64>> {
    serde_json::from_value(rec["face"].clone()).unwrap()
}

const EXAMPLE3: [&str; 12] = [
    "solve", "--n", "4", "--r", "5", "--m", "1,1,1", "--scheme", "example3:1", "--scheme",
    "example3:2", "--scheme",
];

fn example3(extra: &[&str]) -> Output {
    let mut args = EXAMPLE3.to_vec();
    args.push("example3:3");
    args.extend_from_slice(extra);
    lab(&args)
}

#[test]
fn build_counts() {
    for (n, r, vertices, facets) in [("3", "2", 6, 4), ("1", "5", 1, 1), ("4", "5", 56, 125)] {
        let out = lab(&["build", "--n", n, "--r", r]);
        assert!(out.status.success());
        let recs = stdout_records(&out);
        assert!(recs[0].get("timestamp_unix").is_some());
        assert_eq!(recs[1]["run_config"]["command"], "build");
        let summary = of(&recs, "summary")[0];
        assert_eq!(summary["vertices"], vertices, "K_{{{n},{r}}}");
        assert_eq!(summary["facets"], facets);
        let complex = of(&recs, "complex")[0];
        assert_eq!(complex["vertices"].as_array().unwrap().len(), vertices);
    }
}

#[test]
fn example3_tuples_and_stars() {
    let out = example3(&[]);
    assert!(out.status.success());
    let recs = stdout_records(&out);
    let colorings = of(&recs, "coloring");
    assert_eq!(colorings.len(), 3);
    let tuple = |v: &str| -> Vec<u64> {
        colorings.iter().map(|c| c["colors"][v].as_u64().unwrap()).collect()
    };
    let cube = [
        ("0,1,2,3,5", [1, 2, 3]),
        ("0,1,2,2,5", [1, 2, 4]),
        ("0,1,1,2,5", [1, 4, 3]),
        ("0,0,1,2,5", [4, 2, 3]),
        ("0,1,1,1,5", [1, 4, 4]),
        ("0,0,1,1,5", [4, 2, 4]),
        ("0,0,0,1,5", [4, 4, 3]),
        ("0,0,0,0,5", [4, 4, 4]),
    ];
    for (v, expected) in cube {
        assert_eq!(tuple(v), expected, "{v}");
    }
    let solutions = of(&recs, "solution");
    assert!(!solutions.is_empty());
    assert!(solutions.iter().all(|s| s["full_solution"] == true && s["tree_shape"] == "star"));
    assert_eq!(of(&recs, "summary")[0]["connected_exists"], true);
}

#[test]
fn example3_diagonal_is_a_minimal_solution() {
    let recs = stdout_records(&example3(&["--exhaustive"]));
    let diagonal = vec![vec![0, 0, 1, 1, 5], vec![0, 1, 1, 2, 5]];
    let solutions = of(&recs, "solution");
    assert!(solutions.iter().any(|s| face(s) == diagonal && s["minimal"] == true));
    assert!(solutions.iter().all(|s| s["tree_shape"] == "star"));
}

#[test]
fn example4_path_for_any_tiebreak() {
    let named = [[0, 0, 0, 3, 5], [0, 0, 0, 2, 5], [0, 1, 1, 3, 5], [0, 0, 1, 3, 5]];
    for t in ["1,2,3,4", "4,3,2,1", "2,4,1,3"] {
        let out = lab(&[
            "solve", "--n", "4", "--r", "5", "--m", "1,1,1", "--scheme", "example4:c1", "--scheme",
            "example4:c2", "--scheme", "example4:c3", "--tiebreak", t, "--exhaustive",
        ]);
        assert!(out.status.success());
        let recs = stdout_records(&out);
        let solutions = of(&recs, "solution");
        assert!(solutions.iter().all(|s| s["tree_shape"] == "path"), "tiebreak {t}");
        assert!(
            solutions.iter().any(|s| face(s).iter().all(|v| named.iter().any(|w| w[..] == v[..]))),
            "tiebreak {t}: no solution inside the named tetrahedron"
        );
    }
}

#[test]
fn classic_one_dimensional() {
    let out = lab(&["solve", "--n", "2", "--r", "6", "--scheme", "random", "--seed", "3"]);
    assert!(out.status.success());
    let recs = stdout_records(&out);
    let solutions = of(&recs, "solution");
    assert!(!solutions.is_empty());
    assert!(solutions.iter().all(|s| face(s).len() == 2 && s["color_sets"] == serde_json::json!([[1, 2]])));
}

#[test]
fn verify_maps_passes_with_winding_one_and_replays() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("maps.jsonl");
    let trace = dir.path().join("trace.jsonl");
    let out = lab(&[
        "verify-maps", "--samples", "2000", "--seed", "7", "--jobs", "2",
        "--out", report.to_str().unwrap(), "--trace", trace.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let recs = records(&std::fs::read_to_string(&report).unwrap());
    let properties = of(&recs, "property");
    assert_eq!(properties.len(), 9);
    assert!(properties.iter().all(|p| p["pass"] == true));
    assert!(properties[0]["worst"].as_f64().unwrap() <= 1e-12);
    assert_eq!(of(&recs, "winding")[0]["winding"], 1);
    let trace_recs = records(&std::fs::read_to_string(&trace).unwrap());
    assert!(trace_recs[1].get("run_config").is_some());
    assert!(trace_recs[2].get("angle").is_some());

    let again = dir.path().join("again.jsonl");
    let replay = lab(&[
        "replay", report.to_str().unwrap(), "--out", again.to_str().unwrap(), "--jobs", "1", "--check",
    ]);
    assert!(replay.status.success(), "{}", String::from_utf8_lossy(&replay.stderr));
    assert_same_modulo_timestamp(&report, &again);
}

fn assert_same_modulo_timestamp(a: &Path, b: &Path) {
    let a = std::fs::read_to_string(a).unwrap();
    let b = std::fs::read_to_string(b).unwrap();
    let (a1, a_rest) = a.split_once('\n').unwrap();
    let (b1, b_rest) = b.split_once('\n').unwrap();
    assert!(a1.contains("timestamp_unix") && b1.contains("timestamp_unix"));
    assert_eq!(a_rest, b_rest);
}

#[test]
fn replay_every_command() {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 3] = [
        &["build", "--n", "3", "--r", "3"],
        &["solve", "--n", "3", "--r", "4", "--m", "1,1", "--scheme", "random", "--scheme", "ranked:2,3,1"],
        &["sweep", "--n", "2..3", "--r", "2", "--samples", "3", "--family", "random,mixed"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let first = dir.path().join(format!("{i}.jsonl"));
        let second = dir.path().join(format!("{i}-replay.jsonl"));
        let mut with_out = args.to_vec();
        with_out.extend(["--out", first.to_str().unwrap()]);
        assert!(lab(&with_out).status.success(), "{args:?}");
        let replay = lab(&["replay", first.to_str().unwrap(), "--out", second.to_str().unwrap(), "--jobs", "3"]);
        assert!(replay.status.success(), "{args:?}");
        assert_same_modulo_timestamp(&first, &second);
    }
}

#[test]
fn sweep_examples_have_no_candidates() {
    for which in [["example3:1", "example3:2", "example3:3"], ["example4:c1", "example4:c2", "example4:c3"]] {
        let out = lab(&[
            "sweep", "--n", "4", "--r", "5", "--m", "1,1,1", "--scheme", which[0], "--scheme",
            which[1], "--scheme", which[2], "--tiebreak", "all", "--samples", "1",
        ]);
        assert!(out.status.success());
        let summary: Value = serde_json::from_slice(&out.stderr).unwrap();
        assert_eq!(summary["instances"], 24);
        assert_eq!(summary["candidates"], 0);
        let recs = stdout_records(&out);
        assert_eq!(recs.len(), 2 + 24);
        assert!(recs[2..].iter().all(|r| r["candidate"] == false));
    }
}

#[test]
fn sweep_two_intervals_has_no_candidates_and_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("sweep.jsonl");
    let args = ["sweep", "--n", "2", "--r", "1..5", "--samples", "20", "--out", log.to_str().unwrap()];
    let out = lab(&args);
    assert!(out.status.success());
    let summary: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["candidates"], 0);
    assert_eq!(summary["evaluated"], summary["instances"]);
    let before = std::fs::read_to_string(&log).unwrap();

    let again = lab(&args);
    let summary: Value = serde_json::from_slice(&again.stdout).unwrap();
    assert_eq!(summary["evaluated"], 0);
    assert_eq!(summary["resumed"], summary["instances"]);
    assert_eq!(std::fs::read_to_string(&log).unwrap(), before);

    let clash = lab(&["sweep", "--n", "3", "--r", "2", "--out", log.to_str().unwrap()]);
    assert_eq!(clash.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["build", "--r", "2"][..],
        &["build", "--n", "0", "--r", "2"],
        &["solve", "--n", "3", "--r", "2", "--scheme", "nonsense"],
        &["solve", "--n", "3", "--r", "2", "--tiebreak", "1,2,2"],
        &["frobnicate"],
        &["replay", "/nonexistent/file"],
    ] {
        assert_eq!(lab(args).status.code(), Some(1), "{args:?}");
    }
    assert_eq!(lab(&["--help"]).status.code(), Some(0));
}

#[test]
fn no_solution_outside_theorem_sizes_is_not_an_error() {
    // Σm < n - 1: no guarantee, and an empty search is a normal outcome.
    let out = lab(&["solve", "--n", "3", "--r", "2", "--m", "0,0", "--scheme", "longest", "--scheme", "longest"]);
    assert!(out.status.success());
    let recs = stdout_records(&out);
    assert_eq!(of(&recs, "summary")[0]["theorem_instance"], false);
}
