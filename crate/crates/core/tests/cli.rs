use std::path::Path;

use ncconvex::cli::{run, Outcome, SCHEMA};
use ncconvex::expr_parser::parse_polynomial;
use ncconvex::free_algebra::Signature;
use serde_json::Value;

fn ncconvex(args: &[&str]) -> Outcome {
    run(std::iter::once("ncconvex").chain(args.iter().copied()))
}

fn json(out: &Outcome) -> Value {
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}{}", out.stdout, out.stderr))
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).display().to_string()
}

#[test]
fn eval_identity_tuple() {
    let out = ncconvex(&["eval", "--expr", "x1", "--x-tuple", "identity3"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let doc = json(&out);
    assert_eq!(doc["schema"], SCHEMA);
    let value = doc["report"]["value"].as_array().unwrap();
    assert_eq!(value.len(), 3);
    for (i, row) in value.iter().enumerate() {
        for (j, z) in row.as_array().unwrap().iter().enumerate() {
            let want = if i == j { 1.0 } else { 0.0 };
            assert_eq!(z[0].as_f64(), Some(want));
            assert_eq!(z[1].as_f64(), Some(0.0));
        }
    }
}

#[test]
fn eval_reads_tuple_and_series_files() {
    let dir = tempfile::tempdir().unwrap();
    let tuple = path(dir.path(), "x.json");
    std::fs::write(
        &tuple,
        r#"{"n": 2, "entries": [[[[1, 0], [0, 1]], [[0, -1], [2, 0]]]]}"#,
    )
    .unwrap();
    let series = path(dir.path(), "series.json");
    let p = parse_polynomial("x1^2 + 1", Signature::new(0, 1)).unwrap();
    std::fs::write(&series, serde_json::to_string(&p.x_homogeneous_parts()).unwrap()).unwrap();

    let from_expr = json(&ncconvex(&["eval", "--expr", "x1^2 + 1", "--x-tuple", &tuple]));
    let out = ncconvex(&["eval", "--series-file", &series, "--x-tuple", &tuple]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(json(&out)["report"]["value"], from_expr["report"]["value"]);
    // X = [[1, i], [-i, 2]], X² + I = [[3, 3i], [-3i, 6]].
    assert_eq!(from_expr["report"]["value"][0][1][1].as_f64(), Some(3.0));
    assert_eq!(from_expr["report"]["value"][1][1][0].as_f64(), Some(6.0));
}

#[test]
fn certify_square_is_consistent() {
    let out = ncconvex(&[
        "certify",
        "--expr",
        "x1^2",
        "--signature",
        "0,1",
        "--size",
        "3",
        "--seed",
        "7",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(json(&out)["report"]["verdict"], "CONSISTENT_DEGREE_≤2");
}

#[test]
fn quartic_convexity1_witness_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let witness = path(dir.path(), "w.json");
    let out = ncconvex(&[
        "convexity1",
        "--preset",
        "quartic",
        "--size",
        "2",
        "--seed",
        "7",
        "--witness-out",
        &witness,
    ]);
    assert_eq!(out.code, 1, "{}", out.stderr);
    assert_eq!(json(&out)["witness_file"], witness.as_str());
    let check = ncconvex(&["convexity1", "--preset", "quartic", "--witness", &witness]);
    assert_eq!(check.code, 1);
    let doc = json(&check);
    assert_eq!(doc["report"]["confirmed"], true);
    assert!(doc["report"]["eigenvalues"][0].as_f64().unwrap() < -1e-6);
    // The square is convex, so the same pair confirms nothing.
    let square = ncconvex(&["convexity1", "--preset", "square", "--witness", &witness]);
    assert_eq!(square.code, 0);
}

#[test]
fn quartic_convexity_witness_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let witness = path(dir.path(), "w.json");
    let out = ncconvex(&[
        "convexity",
        "--expr",
        "x1^4",
        "--size",
        "2",
        "--epsilon",
        "1",
        "--trials",
        "1000",
        "--seed",
        "3",
        "--witness-out",
        &witness,
    ]);
    assert_eq!(out.code, 1, "{}", out.stderr);
    let check = ncconvex(&["convexity", "--expr", "x1^4", "--witness", &witness]);
    assert_eq!(check.code, 1);
    assert_eq!(json(&check)["report"]["confirmed"], true);
}

#[test]
fn monotone_and_kraus_subcommands() {
    let pass = ncconvex(&[
        "monotone",
        "--preset",
        "kraus-halfmass",
        "--g-transform",
        "--interval=-0.9,0.9",
        "--seed",
        "1",
    ]);
    assert_eq!(pass.code, 0, "{}", pass.stdout);
    let dir = tempfile::tempdir().unwrap();
    let witness = path(dir.path(), "w.json");
    let fail = ncconvex(&[
        "monotone",
        "--expr",
        "x1^4",
        "--g-transform",
        "--seed",
        "1",
        "--witness-out",
        &witness,
    ]);
    assert_eq!(fail.code, 1);
    let check = ncconvex(&["monotone", "--expr", "x1^4", "--g-transform", "--witness", &witness]);
    assert_eq!(check.code, 1);

    let kraus = ncconvex(&[
        "kraus",
        "--atoms",
        "0.5:0.5,-0.25:0.5",
        "--x-tuple",
        "zero2",
        "--trials",
        "50",
    ]);
    assert_eq!(kraus.code, 0, "{}", kraus.stderr);
    let doc = json(&kraus);
    assert_eq!(doc["report"]["convexity"]["pass"], true);
    assert_eq!(doc["report"]["sweep"].as_array().unwrap().len(), 11);
}

#[test]
fn axioms_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let witness = path(dir.path(), "w.json");
    let corpus = ncconvex(&["axioms", "--corpus", "builtin", "--samples", "20"]);
    assert_eq!(corpus.code, 0, "{}", corpus.stdout);
    let trace = ncconvex(&[
        "axioms",
        "--trace-evaluator",
        "--samples",
        "5",
        "--witness-out",
        &witness,
    ]);
    assert_eq!(trace.code, 1);
    let w: Value = serde_json::from_str(&std::fs::read_to_string(&witness).unwrap()).unwrap();
    assert_eq!(w["witness"]["axiom"], "direct_sum");
}

#[test]
fn identical_commands_print_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let args = |file: &str| {
        vec![
            "certify".to_string(),
            "--preset".into(),
            "mixed-ax".into(),
            "--samples".into(),
            "5".into(),
            "--seed".into(),
            "11".into(),
            "--json-out".into(),
            path(dir.path(), file),
        ]
    };
    let first = run(std::iter::once("ncconvex".to_string()).chain(args("one.json")));
    let second = run(std::iter::once("ncconvex".to_string()).chain(args("two.json")));
    assert_eq!(first.code, 0, "{}", first.stderr);
    assert_eq!(first.stdout, second.stdout);
    let written = std::fs::read_to_string(dir.path().join("one.json")).unwrap();
    assert_eq!(written, first.stdout);
}

#[test]
fn errors_exit_with_two() {
    assert_eq!(ncconvex(&["eval", "--x-tuple", "identity2"]).code, 2);
    assert_eq!(ncconvex(&["eval", "--expr", "x1 +", "--x-tuple", "identity2"]).code, 2);
    assert_eq!(
        ncconvex(&["convexity", "--preset", "square", "--epsilon", "-1"]).code,
        2
    );
    assert_eq!(ncconvex(&["convexity", "--preset", "cubic"]).code, 2);
    assert_eq!(
        ncconvex(&["eval", "--expr", "x1", "--x-tuple", "/nonexistent/tuple.json"]).code,
        2
    );
    let both = ncconvex(&["eval", "--expr", "x1", "--preset", "square", "--x-tuple", "identity1"]);
    assert_eq!(both.code, 2);
    assert!(both.stdout.is_empty() && !both.stderr.is_empty());
}
