//! End-to-end binary tests: file round trips, output shapes, and the
//! exit-code contract (0 true, 1 false, 2 error).

use std::path::Path;
use std::process::{Command, Output};

use fdgame_cli::fixtures;
use fdgame_core::io::{self, QueryDoc};

fn fdgame(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fdgame"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_query(path: &Path, graph: &fdgame_core::graph::Graph, hypotheses: &[&str], goal: &str) {
    let doc = QueryDoc {
        graph: io::GraphField::Inline(io::GraphDoc::from_graph(graph)),
        hypotheses: hypotheses.iter().map(|s| s.to_string()).collect(),
        goal: goal.to_string(),
    };
    std::fs::write(path, serde_json::to_string_pretty(&doc).unwrap()).unwrap();
}

#[test]
fn nash_listing_and_vacuity() {
    let dir = tempfile::tempdir().unwrap();
    io::save_game(&dir.path().join("table1.json"), &fixtures::table1_game()).unwrap();
    let out = fdgame(&["nash", "table1.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "a=a1 b=b1\na=a2 b=b2\n");

    io::save_game(&dir.path().join("mp.json"), &fixtures::matching_pennies_game()).unwrap();
    let out = fdgame(&["nash", "mp.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("no pure equilibria"));

    // guard overflow
    let out = fdgame(&["nash", "table1.json", "--guard", "1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn models_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    io::save_game(&dir.path().join("table2.json"), &fixtures::table2_game()).unwrap();
    let yes = fdgame(&["models", "table2.json", "a |> b"], dir.path());
    assert_eq!(yes.status.code(), Some(0));
    assert_eq!(stdout(&yes), "true\n");
    let no = fdgame(&["models", "table2.json", "b |> a"], dir.path());
    assert_eq!(no.status.code(), Some(1));
    assert_eq!(stdout(&no), "false\n");
    let err = fdgame(&["models", "table2.json", "zz |> a"], dir.path());
    assert_eq!(err.status.code(), Some(2));
}

#[test]
fn derive_with_trace_and_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let g1 = fixtures::gamma1();
    write_query(&dir.path().join("prop1.json"), &g1, &[], "a |> d -> b,c |> d");
    let out = fdgame(&["derive", "prop1.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "derivable\n");

    let g3 = fixtures::gamma3();
    write_query(&dir.path().join("blocked.json"), &g3, &[], "a |> c -> b |> c");
    let out = fdgame(&["derive", "blocked.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "not derivable\n");

    write_query(&dir.path().join("atom.json"), &g1, &["a |> d"], "b,c |> d");
    let traced = fdgame(&["derive", "atom.json", "--trace"], dir.path());
    assert_eq!(traced.status.code(), Some(0));
    let text = stdout(&traced);
    assert!(text.starts_with("derivable\n1. "), "got: {}", text);
    assert!(text.contains("Contiguity"), "got: {}", text);
    let oracled = fdgame(&["derive", "atom.json", "--oracle"], dir.path());
    assert_eq!(oracled.status.code(), Some(0));
    // oracle needs an atom goal
    let bad = fdgame(&["derive", "prop1.json", "--oracle"], dir.path());
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn counterexample_writes_replayable_file() {
    let dir = tempfile::tempdir().unwrap();
    let g3 = fixtures::gamma3();
    write_query(&dir.path().join("q.json"), &g3, &["a |> c"], "b |> c");
    let out = fdgame(
        &["counterexample", "q.json", "--out", "cx.json"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {:?}", out);
    assert!(stdout(&out).contains("refuted: b |> c"));

    let (game, refuted, profiles) = io::load_counterexample(&dir.path().join("cx.json")).unwrap();
    assert_eq!(profiles.len(), 2);
    assert!(game.is_nash(&profiles[0]));
    assert!(game.is_nash(&profiles[1]));
    assert!(profiles[0].agrees_on(&profiles[1], refuted.lhs));
    assert!(!profiles[0].agrees_on(&profiles[1], refuted.rhs));

    // derivable goal: no counterexample
    write_query(&dir.path().join("refl.json"), &g3, &[], "a,b |> a");
    let out = fdgame(&["counterexample", "refl.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fuzz_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    io::save_graph(&dir.path().join("g.json"), &fixtures::gamma3()).unwrap();
    let args = ["fuzz", "g.json", "--seed", "7", "--samples", "5"];
    let first = fdgame(&args, dir.path());
    let second = fdgame(&args, dir.path());
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    assert!(stdout(&first).contains("0 violations"));

    let empty = fdgame(&["fuzz", "g.json", "--samples", "0"], dir.path());
    assert_eq!(empty.status.code(), Some(0));
    assert!(stdout(&empty).contains("pass: 0 games"));
}

#[test]
fn graph_validate() {
    let dir = tempfile::tempdir().unwrap();
    io::save_graph(&dir.path().join("g.json"), &fixtures::gamma5()).unwrap();
    let out = fdgame(&["graph", "validate", "g.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "ok: 6 vertices, 6 edges\n");

    std::fs::write(dir.path().join("bad.json"), "{").unwrap();
    let out = fdgame(&["graph", "validate", "bad.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}
