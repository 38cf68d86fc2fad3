use std::fs;
use std::path::Path;
use std::process::Command;

use lupi_cli::profile::ProfileDocument;
use serde_json::Value;

fn lupi(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_lupi")).args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn usage_errors_exit_one() {
    let (code, _, err) = lupi(&["solve", "--n", "2", "--model", "paper"]);
    assert_eq!(code, 1);
    assert!(err.contains("n must be between 3 and 12"), "{err}");
    assert_eq!(lupi(&["solve", "--n", "13"]).0, 1);
    assert_eq!(lupi(&["frobnicate"]).0, 1);
    assert_eq!(lupi(&["simulate", "--profile", "x.json", "--rounds", "0"]).0, 1);
    assert_eq!(lupi(&["--help"]).0, 0);
}

#[test]
fn solve_reports_nonconvergence_with_status_three() {
    let (code, out, _) = lupi(&["solve", "--n", "4", "--max-iter", "0", "--format", "json"]);
    assert_eq!(code, 3);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["converged"], false);
}

#[test]
fn solve_json_carries_full_precision() {
    let (code, out, _) = lupi(&["solve", "--n", "3", "--model", "exact", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let p1 = v["strategy"][0].as_f64().unwrap();
    assert!((p1 - (2.0 * 3f64.sqrt() - 3.0)).abs() < 1e-9);
    assert_eq!(v["model"], "exact");
}

#[test]
fn all_starts_lists_distinct_roots() {
    let (code, out, _) = lupi(&["solve", "--n", "3", "--all-starts", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["distinct_roots"].as_array().unwrap().len(), 1);
}

#[test]
fn written_profiles_are_read_back_by_every_command() {
    let dir = tempfile::tempdir().unwrap();
    let solved = dir.path().join("ne4.json");
    let approx = dir.path().join("geo5.json");
    assert_eq!(
        lupi(&["solve", "--n", "4", "--model", "exact", "--write-profile", solved.to_str().unwrap()]).0,
        0
    );
    assert_eq!(lupi(&["approx", "--n", "5", "--write-profile", approx.to_str().unwrap()]).0, 0);

    let doc = ProfileDocument::parse(&fs::read_to_string(&solved).unwrap()).unwrap();
    let reloaded = doc.clone().validate().unwrap();
    for (row, s) in doc.strategies.iter().zip(reloaded.profile.strategies()) {
        for (a, b) in row.iter().zip(s.probs()) {
            assert!((a - b).abs() <= 1e-15);
        }
    }

    for path in [&solved, &approx] {
        let p = path.to_str().unwrap();
        assert_eq!(lupi(&["payoff", "--profile", p]).0, 0);
        assert_eq!(lupi(&["simulate", "--profile", p, "--rounds", "1000"]).0, 0);
        assert!(matches!(lupi(&["verify", "--profile", p]).0, 0 | 2));
    }
    // The exact-model root is an equilibrium of the exact game.
    assert_eq!(lupi(&["verify", "--profile", solved.to_str().unwrap()]).0, 0);
}

#[test]
fn verify_exit_status_follows_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let asym4 = write(
        dir.path(),
        "asym4.json",
        r#"{"n":4,"strategies":[[0,0,1,0],[0.5,0.5,0,0],[0.5,0.5,0,0],[0.5,0.5,0,0]]}"#,
    );
    let (code, out, _) = lupi(&["verify", "--profile", &asym4]);
    assert_eq!(code, 0);
    assert!(out.contains("weak"), "{out}");

    let asym3 = write(dir.path(), "asym3.json", r#"{"n":3,"strategies":[[0,0,1],[0.5,0.5,0],[0.5,0.5,0]]}"#);
    let (code, out, _) = lupi(&["verify", "--profile", &asym3, "--format", "csv"]);
    assert_eq!(code, 2);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(
        lines[0],
        "player,label,payoff,best_response_value,gain,best_responses,indifferent_deviations,is_nash"
    );
    assert_eq!(lines[2], "2,player 2,0.25,0.5,0.25,1,,false");
    assert_eq!(lines.last().unwrap(), &"total,,1,,0.25,,,false");

    // The closed-form model is defined only for common opponents.
    assert_eq!(lupi(&["verify", "--profile", &asym3, "--model", "paper"]).0, 1);
}

#[test]
fn malformed_documents_exit_one_with_a_location() {
    let dir = tempfile::tempdir().unwrap();
    let bad_row = write(dir.path(), "bad.json", r#"{"n":2,"strategies":[[1,0],[0.7,0.7]]}"#);
    let (code, _, err) = lupi(&["payoff", "--profile", &bad_row]);
    assert_eq!(code, 1);
    assert!(err.contains("row 2"), "{err}");

    let bad_cell = write(dir.path(), "cell.json", r#"{"n":2,"strategies":[[1,0],[2,-1]]}"#);
    let (code, _, err) = lupi(&["verify", "--profile", &bad_cell]);
    assert_eq!(code, 1);
    assert!(err.contains("row 2, column 1"), "{err}");

    let syntax = write(dir.path(), "syntax.json", "{\"n\":2,\n\"strategies\":[[1,0],[0,1]");
    let (code, _, err) = lupi(&["simulate", "--profile", &syntax]);
    assert_eq!(code, 1);
    assert!(err.contains("line 2"), "{err}");

    assert_eq!(lupi(&["payoff", "--profile", "/nonexistent/p.json"]).0, 1);
}

#[test]
fn best_response_formats() {
    let (code, out, _) =
        lupi(&["best-response", "--n", "3", "--others", "0.5,0.5,0", "0.5,0.5,0", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out, "pick,value,is_best\n1,0.25,false\n2,0.25,false\n3,0.5,true\n");

    let (code, out, _) = lupi(&[
        "best-response",
        "--n",
        "4",
        "--others",
        "0.5,0.5,0,0",
        "0.5,0.5,0,0",
        "0.5,0.5,0,0",
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["argmax"], serde_json::json!([3, 4]));

    assert_eq!(lupi(&["best-response", "--n", "3", "--others", "0.5,0.5,0"]).0, 1);
}

#[test]
fn approx_and_simulate_outputs() {
    let (code, out, _) = lupi(&["approx", "--n", "3", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out, "n,payoff,reference_payoff,p1,p2,p3\n3,0.28125,0.25,0.5,0.25,0.25\n");

    let dir = tempfile::tempdir().unwrap();
    let ones = write(dir.path(), "ones.json", r#"{"n":3,"strategies":[[1,0,0],[1,0,0],[1,0,0]]}"#);
    let (code, out, _) = lupi(&["simulate", "--profile", &ones, "--rounds", "500", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["no_winner_rounds"], 500);
    assert_eq!(v["seed"], 0);

    let p3 = write(dir.path(), "p3.json", r#"{"n":3,"strategies":[[0,0,1],[0.5,0.5,0],[0.5,0.5,0]]}"#);
    let a = lupi(&["simulate", "--profile", &p3, "--rounds", "20000", "--seed", "42", "--format", "csv"]);
    let b = lupi(&["simulate", "--profile", &p3, "--rounds", "20000", "--seed", "42", "--format", "csv"]);
    assert_eq!(a, b);
    let c = lupi(&["simulate", "--profile", &p3, "--rounds", "20000", "--seed", "43", "--format", "csv"]);
    assert_ne!(a.1, c.1);
}

#[test]
fn table_json_keeps_full_precision_next_to_rounded_cells() {
    let (code, out, _) = lupi(&["table", "--max-n", "5", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["n"], serde_json::json!([3, 4, 5]));
    let approx = &v["rows"][0];
    assert_eq!(approx["source"], "approx");
    assert_eq!(approx["values"][0].as_f64().unwrap(), 0.28125);
    assert_eq!(approx["rounded"][0], "0.281");
    assert!(v["rows"][2]["values"][2].is_null());
}
