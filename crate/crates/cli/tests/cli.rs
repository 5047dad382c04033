use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ktour(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ktour"))
        .args(args)
        .env_remove("KTOUR_BUDGET_MS")
        .env_remove("KTOUR_SEED")
        .env_remove("KTOUR_WORKERS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn classify_reports_the_verdict() {
    let no = ktour(&["classify", "3x8"]);
    assert_eq!(code(&no), 1);
    assert_eq!(json(&no)["verdict"]["reason"], "Small3xN");
    let yes = ktour(&["classify", "6,6,6"]);
    assert_eq!(code(&yes), 0);
    assert_eq!(json(&yes)["verdict"]["tourable"], true);
    let text = ktour(&["classify", "4x4x4x4", "--format", "text"]);
    assert!(String::from_utf8_lossy(&text.stdout).contains("tourable"));
}

#[test]
fn classify_generalized_moves_reports_connectivity() {
    let o = ktour(&["classify", "10x10", "--alpha", "3", "--beta", "2"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["connected"], true);
    assert_eq!(v["closed_form_connected"], true);
    let o = ktour(&["classify", "4x4", "--alpha", "3", "--beta", "2"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["tourable"], false);
}

#[test]
fn construct_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("t.json");
    let o = ktour(&["construct", "6x5x4", "-o", path(&file)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc: Value = serde_json::from_str(&fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(doc["cycle"].as_array().unwrap().len(), 120);
    assert!(!doc["metadata"]["trace"].as_array().unwrap().is_empty());
    let v = ktour(&["verify", path(&file)]);
    assert_eq!(code(&v), 0);
    assert_eq!(json(&v)["ok"], true);
}

#[test]
fn construct_refuses_untourable_boards() {
    let o = ktour(&["construct", "2x2x5"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["verdict"]["tourable"], false);
}

#[test]
fn grid_output() {
    let o = ktour(&["construct", "6x6", "--format", "grid"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut visits: Vec<usize> = text.split_whitespace().map(|w| w.parse().unwrap()).collect();
    assert_eq!(text.lines().count(), 6);
    visits.sort_unstable();
    assert_eq!(visits, (1..=36).collect::<Vec<_>>());
    let solid = ktour(&["construct", "4x3x2", "--format", "grid"]);
    assert_eq!(String::from_utf8_lossy(&solid.stdout).matches("layer").count(), 2);
    let four = ktour(&["construct", "4x4x4x4", "--format", "grid"]);
    assert_eq!(code(&four), 2);
    assert!(String::from_utf8_lossy(&four.stderr).contains("JSON"));
}

#[test]
fn grid_of_reimported_tour_is_identical() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("t.json");
    assert_eq!(code(&ktour(&["construct", "8x6", "-o", path(&file)])), 0);
    let direct = ktour(&["construct", "8x6", "--format", "grid"]).stdout;
    let (t, _) = ktour::io::import_document(&fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(ktour::export_grid(&t).unwrap().trim_end(), String::from_utf8(direct).unwrap().trim_end());
}

#[test]
fn verify_rejects_edited_and_truncated_files() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("t.json");
    assert_eq!(code(&ktour(&["construct", "6x6", "-o", path(&file)])), 0);
    let text = fs::read_to_string(&file).unwrap();

    let mut doc: Value = serde_json::from_str(&text).unwrap();
    let first = doc["cycle"][0].clone();
    doc["cycle"][5] = first;
    let edited = dir.path().join("edited.json");
    fs::write(&edited, doc.to_string()).unwrap();
    let o = ktour(&["verify", path(&edited)]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["violation"]["violation"], "duplicate_cell");

    let cut = dir.path().join("cut.json");
    fs::write(&cut, &text[..text.len() / 2]).unwrap();
    assert_eq!(code(&ktour(&["verify", path(&cut)])), 1);

    assert_eq!(code(&ktour(&["verify", path(&dir.path().join("missing.json"))])), 2);
}

#[test]
fn sites_lists_and_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("t.json");
    assert_eq!(code(&ktour(&["construct", "6x6", "-o", path(&file)])), 0);
    let all = json(&ktour(&["sites", path(&file)]));
    assert!(all.as_array().unwrap().len() >= 2);
    let pair = ktour(&["sites", path(&file), "--disjoint"]);
    assert_eq!(code(&pair), 0);
    let pair = json(&pair);
    assert_eq!(pair.as_array().unwrap().len(), 2);
    assert_eq!(pair[0]["cells"].as_array().unwrap().len(), 4);
}

#[test]
fn solve_outcomes_and_exit_codes() {
    let none = ktour(&["solve", "3x4"]);
    assert_eq!(code(&none), 1);
    assert_eq!(json(&none)["outcome"], "proved_none");

    let open = ktour(&["solve", "5x5", "--open", "--start", "1,1"]);
    assert_eq!(code(&open), 0);
    assert_eq!(json(&open)["cycle"][0], serde_json::json!([1, 1]));

    let edge = ktour(&["solve", "6x6", "--require-edge", "1,1:2,3", "--seed", "7"]);
    assert_eq!(code(&edge), 0);

    let args = ["solve", "9x9", "--open", "--start", "1,1", "--end", "9,8", "--budget-ms", "1"];
    let out = ktour(&args);
    assert_eq!(code(&out), 3);
    assert_eq!(json(&out)["outcome"], "exhausted");
}

#[test]
fn solve_reads_the_budget_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_ktour"))
        .args(["solve", "9x9", "--open", "--start", "1,1", "--end", "9,8"])
        .env("KTOUR_BUDGET_MS", "1")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
}

#[test]
fn classify_and_solve_agree_on_small_boards() {
    for d in ["3x4", "4x5", "5x6", "3x10", "2x3x4", "2x2x4", "3x3x4"] {
        let c = code(&ktour(&["classify", d]));
        let s = code(&ktour(&["solve", d]));
        assert_eq!(c, s, "{d}");
    }
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(code(&ktour(&["classify", "0x3"])), 2);
    assert_eq!(code(&ktour(&["classify", "6xq"])), 2);
    assert_eq!(code(&ktour(&["frobnicate"])), 2);
    assert_eq!(code(&ktour(&["solve", "5x5", "--closed", "--open"])), 2);
    assert_eq!(code(&ktour(&["blocks", "regenerate", "--only", "no-such-block"])), 2);
}

#[test]
fn blocks_regenerate_writes_a_loadable_cache() {
    let dir = tempfile::tempdir().unwrap();
    let o = ktour(&["blocks", "regenerate", "--dir", path(dir.path())]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(dir.path().join("manifest.json").is_file());
    let listed = Command::new(env!("CARGO_BIN_EXE_ktour"))
        .args(["blocks", "list"])
        .env("KTOUR_BLOCKS_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(json(&listed)["source"], path(dir.path()));

    let again = ktour(&["blocks", "regenerate", "--dir", path(dir.path()), "--only", "bisited-4x3x2"]);
    assert_eq!(json(&again)["regenerated"], serde_json::json!(["bisited-4x3x2"]));
    assert_eq!(json(&again)["total"], json(&o)["total"]);
}

#[test]
fn bench_prints_a_table() {
    let o = ktour(&["bench", "--max-cells", "2000", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let rows = json(&o);
    assert!(rows.as_array().unwrap().iter().all(|r| r["cells"].as_u64().unwrap() <= 2000));
}
