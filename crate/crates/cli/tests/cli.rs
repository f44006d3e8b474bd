use std::process::{Command, Output};

fn graphburn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graphburn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, serde_json::Value) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = graphburn(&full);
    let code = out.status.code().unwrap();
    (code, serde_json::from_slice(&out.stdout).expect("json report"))
}

#[test]
fn burn_examples() {
    let (code, r) = json(&["burn", "path:16"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["burning_number"], 4);
    let (_, r) = json(&["burn", "spider:5,5,6"]);
    assert_eq!(r["result"]["burning_number"], 4);
    let (code, r) = json(&["burn", "dspider:3,3/3", "--m", "3"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["burnable"], false);
}

#[test]
fn burn_reads_edge_lists_and_reports_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("p4.txt");
    std::fs::write(&good, "n 4\n0 1\n1 2\n2 3\n").unwrap();
    let (code, r) = json(&["burn", good.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["burning_number"], 2);

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "n 3\n0 1\n1 7\n").unwrap();
    let out = graphburn(&["burn", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn budget_cut_exits_two() {
    let (code, r) = json(&["burn", "path:40", "--m", "7", "--budget-nodes", "1"]);
    assert_eq!(code, 2);
    assert_eq!(r["status"], "inconclusive");
    let (code, r) = json(&["burn", "spider:9,9,9,9", "--budget-nodes", "1"]);
    assert_eq!(code, 2);
    assert!(r["result"]["bounds"].is_array());
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(graphburn(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(graphburn(&["burn", "cycle:5"]).status.code(), Some(1));
    assert_eq!(graphburn(&["pf", "3,0", "--m", "2"]).status.code(), Some(1));
    assert_eq!(graphburn(&["pf", "3,2"]).status.code(), Some(1));
    assert_eq!(graphburn(&["chain", "5,3"]).status.code(), Some(1));
    assert_eq!(graphburn(&["chain", "16"]).status.code(), Some(1));
    assert_eq!(
        graphburn(&["--budget-secs", "0", "burn", "path:3"]).status.code(),
        Some(1)
    );
    assert_eq!(graphburn(&["--help"]).status.code(), Some(0));
}

#[test]
fn pf_examples() {
    let (_, r) = json(&["pf", "13,1,1", "--m", "4"]);
    assert_eq!(r["result"]["burnable"], false);
    assert_eq!(r["result"]["exceptional_clause"], "I");
    let (_, r) = json(&["pf", "7,5,2", "--m", "4"]);
    assert_eq!(r["result"]["burnable"], true);
    assert_eq!(r["result"]["guarantee"], "three-paths");
    let (code, r) = json(&["pf", "verify", "--n", "3", "--m", "3..8"]);
    assert_eq!(code, 0);
    let reports = r["result"]["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 6);
    assert!(reports.iter().all(|r| r["violations"].as_array().unwrap().is_empty()));
}

#[test]
fn csv_columns_are_fixed() {
    let out = graphburn(&["pf", "verify", "--n", "3", "--m", "3..4", "--format", "csv"]);
    assert_eq!(
        stdout(&out),
        "n,m,checked,burnable,exceptional,violations\n3,3,12,11,1,0\n3,4,96,91,5,0\n"
    );
    let out = graphburn(&["pf", "7,5,2", "--m", "4", "--format", "csv"]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("forest,m,burnable,clause,guarantee,assignment"));
    assert!(lines.next().unwrap().starts_with("\"(7,5,2)\",4,true,None,three-paths,"));
}

#[test]
fn chain_and_ln() {
    let (code, r) = json(&["chain", "17,15,4"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["open_leaves"].as_array().unwrap().len(), 0);
    assert!(r["result"]["chains"]
        .as_array()
        .unwrap()
        .contains(&serde_json::json!("(17,15,4) < (17,17,15) < (30,17,17)")));

    let (code, _) = json(&["chain", "7,2", "--max-m", "6"]);
    assert_eq!(code, 2);

    let dir = tempfile::tempdir().unwrap();
    let evidence = dir.path().join("l2.json");
    let cache = dir.path().join("cache.txt");
    let (code, r) = json(&[
        "ln",
        "--n",
        "2",
        "--evidence",
        evidence.to_str().unwrap(),
        "--cache",
        cache.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["value"], 3);
    let saved: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&evidence).unwrap()).unwrap();
    assert_eq!(saved["evidence"]["verdict"], "certified");
    assert!(!std::fs::read_to_string(&cache).unwrap().is_empty());
    let (_, r) = json(&["ln", "--n", "3"]);
    assert_eq!(r["result"]["value"], 18);
}

#[test]
fn ds_commands() {
    let (_, r) = json(&["ds", "3,3/3", "--m", "3"]);
    assert_eq!(r["result"]["burnable"], false);
    let (code, r) = json(&["ds", "verify", "--m", "5", "--n", "3"]);
    assert_eq!(code, 0);
    assert!(r["result"]["violations"].as_array().unwrap().is_empty());
    let (_, a) = json(&["ds", "verify", "--m", "6", "--n", "5", "--samples", "20", "--seed", "9"]);
    assert_eq!(a["result"]["instances"], 20);
    assert_eq!(a["config"]["seed"], 9);
}

#[test]
fn reports_are_deterministic() {
    let args = ["ds", "verify", "--m", "6", "--n", "5", "--samples", "30", "--seed", "3", "--format", "json"];
    let a = graphburn(&args);
    let b = graphburn(&args);
    assert_eq!(a.stdout, b.stdout);
    let r: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(r["versions"]["graphburn"], "0.1.0");
    assert_eq!(r["config"]["command"]["action"]["samples"], 30);
}
