use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(rel)
}

fn mcwdst(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mcwdst"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn build_tree_writes_edge_list_with_distances() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("tree.edges");
    let input = fixture("mixed.edges");
    let before = fs::read(&input).unwrap();
    let out = mcwdst(&[
        "build-tree",
        "--input",
        input.to_str().unwrap(),
        "--root",
        "r",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(&out_path).unwrap();
    assert!(text.starts_with("# root r\n"));
    assert!(text.contains("b a 1.0 # dist=2.0\n"), "{text}");
    assert!(!text.contains("r a 5.0"));
    // the export re-parses as a plain edge list
    assert_eq!(mcwdst::io::parse_edge_list(&text).unwrap().edge_count(), 5);
    assert_eq!(fs::read(&input).unwrap(), before);
}

#[test]
fn build_tree_from_twitter15_defaults_to_trace_root() {
    let out = mcwdst(&[
        "build-tree",
        "--input",
        fixture("twitter15/tree/1002.txt").to_str().unwrap(),
        "--format",
        "twitter15",
        "--out-format",
        "dot",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let dot = stdout(&out);
    assert!(dot.starts_with("digraph propagation_tree {"));
    assert!(
        dot.contains("\"500:1002\" -> \"501:1002\" [label=\"0.5\"]"),
        "{dot}"
    );
}

#[test]
fn missing_input_exits_1_naming_path() {
    let out = mcwdst(&[
        "build-tree",
        "--input",
        "/no/such/graph.edges",
        "--root",
        "r",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/no/such/graph.edges"));
}

#[test]
fn unknown_root_exits_3() {
    let out = mcwdst(&[
        "build-tree",
        "--input",
        fixture("chain.edges").to_str().unwrap(),
        "--root",
        "nobody",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn parse_error_exits_2_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.edges");
    fs::write(&bad, "a b 1\nb b 2\n").unwrap();
    let out = mcwdst(&[
        "rank",
        "--input",
        bad.to_str().unwrap(),
        "--root",
        "a",
        "--strategy",
        "median",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn rank_json_leaves_score_one_and_truncates() {
    let chain = fixture("chain.edges");
    let args = [
        "rank",
        "--input",
        chain.to_str().unwrap(),
        "--root",
        "r",
        "--strategy",
        "average",
    ];
    let out = mcwdst(&args);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let nodes = v["nodes"].as_array().unwrap();
    assert_eq!(nodes.len(), 4);
    let leaf = nodes.iter().find(|n| n["node"] == "c").unwrap();
    assert_eq!(leaf["rank"].as_f64(), Some(1.0));

    let mut with_k = args.to_vec();
    with_k.extend(["--k", "2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&mcwdst(&with_k))).unwrap();
    assert_eq!(v["nodes"].as_array().unwrap().len(), 2);

    assert_eq!(mcwdst(&args).stdout, out.stdout);
}

#[test]
fn rank_requires_strategy() {
    let out = mcwdst(&[
        "rank",
        "--input",
        fixture("chain.edges").to_str().unwrap(),
        "--root",
        "r",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_writes_policy_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("policies.csv");
    let chain = fixture("chain.edges");
    let args = [
        "simulate",
        "--input",
        chain.to_str().unwrap(),
        "--root",
        "r",
        "--strategy",
        "average,median,ratio",
        "--k",
        "2,1,2",
        "--seed",
        "9",
        "--out",
        out_path.to_str().unwrap(),
    ];
    let out = mcwdst(&args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = fs::read_to_string(&out_path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "k,policy,strategy,saved,reached");
    assert_eq!(lines.len(), 1 + 2 * 5);
    assert_eq!(lines[1], "1,ranked,average,3,1");
    assert!(lines.iter().any(|l| l.starts_with("2,random,-,")));

    mcwdst(&args);
    assert_eq!(fs::read_to_string(&out_path).unwrap(), csv);
}

#[test]
fn simulate_without_seed_skips_random_baseline() {
    let out = mcwdst(&[
        "simulate",
        "--input",
        fixture("chain.edges").to_str().unwrap(),
        "--root",
        "r",
        "--strategy",
        "ratio",
        "--horizon",
        "1.5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = stdout(&out);
    assert!(!csv.contains("random"));
    // 4 budgets x (ranked + out-degree)
    assert_eq!(csv.lines().count(), 1 + 4 * 2);
}

#[test]
fn bench_reports_each_size() {
    let out = mcwdst(&["bench", "--sizes", "1,200:1500,300", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(&rows[0][..2], ["1", "0"]);
    assert_eq!(&rows[1][..2], ["200", "1500"]);
    assert_eq!(&rows[2][..2], ["300", "2700"]);
}

#[test]
fn buckets_over_fixture_corpus() {
    let out = mcwdst(&[
        "buckets",
        "--corpus",
        fixture("twitter15/tree").to_str().unwrap(),
        "--labels",
        fixture("twitter15/label.txt").to_str().unwrap(),
        "--k",
        "5",
        "--mode",
        "per-tree",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("k,f_t,mode,pct_in_1_2,pct_in_2_3,rank_one,below_one\n"));
    assert_eq!(text.lines().count(), 4);
    assert!(text.contains("5,median,per-tree,"));
}
