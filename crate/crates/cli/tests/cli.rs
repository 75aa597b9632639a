use std::fs::File;
use std::path::Path;
use std::process::{Command, Output};

use bloomrf::workloads::{read_queries, read_u64s, write_queries, write_u64s};
use bloomrf::{BloomRf, Query};
use bloomrf_cli::artifact::answer;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bloomrf")).args(args).output().expect("binary runs")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn gen_build_probe_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (keys, queries, filter) = (dir.path().join("k"), dir.path().join("q"), dir.path().join("f"));
    let out = run(&["gen", "--n", "2000", "--dist", "normal", "--keys-out", p(&keys), "--queries-out", p(&queries), "--queries", "3000"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = run(&["build", "--keys", p(&keys), "--out", p(&filter), "--mitigate", "--seed", "5"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = run(&["probe", "--filter", p(&filter), "--queries", p(&queries)]);
    assert!(out.status.success());

    let f = BloomRf::from_bytes(&std::fs::read(&filter).unwrap()).unwrap();
    let qs = read_queries(File::open(&queries).unwrap()).unwrap();
    let lines: Vec<String> = String::from_utf8(out.stdout).unwrap().lines().map(String::from).collect();
    assert_eq!(lines.len(), qs.len());
    for (q, line) in qs.iter().zip(&lines) {
        assert_eq!(line, &answer(&f, *q).unwrap().to_string());
    }
    let inserted = read_u64s(File::open(&keys).unwrap()).unwrap();
    assert!(inserted.iter().all(|&k| f.point_lookup(k)));
}

#[test]
fn bad_query_reports_error_line() {
    let dir = tempfile::tempdir().unwrap();
    let (keys, queries, filter) = (dir.path().join("k"), dir.path().join("q"), dir.path().join("f"));
    let ks: Vec<u64> = (1..=500).map(|i| i * 1000).collect();
    write_u64s(File::create(&keys).unwrap(), &ks).unwrap();
    write_queries(File::create(&queries).unwrap(), &[Query::Point(7000), Query::Range(9, 3), Query::Range(6990, 7010)]).unwrap();
    assert!(run(&["build", "--keys", p(&keys), "--out", p(&filter), "--d", "32"]).status.success());
    let out = run(&["probe", "--filter", p(&filter), "--queries", p(&queries)]);
    assert!(!out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "true");
    assert!(lines[1].starts_with("error:"));
    assert_eq!(lines[2], "true");
}

#[test]
fn corrupt_filter_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let (filter, queries) = (dir.path().join("f"), dir.path().join("q"));
    std::fs::write(&filter, b"not a filter").unwrap();
    write_queries(File::create(&queries).unwrap(), &[Query::Point(1)]).unwrap();
    assert!(!run(&["probe", "--filter", p(&filter), "--queries", p(&queries)]).status.success());
}

#[test]
fn advise_prints_layout() {
    let out = run(&["advise", "--n", "50000000", "--bits-per-key", "14"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("36"), "{text}");

    let kv = run(&["advise", "--n", "50000000", "--bits-per-key", "14", "--kv"]);
    let cfg = bloomrf::model::config_from_kv(&String::from_utf8(kv.stdout).unwrap()).unwrap();
    assert_eq!(cfg.exact_level, Some(36));
}

#[test]
fn infeasible_advise_fails() {
    assert!(!run(&["advise", "--n", "1000", "--bits-per-key", "0.001"]).status.success());
}

#[test]
fn model_table_runs() {
    let out = run(&["model", "--fpr-grid", "0.02", "--range", "64,1024,16384"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 4);
}
