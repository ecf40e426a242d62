use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn voxpop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_voxpop"))
        .args(args)
        .env_remove("VOXPOP_CONFIG")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) {
    let out = voxpop(args);
    assert!(out.status.success(), "voxpop {args:?}: {}", String::from_utf8_lossy(&out.stderr));
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// A small labeled web in `<tmp>/web`.
fn web() -> (TempDir, PathBuf, PathBuf) {
    let tmp = tempfile::tempdir().unwrap();
    let web = tmp.path().join("web");
    ok(&["synth", "--out", s(&web), "--seed", "3", "--domains", "30"]);
    let (corpus, queries) = (web.join("corpus.jsonl"), web.join("queries.tsv"));
    (tmp, corpus, queries)
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn missing_corpus_is_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = s(tmp.path());
    assert_eq!(voxpop(&["ingest", "--out", out]).status.code(), Some(2));
    assert_eq!(voxpop(&["ingest", "--corpus", "/nonexistent/c.jsonl", "--out", out]).status.code(), Some(2));
    assert_eq!(voxpop(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(voxpop(&["cycle", "--alpha", "-1", "--out", out]).status.code(), Some(2));
}

#[test]
fn domain_errors_exit_one() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.jsonl");
    fs::write(&bad, "{\"url\":\"u\",\"domain\":\"a\"}\nnot json\n").unwrap();
    let out = voxpop(&["ingest", "--corpus", s(&bad), "--out", s(&tmp.path().join("o"))]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains(":2:"));
}

#[test]
fn unwritable_output_exits_one() {
    let (tmp, corpus, _) = web();
    let blocker = tmp.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let out = voxpop(&["ingest", "--corpus", s(&corpus), "--out", s(&blocker.join("sub"))]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn stages_compose_into_one_cycle() {
    let (tmp, corpus, queries) = web();
    let (sep, one) = (tmp.path().join("separate"), tmp.path().join("cycle"));
    let common = ["--corpus", s(&corpus), "--queries", s(&queries)];
    for stage in ["ingest", "analyze", "allocate"] {
        ok(&[&[stage, "--out", s(&sep)][..], &common[..]].concat());
    }
    ok(&[&["cycle", "--n", "1", "--out", s(&one)][..], &common[..]].concat());
    for f in ["ingest.csv", "ingest.json", "eigenreport.json", "budget.csv", "budget.json"] {
        assert_eq!(fs::read(sep.join(f)).unwrap(), fs::read(one.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn alpha_only_changes_budget_and_reveal_fields() {
    let (tmp, corpus, queries) = web();
    let run = |alpha: &str| {
        let out = tmp.path().join(format!("a{alpha}"));
        ok(&["cycle", "--n", "2", "--alpha", alpha, "--corpus", s(&corpus), "--queries", s(&queries), "--out", s(&out)]);
        json(&out.join("cycle_trace.json"))
    };
    let (off, on) = (run("0"), run("1"));
    assert_ne!(off, on);
    for (a, b) in off.as_array().unwrap().iter().zip(on.as_array().unwrap()) {
        assert_eq!(a["cycle"], b["cycle"]);
        assert_eq!(a["eigenqueries"], b["eigenqueries"]);
        for (x, y) in a["domains"].as_array().unwrap().iter().zip(b["domains"].as_array().unwrap()) {
            for key in ["domain", "static_rank", "baseline"] {
                assert_eq!(x[key], y[key]);
            }
        }
    }
}

#[test]
fn resumed_cycles_match_one_long_run() {
    let (tmp, corpus, queries) = web();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let common = ["--corpus", s(&corpus), "--queries", s(&queries)];
    ok(&[&["cycle", "--n", "2", "--out", s(&a)][..], &common[..]].concat());
    ok(&[&["cycle", "--n", "1", "--out", s(&b)][..], &common[..]].concat());
    let state = b.join("state.json");
    let resumed = tmp.path().join("c");
    ok(&[&["cycle", "--n", "1", "--state", s(&state), "--out", s(&resumed)][..], &common[..]].concat());
    assert_eq!(fs::read(a.join("state.json")).unwrap(), fs::read(resumed.join("state.json")).unwrap());
    assert_eq!(json(&a.join("state.json"))["cycle_index"], 2);
}

#[test]
fn spamscan_flags_exactly_the_labeled_farms() {
    let (tmp, corpus, _) = web();
    let out = tmp.path().join("scan");
    ok(&["spamscan", "--corpus", s(&corpus), "--sigma2-critical", "0.9", "--out", s(&out)]);
    let labels = json(&corpus.with_file_name("labels.json"));
    let spam: BTreeSet<String> = labels
        .as_object()
        .unwrap()
        .values()
        .filter(|l| l["type"] == "spam")
        .map(|l| l["target"].as_str().unwrap().to_string())
        .collect();
    assert!(!spam.is_empty());
    let flagged: BTreeSet<String> = json(&out.join("spamscan.json"))
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["verdict"] == "spam")
        .map(|r| r["target_domain"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(flagged, spam);
}

#[test]
fn csv_and_json_reports_have_equal_rows() {
    let (tmp, corpus, queries) = web();
    let out = tmp.path().join("all");
    ok(&["report", "--corpus", s(&corpus), "--queries", s(&queries), "--out", s(&out)]);
    for stem in ["ingest", "ranking", "budget", "spamscan"] {
        let mut rdr = csv::Reader::from_path(out.join(format!("{stem}.csv"))).unwrap();
        let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
        let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
        let arr = json(&out.join(format!("{stem}.json")));
        let arr = arr.as_array().unwrap();
        assert_eq!(rows.len(), arr.len(), "{stem}");
        for (row, obj) in rows.iter().zip(arr) {
            let keys: Vec<&String> = obj.as_object().unwrap().keys().collect();
            assert_eq!(keys, header.iter().collect::<Vec<_>>());
            for (field, key) in row.iter().zip(&header) {
                let v = &obj[key];
                let text = v.as_str().map(String::from).unwrap_or_else(|| v.to_string());
                assert_eq!(field, text, "{stem}.{key}");
            }
        }
    }
    assert!(out.join("cycle_trace.json").is_file());
    assert!(out.join("eigenreport.json").is_file());
}

#[test]
fn empty_scan_gives_header_only_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let corpus = tmp.path().join("c.jsonl");
    fs::write(&corpus, "{\"url\":\"http://a/\",\"domain\":\"a\",\"elements\":{\"body\":\"hello\"}}\n").unwrap();
    let out = tmp.path().join("o");
    ok(&["spamscan", "--corpus", s(&corpus), "--out", s(&out)]);
    assert_eq!(fs::read_to_string(out.join("spamscan.csv")).unwrap(), "target_domain,n_inlinks,r0,sigma2,verdict\n");
    assert_eq!(fs::read_to_string(out.join("spamscan.json")).unwrap(), "[]\n");
}

#[test]
fn format_flag_limits_outputs() {
    let (tmp, corpus, _) = web();
    let out = tmp.path().join("o");
    ok(&["ingest", "--corpus", s(&corpus), "--out", s(&out), "--format", "csv"]);
    assert!(out.join("ingest.csv").is_file());
    assert!(!out.join("ingest.json").exists());
}

#[test]
fn rank_uses_explicit_query() {
    let (tmp, corpus, _) = web();
    let out = tmp.path().join("o");
    ok(&["rank", "--corpus", s(&corpus), "--query", "mp3 download", "--out", s(&out)]);
    let rows = json(&out.join("ranking.json"));
    let rows = rows.as_array().unwrap();
    assert!(!rows.is_empty());
    let combined: Vec<f64> = rows.iter().map(|r| r["combined"].as_f64().unwrap()).collect();
    assert!(combined.windows(2).all(|w| w[0] >= w[1]));
}

#[test]
fn config_file_from_environment_with_flag_override() {
    let (tmp, corpus, queries) = web();
    let cfg = tmp.path().join("voxpop.json");
    fs::write(
        &cfg,
        format!(
            r#"{{"corpus": "{}", "queries": "{}", "out": "from-config", "vpa": {{"alpha": 0.0}}, "formats": ["json"]}}"#,
            s(&corpus),
            s(&queries)
        ),
    )
    .unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_voxpop"))
        .args(["allocate", "--alpha", "2"])
        .env("VOXPOP_CONFIG", &cfg)
        .status()
        .unwrap();
    assert!(status.success());
    let budget = json(&tmp.path().join("from-config").join("budget.json"));
    let boosted = budget.as_array().unwrap().iter().any(|r| r["correction"].as_f64().unwrap() > 1.0);
    assert!(boosted, "flag --alpha 2 should override alpha 0 from the file");
    assert!(!tmp.path().join("from-config").join("budget.csv").exists());
}
