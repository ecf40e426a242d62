//! Corpus, query-log, label and crawl-state files.
//!
//! The corpus is JSON Lines, one document per line:
//!
//! ```text
//! {"url":"https://a.example/x","domain":"a.example","elements":{"title":"free mp3"},"outlinks":["b.example"]}
//! ```
//!
//! Query logs are `count<TAB>keywords` lines; `#` starts a comment.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use voxpop_core::corpus::{Corpus, Document, ElementKind};
use voxpop_core::querylog::QueryLog;
use voxpop_core::synthweb::{ClusterKind, ClusterLabel};
use voxpop_core::vpa::CrawlState;
use voxpop_core::Warning;

use crate::error::{CliError, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DocumentRecord {
    url: String,
    domain: String,
    #[serde(default)]
    elements: BTreeMap<String, String>,
    #[serde(default)]
    outlinks: Vec<String>,
}

/// Reads an input file; a missing file is a usage error.
pub fn read_input(path: &Path, what: &str) -> Result<String> {
    if !path.is_file() {
        return Err(CliError::usage(format!("{what} file not found: {}", path.display())));
    }
    fs::read_to_string(path).map_err(CliError::io(path))
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(CliError::io(dir))?;
    }
    fs::write(path, contents).map_err(CliError::io(path))
}

pub fn parse_corpus(text: &str, path: &Path) -> Result<(Corpus, Vec<Warning>)> {
    let mut docs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let parse_err = |message: String| CliError::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message,
        };
        let rec: DocumentRecord = serde_json::from_str(line).map_err(|e| parse_err(e.to_string()))?;
        let mut doc = Document::new(rec.url, rec.domain);
        for (kind, body) in &rec.elements {
            let kind: ElementKind = kind.parse().map_err(|e: voxpop_core::Error| parse_err(e.to_string()))?;
            doc = doc.with_element(kind, body);
        }
        for target in rec.outlinks {
            doc = doc.with_outlink(target);
        }
        docs.push(doc);
    }
    Ok(Corpus::from_documents(docs)?)
}

pub fn read_corpus(path: &Path) -> Result<(Corpus, Vec<Warning>)> {
    parse_corpus(&read_input(path, "corpus")?, path)
}

/// One JSON line per document, in domain then url order; element keys in
/// canonical kind order.
pub fn corpus_to_jsonl(corpus: &Corpus) -> String {
    let mut out = String::new();
    for doc in corpus.documents() {
        let mut elements = serde_json::Map::new();
        for kind in ElementKind::ALL {
            if let Some(e) = doc.element(kind) {
                elements.insert(kind.as_str().into(), e.text().into());
            }
        }
        let line = serde_json::json!({
            "url": doc.url(),
            "domain": doc.domain(),
            "elements": elements,
            "outlinks": doc.outlinks().iter().collect::<Vec<_>>(),
        });
        out.push_str(&line.to_string());
        out.push('\n');
    }
    out
}

pub fn read_queries(path: &Path, max_len: usize) -> Result<(QueryLog, Vec<Warning>)> {
    let text = read_input(path, "query log")?;
    QueryLog::parse(&text, max_len).map_err(|e| match e {
        voxpop_core::Error::Malformed { line, message } => CliError::Parse {
            path: path.to_path_buf(),
            line,
            message,
        },
        other => other.into(),
    })
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
struct LabelRecord {
    #[serde(rename = "type")]
    kind: String,
    target: String,
    members: Vec<String>,
}

/// Labels as a JSON object keyed by cluster id.
pub fn labels_to_json(labels: &[ClusterLabel]) -> String {
    let map: BTreeMap<&str, LabelRecord> = labels
        .iter()
        .map(|l| {
            (
                l.id.as_str(),
                LabelRecord {
                    kind: l.kind.as_str().into(),
                    target: l.target.clone(),
                    members: l.members.clone(),
                },
            )
        })
        .collect();
    serde_json::to_string_pretty(&map).expect("labels serialize") + "\n"
}

pub fn parse_labels(text: &str) -> std::result::Result<Vec<ClusterLabel>, String> {
    let map: BTreeMap<String, LabelRecord> = serde_json::from_str(text).map_err(|e| e.to_string())?;
    map.into_iter()
        .map(|(id, r)| {
            let kind: ClusterKind = r.kind.parse().map_err(|e: voxpop_core::Error| e.to_string())?;
            Ok(ClusterLabel {
                id,
                kind,
                target: r.target,
                members: r.members,
            })
        })
        .collect()
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateRecord {
    cycle_index: u64,
    revealed: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    credit: BTreeMap<String, f64>,
}

pub fn state_to_json(state: &CrawlState) -> String {
    let rec = StateRecord {
        cycle_index: state.cycle_index(),
        revealed: state
            .revealed()
            .iter()
            .map(|(d, urls)| (d.clone(), urls.iter().cloned().collect()))
            .collect(),
        credit: state.credits().clone(),
    };
    serde_json::to_string_pretty(&rec).expect("state serializes") + "\n"
}

pub fn read_state(path: &Path, corpus: &Corpus) -> Result<CrawlState> {
    let text = read_input(path, "crawl state")?;
    let rec: StateRecord = serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        message: e.to_string(),
    })?;
    let state = CrawlState::from_parts(
        rec.revealed.into_iter().map(|(d, u)| (d, u.into_iter().collect())).collect(),
        rec.credit,
        rec.cycle_index,
    );
    if !state.is_consistent_with(corpus) {
        return Err(CliError::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: "crawl state names documents that are not in the corpus".into(),
        });
    }
    Ok(state)
}
