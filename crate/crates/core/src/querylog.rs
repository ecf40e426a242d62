//! Query logs, pair reduction and the keyword co-occurrence matrix.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;

use crate::error::{Error, Result, Warning};
use crate::text::tokenize;

/// Longest query kept by the parser; longer ones are truncated.
pub const DEFAULT_MAX_QUERY_LEN: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    keywords: Vec<String>,
    count: u64,
}

impl Query {
    pub fn new(keywords: Vec<String>, count: u64) -> Result<Self> {
        if keywords.is_empty() {
            return Err(Error::EmptyQuery);
        }
        if count == 0 {
            return Err(Error::invalid("count", "must be at least 1"));
        }
        Ok(Query { keywords, count })
    }

    /// Tokenizes `text` into keywords.
    pub fn from_text(text: &str, count: u64) -> Result<Self> {
        Query::new(tokenize(text), count)
    }

    pub fn keywords(&self) -> &[String] {
        &self.keywords
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn len(&self) -> usize {
        self.keywords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keywords.is_empty()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QueryLog {
    entries: Vec<Query>,
}

impl QueryLog {
    pub fn new(entries: Vec<Query>) -> Self {
        QueryLog { entries }
    }

    /// Parses `count<TAB>keyword keyword ...` records.
    ///
    /// Blank lines and lines starting with `#` are ignored. Records with no
    /// keywords are skipped and queries longer than `max_len` are truncated;
    /// both produce a warning.
    pub fn parse(text: &str, max_len: usize) -> Result<(QueryLog, Vec<Warning>)> {
        if max_len == 0 {
            return Err(Error::invalid("max query length", "must be at least 1"));
        }
        let mut entries = Vec::new();
        let mut warnings = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            if raw.trim().is_empty() || raw.starts_with('#') {
                continue;
            }
            let (count, rest) = raw.split_once('\t').ok_or_else(|| Error::Malformed {
                line,
                message: "expected `count<TAB>keywords`".into(),
            })?;
            let count: i64 = count.trim().parse().map_err(|_| Error::Malformed {
                line,
                message: format!("count `{}` is not an integer", count.trim()),
            })?;
            if count <= 0 {
                return Err(Error::NonPositiveCount { line });
            }
            let mut keywords = tokenize(rest);
            if keywords.is_empty() {
                warnings.push(Warning::EmptyQuery { line });
                continue;
            }
            if keywords.len() > max_len {
                warnings.push(Warning::QueryTruncated {
                    line,
                    len: keywords.len(),
                    max: max_len,
                });
                keywords.truncate(max_len);
            }
            entries.push(Query {
                keywords,
                count: count as u64,
            });
        }
        Ok((QueryLog { entries }, warnings))
    }

    /// Serializes back into the line format read by [`QueryLog::parse`].
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for q in &self.entries {
            let _ = writeln!(out, "{}\t{}", q.count, q.keywords.join(" "));
        }
        out
    }

    pub fn entries(&self) -> &[Query] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of all query counts.
    pub fn total_units(&self) -> u64 {
        self.entries.iter().map(|q| q.count).sum()
    }

    /// Count-weighted mean query length; 0 for an empty log.
    pub fn mean_length(&self) -> f64 {
        let units = self.total_units();
        if units == 0 {
            return 0.0;
        }
        let weighted: u64 = self.entries.iter().map(|q| q.count * q.len() as u64).sum();
        weighted as f64 / units as f64
    }
}

/// Unordered keyword pair, stored with the lexicographically smaller keyword first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KeywordPair {
    first: String,
    second: String,
}

impl KeywordPair {
    pub fn new(a: &str, b: &str) -> Self {
        let (first, second) = if a <= b { (a, b) } else { (b, a) };
        KeywordPair {
            first: first.into(),
            second: second.into(),
        }
    }

    pub fn first(&self) -> &str {
        &self.first
    }

    pub fn second(&self) -> &str {
        &self.second
    }

    pub fn is_self_pair(&self) -> bool {
        self.first == self.second
    }
}

/// Replaces a query by the two-keyword queries it is equivalent to: all
/// C(n, 2) pairs for n ≥ 2, the self-pair for a single keyword.
pub fn expand_to_pairs(query: &Query) -> Vec<KeywordPair> {
    let kw = query.keywords();
    if kw.len() == 1 {
        return alloc::vec![KeywordPair::new(&kw[0], &kw[0])];
    }
    let mut pairs = Vec::with_capacity(kw.len() * (kw.len() - 1) / 2);
    for (i, a) in kw.iter().enumerate() {
        for b in &kw[i + 1..] {
            pairs.push(KeywordPair::new(a, b));
        }
    }
    pairs
}

/// Symmetric keyword co-occurrence matrix over a bounded vocabulary.
#[derive(Debug, Clone, PartialEq)]
pub struct CooccurrenceMatrix {
    vocab: Vec<String>,
    omega: Vec<f64>,
}

impl CooccurrenceMatrix {
    /// Takes a precomputed matrix as-is (any units). Only the shape and the
    /// vocabulary are checked here; symmetry and finiteness are checked when
    /// the matrix is diagonalized.
    pub fn from_rows(vocab: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = vocab.len();
        if n == 0 {
            return Err(Error::EmptyVocabulary);
        }
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Shape(format!(
                "expected {n}x{n} rows for {n} keywords"
            )));
        }
        let distinct: BTreeSet<&String> = vocab.iter().collect();
        if distinct.len() != n {
            return Err(Error::Shape("vocabulary contains duplicates".into()));
        }
        Ok(CooccurrenceMatrix {
            vocab,
            omega: rows.into_iter().flatten().collect(),
        })
    }

    pub fn vocab(&self) -> &[String] {
        &self.vocab
    }

    pub fn dim(&self) -> usize {
        self.vocab.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.omega[i * self.dim() + j]
    }

    pub fn index_of(&self, keyword: &str) -> Option<usize> {
        self.vocab.iter().position(|k| k == keyword)
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.omega
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.omega.chunks(self.dim()).map(<[f64]>::to_vec).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }
}

/// Builds the co-occurrence matrix of the `vocab_limit` most frequent keywords.
///
/// Entries are count-weighted fractions of query units: the diagonal holds
/// the fraction of units containing a keyword, off-diagonals the fraction
/// containing both keywords. Repeated keywords within one query count once.
pub fn build_cooccurrence(log: &QueryLog, vocab_limit: usize) -> Result<CooccurrenceMatrix> {
    if vocab_limit == 0 {
        return Err(Error::invalid("vocab_limit", "must be at least 1"));
    }
    let total = log.total_units();
    if total == 0 {
        return Err(Error::EmptyLog);
    }

    let distinct: Vec<BTreeSet<&str>> = log
        .entries()
        .iter()
        .map(|q| q.keywords().iter().map(String::as_str).collect())
        .collect();

    let mut weight: BTreeMap<&str, u64> = BTreeMap::new();
    for (q, kws) in log.entries().iter().zip(&distinct) {
        for kw in kws {
            *weight.entry(kw).or_insert(0) += q.count();
        }
    }
    let mut ranked: Vec<(&str, u64)> = weight.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    ranked.truncate(vocab_limit);
    if ranked.is_empty() {
        return Err(Error::EmptyVocabulary);
    }

    let vocab: Vec<String> = ranked.iter().map(|(k, _)| String::from(*k)).collect();
    let index: BTreeMap<&str, usize> = ranked.iter().enumerate().map(|(i, (k, _))| (*k, i)).collect();
    let n = vocab.len();
    let mut counts = alloc::vec![0u64; n * n];

    for (q, kws) in log.entries().iter().zip(&distinct) {
        let present: Vec<String> = kws
            .iter()
            .filter(|k| index.contains_key(*k))
            .map(|k| String::from(*k))
            .collect();
        if present.is_empty() {
            continue;
        }
        for kw in &present {
            let i = index[kw.as_str()];
            counts[i * n + i] += q.count();
        }
        if present.len() < 2 {
            continue;
        }
        let reduced = Query {
            keywords: present,
            count: q.count(),
        };
        for pair in expand_to_pairs(&reduced) {
            let (i, j) = (index[pair.first()], index[pair.second()]);
            counts[i * n + j] += q.count();
            counts[j * n + i] += q.count();
        }
    }

    let total = total as f64;
    Ok(CooccurrenceMatrix {
        vocab,
        omega: counts.into_iter().map(|c| c as f64 / total).collect(),
    })
}
