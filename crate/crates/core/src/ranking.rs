//! Dynamic, static, combined and domain-level relevancy ranks.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::corpus::{keyword_density, Corpus, Document, Domain, ElementKind};
use crate::error::{Error, Result};
use crate::spectral::EigenQuery;

/// Per-element weights μ_k. Keyword hits in the url count most.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankWeights {
    mu: [f64; 6],
}

impl Default for RankWeights {
    fn default() -> Self {
        RankWeights {
            mu: [10.0, 5.0, 3.0, 3.0, 2.0, 1.0],
        }
    }
}

impl RankWeights {
    /// Starts from the defaults and overrides the listed kinds.
    pub fn new<I>(overrides: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ElementKind, f64)>,
    {
        let mut w = RankWeights::default();
        for (kind, mu) in overrides {
            w.mu[kind.index()] = mu;
        }
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if self.mu.iter().any(|m| !m.is_finite() || *m < 0.0) {
            return Err(Error::invalid("rank weights", "must be finite and nonnegative"));
        }
        if self.mu.iter().all(|m| *m == 0.0) {
            return Err(Error::invalid("rank weights", "at least one weight must be positive"));
        }
        Ok(())
    }

    pub fn get(&self, kind: ElementKind) -> f64 {
        self.mu[kind.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (ElementKind, f64)> + '_ {
        ElementKind::ALL.into_iter().map(|k| (k, self.get(k)))
    }
}

/// R¹_d(q) = Σ_k μ_k ρ^k(q).
pub fn single_keyword_rank(doc: &Document, keyword: &str, weights: &RankWeights) -> f64 {
    weights
        .iter()
        .filter(|(_, mu)| *mu != 0.0)
        .map(|(kind, mu)| mu * keyword_density(doc, keyword, kind))
        .sum()
}

/// Query-dependent document score: the product of single-keyword ranks.
pub fn dynamic_rank<S: AsRef<str>>(doc: &Document, query: &[S], weights: &RankWeights) -> Result<f64> {
    if query.is_empty() {
        return Err(Error::EmptyQuery);
    }
    Ok(query
        .iter()
        .map(|kw| single_keyword_rank(doc, kw.as_ref(), weights))
        .product())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaticRankConfig {
    pub damping: f64,
    /// L1 change between iterates below which the iteration stops.
    pub tolerance: f64,
    pub max_iters: usize,
}

impl Default for StaticRankConfig {
    fn default() -> Self {
        StaticRankConfig {
            damping: 0.85,
            tolerance: 1e-9,
            max_iters: 1000,
        }
    }
}

impl StaticRankConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.damping > 0.0 && self.damping < 1.0) {
            return Err(Error::invalid("damping", "must lie strictly between 0 and 1"));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::invalid("tolerance", "must be positive"));
        }
        if self.max_iters == 0 {
            return Err(Error::invalid("max_iters", "must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StaticRanks {
    ranks: BTreeMap<String, f64>,
    damping: f64,
    iterations_used: usize,
}

impl StaticRanks {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.ranks.get(name).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.ranks.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn as_map(&self) -> &BTreeMap<String, f64> {
        &self.ranks
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn damping(&self) -> f64 {
        self.damping
    }

    pub fn iterations_used(&self) -> usize {
        self.iterations_used
    }

    /// Sum of all ranks; equals the node count when mass is conserved.
    pub fn total(&self) -> f64 {
        self.ranks.values().sum()
    }
}

/// Damped link-rank fixed point over every node of the domain graph.
///
/// R(D) = (1 - d) + d Σ_j R_j / M_j, iterated from all ones. Domains without
/// outlinks spread their rank uniformly over all nodes; self-loops are ignored.
pub fn static_rank(corpus: &Corpus, config: &StaticRankConfig) -> Result<StaticRanks> {
    config.validate()?;
    let names = corpus.node_names();
    if names.is_empty() {
        return Err(Error::invalid("corpus", "has no domains"));
    }
    let index: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (*n, i)).collect();
    let graph = corpus.link_graph();
    let incoming: Vec<Vec<usize>> = names
        .iter()
        .map(|n| graph.sources(n).map(|s| index[s]).collect())
        .collect();
    let out_degree: Vec<f64> = names.iter().map(|n| graph.out_degree(n) as f64).collect();

    let n = names.len();
    let d = config.damping;
    let mut rank = alloc::vec![1.0; n];
    let mut next = alloc::vec![0.0; n];
    let mut change = f64::INFINITY;
    for iteration in 1..=config.max_iters {
        let dangling: f64 = (0..n).filter(|&i| out_degree[i] == 0.0).map(|i| rank[i]).sum();
        let spread = dangling / n as f64;
        for (i, sources) in incoming.iter().enumerate() {
            let inflow: f64 = sources.iter().map(|&j| rank[j] / out_degree[j]).sum();
            next[i] = (1.0 - d) + d * (inflow + spread);
        }
        change = rank.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        core::mem::swap(&mut rank, &mut next);
        if change < config.tolerance {
            return Ok(StaticRanks {
                ranks: names.iter().map(|s| s.to_string()).zip(rank).collect(),
                damping: d,
                iterations_used: iteration,
            });
        }
    }
    Err(Error::StaticRankNoConvergence {
        iterations: config.max_iters,
        last_change: change,
        last: names.iter().map(|s| s.to_string()).zip(rank).collect(),
    })
}

/// R_ds = R_d · R_s.
pub fn combined_rank(dynamic: f64, stat: f64) -> f64 {
    dynamic * stat
}

/// Static rank of a document: the rank of its domain (0 when unranked).
pub fn document_static_rank(doc: &Document, ranks: &StaticRanks) -> f64 {
    ranks.get(doc.domain()).unwrap_or(0.0)
}

/// Per-document eigenquery score Σ_i c_i R¹_d(q_i).
pub fn eigenquery_score(doc: &Document, eq: &EigenQuery, weights: &RankWeights) -> f64 {
    eq.terms
        .iter()
        .map(|(kw, c)| c * single_keyword_rank(doc, kw, weights))
        .sum()
}

/// Eigenquery score summed over a set of documents.
pub fn documents_rank<'a, I>(documents: I, eq: &EigenQuery, weights: &RankWeights) -> f64
where
    I: IntoIterator<Item = &'a Document>,
{
    documents
        .into_iter()
        .map(|d| eigenquery_score(d, eq, weights))
        .sum()
}

/// R_D(e) = Σ over the domain's documents of the eigenquery score.
pub fn domain_rank(domain: &Domain, eq: &EigenQuery, weights: &RankWeights) -> f64 {
    documents_rank(domain.documents(), eq, weights)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedDocument {
    pub domain: String,
    pub url: String,
    pub dynamic: f64,
    pub stat: f64,
    pub combined: f64,
}

/// Scores every document for a plain user query, best first (ties by url).
pub fn rank_documents<S: AsRef<str>>(
    corpus: &Corpus,
    query: &[S],
    weights: &RankWeights,
    ranks: &StaticRanks,
) -> Result<Vec<RankedDocument>> {
    let mut out = corpus
        .documents()
        .map(|doc| {
            let dynamic = dynamic_rank(doc, query, weights)?;
            let stat = document_static_rank(doc, ranks);
            Ok(RankedDocument {
                domain: doc.domain().to_string(),
                url: doc.url().to_string(),
                dynamic,
                stat,
                combined: combined_rank(dynamic, stat),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| b.combined.total_cmp(&a.combined).then_with(|| a.url.cmp(&b.url)));
    Ok(out)
}
