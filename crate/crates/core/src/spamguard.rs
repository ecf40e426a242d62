//! Link-spam cluster detection.
//!
//! The sites linking to a target form a cluster. Grown clusters draw their
//! in-links from sites of very different standing; generated link farms
//! consist of look-alike sites of about the same static rank. The width
//! (variance) of the in-link rank distribution separates the two: a cluster
//! is flagged when its variance falls below a critical value.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::ranking::StaticRanks;

pub const DEFAULT_SIGMA2_CRITICAL: f64 = 0.9;
pub const DEFAULT_MIN_SAMPLES: usize = 5;

/// Scale on which in-link ranks are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RankScale {
    /// The static rank as computed.
    Raw,
    /// log2(R / (1 - d)): 0 for a site nobody links to, +1 per doubling.
    #[default]
    Toolbar,
}

impl RankScale {
    pub fn as_str(self) -> &'static str {
        match self {
            RankScale::Raw => "raw",
            RankScale::Toolbar => "toolbar",
        }
    }

    /// Maps a static rank computed with damping `damping` onto this scale.
    pub fn apply(self, rank: f64, damping: f64) -> f64 {
        match self {
            RankScale::Raw => rank,
            RankScale::Toolbar => libm::log2(rank / (1.0 - damping)),
        }
    }
}

impl core::str::FromStr for RankScale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw" => Ok(RankScale::Raw),
            "toolbar" => Ok(RankScale::Toolbar),
            other => Err(Error::invalid("rank scale", alloc::format!("`{other}` (expected raw or toolbar)"))),
        }
    }
}

/// Every static rank mapped onto `scale`.
pub fn scaled_ranks(ranks: &StaticRanks, scale: RankScale) -> BTreeMap<String, f64> {
    ranks
        .iter()
        .map(|(k, r)| (k.to_string(), scale.apply(r, ranks.damping())))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkRankDistribution {
    pub target: String,
    pub samples: Vec<f64>,
    /// Mean of the samples (0 when there are none).
    pub r0: f64,
    /// Population variance of the samples (0 when there are none).
    pub sigma2: f64,
}

impl LinkRankDistribution {
    pub fn from_samples(target: impl Into<String>, samples: Vec<f64>) -> Self {
        let n = samples.len() as f64;
        let (r0, sigma2) = if samples.is_empty() {
            (0.0, 0.0)
        } else {
            let mean = samples.iter().sum::<f64>() / n;
            let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
            (mean, var)
        };
        LinkRankDistribution {
            target: target.into(),
            samples,
            r0,
            sigma2,
        }
    }

    pub fn n_samples(&self) -> usize {
        self.samples.len()
    }
}

/// Ranks of all domains linking into `target`, one sample per linking domain.
pub fn inlink_rank_distribution(
    target: &str,
    corpus: &Corpus,
    ranks: &StaticRanks,
    scale: RankScale,
) -> Result<LinkRankDistribution> {
    if !corpus.contains_node(target) {
        return Err(Error::UnknownDomain(target.to_string()));
    }
    let samples = corpus
        .link_graph()
        .sources(target)
        .map(|s| {
            ranks
                .get(s)
                .map(|r| scale.apply(r, ranks.damping()))
                .ok_or_else(|| Error::UnknownDomain(s.to_string()))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(LinkRankDistribution::from_samples(target, samples))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Spam,
    Natural,
    InsufficientData,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Spam => "spam",
            Verdict::Natural => "natural",
            Verdict::InsufficientData => "insufficient_data",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpamVerdict {
    pub verdict: Verdict,
    pub sigma2: f64,
    pub sigma2_critical: f64,
    pub n_samples: usize,
}

/// Spam iff there are at least `min_samples` in-links and σ² < σ²_critical.
pub fn classify_cluster(dist: &LinkRankDistribution, sigma2_critical: f64, min_samples: usize) -> Result<SpamVerdict> {
    if !(sigma2_critical > 0.0 && sigma2_critical.is_finite()) {
        return Err(Error::invalid("sigma2_critical", "must be finite and positive"));
    }
    let n = dist.n_samples();
    let verdict = if n < min_samples {
        Verdict::InsufficientData
    } else if dist.sigma2 < sigma2_critical {
        Verdict::Spam
    } else {
        Verdict::Natural
    };
    Ok(SpamVerdict {
        verdict,
        sigma2: dist.sigma2,
        sigma2_critical,
        n_samples: n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpamScanConfig {
    pub sigma2_critical: f64,
    pub min_samples: usize,
    pub scale: RankScale,
}

impl Default for SpamScanConfig {
    fn default() -> Self {
        SpamScanConfig {
            sigma2_critical: DEFAULT_SIGMA2_CRITICAL,
            min_samples: DEFAULT_MIN_SAMPLES,
            scale: RankScale::Toolbar,
        }
    }
}

/// Classifies every node that has at least one in-link, in name order.
pub fn scan(corpus: &Corpus, ranks: &StaticRanks, config: &SpamScanConfig) -> Result<Vec<(LinkRankDistribution, SpamVerdict)>> {
    corpus
        .node_names()
        .into_iter()
        .filter(|n| corpus.link_graph().in_degree(n) > 0)
        .map(|target| {
            let dist = inlink_rank_distribution(target, corpus, ranks, config.scale)?;
            let verdict = classify_cluster(&dist, config.sigma2_critical, config.min_samples)?;
            Ok((dist, verdict))
        })
        .collect()
}
