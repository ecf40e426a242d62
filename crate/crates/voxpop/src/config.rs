//! Pipeline configuration: one JSON file, every field optional.
//!
//! ```json
//! {
//!   "corpus": "web/corpus.jsonl",
//!   "queries": "web/queries.tsv",
//!   "out": "reports",
//!   "static_rank": { "damping": 0.85 },
//!   "vpa": { "alpha": 1.0, "beta": 1.0, "total_budget": 100 },
//!   "seed": 7
//! }
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use voxpop_core::corpus::ElementKind;
use voxpop_core::querylog::DEFAULT_MAX_QUERY_LEN;
use voxpop_core::ranking::{RankWeights, StaticRankConfig};
use voxpop_core::spamguard::{RankScale, SpamScanConfig, DEFAULT_MIN_SAMPLES, DEFAULT_SIGMA2_CRITICAL};
use voxpop_core::spectral::DEFAULT_MIN_COEFF;
use voxpop_core::synthweb::{QueryGenConfig, WebGenConfig};
use voxpop_core::vpa::{CycleConfig, VpaConfig};

use crate::error::{CliError, Result};
use crate::report::Format;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WeightsSection {
    pub url: f64,
    pub title: f64,
    pub meta: f64,
    pub header: f64,
    pub anchor: f64,
    pub body: f64,
}

impl Default for WeightsSection {
    fn default() -> Self {
        let w = RankWeights::default();
        WeightsSection {
            url: w.get(ElementKind::Url),
            title: w.get(ElementKind::Title),
            meta: w.get(ElementKind::Meta),
            header: w.get(ElementKind::Header),
            anchor: w.get(ElementKind::Anchor),
            body: w.get(ElementKind::Body),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StaticRankSection {
    pub damping: f64,
    pub tolerance: f64,
    pub max_iters: usize,
}

impl Default for StaticRankSection {
    fn default() -> Self {
        let c = StaticRankConfig::default();
        StaticRankSection {
            damping: c.damping,
            tolerance: c.tolerance,
            max_iters: c.max_iters,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisSection {
    pub top_eigen: usize,
    pub vocab_limit: usize,
    pub min_coeff: f64,
    pub max_query_len: usize,
}

impl Default for AnalysisSection {
    fn default() -> Self {
        AnalysisSection {
            top_eigen: VpaConfig::default().top_m,
            vocab_limit: CycleConfig::default().vocab_limit,
            min_coeff: DEFAULT_MIN_COEFF,
            max_query_len: DEFAULT_MAX_QUERY_LEN,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VpaSection {
    pub alpha: f64,
    pub beta: f64,
    pub total_budget: u64,
    pub min_pages: u64,
    /// Documents per domain already indexed before the first cycle.
    pub seed_pages: usize,
    pub cycles: u64,
}

impl Default for VpaSection {
    fn default() -> Self {
        let v = VpaConfig::default();
        VpaSection {
            alpha: v.alpha,
            beta: v.beta,
            total_budget: v.total_budget,
            min_pages: v.min_pages,
            seed_pages: 1,
            cycles: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpamSection {
    pub sigma2_critical: f64,
    pub min_samples: usize,
    pub scale: String,
}

impl Default for SpamSection {
    fn default() -> Self {
        SpamSection {
            sigma2_critical: DEFAULT_SIGMA2_CRITICAL,
            min_samples: DEFAULT_MIN_SAMPLES,
            scale: RankScale::default().as_str().into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthSection {
    pub n_domains: usize,
    pub docs_min: usize,
    pub docs_max: usize,
    pub link_density: f64,
    pub natural_clusters: usize,
    pub spam_clusters: usize,
    pub cluster_size: usize,
    pub natural_spread: f64,
    pub spam_spread: f64,
    pub spread_tolerance: f64,
    pub exclusive_topic: Option<String>,
    pub exclusive_docs: usize,
    pub n_queries: usize,
    /// Topic name to weight; empty weighs all topics equally.
    pub mixture: BTreeMap<String, f64>,
}

impl Default for SynthSection {
    fn default() -> Self {
        let w = WebGenConfig::default();
        SynthSection {
            n_domains: w.n_domains,
            docs_min: w.docs_per_domain.0,
            docs_max: w.docs_per_domain.1,
            link_density: w.link_density,
            natural_clusters: 2,
            spam_clusters: 2,
            cluster_size: w.cluster_size,
            natural_spread: w.natural_spread,
            spam_spread: w.spam_spread,
            spread_tolerance: w.spread_tolerance,
            exclusive_topic: None,
            exclusive_docs: w.exclusive_docs,
            n_queries: QueryGenConfig::default().n_queries,
            mixture: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub corpus: Option<PathBuf>,
    pub queries: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub weights: WeightsSection,
    pub static_rank: StaticRankSection,
    pub analysis: AnalysisSection,
    pub vpa: VpaSection,
    pub spam: SpamSection,
    pub synth: SynthSection,
    /// Output formats for tabular reports; empty means both.
    pub formats: Vec<Format>,
    pub seed: u64,
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg: PipelineConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::usage(format!("invalid config {}: {e}", path.display())))?;
        // relative paths inside the file are relative to the file
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [&mut cfg.corpus, &mut cfg.queries, &mut cfg.out].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    pub fn weights(&self) -> Result<RankWeights> {
        let w = &self.weights;
        RankWeights::new([
            (ElementKind::Url, w.url),
            (ElementKind::Title, w.title),
            (ElementKind::Meta, w.meta),
            (ElementKind::Header, w.header),
            (ElementKind::Anchor, w.anchor),
            (ElementKind::Body, w.body),
        ])
        .map_err(config_err)
    }

    pub fn static_rank(&self) -> Result<StaticRankConfig> {
        let s = &self.static_rank;
        let c = StaticRankConfig {
            damping: s.damping,
            tolerance: s.tolerance,
            max_iters: s.max_iters,
        };
        c.validate().map_err(config_err)?;
        Ok(c)
    }

    pub fn vpa(&self) -> Result<VpaConfig> {
        let v = &self.vpa;
        let c = VpaConfig {
            alpha: v.alpha,
            beta: v.beta,
            total_budget: v.total_budget,
            min_pages: v.min_pages,
            top_m: self.analysis.top_eigen,
        };
        c.validate().map_err(config_err)?;
        Ok(c)
    }

    pub fn cycle(&self) -> Result<CycleConfig> {
        let a = &self.analysis;
        if a.vocab_limit == 0 {
            return Err(CliError::usage("invalid vocab_limit: must be at least 1"));
        }
        if !(a.min_coeff >= 0.0 && a.min_coeff < 1.0) {
            return Err(CliError::usage("invalid min_coeff: must lie in [0, 1)"));
        }
        Ok(CycleConfig {
            weights: self.weights()?,
            static_rank: self.static_rank()?,
            vpa: self.vpa()?,
            vocab_limit: a.vocab_limit,
            min_coeff: a.min_coeff,
        })
    }

    pub fn spam(&self) -> Result<SpamScanConfig> {
        let s = &self.spam;
        if !(s.sigma2_critical.is_finite() && s.sigma2_critical > 0.0) {
            return Err(CliError::usage("invalid sigma2_critical: must be finite and positive"));
        }
        Ok(SpamScanConfig {
            sigma2_critical: s.sigma2_critical,
            min_samples: s.min_samples,
            scale: s.scale.parse().map_err(config_err)?,
        })
    }

    pub fn web_gen(&self) -> Result<WebGenConfig> {
        let s = &self.synth;
        let c = WebGenConfig {
            n_domains: s.n_domains,
            docs_per_domain: (s.docs_min, s.docs_max),
            link_density: s.link_density,
            natural_clusters: s.natural_clusters,
            spam_clusters: s.spam_clusters,
            cluster_size: s.cluster_size,
            natural_spread: s.natural_spread,
            spam_spread: s.spam_spread,
            spread_tolerance: s.spread_tolerance,
            damping: self.static_rank.damping,
            exclusive_topic: s.exclusive_topic.clone(),
            exclusive_docs: s.exclusive_docs,
            seed: self.seed,
            ..WebGenConfig::default()
        };
        c.validate().map_err(config_err)?;
        Ok(c)
    }

    pub fn query_gen(&self) -> Result<QueryGenConfig> {
        let c = QueryGenConfig {
            mixture: self.synth.mixture.iter().map(|(k, v)| (k.clone(), *v)).collect(),
            n_queries: self.synth.n_queries,
            seed: self.seed,
            ..QueryGenConfig::default()
        };
        c.validate().map_err(config_err)?;
        Ok(c)
    }

    pub fn formats(&self) -> Vec<Format> {
        if self.formats.is_empty() {
            vec![Format::Csv, Format::Json]
        } else {
            let mut f = self.formats.clone();
            f.sort();
            f.dedup();
            f
        }
    }

    /// Corpus, query log and output directory must be distinct paths.
    pub fn check_paths(&self) -> Result<()> {
        let named = [("corpus", &self.corpus), ("queries", &self.queries), ("out", &self.out)];
        for (i, (a, pa)) in named.iter().enumerate() {
            for (b, pb) in &named[i + 1..] {
                if let (Some(x), Some(y)) = (pa, pb) {
                    if x == y {
                        return Err(CliError::usage(format!("{a} and {b} name the same path {}", x.display())));
                    }
                }
            }
        }
        Ok(())
    }
}

fn config_err(e: voxpop_core::Error) -> CliError {
    CliError::Usage(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let cfg: PipelineConfig = serde_json::from_str("{}").unwrap();
        assert_eq!(cfg, PipelineConfig::default());
        assert_eq!(cfg.static_rank().unwrap(), StaticRankConfig::default());
        assert_eq!(cfg.formats(), vec![Format::Csv, Format::Json]);
    }

    #[test]
    fn partial_sections_keep_other_defaults() {
        let cfg: PipelineConfig = serde_json::from_str(r#"{"vpa": {"alpha": 0.0}, "formats": ["json"]}"#).unwrap();
        assert_eq!(cfg.vpa().unwrap().alpha, 0.0);
        assert_eq!(cfg.vpa().unwrap().beta, 1.0);
        assert_eq!(cfg.formats(), vec![Format::Json]);
    }

    #[test]
    fn out_of_range_values_are_usage_errors() {
        let cfg: PipelineConfig = serde_json::from_str(r#"{"static_rank": {"damping": 1.5}}"#).unwrap();
        assert_eq!(cfg.static_rank().unwrap_err().exit_code(), 2);
        assert!(serde_json::from_str::<PipelineConfig>(r#"{"dampng": 0.5}"#).is_err());
    }

    #[test]
    fn paths_must_differ() {
        let cfg = PipelineConfig {
            corpus: Some("a".into()),
            queries: Some("a".into()),
            ..Default::default()
        };
        assert!(cfg.check_paths().is_err());
    }
}
