//! Seeded synthetic webs and query logs with known ground truth.
//!
//! All randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64(seed)`. Independent parts of the generation use separate
//! ChaCha streams of the same key (`set_stream`), so adding clusters never
//! perturbs the background web. The stream of a cluster is the 64-bit FNV-1a
//! hash of its id.
//!
//! Link clusters get their rank spread from wiring alone. Each cluster
//! member is propped up by a small support tree: `a` booster sites link to
//! the member and each booster is fed by `f` leaf sites, all with a single
//! outlink. A leaf has the rank floor `b`, a booster `b(1 + d f)` and the
//! member `b(1 + d a (1 + d f))`, so on the toolbar scale
//! `log2(R / (1 - d))` the member sits at `log2(b / (1 - d)) + log2(1 + d a (1 + d f))`.
//! The first term is shared by every member, which makes the in-link
//! variance of a cluster a function of the chosen (a, f) shapes only. Fan-in
//! never exceeds [`MAX_FANIN`], so support sites stay below the spam
//! scanner's sample minimum.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Corpus, Document, ElementKind};
use crate::error::{Error, Result};
use crate::querylog::{Query, QueryLog, DEFAULT_MAX_QUERY_LEN};

/// Largest number of in-links of any support site.
pub const MAX_FANIN: usize = 4;

const STREAM_BACKGROUND: u64 = 1;
const STREAM_QUERIES: u64 = 2;
const WIDTH_STEPS: usize = 400;
const SPREAD_ATTEMPTS: usize = 32;

const FILLERS: &[&str] = &[
    "the", "and", "info", "page", "home", "news", "more", "about", "contact", "welcome", "online",
    "guide", "new", "top", "site", "latest", "read",
];
const SPAM_WORDS: &[&str] = &["cheap", "deal", "offer", "click", "buy", "now", "bonus", "win"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topic {
    pub name: String,
    pub keywords: Vec<String>,
}

impl Topic {
    pub fn new(name: &str, keywords: &[&str]) -> Self {
        Topic {
            name: name.into(),
            keywords: keywords.iter().map(|k| k.to_string()).collect(),
        }
    }
}

/// Eight topics with disjoint ten-keyword pools.
pub fn default_topics() -> Vec<Topic> {
    alloc::vec![
        Topic::new("music", &["mp3", "download", "free", "songs", "lyrics", "album", "guitar", "concert", "playlist", "radio"]),
        Topic::new("travel", &["hotel", "flights", "beach", "booking", "resort", "cruise", "island", "visa", "tour", "luggage"]),
        Topic::new("cooking", &["recipe", "pasta", "bake", "chicken", "soup", "vegan", "dessert", "kitchen", "spices", "grill"]),
        Topic::new("sports", &["football", "league", "scores", "tennis", "marathon", "stadium", "coach", "fitness", "cycling", "golf"]),
        Topic::new("tech", &["laptop", "software", "linux", "android", "cloud", "router", "compiler", "gadget", "smartphone", "chip"]),
        Topic::new("finance", &["mortgage", "loan", "stocks", "insurance", "credit", "budget", "tax", "savings", "pension", "bank"]),
        Topic::new("health", &["diet", "vitamins", "yoga", "clinic", "therapy", "sleep", "allergy", "dentist", "pharmacy", "cardio"]),
        Topic::new("garden", &["roses", "compost", "seeds", "lawn", "tomatoes", "orchard", "shrubs", "mulch", "greenhouse", "bulbs"]),
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct WebGenConfig {
    /// Background domains (cluster members and their support sites come on top).
    pub n_domains: usize,
    /// Inclusive range of documents per background domain.
    pub docs_per_domain: (usize, usize),
    pub topics: Vec<Topic>,
    /// Mean out-degree of background domains.
    pub link_density: f64,
    /// Background domains never receive more in-links than this.
    pub max_background_indegree: usize,
    pub natural_clusters: usize,
    pub spam_clusters: usize,
    /// In-links per cluster target.
    pub cluster_size: usize,
    /// Target toolbar-scale in-link variance of natural clusters.
    pub natural_spread: f64,
    /// Target toolbar-scale in-link variance of spam clusters.
    pub spam_spread: f64,
    pub spread_tolerance: f64,
    /// Damping the cluster spreads are tuned for.
    pub damping: f64,
    /// A topic served by exactly one background domain.
    pub exclusive_topic: Option<String>,
    pub exclusive_docs: usize,
    pub seed: u64,
}

impl Default for WebGenConfig {
    fn default() -> Self {
        WebGenConfig {
            n_domains: 50,
            docs_per_domain: (3, 8),
            topics: default_topics(),
            link_density: 2.0,
            max_background_indegree: MAX_FANIN,
            natural_clusters: 0,
            spam_clusters: 0,
            cluster_size: 30,
            natural_spread: 1.1,
            spam_spread: 0.6,
            spread_tolerance: 0.05,
            damping: 0.85,
            exclusive_topic: None,
            exclusive_docs: 40,
            seed: 0,
        }
    }
}

impl WebGenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_domains == 0 {
            return Err(Error::invalid("n_domains", "must be at least 1"));
        }
        let (lo, hi) = self.docs_per_domain;
        if lo == 0 || lo > hi {
            return Err(Error::invalid("docs_per_domain", "need 1 <= min <= max"));
        }
        if self.topics.is_empty() || self.topics.iter().any(|t| t.keywords.is_empty()) {
            return Err(Error::invalid("topics", "need at least one topic, each with keywords"));
        }
        if !(self.link_density.is_finite() && self.link_density >= 0.0) {
            return Err(Error::invalid("link_density", "must be finite and nonnegative"));
        }
        if self.cluster_size == 0 {
            return Err(Error::invalid("cluster_size", "must be at least 1"));
        }
        if !(self.natural_spread > self.spam_spread && self.spam_spread > 0.0) {
            return Err(Error::invalid("spreads", "need natural_spread > spam_spread > 0"));
        }
        if self.spread_tolerance.is_nan() || self.spread_tolerance <= 0.0 {
            return Err(Error::invalid("spread_tolerance", "must be positive"));
        }
        if !(self.damping > 0.0 && self.damping < 1.0) {
            return Err(Error::invalid("damping", "must lie strictly between 0 and 1"));
        }
        let reserved = self.natural_clusters + self.spam_clusters + usize::from(self.exclusive_topic.is_some());
        if reserved > self.n_domains {
            return Err(Error::invalid("n_domains", "too few domains for the requested clusters"));
        }
        if let Some(t) = &self.exclusive_topic {
            if !self.topics.iter().any(|x| &x.name == t) {
                return Err(Error::UnknownTopic(t.clone()));
            }
            if self.topics.len() < 2 {
                return Err(Error::invalid("topics", "an exclusive topic needs at least one other topic"));
            }
            if self.exclusive_docs == 0 {
                return Err(Error::invalid("exclusive_docs", "must be at least 1"));
            }
        }
        Ok(())
    }

    fn shared_topics(&self) -> Vec<&Topic> {
        self.topics
            .iter()
            .filter(|t| Some(&t.name) != self.exclusive_topic.as_ref())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClusterKind {
    Natural,
    Spam,
}

impl ClusterKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ClusterKind::Natural => "natural",
            ClusterKind::Spam => "spam",
        }
    }
}

impl core::str::FromStr for ClusterKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "natural" => Ok(ClusterKind::Natural),
            "spam" => Ok(ClusterKind::Spam),
            other => Err(Error::invalid("cluster type", format!("`{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterLabel {
    pub id: String,
    pub kind: ClusterKind,
    pub target: String,
    /// Domains linking directly into the target.
    pub members: Vec<String>,
}

/// Documents to add for one cluster, plus its label.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterDelta {
    pub documents: Vec<Document>,
    pub label: ClusterLabel,
}

#[derive(Debug, Clone)]
pub struct SyntheticWeb {
    corpus: Corpus,
    documents: Vec<Document>,
    labels: Vec<ClusterLabel>,
    topics: Vec<Topic>,
    domain_topics: BTreeMap<String, String>,
    exclusive_domain: Option<String>,
}

impl SyntheticWeb {
    pub fn corpus(&self) -> &Corpus {
        &self.corpus
    }

    pub fn labels(&self) -> &[ClusterLabel] {
        &self.labels
    }

    pub fn topics(&self) -> &[Topic] {
        &self.topics
    }

    /// Topic of every background domain.
    pub fn domain_topics(&self) -> &BTreeMap<String, String> {
        &self.domain_topics
    }

    /// The one domain serving the exclusive topic, if configured.
    pub fn exclusive_domain(&self) -> Option<&str> {
        self.exclusive_domain.as_deref()
    }

    /// Adds a cluster's documents and label.
    pub fn apply(&mut self, delta: ClusterDelta) -> Result<()> {
        self.documents.extend(delta.documents);
        self.labels.push(delta.label);
        self.corpus = Corpus::from_documents(self.documents.iter().cloned())?.0;
        Ok(())
    }
}

/// Generates the background web and all configured clusters.
///
/// Natural and spam cluster targets are background domains that receive no
/// background links, so their in-link set is exactly the labeled members.
pub fn generate_web(config: &WebGenConfig) -> Result<SyntheticWeb> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(STREAM_BACKGROUND);

    let n = config.n_domains;
    let n_targets = config.natural_clusters + config.spam_clusters;
    let picks = rand::seq::index::sample(&mut rng, n, n_targets + usize::from(config.exclusive_topic.is_some())).into_vec();
    let targets: Vec<usize> = picks[..n_targets].to_vec();
    let exclusive_index = config.exclusive_topic.as_ref().map(|_| picks[n_targets]);
    let reserved: BTreeSet<usize> = targets.iter().copied().collect();

    let shared = config.shared_topics();
    let mut names = Vec::with_capacity(n);
    let mut domain_topics = BTreeMap::new();
    for i in 0..n {
        let topic = match (exclusive_index, &config.exclusive_topic) {
            (Some(x), Some(t)) if x == i => t.clone(),
            _ => shared.choose(&mut rng).expect("validated non-empty").name.clone(),
        };
        let name = format!("site{i:03}-{topic}.example");
        domain_topics.insert(name.clone(), topic);
        names.push(name);
    }

    let doc_counts: Vec<usize> = (0..n)
        .map(|i| {
            if Some(i) == exclusive_index {
                config.exclusive_docs
            } else {
                rng.random_range(config.docs_per_domain.0..=config.docs_per_domain.1)
            }
        })
        .collect();

    // background wiring: outlinks[i] = (target index, document index)
    let mut indegree = alloc::vec![0usize; n];
    let mut outlinks: Vec<Vec<(usize, usize)>> = alloc::vec![Vec::new(); n];
    for i in 0..n {
        let wanted = libm::round(rng.random::<f64>() * 2.0 * config.link_density) as usize;
        let mut chosen = BTreeSet::new();
        for _ in 0..wanted {
            let candidates: Vec<usize> = (0..n)
                .filter(|&j| {
                    j != i && !reserved.contains(&j) && !chosen.contains(&j) && indegree[j] < config.max_background_indegree
                })
                .collect();
            let Some(&j) = candidates.choose(&mut rng) else { break };
            chosen.insert(j);
            indegree[j] += 1;
            outlinks[i].push((j, rng.random_range(0..doc_counts[i])));
        }
    }

    let topic_of = |name: &str| -> &Topic {
        let t = &domain_topics[name];
        config.topics.iter().find(|x| &x.name == t).expect("assigned from config")
    };
    let mut documents = Vec::new();
    for i in 0..n {
        let topic = topic_of(&names[i]);
        for j in 0..doc_counts[i] {
            let mut doc = topic_document(&mut rng, &names[i], j, topic);
            for (t, _) in outlinks[i].iter().filter(|(_, d)| *d == j) {
                doc = doc.with_outlink(names[*t].clone());
            }
            documents.push(doc);
        }
    }

    let mut labels = Vec::new();
    for (k, &t) in targets.iter().enumerate() {
        let delta = if k < config.natural_clusters {
            generate_natural_cluster(config, &names[t], &format!("natural{k:02}"))?
        } else {
            generate_spam_cluster(config, &names[t], &format!("spam{:02}", k - config.natural_clusters))?
        };
        documents.extend(delta.documents);
        labels.push(delta.label);
    }

    let corpus = Corpus::from_documents(documents.iter().cloned())?.0;
    Ok(SyntheticWeb {
        corpus,
        documents,
        labels,
        topics: config.topics.clone(),
        domain_topics,
        exclusive_domain: exclusive_index.map(|i| names[i].clone()),
    })
}

/// A grown cluster: members of widely differing rank linking to `target`.
pub fn generate_natural_cluster(config: &WebGenConfig, target: &str, cluster_id: &str) -> Result<ClusterDelta> {
    build_cluster(config, target, cluster_id, ClusterKind::Natural, config.natural_spread)
}

/// A link farm: near-duplicate low-content members of similar rank linking
/// to `target`. A spam spread of 0 gives members of identical rank.
pub fn generate_spam_cluster(config: &WebGenConfig, target: &str, cluster_id: &str) -> Result<ClusterDelta> {
    build_cluster(config, target, cluster_id, ClusterKind::Spam, config.spam_spread)
}

/// Support shape of one cluster member: `boosters` sites each fed by `feeders` leaves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Shape {
    boosters: usize,
    feeders: usize,
}

impl Shape {
    fn nodes(self) -> usize {
        self.boosters * (1 + self.feeders)
    }
}

/// Reachable toolbar offsets log2(1 + d a (1 + d f)), ascending, one shape per offset.
fn toolbar_levels(damping: f64) -> Vec<(f64, Shape)> {
    let mut levels: Vec<(f64, Shape)> = Vec::new();
    for boosters in 0..=MAX_FANIN {
        for feeders in 0..=MAX_FANIN {
            if boosters == 0 && feeders > 0 {
                continue;
            }
            let g = 1.0 + damping * boosters as f64 * (1.0 + damping * feeders as f64);
            levels.push((libm::log2(g), Shape { boosters, feeders }));
        }
    }
    levels.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.nodes().cmp(&b.1.nodes())));
    levels.dedup_by(|b, a| (a.0 - b.0).abs() < 1e-12);
    levels
}

fn nearest_level(levels: &[(f64, Shape)], t: f64) -> usize {
    let mut best = 0;
    for (i, (v, _)) in levels.iter().enumerate() {
        if (v - t).abs() < (levels[best].0 - t).abs() {
            best = i;
        }
    }
    best
}

fn population_variance(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let n = values.clone().count() as f64;
    let mean = values.clone().sum::<f64>() / n;
    values.map(|x| (x - mean) * (x - mean)).sum::<f64>() / n
}

/// Picks one support shape per member so that the toolbar-scale variance of
/// the members is within `tolerance` of `target`.
fn plan_shapes(rng: &mut ChaCha8Rng, n: usize, target: f64, tolerance: f64, damping: f64) -> Result<Vec<Shape>> {
    let levels = toolbar_levels(damping);
    if target <= 0.0 {
        return Ok(alloc::vec![levels[0].1; n]);
    }
    let top = levels.last().expect("non-empty").0;
    let mut best_err = f64::INFINITY;
    let mut best_var = 0.0;
    for _ in 0..SPREAD_ATTEMPTS {
        let draws: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let mut best: Option<(f64, Vec<usize>)> = None;
        for step in 0..=WIDTH_STEPS {
            let width = top * step as f64 / WIDTH_STEPS as f64;
            let picks: Vec<usize> = draws.iter().map(|u| nearest_level(&levels, u * width)).collect();
            let var = population_variance(picks.iter().map(|&i| levels[i].0));
            let err = (var - target).abs();
            if best.as_ref().is_none_or(|(e, _)| err < *e) {
                best = Some((err, picks));
                if err < best_err {
                    best_err = err;
                    best_var = var;
                }
            }
        }
        let (err, picks) = best.expect("at least one width");
        if err <= tolerance {
            return Ok(picks.into_iter().map(|i| levels[i].1).collect());
        }
    }
    Err(Error::SpreadUnattainable {
        target,
        tolerance,
        best: best_var,
    })
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn build_cluster(config: &WebGenConfig, target: &str, cluster_id: &str, kind: ClusterKind, spread: f64) -> Result<ClusterDelta> {
    if !(spread >= 0.0 && spread.is_finite()) {
        return Err(Error::invalid("spread", "must be finite and nonnegative"));
    }
    if config.cluster_size == 0 {
        return Err(Error::invalid("cluster_size", "must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(fnv1a(cluster_id.as_bytes()));
    let shapes = plan_shapes(&mut rng, config.cluster_size, spread, config.spread_tolerance, config.damping)?;
    let shared = config.shared_topics();
    if shared.is_empty() {
        return Err(Error::invalid("topics", "no topic available for cluster content"));
    }

    let mut documents = Vec::new();
    let mut members = Vec::with_capacity(shapes.len());
    for (j, shape) in shapes.iter().enumerate() {
        let member = format!("{cluster_id}-m{j:02}.example");
        let topic = *shared.choose(&mut rng).expect("non-empty");
        let doc = match kind {
            ClusterKind::Natural => topic_document(&mut rng, &member, 0, topic),
            ClusterKind::Spam => spam_document(&mut rng, &member, topic),
        };
        documents.push(doc.with_outlink(target));
        for b in 0..shape.boosters {
            let booster = format!("{cluster_id}-m{j:02}-b{b}.example");
            documents.push(support_document(&mut rng, &booster).with_outlink(member.clone()));
            for f in 0..shape.feeders {
                let feeder = format!("{cluster_id}-m{j:02}-b{b}-f{f}.example");
                documents.push(support_document(&mut rng, &feeder).with_outlink(booster.clone()));
            }
        }
        members.push(member);
    }
    Ok(ClusterDelta {
        documents,
        label: ClusterLabel {
            id: cluster_id.to_string(),
            kind,
            target: target.to_string(),
            members,
        },
    })
}

fn words<R: Rng>(rng: &mut R, pool: &[String], n: usize) -> String {
    (0..n)
        .map(|_| pool.choose(rng).expect("non-empty pool").as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

fn topic_document<R: Rng>(rng: &mut R, domain: &str, index: usize, topic: &Topic) -> Document {
    let kw = &topic.keywords;
    let slug = format!(
        "{}-{}-{index}",
        kw.choose(rng).expect("non-empty"),
        kw.choose(rng).expect("non-empty")
    );
    let url = format!("https://{domain}/{slug}");
    let body: Vec<&str> = (0..24)
        .map(|_| {
            if rng.random_bool(0.6) {
                kw.choose(rng).expect("non-empty").as_str()
            } else {
                FILLERS.choose(rng).expect("non-empty")
            }
        })
        .collect();
    let anchor = format!("{} {}", words(rng, kw, 2), FILLERS.choose(rng).expect("non-empty"));
    Document::new(url.clone(), domain)
        .with_element(ElementKind::Url, &url)
        .with_element(ElementKind::Title, &words(rng, kw, 3))
        .with_element(ElementKind::Meta, &words(rng, kw, 4))
        .with_element(ElementKind::Header, &words(rng, kw, 2))
        .with_element(ElementKind::Anchor, &anchor)
        .with_element(ElementKind::Body, &body.join(" "))
}

fn spam_document<R: Rng>(rng: &mut R, domain: &str, topic: &Topic) -> Document {
    let kw = topic.keywords.choose(rng).expect("non-empty");
    let url = format!("https://{domain}/");
    let title = format!("{kw} {} {kw}", SPAM_WORDS.choose(rng).expect("non-empty"));
    let body = format!("{kw} cheap {kw} deal {kw} offer click now {kw} best {kw} buy");
    Document::new(url.clone(), domain)
        .with_element(ElementKind::Url, &url)
        .with_element(ElementKind::Title, &title)
        .with_element(ElementKind::Meta, &format!("{kw} {kw} {kw}"))
        .with_element(ElementKind::Body, &body)
}

fn support_document<R: Rng>(rng: &mut R, domain: &str) -> Document {
    let url = format!("https://{domain}/");
    let body: Vec<&str> = (0..6).map(|_| *FILLERS.choose(rng).expect("non-empty")).collect();
    Document::new(url.clone(), domain)
        .with_element(ElementKind::Url, &url)
        .with_element(ElementKind::Body, &body.join(" "))
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryGenConfig {
    /// (topic name, weight); empty means every topic equally.
    pub mixture: Vec<(String, f64)>,
    pub n_queries: usize,
    /// Relative frequency of query lengths 1 through 6.
    pub length_weights: [f64; DEFAULT_MAX_QUERY_LEN],
    pub seed: u64,
}

impl Default for QueryGenConfig {
    fn default() -> Self {
        QueryGenConfig {
            mixture: Vec::new(),
            n_queries: 2000,
            length_weights: [0.30, 0.40, 0.18, 0.08, 0.03, 0.01],
            seed: 0,
        }
    }
}

impl QueryGenConfig {
    /// Expected query length under `length_weights`.
    pub fn mean_length(&self) -> f64 {
        let total: f64 = self.length_weights.iter().sum();
        self.length_weights
            .iter()
            .enumerate()
            .map(|(i, w)| (i + 1) as f64 * w)
            .sum::<f64>()
            / total
    }

    pub fn validate(&self) -> Result<()> {
        let lw = &self.length_weights;
        if lw.iter().any(|w| !w.is_finite() || *w < 0.0) || lw.iter().sum::<f64>() <= 0.0 {
            return Err(Error::invalid("length_weights", "must be nonnegative with a positive sum"));
        }
        let mw = self.mixture.iter().map(|(_, w)| *w);
        if mw.clone().any(|w| !w.is_finite() || w < 0.0) || (!self.mixture.is_empty() && mw.sum::<f64>() <= 0.0) {
            return Err(Error::invalid("mixture", "weights must be nonnegative with a positive sum"));
        }
        Ok(())
    }
}

/// Draws `n_queries` queries: a topic by mixture weight, a length by
/// `length_weights`, then distinct keywords from the topic pool with
/// Zipf-like popularity (weight 1 / (position + 1)). Identical keyword
/// lists are merged into one counted entry.
pub fn generate_query_log(config: &QueryGenConfig, topics: &[Topic]) -> Result<QueryLog> {
    config.validate()?;
    if topics.is_empty() {
        return Err(Error::invalid("topics", "need at least one topic"));
    }
    let chosen: Vec<(&Topic, f64)> = if config.mixture.is_empty() {
        topics.iter().map(|t| (t, 1.0)).collect()
    } else {
        config
            .mixture
            .iter()
            .map(|(name, w)| {
                topics
                    .iter()
                    .find(|t| &t.name == name)
                    .map(|t| (t, *w))
                    .ok_or_else(|| Error::UnknownTopic(name.clone()))
            })
            .collect::<Result<_>>()?
    };
    let invalid = |_| Error::invalid("weights", "cannot sample");
    let topic_dist = WeightedIndex::new(chosen.iter().map(|(_, w)| *w)).map_err(invalid)?;
    let length_dist = WeightedIndex::new(config.length_weights.iter().copied()).map_err(invalid)?;
    let keyword_dists: Vec<WeightedIndex<f64>> = chosen
        .iter()
        .map(|(t, _)| WeightedIndex::new((0..t.keywords.len()).map(|i| 1.0 / (i + 1) as f64)).map_err(invalid))
        .collect::<Result<_>>()?;

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(STREAM_QUERIES);
    let mut counts: BTreeMap<Vec<String>, u64> = BTreeMap::new();
    for _ in 0..config.n_queries {
        let t = topic_dist.sample(&mut rng);
        let pool = &chosen[t].0.keywords;
        let len = (length_dist.sample(&mut rng) + 1).min(pool.len());
        let mut picked: Vec<usize> = Vec::with_capacity(len);
        while picked.len() < len {
            let k = keyword_dists[t].sample(&mut rng);
            if !picked.contains(&k) {
                picked.push(k);
            }
        }
        let keywords = picked.into_iter().map(|k| pool[k].clone()).collect();
        *counts.entry(keywords).or_insert(0) += 1;
    }
    let entries = counts
        .into_iter()
        .map(|(k, c)| Query::new(k, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(QueryLog::new(entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::querylog::{build_cooccurrence, expand_to_pairs};
    use crate::ranking::{static_rank, StaticRankConfig};
    use crate::spamguard::{inlink_rank_distribution, RankScale};

    #[test]
    fn size_contract() {
        let cfg = WebGenConfig {
            n_domains: 10,
            docs_per_domain: (3, 3),
            seed: 7,
            ..Default::default()
        };
        let web = generate_web(&cfg).unwrap();
        assert_eq!(web.corpus().n_domains(), 10);
        assert_eq!(web.corpus().n_documents(), 30);
        assert!(web.labels().is_empty());
    }

    #[test]
    fn same_seed_same_web() {
        let cfg = WebGenConfig {
            natural_clusters: 1,
            spam_clusters: 1,
            seed: 42,
            ..Default::default()
        };
        let a = generate_web(&cfg).unwrap();
        let b = generate_web(&cfg).unwrap();
        assert_eq!(a.corpus(), b.corpus());
        assert_eq!(a.labels(), b.labels());
        let c = generate_web(&WebGenConfig { seed: 43, ..cfg }).unwrap();
        assert_ne!(a.corpus(), c.corpus());
    }

    #[test]
    fn background_indegree_is_capped() {
        let cfg = WebGenConfig {
            n_domains: 40,
            link_density: 6.0,
            ..Default::default()
        };
        let web = generate_web(&cfg).unwrap();
        let g = web.corpus().link_graph();
        for d in web.corpus().domains() {
            assert!(g.in_degree(d.name()) <= MAX_FANIN);
        }
    }

    #[test]
    fn levels_are_sorted_and_bounded() {
        let levels = toolbar_levels(0.85);
        assert_eq!(levels[0].0, 0.0);
        assert!(levels.windows(2).all(|w| w[0].0 < w[1].0));
        let top = 1.0 + 0.85 * 4.0 * (1.0 + 0.85 * 4.0);
        assert!((levels.last().unwrap().0 - libm::log2(top)).abs() < 1e-12);
    }

    fn measured_spread(web: &SyntheticWeb, label: &ClusterLabel) -> f64 {
        let ranks = static_rank(web.corpus(), &StaticRankConfig::default()).unwrap();
        inlink_rank_distribution(&label.target, web.corpus(), &ranks, RankScale::Toolbar)
            .unwrap()
            .sigma2
    }

    #[test]
    fn cluster_spreads_hit_targets() {
        let cfg = WebGenConfig {
            n_domains: 12,
            natural_clusters: 1,
            spam_clusters: 1,
            seed: 3,
            ..Default::default()
        };
        let web = generate_web(&cfg).unwrap();
        let natural = &web.labels()[0];
        let spam = &web.labels()[1];
        assert_eq!(natural.kind, ClusterKind::Natural);
        assert_eq!(spam.kind, ClusterKind::Spam);
        assert_eq!(natural.members.len(), 30);
        let g = web.corpus().link_graph();
        assert_eq!(g.sources(&natural.target).collect::<Vec<_>>(), natural.members);
        assert!((measured_spread(&web, natural) - 1.1).abs() <= 0.05 + 1e-9);
        assert!((measured_spread(&web, spam) - 0.6).abs() <= 0.05 + 1e-9);
    }

    #[test]
    fn identical_rank_spammers_have_zero_spread() {
        let cfg = WebGenConfig {
            n_domains: 5,
            spam_spread: 0.0,
            ..Default::default()
        };
        let mut web = generate_web(&WebGenConfig { n_domains: 5, ..Default::default() }).unwrap();
        let target = "landing.example";
        let delta = generate_spam_cluster(&cfg, target, "farm").unwrap();
        assert_eq!(delta, generate_spam_cluster(&cfg, target, "farm").unwrap());
        let label = delta.label.clone();
        web.apply(delta).unwrap();
        let s = measured_spread(&web, &label);
        assert!(s < 1e-20, "{s}");
    }

    #[test]
    fn unattainable_spread_is_reported() {
        let cfg = WebGenConfig {
            natural_spread: 50.0,
            ..Default::default()
        };
        assert!(matches!(
            generate_natural_cluster(&cfg, "t", "x"),
            Err(Error::SpreadUnattainable { .. })
        ));
    }

    #[test]
    fn exclusive_topic_has_one_domain() {
        let cfg = WebGenConfig {
            exclusive_topic: Some("music".into()),
            exclusive_docs: 25,
            ..Default::default()
        };
        let web = generate_web(&cfg).unwrap();
        let only = web.exclusive_domain().unwrap();
        assert_eq!(web.corpus().domain(only).unwrap().n_k(), 25);
        let music = &web.topics()[0];
        for doc in web.corpus().documents().filter(|d| d.domain() != only) {
            for el in doc.elements() {
                assert!(el.tokens().iter().all(|t| !music.keywords.contains(t)), "{}", doc.url());
            }
        }
    }

    #[test]
    fn config_validation() {
        assert!(WebGenConfig { n_domains: 0, ..Default::default() }.validate().is_err());
        assert!(WebGenConfig { spam_spread: 1.2, ..Default::default() }.validate().is_err());
        assert!(WebGenConfig { docs_per_domain: (4, 2), ..Default::default() }.validate().is_err());
        assert_eq!(
            WebGenConfig { exclusive_topic: Some("opera".into()), ..Default::default() }.validate(),
            Err(Error::UnknownTopic("opera".into()))
        );
    }

    #[test]
    fn query_log_follows_mixture() {
        let topics = default_topics();
        let cfg = QueryGenConfig {
            mixture: alloc::vec![("travel".into(), 0.9), ("music".into(), 0.1)],
            seed: 5,
            ..Default::default()
        };
        let log = generate_query_log(&cfg, &topics).unwrap();
        assert_eq!(log.total_units(), 2000);
        assert!((log.mean_length() - cfg.mean_length()).abs() <= 0.2);
        let m = build_cooccurrence(&log, 200).unwrap();
        let top = (0..m.dim()).max_by(|&a, &b| m.get(a, a).total_cmp(&m.get(b, b))).unwrap();
        assert!(topics[1].keywords.contains(&m.vocab()[top]));
        assert_eq!(log, generate_query_log(&cfg, &topics).unwrap());
    }

    #[test]
    fn single_keyword_queries_expand_to_self_pairs() {
        let cfg = QueryGenConfig {
            length_weights: [1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            n_queries: 300,
            ..Default::default()
        };
        let log = generate_query_log(&cfg, &default_topics()).unwrap();
        for q in log.entries() {
            assert!(expand_to_pairs(q).iter().all(|p| p.is_self_pair()));
        }
        assert!(generate_query_log(
            &QueryGenConfig { mixture: alloc::vec![("opera".into(), 1.0)], ..Default::default() },
            &default_topics()
        )
        .is_err());
    }
}
