//! Crawl budget allocation and the query-driven feedback cycle.
//!
//! Every domain gets a baseline share of the per-cycle crawl budget in
//! proportion to its static rank. The budget is then multiplied by
//! `1 + α·λ̂^β`, where λ̂ measures how much of the content wanted by the
//! eigenqueries the domain serves, and renormalized to the fixed total.
//! With α = 0 or λ̂ = 0 the baseline is returned untouched.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::corpus::{Corpus, Document, Domain};
use crate::error::{Error, Result};
use crate::querylog::{build_cooccurrence, QueryLog};
use crate::ranking::{documents_rank, static_rank, RankWeights, StaticRankConfig, StaticRanks};
use crate::spectral::{diagonalize, eigenqueries, EigenQuery, DEFAULT_MIN_COEFF};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VpaConfig {
    pub alpha: f64,
    pub beta: f64,
    /// Document slots per crawl cycle.
    pub total_budget: u64,
    /// Floor on every domain's baseline budget.
    pub min_pages: u64,
    /// Number of leading eigenvectors turned into eigenqueries.
    pub top_m: usize,
}

impl Default for VpaConfig {
    fn default() -> Self {
        VpaConfig {
            alpha: 1.0,
            beta: 1.0,
            total_budget: 100,
            min_pages: 0,
            top_m: 10,
        }
    }
}

impl VpaConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(Error::invalid("alpha", "must be finite and nonnegative"));
        }
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(Error::invalid("beta", "must be finite and positive"));
        }
        if self.total_budget == 0 {
            return Err(Error::invalid("total_budget", "must be at least 1"));
        }
        Ok(())
    }
}

/// Crawl resources per domain, in document slots.
#[derive(Debug, Clone, PartialEq)]
pub struct BudgetPlan {
    budgets: BTreeMap<String, f64>,
    total_budget: u64,
}

impl BudgetPlan {
    pub fn get(&self, domain: &str) -> Option<f64> {
        self.budgets.get(domain).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.budgets.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.budgets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.budgets.is_empty()
    }

    pub fn total_budget(&self) -> u64 {
        self.total_budget
    }

    pub fn total(&self) -> f64 {
        self.budgets.values().sum()
    }

    /// Whole document slots by largest remainder; they sum to the total budget.
    pub fn slots(&self) -> BTreeMap<String, u64> {
        let mut out: BTreeMap<String, u64> = BTreeMap::new();
        let mut remainders: Vec<(f64, &str)> = Vec::with_capacity(self.budgets.len());
        let mut assigned = 0u64;
        for (name, b) in &self.budgets {
            let whole = libm::floor(b.max(0.0));
            out.insert(name.clone(), whole as u64);
            assigned += whole as u64;
            remainders.push((b - whole, name));
        }
        remainders.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(b.1)));
        let left = self.total_budget.saturating_sub(assigned) as usize;
        for (_, name) in remainders.into_iter().take(left) {
            *out.get_mut(name).expect("present") += 1;
        }
        out
    }
}

/// M(D) = B · R_s(D) / Σ R_s, with every domain floored at `min_pages` and
/// the remainder shared by the rest in proportion to rank.
pub fn baseline_budget(ranks: &BTreeMap<String, f64>, config: &VpaConfig) -> Result<BudgetPlan> {
    config.validate()?;
    if ranks.is_empty() {
        return Err(Error::invalid("ranks", "no domains to allocate"));
    }
    if ranks.values().any(|r| !r.is_finite() || *r < 0.0) {
        return Err(Error::invalid("ranks", "must be finite and nonnegative"));
    }
    if ranks.values().all(|r| *r == 0.0) {
        return Err(Error::AllRanksZero);
    }
    let total = config.total_budget as f64;
    let floor = config.min_pages as f64;
    if config.min_pages.saturating_mul(ranks.len() as u64) > config.total_budget {
        return Err(Error::InfeasibleFloor {
            floor: config.min_pages,
            domains: ranks.len(),
            total: config.total_budget,
        });
    }

    let mut floored: BTreeSet<&str> = BTreeSet::new();
    loop {
        let free_budget = total - floor * floored.len() as f64;
        let free_rank: f64 = ranks
            .iter()
            .filter(|(k, _)| !floored.contains(k.as_str()))
            .map(|(_, r)| r)
            .sum();
        let below: Vec<&str> = ranks
            .iter()
            .filter(|(k, _)| !floored.contains(k.as_str()))
            .filter(|(_, r)| free_rank <= 0.0 || free_budget * **r / free_rank < floor)
            .map(|(k, _)| k.as_str())
            .collect();
        if below.is_empty() {
            let budgets = ranks
                .iter()
                .map(|(k, r)| {
                    let b = if floored.contains(k.as_str()) {
                        floor
                    } else {
                        free_budget * r / free_rank
                    };
                    (k.clone(), b)
                })
                .collect();
            return Ok(BudgetPlan {
                budgets,
                total_budget: config.total_budget,
            });
        }
        floored.extend(below);
    }
}

/// R_VPA = 1 + α·λ̂^β.
pub fn vpa_correction(lambda_hat: f64, config: &VpaConfig) -> Result<f64> {
    if !(0.0..=1.0).contains(&lambda_hat) {
        return Err(Error::LambdaOutOfRange(lambda_hat));
    }
    Ok(1.0 + config.alpha * libm::pow(lambda_hat, config.beta))
}

/// M̂ = M · R_VPA, renormalized to the total budget. Domains missing from
/// `lambdas` get λ̂ = 0. An all-ones correction returns the plan unchanged.
pub fn apply_vpa(plan: &BudgetPlan, lambdas: &BTreeMap<String, f64>, config: &VpaConfig) -> Result<BudgetPlan> {
    let corrections = plan
        .budgets
        .keys()
        .map(|k| vpa_correction(lambdas.get(k).copied().unwrap_or(0.0), config))
        .collect::<Result<Vec<f64>>>()?;
    if corrections.iter().all(|c| *c == 1.0) {
        return Ok(plan.clone());
    }
    let boosted: Vec<f64> = plan
        .budgets
        .values()
        .zip(&corrections)
        .map(|(m, c)| m * c)
        .collect();
    let sum: f64 = boosted.iter().sum();
    let scale = plan.total_budget as f64 / sum;
    Ok(BudgetPlan {
        budgets: plan
            .budgets
            .keys()
            .cloned()
            .zip(boosted.into_iter().map(|m| m * scale))
            .collect(),
        total_budget: plan.total_budget,
    })
}

/// The documents a search engine can currently score, grouped by domain.
#[derive(Debug, Clone)]
pub struct IndexView<'a> {
    domains: BTreeMap<&'a str, Vec<&'a Document>>,
}

impl<'a> IndexView<'a> {
    /// Every document of the corpus.
    pub fn full(corpus: &'a Corpus) -> Self {
        IndexView {
            domains: corpus
                .domains()
                .map(|d| (d.name(), d.documents().iter().collect()))
                .collect(),
        }
    }

    /// Only the documents revealed so far.
    pub fn revealed(corpus: &'a Corpus, state: &CrawlState) -> Self {
        IndexView {
            domains: corpus
                .domains()
                .map(|d| {
                    let seen = state.revealed.get(d.name());
                    let docs = d
                        .documents()
                        .iter()
                        .filter(|doc| seen.is_some_and(|s| s.contains(doc.url())))
                        .collect();
                    (d.name(), docs)
                })
                .collect(),
        }
    }

    pub fn domains(&self) -> impl Iterator<Item = (&'a str, &[&'a Document])> + '_ {
        self.domains.iter().map(|(k, v)| (*k, v.as_slice()))
    }
}

/// λ̂ for every domain in the index: Σ_i importance_i · share_i(D), where
/// share_i(D) is the domain's fraction of the total domain rank for
/// eigenquery i (0 when no domain matches).
pub fn domain_lambdas(index: &IndexView<'_>, eqs: &[EigenQuery], weights: &RankWeights) -> BTreeMap<String, f64> {
    let mut lambdas: BTreeMap<String, f64> = index.domains.keys().map(|k| (k.to_string(), 0.0)).collect();
    for eq in eqs {
        let scores: Vec<f64> = index
            .domains
            .values()
            .map(|docs| documents_rank(docs.iter().copied(), eq, weights))
            .collect();
        let total: f64 = scores.iter().sum();
        if total <= 0.0 {
            continue;
        }
        for (lambda, score) in lambdas.values_mut().zip(&scores) {
            *lambda += eq.importance * score / total;
        }
    }
    for l in lambdas.values_mut() {
        *l = l.clamp(0.0, 1.0);
    }
    lambdas
}

/// λ̂ of one domain against the whole corpus.
pub fn domain_lambda(domain: &Domain, eqs: &[EigenQuery], corpus: &Corpus, weights: &RankWeights) -> f64 {
    domain_lambdas(&IndexView::full(corpus), eqs, weights)
        .get(domain.name())
        .copied()
        .unwrap_or(0.0)
}

/// Documents currently in the index, unspent budget, and the number of
/// completed cycles.
///
/// A domain crawls whole documents only. The fractional part of its budget
/// is kept as credit for the next cycle, so a domain entitled to 0.3 slots a
/// cycle still gets a document every few cycles.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CrawlState {
    revealed: BTreeMap<String, BTreeSet<String>>,
    credit: BTreeMap<String, f64>,
    cycle_index: u64,
}

impl CrawlState {
    /// An index holding the first `pages` documents (by url) of every domain.
    pub fn seeded(corpus: &Corpus, pages: usize) -> Self {
        CrawlState {
            revealed: corpus
                .domains()
                .map(|d| {
                    let urls = d.documents().iter().take(pages).map(|doc| doc.url().to_string()).collect();
                    (d.name().to_string(), urls)
                })
                .collect(),
            credit: BTreeMap::new(),
            cycle_index: 0,
        }
    }

    pub fn from_parts(
        revealed: BTreeMap<String, BTreeSet<String>>,
        credit: BTreeMap<String, f64>,
        cycle_index: u64,
    ) -> Self {
        CrawlState {
            revealed,
            credit,
            cycle_index,
        }
    }

    /// Budget carried over from earlier cycles, in slots (0 when none).
    pub fn credit(&self, domain: &str) -> f64 {
        self.credit.get(domain).copied().unwrap_or(0.0)
    }

    pub fn credits(&self) -> &BTreeMap<String, f64> {
        &self.credit
    }

    pub fn cycle_index(&self) -> u64 {
        self.cycle_index
    }

    pub fn revealed(&self) -> &BTreeMap<String, BTreeSet<String>> {
        &self.revealed
    }

    pub fn revealed_count(&self, domain: &str) -> usize {
        self.revealed.get(domain).map_or(0, BTreeSet::len)
    }

    pub fn total_revealed(&self) -> usize {
        self.revealed.values().map(BTreeSet::len).sum()
    }

    /// Every revealed url belongs to a document of the named domain.
    pub fn is_consistent_with(&self, corpus: &Corpus) -> bool {
        self.revealed.iter().all(|(name, urls)| match corpus.domain(name) {
            Some(d) => urls.iter().all(|u| d.documents().iter().any(|doc| doc.url() == u)),
            None => urls.is_empty(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleConfig {
    pub weights: RankWeights,
    pub static_rank: StaticRankConfig,
    pub vpa: VpaConfig,
    pub vocab_limit: usize,
    pub min_coeff: f64,
}

impl Default for CycleConfig {
    fn default() -> Self {
        CycleConfig {
            weights: RankWeights::default(),
            static_rank: StaticRankConfig::default(),
            vpa: VpaConfig::default(),
            vocab_limit: 200,
            min_coeff: DEFAULT_MIN_COEFF,
        }
    }
}

/// Eigenqueries of a log ranked by eigenvalue; empty for an empty log.
pub fn analyze_log(log: &QueryLog, vocab_limit: usize, top_m: usize, min_coeff: f64) -> Result<Vec<EigenQuery>> {
    if log.total_units() == 0 {
        return Ok(Vec::new());
    }
    let omega = build_cooccurrence(log, vocab_limit)?;
    let basis = diagonalize(&omega)?;
    Ok(eigenqueries(&basis, top_m, min_coeff))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomainAllocation {
    pub domain: String,
    pub static_rank: f64,
    pub baseline: f64,
    pub lambda_hat: f64,
    pub correction: f64,
    pub final_budget: f64,
    /// Unspent budget carried into this cycle.
    pub credit: f64,
    /// Whole documents crawled this cycle: floor(credit + final_budget).
    pub slots: u64,
    /// Documents in the index after the cycle's crawl.
    pub revealed: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CycleTrace {
    /// One-based number of the cycle this trace describes.
    pub cycle: u64,
    pub eigenqueries: Vec<EigenQuery>,
    pub domains: Vec<DomainAllocation>,
}

/// Steps 1 and 2 of a cycle: eigenqueries, λ̂ over the current index, and
/// the corrected budget. Nothing is crawled.
pub fn plan_cycle(
    state: &CrawlState,
    corpus: &Corpus,
    log: &QueryLog,
    config: &CycleConfig,
) -> Result<(Vec<EigenQuery>, Vec<DomainAllocation>)> {
    config.vpa.validate()?;
    let eqs = analyze_log(log, config.vocab_limit, config.vpa.top_m, config.min_coeff)?;
    let ranks = static_rank(corpus, &config.static_rank)?;
    let crawlable = crawlable_ranks(corpus, &ranks);
    let baseline = baseline_budget(&crawlable, &config.vpa)?;
    let lambdas = domain_lambdas(&IndexView::revealed(corpus, state), &eqs, &config.weights);
    let plan = apply_vpa(&baseline, &lambdas, &config.vpa)?;

    let mut rows = Vec::with_capacity(plan.len());
    for (name, final_budget) in plan.iter() {
        let lambda_hat = lambdas.get(name).copied().unwrap_or(0.0);
        let credit = state.credit(name);
        rows.push(DomainAllocation {
            domain: name.to_string(),
            static_rank: crawlable[name],
            baseline: baseline.get(name).unwrap_or(0.0),
            lambda_hat,
            correction: vpa_correction(lambda_hat, &config.vpa)?,
            final_budget,
            credit,
            slots: whole_slots(credit + final_budget),
            revealed: state.revealed_count(name),
        });
    }
    Ok((eqs, rows))
}

// absorbs rounding in budgets that should sum to a whole number
const SLOT_EPSILON: f64 = 1e-9;

fn whole_slots(entitlement: f64) -> u64 {
    libm::floor(entitlement.max(0.0) + SLOT_EPSILON) as u64
}

fn crawlable_ranks(corpus: &Corpus, ranks: &StaticRanks) -> BTreeMap<String, f64> {
    corpus
        .domains()
        .map(|d| (d.name().to_string(), ranks.get(d.name()).unwrap_or(0.0)))
        .collect()
}

/// One full feedback cycle: analyze the log, re-plan the budget against the
/// current index, crawl up to each domain's slots (next documents by url),
/// bank the fractional remainder and advance the cycle counter.
pub fn run_cycle(
    state: &CrawlState,
    corpus: &Corpus,
    log: &QueryLog,
    config: &CycleConfig,
) -> Result<(CrawlState, CycleTrace)> {
    let (eqs, mut rows) = plan_cycle(state, corpus, log, config)?;
    let mut next = state.clone();
    for row in &mut rows {
        let domain = corpus.domain(&row.domain).ok_or_else(|| Error::UnknownDomain(row.domain.clone()))?;
        let seen = next.revealed.entry(row.domain.clone()).or_default();
        let fresh: Vec<String> = domain
            .documents()
            .iter()
            .map(|d| d.url())
            .filter(|u| !seen.contains(*u))
            .take(row.slots as usize)
            .map(String::from)
            .collect();
        seen.extend(fresh);
        row.revealed = seen.len();
        // an exhausted domain does not bank budget
        let left = (row.credit + row.final_budget - row.slots as f64).max(0.0);
        if row.revealed < domain.n_k() && left > 0.0 {
            next.credit.insert(row.domain.clone(), left);
        } else {
            next.credit.remove(&row.domain);
        }
    }
    next.cycle_index += 1;
    let trace = CycleTrace {
        cycle: next.cycle_index,
        eigenqueries: eqs,
        domains: rows,
    };
    Ok((next, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::ElementKind;
    use crate::querylog::Query;
    use alloc::vec;

    fn ranks(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    fn cfg(alpha: f64, beta: f64) -> VpaConfig {
        VpaConfig {
            alpha,
            beta,
            ..Default::default()
        }
    }

    #[test]
    fn equal_ranks_split_evenly() {
        let p = baseline_budget(&ranks(&[("a", 1.3), ("b", 1.3)]), &VpaConfig::default()).unwrap();
        assert_eq!(p.get("a"), Some(50.0));
        assert_eq!(p.get("b"), Some(50.0));
    }

    #[test]
    fn proportional_split() {
        let p = baseline_budget(&ranks(&[("a", 3.0), ("b", 1.0)]), &VpaConfig::default()).unwrap();
        assert_eq!(p.get("a"), Some(75.0));
        assert_eq!(p.get("b"), Some(25.0));
    }

    #[test]
    fn floor_lifts_tiny_domain() {
        let c = VpaConfig {
            min_pages: 10,
            ..Default::default()
        };
        let p = baseline_budget(&ranks(&[("a", 5.0), ("b", 4.0), ("tiny", 0.1)]), &c).unwrap();
        assert_eq!(p.get("tiny"), Some(10.0));
        assert!((p.get("a").unwrap() - 50.0).abs() < 1e-12);
        assert!((p.get("b").unwrap() - 40.0).abs() < 1e-12);
        assert!((p.total() - 100.0).abs() < 1e-9);
    }

    #[test]
    fn baseline_errors() {
        assert_eq!(
            baseline_budget(&ranks(&[("a", 0.0), ("b", 0.0)]), &VpaConfig::default()),
            Err(Error::AllRanksZero)
        );
        let c = VpaConfig {
            min_pages: 60,
            ..Default::default()
        };
        assert!(matches!(
            baseline_budget(&ranks(&[("a", 1.0), ("b", 1.0)]), &c),
            Err(Error::InfeasibleFloor { .. })
        ));
        assert!(baseline_budget(&BTreeMap::new(), &VpaConfig::default()).is_err());
    }

    #[test]
    fn correction_values() {
        assert_eq!(vpa_correction(0.0, &cfg(1.0, 1.0)), Ok(1.0));
        assert_eq!(vpa_correction(0.5, &cfg(1.0, 1.0)), Ok(1.5));
        assert_eq!(vpa_correction(0.5, &cfg(2.0, 2.0)), Ok(1.5));
        assert_eq!(vpa_correction(1.5, &cfg(1.0, 1.0)), Err(Error::LambdaOutOfRange(1.5)));
        assert!(vpa_correction(-0.1, &cfg(1.0, 1.0)).is_err());
    }

    #[test]
    fn apply_renormalizes() {
        let base = baseline_budget(&ranks(&[("a", 1.0), ("b", 1.0)]), &VpaConfig::default()).unwrap();
        let p = apply_vpa(&base, &ranks(&[("a", 1.0), ("b", 0.0)]), &cfg(1.0, 1.0)).unwrap();
        assert!((p.get("a").unwrap() - 100.0 * 100.0 / 150.0).abs() < 1e-12);
        assert!((p.get("b").unwrap() - 100.0 * 50.0 / 150.0).abs() < 1e-12);
        assert_eq!(p.slots(), [("a".to_string(), 67), ("b".to_string(), 33)].into_iter().collect());
    }

    #[test]
    fn zero_alpha_or_zero_lambda_is_identity() {
        let base = baseline_budget(&ranks(&[("a", 1.7), ("b", 0.3), ("c", 2.9)]), &VpaConfig::default()).unwrap();
        let p = apply_vpa(&base, &ranks(&[("a", 0.9), ("b", 0.1)]), &cfg(0.0, 1.0)).unwrap();
        assert_eq!(p, base);
        let p = apply_vpa(&base, &BTreeMap::new(), &cfg(3.0, 0.5)).unwrap();
        assert_eq!(p, base);
    }

    #[test]
    fn slots_sum_to_total() {
        let p = baseline_budget(&ranks(&[("a", 1.0), ("b", 1.0), ("c", 1.0)]), &VpaConfig::default()).unwrap();
        let s = p.slots();
        assert_eq!(s.values().sum::<u64>(), 100);
        assert_eq!(s["a"], 34);
    }

    fn eq(terms: &[(&str, f64)], importance: f64) -> EigenQuery {
        EigenQuery {
            rank: 0,
            eigenvalue: 1.0,
            importance,
            terms: terms.iter().map(|(k, c)| (k.to_string(), *c)).collect(),
        }
    }

    fn small_corpus() -> Corpus {
        let docs = vec![
            Document::new("http://a/1", "a").with_element(ElementKind::Body, "mp3 free").with_outlink("b"),
            Document::new("http://b/1", "b").with_element(ElementKind::Body, "mp3 news").with_outlink("a"),
            Document::new("http://c/1", "c").with_element(ElementKind::Body, "recipes").with_outlink("a"),
        ];
        Corpus::from_documents(docs).unwrap().0
    }

    #[test]
    fn lambda_is_importance_weighted_share() {
        let c = small_corpus();
        let w = RankWeights::default();
        // "free" only in a; "mp3" split evenly between a and b
        let eqs = [eq(&[("free", 1.0)], 0.5), eq(&[("mp3", 1.0)], 0.25)];
        let l = domain_lambdas(&IndexView::full(&c), &eqs, &w);
        assert!((l["a"] - (0.5 + 0.125)).abs() < 1e-15);
        assert!((l["b"] - 0.125).abs() < 1e-15);
        assert_eq!(l["c"], 0.0);
        assert_eq!(domain_lambda(c.domain("a").unwrap(), &eqs, &c, &w), l["a"]);
        // nothing matches: share 0
        let none = domain_lambdas(&IndexView::full(&c), &[eq(&[("zzz", 1.0)], 1.0)], &w);
        assert!(none.values().all(|v| *v == 0.0));
    }

    #[test]
    fn lambda_over_empty_index_is_zero() {
        let c = small_corpus();
        let state = CrawlState::default();
        let l = domain_lambdas(&IndexView::revealed(&c, &state), &[eq(&[("free", 1.0)], 1.0)], &RankWeights::default());
        assert!(l.values().all(|v| *v == 0.0));
    }

    #[test]
    fn cycle_reveals_and_advances() {
        let c = small_corpus();
        let log = QueryLog::new(vec![Query::from_text("mp3 free", 3).unwrap()]);
        let state = CrawlState::seeded(&c, 0);
        let config = CycleConfig {
            vpa: VpaConfig {
                total_budget: 3,
                min_pages: 1,
                ..Default::default()
            },
            ..Default::default()
        };
        let (next, trace) = run_cycle(&state, &c, &log, &config).unwrap();
        assert_eq!(next.cycle_index(), 1);
        assert_eq!(trace.cycle, 1);
        assert_eq!(next.total_revealed(), 3);
        assert!(next.is_consistent_with(&c));
        assert!(!trace.eigenqueries.is_empty());
        let (again, _) = run_cycle(&next, &c, &log, &config).unwrap();
        assert_eq!(again.total_revealed(), 3);
    }

    #[test]
    fn empty_log_means_baseline() {
        let c = small_corpus();
        let state = CrawlState::seeded(&c, 1);
        let config = CycleConfig::default();
        let (_, rows) = plan_cycle(&state, &c, &QueryLog::default(), &config).unwrap();
        for r in rows {
            assert_eq!(r.lambda_hat, 0.0);
            assert_eq!(r.final_budget, r.baseline);
        }
    }

    #[test]
    fn fractional_budget_is_banked() {
        // one domain with 5 pages sharing 1 slot per cycle with a richer neighbour
        let mut docs: Vec<Document> = (0..5)
            .map(|i| Document::new(alloc::format!("http://small/{i}"), "small").with_outlink("big"))
            .collect();
        docs.extend((0..50).map(|i| Document::new(alloc::format!("http://big/{i:02}"), "big").with_outlink("small")));
        let c = Corpus::from_documents(docs).unwrap().0;
        let config = CycleConfig {
            vpa: VpaConfig {
                total_budget: 1,
                ..Default::default()
            },
            ..Default::default()
        };
        let log = QueryLog::default();
        let mut state = CrawlState::seeded(&c, 0);
        let mut small_slots = 0;
        for _ in 0..4 {
            let (next, trace) = run_cycle(&state, &c, &log, &config).unwrap();
            let row = trace.domains.iter().find(|d| d.domain == "small").unwrap();
            assert!((row.credit + row.final_budget - row.slots as f64 - next.credit("small")).abs() < 1e-12);
            small_slots += row.slots;
            state = next;
        }
        // equal ranks: half a slot per cycle each
        assert_eq!(small_slots, 2);
        assert_eq!(state.revealed_count("small"), 2);
    }
}
