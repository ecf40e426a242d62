use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use voxpop_core::corpus::Corpus;
use voxpop_core::querylog::QueryLog;
use voxpop_core::ranking::{rank_documents, static_rank};
use voxpop_core::spamguard::scan;
use voxpop_core::synthweb::{generate_query_log, generate_web};
use voxpop_core::vpa::{analyze_log, plan_cycle, run_cycle, CrawlState};
use voxpop_core::Warning;

use crate::config::PipelineConfig;
use crate::error::{CliError, Result};
use crate::io;
use crate::report::{self, Cell, Format, Table};

/// Query-driven crawl budgeting, ranking and link-spam screening.
#[derive(Debug, Parser)]
#[command(name = "voxpop", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Load a corpus and report its domains and link graph.
    Ingest,
    /// Diagonalize the query co-occurrence matrix and report eigenqueries.
    Analyze,
    /// Rank documents for one query (`--query`, else the most frequent logged query).
    Rank,
    /// Plan one cycle's crawl budget without crawling.
    Allocate,
    /// Run `--n` full feedback cycles.
    Cycle,
    /// Screen every linked-to domain for link-farm in-link patterns.
    Spamscan,
    /// Generate a labeled synthetic web and query log.
    Synth,
    /// Run every stage and write all reports.
    Report,
}

#[derive(Debug, Default, Clone, Args)]
pub struct Flags {
    /// JSON config file; flags override its values.
    #[arg(long, global = true, env = "VOXPOP_CONFIG")]
    pub config: Option<PathBuf>,
    /// Corpus file (JSON Lines).
    #[arg(long, global = true)]
    pub corpus: Option<PathBuf>,
    /// Query log (count<TAB>keywords).
    #[arg(long, global = true)]
    pub queries: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Crawl state to resume from (default: a freshly seeded index).
    #[arg(long, global = true)]
    pub state: Option<PathBuf>,
    /// VPA feedback strength
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// VPA feedback exponent
    #[arg(long, global = true)]
    pub beta: Option<f64>,
    /// Static-rank damping factor
    #[arg(long, global = true)]
    pub damping: Option<f64>,
    /// Static-rank convergence tolerance (L1).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Number of eigenqueries kept.
    #[arg(long, global = true)]
    pub top_eigen: Option<usize>,
    /// Keywords kept in the co-occurrence vocabulary
    #[arg(long, global = true)]
    pub vocab_limit: Option<usize>,
    /// Rank-variance threshold below which a target is flagged
    #[arg(long, global = true)]
    pub sigma2_critical: Option<f64>,
    /// In-links needed before a target is judged
    #[arg(long, global = true)]
    pub min_samples: Option<usize>,
    /// Seed for `synth`
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Number of cycles.
    #[arg(long, global = true)]
    pub n: Option<u64>,
    /// Report format (default: both).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Query for `rank`, space separated.
    #[arg(long, global = true)]
    pub query: Option<String>,
    /// Background domains for `synth`.
    #[arg(long, global = true)]
    pub domains: Option<usize>,
    /// Natural clusters for `synth`.
    #[arg(long, global = true)]
    pub natural: Option<usize>,
    /// Spam clusters for `synth`.
    #[arg(long, global = true)]
    pub spam: Option<usize>,
    /// Topic served by a single domain in `synth`.
    #[arg(long, global = true)]
    pub exclusive_topic: Option<String>,
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli.command, &cli.flags) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn resolve_config(flags: &Flags) -> Result<PipelineConfig> {
    let mut cfg = match &flags.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    let f = flags.clone();
    macro_rules! set {
        ($flag:expr => $field:expr) => {
            if let Some(v) = $flag {
                $field = v.into();
            }
        };
    }
    set!(f.corpus => cfg.corpus);
    set!(f.queries => cfg.queries);
    set!(f.out => cfg.out);
    set!(f.alpha => cfg.vpa.alpha);
    set!(f.beta => cfg.vpa.beta);
    set!(f.damping => cfg.static_rank.damping);
    set!(f.tol => cfg.static_rank.tolerance);
    set!(f.top_eigen => cfg.analysis.top_eigen);
    set!(f.vocab_limit => cfg.analysis.vocab_limit);
    set!(f.sigma2_critical => cfg.spam.sigma2_critical);
    set!(f.min_samples => cfg.spam.min_samples);
    set!(f.seed => cfg.seed);
    set!(f.n => cfg.vpa.cycles);
    set!(f.domains => cfg.synth.n_domains);
    set!(f.natural => cfg.synth.natural_clusters);
    set!(f.spam => cfg.synth.spam_clusters);
    if let Some(t) = f.exclusive_topic {
        cfg.synth.exclusive_topic = Some(t);
    }
    if let Some(fmt) = f.format {
        cfg.formats = vec![fmt];
    }
    cfg.check_paths()?;
    Ok(cfg)
}

pub fn execute(command: Command, flags: &Flags) -> Result<()> {
    let cfg = resolve_config(flags)?;
    let out = cfg
        .out
        .clone()
        .ok_or_else(|| CliError::usage("no output directory: pass --out or set `out` in the config"))?;
    let stage = Stage { cfg: &cfg, out: &out, state: flags.state.as_deref(), query: flags.query.as_deref() };
    match command {
        Command::Ingest => stage.ingest(&stage.corpus()?),
        Command::Analyze => stage.analyze(&stage.queries()?),
        Command::Rank => {
            let corpus = stage.corpus()?;
            let log = if stage.query.is_some() { None } else { Some(stage.queries()?) };
            stage.rank(&corpus, log.as_ref())
        }
        Command::Allocate => {
            let (corpus, log) = (stage.corpus()?, stage.queries()?);
            stage.allocate(&corpus, &log)
        }
        Command::Cycle => {
            let (corpus, log) = (stage.corpus()?, stage.queries()?);
            stage.ingest(&corpus)?;
            stage.analyze(&log)?;
            stage.cycles(&corpus, &log)
        }
        Command::Spamscan => stage.spamscan(&stage.corpus()?),
        Command::Synth => stage.synth(),
        Command::Report => {
            let (corpus, log) = (stage.corpus()?, stage.queries()?);
            stage.ingest(&corpus)?;
            stage.analyze(&log)?;
            stage.rank(&corpus, Some(&log))?;
            stage.cycles(&corpus, &log)?;
            stage.spamscan(&corpus)
        }
    }
}

struct Stage<'a> {
    cfg: &'a PipelineConfig,
    out: &'a Path,
    state: Option<&'a Path>,
    query: Option<&'a str>,
}

fn log_warnings(source: &Path, warnings: &[Warning]) {
    for w in warnings {
        log::warn!("{}: {w}", source.display());
    }
}

impl Stage<'_> {
    fn corpus(&self) -> Result<Corpus> {
        let path = self
            .cfg
            .corpus
            .as_deref()
            .ok_or_else(|| CliError::usage("no corpus: pass --corpus or set `corpus` in the config"))?;
        let (corpus, warnings) = io::read_corpus(path)?;
        log_warnings(path, &warnings);
        log::info!("{}: {} documents in {} domains", path.display(), corpus.n_documents(), corpus.n_domains());
        Ok(corpus)
    }

    fn queries(&self) -> Result<QueryLog> {
        let path = self
            .cfg
            .queries
            .as_deref()
            .ok_or_else(|| CliError::usage("no query log: pass --queries or set `queries` in the config"))?;
        let (log, warnings) = io::read_queries(path, self.cfg.analysis.max_query_len)?;
        log_warnings(path, &warnings);
        Ok(log)
    }

    fn initial_state(&self, corpus: &Corpus) -> Result<CrawlState> {
        match self.state {
            Some(p) => io::read_state(p, corpus),
            None => Ok(CrawlState::seeded(corpus, self.cfg.vpa.seed_pages)),
        }
    }

    fn ingest(&self, corpus: &Corpus) -> Result<()> {
        let g = corpus.link_graph();
        let mut t = Table::new(&["domain", "n_docs", "n_outlinks", "external"]);
        for name in corpus.node_names() {
            let n_docs = corpus.domain(name).map_or(0, |d| d.n_k());
            t.push(vec![name.into(), n_docs.into(), g.out_degree(name).into(), g.is_external(name).into()]);
        }
        t.write(self.out, "ingest", &self.cfg.formats())
    }

    fn analyze(&self, log: &QueryLog) -> Result<()> {
        let a = &self.cfg.analysis;
        let eqs = analyze_log(log, a.vocab_limit, a.top_eigen, a.min_coeff)?;
        report::write_json(&self.out.join("eigenreport.json"), &report::eigenqueries_json(&eqs))
    }

    /// Ranking rows for documents that match the query at all.
    fn rank(&self, corpus: &Corpus, log: Option<&QueryLog>) -> Result<()> {
        let keywords: Vec<String> = match (self.query, log) {
            (Some(q), _) => voxpop_core::text::tokenize(q),
            (None, Some(log)) => log
                .entries()
                .iter()
                .fold(None, |best: Option<&voxpop_core::querylog::Query>, q| match best {
                    Some(b) if b.count() >= q.count() => Some(b),
                    _ => Some(q),
                })
                .map(|q| q.keywords().to_vec())
                .unwrap_or_default(),
            (None, None) => Vec::new(),
        };
        if keywords.is_empty() {
            return Err(CliError::usage("no query to rank: pass --query or a non-empty --queries log"));
        }
        let ranks = static_rank(corpus, &self.cfg.static_rank()?)?;
        let ranked = rank_documents(corpus, &keywords, &self.cfg.weights()?, &ranks)?;
        let mut t = Table::new(&["domain", "document-url", "dynamic", "static", "combined"]);
        for r in ranked.into_iter().filter(|r| r.dynamic > 0.0) {
            t.push(vec![r.domain.into(), r.url.into(), r.dynamic.into(), r.stat.into(), r.combined.into()]);
        }
        t.write(self.out, "ranking", &self.cfg.formats())
    }

    fn allocate(&self, corpus: &Corpus, log: &QueryLog) -> Result<()> {
        let state = self.initial_state(corpus)?;
        let (_, rows) = plan_cycle(&state, corpus, log, &self.cfg.cycle()?)?;
        report::budget_table(&rows).write(self.out, "budget", &self.cfg.formats())
    }

    /// Runs the configured number of cycles; the budget report shows the last one.
    fn cycles(&self, corpus: &Corpus, log: &QueryLog) -> Result<()> {
        let n = self.cfg.vpa.cycles;
        if n == 0 {
            return Err(CliError::usage("--n must be at least 1"));
        }
        let cfg = self.cfg.cycle()?;
        let mut state = self.initial_state(corpus)?;
        let mut traces = Vec::new();
        for _ in 0..n {
            let (next, trace) = run_cycle(&state, corpus, log, &cfg)?;
            log::info!("cycle {}: {} documents indexed", trace.cycle, next.total_revealed());
            state = next;
            traces.push(trace);
        }
        let last = traces.last().expect("n >= 1");
        report::budget_table(&last.domains).write(self.out, "budget", &self.cfg.formats())?;
        report::write_json(&self.out.join("cycle_trace.json"), &report::cycle_trace_json(&traces))?;
        io::write_file(&self.out.join("state.json"), &io::state_to_json(&state))
    }

    fn spamscan(&self, corpus: &Corpus) -> Result<()> {
        let ranks = static_rank(corpus, &self.cfg.static_rank()?)?;
        let results = scan(corpus, &ranks, &self.cfg.spam()?)?;
        let mut t = Table::new(&["target_domain", "n_inlinks", "r0", "sigma2", "verdict"]);
        for (dist, v) in results {
            t.push(vec![
                Cell::from(dist.target.as_str()),
                dist.n_samples().into(),
                dist.r0.into(),
                dist.sigma2.into(),
                v.verdict.as_str().into(),
            ]);
        }
        t.write(self.out, "spamscan", &self.cfg.formats())
    }

    fn synth(&self) -> Result<()> {
        let web = generate_web(&self.cfg.web_gen()?)?;
        let log = generate_query_log(&self.cfg.query_gen()?, web.topics())?;
        io::write_file(&self.out.join("corpus.jsonl"), &io::corpus_to_jsonl(web.corpus()))?;
        io::write_file(&self.out.join("queries.tsv"), &log.to_tsv())?;
        io::write_file(&self.out.join("labels.json"), &io::labels_to_json(web.labels()))
    }
}
