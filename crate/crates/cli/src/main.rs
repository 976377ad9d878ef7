//! `mhqg`: generate, filter and inspect multi-hop QA datasets.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use mhqg_core::backends::{Backend, BackendDescriptor, BackendError, BackendKind, BACKEND_URL_ENV};
use mhqg_core::corpus::{load_table_corpus, load_text_pair_corpus, LinkedTableContext, PassagePair};
use mhqg_core::dataset::{read_jsonl, write_jsonl, CandidateQA, ProvenanceStep};
use mhqg_core::filtration::{filter, FilterError};
use mhqg_core::graph::{builtin, Engine, ExecConfig, GraphError, GraphKind, ReasoningGraph, DEFAULT_MAX_FANOUT};
use mhqg_core::hashing::digest;
use mhqg_core::nlp::Nlp;
use mhqg_core::operators::DEFAULT_RETRIES;
use mhqg_core::qdmr::{make_qdmr, realize_remote, realize_rules, QdmrError};
use mhqg_core::stats::{compare_distributions, compute_stats, render_histogram};

#[derive(Debug)]
enum CliError {
    Config(String),
    Corpus(String),
    Backend(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Corpus(_) => 3,
            CliError::Backend(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Corpus(m) => write!(f, "input error: {m}"),
            CliError::Backend(m) => write!(f, "backend error: {m}"),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Corpus(format!("{}: {e}", path.display()))
}

#[derive(Parser)]
#[command(name = "mhqg", version, about = "Multi-hop question generation over tables and passages")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load the corpora and report their sizes.
    IngestCheck(CorpusArgs),
    /// Execute reasoning graphs over the corpora and write JSONL.
    Generate(GenerateArgs),
    /// Score, deduplicate and keep the top-N candidates.
    Filter(FilterArgs),
    /// Per-kind counts and wh-type distribution of a JSONL dataset.
    Stats(StatsArgs),
    /// QDMR-to-question baseline over the table corpus.
    QdmrBaseline(QdmrArgs),
    /// Write the builtin graphs as JSON files.
    ExportGraphs(ExportArgs),
}

#[derive(Args, Clone, Default)]
struct CorpusArgs {
    /// Table corpus (JSON array of linked table contexts).
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Passage-pair corpus (JSON array).
    #[arg(long)]
    pairs: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, Serialize, Deserialize, PartialEq, Eq, Debug)]
#[serde(rename_all = "lowercase")]
enum BackendChoice {
    Stub,
    Remote,
}

#[derive(Args, Clone)]
struct BackendArgs {
    #[arg(long, value_enum)]
    backend: Option<BackendChoice>,
    #[arg(long, env = BACKEND_URL_ENV)]
    backend_url: Option<String>,
    /// Seed for the stub backend and for sampling.
    #[arg(long)]
    seed: Option<u64>,
    /// Run configuration in TOML; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[command(flatten)]
    backend: BackendArgs,
    /// Builtin graph to run; repeatable.
    #[arg(long = "graph")]
    graphs: Vec<String>,
    /// Extra graph definitions in JSON; repeatable.
    #[arg(long = "graph-file")]
    graph_files: Vec<PathBuf>,
    #[arg(long)]
    max_fanout: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FilterArgs {
    /// Candidate JSONL.
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    backend: BackendArgs,
    #[arg(long)]
    top_n: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long)]
    input: PathBuf,
    /// Second dataset whose distribution is compared with the first.
    #[arg(long)]
    compare: Option<PathBuf>,
    /// Where to write the stats JSON; printed when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Realizer {
    Rules,
    Backend,
}

#[derive(Args)]
struct QdmrArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[command(flatten)]
    backend: BackendArgs,
    #[arg(long = "graph")]
    graphs: Vec<String>,
    #[arg(long, value_enum, default_value = "rules")]
    realizer: Realizer,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long)]
    dir: PathBuf,
}

/// Settings readable from `--config`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunConfig {
    corpus: Option<PathBuf>,
    pairs: Option<PathBuf>,
    #[serde(default)]
    graphs: Vec<String>,
    backend: Option<BackendChoice>,
    backend_url: Option<String>,
    timeout_ms: Option<u64>,
    retries: Option<u32>,
    top_n: Option<usize>,
    max_fanout: Option<usize>,
    seed: Option<u64>,
    out: Option<PathBuf>,
}

fn load_config(path: Option<&Path>) -> Result<RunConfig> {
    let Some(path) = path else { return Ok(RunConfig::default()) };
    let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn descriptor(args: &BackendArgs, cfg: &RunConfig) -> Result<BackendDescriptor> {
    let choice = args.backend.or(cfg.backend).unwrap_or(BackendChoice::Stub);
    let mut d = BackendDescriptor {
        kind: match choice {
            BackendChoice::Stub => BackendKind::Stub,
            BackendChoice::Remote => BackendKind::Remote,
        },
        endpoint: args.backend_url.clone().or_else(|| cfg.backend_url.clone()),
        seed: args.seed.or(cfg.seed).unwrap_or(0),
        ..BackendDescriptor::default()
    };
    if let Some(t) = cfg.timeout_ms {
        d.timeout_ms = t;
    }
    if let Some(r) = cfg.retries {
        d.retries = r;
    }
    d.validate().map_err(CliError::Config)?;
    Ok(d)
}

fn build_backend(d: &BackendDescriptor, nlp: Arc<Nlp>) -> Result<Arc<dyn Backend>> {
    d.build(nlp).map_err(CliError::Config)
}

fn parse_kinds(names: &[String]) -> Result<Vec<GraphKind>> {
    names
        .iter()
        .map(|n| GraphKind::parse(n).ok_or_else(|| CliError::Config(format!("unknown graph {n:?}"))))
        .collect()
}

fn load_corpora(
    args: &CorpusArgs,
    cfg: &RunConfig,
) -> Result<(Vec<LinkedTableContext>, Vec<PassagePair>)> {
    let tables = match args.corpus.as_ref().or(cfg.corpus.as_ref()) {
        Some(p) => load_table_corpus(p).map_err(|e| io_err(p, e))?,
        None => Vec::new(),
    };
    let pairs = match args.pairs.as_ref().or(cfg.pairs.as_ref()) {
        Some(p) => load_text_pair_corpus(p).map_err(|e| io_err(p, e))?,
        None => Vec::new(),
    };
    Ok((tables, pairs))
}

fn report_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".report.json");
    PathBuf::from(s)
}

fn write_dataset(out: Option<&Path>, items: &[CandidateQA]) -> Result<()> {
    match out {
        Some(path) => {
            create_parent(path)?;
            let f = File::create(path).map_err(|e| io_err(path, e))?;
            write_jsonl(BufWriter::new(f), items).map_err(|e| io_err(path, e))
        }
        None => write_jsonl(std::io::stdout().lock(), items).map_err(|e| CliError::Corpus(e.to_string())),
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    create_parent(path)?;
    fs::write(path, text).map_err(|e| io_err(path, e))
}

fn create_parent(path: &Path) -> Result<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => fs::create_dir_all(dir).map_err(|e| io_err(dir, e)),
        _ => Ok(()),
    }
}

fn read_dataset(path: &Path) -> Result<Vec<CandidateQA>> {
    let f = File::open(path).map_err(|e| io_err(path, e))?;
    read_jsonl(BufReader::new(f)).map_err(|e| io_err(path, e))
}

fn backend_error(e: BackendError) -> CliError {
    match e {
        BackendError::Precondition(m) => CliError::Config(m),
        other => CliError::Backend(other.to_string()),
    }
}

fn ingest_check(args: CorpusArgs) -> Result<()> {
    if args.corpus.is_none() && args.pairs.is_none() {
        return Err(CliError::Config("give --corpus and/or --pairs".into()));
    }
    let (tables, pairs) = load_corpora(&args, &RunConfig::default())?;
    let passages: usize = tables.iter().map(|c| c.passages.len()).sum();
    let summary = serde_json::json!({
        "tables": tables.len(),
        "linked_passages": passages,
        "pairs": pairs.len(),
    });
    println!("{summary}");
    Ok(())
}

fn generate(args: GenerateArgs) -> Result<()> {
    let cfg = load_config(args.backend.config.as_deref())?;
    let names = if args.graphs.is_empty() { cfg.graphs.clone() } else { args.graphs.clone() };
    let mut graphs: Vec<ReasoningGraph> = parse_kinds(&names)?.into_iter().map(builtin).collect();
    for path in &args.graph_files {
        let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let g = ReasoningGraph::from_json(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let violations = g.validate();
        if !violations.is_empty() {
            let list: Vec<String> = violations.iter().map(ToString::to_string).collect();
            return Err(CliError::Config(format!("{}: {}", path.display(), list.join("; "))));
        }
        graphs.push(g);
    }
    if graphs.is_empty() {
        return Err(CliError::Config("no graphs selected (use --graph)".into()));
    }
    let max_fanout = args.max_fanout.or(cfg.max_fanout).unwrap_or(DEFAULT_MAX_FANOUT);
    if max_fanout == 0 {
        return Err(CliError::Config("--max-fanout must be at least 1".into()));
    }
    let desc = descriptor(&args.backend, &cfg)?;
    if args.corpus.corpus.is_none() && args.corpus.pairs.is_none() && cfg.corpus.is_none() && cfg.pairs.is_none() {
        return Err(CliError::Config("give --corpus and/or --pairs".into()));
    }
    let (tables, pairs) = load_corpora(&args.corpus, &cfg)?;
    let nlp = Nlp::bundled();
    let engine = Engine::new(nlp.clone(), build_backend(&desc, nlp)?)
        .with_config(ExecConfig { max_fanout, retries: DEFAULT_RETRIES });
    let run = engine.generate_with(&graphs, &tables, &pairs).map_err(|e| match e {
        GraphError::BackendUnavailable(m) => CliError::Backend(m),
        other => CliError::Config(other.to_string()),
    })?;
    let out = args.out.or(cfg.out);
    write_dataset(out.as_deref(), &run.candidates)?;
    if let Some(out) = &out {
        write_json(&report_path(out), &run.report)?;
    }
    log::info!("{} candidates from {} branches", run.report.candidates, run.report.branches);
    Ok(())
}

fn filter_cmd(args: FilterArgs) -> Result<()> {
    let cfg = load_config(args.backend.config.as_deref())?;
    let top_n = args
        .top_n
        .or(cfg.top_n)
        .ok_or_else(|| CliError::Config("--top-n is required".into()))?;
    let desc = descriptor(&args.backend, &cfg)?;
    let items = read_dataset(&args.input)?;
    let backend = build_backend(&desc, Nlp::bundled())?;
    let (kept, report) = filter(items, backend.as_ref(), top_n).map_err(|e| match e {
        FilterError::Backend(b) => backend_error(b),
        FilterError::UnscoredCandidate(id) => CliError::Corpus(format!("candidate {id} left unscored")),
    })?;
    let out = args.out.or(cfg.out);
    write_dataset(out.as_deref(), &kept)?;
    match &out {
        Some(out) => write_json(&report_path(out), &report)?,
        None => eprintln!("{}", serde_json::to_string(&report).expect("reports serialize")),
    }
    Ok(())
}

fn stats_cmd(args: StatsArgs) -> Result<()> {
    let stats = compute_stats(&read_dataset(&args.input)?);
    let mut doc = serde_json::to_value(&stats).expect("stats serialize");
    if let Some(other) = &args.compare {
        let b = compute_stats(&read_dataset(other)?);
        doc["difference"] = serde_json::to_value(compare_distributions(&stats, &b)).expect("stats serialize");
    }
    match &args.out {
        Some(path) => {
            write_json(path, &doc)?;
            print!("{}", render_histogram(&stats));
        }
        None => {
            println!("{}", serde_json::to_string_pretty(&doc).expect("stats serialize"));
            eprint!("{}", render_histogram(&stats));
        }
    }
    Ok(())
}

fn qdmr_cmd(args: QdmrArgs) -> Result<()> {
    let cfg = load_config(args.backend.config.as_deref())?;
    let names = if args.graphs.is_empty() {
        vec!["table_to_text".to_string(), "text_to_table".to_string()]
    } else {
        args.graphs.clone()
    };
    let kinds = parse_kinds(&names)?;
    if let Some(k) = kinds.iter().find(|k| !matches!(k, GraphKind::TableToText | GraphKind::TextToTable)) {
        return Err(CliError::Config(format!("qdmr-baseline supports table_to_text and text_to_table, not {k}")));
    }
    let seed = args.backend.seed.or(cfg.seed).unwrap_or(0);
    let path = args
        .corpus
        .corpus
        .as_ref()
        .or(cfg.corpus.as_ref())
        .ok_or_else(|| CliError::Config("--corpus is required".into()))?;
    let tables = load_table_corpus(path).map_err(|e| io_err(path, e))?;
    let backend = match args.realizer {
        Realizer::Rules => None,
        Realizer::Backend => Some(build_backend(&descriptor(&args.backend, &cfg)?, Nlp::bundled())?),
    };
    let nlp = Nlp::bundled();
    let mut out = Vec::new();
    for ctx in &tables {
        for &kind in &kinds {
            let programs = match make_qdmr(ctx, kind, seed, &nlp) {
                Ok(p) => p,
                Err(QdmrError::InsufficientStructure(m)) => {
                    log::warn!("skipping {}: {m}", ctx.table.id);
                    continue;
                }
                Err(e) => return Err(CliError::Config(e.to_string())),
            };
            for p in programs {
                let question = match &backend {
                    None => realize_rules(&p),
                    Some(b) => realize_remote(&p, b.as_ref()),
                }
                .map_err(|e| match e {
                    QdmrError::Backend(b) => backend_error(b),
                    other => CliError::Config(other.to_string()),
                })?;
                let steps = serde_json::to_string(&p.steps).expect("steps serialize");
                let step = ProvenanceStep {
                    node: "qdmr".into(),
                    op: "QdmrToQuestion".into(),
                    inputs: vec![digest(&steps)],
                    output: digest(&question),
                };
                out.push(CandidateQA::new(kind, question, p.answer.clone(), p.sources.clone(), vec![step]));
            }
        }
    }
    write_dataset(args.out.as_deref().or(cfg.out.as_deref()), &out)
}

fn export_graphs(args: ExportArgs) -> Result<()> {
    fs::create_dir_all(&args.dir).map_err(|e| io_err(&args.dir, e))?;
    for kind in GraphKind::ALL {
        let path = args.dir.join(format!("{kind}.json"));
        let mut text = builtin(kind).to_json();
        text.push('\n');
        fs::write(&path, text).map_err(|e| io_err(&path, e))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::IngestCheck(a) => ingest_check(a),
        Command::Generate(a) => generate(a),
        Command::Filter(a) => filter_cmd(a),
        Command::Stats(a) => stats_cmd(a),
        Command::QdmrBaseline(a) => qdmr_cmd(a),
        Command::ExportGraphs(a) => export_graphs(a),
    };
    match result {
        Ok(()) => {
            let _ = std::io::stdout().flush();
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("mhqg: {e}");
            ExitCode::from(e.code())
        }
    }
}
