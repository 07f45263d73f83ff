//! `kgdiv` command line: fetch, audit, score, report, validate.
//!
//! Exit codes: 0 success, 1 runtime or data failure, 2 usage or configuration
//! error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use log::{info, warn};
use serde::Deserialize;

use crate::audit::{
    findings_csv, parse_date, run_audit, validate_snapshot, AuditOptions, BaselineTable, Body,
    NormalizationMap,
};
use crate::config::RunConfig;
use crate::diversity::{
    diversity_of, metric_by_id, ActorType, DiversityParams, EntityId, EntityRecord, FeatureSet,
};
use crate::kg::{
    fetch_parties, fetch_politicians, Dialect, FixtureTransport, HttpTransport, Snapshot,
    SparqlClient, TemplateCatalog, Transport,
};
use crate::pipeline::{
    aggregate_mentions, annotate, enrich_entity, load_rules, match_rules, HttpAnnotationEndpoint,
    InMemoryTriples, LocalOntology, MatchLayer, MatchRule, PipelineError, Provenance,
    SparqlTriples, TextDocument, Token, TripleSource,
};
use crate::report::{emit_figure_svg, parse_audit_csv, rows_csv, FigureSpec, RenderStyle};

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

fn usage(m: impl std::fmt::Display) -> CliError {
    CliError::Usage(m.to_string())
}

fn runtime(m: impl std::fmt::Display) -> CliError {
    CliError::Runtime(m.to_string())
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "kgdiv", version, about = "Actor diversity and knowledge-graph party-representation audits")]
pub struct Cli {
    /// Run configuration (TOML).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// More log output (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Query a knowledge source and write politicians.csv / parties.csv.
    Fetch(FetchArgs),
    /// Audit snapshots against a seat baseline.
    Audit(AuditArgs),
    /// Diversity score per document of a corpus.
    Score(ScoreArgs),
    /// Render audit CSV as SVG figures.
    Report(ReportArgs),
    /// Data-quality findings for snapshots.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct FetchArgs {
    #[arg(long, value_parser = parse_dialect)]
    pub source: Dialect,
    /// Replay recorded results from this directory instead of the network.
    #[arg(long)]
    pub from_fixture: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Stamp for the retrieved_at column (YYYY-MM-DD).
    #[arg(long)]
    pub retrieved_at: Option<String>,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    /// Snapshot directory; repeat for several sources.
    #[arg(long, required = true)]
    pub snapshot: Vec<PathBuf>,
    #[arg(long)]
    pub baseline: Option<PathBuf>,
    /// Alias file (alias,canonical_acronym).
    #[arg(long)]
    pub map: Option<PathBuf>,
    /// Party table (canonical_acronym,alignment,relevance); defaults to
    /// party_info.csv next to the alias file.
    #[arg(long)]
    pub parties: Option<PathBuf>,
    /// Comma-separated years or dates.
    #[arg(long)]
    pub schedule: Option<String>,
    #[arg(long)]
    pub baseline_policy: Option<String>,
    /// KVV or VP.
    #[arg(long)]
    pub body: Option<String>,
    /// Cap for open-ended careers; defaults to the snapshot date.
    #[arg(long)]
    pub today: Option<String>,
    /// Fail when more snapshot rows than this carry unmapped party refs.
    #[arg(long)]
    pub max_unmapped: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// Directory of .txt files, or a CSV with doc_id,text.
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub metric: Option<String>,
    /// Fail instead of falling back to rules when the annotator is down.
    #[arg(long)]
    pub require_nel: bool,
    #[arg(long)]
    pub rules: Option<PathBuf>,
    /// Annotation service URL.
    #[arg(long)]
    pub annotator: Option<String>,
    /// Knowledge base as subject,predicate,object CSV.
    #[arg(long)]
    pub kb: Option<PathBuf>,
    /// Query this source's SPARQL endpoint for triples instead of --kb.
    #[arg(long, value_parser = parse_dialect)]
    pub kb_live: Option<Dialect>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub audit: PathBuf,
    #[arg(long, default_value = "line", value_parser = parse_style)]
    pub style: RenderStyle,
    /// Baseline body label used in titles and file names.
    #[arg(long)]
    pub body: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, required = true)]
    pub snapshot: Vec<PathBuf>,
    #[arg(long)]
    pub map: Option<PathBuf>,
    #[arg(long)]
    pub parties: Option<PathBuf>,
    /// Write findings.csv here instead of printing.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_dialect(s: &str) -> Result<Dialect, String> {
    s.parse()
}

fn parse_style(s: &str) -> Result<RenderStyle, String> {
    s.parse()
}

/// Parses arguments, runs the command and maps the outcome to an exit code.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .try_init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("kgdiv: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

pub fn run(cli: Cli) -> CliResult<()> {
    let config = match &cli.config {
        Some(p) => RunConfig::load(p).map_err(usage)?,
        None => RunConfig::default(),
    };
    match cli.command {
        Command::Fetch(a) => cmd_fetch(&config, a),
        Command::Audit(a) => cmd_audit(&config, a),
        Command::Score(a) => cmd_score(&config, a),
        Command::Report(a) => cmd_report(&config, a),
        Command::Validate(a) => cmd_validate(a),
    }
}

fn out_dir(flag: Option<PathBuf>, config: &RunConfig) -> PathBuf {
    flag.or_else(|| config.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("."))
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| runtime(format!("{}: {e}", parent.display())))?;
    }
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes)
        .and_then(|_| fs::rename(&tmp, path))
        .map_err(|e| {
            let _ = fs::remove_file(&tmp);
            runtime(format!("{}: {e}", path.display()))
        })
}

fn existing(what: &str, p: &Path) -> CliResult<()> {
    if p.exists() {
        Ok(())
    } else {
        Err(usage(format!("{what} `{}` does not exist", p.display())))
    }
}

#[derive(Deserialize)]
struct FixtureManifest {
    retrieved_at: String,
}

fn cmd_fetch(config: &RunConfig, a: FetchArgs) -> CliResult<()> {
    let catalog = match &config.template_catalog {
        Some(p) => TemplateCatalog::load(p).map_err(usage)?,
        None => TemplateCatalog::builtin(),
    };
    let mut endpoint = config.endpoint(a.source);
    let (transport, manifest_date): (Arc<dyn Transport>, Option<String>) = match &a.from_fixture {
        Some(dir) => {
            existing("fixture directory", dir)?;
            let manifest = dir.join("manifest.toml");
            let date = if manifest.exists() {
                let text = fs::read_to_string(&manifest).map_err(runtime)?;
                let m: FixtureManifest = toml::from_str(&text)
                    .map_err(|e| usage(format!("{}: {e}", manifest.display())))?;
                Some(m.retrieved_at)
            } else {
                None
            };
            // Replays are local; no need to throttle them.
            endpoint.url = format!("fixture://{}", dir.display());
            endpoint.max_requests_per_second = 1000.0;
            (Arc::new(FixtureTransport::new(dir)), date)
        }
        None => (Arc::new(HttpTransport), None),
    };
    let retrieved_at = a
        .retrieved_at
        .or(manifest_date)
        .unwrap_or_else(|| chrono::Local::now().date_naive().format("%Y-%m-%d").to_string());
    if parse_date(&retrieved_at).is_none() {
        return Err(usage(format!("retrieved_at `{retrieved_at}` is not YYYY-MM-DD")));
    }
    let client = SparqlClient::new(endpoint, transport).map_err(usage)?;
    let politicians = fetch_politicians(&client, &catalog, &retrieved_at).map_err(runtime)?;
    let parties = fetch_parties(&client, &catalog, &retrieved_at).map_err(runtime)?;
    let snapshot = Snapshot {
        politicians,
        parties,
        career_end_overrides: BTreeMap::new(),
    };
    let dir = out_dir(a.out, config);
    snapshot.write(&dir).map_err(runtime)?;
    info!(
        "{}: wrote {} politician rows and {} party rows to {}",
        a.source,
        snapshot.politicians.len(),
        snapshot.parties.len(),
        dir.display()
    );
    Ok(())
}

fn load_map(alias: &Path, parties: Option<&Path>) -> CliResult<NormalizationMap> {
    existing("normalization map", alias)?;
    let parties = parties
        .map(Path::to_path_buf)
        .unwrap_or_else(|| alias.with_file_name("party_info.csv"));
    existing("party table", &parties)?;
    NormalizationMap::load(alias, &parties).map_err(runtime)
}

fn load_snapshots(dirs: &[PathBuf]) -> CliResult<Snapshot> {
    for d in dirs {
        existing("snapshot directory", d)?;
    }
    Snapshot::load_all(dirs).map_err(runtime)
}

fn cmd_audit(config: &RunConfig, a: AuditArgs) -> CliResult<()> {
    let baseline_path = a
        .baseline
        .or_else(|| config.audit.baseline.clone())
        .ok_or_else(|| usage("audit needs --baseline"))?;
    existing("baseline file", &baseline_path)?;
    let map_path = a
        .map
        .or_else(|| config.audit.map.clone())
        .ok_or_else(|| usage("audit needs --map"))?;
    let parties_path = a.parties.or_else(|| config.audit.parties.clone());
    let map = load_map(&map_path, parties_path.as_deref())?;

    let body: Body = match a.body {
        Some(b) => b.parse().map_err(usage)?,
        None => config.body().map_err(usage)?.unwrap_or(Body::Kvv),
    };
    let mut options = AuditOptions::default();
    if let Some(s) = a.schedule {
        options.schedule = crate::audit::parse_schedule(&s).map_err(usage)?;
    } else if let Some(s) = config.schedule().map_err(usage)? {
        options.schedule = s;
    }
    options.policy = match a.baseline_policy {
        Some(p) => p.parse().map_err(usage)?,
        None => config.policy().map_err(usage)?.unwrap_or_default(),
    };
    if let Some(t) = a.today {
        options.today =
            Some(parse_date(&t).ok_or_else(|| usage(format!("--today `{t}` is not YYYY-MM-DD")))?);
    }
    let max_unmapped = a.max_unmapped.or(config.audit.max_unmapped);

    let snapshot = load_snapshots(&a.snapshot)?;
    let mut tables = BaselineTable::load_all(&baseline_path).map_err(runtime)?;
    let baseline = tables
        .remove(&body)
        .ok_or_else(|| runtime(format!("{} has no {body} elections", baseline_path.display())))?;

    let out = out_dir(a.out, config);
    let findings = validate_snapshot(&snapshot, Some(&map));
    write_file(&out.join("findings.csv"), &findings_csv(&findings))?;
    if !findings.is_empty() {
        warn!("{} data-quality findings; see findings.csv", findings.len());
    }

    let series = run_audit(&snapshot, &map, &baseline, &options).map_err(runtime)?;
    let mut unmapped = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    unmapped.write_record(["source", "party_ref", "rows"]).map_err(runtime)?;
    for ((src, raw), n) in &series.unmapped {
        unmapped.write_record([src.as_str(), raw.as_str(), &n.to_string()]).map_err(runtime)?;
    }
    write_file(&out.join("unmapped.csv"), &unmapped.into_inner().map_err(runtime)?)?;
    if let Some(limit) = max_unmapped {
        if series.unmapped_rows() > limit {
            return Err(runtime(format!(
                "{} rows with unmapped party references (limit {limit}); review unmapped.csv",
                series.unmapped_rows()
            )));
        }
    }

    write_file(&out.join("audit.csv"), &rows_csv(&series.rows))?;
    write_file(
        &out.join("active.csv"),
        &crate::kg::csv_bytes("source,time_point,active_total,low_sample", &series.summaries),
    )?;
    write_file(
        &out.join("coverage.csv"),
        &crate::kg::csv_bytes(
            "source,politicians,no_evidence,contradictory,unmapped_rows",
            &series.coverage,
        ),
    )?;
    for s in series.low_sample_warnings() {
        warn!(
            "low sample: {} at {} has {} active politicians",
            if s.source.is_empty() { "(no source)" } else { &s.source },
            s.time_point,
            s.active_total
        );
    }
    Ok(())
}

fn read_tokens(path: &Path) -> CliResult<Vec<Token>> {
    #[derive(Deserialize)]
    struct Raw {
        surface: String,
        lemma: String,
        char_start: usize,
        char_end: usize,
    }
    let mut rdr = csv::Reader::from_path(path).map_err(|e| runtime(format!("{}: {e}", path.display())))?;
    rdr.deserialize::<Raw>()
        .map(|r| {
            r.map(|r| Token {
                surface: r.surface,
                lemma: r.lemma,
                char_start: r.char_start,
                char_end: r.char_end,
            })
            .map_err(|e| runtime(format!("{}: {e}", path.display())))
        })
        .collect()
}

/// Plain-text files (sorted by name, doc id = file stem, optional
/// `<stem>.tokens.csv` lemma layer) or a `doc_id,text` CSV.
pub fn load_corpus(path: &Path) -> CliResult<Vec<TextDocument>> {
    existing("corpus", path)?;
    if path.is_dir() {
        let mut files: Vec<PathBuf> = fs::read_dir(path)
            .map_err(runtime)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "txt"))
            .collect();
        files.sort();
        let mut docs = Vec::new();
        for f in files {
            let stem = f.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            let text = fs::read_to_string(&f).map_err(|e| runtime(format!("{}: {e}", f.display())))?;
            let mut doc = TextDocument::new(stem.clone(), text);
            let tokens = f.with_file_name(format!("{stem}.tokens.csv"));
            if tokens.exists() {
                doc = doc.with_tokens(read_tokens(&tokens)?).map_err(runtime)?;
            }
            docs.push(doc);
        }
        Ok(docs)
    } else {
        let mut rdr = csv::Reader::from_path(path).map_err(|e| runtime(format!("{}: {e}", path.display())))?;
        let headers = rdr.headers().map_err(runtime)?.clone();
        let col = |name: &str| headers.iter().position(|h| h.trim() == name);
        let (Some(id), Some(text)) = (col("doc_id"), col("text")) else {
            return Err(runtime(format!("{}: expected columns doc_id,text", path.display())));
        };
        let mut docs = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| runtime(format!("{}: {e}", path.display())))?;
            docs.push(TextDocument::new(
                rec.get(id).unwrap_or(""),
                rec.get(text).unwrap_or(""),
            ));
        }
        Ok(docs)
    }
}

fn cmd_score(config: &RunConfig, a: ScoreArgs) -> CliResult<()> {
    let d = config.params().map_err(usage)?;
    let params = DiversityParams::new(a.alpha.unwrap_or(d.alpha), a.beta.unwrap_or(d.beta)).map_err(usage)?;
    let metric_id = a.metric.as_deref().unwrap_or(config.metric());
    let metric = metric_by_id(metric_id).map_err(usage)?;

    let rules: Vec<MatchRule> = match a.rules.or_else(|| config.diversity.rules.clone()) {
        Some(p) => {
            existing("rule file", &p)?;
            load_rules(&p).map_err(usage)?
        }
        None => Vec::new(),
    };
    let annotator_url = a.annotator.or_else(|| config.diversity.annotator_url.clone());
    if a.require_nel && annotator_url.is_none() {
        return Err(usage("--require-nel needs an annotator URL"));
    }
    let ontology = match &config.diversity.ontology {
        Some(p) => LocalOntology::load(p).map_err(usage)?,
        None => LocalOntology::builtin(),
    };
    let kb_dialect = config.diversity.kb_dialect.unwrap_or(Dialect::EnDbpedia);
    let kb: Option<Box<dyn TripleSource>> = match (a.kb.or_else(|| config.diversity.triples.clone()), a.kb_live) {
        (Some(p), _) => {
            existing("knowledge base", &p)?;
            let data = fs::read(&p).map_err(runtime)?;
            Some(Box::new(InMemoryTriples::from_csv(kb_dialect, &data).map_err(runtime)?))
        }
        (None, Some(dialect)) => {
            let catalog = match &config.template_catalog {
                Some(p) => TemplateCatalog::load(p).map_err(usage)?,
                None => TemplateCatalog::builtin(),
            };
            let client = SparqlClient::http(config.endpoint(dialect)).map_err(usage)?;
            Some(Box::new(SparqlTriples::new(client, catalog)))
        }
        (None, None) => None,
    };

    let docs = load_corpus(&a.corpus)?;
    let endpoint = annotator_url.map(HttpAnnotationEndpoint::new);
    let mut nel_down = false;
    let mut warned_lemmas = false;
    let mut enriched: BTreeMap<EntityId, Option<(ActorType, FeatureSet)>> = BTreeMap::new();

    let mut scores = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    scores.write_record(["doc_id", "n_entities", "delta"]).map_err(runtime)?;
    let mut counts_out = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    counts_out
        .write_record(["doc_id", "entity_id", "actor_type", "count"])
        .map_err(runtime)?;

    for doc in &docs {
        let usable: Vec<MatchRule> = if doc.tokens().is_some() {
            rules.clone()
        } else {
            if !warned_lemmas && rules.iter().any(|r| r.layer == MatchLayer::Lemma) {
                warn!("documents without a lemma layer skip lemma rules");
                warned_lemmas = true;
            }
            rules.iter().filter(|r| r.layer == MatchLayer::Surface).cloned().collect()
        };
        let mut mentions = match_rules(doc, &usable).map_err(runtime)?;
        if let (Some(ep), false) = (&endpoint, nel_down) {
            match annotate(doc, ep) {
                Ok(m) => mentions.extend(m),
                Err(e @ PipelineError::AnnotatorTransport { .. }) if !a.require_nel => {
                    warn!("{e}; continuing with rule matches only");
                    nel_down = true;
                }
                Err(e) => return Err(runtime(e)),
            }
        }

        // Actor type and features per entity; annotator hits that are not
        // one of the three actor types are dropped.
        let mut kept = Vec::new();
        for m in &mentions {
            let key = m.entity_key();
            let info = enriched.entry(key.clone()).or_insert_with(|| {
                let (ty, features) = match (&kb, &m.resolved_id) {
                    (Some(src), Some(id)) => match enrich_entity(id.as_str(), src.as_ref(), &ontology) {
                        Ok(e) => (e.actor_type, e.features),
                        Err(err) => {
                            warn!("{err}");
                            (None, FeatureSet::new())
                        }
                    },
                    _ => (None, FeatureSet::new()),
                };
                let ty = ty.or(m.type_hint).or(match m.provenance {
                    Provenance::Rule => Some(ActorType::Person),
                    Provenance::Annotator => None,
                });
                ty.map(|t| (t, features))
            });
            if info.is_some() {
                kept.push(m.clone());
            }
        }
        let counts = aggregate_mentions(&kept);
        let entities: Vec<EntityRecord> = counts
            .keys()
            .filter_map(|id| {
                let (ty, f) = enriched.get(id)?.as_ref()?;
                Some(EntityRecord::new(id.as_str(), *ty, f.clone()))
            })
            .collect();
        let result = diversity_of(&counts, &entities, metric.as_ref(), params).map_err(runtime)?;
        scores
            .write_record([
                doc.doc_id.as_str(),
                &result.variety.to_string(),
                &format!("{:.6}", result.delta),
            ])
            .map_err(runtime)?;
        for e in &entities {
            counts_out
                .write_record([
                    doc.doc_id.as_str(),
                    e.id.as_str(),
                    e.actor_type.as_str(),
                    &counts[&e.id].to_string(),
                ])
                .map_err(runtime)?;
        }
    }
    let out = out_dir(a.out, config);
    write_file(&out.join("scores.csv"), &scores.into_inner().map_err(runtime)?)?;
    write_file(&out.join("entity_counts.csv"), &counts_out.into_inner().map_err(runtime)?)?;
    Ok(())
}

fn cmd_report(config: &RunConfig, a: ReportArgs) -> CliResult<()> {
    existing("audit file", &a.audit)?;
    let data = fs::read(&a.audit).map_err(runtime)?;
    let rows = parse_audit_csv(&data).map_err(runtime)?;
    let body = match a.body {
        Some(b) => b,
        None => config
            .body()
            .map_err(usage)?
            .unwrap_or(Body::Kvv)
            .to_string(),
    };
    let out = out_dir(a.out, config);
    let mut sources: Vec<&str> = rows.iter().map(|r| r.source.as_str()).collect();
    sources.sort();
    sources.dedup();
    if sources.is_empty() {
        let stem = a.audit.file_stem().unwrap_or_default().to_string_lossy().into_owned();
        let spec = FigureSpec::from_rows(&[], &stem, &body, a.style);
        return write_file(&out.join(format!("{stem}_{body}.svg")), emit_figure_svg(&spec).as_bytes());
    }
    for source in sources {
        let spec = FigureSpec::from_rows(&rows, source, &body, a.style);
        write_file(&out.join(format!("{source}_{body}.svg")), emit_figure_svg(&spec).as_bytes())?;
    }
    Ok(())
}

fn cmd_validate(a: ValidateArgs) -> CliResult<()> {
    let snapshot = load_snapshots(&a.snapshot)?;
    let map = match &a.map {
        Some(m) => Some(load_map(m, a.parties.as_deref())?),
        None => None,
    };
    let findings = validate_snapshot(&snapshot, map.as_ref());
    let bytes = findings_csv(&findings);
    match a.out {
        Some(dir) => write_file(&dir.join("findings.csv"), &bytes),
        None => {
            print!("{}", String::from_utf8_lossy(&bytes));
            Ok(())
        }
    }
}
