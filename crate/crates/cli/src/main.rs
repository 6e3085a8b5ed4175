use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use partisan_core::accounts::{self, Threshold};
use partisan_core::corpus::{self, Corpus, FilterConfig};
use partisan_core::graph::{self, Group, GroupMap, RetweetGraph};
use partisan_core::hashtags;
use partisan_core::ideology::{self, LeaningMap, MediaOutletLists, PropagationParams, SeedLabels, UrlResolutionCache};
use partisan_core::metrics::{self, MetricOptions, Scope};
use partisan_core::pipeline::{self, PipelineConfig};
use partisan_core::scenario::{self, ScenarioSpec};
use partisan_core::Leaning;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const LOG_ENV: &str = "PARTISAN_LOG";

/// Bot activity and partisan structure in retweet networks.
#[derive(Parser)]
#[command(name = "partisan-graph", version)]
#[command(after_help = "Log verbosity: PARTISAN_LOG=debug (falls back to RUST_LOG, default info).")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Filter and deduplicate a raw JSONL corpus.
    Ingest(IngestArgs),
    /// Split accounts into human, bot, and unknown by bot score.
    Classify(ClassifyArgs),
    /// Seed labeling, propagation and validation of political leaning.
    #[command(subcommand)]
    Ideology(IdeologyCommand),
    /// Combine classes and leanings into the five analysis groups.
    Groups(GroupsArgs),
    /// Retweet-graph analyses and exports.
    #[command(subcommand)]
    Graph(GraphCommand),
    /// Effectiveness ratios for bots of one or both sides.
    Metrics(MetricsArgs),
    /// Top hashtags of a group, flagged against the human counterpart.
    Hashtags(HashtagArgs),
    /// Run every stage and write a hashed report bundle.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a synthetic scenario with ground truth and a pipeline config.
    Generate {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct IngestArgs {
    #[arg(long, alias = "in")]
    input: PathBuf,
    /// Cleaned corpus, written as JSONL.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "en")]
    langs: Vec<String>,
    /// One term per line; matching tweets are dropped.
    #[arg(long, alias = "exclude-file")]
    exclude: Option<PathBuf>,
    /// Per-reason drop counts. Printed to stdout when omitted.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    stats: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    scores: PathBuf,
    #[arg(long, default_value_t = 0.3)]
    threshold: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    histogram: Option<PathBuf>,
}

#[derive(Args)]
struct OutletArgs {
    #[arg(long)]
    liberal: PathBuf,
    #[arg(long)]
    conservative: PathBuf,
}

#[derive(Args)]
struct PropagationArgs {
    #[arg(long, default_value_t = 100)]
    max_iters: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

impl PropagationArgs {
    fn params(&self) -> PropagationParams {
        PropagationParams {
            max_iters: self.max_iters,
            rng_seed: self.seed,
        }
    }
}

#[derive(Subcommand)]
enum IdeologyCommand {
    /// Most shared URLs.
    RankUrls {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value_t = 5000)]
        top: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Label accounts by the outlets their top-URL links resolve to.
    Seed {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        cache: Option<PathBuf>,
        #[command(flatten)]
        outlets: OutletArgs,
        #[arg(long, default_value_t = 5000)]
        top: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Spread seed labels over the retweet graph.
    Propagate {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        seeds: PathBuf,
        #[command(flatten)]
        params: PropagationArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stratified k-fold precision and recall of propagation.
    Crossvalidate {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        seeds: PathBuf,
        #[arg(long, default_value_t = 5)]
        folds: usize,
        #[command(flatten)]
        params: PropagationArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GroupsArgs {
    #[arg(long)]
    classes: PathBuf,
    #[arg(long)]
    leanings: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Tweets per group as well; needs the corpus.
    #[arg(long, requires = "activity")]
    corpus: Option<PathBuf>,
    #[arg(long)]
    activity: Option<PathBuf>,
}

#[derive(Args)]
struct GraphSource {
    /// Build the retweet graph from this corpus.
    #[arg(long, conflicts_with = "edges", required_unless_present = "edges")]
    corpus: Option<PathBuf>,
    /// Read a previously exported edge list instead.
    #[arg(long)]
    edges: Option<PathBuf>,
}

impl GraphSource {
    fn load(&self) -> Result<RetweetGraph> {
        match (&self.corpus, &self.edges) {
            (Some(c), _) => Ok(graph::build(&load_corpus(c)?)),
            (None, Some(e)) => {
                let f = File::open(e).with_context(|| format!("opening {}", e.display()))?;
                Ok(graph::read_edge_list(BufReader::new(f))?)
            }
            (None, None) => bail!("pass --corpus or --edges"),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Tsv,
    Gexf,
}

#[derive(Subcommand)]
enum GraphCommand {
    /// Build the retweet graph and write its weighted edge list.
    Build {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Core number of every node.
    Kcore {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Group shares inside each k-core.
    CoreSeries {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long)]
        groups: PathBuf,
        #[arg(long, default_value_t = 30)]
        k_max: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mean in/out degree centrality per group.
    Centrality {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long)]
        groups: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Retweet weight between partisan groups.
    Interactions {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long)]
        groups: PathBuf,
        #[arg(long, value_enum, default_value = "row")]
        normalize: Normalization,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export the graph with group and core annotations.
    Export {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long)]
        groups: PathBuf,
        #[arg(long, value_enum, default_value = "gexf")]
        format: ExportFormat,
        #[arg(long, default_value_t = 1)]
        min_weight: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Normalization {
    Counts,
    Overall,
    Row,
}

#[derive(Args)]
struct MetricsArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    groups: PathBuf,
    /// Report a single side; both sides are reported separately by default.
    #[arg(long, conflicts_with = "both_sides")]
    side: Option<Leaning>,
    /// Pool humans and bots of both sides into one report.
    #[arg(long)]
    both_sides: bool,
    /// Leave interactions with residual accounts out of the RTP and RR denominators.
    #[arg(long)]
    exclude_residual_targets: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HashtagArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    groups: PathBuf,
    #[arg(long, default_value = "liberal-bots")]
    group: Group,
    #[arg(long, default_value_t = 20)]
    k: usize,
    #[arg(long, default_value_t = 50)]
    human_top: usize,
    /// General hashtags to ignore, one per line. Defaults to a built-in election list.
    #[arg(long)]
    exclusions: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            let f = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            Box::new(BufWriter::new(f))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(path: Option<&Path>, body: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<()> {
    let mut w = output(path)?;
    body(&mut w)?;
    w.flush()?;
    Ok(())
}

fn load_corpus(path: &Path) -> Result<Corpus> {
    let (corpus, report) = Corpus::load(path)?;
    if report.malformed > 0 {
        log::warn!("{}: skipped {} malformed lines", path.display(), report.malformed);
    }
    Ok(corpus)
}

fn load_groups(path: &Path) -> Result<GroupMap> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(GroupMap::read_csv(f)?)
}

fn load_seeds(path: &Path) -> Result<SeedLabels> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(SeedLabels::read_csv(f)?)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ingest(a) => {
            let terms = match &a.exclude {
                Some(p) => corpus::read_terms_file(p)?,
                None => Vec::new(),
            };
            let filter = FilterConfig::new(&a.langs, terms)?;
            let (c, report) = corpus::ingest_path(&a.input, &filter)?;
            c.save(&a.out)?;
            log::info!("kept {} of {} lines", report.kept, report.lines_read);
            emit(a.report.as_deref(), |w| report.write_csv(w))?;
            if let Some(p) = &a.stats {
                emit(Some(p), |w| corpus::stats(&c).write_csv(w))?;
            }
        }
        Command::Classify(a) => {
            let c = load_corpus(&a.corpus)?;
            let (table, load) = accounts::load_scores(&a.scores)?;
            if load.rejected > 0 {
                log::warn!("rejected {} score rows", load.rejected);
            }
            let classes = accounts::classify(&table, Threshold::new(a.threshold)?, c.accounts());
            emit(a.out.as_deref(), |w| accounts::write_classes(w, &table, &classes))?;
            if let Some(p) = &a.histogram {
                emit(Some(p), |w| accounts::score_histogram(&table).write_csv(w))?;
            }
        }
        Command::Ideology(cmd) => ideology_command(cmd)?,
        Command::Groups(a) => {
            let classes = accounts::read_classes(File::open(&a.classes).with_context(|| format!("opening {}", a.classes.display()))?)?;
            let leanings = LeaningMap::read_csv(File::open(&a.leanings).with_context(|| format!("opening {}", a.leanings.display()))?)?;
            let groups = GroupMap::assign(&classes, &leanings);
            emit(a.out.as_deref(), |w| groups.write_csv(w))?;
            if let (Some(c), Some(p)) = (&a.corpus, &a.activity) {
                let rows = graph::tweets_per_user(&load_corpus(c)?, &groups);
                emit(Some(p), |w| graph::write_activity_csv(w, &rows))?;
            }
        }
        Command::Graph(cmd) => graph_command(cmd)?,
        Command::Metrics(a) => {
            let c = load_corpus(&a.corpus)?;
            let groups = load_groups(&a.groups)?;
            let scopes: Vec<Scope> = match (a.both_sides, a.side) {
                (true, _) => vec![Scope::BothSides],
                (false, Some(s)) => vec![Scope::Side(s)],
                (false, None) => Leaning::BOTH.iter().map(|s| Scope::Side(*s)).collect(),
            };
            let reports: Vec<_> = scopes
                .into_iter()
                .map(|scope| {
                    metrics::effectiveness_with(
                        &c,
                        &groups,
                        MetricOptions {
                            scope,
                            exclude_residual_targets: a.exclude_residual_targets,
                        },
                    )
                })
                .collect();
            emit(a.out.as_deref(), |w| metrics::write_reports_csv(w, &reports))?;
        }
        Command::Hashtags(a) => {
            let c = load_corpus(&a.corpus)?;
            let groups = load_groups(&a.groups)?;
            let exclusions = match &a.exclusions {
                Some(p) => hashtags::exclusion_set(corpus::read_terms_file(p)?),
                None => hashtags::default_exclusions(),
            };
            let report = hashtags::hashtag_report(&c, &groups, a.group, a.k, a.human_top, &exclusions);
            emit(a.out.as_deref(), |w| report.write_csv(w))?;
        }
        Command::Run { config, out } => {
            let cfg = PipelineConfig::load(&config)?;
            let manifest = pipeline::run_all(&cfg, &out)?;
            log::info!("wrote {} files to {}", manifest.files.len(), out.display());
            println!("{}", manifest.digest());
        }
        Command::Generate { spec, out } => {
            let spec = ScenarioSpec::load(&spec)?;
            let gen = scenario::generate_scenario(&spec, &out)?;
            log::info!(
                "{} originals, {} retweets, {} replies",
                gen.truth.originals,
                gen.truth.retweets,
                gen.truth.replies
            );
            println!("{}", gen.config.display());
        }
    }
    Ok(())
}

fn ideology_command(cmd: IdeologyCommand) -> Result<()> {
    match cmd {
        IdeologyCommand::RankUrls { corpus, top, out } => {
            let ranked = ideology::rank_urls(&load_corpus(&corpus)?, top);
            emit(out.as_deref(), |w| {
                writeln!(w, "rank,url,count")?;
                for (i, (url, count)) in ranked.iter().enumerate() {
                    writeln!(w, "{},{},{count}", i + 1, partisan_core::report::csv_field(url))?;
                }
                Ok(())
            })?;
        }
        IdeologyCommand::Seed {
            corpus,
            cache,
            outlets,
            top,
            out,
        } => {
            let c = load_corpus(&corpus)?;
            let lists = MediaOutletLists::load(&outlets.liberal, &outlets.conservative)?;
            let full = match &cache {
                Some(p) => UrlResolutionCache::load(p)?,
                None => UrlResolutionCache::new(),
            };
            let expanded = ideology::expand_top(&ideology::rank_urls(&c, top), &full);
            let seeds = ideology::seed_label(&c, &expanded, &lists);
            log::info!(
                "{} liberal and {} conservative seeds",
                seeds.count(Leaning::Liberal),
                seeds.count(Leaning::Conservative)
            );
            emit(out.as_deref(), |w| seeds.write_csv(w))?;
        }
        IdeologyCommand::Propagate {
            corpus,
            seeds,
            params,
            out,
        } => {
            let g = graph::build(&load_corpus(&corpus)?);
            let map = ideology::propagate(&g, &load_seeds(&seeds)?, params.params())?;
            if !map.converged {
                log::warn!("propagation stopped after {} sweeps without converging", map.iterations);
            }
            emit(out.as_deref(), |w| map.write_csv(w))?;
        }
        IdeologyCommand::Crossvalidate {
            corpus,
            seeds,
            folds,
            params,
            out,
        } => {
            let g = graph::build(&load_corpus(&corpus)?);
            let report = ideology::crossvalidate(&g, &load_seeds(&seeds)?, folds, params.params())?;
            emit(out.as_deref(), |w| report.write_csv(w))?;
        }
    }
    Ok(())
}

fn graph_command(cmd: GraphCommand) -> Result<()> {
    match cmd {
        GraphCommand::Build { corpus, out } => {
            let g = graph::build(&load_corpus(&corpus)?);
            log::info!("{} nodes, {} edges", g.node_count(), g.edge_count());
            emit(out.as_deref(), |w| graph::write_edge_list(&g, 1, w))?;
        }
        GraphCommand::Kcore { source, out } => {
            let g = source.load()?;
            let cores = graph::core_numbers(&g);
            emit(out.as_deref(), |w| {
                writeln!(w, "account_id,core")?;
                for (i, id) in g.node_ids().iter().enumerate() {
                    writeln!(w, "{},{}", partisan_core::report::csv_field(id), cores.get(i as u32))?;
                }
                Ok(())
            })?;
        }
        GraphCommand::CoreSeries {
            source,
            groups,
            k_max,
            out,
        } => {
            let g = source.load()?;
            let series = graph::core_series(&g, &graph::core_numbers(&g), &load_groups(&groups)?, k_max);
            emit(out.as_deref(), |w| series.write_csv(w))?;
        }
        GraphCommand::Centrality { source, groups, out } => {
            let g = source.load()?;
            let c = graph::degree_centrality(&g)?;
            let rows = graph::group_centrality(&g, &c, &load_groups(&groups)?);
            emit(out.as_deref(), |w| graph::write_centrality_csv(w, &rows))?;
        }
        GraphCommand::Interactions {
            source,
            groups,
            normalize,
            out,
        } => {
            let m = graph::interaction_matrix(&source.load()?, &load_groups(&groups)?);
            emit(out.as_deref(), |w| match normalize {
                Normalization::Counts => m.write_counts_csv(w),
                Normalization::Overall => m.write_overall_csv(w),
                Normalization::Row => m.write_row_csv(w),
            })?;
        }
        GraphCommand::Export {
            source,
            groups,
            format,
            min_weight,
            out,
        } => {
            let g = source.load()?;
            match format {
                ExportFormat::Tsv => emit(out.as_deref(), |w| graph::write_edge_list(&g, min_weight, w))?,
                ExportFormat::Gexf => {
                    let groups = load_groups(&groups)?;
                    let cores = graph::core_numbers(&g);
                    let centrality = graph::degree_centrality(&g).ok();
                    let notes = graph::NodeAnnotations {
                        groups: &groups,
                        cores: &cores,
                        centrality: centrality.as_ref(),
                    };
                    emit(out.as_deref(), |w| graph::write_gexf(&g, &notes, min_weight, w))?;
                }
            }
        }
    }
    Ok(())
}

/// 1 for bad inputs or usage, 2 when a computation or pipeline stage fails.
fn exit_code(err: &anyhow::Error) -> u8 {
    use partisan_core::Error as E;
    match err.chain().find_map(|e| e.downcast_ref::<E>()) {
        Some(E::Stage { stage: "config", .. }) => 1,
        Some(E::Stage { .. }) => 2,
        Some(e) if e.is_input_error() => 1,
        Some(_) => 2,
        None => 1,
    }
}

/// Core errors already embed their cause, so only append causes not yet shown.
fn describe(err: &anyhow::Error) -> String {
    let mut msg = err.to_string();
    for cause in err.chain().skip(1) {
        let c = cause.to_string();
        if !msg.contains(&c) {
            msg = format!("{msg}: {c}");
        }
    }
    msg
}

fn main() -> ExitCode {
    let env = env_logger::Env::new().filter_or(LOG_ENV, std::env::var("RUST_LOG").unwrap_or_else(|_| "info".into()));
    env_logger::Builder::from_env(env).format_timestamp(None).init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", describe(&e));
            ExitCode::from(exit_code(&e))
        }
    }
}
