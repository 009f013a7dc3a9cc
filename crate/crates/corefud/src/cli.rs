//! Command-line front end.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use corefud_core::analysis::{GenreRule, MentionVectors};
use corefud_core::error_analysis::UnresolvedDefinition;
use corefud_core::features::{ExportTarget, Vocabulary, WordOrderTable, EXPORT_HEADER};
use corefud_core::metrics::{MatchMode, SingletonPolicy};
use corefud_core::taxonomy::lookup_category;
use corefud_core::HeadRule;
use serde_json::json;
use thiserror::Error;

use crate::load::{self, Dataset, LoadOptions};
use crate::pipeline::{self, AnalyzeOptions, Stat};
use crate::render::{Format, Table};

#[derive(Debug, Parser)]
#[command(name = "corefud", version, about = "Statistics, scoring and error analysis for CorefUD treebanks")]
pub struct Cli {
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    /// Increase log verbosity (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse files and check their annotation.
    Validate(InputArgs),
    /// Document, sentence, token, entity and mention counts per dataset.
    Stats(ReportArgs),
    /// Linguistic statistics over gold annotations.
    Analyze(AnalyzeArgs),
    /// MUC, B-cubed, CEAFe and CoNLL F1 of system output against gold.
    Score(ScoreArgs),
    /// Unresolved-entity breakdown of system output.
    Errors(ErrorsArgs),
    /// Span and document features as JSON lines.
    ExportFeatures(ExportArgs),
    /// The dependency relation to category mapping.
    Taxonomy(OutputArgs),
}

#[derive(Debug, Args)]
struct InputArgs {
    /// A .conllu file or a directory searched recursively.
    #[arg(env = "COREFUD_DATA")]
    input: PathBuf,
    /// Only files of this split, e.g. train or dev.
    #[arg(long)]
    split: Option<String>,
    /// Override the dataset name taken from file names.
    #[arg(long)]
    dataset: Option<String>,
    /// Override the language code taken from file names.
    #[arg(long)]
    language: Option<String>,
    #[arg(long, value_enum, default_value_t = HeadRuleArg::Declared)]
    head_rule: HeadRuleArg,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
    /// Write report files to this directory instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ReportArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    output: OutputArgs,
    /// Statistics to compute (repeatable); all but semantic-distance by default.
    #[arg(long, value_enum)]
    stat: Vec<Stat>,
    /// Mention vectors TSV for semantic-distance.
    #[arg(long)]
    vectors: Option<PathBuf>,
    /// Separator of doc id fields holding the genre.
    #[arg(long, default_value_t = '_')]
    genre_separator: char,
    /// 0-based doc id field holding the genre.
    #[arg(long, default_value_t = 1)]
    genre_field: usize,
    /// Also write plot-ready long-format TSV to this file.
    #[arg(long)]
    figure_data: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PairArgs {
    #[arg(long)]
    gold: PathBuf,
    #[arg(long)]
    pred: PathBuf,
    #[arg(long)]
    split: Option<String>,
    #[arg(long, value_enum, default_value_t = HeadRuleArg::Declared)]
    head_rule: HeadRuleArg,
}

#[derive(Debug, Args)]
struct ScoreArgs {
    #[command(flatten)]
    pair: PairArgs,
    #[command(flatten)]
    output: OutputArgs,
    #[arg(long = "match", value_enum, default_value_t = MatchArg::Exact)]
    match_mode: MatchArg,
    #[arg(long, value_enum, default_value_t = SingletonArg::Exclude)]
    singletons: SingletonArg,
}

#[derive(Debug, Args)]
struct ErrorsArgs {
    #[command(flatten)]
    pair: PairArgs,
    #[command(flatten)]
    output: OutputArgs,
    #[arg(long, value_enum, default_value_t = MatchArg::Exact)]
    mode: MatchArg,
    #[arg(long, value_enum, default_value_t = UnresolvedArg::NoLink)]
    unresolved: UnresolvedArg,
    /// Write every unresolved entity with its mention diagnoses as JSON.
    #[arg(long)]
    detail: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ExportArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Word-order TSV: language code and order per line.
    #[arg(long)]
    word_order: PathBuf,
    #[arg(long, value_enum, default_value_t = TargetArg::Gold)]
    target: TargetArg,
    /// Widest candidate span for --target all-spans.
    #[arg(long, default_value_t = 3)]
    max_width: usize,
    /// JSON-lines output file; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Vocabulary TSV; defaults to <out>.vocab.tsv.
    #[arg(long)]
    vocab: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum HeadRuleArg {
    Declared,
    Syntactic,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MatchArg {
    Exact,
    Head,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SingletonArg {
    Include,
    Exclude,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum UnresolvedArg {
    NoLink,
    NoMention,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TargetArg {
    Gold,
    AllSpans,
}

impl From<HeadRuleArg> for HeadRule {
    fn from(a: HeadRuleArg) -> Self {
        match a {
            HeadRuleArg::Declared => HeadRule::Declared,
            HeadRuleArg::Syntactic => HeadRule::Syntactic,
        }
    }
}

impl From<MatchArg> for MatchMode {
    fn from(a: MatchArg) -> Self {
        match a {
            MatchArg::Exact => MatchMode::Exact,
            MatchArg::Head => MatchMode::Head,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{}: {source}", path.display())]
    Output {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) | CliError::Output { .. } => 2,
        }
    }
}

fn data(e: impl std::fmt::Display) -> CliError {
    CliError::Data(e.to_string())
}

fn require(path: &Path) -> Result<(), CliError> {
    if path.exists() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{}: no such file or directory", path.display())))
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    let io_err = |source| CliError::Output {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err)?;
    }
    fs::write(path, contents).map_err(io_err)
}

fn print(out: &mut (dyn Write + Send), contents: &str) -> Result<(), CliError> {
    out.write_all(contents.as_bytes()).map_err(|source| CliError::Output {
        path: PathBuf::from("<stdout>"),
        source,
    })
}

impl InputArgs {
    fn options(&self) -> LoadOptions {
        LoadOptions {
            split: self.split.clone(),
            head_rule: self.head_rule.into(),
            dataset: self.dataset.clone(),
            language: self.language.clone(),
        }
    }

    fn load(&self) -> Result<Vec<Dataset>, CliError> {
        require(&self.input)?;
        load::load_datasets(&self.input, &self.options()).map_err(data)
    }
}

impl PairArgs {
    fn load(&self) -> Result<(Vec<Dataset>, Vec<Dataset>), CliError> {
        require(&self.gold)?;
        require(&self.pred)?;
        let opts = LoadOptions {
            split: self.split.clone(),
            head_rule: self.head_rule.into(),
            ..LoadOptions::default()
        };
        let gold = load::load_datasets(&self.gold, &opts).map_err(data)?;
        let pred = load::load_datasets(&self.pred, &opts).map_err(data)?;
        Ok((gold, pred))
    }
}

/// Emit one table, either to standard output or as `<out>/<name>.<ext>`.
fn emit_table(out: &mut (dyn Write + Send), args: &OutputArgs, name: &str, table: &Table) -> Result<(), CliError> {
    let text = table.render(args.format);
    match &args.out {
        Some(dir) => write_file(&dir.join(format!("{name}.{}", args.format.extension())), &text),
        None => print(out, &text),
    }
}

/// Emit a long-format table as one file per dataset under `<out>/<name>/`.
fn emit_per_dataset(out: &mut (dyn Write + Send), args: &OutputArgs, name: &str, table: &Table) -> Result<(), CliError> {
    match &args.out {
        Some(dir) => {
            for dataset in table.first_column_values() {
                let path = dir.join(name).join(format!("{dataset}.{}", args.format.extension()));
                write_file(&path, &table.select(&dataset).render(args.format))?;
            }
            Ok(())
        }
        None => print(out, &table.render(args.format)),
    }
}

fn validate(out: &mut (dyn Write + Send), args: &InputArgs) -> Result<(), CliError> {
    require(&args.input)?;
    let opts = args.options();
    let files = load::discover(&args.input).map_err(data)?;
    let mut checked = 0;
    for path in files {
        let label = load::FileLabel::from_path(&path);
        if args.split.as_ref().is_some_and(|s| label.split.as_ref() != Some(s)) {
            continue;
        }
        let f = load::load_file(&path, &opts).map_err(data)?;
        let mut unknown = BTreeSet::new();
        for doc in &f.corpus.documents {
            for s in &doc.sentences {
                for t in &s.tokens {
                    if let Some(rel) = t.relation().filter(|r| *r != "_") {
                        if lookup_category(rel).is_none() {
                            unknown.insert(rel.to_owned());
                        }
                    }
                }
            }
        }
        for rel in unknown {
            log::warn!("{}: relation `{rel}` is not in the category table; counted as T", path.display());
        }
        let c = &f.corpus;
        print(
            out,
            &format!(
                "ok\t{}\tdocs={}\tsents={}\ttokens={}\tentities={}\tmentions={}\twarnings={}\n",
                path.display(),
                c.documents.len(),
                c.sentence_count(),
                c.surface_token_count(),
                c.entity_count(),
                c.mention_count(),
                f.warnings.len()
            ),
        )?;
        checked += 1;
    }
    if checked == 0 {
        return Err(CliError::Data(format!("{}: no .conllu files matched", args.input.display())));
    }
    Ok(())
}

fn analyze(out: &mut (dyn Write + Send), args: &AnalyzeArgs) -> Result<(), CliError> {
    if let Some(v) = &args.vectors {
        require(v)?;
    }
    let mut stats: Vec<Stat> = if args.stat.is_empty() {
        let mut s = Stat::DEFAULT.to_vec();
        if args.vectors.is_some() {
            s.push(Stat::SemanticDistance);
        }
        s
    } else {
        args.stat.clone()
    };
    stats.sort();
    stats.dedup();
    if stats.contains(&Stat::SemanticDistance) && args.vectors.is_none() {
        return Err(CliError::Usage("--stat semantic-distance needs --vectors".into()));
    }
    let datasets = args.input.load()?;
    let opts = AnalyzeOptions {
        genre_rule: GenreRule {
            separator: args.genre_separator,
            field: args.genre_field,
        },
        vectors: match &args.vectors {
            Some(p) => Some(
                MentionVectors::parse_tsv(&read(p)?).map_err(|e| CliError::Data(format!("{}: {e}", p.display())))?,
            ),
            None => None,
        },
    };
    let mut tables = Vec::new();
    for stat in stats {
        tables.push((stat, pipeline::analyze(stat, &datasets, &opts).map_err(data)?));
    }
    match (&args.output.out, args.output.format) {
        (Some(_), _) => {
            for (stat, table) in &tables {
                emit_per_dataset(out, &args.output, stat.name(), table)?;
            }
        }
        (None, Format::Tsv) => {
            let sections: Vec<String> = tables
                .iter()
                .map(|(stat, t)| format!("# {}\n{}", stat.name(), t.to_tsv()))
                .collect();
            print(out, &sections.join("\n"))?;
        }
        (None, Format::Json) => {
            let obj: serde_json::Map<String, serde_json::Value> = tables
                .iter()
                .map(|(stat, t)| (stat.name().to_owned(), t.to_json_value()))
                .collect();
            let mut text = serde_json::to_string_pretty(&obj).map_err(data)?;
            text.push('\n');
            print(out, &text)?;
        }
    }
    if let Some(path) = &args.figure_data {
        write_file(path, &pipeline::figure_data(&tables).to_tsv())?;
    }
    Ok(())
}

fn score(out: &mut (dyn Write + Send), args: &ScoreArgs) -> Result<(), CliError> {
    let (gold, pred) = args.pair.load()?;
    let mode = args.match_mode.into();
    let policy = match args.singletons {
        SingletonArg::Include => SingletonPolicy::Include,
        SingletonArg::Exclude => SingletonPolicy::Exclude,
    };
    let mut reports = Vec::new();
    for (g, p) in pipeline::pair_datasets(&gold, &pred).map_err(data)? {
        reports.push((g.name().to_owned(), pipeline::score_dataset(g, p, mode, policy).map_err(data)?));
    }
    let table = pipeline::score_table(&reports).map_err(data)?;
    emit_table(out, &args.output, "score", &table)
}

fn errors(out: &mut (dyn Write + Send), args: &ErrorsArgs) -> Result<(), CliError> {
    let (gold, pred) = args.pair.load()?;
    let def = match args.unresolved {
        UnresolvedArg::NoLink => UnresolvedDefinition::NoLinkRecovered,
        UnresolvedArg::NoMention => UnresolvedDefinition::NoMentionDetected,
    };
    let mut results = Vec::new();
    for (g, p) in pipeline::pair_datasets(&gold, &pred).map_err(data)? {
        results.push((
            g.name().to_owned(),
            pipeline::errors_dataset(g, p, args.mode.into(), def).map_err(data)?,
        ));
    }
    emit_table(out, &args.output, "errors", &pipeline::error_table(&results))?;
    if let Some(dir) = &args.output.out {
        let breakdown = pipeline::error_breakdown(&results);
        let path = dir.join(format!("errors-breakdown.{}", args.output.format.extension()));
        write_file(&path, &breakdown.render(args.output.format))?;
    }
    if let Some(path) = &args.detail {
        let detail: Vec<_> = results
            .iter()
            .map(|(name, r)| json!({"dataset": name, "counts": r.counts, "unresolved": r.unresolved}))
            .collect();
        let mut text = serde_json::to_string_pretty(&detail).map_err(data)?;
        text.push('\n');
        write_file(path, &text)?;
    }
    Ok(())
}

fn export(out: &mut (dyn Write + Send), args: &ExportArgs) -> Result<(), CliError> {
    require(&args.word_order)?;
    let target = match args.target {
        TargetArg::Gold => ExportTarget::Gold,
        TargetArg::AllSpans if args.max_width == 0 => {
            return Err(CliError::Usage("--max-width must be at least 1".into()));
        }
        TargetArg::AllSpans => ExportTarget::AllSpans {
            max_width: args.max_width,
        },
    };
    let table = WordOrderTable::parse_tsv(&read(&args.word_order)?)
        .map_err(|e| CliError::Data(format!("{}: {e}", args.word_order.display())))?;
    let datasets = args.input.load()?;
    let exports = pipeline::export_all(&datasets, &table, target).map_err(data)?;

    let header: serde_json::Map<String, serde_json::Value> =
        EXPORT_HEADER.iter().map(|(k, v)| ((*k).to_owned(), json!(v))).collect();
    let mut lines = serde_json::to_string(&json!({ "header": header })).map_err(data)?;
    lines.push('\n');
    let mut vocab = Vocabulary::default();
    for e in &exports {
        for r in &e.records {
            lines.push_str(&serde_json::to_string(r).map_err(data)?);
            lines.push('\n');
        }
        vocab.merge(&e.vocabulary);
    }
    let mut vocab_tsv = String::from("field\tvalue\tindex\n");
    for (field, value, index) in vocab.entries() {
        vocab_tsv.push_str(&format!("{field}\t{value}\t{index}\n"));
    }

    match &args.out {
        Some(path) => {
            write_file(path, &lines)?;
            let vocab_path = args.vocab.clone().unwrap_or_else(|| {
                let mut p = path.clone().into_os_string();
                p.push(".vocab.tsv");
                PathBuf::from(p)
            });
            write_file(&vocab_path, &vocab_tsv)
        }
        None => {
            print(out, &lines)?;
            match &args.vocab {
                Some(p) => write_file(p, &vocab_tsv),
                None => {
                    log::info!("no --out or --vocab given; vocabulary not written");
                    Ok(())
                }
            }
        }
    }
}

fn dispatch(cli: &Cli, out: &mut (dyn Write + Send)) -> Result<(), CliError> {
    match &cli.command {
        Command::Validate(a) => validate(out, a),
        Command::Stats(a) => {
            let datasets = a.input.load()?;
            emit_table(out, &a.output, "stats", &pipeline::stats_table(&datasets))
        }
        Command::Analyze(a) => analyze(out, a),
        Command::Score(a) => score(out, a),
        Command::Errors(a) => errors(out, a),
        Command::ExportFeatures(a) => export(out, a),
        Command::Taxonomy(a) => emit_table(out, a, "taxonomy", &pipeline::taxonomy_table()),
    }
}

/// Run with the given arguments, writing reports to `out`. Returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).try_init();

    let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build();
    let result = match pool {
        Ok(pool) => pool.install(|| dispatch(&cli, out)),
        Err(e) => Err(CliError::Usage(format!("--jobs: {e}"))),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            log::error!("{e}");
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
