//! Thin command-line front end over the skillcast library. Every
//! subcommand reads files (or stdin as "-"), calls into the library,
//! prints an aligned table for humans, and optionally writes a JSON-lines
//! machine report whose first line echoes the command, seed, flags, and
//! input content hashes. Identical invocations produce identical bytes;
//! --threads changes wall time only.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use skillcast::corpus::{
    apply_filters, parse_corpus, CorpusFilterConfig, CorpusFormat, ForecastRecord, LoadedCorpus,
};
use skillcast::error::{Error, Result};
use skillcast::extract::{
    earliest_forecast, evaluate_extraction, extract_eps, load_gold, load_patterns, EpsEstimate,
    ExtractionTuple,
};
use skillcast::metrics::{author_aggregate, compute_record_metrics, Metric, MetricLexicons, MetricVector};
use skillcast::model::{
    accuracy, crossval_accuracy, load_model, precision_at_n, save_model, top_features,
    train_logreg, EarlyAuthor, Example, FeatureConfig, FeatureSpace, LabeledRecord, TrainConfig,
};
use skillcast::model::financial_split;
use skillcast::report::{fmt_f, machine_report, to_row, ReportHeader, Table};
use skillcast::scoring::{
    brier_scores, calibration_curve, eps_error, rank_forecasters, select_groups,
    standardize_analyst_errors, ScoredForecast,
};
use skillcast::stats::{bonferroni, bootstrap_test, Direction};
use skillcast::synth::{generate_corpus, records_to_jsonl, truth_to_tsv, SynthConfig, TemplateBank};
use std::collections::BTreeMap;
use std::io::Read;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "skillcast",
    version,
    about = "Measure forecasting skill from prediction text",
    max_term_width = 100
)]
struct Cli {
    /// Seed for all randomness; echoed in every report.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cap worker threads; results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate and normalize a corpus file, reporting rejected lines.
    Ingest(IngestArgs),
    /// Drop short, quote-heavy, or non-English records, then authors with too few forecasts.
    Filter(FilterArgs),
    /// Brier-score resolved binary forecasts, standardized within questions.
    Score(ScoreArgs),
    /// Rank authors by mean standardized Brier score.
    Rank(RankArgs),
    /// Linguistic metrics per author, aggregated over their records.
    Metrics(MetricsArgs),
    /// Compare linguistic metrics between the best and worst K authors.
    Compare(CompareArgs),
    /// Train a bag-of-n-grams classifier separating best from worst authors.
    Train(TrainArgs),
    /// Evaluate a saved model, or cross-validate a fresh one.
    Evaluate(EvaluateArgs),
    /// Precision at N for spotting skilled authors from their earliest text.
    Early(EarlyArgs),
    /// Label EPS records by standardized error and split company-disjoint by year.
    SplitFinancial(SplitFinancialArgs),
    /// Extract (time, EPS value) estimates from analyst note text.
    ExtractEps(ExtractEpsArgs),
    /// Score extracted estimates against a gold tuple file.
    EvalEps(EvalEpsArgs),
    /// Reliability curve: forecast probability vs. outcome frequency.
    Calibration(CalibrationArgs),
    /// Generate a seeded synthetic corpus with known author skill.
    Synth(SynthArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum FormatArg {
    Jsonl,
    Csv,
}

#[derive(Args, Serialize)]
struct CorpusArg {
    /// Corpus file; "-" reads stdin.
    corpus: String,
    /// Record format; inferred from the file extension when omitted.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Args, Serialize)]
struct IngestArgs {
    #[command(flatten)]
    corpus: CorpusArg,
    /// Write accepted records as JSON lines ("-" for stdout).
    #[arg(long)]
    records: Option<String>,
    /// Write the machine report here ("-" for stdout).
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args, Serialize)]
struct FilterArgs {
    #[command(flatten)]
    corpus: CorpusArg,
    /// Keep records with more than this many justification tokens.
    #[arg(long, default_value_t = 10)]
    min_tokens: usize,
    /// Drop records whose quoted-character share exceeds this.
    #[arg(long, default_value_t = 0.5)]
    max_quote_ratio: f64,
    /// Keep authors with at least this many surviving records.
    #[arg(long, default_value_t = 5)]
    min_forecasts: usize,
    /// Skip the English-text check.
    #[arg(long)]
    keep_non_english: bool,
    /// Write surviving records as JSON lines ("-" for stdout).
    #[arg(long)]
    records: Option<String>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args, Serialize)]
struct ScoreArgs {
    #[command(flatten)]
    corpus: CorpusArg,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args, Serialize)]
struct RankArgs {
    /// Scored forecasts: a `score --out` report or bare JSON lines; "-" reads stdin.
    scored: String,
    /// Mark the best and worst K authors.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args, Serialize)]
struct MetricsArgs {
    #[command(flatten)]
    corpus: CorpusArg,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args, Serialize)]
struct CompareArgs {
    #[command(flatten)]
    corpus: CorpusArg,
    /// Group size: best K vs. worst K authors.
    #[arg(long)]
    k: usize,
    /// Bootstrap iterations per metric.
    #[arg(long, default_value_t = 10_000)]
    bootstrap: usize,
    /// Family-wise significance level before correction.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args, Serialize)]
struct FeatureArgs {
    /// Comma-separated n-gram sizes.
    #[arg(long, default_value = "1,2")]
    ngram_sizes: String,
    /// Keep n-grams seen at least this often in training text.
    #[arg(long, default_value_t = 2)]
    min_count: usize,
    /// Drop the n-gram block.
    #[arg(long)]
    no_ngrams: bool,
    /// Add surface text metrics as dense features.
    #[arg(long)]
    textual: bool,
    /// Add word-category metrics as dense features.
    #[arg(long)]
    cognitive: bool,
}

impl FeatureArgs {
    fn to_config(&self) -> Result<FeatureConfig> {
        let mut sizes = std::collections::BTreeSet::new();
        for part in self.ngram_sizes.split(',') {
            let n: usize = part
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad n-gram size `{part}`")))?;
            sizes.insert(n);
        }
        let config = FeatureConfig {
            ngram_sizes: sizes,
            min_count: self.min_count,
            use_ngrams: !self.no_ngrams,
            textual_metrics: self.textual,
            cognitive_metrics: self.cognitive,
        };
        config.validate()?;
        Ok(config)
    }
}

#[derive(Args, Serialize)]
struct OptimArgs {
    #[arg(long, default_value_t = 0.1)]
    learning_rate: f64,
    #[arg(long, default_value_t = 1e-4)]
    l2: f64,
    #[arg(long, default_value_t = 500)]
    epochs: usize,
    /// Stop when the gradient norm falls below this.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
}

impl OptimArgs {
    fn to_config(&self, seed: u64) -> TrainConfig {
        TrainConfig {
            learning_rate: self.learning_rate,
            l2_lambda: self.l2,
            max_epochs: self.epochs,
            grad_tol: self.tol,
            seed,
        }
    }
}

#[derive(Args, Serialize)]
struct TrainArgs {
    #[command(flatten)]
    corpus: CorpusArg,
    #[arg(long)]
    k: usize,
    #[command(flatten)]
    features: FeatureArgs,
    #[command(flatten)]
    optim: OptimArgs,
    /// Where to save the trained model.
    #[arg(long)]
    model: PathBuf,
    /// How many heaviest features to list per side.
    #[arg(long, default_value_t = 10)]
    top: usize,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args, Serialize)]
struct EvaluateArgs {
    #[command(flatten)]
    corpus: CorpusArg,
    #[arg(long)]
    k: usize,
    /// Saved model to score the corpus groups with.
    #[arg(long, conflicts_with = "crossval")]
    model: Option<PathBuf>,
    /// Run k-fold cross-validation instead of loading a model.
    #[arg(long)]
    crossval: Option<usize>,
    #[command(flatten)]
    features: FeatureArgs,
    #[command(flatten)]
    optim: OptimArgs,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args, Serialize)]
struct EarlyArgs {
    #[command(flatten)]
    corpus: CorpusArg,
    /// Comma-separated ranking depths N for precision at N.
    #[arg(long, default_value = "5,10,20")]
    at: String,
    #[command(flatten)]
    features: FeatureArgs,
    #[command(flatten)]
    optim: OptimArgs,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args, Serialize)]
struct SplitFinancialArgs {
    #[command(flatten)]
    corpus: CorpusArg,
    /// Label the K most and K least accurate records.
    #[arg(long)]
    k: usize,
    /// Fraction of companies reserved for dev and test.
    #[arg(long, default_value_t = 0.2)]
    eval_frac: f64,
    /// Error quantile whose moments standardize each analyst.
    #[arg(long, default_value_t = 0.9)]
    trim: f64,
    /// Skip analysts with fewer scored forecasts than this.
    #[arg(long, default_value_t = 100)]
    min_forecasts: usize,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args, Serialize)]
struct ExtractEpsArgs {
    #[command(flatten)]
    corpus: CorpusArg,
    /// Pattern file overriding the bundled set.
    #[arg(long)]
    patterns: Option<PathBuf>,
    /// Keep only the earliest dated estimate per record.
    #[arg(long)]
    earliest: bool,
    /// Years accepted when picking the earliest estimate, as "lo-hi".
    #[arg(long, default_value = "1990-2068")]
    years: String,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args, Serialize)]
struct EvalEpsArgs {
    /// Predictions: an `extract-eps --out` report or bare JSON lines; "-" reads stdin.
    #[arg(long)]
    predictions: String,
    /// Gold tuples: record_id, time label, value, tab-separated.
    #[arg(long)]
    gold: PathBuf,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args, Serialize)]
struct CalibrationArgs {
    #[command(flatten)]
    corpus: CorpusArg,
    #[arg(long, default_value_t = 10)]
    bins: usize,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args, Serialize)]
struct SynthArgs {
    #[arg(long, default_value_t = 200)]
    authors: usize,
    /// Forecasts per author, fixed ("50") or a range ("20-60").
    #[arg(long, default_value = "50")]
    forecasts: String,
    #[arg(long, default_value_t = 100)]
    questions: usize,
    /// Estimate noise scale; scaled down by author skill.
    #[arg(long, default_value_t = 0.2)]
    sigma: f64,
    #[arg(long, default_value_t = 0.2)]
    hedge_base: f64,
    #[arg(long, default_value_t = 0.5)]
    hedge_slope: f64,
    #[arg(long, default_value_t = 0.5)]
    sent_base: f64,
    #[arg(long, default_value_t = -0.3)]
    sent_slope: f64,
    #[arg(long, default_value_t = 30.0)]
    length_base: f64,
    #[arg(long, default_value_t = 40.0)]
    length_slope: f64,
    /// Sentence template file overriding the bundled bank.
    #[arg(long)]
    templates: Option<PathBuf>,
    /// Write generated records as JSON lines ("-" for stdout).
    #[arg(long, default_value = "-")]
    records: String,
    /// Write the author skill sidecar (author_id, skill, tab-separated).
    #[arg(long)]
    truth: Option<PathBuf>,
    #[arg(long)]
    out: Option<String>,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                std::process::exit(0);
            }
            eprint!("{e}");
            std::process::exit(1);
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            std::process::exit(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: thread pool: {e}");
            std::process::exit(1);
        }
    }
    if let Err(e) = run(cli.seed, cli.command) {
        eprintln!("error: {e}");
        let code = match e {
            Error::Config(_) => 1,
            _ => 2,
        };
        std::process::exit(code);
    }
}

fn run(seed: u64, command: Command) -> Result<()> {
    match command {
        Command::Ingest(a) => cmd_ingest(seed, a),
        Command::Filter(a) => cmd_filter(seed, a),
        Command::Score(a) => cmd_score(seed, a),
        Command::Rank(a) => cmd_rank(seed, a),
        Command::Metrics(a) => cmd_metrics(seed, a),
        Command::Compare(a) => cmd_compare(seed, a),
        Command::Train(a) => cmd_train(seed, a),
        Command::Evaluate(a) => cmd_evaluate(seed, a),
        Command::Early(a) => cmd_early(seed, a),
        Command::SplitFinancial(a) => cmd_split_financial(seed, a),
        Command::ExtractEps(a) => cmd_extract_eps(seed, a),
        Command::EvalEps(a) => cmd_eval_eps(seed, a),
        Command::Calibration(a) => cmd_calibration(seed, a),
        Command::Synth(a) => cmd_synth(seed, a),
    }
}

// ---------------------------------------------------------------- plumbing

struct Input {
    name: String,
    bytes: Vec<u8>,
}

impl Input {
    fn text(&self) -> Result<&str> {
        std::str::from_utf8(&self.bytes)
            .map_err(|_| Error::Data(format!("{} is not valid UTF-8", self.name)))
    }
}

fn read_input(path: &str) -> Result<Input> {
    if path == "-" {
        let mut bytes = Vec::new();
        std::io::stdin()
            .read_to_end(&mut bytes)
            .map_err(|e| Error::io("<stdin>", e))?;
        Ok(Input { name: "<stdin>".into(), bytes })
    } else {
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        Ok(Input { name: path.into(), bytes })
    }
}

fn read_file(path: &Path) -> Result<Input> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(Input { name: path.display().to_string(), bytes })
}

/// Routes data streams and the human table. At most one stream may use
/// stdout; the human table moves to stderr when a stream claims stdout.
struct Emitter {
    stdout_claimed: bool,
}

impl Emitter {
    fn new(stream_paths: &[Option<&str>]) -> Result<Emitter> {
        let claims = stream_paths.iter().filter(|p| **p == Some("-")).count();
        if claims > 1 {
            return Err(Error::Config("only one output may use stdout (-)".into()));
        }
        Ok(Emitter { stdout_claimed: claims == 1 })
    }

    fn stream(&self, path: &str, content: &str) -> Result<()> {
        if path == "-" {
            print!("{content}");
            Ok(())
        } else {
            std::fs::write(path, content).map_err(|e| Error::io(path, e))
        }
    }

    fn human(&self, content: &str) {
        if self.stdout_claimed {
            eprint!("{content}");
        } else {
            print!("{content}");
        }
    }
}

fn corpus_format(arg: &CorpusArg) -> CorpusFormat {
    match arg.format {
        Some(FormatArg::Jsonl) => CorpusFormat::Jsonl,
        Some(FormatArg::Csv) => CorpusFormat::Csv,
        None => CorpusFormat::from_path(Path::new(&arg.corpus)),
    }
}

fn load_corpus_input(arg: &CorpusArg) -> Result<(Input, LoadedCorpus)> {
    let input = read_input(&arg.corpus)?;
    let loaded = parse_corpus(input.text()?, corpus_format(arg))?;
    Ok((input, loaded))
}

fn header_for<T: Serialize>(command: &str, seed: u64, args: &T, inputs: &[&Input]) -> Result<ReportHeader> {
    let config = serde_json::to_value(args).map_err(|e| Error::Data(format!("echo config: {e}")))?;
    let mut header = ReportHeader::new(command, seed, config);
    for input in inputs {
        header.add_input(&input.name, &input.bytes);
    }
    Ok(header)
}

fn emit_report(
    emitter: &Emitter,
    out: Option<&str>,
    header: &ReportHeader,
    rows: &[Value],
    human: &str,
) -> Result<()> {
    if let Some(path) = out {
        emitter.stream(path, &machine_report(header, rows)?)?;
    }
    emitter.human(human);
    Ok(())
}

fn opt_cell(v: Option<f64>, decimals: usize) -> String {
    v.map_or_else(|| "n/a".to_string(), |x| fmt_f(x, decimals))
}

/// Records JSON-lines encoding, one record per line.
fn jsonl_records(records: &[ForecastRecord]) -> Result<String> {
    records_to_jsonl(records)
}

// ---------------------------------------------------------------- commands

fn cmd_ingest(seed: u64, a: IngestArgs) -> Result<()> {
    let emitter = Emitter::new(&[a.records.as_deref(), a.out.as_deref()])?;
    let (input, loaded) = load_corpus_input(&a.corpus)?;
    let header = header_for("ingest", seed, &a, &[&input])?;

    let mut rows = vec![json!({
        "accepted": loaded.records.len(),
        "rejected": loaded.rejected.len(),
    })];
    for r in &loaded.rejected {
        rows.push(json!({"line": r.line, "reason": r.reason}));
    }

    let mut t = Table::new(&["field", "value"]);
    t.row(vec!["accepted".into(), loaded.records.len().to_string()]);
    t.row(vec!["rejected".into(), loaded.rejected.len().to_string()]);
    let mut human = t.render();
    if !loaded.rejected.is_empty() {
        let mut rt = Table::new(&["line", "reason"]);
        for r in &loaded.rejected {
            rt.row(vec![r.line.to_string(), r.reason.clone()]);
        }
        human.push('\n');
        human.push_str(&rt.render());
    }

    if let Some(path) = &a.records {
        emitter.stream(path, &jsonl_records(&loaded.records)?)?;
    }
    emit_report(&emitter, a.out.as_deref(), &header, &rows, &human)
}

fn cmd_filter(seed: u64, a: FilterArgs) -> Result<()> {
    let emitter = Emitter::new(&[a.records.as_deref(), a.out.as_deref()])?;
    let (input, loaded) = load_corpus_input(&a.corpus)?;
    let config = CorpusFilterConfig {
        min_tokens_per_justification: a.min_tokens,
        max_quote_ratio: a.max_quote_ratio,
        min_forecasts_per_author: a.min_forecasts,
        require_english: !a.keep_non_english,
    };
    config.validate()?;
    let (kept, report) = apply_filters(&loaded.records, &config, None);
    let header = header_for("filter", seed, &a, &[&input])?;
    let rows = vec![to_row(&report)?];

    let mut t = Table::new(&["rule", "dropped"]);
    t.row(vec!["short justification".into(), report.dropped_short.to_string()]);
    t.row(vec!["quote-heavy".into(), report.dropped_quote_heavy.to_string()]);
    t.row(vec!["non-English".into(), report.dropped_non_english.to_string()]);
    t.row(vec!["author minimum".into(), report.dropped_author_minimum.to_string()]);
    let mut human = t.render();
    human.push_str(&format!(
        "\nretained {} of {} records ({} authors); {} malformed lines\n",
        report.retained,
        report.input,
        report.authors_retained,
        loaded.rejected.len()
    ));

    if let Some(path) = &a.records {
        emitter.stream(path, &jsonl_records(&kept)?)?;
    }
    emit_report(&emitter, a.out.as_deref(), &header, &rows, &human)
}

fn cmd_score(seed: u64, a: ScoreArgs) -> Result<()> {
    let emitter = Emitter::new(&[a.out.as_deref()])?;
    let (input, loaded) = load_corpus_input(&a.corpus)?;
    let report = brier_scores(&loaded.records)?;
    let header = header_for("score", seed, &a, &[&input])?;
    let rows: Vec<Value> = report.scored.iter().map(to_row).collect::<Result<_>>()?;

    let mut t = Table::new(&["field", "value"]);
    t.row(vec!["records".into(), loaded.records.len().to_string()]);
    t.row(vec!["scored".into(), report.scored.len().to_string()]);
    t.row(vec!["skipped (unresolved or non-binary)".into(), report.skipped_unresolved.to_string()]);
    t.row(vec!["degenerate questions".into(), report.degenerate_questions.len().to_string()]);
    t.row(vec!["malformed lines".into(), loaded.rejected.len().to_string()]);
    let mut human = t.render();
    for q in &report.degenerate_questions {
        human.push_str(&format!("degenerate: {q}\n"));
    }

    emit_report(&emitter, a.out.as_deref(), &header, &rows, &human)
}

/// Parse scored-forecast rows, skipping one leading report header line.
fn parse_scored(input: &Input) -> Result<Vec<ScoredForecast>> {
    let mut out = Vec::new();
    for (idx, line) in input.text()?.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<ScoredForecast>(line) {
            Ok(s) => out.push(s),
            Err(e) => {
                let is_header =
                    idx == 0 && serde_json::from_str::<Value>(line).is_ok_and(|v| v.get("command").is_some());
                if !is_header {
                    return Err(Error::parse(&input.name, idx + 1, format!("bad scored row: {e}")));
                }
            }
        }
    }
    if out.is_empty() {
        return Err(Error::Data(format!("{}: no scored forecasts", input.name)));
    }
    Ok(out)
}

fn cmd_rank(seed: u64, a: RankArgs) -> Result<()> {
    let emitter = Emitter::new(&[a.out.as_deref()])?;
    let input = read_input(&a.scored)?;
    let scored = parse_scored(&input)?;
    let mut profiles = rank_forecasters(&scored);
    if let Some(k) = a.k {
        select_groups(&mut profiles, k)?;
        profiles.sort_by_key(|p| p.rank);
    }
    let header = header_for("rank", seed, &a, &[&input])?;
    let rows: Vec<Value> = profiles.iter().map(to_row).collect::<Result<_>>()?;

    let mut t = Table::new(&["rank", "author", "forecasts", "mean std brier", "group"]);
    for p in &profiles {
        t.row(vec![
            p.rank.to_string(),
            p.author_id.clone(),
            p.n_forecasts.to_string(),
            fmt_f(p.mean_std_brier, 4),
            format!("{:?}", p.group).to_lowercase(),
        ]);
    }
    emit_report(&emitter, a.out.as_deref(), &header, &rows, &t.render())
}

fn author_metric_vectors(records: &[ForecastRecord]) -> BTreeMap<String, (usize, MetricVector)> {
    use rayon::prelude::*;
    let lex = MetricLexicons::bundled();
    let computed: Vec<(&str, MetricVector)> = records
        .par_iter()
        .map(|r| (r.author_id.as_str(), compute_record_metrics(&r.justification, lex)))
        .collect();
    let mut grouped: BTreeMap<&str, Vec<MetricVector>> = BTreeMap::new();
    for (author, v) in computed {
        grouped.entry(author).or_default().push(v);
    }
    grouped
        .into_iter()
        .filter_map(|(author, vs)| {
            let n = vs.len();
            author_aggregate(&vs).ok().map(|agg| (author.to_string(), (n, agg)))
        })
        .collect()
}

fn cmd_metrics(seed: u64, a: MetricsArgs) -> Result<()> {
    let emitter = Emitter::new(&[a.out.as_deref()])?;
    let (input, loaded) = load_corpus_input(&a.corpus)?;
    let per_author = author_metric_vectors(&loaded.records);
    if per_author.is_empty() {
        return Err(Error::Data("no authors with computable metrics".into()));
    }
    let header = header_for("metrics", seed, &a, &[&input])?;

    let mut rows = Vec::new();
    for (author, (n, agg)) in &per_author {
        let values: BTreeMap<&str, f64> = agg.iter().map(|(m, v)| (m.name(), v)).collect();
        rows.push(json!({"author_id": author, "n_records": n, "metrics": values}));
    }

    let mut t = Table::new(&["metric", "authors", "mean"]);
    for metric in Metric::ALL {
        let vals: Vec<f64> = per_author.values().filter_map(|(_, agg)| agg.get(metric)).collect();
        let mean = (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64);
        t.row(vec![metric.name().to_string(), vals.len().to_string(), opt_cell(mean, 4)]);
    }
    emit_report(&emitter, a.out.as_deref(), &header, &rows, &t.render())
}

fn cmd_compare(seed: u64, a: CompareArgs) -> Result<()> {
    let emitter = Emitter::new(&[a.out.as_deref()])?;
    let (input, loaded) = load_corpus_input(&a.corpus)?;
    let report = brier_scores(&loaded.records)?;
    let mut profiles = rank_forecasters(&report.scored);
    let (top_ids, bottom_ids) = select_groups(&mut profiles, a.k)?;

    let members: std::collections::HashSet<&str> =
        top_ids.iter().chain(&bottom_ids).map(String::as_str).collect();
    let group_records: Vec<ForecastRecord> = loaded
        .records
        .iter()
        .filter(|r| members.contains(r.author_id.as_str()))
        .cloned()
        .collect();
    let per_author = author_metric_vectors(&group_records);

    let mut comparisons = Vec::new();
    let mut skipped: Vec<&str> = Vec::new();
    for (mi, metric) in Metric::ALL.iter().enumerate() {
        let side = |ids: &[String]| -> Vec<f64> {
            ids.iter()
                .filter_map(|id| per_author.get(id).and_then(|(_, agg)| agg.get(*metric)))
                .collect()
        };
        let top_vals = side(&top_ids);
        let bottom_vals = side(&bottom_ids);
        if top_vals.is_empty() || bottom_vals.is_empty() {
            skipped.push(metric.name());
            continue;
        }
        let cmp = bootstrap_test(&top_vals, &bottom_vals, a.bootstrap, seed.wrapping_add(mi as u64))?
            .with_metric(metric.name());
        comparisons.push(cmp);
    }
    if comparisons.is_empty() {
        return Err(Error::Data("no metric defined for both groups".into()));
    }
    let p_values: BTreeMap<String, f64> =
        comparisons.iter().map(|c| (c.metric.clone(), c.p_value)).collect();
    let passes = bonferroni(&p_values, a.alpha, p_values.len())?;
    for c in &mut comparisons {
        c.passes_bonferroni = passes[&c.metric];
    }

    let header = header_for("compare", seed, &a, &[&input])?;
    let rows: Vec<Value> = comparisons.iter().map(to_row).collect::<Result<_>>()?;

    let mut t = Table::new(&["metric", "top mean", "bottom mean", "dir", "p", "sig"]);
    for c in &comparisons {
        let arrow = match c.direction {
            Direction::TopHigher => "^",
            Direction::BottomHigher => "v",
        };
        t.row(vec![
            c.metric.clone(),
            fmt_f(c.mean_top, 4),
            fmt_f(c.mean_bottom, 4),
            arrow.into(),
            fmt_f(c.p_value, 6),
            if c.passes_bonferroni { "*".into() } else { String::new() },
        ]);
    }
    let mut human = t.render();
    human.push_str(&format!(
        "\n{} tests, alpha {} (per-test {:.6}); * passes the corrected threshold\n",
        p_values.len(),
        a.alpha,
        a.alpha / p_values.len() as f64
    ));
    for name in skipped {
        human.push_str(&format!("skipped {name}: undefined for a whole group\n"));
    }
    emit_report(&emitter, a.out.as_deref(), &header, &rows, &human)
}

/// Top-K vs. bottom-K authors as labeled training examples (label 1 =
/// top). Texts keep record order; example order is top then bottom.
fn author_group_examples(records: &[ForecastRecord], k: usize) -> Result<Vec<Example>> {
    let report = brier_scores(records)?;
    let mut profiles = rank_forecasters(&report.scored);
    let (top_ids, bottom_ids) = select_groups(&mut profiles, k)?;
    let mut texts: BTreeMap<&str, Vec<String>> = BTreeMap::new();
    for r in records {
        texts.entry(r.author_id.as_str()).or_default().push(r.justification.clone());
    }
    let mut examples = Vec::new();
    for (ids, label) in [(&top_ids, 1u8), (&bottom_ids, 0u8)] {
        for id in ids {
            examples.push(Example {
                id: id.clone(),
                texts: texts.get(id.as_str()).cloned().unwrap_or_default(),
                label,
            });
        }
    }
    Ok(examples)
}

fn featurize_examples(space: &FeatureSpace, examples: &[Example]) -> Result<(Vec<skillcast::model::SparseVec>, Vec<u8>)> {
    let mut xs = Vec::with_capacity(examples.len());
    let mut ys = Vec::with_capacity(examples.len());
    for ex in examples {
        xs.push(space.featurize(&ex.texts)?);
        ys.push(ex.label);
    }
    Ok((xs, ys))
}

fn cmd_train(seed: u64, a: TrainArgs) -> Result<()> {
    let emitter = Emitter::new(&[a.out.as_deref()])?;
    let (input, loaded) = load_corpus_input(&a.corpus)?;
    let fconfig = a.features.to_config()?;
    let tconfig = a.optim.to_config(seed);
    let examples = author_group_examples(&loaded.records, a.k)?;
    let space = FeatureSpace::build(&examples, fconfig)?;
    let (xs, ys) = featurize_examples(&space, &examples)?;
    let trained = train_logreg(&xs, &ys, space.dim(), &tconfig)?;
    save_model(&a.model, &space, &trained.artifact)?;
    let train_acc = accuracy(&trained.artifact, &xs, &ys);

    let n_list = a.top.min(space.vocabulary.len());
    let (heaviest_top, heaviest_bottom) = top_features(&trained.artifact, &space, n_list)?;

    let header = header_for("train", seed, &a, &[&input])?;
    let mut rows = vec![json!({
        "n_examples": examples.len(),
        "dim": space.dim(),
        "vocab": space.vocabulary.len(),
        "epochs_run": trained.epochs_run,
        "final_loss": trained.loss_history.last(),
        "final_grad_norm": trained.final_grad_norm,
        "train_accuracy": train_acc,
        "data_hash": trained.artifact.data_hash,
        "vocab_hash": space.vocab_hash(),
        "model_path": a.model.display().to_string(),
    })];
    for (side, list) in [("top", &heaviest_top), ("bottom", &heaviest_bottom)] {
        for (feature, weight) in list {
            rows.push(json!({"side": side, "feature": feature, "weight": weight}));
        }
    }

    let mut t = Table::new(&["field", "value"]);
    t.row(vec!["examples".into(), examples.len().to_string()]);
    t.row(vec!["features".into(), space.dim().to_string()]);
    t.row(vec!["epochs run".into(), trained.epochs_run.to_string()]);
    t.row(vec!["final loss".into(), opt_cell(trained.loss_history.last().copied(), 6)]);
    t.row(vec!["gradient norm".into(), format!("{:.3e}", trained.final_grad_norm)]);
    t.row(vec!["train accuracy".into(), fmt_f(train_acc, 4)]);
    t.row(vec!["model".into(), a.model.display().to_string()]);
    let mut human = t.render();
    let mut ft = Table::new(&["side", "feature", "weight"]);
    for (side, list) in [("top", &heaviest_top), ("bottom", &heaviest_bottom)] {
        for (feature, weight) in list {
            ft.row(vec![side.into(), feature.clone(), fmt_f(*weight, 4)]);
        }
    }
    human.push('\n');
    human.push_str(&ft.render());

    emit_report(&emitter, a.out.as_deref(), &header, &rows, &human)
}

fn cmd_evaluate(seed: u64, a: EvaluateArgs) -> Result<()> {
    let emitter = Emitter::new(&[a.out.as_deref()])?;
    let (input, loaded) = load_corpus_input(&a.corpus)?;
    let examples = author_group_examples(&loaded.records, a.k)?;
    let header = header_for("evaluate", seed, &a, &[&input])?;

    let (rows, human) = if let Some(path) = &a.model {
        let (space, artifact) = load_model(path)?;
        let (xs, ys) = featurize_examples(&space, &examples)?;
        let acc = accuracy(&artifact, &xs, &ys);
        let mut t = Table::new(&["field", "value"]);
        t.row(vec!["examples".into(), examples.len().to_string()]);
        t.row(vec!["model".into(), path.display().to_string()]);
        t.row(vec!["accuracy".into(), fmt_f(acc, 4)]);
        (
            vec![json!({"n_examples": examples.len(), "accuracy": acc, "model_path": path.display().to_string()})],
            t.render(),
        )
    } else if let Some(folds) = a.crossval {
        let report = crossval_accuracy(
            &examples,
            folds,
            seed,
            &a.features.to_config()?,
            &a.optim.to_config(seed),
        )?;
        let mut rows: Vec<Value> = report
            .fold_accuracies
            .iter()
            .enumerate()
            .map(|(i, acc)| json!({"fold": i + 1, "accuracy": acc}))
            .collect();
        rows.push(json!({
            "mean_accuracy": report.mean_accuracy,
            "n_examples": report.n_examples,
            "folds": report.fold_accuracies.len(),
        }));
        let mut t = Table::new(&["fold", "accuracy"]);
        for (i, acc) in report.fold_accuracies.iter().enumerate() {
            t.row(vec![(i + 1).to_string(), fmt_f(*acc, 4)]);
        }
        t.row(vec!["mean".into(), fmt_f(report.mean_accuracy, 4)]);
        (rows, t.render())
    } else {
        return Err(Error::Config("pass either --model or --crossval".into()));
    };

    emit_report(&emitter, a.out.as_deref(), &header, &rows, &human)
}

fn cmd_early(seed: u64, a: EarlyArgs) -> Result<()> {
    let emitter = Emitter::new(&[a.out.as_deref()])?;
    let (input, loaded) = load_corpus_input(&a.corpus)?;
    let report = brier_scores(&loaded.records)?;
    let profiles = rank_forecasters(&report.scored);
    let half = profiles.len() / 2;

    let mut texts: BTreeMap<&str, Vec<String>> = BTreeMap::new();
    let mut by_id: BTreeMap<&str, &ForecastRecord> = BTreeMap::new();
    for r in &loaded.records {
        texts.entry(r.author_id.as_str()).or_default().push(r.justification.clone());
        by_id.insert(r.record_id.as_str(), r);
    }
    let mut earliest: BTreeMap<&str, &ScoredForecast> = BTreeMap::new();
    for s in &report.scored {
        let e = earliest.entry(s.author_id.as_str()).or_insert(s);
        if (s.timestamp, &s.record_id) < (e.timestamp, &e.record_id) {
            *e = s;
        }
    }

    let mut authors = Vec::new();
    for (i, p) in profiles.iter().enumerate() {
        let first = earliest[p.author_id.as_str()];
        authors.push(EarlyAuthor {
            id: p.author_id.clone(),
            label: u8::from(i < half),
            texts: texts[p.author_id.as_str()].clone(),
            earliest_text: by_id[first.record_id.as_str()].justification.clone(),
            earliest_z: first.z,
        });
    }

    let mut ns = Vec::new();
    for part in a.at.split(',') {
        ns.push(
            part.trim()
                .parse::<usize>()
                .map_err(|_| Error::Config(format!("bad ranking depth `{part}`")))?,
        );
    }
    let pr = precision_at_n(&authors, &ns, seed, &a.features.to_config()?, &a.optim.to_config(seed))?;

    let header = header_for("early", seed, &a, &[&input])?;
    let mut rows: Vec<Value> = pr
        .at_n
        .iter()
        .map(|(n, model, baseline)| json!({"n": n, "model": model, "baseline": baseline}))
        .collect();
    rows.push(json!({
        "n_train": pr.n_train,
        "n_validation": pr.n_validation,
        "n_test": pr.n_test,
    }));

    let mut t = Table::new(&["N", "model P@N", "baseline P@N"]);
    for (n, model, baseline) in &pr.at_n {
        t.row(vec![n.to_string(), fmt_f(*model, 3), fmt_f(*baseline, 3)]);
    }
    let mut human = t.render();
    human.push_str(&format!(
        "\nsplit: {} train / {} validation / {} test authors; baseline ranks by earliest standardized Brier\n",
        pr.n_train, pr.n_validation, pr.n_test
    ));
    emit_report(&emitter, a.out.as_deref(), &header, &rows, &human)
}

fn cmd_split_financial(seed: u64, a: SplitFinancialArgs) -> Result<()> {
    let emitter = Emitter::new(&[a.out.as_deref()])?;
    let (input, loaded) = load_corpus_input(&a.corpus)?;

    let mut per_analyst: BTreeMap<&str, Vec<(String, f64)>> = BTreeMap::new();
    let mut skipped_unresolved = 0usize;
    let mut skipped_zero_actual = 0usize;
    for r in &loaded.records {
        let Some(actual) = r.outcome else {
            skipped_unresolved += 1;
            continue;
        };
        if actual == 0.0 {
            skipped_zero_actual += 1;
            continue;
        }
        per_analyst
            .entry(r.author_id.as_str())
            .or_default()
            .push((r.record_id.clone(), eps_error(r.estimate, actual)?));
    }

    let mut std_errors: BTreeMap<String, f64> = BTreeMap::new();
    let mut analysts_used = 0usize;
    let mut analysts_skipped = 0usize;
    for errors in per_analyst.values() {
        if errors.len() < a.min_forecasts {
            analysts_skipped += 1;
            continue;
        }
        let standardized = standardize_analyst_errors(errors, a.trim, a.min_forecasts)?;
        std_errors.extend(standardized.std_errors);
        analysts_used += 1;
    }
    if std_errors.is_empty() {
        return Err(Error::Data(format!(
            "no analyst reached {} scored forecasts",
            a.min_forecasts
        )));
    }

    let (accurate, inaccurate) = skillcast::model::select_record_groups(&std_errors, a.k)?;
    let label_of: BTreeMap<&str, u8> = accurate
        .iter()
        .map(|id| (id.as_str(), 1u8))
        .chain(inaccurate.iter().map(|id| (id.as_str(), 0u8)))
        .collect();
    let labeled: Vec<LabeledRecord> = loaded
        .records
        .iter()
        .filter_map(|r| {
            label_of
                .get(r.record_id.as_str())
                .map(|&label| LabeledRecord { record: r.clone(), label })
        })
        .collect();
    let split = financial_split(&labeled, a.eval_frac, seed)?;

    let header = header_for("split-financial", seed, &a, &[&input])?;
    let mut rows = Vec::new();
    let mut t = Table::new(&["split", "records", "label 1", "label 0", "companies"]);
    for (name, part) in [("train", &split.train), ("dev", &split.dev), ("test", &split.test)] {
        let pos = part.iter().filter(|r| r.label == 1).count();
        let companies: std::collections::BTreeSet<&str> =
            part.iter().map(|r| r.record.target_id.as_str()).collect();
        t.row(vec![
            name.into(),
            part.len().to_string(),
            pos.to_string(),
            (part.len() - pos).to_string(),
            companies.len().to_string(),
        ]);
        for r in part {
            rows.push(json!({
                "split": name,
                "record_id": r.record.record_id,
                "author_id": r.record.author_id,
                "company": r.record.target_id,
                "label": r.label,
            }));
        }
    }
    let mut human = t.render();
    human.push_str(&format!(
        "\nanalysts: {analysts_used} used, {analysts_skipped} below {} forecasts; records skipped: {skipped_unresolved} unresolved, {skipped_zero_actual} zero actual\n",
        a.min_forecasts
    ));
    human.push_str(&format!(
        "companies: {} train-only, {} eval-only\n",
        split.train_companies.len(),
        split.eval_companies.len()
    ));
    emit_report(&emitter, a.out.as_deref(), &header, &rows, &human)
}

fn cmd_extract_eps(seed: u64, a: ExtractEpsArgs) -> Result<()> {
    let emitter = Emitter::new(&[a.out.as_deref()])?;
    let (input, loaded) = load_corpus_input(&a.corpus)?;
    let custom;
    let patterns: &[skillcast::extract::Pattern] = match &a.patterns {
        Some(path) => {
            custom = load_patterns(path)?;
            &custom
        }
        None => skillcast::extract::bundled_patterns(),
    };
    let years = parse_year_range(&a.years)?;

    let mut estimates: Vec<EpsEstimate> = Vec::new();
    let mut warnings: Vec<String> = Vec::new();
    for r in &loaded.records {
        let mut found = extract_eps(&r.justification, patterns);
        for est in &mut found {
            est.record_id = r.record_id.clone();
        }
        if a.earliest {
            let (best, warns) = earliest_forecast(&found, years.clone());
            warnings.extend(warns.into_iter().map(|w| format!("{}: {w}", r.record_id)));
            estimates.extend(best);
        } else {
            estimates.extend(found);
        }
    }

    let header = header_for("extract-eps", seed, &a, &[&input])?;
    let rows: Vec<Value> = estimates.iter().map(to_row).collect::<Result<_>>()?;

    let mut t = Table::new(&["record", "time", "value", "pattern"]);
    for e in &estimates {
        t.row(vec![
            e.record_id.clone(),
            e.time_label.clone(),
            fmt_f(e.value, 2),
            e.pattern_id.to_string(),
        ]);
    }
    let mut human = t.render();
    human.push_str(&format!(
        "\n{} estimates from {} records\n",
        estimates.len(),
        loaded.records.len()
    ));
    for w in &warnings {
        human.push_str(&format!("warning: {w}\n"));
    }
    emit_report(&emitter, a.out.as_deref(), &header, &rows, &human)
}

fn parse_year_range(s: &str) -> Result<std::ops::RangeInclusive<i32>> {
    let (lo, hi) = s
        .split_once('-')
        .ok_or_else(|| Error::Config(format!("year range `{s}` is not lo-hi")))?;
    let lo: i32 = lo.trim().parse().map_err(|_| Error::Config(format!("bad year `{lo}`")))?;
    let hi: i32 = hi.trim().parse().map_err(|_| Error::Config(format!("bad year `{hi}`")))?;
    if lo > hi {
        return Err(Error::Config(format!("empty year range {lo}-{hi}")));
    }
    Ok(lo..=hi)
}

fn cmd_eval_eps(seed: u64, a: EvalEpsArgs) -> Result<()> {
    let emitter = Emitter::new(&[a.out.as_deref()])?;
    let pred_input = read_input(&a.predictions)?;
    let mut predicted: Vec<ExtractionTuple> = Vec::new();
    for (idx, line) in pred_input.text()?.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<ExtractionTuple>(line) {
            Ok(t) => predicted.push(t),
            Err(e) => {
                let is_header = idx == 0
                    && serde_json::from_str::<Value>(line).is_ok_and(|v| v.get("command").is_some());
                if !is_header {
                    return Err(Error::parse(&pred_input.name, idx + 1, format!("bad prediction row: {e}")));
                }
            }
        }
    }
    let gold_input = read_file(&a.gold)?;
    let gold = load_gold(&a.gold)?;
    let eval = evaluate_extraction(&predicted, &gold)?;

    let header = header_for("eval-eps", seed, &a, &[&pred_input, &gold_input])?;
    let rows = vec![to_row(&eval)?];
    let mut t = Table::new(&["field", "value"]);
    t.row(vec!["predicted".into(), eval.n_predicted.to_string()]);
    t.row(vec!["gold".into(), eval.n_gold.to_string()]);
    t.row(vec!["correct".into(), eval.correct.to_string()]);
    t.row(vec!["precision".into(), opt_cell(eval.precision, 4)]);
    t.row(vec!["recall".into(), fmt_f(eval.recall, 4)]);
    emit_report(&emitter, a.out.as_deref(), &header, &rows, &t.render())
}

fn cmd_calibration(seed: u64, a: CalibrationArgs) -> Result<()> {
    let emitter = Emitter::new(&[a.out.as_deref()])?;
    let (input, loaded) = load_corpus_input(&a.corpus)?;
    let forecasts: Vec<(f64, u8)> = loaded
        .records
        .iter()
        .filter_map(|r| match (r.domain_tag, r.outcome) {
            (skillcast::corpus::DomainTag::Binary, Some(o)) => Some((r.estimate, o as u8)),
            _ => None,
        })
        .collect();
    let curve = calibration_curve(&forecasts, a.bins)?;

    let header = header_for("calibration", seed, &a, &[&input])?;
    let mut rows = Vec::new();
    let mut t = Table::new(&["bin", "range", "n", "mean forecast", "outcome freq"]);
    for i in 0..a.bins {
        rows.push(json!({
            "bin": i,
            "lo": curve.edges[i],
            "hi": curve.edges[i + 1],
            "count": curve.count[i],
            "mean_estimate": curve.mean_estimate[i],
            "frequency": curve.frequency[i],
        }));
        t.row(vec![
            i.to_string(),
            format!("[{}, {}{}", fmt_f(curve.edges[i], 2), fmt_f(curve.edges[i + 1], 2), if i + 1 == a.bins { "]" } else { ")" }),
            curve.count[i].to_string(),
            opt_cell(curve.mean_estimate[i], 4),
            opt_cell(curve.frequency[i], 4),
        ]);
    }
    let mut human = t.render();
    human.push_str(&format!("\n{} resolved forecasts\n", forecasts.len()));
    emit_report(&emitter, a.out.as_deref(), &header, &rows, &human)
}

fn parse_forecast_range(s: &str) -> Result<(usize, usize)> {
    if let Some((lo, hi)) = s.split_once('-') {
        let lo = lo.trim().parse().map_err(|_| Error::Config(format!("bad count `{lo}`")))?;
        let hi = hi.trim().parse().map_err(|_| Error::Config(format!("bad count `{hi}`")))?;
        Ok((lo, hi))
    } else {
        let n = s.trim().parse().map_err(|_| Error::Config(format!("bad count `{s}`")))?;
        Ok((n, n))
    }
}

fn cmd_synth(seed: u64, a: SynthArgs) -> Result<()> {
    let emitter = Emitter::new(&[Some(a.records.as_str()), a.out.as_deref()])?;
    let config = SynthConfig {
        n_authors: a.authors,
        forecasts_per_author: parse_forecast_range(&a.forecasts)?,
        n_questions: a.questions,
        noise_sigma: a.sigma,
        hedge_base: a.hedge_base,
        hedge_slope: a.hedge_slope,
        sent_base: a.sent_base,
        sent_slope: a.sent_slope,
        length_base: a.length_base,
        length_slope: a.length_slope,
        seed,
    };
    let custom;
    let bank = match &a.templates {
        Some(path) => {
            custom = TemplateBank::load(path)?;
            &custom
        }
        None => TemplateBank::bundled(),
    };
    let (records, truth) = generate_corpus(&config, bank)?;

    emitter.stream(&a.records, &records_to_jsonl(&records)?)?;
    if let Some(path) = &a.truth {
        std::fs::write(path, truth_to_tsv(&truth)).map_err(|e| Error::io(path, e))?;
    }

    let header = header_for("synth", seed, &a, &[])?;
    let rows: Vec<Value> = truth
        .iter()
        .map(|(author, skill)| json!({"author_id": author, "skill": skill}))
        .collect();

    let mut t = Table::new(&["field", "value"]);
    t.row(vec!["authors".into(), truth.len().to_string()]);
    t.row(vec!["records".into(), records.len().to_string()]);
    t.row(vec!["questions".into(), a.questions.to_string()]);
    t.row(vec!["noise sigma".into(), fmt_f(a.sigma, 3)]);
    emit_report(&emitter, a.out.as_deref(), &header, &rows, &t.render())
}
