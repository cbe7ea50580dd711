//! Command-line interface: wires ingestion, training, evaluation, the
//! analysis harness, and persistence into reproducible runs. Every report
//! starts with a hash of the fully resolved run configuration, so equal
//! hashes mean byte-identical reports (the wall-clock benchmark excepted).

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufRead, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::baselines::{fit_ngram_model, ngram_features_batch, GramUnit, GramWeighting};
use crate::classifier::{train_classifier, Hyperparameters};
use crate::corpus::{corpus_stats, load_corpus, Corpus, Document, Layout, Split, TokenizerConfig};
use crate::error::{Error, Result};
use crate::eval::{
    ablation_run, cost_benchmark, evaluate, information_gain, ldr_tables, parse_subset,
    significance_z, threshold_sweep, write_ablation_csv, write_sweep_csv,
};
use crate::features::FeatureKind;
use crate::fetch::{fetch_data, DEFAULT_URL};
use crate::persist::{ModelBundle, RepresentationSpec};
use crate::synth::{synthetic_corpus, SynthConfig};

/// Environment variable naming the default corpus directory.
pub const DATA_DIR_ENV: &str = "LDR_DATA_DIR";

/// Run one CLI invocation. Exit code 0 when the requested artifact was
/// fully produced, 2 for usage errors, 1 for runtime failures.
pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let usage_only = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            return if usage_only { 0 } else { 2 };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

#[derive(Parser)]
#[command(
    name = "ldr",
    version,
    about = "Language variety identification with low-dimensionality document representations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-class corpus statistics (documents, words, words per document)
    Stats(StatsArgs),
    /// Fit a representation plus classifier and persist the bundle
    Train(TrainArgs),
    /// Label documents with a persisted model
    Predict(PredictArgs),
    /// Score a persisted model on a corpus test split
    Evaluate(EvaluateArgs),
    /// Accuracy and vocabulary size across frequency thresholds
    Sweep(SweepArgs),
    /// Retrain on subsets of the six per-class statistics
    Ablate(AblateArgs),
    /// Rank features by information gain against the class label
    Infogain(InfogainArgs),
    /// Two-proportion z statistic for an accuracy difference
    Significance(SignificanceArgs),
    /// Median feature-extraction time against document length
    Bench(BenchArgs),
    /// Download the public blog corpus into the expected layout
    FetchData(FetchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LayoutArg {
    Hispablogs,
    Dslcc,
}

impl LayoutArg {
    fn name(self) -> &'static str {
        match self {
            LayoutArg::Hispablogs => "hispablogs",
            LayoutArg::Dslcc => "dslcc",
        }
    }

    fn to_layout(self) -> Layout {
        match self {
            LayoutArg::Hispablogs => Layout::Hispablogs,
            LayoutArg::Dslcc => Layout::Dslcc,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReprArg {
    /// Six statistics of the class-dependent term weights per class
    Ldr,
    /// 10,000 most frequent word unigrams, raw counts
    Bow,
    /// 10,000 most frequent character 4-grams, raw counts
    Char4,
    /// 10,000 most frequent word bigrams, tf-idf weighted
    Tfidf2,
    /// N-gram representation described by --unit/--n/--k/--weighting
    Custom,
}

/// Flags shared by every corpus-reading subcommand. Optional so a JSON
/// config file can supply values; explicit flags always win.
#[derive(Args, Clone, Default)]
struct CorpusFlags {
    /// Corpus root directory (default: $LDR_DATA_DIR)
    #[arg(long)]
    root: Option<PathBuf>,
    /// Directory-per-class tree or tab-separated sentence files
    #[arg(long, value_enum)]
    layout: Option<LayoutArg>,
    /// Keep tokens containing digits
    #[arg(long)]
    keep_digits: bool,
    /// Fold accented letters to their base form
    #[arg(long)]
    strip_accents: bool,
    /// JSON file mirroring the flags one-to-one (flags win on conflict)
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Config-file schema: every field optional, same names as the flags.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub root: Option<PathBuf>,
    pub layout: Option<String>,
    pub keep_digits: Option<bool>,
    pub strip_accents: Option<bool>,
    pub min_freq: Option<u64>,
    pub representation: Option<String>,
    pub unit: Option<String>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub weighting: Option<String>,
    pub l2: Option<f64>,
    pub tol: Option<f64>,
    pub max_iters: Option<usize>,
    pub bins: Option<usize>,
    pub seed: Option<u64>,
}

impl RunConfig {
    fn load(path: Option<&Path>) -> Result<RunConfig> {
        let Some(path) = path else { return Ok(RunConfig::default()) };
        let text = std::fs::read_to_string(path)
            .map_err(|source| Error::Io { path: path.to_owned(), source })?;
        serde_json::from_str(&text).map_err(|e| Error::FormatParse {
            path: path.to_owned(),
            line: e.line(),
            detail: e.to_string(),
        })
    }
}

/// The fully resolved settings of one run; its JSON hash heads every
/// report file.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedRun {
    pub command: String,
    pub root: Option<PathBuf>,
    pub layout: String,
    pub keep_digits: bool,
    pub strip_accents: bool,
    pub min_freq: u64,
    pub representation: String,
    pub unit: String,
    pub n: usize,
    pub k: usize,
    pub weighting: String,
    pub l2: f64,
    pub tol: f64,
    pub max_iters: usize,
    pub bins: usize,
    pub seed: u64,
}

impl ResolvedRun {
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("run config serializes");
        let digest = Sha256::digest(json.as_bytes());
        let mut hex = String::with_capacity(64);
        for byte in digest {
            hex.push_str(&format!("{byte:02x}"));
        }
        hex
    }
}

/// Resolution order: explicit flag, then config file, then default.
fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

struct CorpusSetup {
    root: Option<PathBuf>,
    layout: LayoutArg,
    tokenizer: TokenizerConfig,
    file: RunConfig,
}

impl CorpusFlags {
    fn resolve(&self) -> Result<CorpusSetup> {
        let file = RunConfig::load(self.config.as_deref())?;
        let layout = match (&self.layout, &file.layout) {
            (Some(l), _) => *l,
            (None, Some(name)) => match name.as_str() {
                "hispablogs" => LayoutArg::Hispablogs,
                "dslcc" => LayoutArg::Dslcc,
                other => return Err(Error::InvalidParam(format!("unknown layout `{other}`"))),
            },
            (None, None) => LayoutArg::Hispablogs,
        };
        let root = self
            .root
            .clone()
            .or_else(|| file.root.clone())
            .or_else(|| std::env::var_os(DATA_DIR_ENV).map(PathBuf::from));
        let tokenizer = TokenizerConfig {
            keep_digits: pick(self.keep_digits.then_some(true), file.keep_digits, false),
            strip_accents: pick(self.strip_accents.then_some(true), file.strip_accents, false),
        };
        Ok(CorpusSetup { root, layout, tokenizer, file })
    }
}

impl CorpusSetup {
    fn required_root(&self) -> Result<&Path> {
        self.root.as_deref().ok_or_else(|| {
            Error::InvalidParam(format!("no corpus root: pass --root or set ${DATA_DIR_ENV}"))
        })
    }

    fn load(&self) -> Result<Corpus> {
        load_corpus(self.required_root()?, self.layout.to_layout(), &self.tokenizer)
    }

    fn resolved(&self, command: &str) -> ResolvedRun {
        ResolvedRun {
            command: command.to_owned(),
            root: self.root.clone(),
            layout: self.layout.name().to_owned(),
            keep_digits: self.tokenizer.keep_digits,
            strip_accents: self.tokenizer.strip_accents,
            min_freq: 5,
            representation: "ldr".to_owned(),
            unit: "word".to_owned(),
            n: 1,
            k: 10_000,
            weighting: "count".to_owned(),
            l2: 1.0,
            tol: 1e-6,
            max_iters: 1000,
            bins: 10,
            seed: 42,
        }
    }
}

/// Write a report to the given file or stdout, prefixed by the run hash.
fn write_report<F>(out: Option<&Path>, hash: &str, body: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> std::io::Result<()>,
{
    let emit = |w: &mut dyn Write| -> std::io::Result<()> {
        writeln!(w, "# run_config_hash: {hash}")?;
        body(w)?;
        w.flush()
    };
    match out {
        Some(path) => {
            let file =
                File::create(path).map_err(|source| Error::Io { path: path.to_owned(), source })?;
            let mut w = BufWriter::new(file);
            emit(&mut w).map_err(|source| Error::Io { path: path.to_owned(), source })
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            emit(&mut w).map_err(|source| Error::Io { path: PathBuf::from("<stdout>"), source })
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Stats(args) => cmd_stats(args),
        Command::Train(args) => cmd_train(args),
        Command::Predict(args) => cmd_predict(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Ablate(args) => cmd_ablate(args),
        Command::Infogain(args) => cmd_infogain(args),
        Command::Significance(args) => cmd_significance(args),
        Command::Bench(args) => cmd_bench(args),
        Command::FetchData(args) => cmd_fetch(args),
    }
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    corpus: CorpusFlags,
    /// Output CSV file (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_stats(args: StatsArgs) -> Result<()> {
    let setup = args.corpus.resolve()?;
    let corpus = setup.load()?;
    let stats = corpus_stats(&corpus);
    let hash = setup.resolved("stats").hash();
    write_report(args.out.as_deref(), &hash, |w| stats.to_csv(w))
}

#[derive(Args)]
struct TrainArgs {
    #[command(flatten)]
    corpus: CorpusFlags,
    /// Where to write the trained model bundle
    #[arg(long)]
    model: PathBuf,
    /// Representation to train on
    #[arg(long, value_enum)]
    repr: Option<ReprArg>,
    /// Frequency threshold: drop terms occurring ≤ this many times
    #[arg(long)]
    min_freq: Option<u64>,
    /// Gram unit for --repr custom
    #[arg(long)]
    unit: Option<GramUnit>,
    /// Gram order for --repr custom
    #[arg(long)]
    n: Option<usize>,
    /// Retained vocabulary size for --repr custom
    #[arg(long)]
    k: Option<usize>,
    /// Gram weighting for --repr custom
    #[arg(long)]
    weighting: Option<GramWeighting>,
    /// L2 regularization strength
    #[arg(long)]
    l2: Option<f64>,
    /// Convergence tolerance on the training loss
    #[arg(long)]
    tol: Option<f64>,
    /// Iteration cap for the optimizer
    #[arg(long)]
    max_iters: Option<usize>,
}

fn cmd_train(args: TrainArgs) -> Result<()> {
    let setup = args.corpus.resolve()?;
    let corpus = setup.load()?;
    let file = &setup.file;
    let repr = match (args.repr, file.representation.as_deref()) {
        (Some(r), _) => r,
        (None, Some(name)) => match name {
            "ldr" => ReprArg::Ldr,
            "bow" => ReprArg::Bow,
            "char4" => ReprArg::Char4,
            "tfidf2" => ReprArg::Tfidf2,
            "custom" => ReprArg::Custom,
            other => return Err(Error::InvalidParam(format!("unknown representation `{other}`"))),
        },
        (None, None) => ReprArg::Ldr,
    };
    let min_freq = pick(args.min_freq, file.min_freq, 5);
    let hyper = Hyperparameters {
        l2: pick(args.l2, file.l2, 1.0),
        tol: pick(args.tol, file.tol, 1e-6),
        max_iters: pick(args.max_iters, file.max_iters, 1000),
    };

    let (train_table, representation) = match repr {
        ReprArg::Ldr => {
            let (beta, train_table, _) = ldr_tables(&corpus, min_freq)?;
            let spec = RepresentationSpec::Ldr {
                min_freq,
                tokenizer: setup.tokenizer.clone(),
                beta,
            };
            (train_table, spec)
        }
        _ => {
            // named presets over the fitted n-gram space; `custom` reads the flags
            let (unit, n, k, weighting) = match repr {
                ReprArg::Bow => (GramUnit::Word, 1, 10_000, GramWeighting::Count),
                ReprArg::Char4 => (GramUnit::Char, 4, 10_000, GramWeighting::Count),
                ReprArg::Tfidf2 => (GramUnit::Word, 2, 10_000, GramWeighting::TfIdf),
                ReprArg::Custom => {
                    let unit = match (args.unit, file.unit.as_deref()) {
                        (Some(u), _) => u,
                        (None, Some(s)) => s.parse()?,
                        (None, None) => GramUnit::Word,
                    };
                    let weighting = match (args.weighting, file.weighting.as_deref()) {
                        (Some(w), _) => w,
                        (None, Some(s)) => s.parse()?,
                        (None, None) => GramWeighting::Count,
                    };
                    (unit, pick(args.n, file.n, 1), pick(args.k, file.k, 10_000), weighting)
                }
                ReprArg::Ldr => unreachable!(),
            };
            let model = fit_ngram_model(&corpus, unit, n, k, weighting)?;
            let train: Vec<&Document> = corpus.train_docs().collect();
            let table = ngram_features_batch(&train, &model);
            let spec = RepresentationSpec::Ngram { tokenizer: setup.tokenizer.clone(), model };
            (table, spec)
        }
    };

    let labels = train_table.labels_required()?;
    let model = train_classifier(&train_table, &labels, &hyper)?;
    let bundle = ModelBundle::new(model, representation)?;
    bundle.save(&args.model)?;
    println!(
        "trained {} model: {} classes, {} features, {} iterations, final loss {:.6}",
        bundle.model.meta.representation,
        bundle.model.classes.len(),
        bundle.model.feature_dim,
        bundle.model.meta.iterations,
        bundle.model.meta.final_loss
    );
    println!("model written to {}", args.model.display());
    Ok(())
}

#[derive(Args)]
struct PredictArgs {
    /// Trained model bundle
    #[arg(long)]
    model: PathBuf,
    /// Text file with one document per line (default: stdin)
    #[arg(long)]
    input: Option<PathBuf>,
    /// Predict the test split of this corpus instead of line input
    #[arg(long)]
    root: Option<PathBuf>,
    /// Corpus layout when --root is given
    #[arg(long, value_enum, default_value = "hispablogs")]
    layout: LayoutArg,
    /// Output CSV file (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_predict(args: PredictArgs) -> Result<()> {
    let bundle = ModelBundle::load(&args.model)?;
    let tokenizer = bundle.tokenizer().clone();
    let docs: Vec<Document> = if let Some(root) = &args.root {
        let corpus = load_corpus(root, args.layout.to_layout(), &tokenizer)?;
        corpus.documents.into_iter().filter(|d| d.split == Split::Test).collect()
    } else if let Some(input) = &args.input {
        let text = std::fs::read_to_string(input)
            .map_err(|source| Error::Io { path: input.to_owned(), source })?;
        text.lines()
            .enumerate()
            .map(|(i, line)| {
                Document::new(
                    format!("{}:{}", input.display(), i + 1),
                    None,
                    Split::Test,
                    line,
                    &tokenizer,
                )
            })
            .collect()
    } else {
        let stdin = std::io::stdin();
        let mut docs = Vec::new();
        for (i, line) in stdin.lock().lines().enumerate() {
            let line = line.map_err(|source| Error::Io { path: PathBuf::from("<stdin>"), source })?;
            docs.push(Document::new(format!("stdin:{}", i + 1), None, Split::Test, &line, &tokenizer));
        }
        docs
    };
    if docs.is_empty() {
        return Err(Error::InvalidParam("no documents to predict".to_owned()));
    }
    let refs: Vec<&Document> = docs.iter().collect();
    let predictions = bundle.predict_docs(&refs)?;
    let classes = &bundle.model.classes;
    let resolved = ResolvedRun {
        command: "predict".to_owned(),
        root: args.root.clone(),
        layout: args.layout.name().to_owned(),
        keep_digits: bundle.tokenizer().keep_digits,
        strip_accents: bundle.tokenizer().strip_accents,
        min_freq: 0,
        representation: bundle.representation.id(),
        unit: String::new(),
        n: 0,
        k: 0,
        weighting: String::new(),
        l2: bundle.model.meta.hyper.l2,
        tol: bundle.model.meta.hyper.tol,
        max_iters: bundle.model.meta.hyper.max_iters,
        bins: 0,
        seed: 0,
    };
    write_report(args.out.as_deref(), &resolved.hash(), |w| {
        write!(w, "doc_id,predicted")?;
        for class in classes {
            write!(w, ",score_{}", crate::report::csv_field(class))?;
        }
        writeln!(w)?;
        for (doc, (label, scores)) in docs.iter().zip(&predictions) {
            write!(w, "{},{}", crate::report::csv_field(&doc.id), crate::report::csv_field(label))?;
            for s in scores {
                write!(w, ",{:.6}", s)?;
            }
            writeln!(w)?;
        }
        Ok(())
    })
}

#[derive(Args)]
struct EvaluateArgs {
    #[command(flatten)]
    corpus: CorpusFlags,
    /// Trained model bundle
    #[arg(long)]
    model: PathBuf,
    /// Directory for metrics.csv and confusion.csv (default: print both)
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

fn cmd_evaluate(args: EvaluateArgs) -> Result<()> {
    let setup = args.corpus.resolve()?;
    let bundle = ModelBundle::load(&args.model)?;
    // the bundle's tokenizer settings define the model's input space
    let corpus = load_corpus(
        setup.required_root()?,
        setup.layout.to_layout(),
        bundle.tokenizer(),
    )?;
    let test: Vec<&Document> = corpus.test_docs().collect();
    if test.is_empty() {
        return Err(Error::InvalidParam("corpus has no test documents".to_owned()));
    }
    let gold: Vec<String> = test
        .iter()
        .map(|d| {
            d.label
                .clone()
                .ok_or_else(|| Error::InvalidParam(format!("test document `{}` has no label", d.id)))
        })
        .collect::<Result<_>>()?;
    let predictions: Vec<String> =
        bundle.predict_docs(&test)?.into_iter().map(|(label, _)| label).collect();
    let report = evaluate(&predictions, &gold)?;
    let hash = setup.resolved("evaluate").hash();
    match &args.out_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir)
                .map_err(|source| Error::Io { path: dir.to_owned(), source })?;
            write_report(Some(&dir.join("metrics.csv")), &hash, |w| report.write_metrics_csv(w))?;
            write_report(Some(&dir.join("confusion.csv")), &hash, |w| report.write_confusion_csv(w))?;
            println!("accuracy: {:.6} (n={})", report.accuracy, report.n_test);
            println!("reports written to {}", dir.display());
        }
        None => {
            write_report(None, &hash, |w| {
                report.write_metrics_csv(&mut *w)?;
                writeln!(w)?;
                report.write_confusion_csv(&mut *w)
            })?;
        }
    }
    Ok(())
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    corpus: CorpusFlags,
    /// Threshold grid: comma-separated values and a-b or a-b:step ranges
    #[arg(long, default_value = "1-10,20-100:10")]
    grid: String,
    #[arg(long)]
    l2: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    /// Output CSV file (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parse grids like `1-10,20-100:10,500`.
fn parse_grid(s: &str) -> Result<Vec<u64>> {
    let mut values = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let bad = || Error::InvalidParam(format!("bad grid element `{part}`"));
        if let Some((range, step)) = part.split_once(':') {
            let (a, b) = range.split_once('-').ok_or_else(bad)?;
            let (a, b): (u64, u64) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
            let step: u64 = step.parse().map_err(|_| bad())?;
            if step == 0 || b < a {
                return Err(bad());
            }
            values.extend((a..=b).step_by(step as usize));
        } else if let Some((a, b)) = part.split_once('-') {
            let (a, b): (u64, u64) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
            if b < a {
                return Err(bad());
            }
            values.extend(a..=b);
        } else {
            values.push(part.parse().map_err(|_| bad())?);
        }
    }
    if values.is_empty() {
        return Err(Error::InvalidParam("empty threshold grid".to_owned()));
    }
    Ok(values)
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let setup = args.corpus.resolve()?;
    let corpus = setup.load()?;
    let file = &setup.file;
    let hyper = Hyperparameters {
        l2: pick(args.l2, file.l2, 1.0),
        tol: pick(args.tol, file.tol, 1e-6),
        max_iters: pick(args.max_iters, file.max_iters, 1000),
    };
    let grid = parse_grid(&args.grid)?;
    let rows = threshold_sweep(&corpus, &grid, &hyper)?;
    let mut resolved = setup.resolved("sweep");
    resolved.l2 = hyper.l2;
    resolved.tol = hyper.tol;
    resolved.max_iters = hyper.max_iters;
    write_report(args.out.as_deref(), &resolved.hash(), |w| write_sweep_csv(&rows, w))
}

#[derive(Args)]
struct AblateArgs {
    #[command(flatten)]
    corpus: CorpusFlags,
    /// Semicolon-separated statistic subsets, e.g. `avg;std;avg+std`
    #[arg(
        long,
        default_value = "avg;std;min;max;prob;prop;min+max;avg+std;avg+std+min+max;prob+prop;avg+std+min+max+prob+prop"
    )]
    subsets: String,
    #[arg(long)]
    min_freq: Option<u64>,
    #[arg(long)]
    l2: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    /// Output CSV file (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_ablate(args: AblateArgs) -> Result<()> {
    let setup = args.corpus.resolve()?;
    let corpus = setup.load()?;
    let file = &setup.file;
    let min_freq = pick(args.min_freq, file.min_freq, 5);
    let hyper = Hyperparameters {
        l2: pick(args.l2, file.l2, 1.0),
        tol: pick(args.tol, file.tol, 1e-6),
        max_iters: pick(args.max_iters, file.max_iters, 1000),
    };
    let subsets: Vec<Vec<FeatureKind>> = args
        .subsets
        .split(';')
        .filter(|s| !s.trim().is_empty())
        .map(parse_subset)
        .collect::<Result<_>>()?;
    let rows = ablation_run(&corpus, &subsets, min_freq, &hyper)?;
    let mut resolved = setup.resolved("ablate");
    resolved.min_freq = min_freq;
    resolved.l2 = hyper.l2;
    resolved.tol = hyper.tol;
    resolved.max_iters = hyper.max_iters;
    write_report(args.out.as_deref(), &resolved.hash(), |w| write_ablation_csv(&rows, w))
}

#[derive(Args)]
struct InfogainArgs {
    #[command(flatten)]
    corpus: CorpusFlags,
    #[arg(long)]
    min_freq: Option<u64>,
    /// Equal-frequency bin count for discretization
    #[arg(long)]
    bins: Option<usize>,
    /// Seed for the cross-validation fold shuffle
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV file (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_infogain(args: InfogainArgs) -> Result<()> {
    let setup = args.corpus.resolve()?;
    let corpus = setup.load()?;
    let file = &setup.file;
    let min_freq = pick(args.min_freq, file.min_freq, 5);
    let bins = pick(args.bins, file.bins, 10);
    let seed = pick(args.seed, file.seed, 42);
    let (_, train_table, _) = ldr_tables(&corpus, min_freq)?;
    let labels = train_table.labels_required()?;
    let ranking = information_gain(&train_table, &labels, bins, seed)?;
    let mut resolved = setup.resolved("infogain");
    resolved.min_freq = min_freq;
    resolved.bins = bins;
    resolved.seed = seed;
    write_report(args.out.as_deref(), &resolved.hash(), |w| ranking.write_csv(w))
}

#[derive(Args)]
struct SignificanceArgs {
    /// Accuracy of system A
    #[arg(long)]
    acc_a: f64,
    /// Accuracy of system B
    #[arg(long)]
    acc_b: f64,
    /// Test-set size for both systems
    #[arg(long, conflicts_with_all = ["n_a", "n_b"])]
    n: Option<u64>,
    /// Test-set size for system A
    #[arg(long, required_unless_present = "n")]
    n_a: Option<u64>,
    /// Test-set size for system B
    #[arg(long, required_unless_present = "n")]
    n_b: Option<u64>,
}

fn cmd_significance(args: SignificanceArgs) -> Result<()> {
    let (n_a, n_b) = match args.n {
        Some(n) => (n, n),
        None => (args.n_a.unwrap(), args.n_b.unwrap()),
    };
    let z = significance_z(args.acc_a, args.acc_b, n_a, n_b)?;
    println!("{z:.3}");
    Ok(())
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    corpus: CorpusFlags,
    /// Document lengths to time, same syntax as --grid
    #[arg(long, default_value = "1000-10000:1000")]
    lengths: String,
    /// Timed trials per length (median reported)
    #[arg(long, default_value_t = 7)]
    trials: usize,
    #[arg(long)]
    min_freq: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV file (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    let setup = args.corpus.resolve()?;
    let file = &setup.file;
    let min_freq = pick(args.min_freq, file.min_freq, 5);
    let seed = pick(args.seed, file.seed, 42);
    // time against a real weight table when a corpus is given, otherwise
    // against the built-in synthetic one
    let beta = match &setup.root {
        Some(_) => ldr_tables(&setup.load()?, min_freq)?.0,
        None => {
            let corpus = synthetic_corpus(&SynthConfig { seed, ..SynthConfig::default() })?;
            ldr_tables(&corpus, 1)?.0
        }
    };
    let lengths: Vec<usize> = parse_grid(&args.lengths)?.into_iter().map(|v| v as usize).collect();
    let report = cost_benchmark(&beta, &lengths, args.trials, seed)?;
    let mut resolved = setup.resolved("bench");
    resolved.min_freq = min_freq;
    resolved.seed = seed;
    write_report(args.out.as_deref(), &resolved.hash(), |w| report.write_csv(w))
}

#[derive(Args)]
struct FetchArgs {
    /// Destination directory (default: $LDR_DATA_DIR or ./hispablogs-data)
    #[arg(long)]
    dest: Option<PathBuf>,
    /// Archive URL to download
    #[arg(long, default_value = DEFAULT_URL)]
    url: String,
}

fn cmd_fetch(args: FetchArgs) -> Result<()> {
    let dest = args
        .dest
        .or_else(|| std::env::var_os(DATA_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("hispablogs-data"));
    let count = fetch_data(&args.url, &dest)?;
    println!("extracted {count} documents into {}", dest.display());
    Ok(())
}
