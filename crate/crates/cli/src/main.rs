//! `spamkit`: generate, split, train, predict, evaluate and inspect.

mod files;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use spamkit_core::featurizer::check_disjoint;
use spamkit_core::metrics::evaluate;
use spamkit_core::{
    build_feature_space, generate_synthetic, stratified_split, Corpus, FeatureSpace, Hyperparameters, Lexicon,
    LexiconKind, ModelKind, NormalizationMap, Preprocessor, Selector, SyntheticSpec, TrainedModel, WordLexicon,
};

const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(name = "spamkit", version, about = "Spam review classification for Vietnamese product reviews")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a labeled synthetic corpus.
    Gen(GenArgs),
    /// Stratified train/test split of a labeled corpus.
    Split(SplitArgs),
    /// Select features and train a classifier.
    Train(TrainArgs),
    /// Label every review of a corpus.
    Predict(PredictArgs),
    /// Score a model on a labeled corpus.
    Evaluate(EvaluateArgs),
    /// Show the selected terms with their scores.
    Features(FeaturesArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 500)]
    n_per_class: usize,
    /// Generator spec file (default: embedded spec)
    #[arg(long)]
    synthetic_spec: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SplitArgs {
    #[arg(long)]
    corpus: PathBuf,
    /// Fraction of each class that goes to the training part
    #[arg(long, default_value_t = 0.5)]
    fraction: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    train_out: PathBuf,
    #[arg(long)]
    test_out: PathBuf,
}

#[derive(Args)]
struct PreprocessArgs {
    /// Teencode map, `source\treplacement` per line
    #[arg(long)]
    normalize_map: Option<PathBuf>,
    /// Word list for segmentation, one word per line
    #[arg(long)]
    segment_lexicon: Option<PathBuf>,
    /// Skip teencode replacement
    #[arg(long)]
    no_normalize: bool,
}

#[derive(Args)]
struct LexiconArgs {
    #[arg(long)]
    opinion_lexicon: Option<PathBuf>,
    #[arg(long)]
    question_lexicon: Option<PathBuf>,
    /// Use only the selected terms as features
    #[arg(long, conflicts_with_all = ["opinion_lexicon", "question_lexicon"])]
    no_lexicon_features: bool,
}

#[derive(Args)]
struct SelectionArgs {
    #[arg(long, value_enum, default_value_t = SelectorArg::Chi2)]
    selector: SelectorArg,
    /// Number of terms to keep
    #[arg(long, default_value_t = 500)]
    k: usize,
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[command(flatten)]
    selection: SelectionArgs,
    #[arg(long, value_enum, default_value_t = ModelArg::Svm)]
    model: ModelArg,
    /// L2 regularization strength (lr, svm)
    #[arg(long)]
    lambda: Option<f64>,
    /// Initial step size (lr)
    #[arg(long)]
    lr_rate: Option<f64>,
    /// Training epochs (lr, svm)
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    model_out: PathBuf,
    #[command(flatten)]
    preprocess: PreprocessArgs,
    #[command(flatten)]
    lexicons: LexiconArgs,
}

#[derive(Args)]
struct PredictArgs {
    #[arg(long)]
    model_in: PathBuf,
    #[arg(long)]
    corpus: PathBuf,
    /// Output file (default: standard output)
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    preprocess: PreprocessArgs,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    model_in: PathBuf,
    #[arg(long)]
    corpus: PathBuf,
    /// Also write `metric\tvalue` lines to this file
    #[arg(long)]
    report_out: Option<PathBuf>,
    #[command(flatten)]
    preprocess: PreprocessArgs,
}

#[derive(Args)]
struct FeaturesArgs {
    /// Read the terms from a trained model
    #[arg(long, conflicts_with = "corpus", required_unless_present = "corpus")]
    model_in: Option<PathBuf>,
    /// Select terms from a labeled corpus
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[command(flatten)]
    selection: SelectionArgs,
    /// Print at most this many terms
    #[arg(long)]
    top: Option<usize>,
    #[command(flatten)]
    preprocess: PreprocessArgs,
    #[command(flatten)]
    lexicons: LexiconArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum SelectorArg {
    Chi2,
    Oddsratio,
}

impl From<SelectorArg> for Selector {
    fn from(s: SelectorArg) -> Self {
        match s {
            SelectorArg::Chi2 => Selector::ChiSquare,
            SelectorArg::Oddsratio => Selector::OddsRatio,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Svm,
    Lr,
    Nb,
}

impl From<ModelArg> for ModelKind {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Svm => ModelKind::Svm,
            ModelArg::Lr => ModelKind::Logistic,
            ModelArg::Nb => ModelKind::NaiveBayes,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("spamkit: error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Gen(a) => gen(a),
        Command::Split(a) => split(a),
        Command::Train(a) => train(a),
        Command::Predict(a) => predict(a),
        Command::Evaluate(a) => evaluate_cmd(a),
        Command::Features(a) => features(a),
    }
}

fn load_corpus(path: &Path) -> Result<Corpus> {
    files::load(path, Corpus::parse_str)
}

fn load_labeled(path: &Path) -> Result<Corpus> {
    let corpus = load_corpus(path)?;
    corpus.require_labeled().with_context(|| format!("{}", path.display()))?;
    Ok(corpus)
}

fn load_model(path: &Path) -> Result<TrainedModel> {
    files::load(path, TrainedModel::parse_str)
}

fn corpus_file(header: &str, corpus: &Corpus) -> String {
    format!("# {header}\n{}", corpus.to_tsv())
}

fn gen(a: GenArgs) -> Result<()> {
    let spec = match files::resolve(a.synthetic_spec.as_deref(), "synthetic_spec.txt") {
        Some(p) => files::load(&p, SyntheticSpec::parse_str)?,
        None => SyntheticSpec::default(),
    };
    let corpus = generate_synthetic(a.n_per_class, &spec, a.seed)?;
    let header = format!("spamkit gen seed={} n_per_class={}", a.seed, a.n_per_class);
    files::write_atomic(&a.out, &corpus_file(&header, &corpus))?;
    eprintln!("wrote {} reviews to {} (seed {})", corpus.len(), a.out.display(), a.seed);
    Ok(())
}

fn split(a: SplitArgs) -> Result<()> {
    let corpus = load_labeled(&a.corpus)?;
    let (train, test) = stratified_split(&corpus, a.fraction, a.seed)?;
    let header = |part: &str| format!("spamkit split seed={} fraction={} part={part}", a.seed, a.fraction);
    files::write_atomic(&a.train_out, &corpus_file(&header("train"), &train))?;
    files::write_atomic(&a.test_out, &corpus_file(&header("test"), &test))?;
    eprintln!(
        "split {} reviews into {} train / {} test (seed {})",
        corpus.len(),
        train.len(),
        test.len(),
        a.seed
    );
    Ok(())
}

/// Opinion and question lexicons, or `None` when lexicon features are off.
fn feature_lexicons(a: &LexiconArgs) -> Result<Option<(Lexicon, Lexicon)>> {
    if a.no_lexicon_features {
        return Ok(None);
    }
    let load = |explicit: Option<&Path>, name: &str, kind: LexiconKind| -> Result<Lexicon> {
        match files::resolve(explicit, name) {
            Some(p) => files::load(&p, |s| Lexicon::parse_str(kind, s)),
            None => Ok(Lexicon::builtin(kind)),
        }
    };
    let opinion = load(a.opinion_lexicon.as_deref(), "opinion_lexicon.txt", LexiconKind::Opinion)?;
    let question = load(a.question_lexicon.as_deref(), "question_lexicon.txt", LexiconKind::Question)?;
    check_disjoint(&opinion, &question)?;
    Ok(Some((opinion, question)))
}

fn preprocessor(a: &PreprocessArgs, lexicons: &[&Lexicon]) -> Result<Preprocessor> {
    let map = if a.no_normalize {
        NormalizationMap::new()
    } else {
        match files::resolve(a.normalize_map.as_deref(), "normalize_map.tsv") {
            Some(p) => files::load(&p, NormalizationMap::parse_str)?,
            None => NormalizationMap::builtin(),
        }
    };
    let lexicon = match files::resolve(a.segment_lexicon.as_deref(), "segment_lexicon.txt") {
        Some(p) => files::load(&p, WordLexicon::parse_str)?,
        None => WordLexicon::builtin(),
    };
    Ok(Preprocessor::new(map, lexicon).with_feature_lexicons(lexicons.iter().copied())?)
}

/// Preprocessor matching the one used at training time for `space`.
fn preprocessor_for(a: &PreprocessArgs, space: &FeatureSpace) -> Result<Preprocessor> {
    let opinion = Lexicon::new(LexiconKind::Opinion, space.opinion_words())?;
    let question = Lexicon::new(LexiconKind::Question, space.question_words())?;
    preprocessor(a, &[&opinion, &question])
}

fn select(
    corpus: &Corpus,
    selection: &SelectionArgs,
    preprocess: &PreprocessArgs,
    lexicons: &LexiconArgs,
) -> Result<(FeatureSpace, Vec<spamkit_core::TokenizedReview>)> {
    let lex = feature_lexicons(lexicons)?;
    let lex_refs: Vec<&Lexicon> = lex.iter().flat_map(|(o, q)| [o, q]).collect();
    let docs = preprocessor(preprocess, &lex_refs)?.tokenize_corpus(corpus);
    let space = build_feature_space(
        &docs,
        selection.selector.into(),
        selection.k,
        lex.as_ref().map(|(o, _)| o),
        lex.as_ref().map(|(_, q)| q),
    )?;
    Ok((space, docs))
}

fn hyperparameters(a: &TrainArgs) -> Result<Hyperparameters> {
    let mut hyper = Hyperparameters::defaults(a.model.into());
    match &mut hyper {
        Hyperparameters::NaiveBayes { .. } => {
            if a.lambda.is_some() || a.lr_rate.is_some() || a.epochs.is_some() {
                bail!("--lambda, --lr-rate and --epochs do not apply to --model nb");
            }
        }
        Hyperparameters::Logistic {
            lambda,
            learning_rate,
            epochs,
        } => {
            *lambda = a.lambda.unwrap_or(*lambda);
            *learning_rate = a.lr_rate.unwrap_or(*learning_rate);
            *epochs = a.epochs.unwrap_or(*epochs);
        }
        Hyperparameters::Svm { lambda, epochs } => {
            if a.lr_rate.is_some() {
                bail!("--lr-rate does not apply to --model svm");
            }
            *lambda = a.lambda.unwrap_or(*lambda);
            *epochs = a.epochs.unwrap_or(*epochs);
        }
    }
    Ok(hyper)
}

fn train(a: TrainArgs) -> Result<()> {
    let hyper = hyperparameters(&a)?;
    let corpus = load_labeled(&a.corpus)?;
    let (space, docs) = select(&corpus, &a.selection, &a.preprocess, &a.lexicons)?;
    let model = TrainedModel::train(space, &docs, hyper, a.seed)?;
    files::write_atomic(&a.model_out, &model.to_text())?;

    let space = model.space();
    let mut summary = String::new();
    writeln!(summary, "model\t{}", model.kind().as_str())?;
    writeln!(summary, "seed\t{}", model.seed())?;
    for (name, value) in hyper.entries() {
        writeln!(summary, "{name}\t{value}")?;
    }
    writeln!(summary, "selector\t{}", space.selector().as_str())?;
    writeln!(summary, "k\t{}", space.k())?;
    writeln!(summary, "terms\t{}", space.selected_terms().len())?;
    writeln!(summary, "dimension\t{}", space.dimension())?;
    writeln!(summary, "train_docs\t{}", docs.len())?;
    writeln!(summary, "model_out\t{}", a.model_out.display())?;
    print!("{summary}");
    Ok(())
}

fn predict(a: PredictArgs) -> Result<()> {
    let model = load_model(&a.model_in)?;
    let corpus = load_corpus(&a.corpus)?;
    let pre = preprocessor_for(&a.preprocess, model.space())?;
    let mut out = String::new();
    for review in corpus.iter() {
        let (label, score) = model.predict(&pre.tokenize(review))?;
        writeln!(out, "{}\t{}\t{:?}", review.id, label, score)?;
    }
    match &a.out {
        Some(path) => files::write_atomic(path, &out)?,
        None => print!("{out}"),
    }
    eprintln!("predicted {} reviews (model seed {})", corpus.len(), model.seed());
    Ok(())
}

fn evaluate_cmd(a: EvaluateArgs) -> Result<()> {
    let model = load_model(&a.model_in)?;
    let corpus = load_labeled(&a.corpus)?;
    let pre = preprocessor_for(&a.preprocess, model.space())?;
    let report = evaluate(&model, &pre.tokenize_corpus(&corpus))?;
    if let Some(path) = &a.report_out {
        let text = format!("model\t{}\nseed\t{}\n{}", model.kind().as_str(), model.seed(), report.to_key_values());
        files::write_atomic(path, &text)?;
    }
    println!("model {} (seed {})", model.kind().as_str(), model.seed());
    print!("{}", report.to_table());
    Ok(())
}

fn features(a: FeaturesArgs) -> Result<()> {
    let space = match (&a.model_in, &a.corpus) {
        (Some(path), _) => load_model(path)?.space().clone(),
        (None, Some(path)) => select(&load_labeled(path)?, &a.selection, &a.preprocess, &a.lexicons)?.0,
        (None, None) => unreachable!("clap requires one of --model-in / --corpus"),
    };
    let terms = space.selected_terms();
    let shown = a.top.map_or(terms.len(), |n| n.min(terms.len()));
    let mut out = String::new();
    writeln!(out, "# selector={} k={} terms={}", space.selector().as_str(), space.k(), terms.len())?;
    for (rank, t) in terms[..shown].iter().enumerate() {
        writeln!(out, "{}\t{}\t{:?}\t{}", rank + 1, t.term, t.score, t.doc_freq)?;
    }
    print!("{out}");
    Ok(())
}
