//! File-based pipeline over the litmine library. Every stage reads and
//! writes plain files (or stdin/stdout via `-`), logs to stderr, and is
//! byte-deterministic on its primary output given the same inputs, flags,
//! and seed. Errors print one `ERROR:<stage>: ...` line and exit non-zero.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::str::FromStr;
use std::time::Instant;

use clap::{ArgAction, Args, Parser, Subcommand};
use log::{info, warn};
use rayon::prelude::*;

use litmine::classify::{
    train_linear, train_nb, Classifier, FeatureMode, LinearConfig, Loss, Model, Penalty,
};
use litmine::eval::{run_trials, Average, ModelSpec, ScoreReport, TrialConfig};
use litmine::features::{fit_vocabulary, preprocess, TfidfConfig};
use litmine::ingest::{
    dedupe, generate_pubmed_query, parse_medline, parse_tsv_corpus, serialize_medline,
    write_tsv_corpus, Document, QuerySpec,
};
use litmine::ner::{compile_dictionary, extract_corpus, parse_dictionary_path, EntityType};
use litmine::store::EntityStore;
use litmine::synth::{generate, SynthSpec};
use litmine::textproc::Stoplist;
use litmine::{assoc, Error, Result};

#[derive(Parser)]
#[command(
    name = "litmine",
    version,
    about = "Mine disease literature: query generation, entity extraction, \
             association rules, and text classification as chainable file stages"
)]
struct Cli {
    /// Flat key=value config file; command-line flags override its values
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<String>,

    /// Seed for anything randomized [default: 42] (config key: seed)
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,

    /// Worker threads, 0 means one per core [default: 0] (config key: jobs)
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    /// More logging per repeat: -v debug, -vv trace
    #[arg(short, long, global = true, action = ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print one PubMed search string per disease term
    Querygen {
        /// Disease term; repeat the flag for several, order is kept
        #[arg(long, required = true, value_name = "TERM")]
        disease: Vec<String>,
        /// Start of the publication window, YYYY/MM/DD [default: 2000/01/01] (config key: from)
        #[arg(long, value_name = "DATE")]
        from: Option<String>,
        /// End of the publication window, YYYY/MM/DD [default: 2020/12/01] (config key: to)
        #[arg(long, value_name = "DATE")]
        to: Option<String>,
        /// Publication language [default: English] (config key: language)
        #[arg(long, value_name = "LANG")]
        language: Option<String>,
        /// Output path, - for stdout
        #[arg(long, default_value = "-", value_name = "PATH")]
        out: String,
    },

    /// Read a corpus, drop duplicates, and write it back out normalized
    Ingest {
        /// Input path, - for stdin
        #[arg(long, default_value = "-", value_name = "PATH")]
        input: String,
        /// Input format: medline or tsv [default: medline] (config key: format)
        #[arg(long, value_name = "FMT")]
        format: Option<String>,
        /// The TSV input has no header row
        #[arg(long)]
        no_header: bool,
        /// Output format: tsv or medline [default: tsv] (config key: emit)
        #[arg(long, value_name = "FMT")]
        emit: Option<String>,
        /// Output path, - for stdout
        #[arg(long, default_value = "-", value_name = "PATH")]
        out: String,
    },

    /// Run dictionary NER over a corpus and write the mentions table
    Extract {
        /// Corpus path, - for stdin
        #[arg(long, default_value = "-", value_name = "PATH")]
        corpus: String,
        /// Corpus format: tsv or medline [default: tsv] (config key: format)
        #[arg(long, value_name = "FMT")]
        format: Option<String>,
        /// The TSV corpus has no header row
        #[arg(long)]
        no_header: bool,
        /// Dictionary file: entity_type \t canonical \t synonym|synonym...
        #[arg(long, value_name = "PATH")]
        dictionary: String,
        /// Output path, - for stdout
        #[arg(long, default_value = "-", value_name = "PATH")]
        out: String,
    },

    /// List entities mentioned across several cancer types
    QueryCommon {
        /// Mentions table from `extract`, - for stdin
        #[arg(long, default_value = "-", value_name = "PATH")]
        mentions: String,
        /// Keep entities seen in at least this many cancers [default: 2] (config key: min_cancers)
        #[arg(long, value_name = "N")]
        min_cancers: Option<usize>,
        /// Restrict to one entity type, e.g. gene
        #[arg(long = "type", value_name = "TYPE")]
        entity_type: Option<String>,
        /// Emit TSV instead of an aligned table
        #[arg(long)]
        tsv: bool,
        /// Output path, - for stdout
        #[arg(long, default_value = "-", value_name = "PATH")]
        out: String,
    },

    /// Mine association rules from the mentions table
    Mine {
        /// Mentions table from `extract`, - for stdin
        #[arg(long, default_value = "-", value_name = "PATH")]
        mentions: String,
        /// Minimum itemset support [default: 0.05] (config key: min_support)
        #[arg(long, value_name = "F")]
        min_support: Option<f64>,
        /// Minimum rule confidence [default: 0.4] (config key: min_confidence)
        #[arg(long, value_name = "F")]
        min_confidence: Option<f64>,
        /// Minimum items in a rule, antecedent plus consequent [default: 3] (config key: min_items)
        #[arg(long, value_name = "N")]
        min_items: Option<usize>,
        /// Emit aligned `a -> b -> c` chains instead of TSV
        #[arg(long)]
        chains: bool,
        /// Output path, - for stdout
        #[arg(long, default_value = "-", value_name = "PATH")]
        out: String,
    },

    /// Train a classifier on a fully labeled corpus and save the model
    Train {
        /// Corpus path, - for stdin
        #[arg(long, default_value = "-", value_name = "PATH")]
        corpus: String,
        /// Corpus format: tsv or medline [default: tsv] (config key: format)
        #[arg(long, value_name = "FMT")]
        format: Option<String>,
        /// The TSV corpus has no header row
        #[arg(long)]
        no_header: bool,
        /// Classifier: nb, logistic, or hinge [default: nb] (config key: model)
        #[arg(long, value_name = "KIND")]
        model: Option<String>,
        #[command(flatten)]
        learn: LearnArgs,
        /// Stopword list path, one word per line [default: bundled English list]
        #[arg(long, value_name = "PATH")]
        stoplist: Option<String>,
        /// Output path for the model file, - for stdout
        #[arg(long, default_value = "-", value_name = "PATH")]
        out: String,
    },

    /// Label a corpus with a saved model
    Predict {
        /// Corpus path, - for stdin
        #[arg(long, default_value = "-", value_name = "PATH")]
        corpus: String,
        /// Corpus format: tsv or medline [default: tsv] (config key: format)
        #[arg(long, value_name = "FMT")]
        format: Option<String>,
        /// The TSV corpus has no header row
        #[arg(long)]
        no_header: bool,
        /// Model file written by `train`
        #[arg(long, value_name = "PATH")]
        model: String,
        /// Append one score column per class
        #[arg(long)]
        scores: bool,
        /// Stopword list path, one word per line [default: bundled English list]
        #[arg(long, value_name = "PATH")]
        stoplist: Option<String>,
        /// Output path, - for stdout
        #[arg(long, default_value = "-", value_name = "PATH")]
        out: String,
    },

    /// Score classifiers over repeated train/test splits
    Evaluate {
        /// Corpus path, - for stdin
        #[arg(long, default_value = "-", value_name = "PATH")]
        corpus: String,
        /// Corpus format: tsv or medline [default: tsv] (config key: format)
        #[arg(long, value_name = "FMT")]
        format: Option<String>,
        /// The TSV corpus has no header row
        #[arg(long)]
        no_header: bool,
        /// Classifier to score; repeatable [default: nb logistic hinge] (config key: model)
        #[arg(long, value_name = "KIND")]
        model: Vec<String>,
        /// Number of trials, seeds seed, seed+1, ... [default: 5] (config key: trials)
        #[arg(long, value_name = "N")]
        trials: Option<usize>,
        /// Fraction of documents in the training side [default: 0.7] (config key: fraction)
        #[arg(long, value_name = "F")]
        fraction: Option<f64>,
        /// Multiclass averaging: macro or micro [default: macro] (config key: average)
        #[arg(long, value_name = "MODE")]
        average: Option<String>,
        #[command(flatten)]
        learn: LearnArgs,
        /// Stopword list path, one word per line [default: bundled English list]
        #[arg(long, value_name = "PATH")]
        stoplist: Option<String>,
        /// Output path, - for stdout
        #[arg(long, default_value = "-", value_name = "PATH")]
        out: String,
    },

    /// Emit a labeled synthetic benchmark corpus as TSV
    Synth {
        /// Number of classes [default: 10] (config key: classes)
        #[arg(long, value_name = "N")]
        classes: Option<usize>,
        /// Documents per class [default: 60] (config key: docs_per_class)
        #[arg(long, value_name = "N")]
        docs_per_class: Option<usize>,
        /// Output path, - for stdout
        #[arg(long, default_value = "-", value_name = "PATH")]
        out: String,
    },
}

/// Knobs shared by `train` and `evaluate`.
#[derive(Args)]
struct LearnArgs {
    /// Laplace smoothing for nb [default: 1.0] (config key: alpha)
    #[arg(long, value_name = "F")]
    alpha: Option<f64>,
    /// Give nb tf-idf features instead of counts (config key: tfidf)
    #[arg(long)]
    tfidf: bool,
    /// Inverse regularization strength [default: 1.0 for logistic, 100.0 for hinge] (config key: c)
    #[arg(long, value_name = "F")]
    c: Option<f64>,
    /// Initial learning rate for linear models [default: 1.0] (config key: eta0)
    #[arg(long, value_name = "F")]
    eta0: Option<f64>,
    /// Gradient descent epochs for linear models [default: 50] (config key: epochs)
    #[arg(long, value_name = "N")]
    epochs: Option<usize>,
    /// Penalty for linear models: l2 or l1 [default: l2 for logistic, l1 for hinge] (config key: penalty)
    #[arg(long, value_name = "P")]
    penalty: Option<String>,
    /// Drop terms appearing in fewer documents than this [default: 2] (config key: min_df)
    #[arg(long, value_name = "N")]
    min_df: Option<usize>,
    /// Use unigrams only, no bigrams (config key: bigrams)
    #[arg(long)]
    no_bigrams: bool,
    /// Skip L2 normalization of tf-idf vectors (config key: l2_normalize)
    #[arg(long)]
    no_normalize: bool,
}

/// Config-file values resolved behind flags: a set flag wins, then the
/// file, then the built-in default.
struct Cfg(HashMap<String, String>);

impl Cfg {
    fn load(path: Option<&str>) -> Result<Cfg> {
        let map = match path {
            Some(p) => litmine::config::last_wins(litmine::config::parse_config_path(p)?),
            None => HashMap::new(),
        };
        Ok(Cfg(map))
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|_| Error::invalid(format!("config key {key}: cannot parse {raw:?}"))),
        }
    }

    fn resolve<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T> {
        match flag {
            Some(v) => Ok(v),
            None => Ok(self.get(key)?.unwrap_or(default)),
        }
    }

    /// For `--no-x` style flags: the flag forces false, otherwise the
    /// config key (plain x) decides, otherwise the default.
    fn resolve_negated(&self, no_flag: bool, key: &str, default: bool) -> Result<bool> {
        if no_flag {
            return Ok(false);
        }
        match self.0.get(key).map(String::as_str) {
            None => Ok(default),
            Some("true") | Some("1") => Ok(true),
            Some("false") | Some("0") => Ok(false),
            Some(raw) => Err(Error::invalid(format!(
                "config key {key}: expected true/false, got {raw:?}"
            ))),
        }
    }

    fn resolve_enabled(&self, flag: bool, key: &str) -> Result<bool> {
        if flag {
            return Ok(true);
        }
        self.resolve_negated(false, key, false)
    }
}

enum CorpusFormat {
    Medline,
    Tsv,
}

impl CorpusFormat {
    fn parse(s: &str) -> Result<Self> {
        match s {
            "medline" => Ok(CorpusFormat::Medline),
            "tsv" => Ok(CorpusFormat::Tsv),
            _ => Err(Error::invalid(format!(
                "unknown corpus format {s:?}: expected medline or tsv"
            ))),
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum ModelKind {
    Nb,
    Logistic,
    Hinge,
}

impl ModelKind {
    fn parse(s: &str) -> Result<Self> {
        match s {
            "nb" => Ok(ModelKind::Nb),
            "logistic" => Ok(ModelKind::Logistic),
            "hinge" => Ok(ModelKind::Hinge),
            _ => Err(Error::invalid(format!(
                "unknown model {s:?}: expected nb, logistic, or hinge"
            ))),
        }
    }

    fn name(self) -> &'static str {
        match self {
            ModelKind::Nb => "nb",
            ModelKind::Logistic => "logistic",
            ModelKind::Hinge => "hinge",
        }
    }
}

fn open_input(path: &str) -> Result<Box<dyn BufRead>> {
    if path == "-" {
        Ok(Box::new(std::io::stdin().lock()))
    } else {
        let file = File::open(path)
            .map_err(|e| Error::invalid(format!("cannot open {path:?}: {e}")))?;
        Ok(Box::new(BufReader::new(file)))
    }
}

fn open_output(path: &str) -> Result<BufWriter<Box<dyn Write>>> {
    let raw: Box<dyn Write> = if path == "-" {
        Box::new(std::io::stdout().lock())
    } else {
        Box::new(
            File::create(path)
                .map_err(|e| Error::invalid(format!("cannot create {path:?}: {e}")))?,
        )
    };
    Ok(BufWriter::new(raw))
}

fn read_corpus(path: &str, format: &CorpusFormat, has_header: bool) -> Result<Vec<Document>> {
    let reader = open_input(path)?;
    match format {
        CorpusFormat::Medline => {
            let parsed = parse_medline(reader)?;
            if parsed.skipped_no_abstract > 0 {
                info!(
                    "skipped {} record(s) without an abstract",
                    parsed.skipped_no_abstract
                );
            }
            Ok(parsed.docs)
        }
        CorpusFormat::Tsv => parse_tsv_corpus(reader, has_header),
    }
}

fn load_stoplist(path: Option<&str>) -> Result<Stoplist> {
    match path {
        Some(p) => Stoplist::from_path(p),
        None => Ok(Stoplist::default_english()),
    }
}

/// Preprocess every document body in parallel, keeping corpus order.
fn stems_of(docs: &[Document], stoplist: &Stoplist) -> Vec<Vec<String>> {
    docs.par_iter()
        .map(|d| preprocess(&d.body, stoplist))
        .collect()
}

/// Left-aligned columns separated by two spaces, trailing space trimmed.
fn render_aligned(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut width = vec![0usize; cols];
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            width[i] = width[i].max(cell.len());
        }
    }
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            line.push_str(cell);
            if i + 1 < row.len() {
                for _ in cell.len()..width[i] {
                    line.push(' ');
                }
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn log_elapsed(stage: &str, started: Instant) {
    let elapsed = started.elapsed();
    info!(
        "{stage} finished in {} s {:.3} ms",
        elapsed.as_secs(),
        f64::from(elapsed.subsec_nanos()) / 1e6,
    );
}

fn cmd_querygen(
    cfg: &Cfg,
    disease: &[String],
    from: Option<String>,
    to: Option<String>,
    language: Option<String>,
    out: &str,
) -> Result<()> {
    let from = cfg.resolve(from, "from", "2000/01/01".to_string())?;
    let to = cfg.resolve(to, "to", "2020/12/01".to_string())?;
    let language = cfg.resolve(language, "language", "English".to_string())?;
    let mut writer = open_output(out)?;
    for term in disease {
        let spec = QuerySpec::from_strs(term, &from, &to, &language)?;
        writeln!(writer, "{}", generate_pubmed_query(&spec)?)?;
    }
    writer.flush()?;
    Ok(())
}

fn cmd_ingest(
    cfg: &Cfg,
    input: &str,
    format: Option<String>,
    no_header: bool,
    emit: Option<String>,
    out: &str,
) -> Result<()> {
    let format = CorpusFormat::parse(&cfg.resolve(format, "format", "medline".to_string())?)?;
    let emit = CorpusFormat::parse(&cfg.resolve(emit, "emit", "tsv".to_string())?)?;
    let docs = read_corpus(input, &format, !no_header)?;
    let before = docs.len();
    let (docs, dropped) = dedupe(docs);
    info!("read {before} document(s), dropped {dropped} duplicate(s)");
    let mut writer = open_output(out)?;
    match emit {
        CorpusFormat::Tsv => write_tsv_corpus(&docs, &mut writer, true)?,
        CorpusFormat::Medline => {
            let labeled = docs.iter().filter(|d| d.label.is_some()).count();
            if labeled > 0 {
                warn!("medline output drops the label column ({labeled} document(s) labeled)");
            }
            serialize_medline(&docs, &mut writer)?;
        }
    }
    writer.flush()?;
    Ok(())
}

fn cmd_extract(
    cfg: &Cfg,
    corpus: &str,
    format: Option<String>,
    no_header: bool,
    dictionary: &str,
    out: &str,
) -> Result<()> {
    let format = CorpusFormat::parse(&cfg.resolve(format, "format", "tsv".to_string())?)?;
    let docs = read_corpus(corpus, &format, !no_header)?;
    let entries = parse_dictionary_path(dictionary)?;
    let matcher = compile_dictionary(&entries)?;
    info!(
        "dictionary: {} entries, {} surface patterns",
        entries.len(),
        matcher.pattern_count()
    );
    let mentions = extract_corpus(&docs, &matcher);
    info!(
        "extracted {} mention(s) from {} document(s)",
        mentions.len(),
        docs.len()
    );
    let store = EntityStore::from_mentions(mentions);
    let mut writer = open_output(out)?;
    store.save(&mut writer)?;
    writer.flush()?;
    Ok(())
}

fn cmd_query_common(
    cfg: &Cfg,
    mentions: &str,
    min_cancers: Option<usize>,
    entity_type: Option<String>,
    tsv: bool,
    out: &str,
) -> Result<()> {
    let min_cancers = cfg.resolve(min_cancers, "min_cancers", 2)?;
    let store = EntityStore::load(open_input(mentions)?)?;
    let wanted = entity_type.as_deref().map(EntityType::new).transpose()?;
    let rows = store.common_entities(wanted.as_ref(), min_cancers)?;
    info!("{} mention(s), {} shared entities", store.len(), rows.len());
    let mut writer = open_output(out)?;
    if tsv {
        writeln!(writer, "entity_type\tcanonical\tcancers")?;
        for row in &rows {
            writeln!(
                writer,
                "{}\t{}\t{}",
                row.entity_type.as_str(),
                row.canonical,
                row.cancers.join("|"),
            )?;
        }
    } else {
        let mut table = vec![vec![
            "type".to_string(),
            "entity".to_string(),
            "cancers".to_string(),
        ]];
        for row in &rows {
            table.push(vec![
                row.entity_type.as_str().to_string(),
                row.canonical.clone(),
                row.cancers.join(", "),
            ]);
        }
        write!(writer, "{}", render_aligned(&table))?;
    }
    writer.flush()?;
    Ok(())
}

fn cmd_mine(
    cfg: &Cfg,
    mentions: &str,
    min_support: Option<f64>,
    min_confidence: Option<f64>,
    min_items: Option<usize>,
    chains: bool,
    out: &str,
) -> Result<()> {
    let min_support = cfg.resolve(min_support, "min_support", 0.05)?;
    let min_confidence = cfg.resolve(min_confidence, "min_confidence", 0.4)?;
    let min_items = cfg.resolve(min_items, "min_items", 3)?;
    let store = EntityStore::load(open_input(mentions)?)?;
    let transactions = store.to_transactions();
    let frequent = assoc::frequent_itemsets(&transactions, min_support)?;
    let rules = assoc::generate_rules(&frequent, min_confidence);
    let rules = assoc::filter_rules(rules, min_items);
    info!(
        "{} transaction(s), {} frequent itemset(s), {} rule(s) kept",
        transactions.len(),
        frequent.len(),
        rules.len()
    );
    let mut writer = open_output(out)?;
    if chains {
        let mut table = vec![vec![
            "support".to_string(),
            "confidence".to_string(),
            "lift".to_string(),
            "rule".to_string(),
        ]];
        for rule in &rules {
            table.push(vec![
                format!("{:.9}", rule.support),
                format!("{:.9}", rule.confidence),
                format!("{:.9}", rule.lift),
                assoc::render_chain(rule),
            ]);
        }
        write!(writer, "{}", render_aligned(&table))?;
    } else {
        assoc::write_rules(&rules, &mut writer)?;
    }
    writer.flush()?;
    Ok(())
}

/// Everything the learn flags plus config resolve to. `c` stays unset
/// until the loss is known: the L1 default must be far weaker than the
/// L2 one or the per-step soft threshold zeroes every weight.
struct LearnSettings {
    alpha: f64,
    tfidf: bool,
    c: Option<f64>,
    eta0: f64,
    epochs: usize,
    penalty: Option<Penalty>,
    feature: TfidfConfig,
}

impl LearnSettings {
    fn resolve(cfg: &Cfg, learn: &LearnArgs) -> Result<Self> {
        let penalty = match cfg.resolve(learn.penalty.clone(), "penalty", String::new())? {
            s if s.is_empty() => None,
            s => Some(Penalty::parse(&s)?),
        };
        Ok(LearnSettings {
            alpha: cfg.resolve(learn.alpha, "alpha", 1.0)?,
            tfidf: cfg.resolve_enabled(learn.tfidf, "tfidf")?,
            c: match learn.c {
                Some(v) => Some(v),
                None => cfg.get("c")?,
            },
            eta0: cfg.resolve(learn.eta0, "eta0", 1.0)?,
            epochs: cfg.resolve(learn.epochs, "epochs", 50)?,
            penalty,
            feature: TfidfConfig {
                min_df: cfg.resolve(learn.min_df, "min_df", 2)?,
                bigrams: cfg.resolve_negated(learn.no_bigrams, "bigrams", true)?,
                l2_normalize: cfg.resolve_negated(learn.no_normalize, "l2_normalize", true)?,
            },
        })
    }

    fn linear_config(&self, kind: ModelKind, seed: u64) -> LinearConfig {
        let (loss, default_penalty, default_c) = match kind {
            ModelKind::Logistic => (Loss::Logistic, Penalty::L2, 1.0),
            ModelKind::Hinge => (Loss::Hinge, Penalty::L1, 100.0),
            ModelKind::Nb => unreachable!("nb is not a linear model"),
        };
        LinearConfig {
            loss,
            penalty: self.penalty.unwrap_or(default_penalty),
            c: self.c.unwrap_or(default_c),
            eta0: self.eta0,
            epochs: self.epochs,
            seed,
        }
    }

    fn model_spec(&self, kind: ModelKind, seed: u64) -> ModelSpec {
        match kind {
            ModelKind::Nb => ModelSpec::Nb {
                alpha: self.alpha,
                tfidf: self.tfidf,
            },
            _ => ModelSpec::Linear(self.linear_config(kind, seed)),
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_train(
    cfg: &Cfg,
    corpus: &str,
    format: Option<String>,
    no_header: bool,
    model: Option<String>,
    learn: &LearnArgs,
    stoplist: Option<String>,
    seed: u64,
    out: &str,
) -> Result<()> {
    let format = CorpusFormat::parse(&cfg.resolve(format, "format", "tsv".to_string())?)?;
    let kind = ModelKind::parse(&cfg.resolve(model, "model", "nb".to_string())?)?;
    let settings = LearnSettings::resolve(cfg, learn)?;
    let stoplist = load_stoplist(stoplist.as_deref())?;

    let docs = read_corpus(corpus, &format, !no_header)?;
    if let Some(doc) = docs.iter().find(|d| d.label.is_none()) {
        return Err(Error::invalid(format!(
            "document {:?} has no label; training needs labeled data",
            doc.doc_id
        )));
    }
    let labels: Vec<String> = docs.iter().map(|d| d.label.clone().unwrap()).collect();

    let stems = stems_of(&docs, &stoplist);
    let vocab = fit_vocabulary(&stems, &settings.feature)?;
    let mode = match kind {
        ModelKind::Nb if !settings.tfidf => FeatureMode::Counts,
        _ => FeatureMode::Tfidf,
    };
    let xs: Vec<_> = stems
        .iter()
        .map(|s| match mode {
            FeatureMode::Counts => vocab.vectorize_counts(s),
            FeatureMode::Tfidf => vocab.vectorize(s),
        })
        .collect();

    let trained = match kind {
        ModelKind::Nb => Model::Nb(train_nb(&xs, &labels, settings.alpha, vocab.len())?),
        _ => Model::Linear(train_linear(
            &xs,
            &labels,
            vocab.len(),
            &settings.linear_config(kind, seed),
        )?),
    };
    info!(
        "trained {} on {} document(s): {} classes, {} features ({})",
        kind.name(),
        docs.len(),
        trained.labels().len(),
        vocab.len(),
        mode.as_str(),
    );

    let classifier = Classifier::new(vocab, mode, trained)?;
    let mut writer = open_output(out)?;
    classifier.save(&mut writer)?;
    writer.flush()?;
    Ok(())
}

fn cmd_predict(
    cfg: &Cfg,
    corpus: &str,
    format: Option<String>,
    no_header: bool,
    model: &str,
    scores: bool,
    stoplist: Option<String>,
    out: &str,
) -> Result<()> {
    let format = CorpusFormat::parse(&cfg.resolve(format, "format", "tsv".to_string())?)?;
    let stoplist = load_stoplist(stoplist.as_deref())?;
    let classifier = Classifier::load(open_input(model)?)?;
    let docs = read_corpus(corpus, &format, !no_header)?;
    let stems = stems_of(&docs, &stoplist);

    let mut writer = open_output(out)?;
    if scores {
        writeln!(writer, "doc_id\tlabel\t{}", classifier.labels().join("\t"))?;
    } else {
        writeln!(writer, "doc_id\tlabel")?;
    }
    for (doc, stems) in docs.iter().zip(&stems) {
        let (best, class_scores) = classifier.predict_stems(stems)?;
        write!(writer, "{}\t{}", doc.doc_id, classifier.labels()[best])?;
        if scores {
            for s in class_scores {
                write!(writer, "\t{s}")?;
            }
        }
        writeln!(writer)?;
    }
    info!("labeled {} document(s)", docs.len());
    writer.flush()?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_evaluate(
    cfg: &Cfg,
    corpus: &str,
    format: Option<String>,
    no_header: bool,
    model: Vec<String>,
    trials: Option<usize>,
    fraction: Option<f64>,
    average: Option<String>,
    learn: &LearnArgs,
    stoplist: Option<String>,
    seed: u64,
    out: &str,
) -> Result<()> {
    let format = CorpusFormat::parse(&cfg.resolve(format, "format", "tsv".to_string())?)?;
    let trials = cfg.resolve(trials, "trials", 5)?;
    let fraction = cfg.resolve(fraction, "fraction", 0.7)?;
    let average = Average::parse(&cfg.resolve(average, "average", "macro".to_string())?)?;
    let settings = LearnSettings::resolve(cfg, learn)?;
    let stoplist = load_stoplist(stoplist.as_deref())?;

    let kinds: Vec<ModelKind> = if model.is_empty() {
        match cfg.get::<String>("model")? {
            Some(s) => vec![ModelKind::parse(&s)?],
            None => vec![ModelKind::Nb, ModelKind::Logistic, ModelKind::Hinge],
        }
    } else {
        model.iter().map(|s| ModelKind::parse(s)).collect::<Result<_>>()?
    };

    let docs = read_corpus(corpus, &format, !no_header)?;
    info!(
        "evaluating {} classifier(s) on {} document(s), {} trial(s) at fraction {}",
        kinds.len(),
        docs.len(),
        trials,
        fraction
    );

    let mut reports: Vec<(ModelKind, ScoreReport)> = Vec::new();
    for &kind in &kinds {
        let config = TrialConfig {
            model: settings.model_spec(kind, seed),
            feature: settings.feature.clone(),
            fraction,
            trials,
            base_seed: seed,
            average,
        };
        let report = run_trials(&docs, &stoplist, &config)?;
        for (i, t) in report.trials.iter().enumerate() {
            info!(
                "{} trial {} (seed {}): train {} / test {} in {} s {:.3} ms",
                kind.name(),
                i + 1,
                t.seed,
                t.train_size,
                t.test_size,
                t.seconds.trunc() as u64,
                t.seconds.fract() * 1e3,
            );
        }
        let total: f64 = report.trials.iter().map(|t| t.seconds).sum();
        info!(
            "{} total: {} s {:.3} ms over {} trial(s)",
            kind.name(),
            total.trunc() as u64,
            total.fract() * 1e3,
            trials
        );
        reports.push((kind, report));
    }

    let mut writer = open_output(out)?;
    write_evaluation(&mut writer, &reports, trials)?;
    writer.flush()?;
    Ok(())
}

/// The evaluation report: a per-trial table and a mean table in aligned
/// text, then the mean table again as TSV with metrics as rows and
/// classifiers as columns. Timings stay on stderr so the report is
/// byte-identical across runs.
fn write_evaluation(
    writer: &mut impl Write,
    reports: &[(ModelKind, ScoreReport)],
    trials: usize,
) -> Result<()> {
    let mut table = vec![
        ["model", "trial", "seed", "train", "test", "accuracy", "precision", "recall"]
            .map(String::from)
            .to_vec(),
    ];
    for (kind, report) in reports {
        for (i, t) in report.trials.iter().enumerate() {
            table.push(vec![
                kind.name().to_string(),
                (i + 1).to_string(),
                t.seed.to_string(),
                t.train_size.to_string(),
                t.test_size.to_string(),
                format!("{:.4}", t.metrics.accuracy),
                format!("{:.4}", t.metrics.precision),
                format!("{:.4}", t.metrics.recall),
            ]);
        }
    }
    writeln!(writer, "per-trial results")?;
    write!(writer, "{}", render_aligned(&table))?;
    writeln!(writer)?;

    let mut mean = vec![vec!["metric".to_string()]];
    for (kind, _) in reports {
        mean[0].push(kind.name().to_string());
    }
    let metric_rows: [(&str, fn(&ScoreReport) -> f64); 3] = [
        ("accuracy", |r| r.mean.accuracy),
        ("precision", |r| r.mean.precision),
        ("recall", |r| r.mean.recall),
    ];
    for (name, pick) in metric_rows {
        let mut row = vec![name.to_string()];
        for (_, report) in reports {
            row.push(format!("{:.4}", pick(report)));
        }
        mean.push(row);
    }
    writeln!(writer, "mean over {trials} trial(s)")?;
    write!(writer, "{}", render_aligned(&mean))?;
    writeln!(writer)?;

    for row in &mean {
        writeln!(writer, "{}", row.join("\t"))?;
    }
    if reports
        .iter()
        .any(|(_, r)| r.mean.zero_division || r.trials.iter().any(|t| t.metrics.zero_division))
    {
        writeln!(writer, "note: classes with zero denominators were scored 0")?;
    }
    Ok(())
}

fn cmd_synth(
    cfg: &Cfg,
    classes: Option<usize>,
    docs_per_class: Option<usize>,
    seed: u64,
    out: &str,
) -> Result<()> {
    let spec = SynthSpec {
        classes: cfg.resolve(classes, "classes", 10)?,
        docs_per_class: cfg.resolve(docs_per_class, "docs_per_class", 60)?,
        seed,
    };
    let docs = generate(&spec)?;
    info!(
        "generated {} document(s): {} classes x {}",
        docs.len(),
        spec.classes,
        spec.docs_per_class
    );
    let mut writer = open_output(out)?;
    write_tsv_corpus(&docs, &mut writer, true)?;
    writer.flush()?;
    Ok(())
}

fn run(cli: Cli) -> std::result::Result<(), (&'static str, Error)> {
    let stage = match &cli.command {
        Command::Querygen { .. } => "querygen",
        Command::Ingest { .. } => "ingest",
        Command::Extract { .. } => "extract",
        Command::QueryCommon { .. } => "query-common",
        Command::Mine { .. } => "mine",
        Command::Train { .. } => "train",
        Command::Predict { .. } => "predict",
        Command::Evaluate { .. } => "evaluate",
        Command::Synth { .. } => "synth",
    };
    let fail = |e: Error| (stage, e);

    let cfg = Cfg::load(cli.config.as_deref()).map_err(fail)?;
    let seed = cfg.resolve(cli.seed, "seed", 42).map_err(fail)?;
    let jobs = cfg.resolve(cli.jobs, "jobs", 0).map_err(fail)?;
    if jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| fail(Error::invalid(format!("thread pool: {e}"))))?;
    }

    let started = Instant::now();
    match cli.command {
        Command::Querygen {
            disease,
            from,
            to,
            language,
            out,
        } => cmd_querygen(&cfg, &disease, from, to, language, &out),
        Command::Ingest {
            input,
            format,
            no_header,
            emit,
            out,
        } => cmd_ingest(&cfg, &input, format, no_header, emit, &out),
        Command::Extract {
            corpus,
            format,
            no_header,
            dictionary,
            out,
        } => cmd_extract(&cfg, &corpus, format, no_header, &dictionary, &out),
        Command::QueryCommon {
            mentions,
            min_cancers,
            entity_type,
            tsv,
            out,
        } => cmd_query_common(&cfg, &mentions, min_cancers, entity_type, tsv, &out),
        Command::Mine {
            mentions,
            min_support,
            min_confidence,
            min_items,
            chains,
            out,
        } => cmd_mine(&cfg, &mentions, min_support, min_confidence, min_items, chains, &out),
        Command::Train {
            corpus,
            format,
            no_header,
            model,
            learn,
            stoplist,
            out,
        } => cmd_train(&cfg, &corpus, format, no_header, model, &learn, stoplist, seed, &out),
        Command::Predict {
            corpus,
            format,
            no_header,
            model,
            scores,
            stoplist,
            out,
        } => cmd_predict(&cfg, &corpus, format, no_header, &model, scores, stoplist, &out),
        Command::Evaluate {
            corpus,
            format,
            no_header,
            model,
            trials,
            fraction,
            average,
            learn,
            stoplist,
            out,
        } => cmd_evaluate(
            &cfg, &corpus, format, no_header, model, trials, fraction, average, &learn, stoplist,
            seed, &out,
        ),
        Command::Synth {
            classes,
            docs_per_class,
            out,
        } => cmd_synth(&cfg, classes, docs_per_class, seed, &out),
    }
    .map_err(fail)?;
    log_elapsed(stage, started);
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "info",
        1 => "debug",
        _ => "trace",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    if let Err((stage, err)) = run(cli) {
        let msg = err.to_string().replace('\n', " ");
        eprintln!("ERROR:{stage}: {msg}");
        std::process::exit(1);
    }
}
