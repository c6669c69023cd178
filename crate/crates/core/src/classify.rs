//! Train/test splitting, the two classifier families, and a persistence
//! wrapper that keeps a fitted vocabulary and a trained model together in
//! one self-describing file.
//!
//! Class order is always the sorted distinct label order; argmax breaks
//! ties toward the first class in that order.

pub mod linear;
pub mod nb;

use std::collections::HashMap;
use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::features::{SparseVector, TfidfVocabulary};
use crate::ingest::Document;

pub use linear::{
    objective, pointwise_loss, pointwise_margin_grad, train_linear, LinearConfig, LinearModel,
    Loss, Penalty,
};
pub use nb::{train_nb, NBModel};

/// How documents were turned into vectors at training time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureMode {
    Counts,
    Tfidf,
}

impl FeatureMode {
    pub fn as_str(self) -> &'static str {
        match self {
            FeatureMode::Counts => "counts",
            FeatureMode::Tfidf => "tfidf",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "counts" => Ok(FeatureMode::Counts),
            "tfidf" => Ok(FeatureMode::Tfidf),
            other => Err(Error::invalid(format!("unknown feature mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitSpec {
    /// fraction of documents assigned to the training side
    pub fraction: f64,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            fraction: 0.7,
            seed: 42,
        }
    }
}

/// round(count * fraction), clamped so neither side is empty.
fn train_count(count: usize, fraction: f64) -> usize {
    ((count as f64 * fraction).round() as usize).clamp(1, count - 1)
}

/// Splits a corpus into train and test sides. When every document is
/// labeled and every class holds at least two documents the split is
/// stratified per class; a singleton class logs a warning and falls back
/// to a plain shuffled split. Input order is preserved within each side.
pub fn split(docs: &[Document], spec: &SplitSpec) -> Result<(Vec<Document>, Vec<Document>)> {
    if !(spec.fraction > 0.0 && spec.fraction < 1.0) {
        return Err(Error::invalid(format!(
            "split fraction {} outside (0, 1)",
            spec.fraction
        )));
    }
    if docs.len() < 2 {
        return Err(Error::invalid("need at least two documents to split"));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);

    let mut by_class: HashMap<&str, Vec<usize>> = HashMap::new();
    let all_labeled = docs.iter().all(|d| d.label.is_some());
    if all_labeled {
        for (i, doc) in docs.iter().enumerate() {
            by_class
                .entry(doc.label.as_deref().expect("checked above"))
                .or_default()
                .push(i);
        }
    }

    let mut in_train = vec![false; docs.len()];
    let stratifiable = all_labeled && by_class.values().all(|ids| ids.len() >= 2);
    if all_labeled && !stratifiable {
        let lonely = by_class
            .iter()
            .find(|(_, ids)| ids.len() < 2)
            .map(|(label, _)| *label)
            .expect("some class is below two");
        log::warn!("class {lonely:?} has a single document; using a plain split");
    }

    if stratifiable {
        let mut labels: Vec<&str> = by_class.keys().copied().collect();
        labels.sort_unstable();
        for label in labels {
            let mut ids = by_class[label].clone();
            ids.shuffle(&mut rng);
            for &i in ids.iter().take(train_count(ids.len(), spec.fraction)) {
                in_train[i] = true;
            }
        }
    } else {
        let mut ids: Vec<usize> = (0..docs.len()).collect();
        ids.shuffle(&mut rng);
        for &i in ids.iter().take(train_count(docs.len(), spec.fraction)) {
            in_train[i] = true;
        }
    }

    let mut train = Vec::new();
    let mut test = Vec::new();
    for (i, doc) in docs.iter().enumerate() {
        if in_train[i] {
            train.push(doc.clone());
        } else {
            test.push(doc.clone());
        }
    }
    Ok((train, test))
}

/// A trained model of either family.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Nb(NBModel),
    Linear(LinearModel),
}

impl Model {
    pub fn labels(&self) -> &[String] {
        match self {
            Model::Nb(m) => m.labels(),
            Model::Linear(m) => m.labels(),
        }
    }

    pub fn n_features(&self) -> usize {
        match self {
            Model::Nb(m) => m.n_features(),
            Model::Linear(m) => m.n_features(),
        }
    }

    /// Per-class decision scores; comparable within one call only.
    pub fn scores(&self, x: &SparseVector) -> Result<Vec<f64>> {
        match self {
            Model::Nb(m) => m.scores(x),
            Model::Linear(m) => m.scores(x),
        }
    }

    /// Index of the best-scoring class; ties go to the earliest class.
    pub fn predict(&self, x: &SparseVector) -> Result<usize> {
        Ok(argmax(&self.scores(x)?))
    }
}

/// First index holding the maximum. Strict comparison keeps the earliest
/// class on ties.
pub(crate) fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

/// Vocabulary, feature mode, and model bundled for end-to-end prediction
/// and single-file persistence.
#[derive(Debug, Clone, PartialEq)]
pub struct Classifier {
    vocab: TfidfVocabulary,
    features: FeatureMode,
    model: Model,
}

impl Classifier {
    pub fn new(vocab: TfidfVocabulary, features: FeatureMode, model: Model) -> Result<Self> {
        if model.n_features() != vocab.len() {
            return Err(Error::Dimension {
                index: model.n_features(),
                dim: vocab.len(),
            });
        }
        Ok(Classifier {
            vocab,
            features,
            model,
        })
    }

    pub fn vocab(&self) -> &TfidfVocabulary {
        &self.vocab
    }

    pub fn features(&self) -> FeatureMode {
        self.features
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn labels(&self) -> &[String] {
        self.model.labels()
    }

    pub fn featurize(&self, stems: &[String]) -> SparseVector {
        match self.features {
            FeatureMode::Counts => self.vocab.vectorize_counts(stems),
            FeatureMode::Tfidf => self.vocab.vectorize(stems),
        }
    }

    pub fn predict_stems(&self, stems: &[String]) -> Result<(usize, Vec<f64>)> {
        let x = self.featurize(stems);
        let scores = self.model.scores(&x)?;
        Ok((argmax(&scores), scores))
    }

    /// Writes the `model`, `vocab`, and per-class sections. Everything a
    /// later `load` needs is in the file; floats round-trip exactly.
    pub fn save(&self, writer: &mut impl Write) -> Result<()> {
        writeln!(writer, "## model")?;
        match &self.model {
            Model::Nb(m) => {
                writeln!(writer, "kind=nb")?;
                writeln!(writer, "features={}", self.features.as_str())?;
                writeln!(writer, "alpha={}", m.alpha())?;
                writeln!(writer, "classes={}", m.labels().len())?;
            }
            Model::Linear(m) => {
                let c = m.config();
                writeln!(writer, "kind=linear")?;
                writeln!(writer, "features={}", self.features.as_str())?;
                writeln!(writer, "loss={}", c.loss.as_str())?;
                writeln!(writer, "penalty={}", c.penalty.as_str())?;
                writeln!(writer, "c={}", c.c)?;
                writeln!(writer, "eta0={}", c.eta0)?;
                writeln!(writer, "epochs={}", c.epochs)?;
                writeln!(writer, "seed={}", c.seed)?;
                writeln!(writer, "classes={}", m.labels().len())?;
            }
        }
        writeln!(writer, "## vocab")?;
        self.vocab.save(writer)?;
        match &self.model {
            Model::Nb(m) => m.write_class_sections(writer)?,
            Model::Linear(m) => m.write_class_sections(writer)?,
        }
        Ok(())
    }

    pub fn load(reader: impl BufRead) -> Result<Self> {
        let sections = read_sections(reader)?;
        if sections.len() < 3 {
            return Err(Error::invalid(
                "model file needs model, vocab, and class sections",
            ));
        }
        if sections[0].name != "model" {
            return Err(Error::parse(
                sections[0].line,
                format!("expected '## model', found {:?}", sections[0].name),
            ));
        }
        if sections[1].name != "vocab" {
            return Err(Error::parse(
                sections[1].line,
                format!("expected '## vocab', found {:?}", sections[1].name),
            ));
        }
        let head = parse_kv_lines(&sections[0].body)?;
        let field = |k: &str| -> Result<&str> {
            head.get(k)
                .map(|(_, v)| v.as_str())
                .ok_or_else(|| Error::parse(sections[0].line, format!("model header missing {k}")))
        };
        let features = FeatureMode::parse(field("features")?)?;
        let classes: usize = field("classes")?
            .parse()
            .map_err(|_| Error::invalid("bad classes count"))?;

        // vocab line numbers are section-relative; rebase them
        let vocab_base = sections[1].line;
        let body: String = sections[1]
            .body
            .iter()
            .map(|(_, l)| l.as_str())
            .collect::<Vec<_>>()
            .join("\n");
        let vocab = TfidfVocabulary::load(body.as_bytes()).map_err(|e| match e {
            Error::Parse { line, msg } => Error::Parse {
                line: vocab_base + line,
                msg,
            },
            other => other,
        })?;

        let class_sections = &sections[2..];
        if class_sections.len() != classes {
            return Err(Error::invalid(format!(
                "header claims {classes} classes, file has {}",
                class_sections.len()
            )));
        }
        let mut labels = Vec::with_capacity(classes);
        for s in class_sections {
            let label = s
                .name
                .strip_prefix("class\t")
                .ok_or_else(|| Error::parse(s.line, format!("expected class section, found {:?}", s.name)))?;
            if let Some(last) = labels.last() {
                if label <= String::as_str(last) {
                    return Err(Error::parse(s.line, "class labels out of order"));
                }
            }
            labels.push(label.to_string());
        }

        let model = match field("kind")? {
            "nb" => Model::Nb(nb::load_sections(&head, labels, class_sections, vocab.len())?),
            "linear" => Model::Linear(linear::load_sections(
                &head,
                labels,
                class_sections,
                vocab.len(),
            )?),
            other => return Err(Error::invalid(format!("unknown model kind {other:?}"))),
        };
        Classifier::new(vocab, features, model)
    }
}

/// One `## name` block of a model file.
pub(crate) struct Section {
    pub name: String,
    pub line: usize,
    /// (line number, content) pairs
    pub body: Vec<(usize, String)>,
}

pub(crate) fn read_sections(reader: impl BufRead) -> Result<Vec<Section>> {
    let mut sections: Vec<Section> = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if let Some(name) = line.strip_prefix("## ") {
            sections.push(Section {
                name: name.to_string(),
                line: lineno,
                body: Vec::new(),
            });
        } else if let Some(last) = sections.last_mut() {
            last.body.push((lineno, line));
        } else {
            return Err(Error::parse(lineno, "content before the first section"));
        }
    }
    Ok(sections)
}

/// `key=value` lines; tab-bearing lines are data rows and are skipped.
pub(crate) fn parse_kv_lines(body: &[(usize, String)]) -> Result<HashMap<String, (usize, String)>> {
    let mut kv = HashMap::new();
    for (lineno, line) in body {
        if line.contains('\t') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::parse(*lineno, format!("expected key=value, found {line:?}")))?;
        if kv.insert(k.to_string(), (*lineno, v.to_string())).is_some() {
            return Err(Error::parse(*lineno, format!("duplicate key {k:?}")));
        }
    }
    Ok(kv)
}

/// Data rows of a class section: `index \t value`, strictly increasing
/// indexes inside `0..n`, finite values.
pub(crate) fn parse_rows(body: &[(usize, String)], n: usize) -> Result<Vec<(usize, f64)>> {
    let mut rows: Vec<(usize, f64)> = Vec::new();
    for (lineno, line) in body {
        if !line.contains('\t') {
            continue;
        }
        let (idx, value) = line
            .split_once('\t')
            .expect("checked for tab above");
        let idx: usize = idx
            .parse()
            .map_err(|_| Error::parse(*lineno, format!("bad index {idx:?}")))?;
        let value: f64 = value
            .parse()
            .map_err(|_| Error::parse(*lineno, format!("bad value {value:?}")))?;
        if idx >= n {
            return Err(Error::Dimension { index: idx, dim: n });
        }
        if let Some(&(prev, _)) = rows.last() {
            if idx <= prev {
                return Err(Error::parse(*lineno, "row indexes out of order"));
            }
        }
        rows.push((idx, value));
    }
    Ok(rows)
}
