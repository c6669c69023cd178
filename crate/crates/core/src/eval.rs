//! Confusion matrices, the three headline scores, and repeated
//! train/evaluate trials under seed control.
//!
//! Rows index the true class, columns the predicted class. Two-class
//! matrices are scored with the plain binary formulas, class 1 positive;
//! larger matrices average one-vs-rest scores per class, unweighted
//! (macro) by default or pooled (micro) on request.

use std::collections::HashMap;
use std::time::Instant;

use rayon::prelude::*;

use crate::classify::{
    split, train_linear, train_nb, FeatureMode, LinearConfig, Model, SplitSpec,
};
use crate::error::{Error, Result};
use crate::features::{fit_vocabulary, preprocess, TfidfConfig};
use crate::ingest::Document;
use crate::textproc::Stoplist;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    k: usize,
    counts: Vec<Vec<usize>>,
}

/// Tallies paired label indexes into a k x k matrix.
pub fn confusion(y_true: &[usize], y_pred: &[usize], k: usize) -> Result<ConfusionMatrix> {
    if y_true.len() != y_pred.len() {
        return Err(Error::invalid(format!(
            "{} true labels but {} predictions",
            y_true.len(),
            y_pred.len()
        )));
    }
    if k == 0 {
        return Err(Error::invalid("need at least one class"));
    }
    let mut counts = vec![vec![0usize; k]; k];
    for (i, (&t, &p)) in y_true.iter().zip(y_pred).enumerate() {
        if t >= k || p >= k {
            return Err(Error::invalid(format!(
                "pair {i}: label ({t}, {p}) outside 0..{k}"
            )));
        }
        counts[t][p] += 1;
    }
    Ok(ConfusionMatrix { k, counts })
}

impl ConfusionMatrix {
    pub fn from_counts(counts: Vec<Vec<usize>>) -> Result<Self> {
        let k = counts.len();
        if k == 0 {
            return Err(Error::invalid("need at least one class"));
        }
        if counts.iter().any(|row| row.len() != k) {
            return Err(Error::invalid("confusion matrix must be square"));
        }
        Ok(ConfusionMatrix { k, counts })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn count(&self, true_class: usize, pred_class: usize) -> usize {
        self.counts[true_class][pred_class]
    }

    pub fn counts(&self) -> &[Vec<usize>] {
        &self.counts
    }

    pub fn total(&self) -> usize {
        self.counts.iter().map(|row| row.iter().sum::<usize>()).sum()
    }

    pub fn trace(&self) -> usize {
        (0..self.k).map(|i| self.counts[i][i]).sum()
    }

    pub fn tp(&self, class: usize) -> usize {
        self.counts[class][class]
    }

    pub fn fp(&self, class: usize) -> usize {
        (0..self.k)
            .filter(|&t| t != class)
            .map(|t| self.counts[t][class])
            .sum()
    }

    pub fn fn_(&self, class: usize) -> usize {
        (0..self.k)
            .filter(|&p| p != class)
            .map(|p| self.counts[class][p])
            .sum()
    }

    pub fn tn(&self, class: usize) -> usize {
        self.total() - self.tp(class) - self.fp(class) - self.fn_(class)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Average {
    #[default]
    Macro,
    Micro,
}

impl Average {
    pub fn as_str(self) -> &'static str {
        match self {
            Average::Macro => "macro",
            Average::Micro => "micro",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "macro" => Ok(Average::Macro),
            "micro" => Ok(Average::Micro),
            other => Err(Error::invalid(format!("unknown averaging mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    /// some per-class denominator was zero and its score was taken as 0
    pub zero_division: bool,
}

fn ratio(num: usize, den: usize, flag: &mut bool) -> f64 {
    if den == 0 {
        *flag = true;
         0.0
    } else {
        num as f64 / den as f64
    }
}

/// Scores a confusion matrix. Accuracy is trace over total either way.
pub fn metrics(cm: &ConfusionMatrix, average: Average) -> Result<Metrics> {
    let total = cm.total();
    if total == 0 {
        return Err(Error::invalid("confusion matrix holds no observations"));
    }
    let accuracy = cm.trace() as f64 / total as f64;
    let mut zero_division = false;

    let (precision, recall) = if cm.k() == 2 {
        // binary: class 1 is the positive class
        let p = ratio(cm.tp(1), cm.tp(1) + cm.fp(1), &mut zero_division);
        let r = ratio(cm.tp(1), cm.tp(1) + cm.fn_(1), &mut zero_division);
        (p, r)
    } else {
        match average {
            Average::Macro => {
                let mut p_sum = 0.0;
                let mut r_sum = 0.0;
                for class in 0..cm.k() {
                    p_sum += ratio(cm.tp(class), cm.tp(class) + cm.fp(class), &mut zero_division);
                    r_sum += ratio(cm.tp(class), cm.tp(class) + cm.fn_(class), &mut zero_division);
                }
                (p_sum / cm.k() as f64, r_sum / cm.k() as f64)
            }
            Average::Micro => {
                let tp: usize = (0..cm.k()).map(|c| cm.tp(c)).sum();
                let fp: usize = (0..cm.k()).map(|c| cm.fp(c)).sum();
                let fn_: usize = (0..cm.k()).map(|c| cm.fn_(c)).sum();
                let p = ratio(tp, tp + fp, &mut zero_division);
                let r = ratio(tp, tp + fn_, &mut zero_division);
                (p, r)
            }
        }
    };
    Ok(Metrics {
        accuracy,
        precision,
        recall,
        zero_division,
    })
}

/// Which classifier a trial run trains.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    Nb { alpha: f64, tfidf: bool },
    Linear(LinearConfig),
}

impl ModelSpec {
    pub fn feature_mode(&self) -> FeatureMode {
        match self {
            ModelSpec::Nb { tfidf: false, .. } => FeatureMode::Counts,
            _ => FeatureMode::Tfidf,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialConfig {
    pub model: ModelSpec,
    pub feature: TfidfConfig,
    pub fraction: f64,
    pub trials: usize,
    pub base_seed: u64,
    pub average: Average,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub seed: u64,
    pub train_size: usize,
    pub test_size: usize,
    pub metrics: Metrics,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreReport {
    pub trials: Vec<TrialOutcome>,
    pub mean: Metrics,
}

/// Runs trial i with seed base_seed + i: split, fit the vocabulary on the
/// training side only, train, score the held-out side. Returns per-trial
/// outcomes plus their mean.
pub fn run_trials(
    docs: &[Document],
    stoplist: &Stoplist,
    config: &TrialConfig,
) -> Result<ScoreReport> {
    if config.trials == 0 {
        return Err(Error::invalid("need at least one trial"));
    }
    if let Some(doc) = docs.iter().find(|d| d.label.is_none()) {
        return Err(Error::invalid(format!(
            "document {:?} has no label; evaluation needs labeled data",
            doc.doc_id
        )));
    }
    let mut all_labels: Vec<&str> = docs.iter().filter_map(|d| d.label.as_deref()).collect();
    all_labels.sort_unstable();
    all_labels.dedup();
    let global: HashMap<&str, usize> = all_labels
        .iter()
        .enumerate()
        .map(|(i, &l)| (l, i))
        .collect();
    let k = all_labels.len();

    let mut trials = Vec::with_capacity(config.trials);
    for i in 0..config.trials {
        let seed = config.base_seed.wrapping_add(i as u64);
        let started = Instant::now();

        let (train, test) = split(
            docs,
            &SplitSpec {
                fraction: config.fraction,
                seed,
            },
        )?;
        let train_stems: Vec<Vec<String>> = train
            .par_iter()
            .map(|d| preprocess(&d.body, stoplist))
            .collect();
        let test_stems: Vec<Vec<String>> = test
            .par_iter()
            .map(|d| preprocess(&d.body, stoplist))
            .collect();
        let vocab = fit_vocabulary(&train_stems, &config.feature)?;
        let featurize = |stems: &Vec<String>| match config.model.feature_mode() {
            FeatureMode::Counts => vocab.vectorize_counts(stems),
            FeatureMode::Tfidf => vocab.vectorize(stems),
        };
        let xs: Vec<_> = train_stems.iter().map(featurize).collect();
        let labels: Vec<String> = train
            .iter()
            .map(|d| d.label.clone().expect("checked above"))
            .collect();

        let model = match &config.model {
            ModelSpec::Nb { alpha, .. } => {
                Model::Nb(train_nb(&xs, &labels, *alpha, vocab.len())?)
            }
            ModelSpec::Linear(linear) => {
                let linear = LinearConfig {
                    seed,
                    ..linear.clone()
                };
                Model::Linear(train_linear(&xs, &labels, vocab.len(), &linear)?)
            }
        };

        let mut y_true = Vec::with_capacity(test.len());
        let mut y_pred = Vec::with_capacity(test.len());
        for (doc, stems) in test.iter().zip(&test_stems) {
            let x = featurize(stems);
            let pred = model.predict(&x)?;
            y_true.push(global[doc.label.as_deref().expect("checked above")]);
            y_pred.push(global[model.labels()[pred].as_str()]);
        }
        let cm = confusion(&y_true, &y_pred, k)?;
        let scored = metrics(&cm, config.average)?;
        trials.push(TrialOutcome {
            seed,
            train_size: train.len(),
            test_size: test.len(),
            metrics: scored,
            seconds: started.elapsed().as_secs_f64(),
        });
    }

    let n = trials.len() as f64;
    let mean = Metrics {
        accuracy: trials.iter().map(|t| t.metrics.accuracy).sum::<f64>() / n,
        precision: trials.iter().map(|t| t.metrics.precision).sum::<f64>() / n,
        recall: trials.iter().map(|t| t.metrics.recall).sum::<f64>() / n,
        zero_division: trials.iter().any(|t| t.metrics.zero_division),
    };
    Ok(ScoreReport { trials, mean })
}
