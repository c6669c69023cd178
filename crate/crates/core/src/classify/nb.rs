//! Multinomial naive Bayes with additive smoothing:
//! theta_yi = (N_yi + alpha) / (N_y + alpha * n). Scores are computed in
//! log space; alpha = 0 is honored, so an unseen feature sends a class to
//! negative infinity.

use std::collections::BTreeMap;
use std::io::Write;

use crate::classify::{argmax, parse_kv_lines, parse_rows, Section};
use crate::error::{Error, Result};
use crate::features::SparseVector;

#[derive(Debug, Clone, PartialEq)]
pub struct NBModel {
    /// sorted distinct labels; class index order everywhere
    labels: Vec<String>,
    /// training documents per class
    doc_counts: Vec<usize>,
    /// nonzero N_yi per class, index-sorted
    feature_counts: Vec<Vec<(usize, f64)>>,
    alpha: f64,
    n: usize,
    // derived deterministically from the above
    class_totals: Vec<f64>,
    log_prior: Vec<f64>,
    log_theta: Vec<Vec<f64>>,
}

impl NBModel {
    /// Single constructor shared by training and loading, so a reloaded
    /// model derives bit-identical parameters.
    fn from_parts(
        labels: Vec<String>,
        doc_counts: Vec<usize>,
        feature_counts: Vec<Vec<(usize, f64)>>,
        alpha: f64,
        n: usize,
    ) -> Result<Self> {
        debug_assert!(labels.windows(2).all(|w| w[0] < w[1]));
        debug_assert_eq!(labels.len(), doc_counts.len());
        debug_assert_eq!(labels.len(), feature_counts.len());
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::invalid(format!("alpha {alpha} must be finite and nonnegative")));
        }
        if labels.is_empty() {
            return Err(Error::invalid("no classes"));
        }
        let m: usize = doc_counts.iter().sum();
        let class_totals: Vec<f64> = feature_counts
            .iter()
            .map(|row| row.iter().map(|&(_, v)| v).sum())
            .collect();
        let log_prior: Vec<f64> = doc_counts
            .iter()
            .map(|&d| (d as f64 / m as f64).ln())
            .collect();
        let mut log_theta = Vec::with_capacity(labels.len());
        for (k, row) in feature_counts.iter().enumerate() {
            let denom = class_totals[k] + alpha * n as f64;
            if denom == 0.0 {
                return Err(Error::invalid(format!(
                    "class {:?} has no feature mass and alpha is zero",
                    labels[k]
                )));
            }
            let mut dense = vec![(alpha / denom).ln(); n];
            for &(i, v) in row {
                dense[i] = ((v + alpha) / denom).ln();
            }
            log_theta.push(dense);
        }
        Ok(NBModel {
            labels,
            doc_counts,
            feature_counts,
            alpha,
            n,
            class_totals,
            log_prior,
            log_theta,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn n_features(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn log_prior(&self) -> &[f64] {
        &self.log_prior
    }

    /// Smoothed feature distribution of one class, linear domain.
    pub fn theta(&self, class: usize) -> Option<Vec<f64>> {
        let row = self.feature_counts.get(class)?;
        let denom = self.class_totals[class] + self.alpha * self.n as f64;
        let mut dense = vec![self.alpha / denom; self.n];
        for &(i, v) in row {
            dense[i] = (v + self.alpha) / denom;
        }
        Some(dense)
    }

    /// Log-posterior scores up to the shared evidence term.
    pub fn scores(&self, x: &SparseVector) -> Result<Vec<f64>> {
        if let Some(max) = x.max_index() {
            if max >= self.n {
                return Err(Error::Dimension {
                    index: max,
                    dim: self.n,
                });
            }
        }
        let mut scores = self.log_prior.clone();
        for (k, score) in scores.iter_mut().enumerate() {
            for &(i, v) in x.entries() {
                *score += v * self.log_theta[k][i];
            }
        }
        Ok(scores)
    }

    pub fn predict(&self, x: &SparseVector) -> Result<usize> {
        Ok(argmax(&self.scores(x)?))
    }

    pub(crate) fn write_class_sections(&self, writer: &mut impl Write) -> Result<()> {
        for (k, label) in self.labels.iter().enumerate() {
            writeln!(writer, "## class\t{label}")?;
            writeln!(writer, "docs={}", self.doc_counts[k])?;
            for &(i, v) in &self.feature_counts[k] {
                writeln!(writer, "{i}\t{v}")?;
            }
        }
        Ok(())
    }
}

/// Fits class priors and smoothed feature counts. Features must be
/// nonnegative (raw counts by convention, TF-IDF also works); class order
/// is the sorted label order.
pub fn train_nb(xs: &[SparseVector], labels: &[String], alpha: f64, n: usize) -> Result<NBModel> {
    if xs.len() != labels.len() {
        return Err(Error::invalid(format!(
            "{} vectors but {} labels",
            xs.len(),
            labels.len()
        )));
    }
    if xs.is_empty() {
        return Err(Error::invalid("no training documents"));
    }
    let mut classes: Vec<String> = labels.to_vec();
    classes.sort_unstable();
    classes.dedup();
    let class_of: BTreeMap<&str, usize> = classes
        .iter()
        .enumerate()
        .map(|(k, l)| (l.as_str(), k))
        .collect();

    let mut doc_counts = vec![0usize; classes.len()];
    let mut dense = vec![vec![0.0f64; n]; classes.len()];
    for (x, label) in xs.iter().zip(labels) {
        let k = class_of[label.as_str()];
        doc_counts[k] += 1;
        for &(i, v) in x.entries() {
            if i >= n {
                return Err(Error::Dimension { index: i, dim: n });
            }
            if v < 0.0 {
                return Err(Error::invalid(format!("negative feature value {v} at index {i}")));
            }
            dense[k][i] += v;
        }
    }
    let feature_counts: Vec<Vec<(usize, f64)>> = dense
        .into_iter()
        .map(|row| {
            row.into_iter()
                .enumerate()
                .filter(|&(_, v)| v != 0.0)
                .collect()
        })
        .collect();
    NBModel::from_parts(classes, doc_counts, feature_counts, alpha, n)
}

pub(crate) fn load_sections(
    head: &std::collections::HashMap<String, (usize, String)>,
    labels: Vec<String>,
    sections: &[Section],
    n: usize,
) -> Result<NBModel> {
    let (alpha_line, alpha) = head
        .get("alpha")
        .ok_or_else(|| Error::invalid("model header missing alpha"))?;
    let alpha: f64 = alpha
        .parse()
        .map_err(|_| Error::parse(*alpha_line, format!("bad alpha {alpha:?}")))?;
    let mut doc_counts = Vec::with_capacity(sections.len());
    let mut feature_counts = Vec::with_capacity(sections.len());
    for section in sections {
        let kv = parse_kv_lines(&section.body)?;
        let (docs_line, docs) = kv
            .get("docs")
            .ok_or_else(|| Error::parse(section.line, "class section missing docs"))?;
        let docs: usize = docs
            .parse()
            .map_err(|_| Error::parse(*docs_line, format!("bad docs {docs:?}")))?;
        if docs == 0 {
            return Err(Error::parse(*docs_line, "class with zero documents"));
        }
        let rows = parse_rows(&section.body, n)?;
        if rows.iter().any(|&(_, v)| v <= 0.0) {
            return Err(Error::parse(section.line, "feature counts must be positive"));
        }
        doc_counts.push(docs);
        feature_counts.push(rows);
    }
    NBModel::from_parts(labels, doc_counts, feature_counts, alpha, n)
}
