//! Unigram+bigram vocabulary over a training corpus and TF-IDF sparse
//! vectors: W = TF * log10(N / DF), no smoothing, no offsets. N counts
//! training documents, DF counts documents containing the term.
//!
//! Preprocessing order is fixed: tokenize, drop pure-digit tokens, remove
//! stopwords, stem. Bigrams are formed over stems.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::textproc::{ngrams, remove_stopwords, stem, tokenize, Stoplist};

#[derive(Debug, Clone, PartialEq)]
pub struct TfidfConfig {
    /// minimum document frequency for a term to enter the vocabulary
    pub min_df: usize,
    /// include bigrams alongside unigrams
    pub bigrams: bool,
    /// scale each vector to unit Euclidean length
    pub l2_normalize: bool,
}

impl Default for TfidfConfig {
    fn default() -> Self {
        TfidfConfig {
            min_df: 2,
            bigrams: true,
            l2_normalize: true,
        }
    }
}

/// Index-sorted (index, weight) pairs with no explicit zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseVector {
    entries: Vec<(usize, f64)>,
}

impl SparseVector {
    /// Builds from unordered pairs. Panics on duplicate indexes, zero or
    /// non-finite weights: those are construction bugs, not data errors.
    pub fn new(mut entries: Vec<(usize, f64)>) -> Self {
        entries.sort_by_key(|e| e.0);
        for pair in entries.windows(2) {
            assert!(pair[0].0 < pair[1].0, "duplicate index {}", pair[1].0);
        }
        for &(i, w) in &entries {
            assert!(w.is_finite() && w != 0.0, "bad weight {w} at index {i}");
        }
        SparseVector { entries }
    }

    pub fn empty() -> Self {
        SparseVector { entries: Vec::new() }
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn l2_norm(&self) -> f64 {
        self.entries.iter().map(|(_, w)| w * w).sum::<f64>().sqrt()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|e| e.0)
    }
}

/// Fitted term space: term -> (dense index, document frequency), plus the
/// training document count N and the fit configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct TfidfVocabulary {
    term_info: HashMap<String, (usize, usize)>,
    /// index -> term; lexicographic by construction
    terms: Vec<String>,
    n_docs: usize,
    config: TfidfConfig,
}

/// tokenize -> drop pure-digit tokens -> remove stopwords -> stem.
/// Degenerate stems that come back empty (a bare "s") are dropped so every
/// returned surface is non-empty.
pub fn preprocess(body: &str, stoplist: &Stoplist) -> Vec<String> {
    let tokens = tokenize(body);
    let tokens: Vec<_> = tokens
        .into_iter()
        .filter(|t| !t.surface.bytes().all(|b| b.is_ascii_digit()))
        .collect();
    remove_stopwords(&tokens, stoplist)
        .into_iter()
        .map(|t| stem(&t.surface))
        .filter(|s| !s.is_empty())
        .collect()
}

/// The featurizable terms of a preprocessed document: unigrams, plus
/// bigrams when enabled.
pub fn terms_of(stems: &[String], bigrams: bool) -> Vec<String> {
    let mut terms = ngrams(stems, 1).expect("order 1 supported");
    if bigrams {
        terms.extend(ngrams(stems, 2).expect("order 2 supported"));
    }
    terms
}

/// Fits the vocabulary over preprocessed training documents. DF counts
/// presence per document; terms below min_df are dropped; indexes follow
/// lexicographic term order.
pub fn fit_vocabulary(docs: &[Vec<String>], config: &TfidfConfig) -> Result<TfidfVocabulary> {
    if config.min_df == 0 {
        return Err(Error::invalid("min_df must be at least 1"));
    }
    let mut df: BTreeMap<String, usize> = BTreeMap::new();
    for stems in docs {
        let present: BTreeSet<String> = terms_of(stems, config.bigrams).into_iter().collect();
        for term in present {
            *df.entry(term).or_insert(0) += 1;
        }
    }
    let terms: Vec<(String, usize)> = df
        .into_iter()
        .filter(|&(_, d)| d >= config.min_df)
        .collect();
    if terms.is_empty() {
        return Err(Error::invalid(
            "effective vocabulary is empty; lower min_df or supply more text",
        ));
    }
    let mut vocab = TfidfVocabulary {
        term_info: HashMap::with_capacity(terms.len()),
        terms: Vec::with_capacity(terms.len()),
        n_docs: docs.len(),
        config: config.clone(),
    };
    for (idx, (term, d)) in terms.into_iter().enumerate() {
        vocab.term_info.insert(term.clone(), (idx, d));
        vocab.terms.push(term);
    }
    Ok(vocab)
}

impl TfidfVocabulary {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn config(&self) -> &TfidfConfig {
        &self.config
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.term_info.get(term).map(|&(i, _)| i)
    }

    pub fn df_of(&self, term: &str) -> Option<usize> {
        self.term_info.get(term).map(|&(_, d)| d)
    }

    pub fn term(&self, index: usize) -> Option<&str> {
        self.terms.get(index).map(String::as_str)
    }

    /// Raw term-frequency counts over the vocabulary, unweighted and
    /// unnormalized: the multinomial model's natural input.
    pub fn vectorize_counts(&self, stems: &[String]) -> SparseVector {
        let mut tf: BTreeMap<usize, f64> = BTreeMap::new();
        for term in terms_of(stems, self.config.bigrams) {
            if let Some(&(idx, _)) = self.term_info.get(&term) {
                *tf.entry(idx).or_insert(0.0) += 1.0;
            }
        }
        SparseVector {
            entries: tf.into_iter().collect(),
        }
    }

    /// TF-IDF weights: TF * log10(N / DF) per in-vocabulary term, zero
    /// weights (DF = N) omitted, optionally L2-normalized.
    pub fn vectorize(&self, stems: &[String]) -> SparseVector {
        let counts = self.vectorize_counts(stems);
        let n = self.n_docs as f64;
        let mut entries: Vec<(usize, f64)> = counts
            .entries
            .into_iter()
            .map(|(idx, tf)| {
                let df = self
                    .df_of(self.term(idx).expect("index in range"))
                    .expect("term known") as f64;
                (idx, tf * (n / df).log10())
            })
            .filter(|&(_, w)| w != 0.0)
            .collect();
        if self.config.l2_normalize {
            let norm = entries.iter().map(|(_, w)| w * w).sum::<f64>().sqrt();
            if norm > 0.0 {
                for e in &mut entries {
                    e.1 /= norm;
                }
            }
        }
        SparseVector { entries }
    }

    /// Writes `term \t index \t df` rows under a one-line header carrying
    /// N and the fit configuration.
    pub fn save(&self, writer: &mut impl Write) -> Result<()> {
        writeln!(
            writer,
            "# tfidf-vocab N={} terms={} min_df={} bigrams={} l2_normalize={}",
            self.n_docs,
            self.terms.len(),
            self.config.min_df,
            self.config.bigrams,
            self.config.l2_normalize,
        )?;
        for (idx, term) in self.terms.iter().enumerate() {
            let (_, df) = self.term_info[term];
            writeln!(writer, "{term}\t{idx}\t{df}")?;
        }
        Ok(())
    }

    pub fn load(reader: impl BufRead) -> Result<Self> {
        let mut lines = reader.lines().enumerate();
        let header = match lines.next() {
            Some((_, line)) => line?,
            None => return Err(Error::parse(1, "missing vocabulary header")),
        };
        let mut kv: HashMap<&str, &str> = HashMap::new();
        let rest = header
            .strip_prefix("# tfidf-vocab ")
            .ok_or_else(|| Error::parse(1, format!("unexpected header {header:?}")))?;
        for token in rest.split_whitespace() {
            let (k, v) = token
                .split_once('=')
                .ok_or_else(|| Error::parse(1, format!("bad header token {token:?}")))?;
            kv.insert(k, v);
        }
        let field = |k: &str| {
            kv.get(k)
                .copied()
                .ok_or_else(|| Error::parse(1, format!("header missing {k}")))
        };
        let parse_usize = |k: &str| -> Result<usize> {
            field(k)?
                .parse()
                .map_err(|_| Error::parse(1, format!("bad header value for {k}")))
        };
        let parse_bool = |k: &str| -> Result<bool> {
            field(k)?
                .parse()
                .map_err(|_| Error::parse(1, format!("bad header value for {k}")))
        };
        let n_docs = parse_usize("N")?;
        let expected_terms = parse_usize("terms")?;
        let config = TfidfConfig {
            min_df: parse_usize("min_df")?,
            bigrams: parse_bool("bigrams")?,
            l2_normalize: parse_bool("l2_normalize")?,
        };
        let mut vocab = TfidfVocabulary {
            term_info: HashMap::new(),
            terms: Vec::new(),
            n_docs,
            config,
        };
        for (i, line) in lines {
            let line = line?;
            let lineno = i + 1;
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 {
                return Err(Error::parse(
                    lineno,
                    format!("expected 3 tab-separated columns, found {}", cols.len()),
                ));
            }
            let term = cols[0];
            if term.is_empty() {
                return Err(Error::parse(lineno, "empty term"));
            }
            let idx: usize = cols[1]
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad index {:?}", cols[1])))?;
            let df: usize = cols[2]
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad df {:?}", cols[2])))?;
            if idx != vocab.terms.len() {
                return Err(Error::parse(
                    lineno,
                    format!("index {idx} out of order; expected {}", vocab.terms.len()),
                ));
            }
            if df == 0 || df > n_docs {
                return Err(Error::parse(lineno, format!("df {df} outside 1..=N")));
            }
            if vocab.term_info.insert(term.to_string(), (idx, df)).is_some() {
                return Err(Error::parse(lineno, format!("duplicate term {term:?}")));
            }
            vocab.terms.push(term.to_string());
        }
        if vocab.terms.len() != expected_terms {
            return Err(Error::invalid(format!(
                "vocabulary has {} terms, header claims {expected_terms}",
                vocab.terms.len()
            )));
        }
        if vocab.terms.is_empty() {
            return Err(Error::invalid("empty vocabulary"));
        }
        Ok(vocab)
    }
}
