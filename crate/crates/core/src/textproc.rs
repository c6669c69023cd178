//! Deterministic text normalization: tokenization, stopword removal,
//! Porter stemming, and n-gram generation.
//!
//! Tokens are maximal runs of ASCII alphanumerics after Unicode case
//! folding, so everything downstream operates on `[a-z0-9]+` surfaces.

pub mod porter;

use std::collections::HashSet;
use std::io::BufRead;
use std::path::Path;

use crate::error::{Error, Result};

/// One normalized token. `position` is the 0-based token index, not a byte
/// offset; stopword removal reindexes densely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub position: usize,
}

impl Token {
    pub fn new(surface: impl Into<String>, position: usize) -> Self {
        Token {
            surface: surface.into(),
            position,
        }
    }
}

/// Case-folds, then splits into maximal runs of ASCII letters and digits.
/// Punctuation, whitespace, hyphens, and apostrophes all terminate a run,
/// so "p53-mediated" yields `p53` and `mediated`.
pub fn tokenize(text: &str) -> Vec<Token> {
    let mut out = Vec::new();
    let mut run = String::new();
    for c in text.chars().flat_map(|c| c.to_lowercase()) {
        if c.is_ascii_alphanumeric() {
            run.push(c);
        } else if !run.is_empty() {
            let position = out.len();
            out.push(Token::new(std::mem::take(&mut run), position));
        }
    }
    if !run.is_empty() {
        let position = out.len();
        out.push(Token::new(run, position));
    }
    out
}

/// Lowercase words to drop before featurization. Entries are constrained to
/// valid token surfaces so membership tests never need re-normalization.
#[derive(Debug, Clone, Default)]
pub struct Stoplist {
    words: HashSet<String>,
}

const DEFAULT_ENGLISH: &str = include_str!("textproc/stoplist_en.txt");

impl Stoplist {
    /// The bundled list: standard English function words plus "almost".
    pub fn default_english() -> Self {
        Stoplist::from_reader(DEFAULT_ENGLISH.as_bytes())
            .expect("bundled stoplist is well-formed")
    }

    pub fn empty() -> Self {
        Stoplist::default()
    }

    /// One word per line, `#` comments and blank lines ignored. Words are
    /// lowercased; anything that would not survive tokenization intact is
    /// rejected so the list stays closed under token normalization.
    pub fn from_reader(reader: impl BufRead) -> Result<Self> {
        let mut words = HashSet::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let entry = line.trim();
            if entry.is_empty() || entry.starts_with('#') {
                continue;
            }
            let entry = entry.to_lowercase();
            if !entry.bytes().all(|b| b.is_ascii_alphanumeric()) {
                return Err(Error::parse(
                    i + 1,
                    format!("stopword {entry:?} is not a plain [a-z0-9] token"),
                ));
            }
            words.insert(entry);
        }
        Ok(Stoplist { words })
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Stoplist::from_reader(std::io::BufReader::new(file))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Drops stoplisted tokens, preserving order and multiplicity of the rest
/// and reindexing positions densely from 0.
pub fn remove_stopwords(tokens: &[Token], stoplist: &Stoplist) -> Vec<Token> {
    tokens
        .iter()
        .filter(|t| !stoplist.contains(&t.surface))
        .enumerate()
        .map(|(i, t)| Token::new(t.surface.clone(), i))
        .collect()
}

/// Porter stem of a lowercase word. Tokens containing digits pass through
/// unchanged: identifiers like `p53` are not English inflections.
pub fn stem(word: &str) -> String {
    porter::stem(word)
}

/// Unigrams (the surfaces themselves) or bigrams (adjacent pairs joined by
/// one space). Orders above 2 are not supported.
pub fn ngrams(terms: &[String], n: usize) -> Result<Vec<String>> {
    match n {
        1 => Ok(terms.to_vec()),
        2 => Ok(terms.windows(2).map(|w| format!("{} {}", w[0], w[1])).collect()),
        _ => Err(Error::invalid(format!("unsupported n-gram order {n}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surfaces(tokens: &[Token]) -> Vec<&str> {
        tokens.iter().map(|t| t.surface.as_str()).collect()
    }

    #[test]
    fn tokenize_empty() {
        assert!(tokenize("").is_empty());
    }

    #[test]
    fn tokenize_case_folds_and_strips_punctuation() {
        let toks = tokenize("Lung cancer, lung!");
        assert_eq!(surfaces(&toks), ["lung", "cancer", "lung"]);
        assert_eq!(toks[2].position, 2);
    }

    #[test]
    fn tokenize_splits_on_hyphens_and_apostrophes() {
        assert_eq!(surfaces(&tokenize("p53-mediated")), ["p53", "mediated"]);
        assert_eq!(surfaces(&tokenize("patient's")), ["patient", "s"]);
    }

    #[test]
    fn tokenize_output_is_ascii_alnum_only() {
        let text = "Überexpression of β-catenin (để’s) ☃ 42x";
        for tok in tokenize(text) {
            assert!(!tok.surface.is_empty());
            assert!(tok.surface.bytes().all(|b| b.is_ascii_alphanumeric()));
        }
    }

    #[test]
    fn default_stoplist_covers_the_usual_words() {
        let stop = Stoplist::default_english();
        for w in ["a", "an", "the", "almost"] {
            assert!(stop.contains(w), "{w} missing from default stoplist");
        }
        let toks = tokenize("a an the");
        assert!(remove_stopwords(&toks, &stop).is_empty());
    }

    #[test]
    fn remove_stopwords_keeps_order_and_multiplicity() {
        let stop = Stoplist::default_english();
        let toks = tokenize("gene the gene");
        let kept = remove_stopwords(&toks, &stop);
        assert_eq!(surfaces(&kept), ["gene", "gene"]);
        assert_eq!(kept[0].position, 0);
        assert_eq!(kept[1].position, 1);
    }

    #[test]
    fn remove_stopwords_on_empty_input() {
        assert!(remove_stopwords(&[], &Stoplist::default_english()).is_empty());
    }

    #[test]
    fn remove_stopwords_is_a_sub_multiset() {
        let stop = Stoplist::default_english();
        let toks = tokenize("the gene is a gene of genes");
        let kept = remove_stopwords(&toks, &stop);
        let mut pool: Vec<&str> = surfaces(&toks);
        for t in &kept {
            let pos = pool.iter().position(|s| *s == t.surface);
            assert!(pos.is_some(), "{} not in input multiset", t.surface);
            pool.remove(pos.unwrap());
        }
    }

    #[test]
    fn stoplist_rejects_non_token_entries() {
        let err = Stoplist::from_reader("good\nbad word\n".as_bytes()).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn stoplist_parses_comments_and_case() {
        let stop = Stoplist::from_reader("# header\nThe\n\n  an \n".as_bytes()).unwrap();
        assert_eq!(stop.len(), 2);
        assert!(stop.contains("the"));
        assert!(stop.contains("an"));
    }

    #[test]
    fn ngram_orders() {
        let terms: Vec<String> = ["nlp", "is", "awesome"].iter().map(|s| s.to_string()).collect();
        assert_eq!(ngrams(&terms, 2).unwrap(), ["nlp is", "is awesome"]);
        assert_eq!(ngrams(&terms, 1).unwrap(), terms);
        assert!(ngrams(&terms, 3).is_err());
        assert!(ngrams(&terms[..1], 2).unwrap().is_empty());
        assert!(ngrams(&[], 2).unwrap().is_empty());
    }

    #[test]
    fn bigram_count_matches_length() {
        for len in 0..6 {
            let terms: Vec<String> = (0..len).map(|i| format!("t{i}")).collect();
            let expect = if len == 0 { 0 } else { len - 1 };
            assert_eq!(ngrams(&terms, 2).unwrap().len(), expect);
        }
    }
}
