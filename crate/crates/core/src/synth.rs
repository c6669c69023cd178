//! Synthetic labeled corpora for benchmarking the classification
//! pipeline without shipping real abstracts. Each class gets its own
//! small marker vocabulary; all classes share a larger noise pool, so
//! documents are separable but not trivially single-token.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::ingest::Document;
use crate::textproc::stem;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthSpec {
    pub classes: usize,
    pub docs_per_class: usize,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec {
            classes: 10,
            docs_per_class: 60,
            seed: 42,
        }
    }
}

const MARKERS_PER_CLASS: usize = 8;
const NOISE_WORDS: usize = 40;

const CONSONANTS: &[u8] = b"bcdfglmnprstvz";
const VOWELS: &[u8] = b"aeiou";

fn syllable_word(rng: &mut ChaCha20Rng) -> String {
    let syllables = rng.gen_range(3..=4);
    let mut word = String::new();
    for _ in 0..syllables {
        word.push(CONSONANTS[rng.gen_range(0..CONSONANTS.len())] as char);
        word.push(VOWELS[rng.gen_range(0..VOWELS.len())] as char);
    }
    word
}

/// Draws words whose stems are pairwise distinct, so class markers stay
/// separated even after preprocessing.
fn fresh_words(rng: &mut ChaCha20Rng, count: usize, used_stems: &mut HashSet<String>) -> Vec<String> {
    let mut words = Vec::with_capacity(count);
    while words.len() < count {
        let word = syllable_word(rng);
        if used_stems.insert(stem(&word)) {
            words.push(word);
        }
    }
    words
}

/// Generates classes x docs_per_class labeled documents, deterministic
/// for a given spec.
pub fn generate(spec: &SynthSpec) -> Result<Vec<Document>> {
    if spec.classes < 2 {
        return Err(Error::invalid("need at least two classes"));
    }
    if spec.docs_per_class < 2 {
        return Err(Error::invalid("need at least two documents per class"));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
    let mut used_stems = HashSet::new();
    let noise = fresh_words(&mut rng, NOISE_WORDS, &mut used_stems);
    let markers: Vec<Vec<String>> = (0..spec.classes)
        .map(|_| fresh_words(&mut rng, MARKERS_PER_CLASS, &mut used_stems))
        .collect();

    let mut docs = Vec::with_capacity(spec.classes * spec.docs_per_class);
    for class in 0..spec.classes {
        let label = format!("class_{class:02}");
        for i in 0..spec.docs_per_class {
            let doc_id = format!("syn-{:04}", docs.len());
            let title = format!("synthetic record {label} {i}");
            let body = compose_body(&mut rng, &markers[class], &noise);
            docs.push(Document::new(doc_id, Some(label.clone()), title, body));
        }
    }
    Ok(docs)
}

fn compose_body(rng: &mut ChaCha20Rng, markers: &[String], noise: &[String]) -> String {
    let mut tokens: Vec<&str> = Vec::new();
    for _ in 0..rng.gen_range(6..=12) {
        tokens.push(markers[rng.gen_range(0..markers.len())].as_str());
    }
    for _ in 0..rng.gen_range(10..=20) {
        tokens.push(noise[rng.gen_range(0..noise.len())].as_str());
    }
    tokens.shuffle(rng);

    // sentence dressing: capitalization, the odd year and percentage
    let mut body = String::new();
    let mut sentence_len = 0usize;
    let mut target = rng.gen_range(5..=9);
    for token in tokens {
        if sentence_len == 0 {
            if !body.is_empty() {
                body.push(' ');
            }
            let mut chars = token.chars();
            if let Some(first) = chars.next() {
                body.push(first.to_ascii_uppercase());
                body.push_str(chars.as_str());
            }
        } else {
            body.push(' ');
            body.push_str(token);
        }
        sentence_len += 1;
        if sentence_len >= target {
            if rng.gen_range(0..4) == 0 {
                body.push_str(&format!(" in {}", rng.gen_range(2000..=2020)));
            }
            body.push('.');
            sentence_len = 0;
            target = rng.gen_range(5..=9);
        }
    }
    if !body.ends_with('.') {
        body.push('.');
    }
    body
}
