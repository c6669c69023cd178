//! Tokenizer, stemmer, and n-gram builder over arbitrary text: no panics,
//! no UTF-8 boundary slips, tokens always lowercase alphanumeric.

#![no_main]

use libfuzzer_sys::fuzz_target;
use litmine::features::preprocess;
use litmine::textproc::{ngrams, remove_stopwords, stem, tokenize, Stoplist};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let tokens = tokenize(text);
    for t in &tokens {
        assert!(!t.surface.is_empty());
        assert!(t
            .surface
            .chars()
            .all(|c| c.is_alphanumeric() && !c.is_uppercase()));
    }
    let stoplist = Stoplist::default_english();
    let kept = remove_stopwords(&tokens, &stoplist);
    let stems: Vec<String> = kept.iter().map(|t| stem(&t.surface)).collect();
    let _ = ngrams(&stems, 2);
    let _ = preprocess(text, &stoplist);
});
