//! Vocabulary file loader: no panics; save after load is a fixpoint and
//! a loaded vocabulary vectorizes without panicking.

#![no_main]

use libfuzzer_sys::fuzz_target;
use litmine::features::TfidfVocabulary;

fuzz_target!(|data: &[u8]| {
    let Ok(vocab) = TfidfVocabulary::load(data) else {
        return;
    };
    let mut first = Vec::new();
    vocab.save(&mut first).unwrap();
    let reloaded = TfidfVocabulary::load(first.as_slice()).expect("saved form must load");
    let mut second = Vec::new();
    reloaded.save(&mut second).unwrap();
    assert_eq!(first, second);

    let stems: Vec<String> = vocab
        .term(0)
        .into_iter()
        .flat_map(|t| t.split(' '))
        .map(str::to_string)
        .collect();
    let _ = vocab.vectorize(&stems);
    let _ = vocab.vectorize_counts(&stems);
});
