//! TSV corpus parser: no panics in either header mode; writing a parsed
//! corpus must reach a fixpoint after one cleaning pass.

#![no_main]

use libfuzzer_sys::fuzz_target;
use litmine::ingest::{dedupe, parse_tsv_corpus, write_tsv_corpus};

fuzz_target!(|data: &[u8]| {
    let _ = parse_tsv_corpus(data, false);
    let Ok(docs) = parse_tsv_corpus(data, true) else {
        return;
    };
    let mut first = Vec::new();
    write_tsv_corpus(&docs, &mut first, true).unwrap();
    let reparsed = parse_tsv_corpus(first.as_slice(), true).expect("written form must parse");
    let mut second = Vec::new();
    write_tsv_corpus(&reparsed, &mut second, true).unwrap();
    assert_eq!(first, second);
    let _ = dedupe(docs);
});
