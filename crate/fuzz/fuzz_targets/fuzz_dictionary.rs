//! Dictionary parser and automaton compiler: arbitrary bytes must either
//! error cleanly or produce a matcher that extracts without panicking.

#![no_main]

use libfuzzer_sys::fuzz_target;
use litmine::ingest::Document;
use litmine::ner::{compile_dictionary, extract_entities, parse_dictionary};

fuzz_target!(|data: &[u8]| {
    let Ok(entries) = parse_dictionary(data) else {
        return;
    };
    let Ok(matcher) = compile_dictionary(&entries) else {
        return;
    };
    let body = entries
        .iter()
        .map(|e| e.canonical.as_str())
        .collect::<Vec<_>>()
        .join(" and ");
    let doc = Document::new("f1", None, "", body);
    let mentions = extract_entities(&doc, &matcher);
    for pair in mentions.windows(2) {
        assert!(pair[0].end <= pair[1].start, "overlapping spans");
    }
});
