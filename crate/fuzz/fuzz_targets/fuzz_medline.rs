//! Medline parser: must never panic, and a successful parse must survive
//! a serialize/re-parse round trip unchanged.

#![no_main]

use libfuzzer_sys::fuzz_target;
use litmine::ingest::{parse_medline, serialize_medline};

fuzz_target!(|data: &[u8]| {
    let Ok(parsed) = parse_medline(data) else {
        return;
    };
    let mut buf = Vec::new();
    serialize_medline(&parsed.docs, &mut buf).unwrap();
    let again = parse_medline(buf.as_slice()).expect("serialized form must parse");
    assert_eq!(again.docs, parsed.docs);
    assert_eq!(again.skipped_no_abstract, 0);
});
