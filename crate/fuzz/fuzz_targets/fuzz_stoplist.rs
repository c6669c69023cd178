//! Stoplist reader: arbitrary bytes, then membership probes.

#![no_main]

use libfuzzer_sys::fuzz_target;
use litmine::textproc::Stoplist;

fuzz_target!(|data: &[u8]| {
    let Ok(list) = Stoplist::from_reader(data) else {
        return;
    };
    let _ = list.len();
    let _ = list.contains("the");
    let _ = list.contains("");
    if let Ok(s) = std::str::from_utf8(data) {
        for word in s.split_whitespace().take(16) {
            let _ = list.contains(word);
        }
    }
});
