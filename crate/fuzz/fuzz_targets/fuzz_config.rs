//! Config parser: arbitrary bytes never panic; accepted pairs collapse
//! through last_wins.

#![no_main]

use libfuzzer_sys::fuzz_target;
use litmine::config::{last_wins, parse_config};

fuzz_target!(|data: &[u8]| {
    let Ok(pairs) = parse_config(data) else {
        return;
    };
    for (key, _) in &pairs {
        assert!(!key.is_empty());
        assert!(!key.chars().any(char::is_whitespace));
    }
    let _ = last_wins(pairs);
});
