//! Model file loader: no panics; save after load is a fixpoint and the
//! loaded classifier predicts without panicking.

#![no_main]

use libfuzzer_sys::fuzz_target;
use litmine::classify::Classifier;

fuzz_target!(|data: &[u8]| {
    let Ok(classifier) = Classifier::load(data) else {
        return;
    };
    let mut first = Vec::new();
    classifier.save(&mut first).unwrap();
    let reloaded = Classifier::load(first.as_slice()).expect("saved form must load");
    let mut second = Vec::new();
    reloaded.save(&mut second).unwrap();
    assert_eq!(first, second);

    let _ = classifier.predict_stems(&[]);
    let stems: Vec<String> = classifier
        .vocab()
        .term(0)
        .into_iter()
        .flat_map(|t| t.split(' '))
        .map(str::to_string)
        .collect();
    let _ = classifier.predict_stems(&stems);
});
