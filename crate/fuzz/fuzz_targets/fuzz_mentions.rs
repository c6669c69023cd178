//! Mentions table loader: no panics, and saving a loaded store must be a
//! fixpoint so the on-disk form is canonical.

#![no_main]

use libfuzzer_sys::fuzz_target;
use litmine::store::EntityStore;

fuzz_target!(|data: &[u8]| {
    let Ok(store) = EntityStore::load(data) else {
        return;
    };
    let mut first = Vec::new();
    store.save(&mut first).unwrap();
    let reloaded = EntityStore::load(first.as_slice()).expect("saved form must load");
    let mut second = Vec::new();
    reloaded.save(&mut second).unwrap();
    assert_eq!(first, second);
    let _ = store.to_transactions();
    let _ = store.common_entities(None, 2);
});
