//! Building blocks for mining disease literature at desk scale: corpus
//! ingestion, dictionary-driven entity extraction, Apriori association
//! mining over the extracted entities, and TF-IDF text classification
//! with reproducible train/evaluate protocols.
//!
//! Every operation is deterministic given its inputs and an explicit seed;
//! nothing here touches the network.

pub mod assoc;
pub mod classify;
pub mod config;
pub mod error;
pub mod eval;
pub mod features;
pub mod ingest;
pub mod ner;
pub mod store;
pub mod synth;
pub mod textproc;

pub use error::{Error, Result};
