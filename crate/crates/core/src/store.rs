//! File-backed store for extracted mentions, with the cross-disease
//! queries and the transaction projection used by rule mining. Replaces
//! an external database: everything round-trips through one TSV file.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::ner::{EntityMention, EntityType};

const HEADER: &str = "doc_id\tdoc_label\tentity_type\tcanonical\tsurface\tstart\tend";

/// Immutable mention store with secondary indexes by entity and by label.
#[derive(Debug, Default)]
pub struct EntityStore {
    mentions: Vec<EntityMention>,
    /// (entity_type, canonical) -> mention indexes
    by_entity: HashMap<(EntityType, String), Vec<usize>>,
    /// doc_label -> mention indexes (labeled mentions only)
    by_label: HashMap<String, Vec<usize>>,
}

/// One row of the cross-disease report: an entity and the sorted list of
/// distinct cancer labels it occurs under.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommonEntityRow {
    pub entity_type: EntityType,
    pub canonical: String,
    pub cancers: Vec<String>,
}

/// The per-document itemset fed to mining: canonical entities plus the
/// label item `cancer:<label>` when the document is labeled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transaction {
    pub doc_id: String,
    pub items: BTreeSet<String>,
}

impl EntityStore {
    pub fn from_mentions(mentions: Vec<EntityMention>) -> Self {
        let mut store = EntityStore {
            mentions,
            ..Default::default()
        };
        for (i, m) in store.mentions.iter().enumerate() {
            store
                .by_entity
                .entry((m.entity_type.clone(), m.canonical.clone()))
                .or_default()
                .push(i);
            if let Some(label) = &m.doc_label {
                store.by_label.entry(label.clone()).or_default().push(i);
            }
        }
        store
    }

    pub fn mentions(&self) -> &[EntityMention] {
        &self.mentions
    }

    pub fn len(&self) -> usize {
        self.mentions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mentions.is_empty()
    }

    /// Entities occurring under at least `min_cancers` distinct document
    /// labels, optionally restricted to one entity type. Unlabeled
    /// mentions cannot witness a cancer and are ignored. Rows sort by
    /// (entity_type, canonical); each cancer list sorts lexicographically.
    pub fn common_entities(
        &self,
        entity_type: Option<&EntityType>,
        min_cancers: usize,
    ) -> Result<Vec<CommonEntityRow>> {
        if min_cancers < 2 {
            return Err(Error::invalid("min_cancers must be at least 2"));
        }
        let mut rows = Vec::new();
        let mut keys: Vec<&(EntityType, String)> = self.by_entity.keys().collect();
        keys.sort();
        for key in keys {
            let (ty, canonical) = key;
            if entity_type.is_some_and(|want| want != ty) {
                continue;
            }
            let labels: BTreeSet<&str> = self.by_entity[key]
                .iter()
                .filter_map(|&i| self.mentions[i].doc_label.as_deref())
                .collect();
            if labels.len() >= min_cancers {
                rows.push(CommonEntityRow {
                    entity_type: ty.clone(),
                    canonical: canonical.clone(),
                    cancers: labels.into_iter().map(str::to_string).collect(),
                });
            }
        }
        Ok(rows)
    }

    /// One transaction per distinct doc_id, ordered by doc_id: the set of
    /// canonical entities mentioned, plus `cancer:<label>` when labeled.
    /// Documents without mentions never entered the store, so every
    /// transaction is non-empty.
    pub fn to_transactions(&self) -> Vec<Transaction> {
        let mut by_doc: BTreeMap<&str, Transaction> = BTreeMap::new();
        for m in &self.mentions {
            let t = by_doc.entry(&m.doc_id).or_insert_with(|| Transaction {
                doc_id: m.doc_id.clone(),
                items: BTreeSet::new(),
            });
            t.items.insert(m.canonical.clone());
            if let Some(label) = &m.doc_label {
                t.items.insert(format!("cancer:{label}"));
            }
        }
        by_doc.into_values().collect()
    }

    /// Writes the mentions TSV: a fixed header, one row per mention, in
    /// store order.
    pub fn save(&self, writer: &mut impl Write) -> Result<()> {
        writeln!(writer, "{HEADER}")?;
        for m in &self.mentions {
            writeln!(
                writer,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                m.doc_id,
                m.doc_label.as_deref().unwrap_or(""),
                m.entity_type,
                m.canonical,
                m.surface,
                m.start,
                m.end,
            )?;
        }
        Ok(())
    }

    pub fn save_path(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.save(&mut file)
    }

    /// Reads a mentions TSV produced by `save`. Every malformed row is
    /// reported with its 1-based line number.
    pub fn load(reader: impl BufRead) -> Result<Self> {
        let mut mentions = Vec::new();
        let mut lines = reader.lines().enumerate();
        match lines.next() {
            None => return Err(Error::parse(1, "missing header line")),
            Some((_, line)) => {
                let line = line?;
                if line != HEADER {
                    return Err(Error::parse(1, format!("unexpected header {line:?}")));
                }
            }
        }
        for (i, line) in lines {
            let line = line?;
            let lineno = i + 1;
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 7 {
                return Err(Error::parse(
                    lineno,
                    format!("expected 7 tab-separated columns, found {}", cols.len()),
                ));
            }
            if cols[0].is_empty() {
                return Err(Error::parse(lineno, "empty doc_id"));
            }
            let entity_type =
                EntityType::new(cols[2]).map_err(|e| Error::parse(lineno, e.to_string()))?;
            let parse_idx = |s: &str, what: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::parse(lineno, format!("bad {what} {s:?}")))
            };
            let start = parse_idx(cols[5], "start")?;
            let end = parse_idx(cols[6], "end")?;
            if start >= end {
                return Err(Error::parse(lineno, format!("empty span {start}..{end}")));
            }
            mentions.push(EntityMention {
                doc_id: cols[0].to_string(),
                doc_label: (!cols[1].is_empty()).then(|| cols[1].to_string()),
                entity_type,
                canonical: cols[3].to_string(),
                surface: cols[4].to_string(),
                start,
                end,
            });
        }
        Ok(EntityStore::from_mentions(mentions))
    }

    pub fn load_path(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        EntityStore::load(std::io::BufReader::new(file))
    }
}
