//! Dictionary-driven entity extraction.
//!
//! Dictionaries are compiled into a token-level Aho-Corasick automaton:
//! every canonical term and synonym becomes a pattern over normalized
//! tokens, so matches are always token-aligned ("ras" never fires inside
//! "erasure") and case-insensitive. Matching runs on unstemmed tokens;
//! stemming would corrupt nomenclature like "ras" or "palb2".

use std::collections::{HashMap, VecDeque};
use std::io::BufRead;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ingest::Document;
use crate::textproc::tokenize;

/// Entity category. Six kinds are conventional (gene, drug, diagnostic,
/// site, risk_factor, symptom) but dictionaries may introduce others;
/// any lowercase `[a-z0-9_]+` name is accepted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EntityType(String);

impl EntityType {
    pub fn new(name: &str) -> Result<Self> {
        let ok = !name.is_empty()
            && name.bytes().all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_')
            && name.bytes().next().is_some_and(|b| b.is_ascii_lowercase());
        if !ok {
            return Err(Error::invalid(format!(
                "entity type {name:?} is not a lowercase [a-z0-9_] name"
            )));
        }
        Ok(EntityType(name.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl std::fmt::Display for EntityType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// One dictionary line: a canonical term and its synonyms, all mapping to
/// the same entity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DictionaryEntry {
    pub entity_type: EntityType,
    pub canonical: String,
    pub synonyms: Vec<String>,
}

/// A term normalized for matching: case-folded, punctuation-split tokens.
pub fn normalize_term(term: &str) -> Vec<String> {
    tokenize(term).into_iter().map(|t| t.surface).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Target {
    entity_type: EntityType,
    canonical: String,
}

impl Target {
    fn render(&self) -> String {
        format!("{}:{}", self.entity_type, self.canonical)
    }
}

#[derive(Debug, Default)]
struct Node {
    children: HashMap<u32, u32>,
    fail: u32,
    /// pattern index terminating at this node, if any
    output: Option<u32>,
    /// next node on the output chain (a suffix of this node's path that is
    /// itself a pattern); u32::MAX terminates the chain
    out_link: u32,
}

const NO_LINK: u32 = u32::MAX;

/// Compiled multi-pattern matcher. Immutable after construction and safe
/// to share across threads.
#[derive(Debug)]
pub struct MatcherAutomaton {
    /// normalized term (tokens joined by one space) -> target entity
    terms: HashMap<String, Target>,
    token_ids: HashMap<String, u32>,
    nodes: Vec<Node>,
    /// (token length, term key) per pattern
    patterns: Vec<(usize, String)>,
    max_pattern_tokens: usize,
}

/// Builds the automaton from dictionary entries. Every canonical and every
/// synonym is inserted after normalization; two terms that normalize
/// identically must agree on (type, canonical) or compilation fails with a
/// collision error.
pub fn compile_dictionary(entries: &[DictionaryEntry]) -> Result<MatcherAutomaton> {
    if entries.is_empty() {
        return Err(Error::invalid("empty dictionary"));
    }
    let mut terms: HashMap<String, Target> = HashMap::new();
    let mut keys_in_order: Vec<String> = Vec::new();
    for entry in entries {
        let target = Target {
            entity_type: entry.entity_type.clone(),
            canonical: entry.canonical.clone(),
        };
        for term in std::iter::once(&entry.canonical).chain(&entry.synonyms) {
            let tokens = normalize_term(term);
            if tokens.is_empty() {
                return Err(Error::invalid(format!(
                    "term {term:?} normalizes to no tokens"
                )));
            }
            let key = tokens.join(" ");
            match terms.get(&key) {
                None => {
                    keys_in_order.push(key.clone());
                    terms.insert(key, target.clone());
                }
                Some(existing) if *existing == target => {}
                Some(existing) => {
                    return Err(Error::Collision {
                        term: key,
                        first: existing.render(),
                        second: target.render(),
                    });
                }
            }
        }
    }

    let mut automaton = MatcherAutomaton {
        terms,
        token_ids: HashMap::new(),
        nodes: vec![Node::default()],
        patterns: Vec::new(),
        max_pattern_tokens: 0,
    };
    for key in keys_in_order {
        automaton.insert_pattern(key);
    }
    automaton.link();
    Ok(automaton)
}

impl MatcherAutomaton {
    fn intern(&mut self, token: &str) -> u32 {
        if let Some(&id) = self.token_ids.get(token) {
            return id;
        }
        let id = self.token_ids.len() as u32;
        self.token_ids.insert(token.to_string(), id);
        id
    }

    fn insert_pattern(&mut self, key: String) {
        let tokens: Vec<&str> = key.split(' ').collect();
        let mut node = 0u32;
        for tok in &tokens {
            let id = self.intern(tok);
            let next = match self.nodes[node as usize].children.get(&id) {
                Some(&n) => n,
                None => {
                    let n = self.nodes.len() as u32;
                    self.nodes.push(Node::default());
                    self.nodes[node as usize].children.insert(id, n);
                    n
                }
            };
            node = next;
        }
        let idx = self.patterns.len() as u32;
        self.max_pattern_tokens = self.max_pattern_tokens.max(tokens.len());
        self.patterns.push((tokens.len(), key));
        self.nodes[node as usize].output = Some(idx);
    }

    /// BFS failure links; out_link chains nodes whose paths are suffixes of
    /// the current path and are themselves complete patterns.
    fn link(&mut self) {
        let mut queue = VecDeque::new();
        let roots: Vec<(u32, u32)> = self.nodes[0].children.iter().map(|(&t, &n)| (t, n)).collect();
        for (_, n) in roots {
            self.nodes[n as usize].fail = 0;
            self.nodes[n as usize].out_link = NO_LINK;
            queue.push_back(n);
        }
        while let Some(u) = queue.pop_front() {
            let edges: Vec<(u32, u32)> = self.nodes[u as usize]
                .children
                .iter()
                .map(|(&t, &n)| (t, n))
                .collect();
            for (tok, v) in edges {
                let mut f = self.nodes[u as usize].fail;
                let fail = loop {
                    if let Some(&next) = self.nodes[f as usize].children.get(&tok) {
                        break next;
                    }
                    if f == 0 {
                        break 0;
                    }
                    f = self.nodes[f as usize].fail;
                };
                let fail = if fail == v { 0 } else { fail };
                self.nodes[v as usize].fail = fail;
                self.nodes[v as usize].out_link = if self.nodes[fail as usize].output.is_some() {
                    fail
                } else {
                    self.nodes[fail as usize].out_link
                };
                queue.push_back(v);
            }
        }
    }

    /// Case-insensitive lookup of a whole term.
    pub fn lookup(&self, term: &str) -> Option<(&EntityType, &str)> {
        let key = normalize_term(term).join(" ");
        self.terms
            .get(&key)
            .map(|t| (&t.entity_type, t.canonical.as_str()))
    }

    /// Read-only view of the normalized term map (term key -> type,
    /// canonical); keys are tokens joined by single spaces.
    pub fn term_map(&self) -> impl Iterator<Item = (&str, &EntityType, &str)> {
        self.terms
            .iter()
            .map(|(k, t)| (k.as_str(), &t.entity_type, t.canonical.as_str()))
    }

    pub fn pattern_count(&self) -> usize {
        self.patterns.len()
    }

    pub fn max_pattern_tokens(&self) -> usize {
        self.max_pattern_tokens
    }

    /// All raw (start, end) pattern hits over a token sequence, unresolved.
    fn scan(&self, tokens: &[String]) -> Vec<RawMatch> {
        let mut hits = Vec::new();
        let mut state = 0u32;
        for (i, tok) in tokens.iter().enumerate() {
            match self.token_ids.get(tok.as_str()) {
                None => state = 0,
                Some(&id) => {
                    state = loop {
                        if let Some(&next) = self.nodes[state as usize].children.get(&id) {
                            break next;
                        }
                        if state == 0 {
                            break 0;
                        }
                        state = self.nodes[state as usize].fail;
                    };
                }
            }
            let mut n = state;
            loop {
                if let Some(p) = self.nodes[n as usize].output {
                    let len = self.patterns[p as usize].0;
                    hits.push(RawMatch {
                        start: i + 1 - len,
                        end: i + 1,
                        pattern: p,
                    });
                }
                n = self.nodes[n as usize].out_link;
                if n == NO_LINK {
                    break;
                }
                if self.nodes[n as usize].output.is_none() {
                    break;
                }
            }
        }
        hits
    }
}

#[derive(Debug, Clone, Copy)]
struct RawMatch {
    start: usize,
    end: usize,
    pattern: u32,
}

impl RawMatch {
    fn len(&self) -> usize {
        self.end - self.start
    }

    fn overlaps(&self, other: &RawMatch) -> bool {
        self.start < other.end && other.start < self.end
    }
}

/// Longest-match-wins overlap resolution: repeatedly accept the longest
/// remaining match (earliest start on ties) and discard everything it
/// overlaps. Distinct matches never share an exact span, so the order is
/// total and the result deterministic.
fn resolve(mut raw: Vec<RawMatch>) -> Vec<RawMatch> {
    raw.sort_by(|a, b| b.len().cmp(&a.len()).then(a.start.cmp(&b.start)));
    let mut chosen: Vec<RawMatch> = Vec::new();
    for m in raw {
        if !chosen.iter().any(|c| c.overlaps(&m)) {
            chosen.push(m);
        }
    }
    chosen.sort_by_key(|m| m.start);
    chosen
}

/// One extracted mention. `start..end` are half-open token indices into
/// the tokenized document body; `surface` is that token slice joined by
/// spaces (lowercase by construction).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntityMention {
    pub doc_id: String,
    pub doc_label: Option<String>,
    pub entity_type: EntityType,
    pub canonical: String,
    pub surface: String,
    pub start: usize,
    pub end: usize,
}

/// Extracts all dictionary mentions from one document, overlap-resolved
/// and sorted by start position.
pub fn extract_entities(doc: &Document, matcher: &MatcherAutomaton) -> Vec<EntityMention> {
    let tokens: Vec<String> = tokenize(&doc.body).into_iter().map(|t| t.surface).collect();
    resolve(matcher.scan(&tokens))
        .into_iter()
        .map(|m| {
            let key = &matcher.patterns[m.pattern as usize].1;
            let target = &matcher.terms[key];
            EntityMention {
                doc_id: doc.doc_id.clone(),
                doc_label: doc.label.clone(),
                entity_type: target.entity_type.clone(),
                canonical: target.canonical.clone(),
                surface: tokens[m.start..m.end].join(" "),
                start: m.start,
                end: m.end,
            }
        })
        .collect()
}

/// Per-document extraction over a whole corpus, concatenated in corpus
/// order. Documents are processed in parallel; output order is fixed.
pub fn extract_corpus(docs: &[Document], matcher: &MatcherAutomaton) -> Vec<EntityMention> {
    docs.par_iter()
        .map(|d| extract_entities(d, matcher))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Parses the dictionary format: `entity_type \t canonical \t syn1|syn2`,
/// `#` comments and blank lines ignored. The synonym column may be empty
/// or absent entirely.
pub fn parse_dictionary(reader: impl BufRead) -> Result<Vec<DictionaryEntry>> {
    let mut entries = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() < 2 || cols.len() > 3 {
            return Err(Error::parse(
                lineno,
                format!("expected 2 or 3 tab-separated columns, found {}", cols.len()),
            ));
        }
        let entity_type = EntityType::new(cols[0].trim())
            .map_err(|e| Error::parse(lineno, e.to_string()))?;
        let canonical = cols[1].trim();
        if canonical.is_empty() {
            return Err(Error::parse(lineno, "empty canonical term"));
        }
        let synonyms: Vec<String> = cols
            .get(2)
            .map(|s| {
                s.split('|')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(str::to_string)
                    .collect()
            })
            .unwrap_or_default();
        let mut seen: Vec<String> = Vec::new();
        for syn in &synonyms {
            let key = normalize_term(syn).join(" ");
            if seen.contains(&key) {
                return Err(Error::parse(lineno, format!("duplicate synonym {syn:?}")));
            }
            seen.push(key);
        }
        entries.push(DictionaryEntry {
            entity_type,
            canonical: canonical.to_string(),
            synonyms,
        });
    }
    Ok(entries)
}

pub fn parse_dictionary_path(path: impl AsRef<std::path::Path>) -> Result<Vec<DictionaryEntry>> {
    let file = std::fs::File::open(path)?;
    parse_dictionary(std::io::BufReader::new(file))
}
