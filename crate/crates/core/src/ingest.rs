//! Corpus ingestion: Medline field-format dumps, a simple TSV corpus
//! format, deduplication, and PubMed query-string generation.
//!
//! No network access: query strings are generated for use with external
//! download tooling, and only already-downloaded dumps are parsed.

use std::collections::HashSet;
use std::io::{BufRead, Write};

use chrono::NaiveDate;

use crate::error::{Error, Result};

/// One article or abstract. `label` is the disease class when known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub doc_id: String,
    pub label: Option<String>,
    pub title: String,
    pub body: String,
}

impl Document {
    pub fn new(
        doc_id: impl Into<String>,
        label: Option<String>,
        title: impl Into<String>,
        body: impl Into<String>,
    ) -> Self {
        Document {
            doc_id: doc_id.into(),
            label,
            title: title.into(),
            body: body.into(),
        }
    }
}

/// Parameters of one PubMed search.
#[derive(Debug, Clone)]
pub struct QuerySpec {
    pub disease_term: String,
    pub date_from: NaiveDate,
    pub date_to: NaiveDate,
    pub language: String,
}

impl QuerySpec {
    /// Builds a spec from `YYYY/MM/DD` date strings.
    pub fn from_strs(
        disease_term: impl Into<String>,
        date_from: &str,
        date_to: &str,
        language: impl Into<String>,
    ) -> Result<Self> {
        let parse = |s: &str| {
            NaiveDate::parse_from_str(s, "%Y/%m/%d")
                .map_err(|_| Error::invalid(format!("invalid date {s:?}: expected YYYY/MM/DD")))
        };
        Ok(QuerySpec {
            disease_term: disease_term.into(),
            date_from: parse(date_from)?,
            date_to: parse(date_to)?,
            language: language.into(),
        })
    }
}

/// Renders the search template used for corpus collection. The disease
/// term is inserted verbatim into both the MeSH Major Topic and Title
/// slots; dates are formatted YYYY/MM/DD.
pub fn generate_pubmed_query(spec: &QuerySpec) -> Result<String> {
    if spec.date_from > spec.date_to {
        return Err(Error::DateRange {
            from: spec.date_from.to_string(),
            to: spec.date_to.to_string(),
        });
    }
    Ok(format!(
        "((({d}[MeSH Major Topic]) AND {d}[Title]) AND ('{from}'[Date - MeSH] : '{to}'[Date - MeSH])) AND ({lang}[Language])",
        d = spec.disease_term,
        from = spec.date_from.format("%Y/%m/%d"),
        to = spec.date_to.format("%Y/%m/%d"),
        lang = spec.language,
    ))
}

/// Result of a Medline parse: documents with abstracts, plus the count of
/// records that had to be skipped for lacking one.
#[derive(Debug, Default)]
pub struct MedlineParse {
    pub docs: Vec<Document>,
    pub skipped_no_abstract: usize,
}

/// Parses the Medline flat-file format: records separated by blank lines,
/// each field line `TAG - value` with the tag padded to 4 characters, and
/// continuation lines indented by 6 spaces (joined with single spaces).
///
/// `PMID` becomes the id, `TI` the title, `AB` the body; other tags are
/// read and ignored. A record without `PMID` is malformed; a record
/// without `AB` is counted and skipped. Whitespace runs inside values
/// collapse to single spaces.
pub fn parse_medline(reader: impl BufRead) -> Result<MedlineParse> {
    let mut out = MedlineParse::default();
    // (tag, value) pairs of the record being assembled
    let mut fields: Vec<(String, String)> = Vec::new();
    let mut record_start = 0usize;

    let finish = |fields: &mut Vec<(String, String)>,
                  start: usize,
                  out: &mut MedlineParse|
     -> Result<()> {
        if fields.is_empty() {
            return Ok(());
        }
        let take = |tag: &str| {
            fields
                .iter()
                .find(|(t, _)| t == tag)
                .map(|(_, v)| v.clone())
        };
        let pmid = take("PMID").filter(|v| !v.is_empty());
        let title = take("TI").unwrap_or_default();
        let body = take("AB").filter(|v| !v.is_empty());
        fields.clear();
        let Some(pmid) = pmid else {
            return Err(Error::parse(start, "record has no PMID"));
        };
        match body {
            Some(body) => out.docs.push(Document::new(pmid, None, title, body)),
            None => out.skipped_no_abstract += 1,
        }
        Ok(())
    };

    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if line.trim().is_empty() {
            finish(&mut fields, record_start, &mut out)?;
            continue;
        }
        if let Some(cont) = line.strip_prefix("      ") {
            let Some((_, value)) = fields.last_mut() else {
                return Err(Error::parse(lineno, "continuation line before any field"));
            };
            let cont = normalize_spaces(cont);
            if !cont.is_empty() {
                if !value.is_empty() {
                    value.push(' ');
                }
                value.push_str(&cont);
            }
            continue;
        }
        // field line: 4-character padded tag, then "- "
        let (tag_area, sep) = match (line.get(..4), line.get(4..6)) {
            (Some(t), Some(s)) => (t, s),
            _ => return Err(Error::parse(lineno, format!("malformed field line {line:?}"))),
        };
        let tag = tag_area.trim_end();
        let tag_ok = !tag.is_empty()
            && !tag.starts_with(' ')
            && tag.bytes().all(|b| b.is_ascii_alphanumeric());
        if sep != "- " || !tag_ok {
            return Err(Error::parse(lineno, format!("malformed field line {line:?}")));
        }
        if fields.is_empty() {
            record_start = lineno;
        }
        fields.push((tag.to_string(), normalize_spaces(&line[6..])));
    }
    finish(&mut fields, record_start, &mut out)?;
    Ok(out)
}

/// Whitespace runs collapse to single spaces. The line-wrapped Medline
/// format cannot represent them faithfully, so values are normalized on
/// the way in and serialize/parse round trips stay exact.
fn normalize_spaces(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Writes documents back out in Medline format (PMID/TI/AB fields only;
/// labels have no Medline representation). Newlines inside fields are
/// flattened to spaces, matching what a re-parse would produce.
pub fn serialize_medline(docs: &[Document], writer: &mut impl Write) -> Result<()> {
    let flat = |s: &str| s.split_whitespace().collect::<Vec<_>>().join(" ");
    for (i, doc) in docs.iter().enumerate() {
        if i > 0 {
            writeln!(writer)?;
        }
        writeln!(writer, "PMID- {}", flat(&doc.doc_id))?;
        if !doc.title.is_empty() {
            writeln!(writer, "TI  - {}", flat(&doc.title))?;
        }
        writeln!(writer, "AB  - {}", flat(&doc.body))?;
    }
    Ok(())
}

/// Parses the TSV corpus format `doc_id \t label \t title \t body`, one
/// document per line. An empty label column means unlabeled. Tabs and
/// newlines cannot occur inside fields by construction of the format.
pub fn parse_tsv_corpus(reader: impl BufRead, has_header: bool) -> Result<Vec<Document>> {
    let mut docs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if has_header && i == 0 {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 4 {
            return Err(Error::parse(
                lineno,
                format!("expected 4 tab-separated columns, found {}", cols.len()),
            ));
        }
        if cols[0].is_empty() {
            return Err(Error::parse(lineno, "empty doc_id"));
        }
        if cols[3].is_empty() {
            return Err(Error::parse(lineno, "empty body"));
        }
        let label = if cols[1].is_empty() {
            None
        } else {
            Some(cols[1].to_string())
        };
        docs.push(Document::new(cols[0], label, cols[2], cols[3]));
    }
    Ok(docs)
}

/// Writes the TSV corpus format. Tabs, carriage returns, and newlines
/// inside fields are replaced by single spaces so every row stays one line.
pub fn write_tsv_corpus(docs: &[Document], writer: &mut impl Write, header: bool) -> Result<()> {
    let clean = |s: &str| s.replace(['\t', '\n', '\r'], " ");
    if header {
        writeln!(writer, "doc_id\tlabel\ttitle\tbody")?;
    }
    for doc in docs {
        writeln!(
            writer,
            "{}\t{}\t{}\t{}",
            clean(&doc.doc_id),
            clean(doc.label.as_deref().unwrap_or("")),
            clean(&doc.title),
            clean(&doc.body),
        )?;
    }
    Ok(())
}

fn normalized_body(body: &str) -> String {
    body.to_lowercase()
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
}

/// Removes duplicates, keeping first occurrences and input order. A later
/// document is a duplicate if it repeats an earlier doc_id or an earlier
/// body up to case and whitespace.
pub fn dedupe(docs: Vec<Document>) -> (Vec<Document>, usize) {
    let mut seen_ids: HashSet<String> = HashSet::new();
    let mut seen_bodies: HashSet<String> = HashSet::new();
    let mut kept = Vec::with_capacity(docs.len());
    let mut removed = 0;
    for doc in docs {
        let norm = normalized_body(&doc.body);
        if seen_ids.contains(&doc.doc_id) || seen_bodies.contains(&norm) {
            removed += 1;
            continue;
        }
        seen_ids.insert(doc.doc_id.clone());
        seen_bodies.insert(norm);
        kept.push(doc);
    }
    (kept, removed)
}
