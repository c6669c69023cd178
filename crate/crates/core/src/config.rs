//! Flat `key=value` run configuration. One assignment per line, `#`
//! comments and blank lines ignored, values taken verbatim after the
//! first `=` (so values may themselves contain `=`). No sections, no
//! escapes, no trailing comments.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};

/// Parses assignments in file order. Duplicate keys are preserved here;
/// see [`last_wins`] for the usual merge.
pub fn parse_config(reader: impl BufRead) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::parse(lineno, format!("expected key=value, found {line:?}")))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(Error::parse(lineno, "empty key"));
        }
        if key.chars().any(char::is_whitespace) {
            return Err(Error::parse(lineno, format!("key {key:?} contains whitespace")));
        }
        pairs.push((key.to_string(), value.trim().to_string()));
    }
    Ok(pairs)
}

pub fn parse_config_path(path: impl AsRef<Path>) -> Result<Vec<(String, String)>> {
    parse_config(BufReader::new(File::open(path)?))
}

/// Later assignments override earlier ones.
pub fn last_wins(pairs: Vec<(String, String)>) -> HashMap<String, String> {
    pairs.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_assignments_in_order() {
        let text = "min_support=0.05\nmin_confidence = 0.4\n";
        let pairs = parse_config(text.as_bytes()).unwrap();
        assert_eq!(
            pairs,
            [
                ("min_support".to_string(), "0.05".to_string()),
                ("min_confidence".to_string(), "0.4".to_string()),
            ]
        );
    }

    #[test]
    fn skips_comments_and_blanks() {
        let text = "# run settings\n\n  \nseed=7\n# done\n";
        let pairs = parse_config(text.as_bytes()).unwrap();
        assert_eq!(pairs, [("seed".to_string(), "7".to_string())]);
    }

    #[test]
    fn splits_on_the_first_equals_only() {
        let pairs = parse_config("query=a=b=c\n".as_bytes()).unwrap();
        assert_eq!(pairs[0].1, "a=b=c");
    }

    #[test]
    fn empty_values_are_allowed() {
        let pairs = parse_config("stoplist=\n".as_bytes()).unwrap();
        assert_eq!(pairs[0], ("stoplist".to_string(), String::new()));
    }

    #[test]
    fn malformed_lines_carry_line_numbers() {
        for (text, line) in [
            ("a=1\nnot an assignment\n", 2),
            ("=1\n", 1),
            ("a=1\n\nmy key=2\n", 3),
        ] {
            match parse_config(text.as_bytes()) {
                Err(Error::Parse { line: got, .. }) => assert_eq!(got, line, "{text:?}"),
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn last_assignment_wins_in_the_merged_view() {
        let pairs = parse_config("a=1\na=2\n".as_bytes()).unwrap();
        assert_eq!(pairs.len(), 2);
        let map = last_wins(pairs);
        assert_eq!(map["a"], "2");
    }
}
