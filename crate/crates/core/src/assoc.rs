//! Apriori frequent-itemset mining and association rules ranked by
//! support, confidence, and lift.
//!
//! Supports are fractions of the transaction count. Candidate generation
//! is the classic level-wise join of the previous level with downward-
//! closure pruning, so the output is exactly the itemsets meeting
//! min_support.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::io::Write;

use crate::error::{Error, Result};
use crate::store::Transaction;

#[derive(Debug, Clone, PartialEq)]
pub struct FrequentItemset {
    pub items: BTreeSet<String>,
    pub support: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssociationRule {
    pub antecedent: BTreeSet<String>,
    pub consequent: BTreeSet<String>,
    /// supp(antecedent ∪ consequent)
    pub support: f64,
    /// support / supp(antecedent)
    pub confidence: f64,
    /// confidence / supp(consequent)
    pub lift: f64,
}

/// All itemsets with support >= min_support, sorted by (size, items).
pub fn frequent_itemsets(
    transactions: &[Transaction],
    min_support: f64,
) -> Result<Vec<FrequentItemset>> {
    if transactions.is_empty() {
        return Err(Error::invalid("no transactions to mine"));
    }
    if !(min_support > 0.0 && min_support <= 1.0) {
        return Err(Error::invalid(format!(
            "min_support {min_support} outside (0, 1]"
        )));
    }
    let total = transactions.len() as f64;

    // intern items; ids are assigned in sorted order so id order equals
    // lexicographic item order throughout
    let mut universe: Vec<&str> = transactions
        .iter()
        .flat_map(|t| t.items.iter().map(String::as_str))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    universe.sort_unstable();
    let id_of: HashMap<&str, u32> = universe
        .iter()
        .enumerate()
        .map(|(i, s)| (*s, i as u32))
        .collect();
    let tx: Vec<Vec<u32>> = transactions
        .iter()
        .map(|t| {
            let mut v: Vec<u32> = t.items.iter().map(|s| id_of[s.as_str()]).collect();
            v.sort_unstable();
            v
        })
        .collect();

    let is_subset = |needle: &[u32], hay: &[u32]| -> bool {
        let mut it = hay.iter();
        needle.iter().all(|n| it.any(|h| h == n))
    };
    let frequent_enough = |count: usize| (count as f64 / total) >= min_support;

    // level 1
    let mut counts: HashMap<u32, usize> = HashMap::new();
    for t in &tx {
        for &item in t {
            *counts.entry(item).or_insert(0) += 1;
        }
    }
    let mut level: Vec<(Vec<u32>, usize)> = counts
        .into_iter()
        .filter(|&(_, c)| frequent_enough(c))
        .map(|(i, c)| (vec![i], c))
        .collect();
    level.sort_unstable();

    let mut all: Vec<(Vec<u32>, usize)> = Vec::new();
    while !level.is_empty() {
        all.extend(level.iter().cloned());
        let prev: HashSet<&[u32]> = level.iter().map(|(s, _)| s.as_slice()).collect();
        let k = level[0].0.len();

        // join: pairs sharing the first k-1 items, then downward-closure prune
        let mut candidates: Vec<Vec<u32>> = Vec::new();
        for i in 0..level.len() {
            for j in (i + 1)..level.len() {
                let (a, b) = (&level[i].0, &level[j].0);
                if a[..k - 1] != b[..k - 1] {
                    break;
                }
                let mut cand = a.clone();
                cand.push(b[k - 1]);
                let all_subsets_frequent = (0..cand.len()).all(|drop| {
                    let sub: Vec<u32> = cand
                        .iter()
                        .enumerate()
                        .filter(|&(idx, _)| idx != drop)
                        .map(|(_, &v)| v)
                        .collect();
                    prev.contains(sub.as_slice())
                });
                if all_subsets_frequent {
                    candidates.push(cand);
                }
            }
        }

        level = candidates
            .into_iter()
            .filter_map(|cand| {
                let count = tx.iter().filter(|t| is_subset(&cand, t)).count();
                frequent_enough(count).then_some((cand, count))
            })
            .collect();
        level.sort_unstable();
    }

    all.sort();
    all.sort_by_key(|(s, _)| s.len());
    Ok(all
        .into_iter()
        .map(|(ids, count)| FrequentItemset {
            items: ids
                .iter()
                .map(|&i| universe[i as usize].to_string())
                .collect(),
            support: count as f64 / total,
        })
        .collect())
}

/// Every rule A -> (S \ A) over frequent itemsets S of size >= 2 whose
/// confidence meets min_confidence, sorted by lift then support
/// descending, then by (antecedent, consequent).
///
/// The input must be downward-closed, as `frequent_itemsets` produces;
/// subset supports are looked up, never recomputed.
pub fn generate_rules(frequent: &[FrequentItemset], min_confidence: f64) -> Vec<AssociationRule> {
    let support_of: HashMap<&BTreeSet<String>, f64> =
        frequent.iter().map(|f| (&f.items, f.support)).collect();
    let mut rules = Vec::new();
    for fi in frequent.iter().filter(|f| f.items.len() >= 2) {
        let items: Vec<&String> = fi.items.iter().collect();
        let k = items.len();
        for mask in 1..((1usize << k) - 1) {
            let antecedent: BTreeSet<String> = (0..k)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| items[i].clone())
                .collect();
            let consequent: BTreeSet<String> = (0..k)
                .filter(|i| mask & (1 << i) == 0)
                .map(|i| items[i].clone())
                .collect();
            let supp_a = *support_of
                .get(&antecedent)
                .expect("input itemsets are downward closed");
            let supp_c = *support_of
                .get(&consequent)
                .expect("input itemsets are downward closed");
            let confidence = fi.support / supp_a;
            if confidence >= min_confidence {
                rules.push(AssociationRule {
                    antecedent,
                    consequent,
                    support: fi.support,
                    confidence,
                    lift: confidence / supp_c,
                });
            }
        }
    }
    rules.sort_by(|a, b| {
        b.lift
            .partial_cmp(&a.lift)
            .unwrap()
            .then(b.support.partial_cmp(&a.support).unwrap())
            .then_with(|| (&a.antecedent, &a.consequent).cmp(&(&b.antecedent, &b.consequent)))
    });
    rules
}

/// Keeps rules whose item count (antecedent plus consequent) reaches
/// min_items, preserving order. Values of 0 or 1 keep everything.
pub fn filter_rules(rules: Vec<AssociationRule>, min_items: usize) -> Vec<AssociationRule> {
    rules
        .into_iter()
        .filter(|r| r.antecedent.len() + r.consequent.len() >= min_items)
        .collect()
}

/// Validates a reported (support, confidence, lift) triple and returns the
/// implied consequent support, confidence / lift.
pub fn check_rule_consistency(support: f64, confidence: f64, lift: f64) -> Result<f64> {
    if support <= 0.0 || confidence <= 0.0 || lift <= 0.0 {
        return Err(Error::invalid(format!(
            "non-positive rule metrics: support {support}, confidence {confidence}, lift {lift}"
        )));
    }
    if confidence > 1.0 {
        return Err(Error::invalid(format!("confidence {confidence} exceeds 1")));
    }
    if support > confidence {
        return Err(Error::invalid(format!(
            "support {support} exceeds confidence {confidence}"
        )));
    }
    let implied = confidence / lift;
    if !(implied > 0.0 && implied <= 1.0) {
        return Err(Error::invalid(format!(
            "implied consequent support {implied} outside (0, 1]"
        )));
    }
    Ok(implied)
}

/// Chain rendering for reports: antecedent items then consequent items,
/// each block in lexicographic order, joined by arrows.
pub fn render_chain(rule: &AssociationRule) -> String {
    rule.antecedent
        .iter()
        .chain(rule.consequent.iter())
        .cloned()
        .collect::<Vec<_>>()
        .join(" -> ")
}

/// TSV export: `antecedent \t consequent \t support \t confidence \t lift`
/// with itemsets pipe-joined and metrics at 9 decimal places.
pub fn write_rules(rules: &[AssociationRule], writer: &mut impl Write) -> Result<()> {
    writeln!(writer, "antecedent\tconsequent\tsupport\tconfidence\tlift")?;
    for r in rules {
        let join = |s: &BTreeSet<String>| s.iter().cloned().collect::<Vec<_>>().join("|");
        writeln!(
            writer,
            "{}\t{}\t{:.9}\t{:.9}\t{:.9}",
            join(&r.antecedent),
            join(&r.consequent),
            r.support,
            r.confidence,
            r.lift,
        )?;
    }
    Ok(())
}
