//! Relative-frequency grammar extraction.
//!
//! Trees are normalized first: function tags and indices are dropped, empty
//! elements removed, and `X -> X` unary chains collapsed. Nodes with more
//! than two children are right-binarized with `@PARENT|C2+...+Cn`
//! intermediates. A `TOP` start symbol dominates every root.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tree::{NodeLabel, Tree};

pub const START: &str = "TOP";
pub const UNK: &str = "<UNK>";
pub const INTERMEDIATE_PREFIX: char = '@';

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rule {
    pub lhs: String,
    pub rhs: Vec<String>,
    pub logp: f64,
    #[serde(default)]
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LexEntry {
    pub pos: String,
    pub token: String,
    pub logp: f64,
    #[serde(default)]
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grammar {
    pub start: String,
    /// Sorted by `(lhs, rhs)`; the position is the rule's tie-break rank.
    pub rules: Vec<Rule>,
    /// Sorted by `(pos, token)`. Each POS has one `<UNK>` entry.
    pub lexicon: Vec<LexEntry>,
}

impl Grammar {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("grammar serializes")
    }

    pub fn from_json(text: &str) -> Result<Grammar> {
        let grammar: Grammar = serde_json::from_str(text).map_err(|e| Error::Grammar(e.to_string()))?;
        grammar.validate()?;
        Ok(grammar)
    }

    fn validate(&self) -> Result<()> {
        for rule in &self.rules {
            if rule.rhs.is_empty() || rule.rhs.len() > 2 {
                return Err(Error::Grammar(format!(
                    "rule {} -> {} is not unary or binary",
                    rule.lhs,
                    rule.rhs.join(" ")
                )));
            }
            if !rule.logp.is_finite() || rule.logp > 1e-9 {
                return Err(Error::Grammar(format!("rule {} has log-probability {}", rule.lhs, rule.logp)));
            }
        }
        if let Some(e) = self.lexicon.iter().find(|e| !e.logp.is_finite() || e.logp > 1e-9) {
            return Err(Error::Grammar(format!("lexical entry {} {} has log-probability {}", e.pos, e.token, e.logp)));
        }
        Ok(())
    }

    pub fn rule_logp(&self, lhs: &str, rhs: &[&str]) -> Option<f64> {
        self.rules
            .iter()
            .find(|r| r.lhs == lhs && r.rhs.iter().map(String::as_str).eq(rhs.iter().copied()))
            .map(|r| r.logp)
    }
}

/// Strip tags and indices, drop empty elements, collapse `X -> X` unaries.
/// Returns `None` when nothing overt remains.
pub fn normalize_tree(tree: &Tree) -> Option<Tree> {
    match tree {
        Tree::Leaf { .. } => (!tree.is_empty_element()).then(|| tree.clone()),
        Tree::Internal { label, children } => {
            let mut kept: Vec<Tree> = children.iter().filter_map(normalize_tree).collect();
            if kept.is_empty() {
                return None;
            }
            if kept.len() == 1 && kept[0].label().is_some_and(|l| l.category == label.category) {
                return kept.pop();
            }
            Some(Tree::internal(NodeLabel::new(label.category.clone()), kept))
        }
    }
}

fn symbol(node: &Tree) -> String {
    match node {
        Tree::Leaf { pos, .. } => pos.clone(),
        Tree::Internal { label, .. } => label.category.clone(),
    }
}

/// Binary-branching productions for one node's children.
pub(crate) fn binarize(lhs: &str, rhs: &[String]) -> Vec<(String, Vec<String>)> {
    let mut out = Vec::new();
    let mut parent = lhs.to_string();
    let mut rest = rhs;
    while rest.len() > 2 {
        let tail = format!("{INTERMEDIATE_PREFIX}{lhs}|{}", rest[1..].join("+"));
        out.push((parent, vec![rest[0].clone(), tail.clone()]));
        parent = tail;
        rest = &rest[1..];
    }
    out.push((parent, rest.to_vec()));
    out
}

#[derive(Default)]
struct Counts {
    rules: BTreeMap<(String, Vec<String>), u64>,
    lexicon: BTreeMap<(String, String), u64>,
}

impl Counts {
    fn add(&mut self, node: &Tree) {
        match node {
            Tree::Leaf { pos, token } => *self.lexicon.entry((pos.clone(), token.clone())).or_default() += 1,
            Tree::Internal { label, children } => {
                let rhs: Vec<String> = children.iter().map(symbol).collect();
                for production in binarize(&label.category, &rhs) {
                    *self.rules.entry(production).or_default() += 1;
                }
                for child in children {
                    self.add(child);
                }
            }
        }
    }
}

/// Relative-frequency estimate over a corpus.
///
/// Lexical probabilities reserve one count per POS for unknown words:
/// `P(w|T) = c(T,w) / (c(T)+1)` and `P(<UNK>|T) = 1 / (c(T)+1)`.
pub fn extract_grammar(trees: &[Tree]) -> Result<Grammar> {
    let mut counts = Counts::default();
    let mut used = 0;
    for tree in trees {
        let Some(norm) = normalize_tree(tree) else { continue };
        used += 1;
        *counts.rules.entry((START.to_string(), vec![symbol(&norm)])).or_default() += 1;
        counts.add(&norm);
    }
    if used == 0 {
        return Err(Error::Grammar("no trees with overt tokens".into()));
    }

    let mut lhs_totals: BTreeMap<&str, u64> = BTreeMap::new();
    for ((lhs, _), c) in &counts.rules {
        *lhs_totals.entry(lhs).or_default() += c;
    }
    let rules = counts
        .rules
        .iter()
        .map(|((lhs, rhs), &count)| Rule {
            lhs: lhs.clone(),
            rhs: rhs.clone(),
            logp: (count as f64 / lhs_totals[lhs.as_str()] as f64).ln(),
            count,
        })
        .collect();

    let mut pos_totals: BTreeMap<&str, u64> = BTreeMap::new();
    for ((pos, _), c) in &counts.lexicon {
        *pos_totals.entry(pos).or_default() += c;
    }
    let mut lexicon: Vec<LexEntry> = counts
        .lexicon
        .iter()
        .map(|((pos, token), &count)| LexEntry {
            pos: pos.clone(),
            token: token.clone(),
            logp: (count as f64 / (pos_totals[pos.as_str()] + 1) as f64).ln(),
            count,
        })
        .collect();
    for (pos, total) in &pos_totals {
        lexicon.push(LexEntry {
            pos: pos.to_string(),
            token: UNK.to_string(),
            logp: (1.0 / (total + 1) as f64).ln(),
            count: 0,
        });
    }
    lexicon.sort_by(|a, b| (&a.pos, &a.token).cmp(&(&b.pos, &b.token)));

    Ok(Grammar {
        start: START.to_string(),
        rules,
        lexicon,
    })
}
