//! Labeled bracket precision/recall in the style of EVALB.
//!
//! Punctuation tokens are dropped before spans are computed, the root
//! bracket is not scored, function tags and indices are ignored, and PRT is
//! treated as ADVP.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::extract::PUNCTUATION_POS;
use crate::tree::{yield_tokens, Tree};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BracketScore {
    pub matched: usize,
    pub gold_brackets: usize,
    pub predicted_brackets: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

fn equivalent_label(category: &str) -> &str {
    match category {
        "PRT" => "ADVP",
        other => other,
    }
}

fn brackets(tree: &Tree) -> HashMap<(String, usize, usize), usize> {
    fn walk(node: &Tree, start: usize, is_root: bool, out: &mut HashMap<(String, usize, usize), usize>) -> usize {
        match node {
            Tree::Leaf { pos, .. } => {
                usize::from(!node.is_empty_element() && !PUNCTUATION_POS.contains(&pos.as_str()))
            }
            Tree::Internal { label, children } => {
                let mut end = start;
                for child in children {
                    end += walk(child, end, false, out);
                }
                if !is_root && end > start {
                    *out
                        .entry((equivalent_label(&label.category).to_string(), start, end))
                        .or_default() += 1;
                }
                end - start
            }
        }
    }
    let mut out = HashMap::new();
    walk(tree, 0, true, &mut out);
    out
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        if num == 0 {
            1.0
        } else {
            0.0
        }
    } else {
        num as f64 / den as f64
    }
}

/// Micro-averaged labeled bracket scores over a corpus of paired trees.
pub fn labeled_bracket_f1(gold: &[Tree], pred: &[Tree]) -> Result<BracketScore> {
    if gold.is_empty() {
        return Err(Error::Evaluation("empty corpus".into()));
    }
    if gold.len() != pred.len() {
        return Err(Error::Evaluation(format!(
            "{} gold trees but {} predicted",
            gold.len(),
            pred.len()
        )));
    }
    let (mut matched, mut gold_total, mut pred_total) = (0, 0, 0);
    for (i, (g, p)) in gold.iter().zip(pred).enumerate() {
        let (gy, py) = (yield_tokens(g, false), yield_tokens(p, false));
        if gy != py {
            return Err(Error::TokenMismatch {
                sentence: i,
                message: format!("gold `{}` vs predicted `{}`", gy.join(" "), py.join(" ")),
            });
        }
        let gb = brackets(g);
        let pb = brackets(p);
        gold_total += gb.values().sum::<usize>();
        pred_total += pb.values().sum::<usize>();
        matched += gb
            .iter()
            .map(|(key, &n)| n.min(pb.get(key).copied().unwrap_or(0)))
            .sum::<usize>();
    }
    let precision = ratio(matched, pred_total);
    let recall = ratio(matched, gold_total);
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    Ok(BracketScore {
        matched,
        gold_brackets: gold_total,
        predicted_brackets: pred_total,
        precision,
        recall,
        f1,
    })
}
