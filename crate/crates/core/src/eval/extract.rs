//! Coordination structure read off parse trees, in the gold annotation's terms.
//!
//! A node is a coordination when it is an `ACCPH` node, or when two of its
//! non-leaf children are separated by an `and`/`or` CC leaf. Conjuncts are
//! the non-leaf children (minus CONJP and empty-only material); the
//! arguments of a conjunct are its own children. Leading and trailing
//! punctuation is trimmed from every span.

use crate::error::{Error, Result};
use crate::eval::gold::{Conjunct, CoordGold, CoordPhrase, Span};
use crate::tree::{yield_tokens, Tree};

pub(crate) const PUNCTUATION_POS: &[&str] = &[",", ".", ":", "``", "''"];

fn is_punct_leaf(node: &Tree) -> bool {
    matches!(node, Tree::Leaf { pos, .. } if PUNCTUATION_POS.contains(&pos.as_str()))
}

fn is_and_or(node: &Tree) -> bool {
    matches!(node, Tree::Leaf { pos, token } if pos == "CC"
        && (token.eq_ignore_ascii_case("and") || token.eq_ignore_ascii_case("or")))
}

/// Span of `node` (starting at token `start`) without edge punctuation.
fn trimmed_span(node: &Tree, start: usize) -> Option<Span> {
    let leaves: Vec<&Tree> = node.leaves().into_iter().filter(|l| !l.is_empty_element()).collect();
    let first = leaves.iter().position(|l| !is_punct_leaf(l))?;
    let last = leaves.iter().rposition(|l| !is_punct_leaf(l))?;
    Some(Span::new(start + first, start + last + 1))
}

fn child_offsets(node: &Tree, start: usize) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(node.children().len());
    let mut at = start;
    for child in node.children() {
        offsets.push(at);
        at += child.token_count();
    }
    offsets
}

fn is_coordination(node: &Tree) -> bool {
    if node.label().is_some_and(|l| l.is_accph()) {
        return true;
    }
    let children = node.children();
    children.iter().enumerate().any(|(i, c)| {
        is_and_or(c)
            && children[..i].iter().any(|x| !x.is_leaf())
            && children[i + 1..].iter().any(|x| !x.is_leaf())
    })
}

fn collect(node: &Tree, start: usize, out: &mut Vec<CoordPhrase>) {
    let offsets = child_offsets(node, start);
    if is_coordination(node) {
        let mut conjuncts = Vec::new();
        for (child, &at) in node.children().iter().zip(&offsets) {
            if child.is_leaf() || child.category() == "CONJP" || child.is_empty_only() {
                continue;
            }
            let Some(span) = trimmed_span(child, at) else { continue };
            let args = child
                .children()
                .iter()
                .zip(child_offsets(child, at))
                .filter(|(c, _)| !is_punct_leaf(c) && !c.is_empty_only())
                .filter_map(|(c, a)| trimmed_span(c, a))
                .collect();
            conjuncts.push(Conjunct { span, args });
        }
        if conjuncts.len() >= 2 {
            out.push(CoordPhrase {
                conjuncts,
                is_acc: node.label().is_some_and(|l| l.is_accph()),
            });
        }
    }
    for (child, &at) in node.children().iter().zip(&offsets) {
        collect(child, at, out);
    }
}

/// Coordination phrases predicted by `tree`. When `expected` is given the
/// tree's yield must equal it.
pub fn extract_predicted(tree: &Tree, expected: Option<&[String]>) -> Result<CoordGold> {
    let tokens = yield_tokens(tree, false);
    if let Some(expected) = expected {
        if expected != tokens.as_slice() {
            return Err(Error::TokenMismatch {
                sentence: 0,
                message: format!("expected `{}`, tree yields `{}`", expected.join(" "), tokens.join(" ")),
            });
        }
    }
    let mut phrases = Vec::new();
    collect(tree, 0, &mut phrases);
    Ok(CoordGold { tokens, phrases })
}

/// Extract predictions for a corpus aligned with gold sentences.
pub fn extract_corpus(trees: &[Tree], gold: &[CoordGold]) -> Result<Vec<CoordGold>> {
    if trees.len() != gold.len() {
        return Err(Error::Evaluation(format!(
            "{} predicted trees for {} gold sentences",
            trees.len(),
            gold.len()
        )));
    }
    trees
        .iter()
        .zip(gold)
        .enumerate()
        .map(|(i, (t, g))| {
            extract_predicted(t, Some(&g.tokens)).map_err(|e| match e {
                Error::TokenMismatch { message, .. } => Error::TokenMismatch { sentence: i, message },
                other => other,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::parse_trees;

    fn tree(text: &str) -> Tree {
        parse_trees(text).unwrap().remove(0)
    }

    #[test]
    fn np_coordination() {
        let g = extract_predicted(&tree("(NP (NP (DT the) (NN cat)) (CC and) (NP (DT the) (NN dog)))"), None).unwrap();
        assert_eq!(g.phrases.len(), 1);
        assert!(!g.phrases[0].is_acc);
        assert_eq!(g.phrases[0].conjunct_spans(), vec![Span::new(0, 2), Span::new(3, 5)]);
    }

    #[test]
    fn accph_phrase() {
        let t = tree("(VP (VBN driven) (PRT (RP up)) (NP (NN insurance) (NNS costs)) (ACCPH_NP (ACC_NP-PP (NP (CD 20) (NN %)) (PP (IN in) (NP (CD 1987)))) (CC and) (ACC_NP-PP (NP (CD 15) (NN %)) (PP (IN in) (NP (CD 1988))))))");
        let g = extract_predicted(&t, None).unwrap();
        assert_eq!(g.phrases.len(), 1);
        let p = &g.phrases[0];
        assert!(p.is_acc);
        assert_eq!(p.conjuncts.len(), 2);
        assert!(p.conjuncts.iter().all(|c| c.args.len() == 2));
        assert_eq!(p.conjuncts[1].args, vec![Span::new(9, 11), Span::new(11, 13)]);
    }

    #[test]
    fn no_coordination() {
        let g = extract_predicted(&tree("(S (NP (PRP I)) (VP (VBD ran)))"), None).unwrap();
        assert!(g.phrases.is_empty());
    }

    #[test]
    fn punctuation_trimmed() {
        let t = tree("(S (S (NP (PRP I)) (VP (VBD ran)) (, ,)) (CC and) (S (NP (PRP you)) (VP (VBD sat)) (. .)))");
        let g = extract_predicted(&t, None).unwrap();
        assert_eq!(g.phrases[0].conjunct_spans(), vec![Span::new(0, 2), Span::new(4, 6)]);
    }

    #[test]
    fn yield_mismatch() {
        let expected: Vec<String> = vec!["I".into(), "walked".into()];
        assert!(matches!(
            extract_predicted(&tree("(S (NP (PRP I)) (VP (VBD ran)))"), Some(&expected)),
            Err(Error::TokenMismatch { .. })
        ));
    }
}
