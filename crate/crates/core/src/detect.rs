//! Detection of argument cluster coordinations in co-indexed PTB trees.
//!
//! A candidate is a VP whose children include two or more conjoined VPs (or
//! empty-subject clauses), where the first conjunct carries `-N` indexed
//! material and a later conjunct carries matching `=N` (or `-N`) material.
//! [`classify`] then decides whether the instance has the simple shape the
//! transformer can rewrite, and if not, why.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transform::{conjunct_view, is_clause_category};
use crate::tree::{Path, Tree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RejectionCode {
    VerbBetweenArgs,
    NonDirectIndexedArg,
    ArgCountMismatch,
    AnnotationError,
    NonindexedAfterIndexed,
    UnsupportedConjunction,
}

impl RejectionCode {
    pub const ALL: [RejectionCode; 6] = [
        RejectionCode::VerbBetweenArgs,
        RejectionCode::NonDirectIndexedArg,
        RejectionCode::ArgCountMismatch,
        RejectionCode::AnnotationError,
        RejectionCode::NonindexedAfterIndexed,
        RejectionCode::UnsupportedConjunction,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RejectionCode::VerbBetweenArgs => "VERB_BETWEEN_ARGS",
            RejectionCode::NonDirectIndexedArg => "NON_DIRECT_INDEXED_ARG",
            RejectionCode::ArgCountMismatch => "ARG_COUNT_MISMATCH",
            RejectionCode::AnnotationError => "ANNOTATION_ERROR",
            RejectionCode::NonindexedAfterIndexed => "NONINDEXED_AFTER_INDEXED",
            RejectionCode::UnsupportedConjunction => "UNSUPPORTED_CONJUNCTION",
        }
    }
}

impl fmt::Display for RejectionCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RejectionReason {
    pub code: RejectionCode,
    pub detail: String,
}

impl RejectionReason {
    fn new(code: RejectionCode, detail: impl Into<String>) -> Self {
        RejectionReason {
            code,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexedArg {
    pub position: usize,
    pub category: String,
    pub index: u32,
}

/// One conjunct of a candidate coordination.
///
/// Child positions refer to the conjunct after gap-clause flattening
/// (`flattened` tells whether that changed anything).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjunctRecord {
    pub path: Path,
    pub indexed_args: Vec<IndexedArg>,
    pub non_indexed_positions: Vec<usize>,
    pub has_verb: bool,
    pub flattened: bool,
}

impl ConjunctRecord {
    /// Categories of the indexed arguments in linear order, tags and indices stripped.
    pub fn signature(&self) -> Vec<String> {
        self.indexed_args.iter().map(|a| a.category.clone()).collect()
    }

    fn index_set(&self) -> BTreeSet<u32> {
        self.indexed_args.iter().map(|a| a.index).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccInstance {
    pub coord_path: Path,
    pub conjuncts: Vec<ConjunctRecord>,
    pub conjunction_positions: Vec<usize>,
    pub symmetric: bool,
    pub rejection: Option<RejectionReason>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl AccInstance {
    pub fn accepted(&self) -> bool {
        self.rejection.is_none()
    }

    pub fn signatures(&self) -> Vec<Vec<String>> {
        self.conjuncts.iter().map(ConjunctRecord::signature).collect()
    }
}

pub(crate) fn is_verb_pos(pos: &str) -> bool {
    pos.starts_with("VB")
}

fn is_coordinating_word(token: &str) -> bool {
    token.eq_ignore_ascii_case("and") || token.eq_ignore_ascii_case("or")
}

fn is_cc_leaf(node: &Tree) -> bool {
    matches!(node, Tree::Leaf { pos, .. } if pos == "CC")
}

fn is_comma_leaf(node: &Tree) -> bool {
    matches!(node, Tree::Leaf { pos, .. } if pos == ",")
}

/// VP, or a clause whose first child is an NP with no surface tokens.
pub(crate) fn is_conjunct_node(node: &Tree) -> bool {
    match node {
        Tree::Internal { label, children } if label.category == "VP" => !children.is_empty(),
        Tree::Internal { label, children } if is_clause_category(&label.category) => {
            children.len() >= 2 && children[0].category() == "NP" && children[0].is_empty_only()
        }
        _ => false,
    }
}

fn descendant_labels(node: &Tree, out: &mut Vec<(usize, crate::tree::NodeLabel)>, depth: usize) {
    for child in node.children() {
        if let Some(label) = child.label() {
            out.push((depth, label.clone()));
            descendant_labels(child, out, depth + 1);
        }
    }
}

fn indices_below(node: &Tree, gap: bool, refs: bool) -> HashSet<u32> {
    let mut labels = Vec::new();
    descendant_labels(node, &mut labels, 1);
    labels
        .into_iter()
        .flat_map(|(_, l)| {
            let g = if gap { l.gap_index } else { None };
            let r = if refs { l.ref_index } else { None };
            g.into_iter().chain(r)
        })
        .collect()
}

/// Index numbers that empty elements point at, e.g. `*T*-2` → 2.
fn trace_targets(tree: &Tree) -> HashSet<u32> {
    tree.leaves()
        .into_iter()
        .filter(|l| l.is_empty_element())
        .filter_map(|l| match l {
            Tree::Leaf { token, .. } => {
                let (_, n) = token.rsplit_once('-')?;
                n.parse().ok()
            }
            _ => None,
        })
        .collect()
}

/// Inner nodes sort before the nodes that contain them.
fn inner_first(a: &Path, b: &Path) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    b.len().cmp(&a.len())
}

fn conjunct_positions(children: &[Tree]) -> Vec<usize> {
    children
        .iter()
        .enumerate()
        .filter(|(_, c)| is_conjunct_node(c))
        .map(|(i, _)| i)
        .collect()
}

fn is_candidate_node(node: &Tree) -> bool {
    if node.category() != "VP" {
        return false;
    }
    let children = node.children();
    let conj = conjunct_positions(children);
    if conj.len() < 2 {
        return false;
    }
    let (lo, hi) = (conj[0], conj[conj.len() - 1]);
    let has_coordinator = children[lo..hi].iter().any(|c| {
        (is_cc_leaf(c) && matches!(c, Tree::Leaf { token, .. } if is_coordinating_word(token)))
            || is_comma_leaf(c)
    });
    if !has_coordinator {
        return false;
    }
    let first_refs = indices_below(&children[conj[0]], false, true);
    if first_refs.is_empty() {
        return false;
    }
    conj[1..]
        .iter()
        .any(|&i| !indices_below(&children[i], true, true).is_disjoint(&first_refs))
}

/// Paths of candidate coordination VPs, innermost first.
pub fn find_candidates(tree: &Tree) -> Vec<Path> {
    let mut paths: Vec<Path> = tree
        .internal_nodes()
        .into_iter()
        .filter(|(_, node)| is_candidate_node(node))
        .map(|(path, _)| path)
        .collect();
    paths.sort_by(inner_first);
    paths
}

/// Build the conjunct records for the candidate at `coord_path` and decide
/// whether it can be transformed.
pub fn classify(tree: &Tree, coord_path: &[usize]) -> Result<AccInstance> {
    let not_candidate = || Error::NotCandidate {
        path: coord_path.to_vec(),
    };
    let coord = tree.get(coord_path).ok_or_else(not_candidate)?;
    if !is_candidate_node(coord) {
        return Err(not_candidate());
    }
    let children = coord.children();
    let conj_pos = conjunct_positions(children);
    let (lo, hi) = (conj_pos[0], conj_pos[conj_pos.len() - 1]);

    let mut notes = Vec::new();
    let mut rejection: Option<RejectionReason> = None;
    let reject = |slot: &mut Option<RejectionReason>, code, detail: String| {
        if slot.is_none() {
            *slot = Some(RejectionReason::new(code, detail));
        }
    };

    // Conjunctions between the first and last conjunct.
    let mut conjunction_positions = Vec::new();
    for (i, child) in children.iter().enumerate().take(hi).skip(lo + 1) {
        if conj_pos.contains(&i) {
            continue;
        }
        match child {
            Tree::Leaf { token, .. } if is_cc_leaf(child) => {
                conjunction_positions.push(i);
                if !is_coordinating_word(token) {
                    reject(
                        &mut rejection,
                        RejectionCode::UnsupportedConjunction,
                        format!("conjunction `{token}`"),
                    );
                }
            }
            _ if is_comma_leaf(child) => conjunction_positions.push(i),
            _ => reject(
                &mut rejection,
                RejectionCode::UnsupportedConjunction,
                format!("`{}` between conjuncts", child.category()),
            ),
        }
    }
    for pair in conj_pos.windows(2) {
        if !conjunction_positions.iter().any(|&p| pair[0] < p && p < pair[1]) {
            reject(
                &mut rejection,
                RejectionCode::UnsupportedConjunction,
                format!("conjuncts {} and {} are not separated by a conjunction", pair[0], pair[1]),
            );
        }
    }

    let views: Vec<(Tree, bool)> = conj_pos
        .iter()
        .map(|&i| conjunct_view(&children[i]))
        .collect();
    let traces = trace_targets(tree);

    let first_view = &views[0].0;
    let first_refs: HashSet<u32> = first_view
        .children()
        .iter()
        .filter_map(|c| c.label().and_then(|l| l.ref_index))
        .collect();

    // Later conjuncts: `=N` children, or `-N` children matching the first conjunct.
    let mut later_args: Vec<Vec<IndexedArg>> = Vec::new();
    for (view, _) in &views[1..] {
        let mut args = Vec::new();
        for (pos, child) in view.children().iter().enumerate() {
            let Some(label) = child.label() else { continue };
            let index = match (label.gap_index, label.ref_index) {
                (Some(g), _) => Some(g),
                (None, Some(r)) if first_refs.contains(&r) => {
                    notes.push(format!("later conjunct uses `-{r}` where `={r}` is expected"));
                    Some(r)
                }
                _ => None,
            };
            if let Some(index) = index {
                args.push(IndexedArg {
                    position: pos,
                    category: label.category.clone(),
                    index,
                });
            }
        }
        later_args.push(args);
    }
    let cluster_indices: HashSet<u32> = later_args.iter().flatten().map(|a| a.index).collect();

    let first_args: Vec<IndexedArg> = first_view
        .children()
        .iter()
        .enumerate()
        .filter_map(|(pos, child)| {
            let label = child.label()?;
            let r = label.ref_index?;
            (cluster_indices.contains(&r) || !traces.contains(&r)).then(|| IndexedArg {
                position: pos,
                category: label.category.clone(),
                index: r,
            })
        })
        .collect();

    let records: Vec<ConjunctRecord> = std::iter::once(first_args)
        .chain(later_args)
        .zip(&views)
        .zip(&conj_pos)
        .map(|((args, (view, flattened)), &pos)| {
            let arg_pos: HashSet<usize> = args.iter().map(|a| a.position).collect();
            let mut path = coord_path.to_vec();
            path.push(pos);
            ConjunctRecord {
                path,
                non_indexed_positions: (0..view.children().len()).filter(|p| !arg_pos.contains(p)).collect(),
                has_verb: view
                    .children()
                    .iter()
                    .any(|c| matches!(c, Tree::Leaf { pos, .. } if is_verb_pos(pos))),
                indexed_args: args,
                flattened: *flattened,
            }
        })
        .collect();

    // T2: indexed material must sit directly under its conjunct.
    for (k, (view, _)) in views.iter().enumerate() {
        let mut labels = Vec::new();
        descendant_labels(view, &mut labels, 1);
        let deep = labels.iter().find(|(depth, l)| {
            *depth >= 2
                && if k == 0 {
                    l.ref_index.is_some_and(|r| cluster_indices.contains(&r))
                } else {
                    l.gap_index.is_some()
                }
        });
        if let Some((_, l)) = deep {
            reject(
                &mut rejection,
                RejectionCode::NonDirectIndexedArg,
                format!("`{l}` is not a direct child of conjunct {k}"),
            );
        }
    }

    // T3: same number of indexed arguments with the same index numbers.
    let first_set = records[0].index_set();
    for (k, rec) in records.iter().enumerate().skip(1) {
        if rec.indexed_args.len() != records[0].indexed_args.len() || rec.index_set() != first_set {
            reject(
                &mut rejection,
                RejectionCode::ArgCountMismatch,
                format!(
                    "conjunct 0 has indices {:?}, conjunct {k} has {:?}",
                    records[0].indexed_args.iter().map(|a| a.index).collect::<Vec<_>>(),
                    rec.indexed_args.iter().map(|a| a.index).collect::<Vec<_>>()
                ),
            );
        }
    }
    if records[0].indexed_args.is_empty() {
        reject(
            &mut rejection,
            RejectionCode::ArgCountMismatch,
            "first conjunct has no indexed arguments".to_string(),
        );
    }

    // Overt material in later conjuncts must be indexed (a missing index is an annotation error).
    for (k, (rec, (view, _))) in records.iter().zip(&views).enumerate().skip(1) {
        if let Some(&p) = rec
            .non_indexed_positions
            .iter()
            .find(|&&p| !view.children()[p].is_empty_only())
        {
            reject(
                &mut rejection,
                RejectionCode::AnnotationError,
                format!("unindexed `{}` in conjunct {k}", view.children()[p].category()),
            );
        }
    }

    // T1: the first conjunct starts with a verb.
    let first_children = first_view.children();
    let first_token_pos = first_view
        .leaves()
        .into_iter()
        .find(|l| !l.is_empty_element())
        .map(|l| l.category().to_string());
    if !first_token_pos.as_deref().is_some_and(is_verb_pos) {
        let arg_positions: Vec<usize> = records[0].indexed_args.iter().map(|a| a.position).collect();
        let verb_between = match (arg_positions.iter().min(), arg_positions.iter().max()) {
            (Some(&a), Some(&b)) if a < b => first_children[a + 1..b]
                .iter()
                .enumerate()
                .filter(|(i, _)| !arg_positions.contains(&(a + 1 + i)))
                .any(|(_, c)| c.leaves().iter().any(|l| is_verb_pos(l.category()))),
            _ => false,
        };
        if verb_between {
            reject(
                &mut rejection,
                RejectionCode::VerbBetweenArgs,
                "the verb sits between the indexed arguments".to_string(),
            );
        } else {
            reject(
                &mut rejection,
                RejectionCode::AnnotationError,
                format!(
                    "first token of the first conjunct is tagged {}",
                    first_token_pos.unwrap_or_else(|| "nothing".into())
                ),
            );
        }
    }

    // T4: hoistable material precedes the cluster.
    if let Some(first_arg) = records[0].indexed_args.first().map(|a| a.position) {
        if let Some(&p) = records[0]
            .non_indexed_positions
            .iter()
            .find(|&&p| p > first_arg && !first_children[p].is_empty_only())
        {
            reject(
                &mut rejection,
                RejectionCode::NonindexedAfterIndexed,
                format!("`{}` follows the first indexed argument", first_children[p].category()),
            );
        }
    }

    let signatures: Vec<Vec<String>> = records.iter().map(ConjunctRecord::signature).collect();
    let symmetric = signatures.windows(2).all(|w| w[0] == w[1]);

    Ok(AccInstance {
        coord_path: coord_path.to_vec(),
        conjuncts: records,
        conjunction_positions,
        symmetric,
        rejection,
        notes,
    })
}

/// Classify every candidate in the tree, innermost first.
pub fn detect_all(tree: &Tree) -> Vec<AccInstance> {
    find_candidates(tree)
        .into_iter()
        .map(|path| classify(tree, &path).expect("find_candidates returns candidates"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::parse_trees;

    fn tree(text: &str) -> Tree {
        parse_trees(text).unwrap().remove(0)
    }

    const Q_RATIO: &str = "(S (NP-SBJ (DT The) (NNP Q) (NN ratio)) (VP (VP (VBD was) (NP-PRD-1 (RB only) (CD 65) (NN %)) (PP-TMP-2 (IN in) (NP (CD 1987)))) (CC and) (VP (NP-PRD=1 (CD 68.9) (NN %)) (PP-TMP=2 (IN in) (NP (CD 1988))))) (. .))";

    const INSURANCE: &str = "(VP (VP (VBN driven) (PRT (RP up)) (NP (NN insurance) (NNS costs)) (NP-1 (CD 20) (NN %)) (PP-2 (IN in) (NP (CD 1987)))) (CC and) (VP (NP=1 (CD 15) (NN %)) (PP=2 (IN in) (NP (CD 1988)))))";

    const VERB_BETWEEN: &str = "(VP (VP (NP-1 (RB About) (NN half)) (VBD invested) (PP-2 (IN in) (NP (NN government) (NNS bonds)))) (CC and) (VP (NP=1 (RB about) (CD 10) (NN %)) (PP=2 (IN in) (NP (NN cash)))))";

    const NON_DIRECT: &str = "(VP (VP (VBP see) (NP (NP (DT a) (NN raise)) (PP (IN of) (NP-1 (CD 8) (NN %)))) (PP-2 (IN in) (NP (DT the) (JJ first) (NN year)))) (CC and) (VP (NP=1 (CD 7) (NN %)) (PP=2 (IN in) (NP (DT each) (JJ following) (NN year)))))";

    const NON_SYMMETRIC: &str = "(VP (VP (VBD made) (NP-1 (DT these) (NNS gestures)) (PP-2 (TO to) (NP (DT the) (JJ red) (NN group)))) (CC and) (VP (PP=2 (IN for) (NP (PRP us))) (NP=1 (NN nothing))))";

    #[test]
    fn q_ratio_is_one_candidate() {
        let t = tree(Q_RATIO);
        assert_eq!(find_candidates(&t), vec![vec![1]]);
        let inst = classify(&t, &[1]).unwrap();
        assert!(inst.accepted(), "{:?}", inst.rejection);
        assert_eq!(inst.signatures(), vec![vec!["NP", "PP"], vec!["NP", "PP"]]);
    }

    #[test]
    fn no_coordination_no_candidate() {
        assert!(find_candidates(&tree("(VP (VB eat) (NP (NN pizza)))")).is_empty());
        assert!(find_candidates(&tree(
            "(VP (VP (VBD sang) (NP (NNS songs))) (CC and) (VP (VBD danced)))"
        ))
        .is_empty());
    }

    #[test]
    fn insurance_costs_accepted() {
        let t = tree(INSURANCE);
        let inst = classify(&t, &[]).unwrap();
        assert!(inst.accepted());
        assert!(inst.symmetric);
        assert_eq!(inst.conjuncts[0].non_indexed_positions, vec![0, 1, 2]);
        assert_eq!(inst.conjuncts[0].signature(), vec!["NP", "PP"]);
        assert!(inst.conjuncts[0].has_verb);
        assert!(!inst.conjuncts[1].has_verb);
        assert_eq!(inst.conjunction_positions, vec![1]);
    }

    #[test]
    fn verb_between_rejected() {
        let inst = classify(&tree(VERB_BETWEEN), &[]).unwrap();
        assert_eq!(inst.rejection.unwrap().code, RejectionCode::VerbBetweenArgs);
    }

    #[test]
    fn non_direct_rejected() {
        let inst = classify(&tree(NON_DIRECT), &[]).unwrap();
        assert_eq!(inst.rejection.unwrap().code, RejectionCode::NonDirectIndexedArg);
    }

    #[test]
    fn non_symmetric_accepted() {
        let inst = classify(&tree(NON_SYMMETRIC), &[]).unwrap();
        assert!(inst.accepted());
        assert!(!inst.symmetric);
        assert_eq!(inst.conjuncts[1].signature(), vec!["PP", "NP"]);
    }

    #[test]
    fn single_np_signature() {
        let t = tree("(VP (VP (VBD ate) (NP-1 (NNS apples))) (CC and) (VP (NP=1 (NNS pears))))");
        let inst = classify(&t, &[]).unwrap();
        assert!(inst.accepted());
        assert_eq!(inst.conjuncts[0].signature(), vec!["NP"]);
    }

    #[test]
    fn wrong_pos_is_annotation_error() {
        let t = tree("(VP (VP (NN rose) (NP-1 (CD 5) (NN %)) (PP-2 (IN in) (NP (NNP May)))) (CC and) (VP (NP=1 (CD 7) (NN %)) (PP=2 (IN in) (NP (NNP June)))))");
        assert_eq!(classify(&t, &[]).unwrap().rejection.unwrap().code, RejectionCode::AnnotationError);
    }

    #[test]
    fn wrong_pos_with_one_arg_or_reversed_args() {
        let one = "(VP (VP (NN sold) (NP-1 (DT the) (NN cat))) (CC and) (VP (NP=1 (DT a) (NN dog))))";
        let inst = classify(&tree(one), &[]).unwrap();
        assert_eq!(inst.rejection.unwrap().code, RejectionCode::AnnotationError);
        let reversed = "(VP (VP (NP-2 (DT the) (NN cat)) (VBD sold) (PP-1 (IN to) (NP (NN Al)))) (CC and) (VP (NP=2 (NN dogs)) (PP=1 (IN to) (NP (NN Bo)))))";
        let inst = classify(&tree(reversed), &[]).unwrap();
        assert_eq!(inst.rejection.unwrap().code, RejectionCode::VerbBetweenArgs);
    }

    #[test]
    fn missing_index_is_count_mismatch() {
        let t = tree("(VP (VP (VBD fell) (NP-1 (CD 3) (NN %)) (PP-2 (IN in) (NP (NNP Tokyo)))) (CC and) (VP (NP=1 (CD 2) (NN %)) (PP (IN in) (NP (NNP London)))))");
        assert_eq!(classify(&t, &[]).unwrap().rejection.unwrap().code, RejectionCode::ArgCountMismatch);
    }

    #[test]
    fn trailing_material_rejected() {
        let t = tree("(VP (VP (VBD paid) (NP-1 (CD 5)) (ADVP (RB quickly)) (PP-2 (IN for) (NP (NN tea)))) (CC and) (VP (NP=1 (CD 3)) (PP=2 (IN for) (NP (NN coffee)))))");
        assert_eq!(
            classify(&t, &[]).unwrap().rejection.unwrap().code,
            RejectionCode::NonindexedAfterIndexed
        );
    }

    #[test]
    fn other_conjunction_rejected() {
        let t = tree("(VP (VP (VBD paid) (NP-1 (CD 5))) (, ,) (VP (NP=1 (CD 4))) (CC but) (VP (NP=1 (CD 3))))");
        assert_eq!(find_candidates(&t), vec![Vec::<usize>::new()]);
        assert_eq!(
            classify(&t, &[]).unwrap().rejection.unwrap().code,
            RejectionCode::UnsupportedConjunction
        );
        let t = tree("(VP (VP (VBD paid) (NP-1 (CD 5))) (CC but) (VP (NP=1 (CD 3))))");
        assert!(find_candidates(&t).is_empty());
    }

    #[test]
    fn ref_index_in_later_conjunct_is_tolerated() {
        let t = tree("(VP (VP (VBD ate) (NP-1 (NNS apples))) (CC and) (VP (NP-1 (NNS pears))))");
        let inst = classify(&t, &[]).unwrap();
        assert!(inst.accepted());
        assert_eq!(inst.notes.len(), 1);
    }

    #[test]
    fn gap_clause_conjunct() {
        let t = tree("(VP (VP (VBN rated) (S (NP-SBJ (-NONE- *-3)) (NP-PRD-1 (JJ single-A))) (PP-2 (IN by) (NP (NNP Moody)))) (CC and) (VP (S (NP-SBJ (-NONE- *-3)) (NP-PRD=1 (JJ single-B))) (PP=2 (IN by) (NP (NNP S&P)))))");
        let inst = classify(&t, &[]).unwrap();
        assert!(inst.accepted(), "{:?}", inst.rejection);
        assert!(inst.conjuncts.iter().all(|c| c.flattened));
        assert_eq!(inst.conjuncts[1].signature(), vec!["NP", "PP"]);
    }

    #[test]
    fn not_a_candidate_is_an_error() {
        let t = tree("(VP (VB eat) (NP (NN pizza)))");
        assert!(matches!(classify(&t, &[]), Err(Error::NotCandidate { .. })));
        assert!(classify(&t, &[7]).is_err());
    }

    #[test]
    fn accepted_and_rejected_in_one_tree() {
        // The rejected limitation example is embedded in a sentence that
        // also contains an insurance-costs style coordination.
        let text = format!("(S (NP-SBJ (NNS Analysts)) (VP (VBD said) (SBAR (IN that) (S (NP-SBJ (NNS lawsuits)) (VP (VBD had) {INSURANCE}) (, ,) (CC and) (S (PP (IN of) (NP (NNS savings))) (VP {VERB_BETWEEN}))))) (. .))");
        let t = tree(&text);
        let all = detect_all(&t);
        assert_eq!(all.len(), 2);
        assert_eq!(all.iter().filter(|i| i.accepted()).count(), 1);
        assert_eq!(
            all.iter().filter_map(|i| i.rejection.as_ref()).map(|r| r.code).collect::<Vec<_>>(),
            vec![RejectionCode::VerbBetweenArgs]
        );
    }

    #[test]
    fn inner_first_order() {
        let mut paths = vec![vec![], vec![1], vec![0, 2], vec![1, 0]];
        paths.sort_by(inner_first);
        assert_eq!(paths, vec![vec![0, 2], vec![1, 0], vec![1], vec![]]);
    }
}
