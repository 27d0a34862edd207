//! Rewriting accepted ACC instances into cluster phrases, and back.
//!
//! The verb and the non-indexed material of the first conjunct move up to
//! the coordination VP. Each conjunct becomes an `ACC_X` node holding only
//! its indexed arguments (indices stripped), and the clusters together with
//! their conjunctions are grouped under one `ACCPH_X` node.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::detect::{detect_all, AccInstance, RejectionCode, RejectionReason};
use crate::error::{Error, Result};
use crate::tree::{yield_tokens, NodeLabel, Path, Tree};

const HEAD_PRIORITY: [&str; 4] = ["NP", "PP", "ADJP", "SBAR"];

pub(crate) fn is_clause_category(category: &str) -> bool {
    matches!(category, "S" | "SQ" | "SINV")
}

fn has_empty_subject(children: &[Tree]) -> bool {
    children.len() >= 2 && children[0].category() == "NP" && children[0].is_empty_only()
}

/// An unindexed clause hosting an empty subject above indexed material.
fn is_gap_clause(node: &Tree) -> bool {
    match node {
        Tree::Internal { label, children } => {
            is_clause_category(&label.category)
                && !label.has_index()
                && has_empty_subject(children)
                && children[1..].iter().any(|c| c.label().is_some_and(NodeLabel::has_index))
        }
        Tree::Leaf { .. } => false,
    }
}

fn splice_gap_clauses(children: &[Tree]) -> (Vec<Tree>, bool) {
    let mut out = Vec::with_capacity(children.len());
    let mut changed = false;
    for child in children {
        if is_gap_clause(child) {
            changed = true;
            out.extend(child.children()[1..].iter().cloned());
        } else {
            out.push(child.clone());
        }
    }
    (out, changed)
}

/// The conjunct as the detector and transformer see it: empty-subject
/// clause layers removed. The flag tells whether anything was removed.
pub(crate) fn conjunct_view(node: &Tree) -> (Tree, bool) {
    match node {
        Tree::Internal { label, children } if is_clause_category(&label.category) && has_empty_subject(children) => {
            let (spliced, _) = splice_gap_clauses(&children[1..]);
            (Tree::internal(NodeLabel::new("VP"), spliced), true)
        }
        Tree::Internal { label, children } => {
            let (spliced, changed) = splice_gap_clauses(children);
            (Tree::internal(label.clone(), spliced), changed)
        }
        Tree::Leaf { .. } => (node.clone(), false),
    }
}

/// Remove empty-subject clause layers at `conjunct_path` so that the indexed
/// arguments become direct children of the conjunct position.
///
/// A conjunct that is itself such a clause is replaced by a VP over the
/// clause's remaining children. Fails for a clause with an overt subject.
pub fn flatten_gap_s(tree: &Tree, conjunct_path: &[usize]) -> Result<Tree> {
    let fail = |message: &str| Error::Flatten {
        path: conjunct_path.to_vec(),
        message: message.to_string(),
    };
    let node = tree.get(conjunct_path).ok_or_else(|| Error::InvalidPath {
        path: conjunct_path.to_vec(),
        message: "no such node".into(),
    })?;
    match node {
        Tree::Leaf { .. } => return Err(fail("node is a leaf")),
        Tree::Internal { label, children } if is_clause_category(&label.category) => {
            if children.len() < 2 {
                return Err(fail("clause has no material besides its subject"));
            }
            if !has_empty_subject(children) {
                return Err(fail("clause has an overt subject"));
            }
        }
        Tree::Internal { .. } => {}
    }
    let (view, _) = conjunct_view(node);
    let mut out = tree.clone();
    *out.get_mut(conjunct_path).expect("path checked above") = view;
    Ok(out)
}

/// `ACC_` followed by the cluster's categories joined with `-`.
pub fn cluster_label<S: AsRef<str>>(signature: &[S]) -> Result<String> {
    if signature.is_empty() {
        return Err(Error::EmptySignature);
    }
    let joined: Vec<&str> = signature.iter().map(AsRef::as_ref).collect();
    Ok(format!("ACC_{}", joined.join("-")))
}

/// Label of the coordination level: the first of NP, PP, ADJP, SBAR found in
/// any cluster, with `-ADVP` appended when some cluster holds an ADVP.
pub fn accph_label<S: AsRef<str>>(signatures: &[Vec<S>]) -> Result<String> {
    if signatures.is_empty() || signatures.iter().any(Vec::is_empty) {
        return Err(Error::EmptySignature);
    }
    let present: HashSet<&str> = signatures.iter().flatten().map(AsRef::as_ref).collect();
    let head = HEAD_PRIORITY
        .iter()
        .find(|h| present.contains(*h))
        .ok_or_else(|| Error::Unlabelable {
            categories: present.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>().into_iter().collect(),
        })?;
    if present.contains("ADVP") {
        Ok(format!("ACCPH_{head}-ADVP"))
    } else {
        Ok(format!("ACCPH_{head}"))
    }
}

fn strip_indices(tree: &mut Tree) {
    tree.map_labels(&mut |l| {
        l.ref_index = None;
        l.gap_index = None;
    });
}

/// Rewrite one accepted instance. The surface yield is unchanged.
pub fn transform_instance(tree: &Tree, inst: &AccInstance) -> Result<Tree> {
    if !inst.accepted() {
        return Err(Error::RejectedInstance {
            path: inst.coord_path.clone(),
        });
    }
    let malformed = |message: String| Error::MalformedAcc {
        path: inst.coord_path.clone(),
        message,
    };
    let coord = tree.get(&inst.coord_path).ok_or_else(|| Error::InvalidPath {
        path: inst.coord_path.clone(),
        message: "no such node".into(),
    })?;
    let coord_children = coord.children();
    let depth = inst.coord_path.len();
    let conj_positions: Vec<usize> = inst
        .conjuncts
        .iter()
        .map(|c| c.path.get(depth).copied().ok_or_else(|| malformed("conjunct path too short".into())))
        .collect::<Result<_>>()?;
    if conj_positions.len() < 2 || conj_positions.iter().any(|&p| p >= coord_children.len()) {
        return Err(malformed("conjunct positions do not fit the tree".into()));
    }

    let views: Vec<Tree> = conj_positions.iter().map(|&p| conjunct_view(&coord_children[p]).0).collect();
    let signatures = inst.signatures();

    let first = &views[0];
    let mut hoisted = Vec::new();
    for &p in &inst.conjuncts[0].non_indexed_positions {
        hoisted.push(first.children().get(p).cloned().ok_or_else(|| malformed(format!("no child {p}")))?);
    }

    let mut clusters = Vec::with_capacity(views.len());
    for ((view, record), signature) in views.iter().zip(&inst.conjuncts).zip(&signatures) {
        let mut args = Vec::with_capacity(record.indexed_args.len());
        for arg in &record.indexed_args {
            let mut node = view
                .children()
                .get(arg.position)
                .cloned()
                .ok_or_else(|| malformed(format!("no argument at {}", arg.position)))?;
            strip_indices(&mut node);
            args.push(node);
        }
        clusters.push(Tree::internal(NodeLabel::new(cluster_label(signature)?), args));
    }

    let (lo, hi) = (conj_positions[0], conj_positions[conj_positions.len() - 1]);
    let mut clusters = clusters.into_iter();
    let mut accph_children = Vec::new();
    for (i, child) in coord_children.iter().enumerate().take(hi + 1).skip(lo) {
        if conj_positions.contains(&i) {
            accph_children.push(clusters.next().expect("one cluster per conjunct"));
        } else if inst.conjunction_positions.contains(&i) {
            accph_children.push(child.clone());
        } else {
            return Err(malformed(format!("unexpected `{}` between conjuncts", child.category())));
        }
    }
    let accph = Tree::internal(NodeLabel::new(accph_label(&signatures)?), accph_children);

    let mut new_children = coord_children[..lo].to_vec();
    new_children.extend(hoisted);
    new_children.push(accph);
    new_children.extend_from_slice(&coord_children[hi + 1..]);

    let mut out = tree.clone();
    match out.get_mut(&inst.coord_path) {
        Some(Tree::Internal { children, .. }) => *children = new_children,
        _ => unreachable!("coordination node checked above"),
    }
    if yield_tokens(&out, false) != yield_tokens(tree, false) {
        return Err(Error::Invariant(format!(
            "transforming {:?} changed the sentence yield",
            inst.coord_path
        )));
    }
    Ok(out)
}

/// Outcome of one candidate during corpus transformation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformRecord {
    pub tree_id: usize,
    pub coord_path: Path,
    pub applied: bool,
    pub accph_label: Option<String>,
    pub cluster_labels: Vec<String>,
    pub rejection: Option<RejectionReason>,
}

/// Transform every accepted instance of one tree, innermost first.
///
/// Paths in applied records refer to the tree at the time the instance was
/// rewritten; paths of rejected instances refer to the returned tree.
pub fn transform_tree(tree_id: usize, tree: &Tree) -> Result<(Tree, Vec<TransformRecord>)> {
    let mut current = tree.clone();
    let mut records = Vec::new();
    let mut failed: Vec<Path> = Vec::new();
    loop {
        let instances = detect_all(&current);
        let next = instances
            .iter()
            .find(|i| i.accepted() && !failed.contains(&i.coord_path));
        let Some(inst) = next else {
            for inst in instances {
                if let Some(rejection) = inst.rejection {
                    records.push(TransformRecord {
                        tree_id,
                        coord_path: inst.coord_path,
                        applied: false,
                        accph_label: None,
                        cluster_labels: Vec::new(),
                        rejection: Some(rejection),
                    });
                }
            }
            return Ok((current, records));
        };
        match transform_instance(&current, inst) {
            Ok(rewritten) => {
                let signatures = inst.signatures();
                records.push(TransformRecord {
                    tree_id,
                    coord_path: inst.coord_path.clone(),
                    applied: true,
                    accph_label: Some(accph_label(&signatures)?),
                    cluster_labels: signatures.iter().map(|s| cluster_label(s)).collect::<Result<_>>()?,
                    rejection: None,
                });
                current = rewritten;
            }
            Err(e @ Error::Invariant(_)) => return Err(e),
            Err(e) => {
                failed.push(inst.coord_path.clone());
                records.push(TransformRecord {
                    tree_id,
                    coord_path: inst.coord_path.clone(),
                    applied: false,
                    accph_label: None,
                    cluster_labels: Vec::new(),
                    rejection: Some(RejectionReason {
                        code: RejectionCode::AnnotationError,
                        detail: e.to_string(),
                    }),
                });
            }
        }
    }
}

/// Transform a corpus. Trees without accepted instances pass through unchanged.
///
/// Only an internal invariant violation (a changed yield) is an error;
/// instances that cannot be rewritten become rejection records.
pub fn transform_corpus(trees: &[Tree]) -> Result<(Vec<Tree>, Vec<TransformRecord>)> {
    let mut out = Vec::with_capacity(trees.len());
    let mut records = Vec::new();
    for (id, tree) in trees.iter().enumerate() {
        let (t, mut r) = transform_tree(id, tree)?;
        out.push(t);
        records.append(&mut r);
    }
    Ok((out, records))
}

fn index_numbers(tree: &Tree) -> HashSet<u32> {
    let mut used = HashSet::new();
    for (_, node) in tree.internal_nodes() {
        let label = node.label().expect("internal node");
        used.extend(label.ref_index);
        used.extend(label.gap_index);
    }
    for leaf in tree.leaves() {
        if let Tree::Leaf { pos, token } = leaf {
            if pos == crate::tree::EMPTY_POS {
                if let Some(n) = token.rsplit_once('-').and_then(|(_, n)| n.parse().ok()) {
                    used.insert(n);
                }
            }
        }
    }
    used
}

/// Rewrite `ACCPH` structures back into PTB-style conjoined VPs.
///
/// Everything left of an `ACCPH` node joins the first cluster in the first
/// VP. Cluster arguments get the lowest index numbers not otherwise used in
/// the tree, assigned left to right; later clusters are aligned to the first
/// by category.
pub fn detransform(tree: &Tree) -> Result<Tree> {
    let mut used = index_numbers(tree);
    if tree.label().is_some_and(|l| l.is_accph() || l.is_acc_cluster()) {
        return Err(Error::MalformedAcc {
            path: Vec::new(),
            message: "ACC node at the root".into(),
        });
    }
    let mut path = Vec::new();
    detransform_node(tree, &mut path, &mut used)
}

fn detransform_node(node: &Tree, path: &mut Path, used: &mut HashSet<u32>) -> Result<Tree> {
    let Tree::Internal { label, children } = node else {
        return Ok(node.clone());
    };
    let malformed = |path: &Path, message: String| Error::MalformedAcc {
        path: path.clone(),
        message,
    };

    let mut new_children = Vec::with_capacity(children.len());
    for (i, child) in children.iter().enumerate() {
        if child.label().is_some_and(NodeLabel::is_accph) {
            new_children.push(child.clone());
            continue;
        }
        if child.label().is_some_and(NodeLabel::is_acc_cluster) && !label.is_accph() {
            path.push(i);
            let err = malformed(path, "ACC cluster outside an ACCPH node".into());
            path.pop();
            return Err(err);
        }
        path.push(i);
        let rewritten = detransform_node(child, path, used);
        path.pop();
        new_children.push(rewritten?);
    }

    let accph_positions: Vec<usize> = new_children
        .iter()
        .enumerate()
        .filter(|(_, c)| c.label().is_some_and(NodeLabel::is_accph))
        .map(|(i, _)| i)
        .collect();
    let Some(&at) = accph_positions.first() else {
        return Ok(Tree::internal(label.clone(), new_children));
    };
    if accph_positions.len() > 1 {
        return Err(malformed(path, "more than one ACCPH node under one parent".into()));
    }
    let mut accph_path = path.clone();
    accph_path.push(at);

    // Rewrite nested structures inside the clusters first.
    path.push(at);
    let accph = &new_children[at];
    let mut clusters: Vec<Vec<Tree>> = Vec::new();
    let mut layout: Vec<Option<Tree>> = Vec::new();
    for (j, member) in accph.children().iter().enumerate() {
        match member {
            Tree::Leaf { pos, .. } if pos == "CC" || pos == "," => layout.push(Some(member.clone())),
            Tree::Internal { label: cl, children: args } if cl.is_acc_cluster() => {
                let categories: Vec<&str> = args.iter().map(Tree::category).collect();
                if args.is_empty() || cluster_label(&categories)? != cl.category {
                    return Err(malformed(
                        &accph_path,
                        format!("`{}` does not match its children {categories:?}", cl.category),
                    ));
                }
                path.push(j);
                let mut rewritten = Vec::with_capacity(args.len());
                for (k, arg) in args.iter().enumerate() {
                    path.push(k);
                    rewritten.push(detransform_node(arg, path, used)?);
                    path.pop();
                }
                path.pop();
                clusters.push(rewritten);
                layout.push(None);
            }
            other => {
                return Err(malformed(
                    &accph_path,
                    format!("unexpected `{}` under ACCPH", other.category()),
                ));
            }
        }
    }
    path.pop();
    if clusters.len() < 2 {
        return Err(malformed(&accph_path, "ACCPH needs at least two clusters".into()));
    }

    let first_len = clusters[0].len();
    let mut fresh = Vec::with_capacity(first_len);
    let mut candidate = 1;
    while fresh.len() < first_len {
        if !used.contains(&candidate) {
            fresh.push(candidate);
            used.insert(candidate);
        }
        candidate += 1;
    }
    let first_categories: Vec<String> = clusters[0].iter().map(|a| a.category().to_string()).collect();

    let mut vps = Vec::with_capacity(clusters.len());
    for (k, args) in clusters.into_iter().enumerate() {
        let mut taken = vec![false; first_len];
        let mut vp_children = if k == 0 { new_children[..at].to_vec() } else { Vec::new() };
        for (pos, mut arg) in args.into_iter().enumerate() {
            let slot = if k == 0 {
                pos
            } else {
                (0..first_len)
                    .find(|&s| !taken[s] && first_categories[s] == arg.category())
                    .or_else(|| (0..first_len).find(|&s| !taken[s]))
                    .unwrap_or(pos.min(first_len.saturating_sub(1)))
            };
            if slot < first_len {
                taken[slot] = true;
            }
            let index = fresh.get(slot).copied();
            if let Some(l) = arg.label_mut() {
                if k == 0 {
                    l.ref_index = index;
                } else {
                    l.gap_index = index;
                }
            }
            vp_children.push(arg);
        }
        vps.push(Tree::internal(NodeLabel::new("VP"), vp_children));
    }

    let mut vps = vps.into_iter();
    let mut rebuilt: Vec<Tree> = layout
        .into_iter()
        .map(|slot| slot.unwrap_or_else(|| vps.next().expect("one VP per cluster")))
        .collect();
    rebuilt.extend_from_slice(&new_children[at + 1..]);
    Ok(Tree::internal(label.clone(), rebuilt))
}

/// Check the shape of every `ACC_`/`ACCPH_` node: clusters only under
/// `ACCPH`, `ACCPH` holding only clusters and conjunction leaves, and no
/// indices anywhere inside an `ACCPH` subtree.
pub fn check_acc_nodes(tree: &Tree) -> std::result::Result<(), String> {
    fn has_indices(node: &Tree) -> bool {
        node.label().is_some_and(NodeLabel::has_index) || node.children().iter().any(has_indices)
    }
    fn walk(node: &Tree, parent_is_accph: bool) -> std::result::Result<(), String> {
        let Some(label) = node.label() else { return Ok(()) };
        if label.is_acc_cluster() && !parent_is_accph {
            return Err(format!("`{label}` outside an ACCPH node"));
        }
        if label.is_accph() {
            if has_indices(node) {
                return Err(format!("indices survive inside `{label}`"));
            }
            for child in node.children() {
                match child {
                    Tree::Leaf { pos, .. } if pos == "CC" || pos == "," => {}
                    Tree::Internal { label: l, .. } if l.is_acc_cluster() => {}
                    other => return Err(format!("`{}` directly under `{label}`", other.category())),
                }
            }
        }
        node.children().iter().try_for_each(|c| walk(c, label.is_accph()))
    }
    walk(tree, false)
}
