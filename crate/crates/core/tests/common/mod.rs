#![allow(dead_code)]

use std::collections::HashMap;

use acc_treekit::eval::{Conjunct, CoordGold, CoordPhrase, Span};
use acc_treekit::pcfg::{Grammar, LexEntry, Rule};
use acc_treekit::{parse_trees, Tree};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn tree(text: &str) -> Tree {
    parse_trees(text).unwrap().remove(0)
}

pub fn data(name: &str) -> String {
    std::fs::read_to_string(format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

// ---- random ACC trees ----

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Plain,
    Accepted,
    VerbBetween,
    CountMismatch,
    WrongPos,
}

#[derive(Debug, Clone)]
pub struct Generated {
    pub tree: Tree,
    /// What detransform(transform(tree)) must equal up to index renumbering
    /// when the instance is applied: gap clauses become plain VPs.
    pub round_trip: Tree,
    pub kind: Kind,
    /// Two indexed arguments share a category, so index-free clusters cannot
    /// say which later argument pairs with which.
    pub ambiguous_pairing: bool,
}

const CATS: [&str; 5] = ["NP", "PP", "ADJP", "ADVP", "SBAR"];
const NOUNS: [&str; 6] = ["cat", "price", "share", "year", "bank", "tax"];
const VERBS: [&str; 5] = ["sold", "gave", "paid", "moved", "put"];

fn pick<'a>(rng: &mut ChaCha8Rng, xs: &[&'a str]) -> &'a str {
    xs[rng.random_range(0..xs.len())]
}

fn arg_body(rng: &mut ChaCha8Rng, cat: &str) -> String {
    let n = pick(rng, &NOUNS);
    match cat {
        "NP" => format!("(DT the) (NN {n})"),
        "PP" => format!("(IN {}) (NP (NN {n}))", pick(rng, &["in", "for", "to"])),
        "ADJP" => format!("(JJ {})", pick(rng, &["high", "low", "flat"])),
        "ADVP" => format!("(RB {})", pick(rng, &["here", "abroad", "later"])),
        _ => format!("(IN that) (S (NP-SBJ (PRP it)) (VP (VBD {})))", pick(rng, &VERBS)),
    }
}

fn arg(cat: &str, tag: &Option<String>, mark: &str, body: &str) -> String {
    let tag = tag.as_deref().map(|t| format!("-{t}")).unwrap_or_default();
    format!("({cat}{tag}{mark} {body})")
}

pub fn generate(rng: &mut ChaCha8Rng) -> Generated {
    let kind = match rng.random_range(0..10) {
        0 => Kind::Plain,
        1 => Kind::VerbBetween,
        2 => Kind::CountMismatch,
        3 => Kind::WrongPos,
        _ => Kind::Accepted,
    };
    let verb = pick(rng, &VERBS);
    let traced = rng.random_bool(0.25);
    let subject = if traced {
        "(NP-SBJ-9 (DT the) (NN firm))".to_string()
    } else {
        "(NP-SBJ (PRP it))".to_string()
    };

    if kind == Kind::Plain {
        let body = if rng.random_bool(0.5) {
            format!("(VP (VBD {verb}) (NP {}))", arg_body(rng, "NP"))
        } else {
            format!(
                "(VP (VP (VBD {verb}) (NP {})) (CC and) (VP (VBD {}) (PP {})))",
                arg_body(rng, "NP"),
                pick(rng, &VERBS),
                arg_body(rng, "PP")
            )
        };
        let t = tree(&format!("(S {subject} {body} (. .))"));
        return Generated {
            round_trip: t.clone(),
            tree: t,
            kind,
            ambiguous_pairing: false,
        };
    }

    let min_args = if matches!(kind, Kind::VerbBetween | Kind::CountMismatch) { 2 } else { 1 };
    let m = rng.random_range(min_args..=3);
    let mut cats: Vec<&str> = (0..m).map(|_| pick(rng, &CATS)).collect();
    if !cats.iter().any(|c| ["NP", "PP", "ADJP", "SBAR"].contains(c)) {
        cats[0] = "NP";
    }
    let tags: Vec<Option<String>> = (0..m)
        .map(|_| rng.random_bool(0.2).then(|| "TMP".to_string()))
        .collect();
    let k = rng.random_range(2..=3);

    let mut first = Vec::new();
    let verb_pos = if kind == Kind::WrongPos { "NN" } else { "VBD" };
    let verb_leaf = format!("({verb_pos} {verb})");
    if kind != Kind::VerbBetween {
        first.push(verb_leaf.clone());
        if rng.random_bool(0.2) {
            first.push("(PRT (RP up))".into());
        }
        if traced {
            first.push("(NP (-NONE- *-9))".into());
        }
    }
    for (i, cat) in cats.iter().enumerate() {
        let body = arg_body(rng, cat);
        first.push(arg(cat, &tags[i], &format!("-{}", i + 1), &body));
        if kind == Kind::VerbBetween && i == 0 {
            first.push(verb_leaf.clone());
        }
    }
    let first = format!("(VP {})", first.join(" "));

    let mut conjuncts = vec![(first.clone(), first)];
    for c in 1..k {
        let mut order: Vec<usize> = (0..m).collect();
        if rng.random_bool(0.2) {
            order.shuffle(rng);
        }
        if kind == Kind::CountMismatch && c == k - 1 {
            order.retain(|&i| i != m - 1);
        }
        let args: Vec<String> = order
            .iter()
            .map(|&i| {
                let body = arg_body(rng, cats[i]);
                arg(cats[i], &tags[i], &format!("={}", i + 1), &body)
            })
            .collect();
        let plain = format!("(VP {})", args.join(" "));
        let shown = if rng.random_bool(0.25) {
            format!("(S (NP-SBJ (-NONE- *)) {})", args.join(" "))
        } else {
            plain.clone()
        };
        conjuncts.push((shown, plain));
    }

    let cc = pick(rng, &["and", "or"]);
    let join = |side: fn(&(String, String)) -> &String| -> String {
        let mut parts = Vec::new();
        for (i, c) in conjuncts.iter().enumerate() {
            if i > 0 {
                if k == 3 {
                    parts.push("(, ,)".to_string());
                }
                if i == k - 1 {
                    parts.push(format!("(CC {cc})"));
                }
            }
            parts.push(side(c).clone());
        }
        format!("(VP {})", parts.join(" "))
    };
    let shown = join(|c| &c.0);
    let plain = join(|c| &c.1);
    let modal = rng.random_bool(0.3);
    let wrap = |coord: &str| -> String {
        let vp = if modal {
            format!("(VP (MD will) {coord})")
        } else {
            coord.to_string()
        };
        format!("(S {subject} {vp} (. .))")
    };
    Generated {
        tree: tree(&wrap(&shown)),
        round_trip: tree(&wrap(&plain)),
        kind,
        ambiguous_pairing: (1..m).any(|i| cats[..i].contains(&cats[i])),
    }
}

/// Drop every label index, keeping trace tokens.
pub fn strip_label_indices(tree: &Tree) -> Tree {
    match tree {
        Tree::Leaf { .. } => tree.clone(),
        Tree::Internal { label, children } => {
            Tree::internal(label.without_indices(), children.iter().map(strip_label_indices).collect())
        }
    }
}

/// Renumber indices (labels and trace tokens) by order of first appearance.
pub fn canonical_indices(tree: &Tree) -> Tree {
    fn number(map: &mut HashMap<u32, u32>, n: u32) -> u32 {
        let next = map.len() as u32 + 1;
        *map.entry(n).or_insert(next)
    }
    fn walk(node: &Tree, map: &mut HashMap<u32, u32>) -> Tree {
        match node {
            Tree::Leaf { pos, token } => {
                if node.is_empty_element() {
                    if let Some((base, n)) = token.rsplit_once('-') {
                        if let Ok(n) = n.parse::<u32>() {
                            return Tree::leaf(pos.clone(), format!("{base}-{}", number(map, n)));
                        }
                    }
                }
                node.clone()
            }
            Tree::Internal { label, children } => {
                let mut label = label.clone();
                if let Some(r) = label.ref_index {
                    label.ref_index = Some(number(map, r));
                }
                if let Some(g) = label.gap_index {
                    label.gap_index = Some(number(map, g));
                }
                Tree::internal(label, children.iter().map(|c| walk(c, map)).collect())
            }
        }
    }
    walk(tree, &mut HashMap::new())
}

pub fn overt_yield(tree: &Tree) -> Vec<String> {
    tree.leaves()
        .iter()
        .filter(|l| !l.is_empty_element())
        .map(|l| l.to_string())
        .collect()
}

/// No index survives anywhere under an ACCPH node.
pub fn accph_index_free(tree: &Tree) -> bool {
    fn clean(node: &Tree) -> bool {
        node.label().is_none_or(|l| !l.has_index())
            && node.children().iter().all(clean)
            && !matches!(node, Tree::Leaf { token, .. } if node.is_empty_element() && token.rsplit_once('-').is_some_and(|(_, n)| n.parse::<u32>().is_ok()))
    }
    tree.internal_nodes()
        .into_iter()
        .filter(|(_, n)| n.label().is_some_and(|l| l.is_accph()))
        .all(|(_, n)| clean(n))
}

// ---- random coordination annotations ----

fn random_phrase(rng: &mut ChaCha8Rng, n: usize) -> Option<CoordPhrase> {
    let k = rng.random_range(2..=3);
    let mut cuts: Vec<usize> = (0..=n).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(k + 1).collect();
    cuts.sort();
    cuts.dedup();
    if cuts.len() < k + 1 {
        return None;
    }
    let is_acc = rng.random_bool(0.5);
    let conjuncts = cuts
        .windows(2)
        .map(|w| {
            let span = Span::new(w[0], w[1]);
            let args = if is_acc {
                let mut args = Vec::new();
                let mut at = span.start;
                while at < span.end {
                    let len = rng.random_range(1..=(span.end - at));
                    args.push(Span::new(at, at + len));
                    at += len;
                }
                args
            } else {
                Vec::new()
            };
            Conjunct { span, args }
        })
        .collect();
    Some(CoordPhrase { conjuncts, is_acc })
}

fn mutate(rng: &mut ChaCha8Rng, phrase: &CoordPhrase, n: usize) -> CoordPhrase {
    let mut p = phrase.clone();
    match rng.random_range(0..5) {
        0 => {}
        1 => {
            let c = rng.random_range(0..p.conjuncts.len());
            let conj = &mut p.conjuncts[c];
            if conj.span.end < n {
                conj.span.end += 1;
                if let Some(a) = conj.args.last_mut() {
                    a.end += 1;
                }
            }
        }
        2 => {
            for c in &mut p.conjuncts {
                if c.args.len() >= 2 {
                    let a = c.args.pop().unwrap();
                    c.args.last_mut().unwrap().end = a.end;
                    break;
                }
            }
        }
        3 => p.is_acc = !p.is_acc,
        _ => {
            p.conjuncts.pop();
            if p.conjuncts.len() < 2 {
                return phrase.clone();
            }
        }
    }
    p
}

/// A gold sentence and a noisy prediction over the same tokens.
pub fn random_pair(rng: &mut ChaCha8Rng) -> (CoordGold, CoordGold) {
    let n = rng.random_range(4..12);
    let tokens: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
    let gold_phrases: Vec<CoordPhrase> = (0..rng.random_range(0..=3)).filter_map(|_| random_phrase(rng, n)).collect();
    let mut pred_phrases = Vec::new();
    for p in &gold_phrases {
        if rng.random_bool(0.8) {
            pred_phrases.push(mutate(rng, p, n));
        }
    }
    for _ in 0..rng.random_range(0..=2) {
        if let Some(p) = random_phrase(rng, n) {
            pred_phrases.push(p);
        }
    }
    if rng.random_bool(0.2) {
        if let Some(p) = pred_phrases.first().cloned() {
            pred_phrases.push(p);
        }
    }
    pred_phrases.shuffle(rng);
    (
        CoordGold {
            tokens: tokens.clone(),
            phrases: gold_phrases,
        },
        CoordGold {
            tokens,
            phrases: pred_phrases,
        },
    )
}

/// Exhaustive search over one-to-one assignments of gold phrases to
/// predicted phrases. `eligible` says whether a pair may be matched;
/// returns the best (matched, strong) pair, maximizing lexicographically.
pub fn best_assignment(
    gold: &[&CoordPhrase],
    pred: &[&CoordPhrase],
    eligible: &dyn Fn(&CoordPhrase, &CoordPhrase) -> bool,
    strong: &dyn Fn(&CoordPhrase, &CoordPhrase) -> bool,
) -> (usize, usize) {
    fn go(
        gi: usize,
        gold: &[&CoordPhrase],
        pred: &[&CoordPhrase],
        used: &mut Vec<bool>,
        eligible: &dyn Fn(&CoordPhrase, &CoordPhrase) -> bool,
        strong: &dyn Fn(&CoordPhrase, &CoordPhrase) -> bool,
    ) -> (usize, usize) {
        if gi == gold.len() {
            return (0, 0);
        }
        let mut best = go(gi + 1, gold, pred, used, eligible, strong);
        for pi in 0..pred.len() {
            if used[pi] || !eligible(gold[gi], pred[pi]) {
                continue;
            }
            used[pi] = true;
            let (m, s) = go(gi + 1, gold, pred, used, eligible, strong);
            used[pi] = false;
            let cand = (m + 1, s + usize::from(strong(gold[gi], pred[pi])));
            best = best.max(cand);
        }
        best
    }
    go(0, gold, pred, &mut vec![false; pred.len()], eligible, strong)
}

pub fn spans_equal(a: &CoordPhrase, b: &CoordPhrase) -> bool {
    let mut x: Vec<Span> = a.conjuncts.iter().map(|c| c.span).collect();
    let mut y: Vec<Span> = b.conjuncts.iter().map(|c| c.span).collect();
    x.sort();
    y.sort();
    x == y
}

pub fn structure_equal(a: &CoordPhrase, b: &CoordPhrase) -> bool {
    let mut x: Vec<(Span, Vec<Span>)> = a.conjuncts.iter().map(|c| (c.span, c.args.clone())).collect();
    let mut y: Vec<(Span, Vec<Span>)> = b.conjuncts.iter().map(|c| (c.span, c.args.clone())).collect();
    x.sort();
    y.sort();
    x == y
}

/// (conjuncts, conjuncts_acc, args, internal, accph, accph_strict) as
/// (numerator, denominator) pairs; accph entries are (recall num, recall
/// den, precision den) flattened as three numbers.
pub struct OracleScores {
    pub conjuncts: (usize, usize),
    pub conjuncts_acc: (usize, usize),
    pub args: (usize, usize),
    pub internal: (usize, usize),
    pub accph: (usize, usize, usize),
    pub accph_strict: (usize, usize, usize),
}

pub fn oracle(gold: &[CoordGold], pred: &[CoordGold]) -> OracleScores {
    let mut s = OracleScores {
        conjuncts: (0, 0),
        conjuncts_acc: (0, 0),
        args: (0, 0),
        internal: (0, 0),
        accph: (0, 0, 0),
        accph_strict: (0, 0, 0),
    };
    let never = |_: &CoordPhrase, _: &CoordPhrase| false;
    for (g, p) in gold.iter().zip(pred) {
        let all_g: Vec<&CoordPhrase> = g.phrases.iter().collect();
        let acc_g: Vec<&CoordPhrase> = g.phrases.iter().filter(|x| x.is_acc).collect();
        let all_p: Vec<&CoordPhrase> = p.phrases.iter().collect();
        let acc_p: Vec<&CoordPhrase> = p.phrases.iter().filter(|x| x.is_acc).collect();

        s.conjuncts.0 += best_assignment(&all_g, &all_p, &spans_equal, &never).0;
        s.conjuncts.1 += all_g.len();
        s.conjuncts_acc.0 += best_assignment(&acc_g, &all_p, &spans_equal, &never).0;
        s.conjuncts_acc.1 += acc_g.len();

        for gp in &acc_g {
            for gc in &gp.conjuncts {
                for ga in &gc.args {
                    s.args.1 += 1;
                    let found = p
                        .phrases
                        .iter()
                        .any(|pp| pp.conjuncts.iter().any(|pc| pc.args.iter().any(|pa| pa == ga)));
                    s.args.0 += usize::from(found);
                }
            }
        }

        let (m, strong) = best_assignment(&acc_g, &all_p, &spans_equal, &structure_equal);
        s.internal.0 += strong;
        s.internal.1 += m;

        s.accph.0 += best_assignment(&acc_g, &acc_p, &spans_equal, &never).0;
        s.accph.1 += acc_g.len();
        s.accph.2 += acc_p.len();
        s.accph_strict.0 += best_assignment(&acc_g, &acc_p, &structure_equal, &never).0;
        s.accph_strict.1 += acc_g.len();
        s.accph_strict.2 += acc_p.len();
    }
    s
}

// ---- random grammars ----

const NTS: [&str; 4] = ["TOP", "A", "B", "C"];
const POS: [&str; 2] = ["p", "q"];
pub const WORDS: [&str; 2] = ["x", "y"];

/// Random binarized grammar whose unary rules only point downward in
/// `TOP > A > B > C > POS`, so there are no unary cycles.
pub fn random_grammar(rng: &mut ChaCha8Rng) -> Grammar {
    let rank = |s: &str| NTS.iter().position(|x| *x == s).unwrap_or(NTS.len());
    let symbols: Vec<&str> = NTS[1..].iter().chain(POS.iter()).copied().collect();
    let mut rules = Vec::new();
    for lhs in NTS {
        let mut rhs_set: Vec<Vec<String>> = Vec::new();
        for s in &symbols {
            if rank(s) > rank(lhs) && rng.random_bool(if lhs == "TOP" { 0.8 } else { 0.4 }) {
                rhs_set.push(vec![s.to_string()]);
            }
        }
        if lhs != "TOP" {
            for l in &symbols {
                for r in &symbols {
                    if rng.random_bool(0.3) {
                        rhs_set.push(vec![l.to_string(), r.to_string()]);
                    }
                }
            }
        }
        if rhs_set.is_empty() {
            rhs_set.push(vec![if lhs == "TOP" { "A" } else { "p" }.to_string()]);
        }
        let weights: Vec<f64> = rhs_set.iter().map(|_| rng.random_range(0.05..1.0)).collect();
        let total: f64 = weights.iter().sum();
        for (rhs, w) in rhs_set.into_iter().zip(weights) {
            rules.push(Rule {
                lhs: lhs.to_string(),
                rhs,
                logp: (w / total).ln(),
                count: 0,
            });
        }
    }
    rules.sort_by(|a, b| (&a.lhs, &a.rhs).cmp(&(&b.lhs, &b.rhs)));
    let mut lexicon = Vec::new();
    for pos in POS {
        let w: f64 = rng.random_range(0.1..0.9);
        for (token, p) in [("x", w), ("y", 1.0 - w)] {
            lexicon.push(LexEntry {
                pos: pos.to_string(),
                token: token.to_string(),
                logp: p.ln(),
                count: 0,
            });
        }
    }
    Grammar {
        start: "TOP".into(),
        rules,
        lexicon,
    }
}

/// Best derivation score by enumerating every derivation, no sharing.
pub fn exhaustive_best(g: &Grammar, tokens: &[&str]) -> Option<f64> {
    fn all(g: &Grammar, tokens: &[&str], sym: &str, i: usize, j: usize) -> Vec<f64> {
        let mut out = Vec::new();
        if j == i + 1 {
            for e in &g.lexicon {
                if e.pos == sym && e.token == tokens[i] {
                    out.push(e.logp);
                }
            }
        }
        for r in g.rules.iter().filter(|r| r.lhs == sym) {
            match r.rhs.as_slice() {
                [c] => out.extend(all(g, tokens, c, i, j).into_iter().map(|s| s + r.logp)),
                [l, rr] => {
                    for k in i + 1..j {
                        let left = all(g, tokens, l, i, k);
                        if left.is_empty() {
                            continue;
                        }
                        let right = all(g, tokens, rr, k, j);
                        for a in &left {
                            for b in &right {
                                out.push(a + b + r.logp);
                            }
                        }
                    }
                }
                _ => {}
            }
        }
        out
    }
    all(g, tokens, &g.start, 0, tokens.len()).into_iter().reduce(f64::max)
}

/// Log-probability of an unbinarized tree. Wide nodes are scored through
/// right-branching `@LHS|C2+...+Cn` intermediates. The tree's root is the
/// child of the start symbol.
pub fn tree_score(g: &Grammar, root: &Tree) -> f64 {
    fn score(g: &Grammar, node: &Tree) -> f64 {
        match node {
            Tree::Leaf { pos, token } => {
                g.lexicon.iter().find(|e| &e.pos == pos && &e.token == token).unwrap().logp
            }
            Tree::Internal { label, children } => {
                let rhs: Vec<&str> = children.iter().map(|c| c.category()).collect();
                let mut total = children.iter().map(|c| score(g, c)).sum::<f64>();
                let mut parent = label.category.clone();
                for i in 0..rhs.len().saturating_sub(2) {
                    let tail = format!("@{}|{}", label.category, rhs[i + 1..].join("+"));
                    total += g.rule_logp(&parent, &[rhs[i], &tail]).unwrap();
                    parent = tail;
                }
                total + g.rule_logp(&parent, &rhs[rhs.len().saturating_sub(2)..]).unwrap()
            }
        }
    }
    g.rule_logp(&g.start, &[root.category()]).unwrap() + score(g, root)
}
