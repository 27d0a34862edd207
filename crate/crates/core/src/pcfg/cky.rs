//! Viterbi CKY over a binarized grammar with unary closure.
//!
//! Ties between equal-scoring analyses go to the lower-ranked production:
//! lexical entries before rules, then by position in the sorted rule list.

use std::collections::HashMap;

use crate::pcfg::grammar::{Grammar, INTERMEDIATE_PREFIX, UNK};
use crate::tree::{NodeLabel, Tree};

#[derive(Debug, Clone, Copy)]
enum Back {
    Lexical,
    Unary(usize),
    Binary(usize, usize, usize),
}

#[derive(Debug, Clone, Copy)]
struct Entry {
    score: f64,
    rank: (u8, usize),
    back: Back,
}

impl Entry {
    fn beats(&self, other: Option<&Entry>) -> bool {
        match other {
            None => true,
            Some(o) => self.score > o.score || (self.score == o.score && self.rank < o.rank),
        }
    }
}

/// A grammar compiled for repeated parsing.
pub struct Parser<'g> {
    grammar: &'g Grammar,
    symbols: Vec<String>,
    start: Option<usize>,
    /// (rank, lhs, child, logp)
    unary: Vec<(usize, usize, usize, f64)>,
    /// indexed by left child: (rank, lhs, right, logp)
    binary: Vec<Vec<(usize, usize, usize, f64)>>,
    /// token -> (rank, pos, logp)
    lexical: HashMap<&'g str, Vec<(usize, usize, f64)>>,
    unknown: Vec<(usize, usize, f64)>,
}

type Cell = HashMap<usize, Entry>;

impl<'g> Parser<'g> {
    pub fn new(grammar: &'g Grammar) -> Parser<'g> {
        let mut ids: HashMap<&str, usize> = HashMap::new();
        let mut symbols = Vec::new();
        let mut intern = |s: &'g str, symbols: &mut Vec<String>| -> usize {
            *ids.entry(s).or_insert_with(|| {
                symbols.push(s.to_string());
                symbols.len() - 1
            })
        };
        let mut unary = Vec::new();
        let mut binary_flat = Vec::new();
        for (rank, rule) in grammar.rules.iter().enumerate() {
            let lhs = intern(&rule.lhs, &mut symbols);
            match rule.rhs.as_slice() {
                [child] => unary.push((rank, lhs, intern(child, &mut symbols), rule.logp)),
                [left, right] => {
                    let l = intern(left, &mut symbols);
                    let r = intern(right, &mut symbols);
                    binary_flat.push((l, (rank, lhs, r, rule.logp)));
                }
                _ => {}
            }
        }
        let mut lexical: HashMap<&str, Vec<(usize, usize, f64)>> = HashMap::new();
        let mut unknown = Vec::new();
        for (rank, entry) in grammar.lexicon.iter().enumerate() {
            let pos = intern(&entry.pos, &mut symbols);
            if entry.token == UNK {
                unknown.push((rank, pos, entry.logp));
            } else {
                lexical.entry(&entry.token).or_default().push((rank, pos, entry.logp));
            }
        }
        let start = ids.get(grammar.start.as_str()).copied();
        let mut binary = vec![Vec::new(); symbols.len()];
        for (l, r) in binary_flat {
            binary[l].push(r);
        }
        Parser {
            grammar,
            symbols,
            start,
            unary,
            binary,
            lexical,
            unknown,
        }
    }

    fn unary_reaches(cell: &Cell, from: usize, target: usize) -> bool {
        let mut at = from;
        for _ in 0..=cell.len() {
            if at == target {
                return true;
            }
            match cell.get(&at).map(|e| e.back) {
                Some(Back::Unary(child)) => at = child,
                _ => return false,
            }
        }
        true
    }

    fn close_unary(&self, cell: &mut Cell) {
        loop {
            let mut changed = false;
            for &(rank, lhs, child, logp) in &self.unary {
                let Some(c) = cell.get(&child) else { continue };
                let cand = Entry {
                    score: c.score + logp,
                    rank: (1, rank),
                    back: Back::Unary(child),
                };
                if cand.beats(cell.get(&lhs)) && !Self::unary_reaches(cell, child, lhs) {
                    cell.insert(lhs, cand);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }

    /// Best parse and its log-probability, or `None` when the start symbol
    /// does not cover the whole input.
    pub fn parse_scored(&self, tokens: &[&str]) -> Option<(Tree, f64)> {
        let n = tokens.len();
        let start = self.start?;
        if n == 0 {
            return None;
        }
        let mut chart: Vec<Vec<Cell>> = (0..n).map(|_| vec![Cell::new(); n + 1]).collect();
        for (i, token) in tokens.iter().enumerate() {
            let entries = self.lexical.get(token).unwrap_or(&self.unknown);
            let cell = &mut chart[i][i + 1];
            for &(rank, pos, logp) in entries {
                let cand = Entry {
                    score: logp,
                    rank: (0, rank),
                    back: Back::Lexical,
                };
                if cand.beats(cell.get(&pos)) {
                    cell.insert(pos, cand);
                }
            }
            self.close_unary(cell);
        }
        for width in 2..=n {
            for i in 0..=n - width {
                let j = i + width;
                let mut cell = Cell::new();
                for (k, left_cell) in chart[i].iter().enumerate().take(j).skip(i + 1) {
                    for (&left, l) in left_cell {
                        for &(rank, lhs, right, logp) in &self.binary[left] {
                            let Some(r) = chart[k][j].get(&right) else { continue };
                            let cand = Entry {
                                score: l.score + r.score + logp,
                                rank: (1, rank),
                                back: Back::Binary(k, left, right),
                            };
                            if cand.beats(cell.get(&lhs)) {
                                cell.insert(lhs, cand);
                            }
                        }
                    }
                }
                self.close_unary(&mut cell);
                chart[i][j] = cell;
            }
        }
        let score = chart[0][n].get(&start)?.score;
        let mut built = self.build(&chart, tokens, 0, n, start);
        let tree = match built.pop()? {
            Tree::Internal { label, mut children } if label.category == self.grammar.start && children.len() == 1 => {
                children.pop()?
            }
            other => other,
        };
        Some((tree, score))
    }

    pub fn parse(&self, tokens: &[&str]) -> Option<Tree> {
        self.parse_scored(tokens).map(|(t, _)| t)
    }

    fn build(&self, chart: &[Vec<Cell>], tokens: &[&str], i: usize, j: usize, sym: usize) -> Vec<Tree> {
        let entry = chart[i][j][&sym];
        let name = &self.symbols[sym];
        let children = match entry.back {
            Back::Lexical => return vec![Tree::leaf(name.clone(), tokens[i])],
            Back::Unary(child) => self.build(chart, tokens, i, j, child),
            Back::Binary(k, left, right) => {
                let mut c = self.build(chart, tokens, i, k, left);
                c.extend(self.build(chart, tokens, k, j, right));
                c
            }
        };
        if name.starts_with(INTERMEDIATE_PREFIX) {
            children
        } else {
            vec![Tree::internal(NodeLabel::new(name.clone()), children)]
        }
    }
}

/// Parse one sentence. Compiles the grammar on every call; use [`Parser`]
/// for many sentences.
pub fn cky_parse(grammar: &Grammar, tokens: &[&str]) -> Option<Tree> {
    Parser::new(grammar).parse(tokens)
}
