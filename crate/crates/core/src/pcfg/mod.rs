//! Treebank PCFGs: extraction, CKY parsing and grammar comparison.

pub mod cky;
pub mod diff;
pub mod grammar;

pub use cky::{cky_parse, Parser};
pub use diff::{rule_diff, RuleDiff, RuleShift};
pub use grammar::{extract_grammar, normalize_tree, Grammar, LexEntry, Rule, START, UNK};
