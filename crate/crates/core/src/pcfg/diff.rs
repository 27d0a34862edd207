//! Rule-level comparison of two grammars.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::pcfg::grammar::{Grammar, Rule};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleShift {
    pub lhs: String,
    pub rhs: Vec<String>,
    pub p_first: f64,
    pub p_second: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleDiff {
    pub only_in_first: Vec<Rule>,
    pub only_in_second: Vec<Rule>,
    /// Shared rules whose probability changed, largest change first.
    pub shifted: Vec<RuleShift>,
}

fn keyed(g: &Grammar) -> BTreeMap<(&str, &[String]), &Rule> {
    g.rules.iter().map(|r| ((r.lhs.as_str(), r.rhs.as_slice()), r)).collect()
}

pub fn rule_diff(first: &Grammar, second: &Grammar) -> RuleDiff {
    let a = keyed(first);
    let b = keyed(second);
    let only_in_first = a.iter().filter(|(k, _)| !b.contains_key(*k)).map(|(_, r)| (*r).clone()).collect();
    let only_in_second = b.iter().filter(|(k, _)| !a.contains_key(*k)).map(|(_, r)| (*r).clone()).collect();
    let mut shifted: Vec<RuleShift> = a
        .iter()
        .filter_map(|(k, ra)| {
            let rb = b.get(k)?;
            let (pa, pb) = (ra.logp.exp(), rb.logp.exp());
            (pa != pb).then(|| RuleShift {
                lhs: ra.lhs.clone(),
                rhs: ra.rhs.clone(),
                p_first: pa,
                p_second: pb,
                delta: pb - pa,
            })
        })
        .collect();
    shifted.sort_by(|x, y| y.delta.abs().total_cmp(&x.delta.abs()));
    RuleDiff {
        only_in_first,
        only_in_second,
        shifted,
    }
}
