//! Corpus census of ACC candidates, rejections and produced labels.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detect::{detect_all, RejectionCode};
use crate::error::Result;
use crate::transform::transform_tree;
use crate::tree::Tree;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub trees: usize,
    pub total_acc_candidates: usize,
    pub accepted: usize,
    pub rejected: BTreeMap<String, usize>,
    /// Candidates not rejected for their conjunction.
    pub conjoined_by_and_or: usize,
    /// `accepted / conjoined_by_and_or`.
    pub pattern_conformant_fraction: f64,
    pub symmetric: usize,
    /// `symmetric / accepted`.
    pub symmetric_fraction: f64,
    pub trees_with_candidates: usize,
    pub trees_with_accepted: usize,
    pub applied_instances: usize,
    /// Detector-accepted instances the rewrite refused.
    pub transform_failures: usize,
    pub modified_tree_count: usize,
    pub cluster_count: usize,
    pub acc_labels: BTreeMap<String, usize>,
    pub accph_labels: BTreeMap<String, usize>,
}

impl Default for CensusReport {
    fn default() -> Self {
        CensusReport {
            trees: 0,
            total_acc_candidates: 0,
            accepted: 0,
            rejected: RejectionCode::ALL.iter().map(|c| (c.as_str().to_string(), 0)).collect(),
            conjoined_by_and_or: 0,
            pattern_conformant_fraction: 0.0,
            symmetric: 0,
            symmetric_fraction: 0.0,
            trees_with_candidates: 0,
            trees_with_accepted: 0,
            applied_instances: 0,
            transform_failures: 0,
            modified_tree_count: 0,
            cluster_count: 0,
            acc_labels: BTreeMap::new(),
            accph_labels: BTreeMap::new(),
        }
    }
}

fn add_counts(into: &mut BTreeMap<String, usize>, from: &BTreeMap<String, usize>) {
    for (k, v) in from {
        *into.entry(k.clone()).or_default() += v;
    }
}

fn fraction(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl CensusReport {
    /// Counts for one tree.
    pub fn of_tree(tree: &Tree) -> Result<CensusReport> {
        let mut r = CensusReport {
            trees: 1,
            ..CensusReport::default()
        };
        let instances = detect_all(tree);
        for inst in &instances {
            r.total_acc_candidates += 1;
            match &inst.rejection {
                None => {
                    r.accepted += 1;
                    r.symmetric += usize::from(inst.symmetric);
                }
                Some(reason) => *r.rejected.entry(reason.code.as_str().to_string()).or_default() += 1,
            }
            if inst.rejection.as_ref().map(|x| x.code) != Some(RejectionCode::UnsupportedConjunction) {
                r.conjoined_by_and_or += 1;
            }
        }
        r.trees_with_candidates = usize::from(!instances.is_empty());
        r.trees_with_accepted = usize::from(r.accepted > 0);

        let (out, records) = transform_tree(0, tree)?;
        for rec in records.iter().filter(|rec| rec.applied) {
            r.applied_instances += 1;
            if let Some(label) = &rec.accph_label {
                *r.accph_labels.entry(label.clone()).or_default() += 1;
            }
            for label in &rec.cluster_labels {
                r.cluster_count += 1;
                *r.acc_labels.entry(label.clone()).or_default() += 1;
            }
        }
        r.transform_failures = r.accepted.saturating_sub(r.applied_instances);
        r.modified_tree_count = usize::from(&out != tree);
        r.finish();
        Ok(r)
    }

    pub fn merge(mut self, other: &CensusReport) -> CensusReport {
        self.trees += other.trees;
        self.total_acc_candidates += other.total_acc_candidates;
        self.accepted += other.accepted;
        add_counts(&mut self.rejected, &other.rejected);
        self.conjoined_by_and_or += other.conjoined_by_and_or;
        self.symmetric += other.symmetric;
        self.trees_with_candidates += other.trees_with_candidates;
        self.trees_with_accepted += other.trees_with_accepted;
        self.applied_instances += other.applied_instances;
        self.transform_failures += other.transform_failures;
        self.modified_tree_count += other.modified_tree_count;
        self.cluster_count += other.cluster_count;
        add_counts(&mut self.acc_labels, &other.acc_labels);
        add_counts(&mut self.accph_labels, &other.accph_labels);
        self.finish();
        self
    }

    fn finish(&mut self) {
        self.pattern_conformant_fraction = fraction(self.accepted, self.conjoined_by_and_or);
        self.symmetric_fraction = fraction(self.symmetric, self.accepted);
    }

    pub fn rejected_total(&self) -> usize {
        self.rejected.values().sum()
    }

    /// Share of all produced clusters carrying `label` (e.g. `ACC_NP-PP`).
    pub fn acc_label_fraction(&self, label: &str) -> f64 {
        fraction(self.acc_labels.get(label).copied().unwrap_or(0), self.cluster_count)
    }
}

pub fn census(trees: &[Tree]) -> Result<CensusReport> {
    trees
        .iter()
        .map(CensusReport::of_tree)
        .try_fold(CensusReport::default(), |acc, r| Ok(acc.merge(&r?)))
}

/// Same as [`census`], computed on the current rayon pool.
pub fn census_parallel(trees: &[Tree]) -> Result<CensusReport> {
    let parts: Vec<CensusReport> = trees.par_iter().map(CensusReport::of_tree).collect::<Result<_>>()?;
    Ok(parts.iter().fold(CensusReport::default(), |acc, r| acc.merge(r)))
}
