//! Coordination recovery metrics. Matching is per sentence, exact-span and
//! one-to-one: a gold phrase consumes at most one predicted phrase.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::gold::{CoordGold, CoordPhrase};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub metric: String,
    pub numerator: usize,
    pub denominator: usize,
    /// `None` when the denominator is zero.
    pub value: Option<f64>,
}

impl EvalReport {
    pub fn new(metric: &str, numerator: usize, denominator: usize) -> EvalReport {
        EvalReport {
            metric: metric.to_string(),
            numerator,
            denominator,
            value: (denominator > 0).then(|| numerator as f64 / denominator as f64),
        }
    }
}

/// Which gold phrases a recall metric counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhraseScope {
    All,
    AccOnly,
}

fn check_aligned(gold: &[CoordGold], pred: &[CoordGold]) -> Result<()> {
    if gold.len() != pred.len() {
        return Err(Error::Evaluation(format!(
            "{} gold sentences but {} predicted",
            gold.len(),
            pred.len()
        )));
    }
    for (i, (g, p)) in gold.iter().zip(pred).enumerate() {
        if g.tokens != p.tokens {
            return Err(Error::TokenMismatch {
                sentence: i,
                message: format!("gold `{}` vs predicted `{}`", g.tokens.join(" "), p.tokens.join(" ")),
            });
        }
    }
    Ok(())
}

fn same_spans(a: &CoordPhrase, b: &CoordPhrase) -> bool {
    a.conjuncts.len() == b.conjuncts.len() && a.conjuncts.iter().zip(&b.conjuncts).all(|(x, y)| x.span == y.span)
}

fn same_structure(a: &CoordPhrase, b: &CoordPhrase) -> bool {
    same_spans(a, b) && a.conjuncts.iter().zip(&b.conjuncts).all(|(x, y)| x.args == y.args)
}

/// Greedy one-to-one matching. Pairs satisfying `strong` are taken first,
/// then the remaining pairs satisfying `weak`. Returns, per gold phrase, the
/// matched predicted phrase and whether the match was strong.
fn match_phrases<'a>(
    gold: &[&CoordPhrase],
    pred: &[&'a CoordPhrase],
    weak: impl Fn(&CoordPhrase, &CoordPhrase) -> bool,
    strong: impl Fn(&CoordPhrase, &CoordPhrase) -> bool,
) -> Vec<Option<(&'a CoordPhrase, bool)>> {
    let mut used = vec![false; pred.len()];
    let mut out = vec![None; gold.len()];
    for (pass_strong, test) in [(true, &strong as &dyn Fn(&CoordPhrase, &CoordPhrase) -> bool), (false, &weak)] {
        for (gi, g) in gold.iter().enumerate() {
            if out[gi].is_some() {
                continue;
            }
            if let Some(pi) = (0..pred.len()).find(|&pi| !used[pi] && test(g, pred[pi])) {
                used[pi] = true;
                out[gi] = Some((pred[pi], pass_strong));
            }
        }
    }
    out
}

/// Share of gold phrases whose conjunct spans are all predicted exactly.
pub fn conjunct_recall(gold: &[CoordGold], pred: &[CoordGold], scope: PhraseScope) -> Result<EvalReport> {
    check_aligned(gold, pred)?;
    let (mut num, mut den) = (0, 0);
    for (g, p) in gold.iter().zip(pred) {
        let gp: Vec<&CoordPhrase> = g
            .phrases
            .iter()
            .filter(|ph| scope == PhraseScope::All || ph.is_acc)
            .collect();
        let pp: Vec<&CoordPhrase> = p.phrases.iter().collect();
        den += gp.len();
        num += match_phrases(&gp, &pp, same_spans, same_spans).iter().filter(|m| m.is_some()).count();
    }
    let name = match scope {
        PhraseScope::All => "conjuncts",
        PhraseScope::AccOnly => "conjuncts_acc",
    };
    Ok(EvalReport::new(name, num, den))
}

/// Share of gold argument spans (inside ACC phrases) found as an argument
/// span of any predicted phrase in the same sentence.
pub fn argument_recall(gold: &[CoordGold], pred: &[CoordGold]) -> Result<EvalReport> {
    check_aligned(gold, pred)?;
    let (mut num, mut den) = (0, 0);
    for (g, p) in gold.iter().zip(pred) {
        let predicted: std::collections::HashSet<_> = p.phrases.iter().flat_map(|ph| ph.arg_spans()).collect();
        for phrase in g.phrases.iter().filter(|ph| ph.is_acc) {
            for arg in phrase.arg_spans() {
                den += 1;
                num += usize::from(predicted.contains(arg));
            }
        }
    }
    Ok(EvalReport::new("args", num, den))
}

/// Among ACC gold phrases whose conjunct spans were recovered, the share
/// whose argument spans were all recovered too.
pub fn internal_given_boundaries(gold: &[CoordGold], pred: &[CoordGold]) -> Result<EvalReport> {
    check_aligned(gold, pred)?;
    let (mut num, mut den) = (0, 0);
    for (g, p) in gold.iter().zip(pred) {
        let gp: Vec<&CoordPhrase> = g.phrases.iter().filter(|ph| ph.is_acc).collect();
        let pp: Vec<&CoordPhrase> = p.phrases.iter().collect();
        for m in match_phrases(&gp, &pp, same_spans, same_structure).into_iter().flatten() {
            den += 1;
            num += usize::from(m.1);
        }
    }
    Ok(EvalReport::new("internal", num, den))
}

/// Recall and precision of ACCPH-labeled predictions against ACC gold
/// phrases. `strict` also requires the argument spans to match.
pub fn accph_identification(
    gold: &[CoordGold],
    pred: &[CoordGold],
    strict: bool,
) -> Result<(EvalReport, EvalReport)> {
    check_aligned(gold, pred)?;
    let (mut matched, mut gold_count, mut pred_count) = (0, 0, 0);
    for (g, p) in gold.iter().zip(pred) {
        let gp: Vec<&CoordPhrase> = g.phrases.iter().filter(|ph| ph.is_acc).collect();
        let pp: Vec<&CoordPhrase> = p.phrases.iter().filter(|ph| ph.is_acc).collect();
        gold_count += gp.len();
        pred_count += pp.len();
        let test = if strict { same_structure } else { same_spans };
        matched += match_phrases(&gp, &pp, test, test).iter().filter(|m| m.is_some()).count();
    }
    let prefix = if strict { "accph_strict" } else { "accph" };
    Ok((
        EvalReport::new(&format!("{prefix}_recall"), matched, gold_count),
        EvalReport::new(&format!("{prefix}_precision"), matched, pred_count),
    ))
}
