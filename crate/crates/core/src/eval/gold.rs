//! Bracketed coordination annotations.
//!
//! One sentence per line, tokens separated by spaces. `(` … `)` marks a
//! conjunct, `[` … `]` an argument inside a conjunct. Literal brackets in
//! the text must be escaped (`-LRB-`, `-RRB-`, `-LSB-`, `-RSB-`). Markup may
//! be attached to tokens (`([$11.08]`) or stand alone (`( ran`).
//!
//! Conjuncts separated only by commas, semicolons or coordinating words
//! form one phrase; any other token between two conjuncts starts a new one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Half-open token interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Span {
        Span { start, end }
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }
}

pub type ArgSpan = Span;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Conjunct {
    pub span: Span,
    pub args: Vec<ArgSpan>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoordPhrase {
    pub conjuncts: Vec<Conjunct>,
    pub is_acc: bool,
}

impl CoordPhrase {
    pub fn conjunct_spans(&self) -> Vec<Span> {
        self.conjuncts.iter().map(|c| c.span).collect()
    }

    pub fn arg_spans(&self) -> impl Iterator<Item = &Span> {
        self.conjuncts.iter().flat_map(|c| c.args.iter())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordGold {
    pub tokens: Vec<String>,
    pub phrases: Vec<CoordPhrase>,
}

const SEPARATORS: &[&str] = &[",", ";", "and", "or", "but", "nor", "&"];

fn is_separator(token: &str) -> bool {
    SEPARATORS.iter().any(|s| s.eq_ignore_ascii_case(token))
}

#[derive(Debug)]
enum Mark {
    OpenConjunct,
    CloseConjunct,
    OpenArg,
    CloseArg,
    Word(String),
}

fn lex(line: &str) -> Vec<Mark> {
    let mut marks = Vec::new();
    for chunk in line.split_whitespace() {
        let mut word = String::new();
        for c in chunk.chars() {
            let mark = match c {
                '(' => Mark::OpenConjunct,
                ')' => Mark::CloseConjunct,
                '[' => Mark::OpenArg,
                ']' => Mark::CloseArg,
                _ => {
                    word.push(c);
                    continue;
                }
            };
            if !word.is_empty() {
                marks.push(Mark::Word(std::mem::take(&mut word)));
            }
            marks.push(mark);
        }
        if !word.is_empty() {
            marks.push(Mark::Word(word));
        }
    }
    marks
}

/// Parse one annotated sentence. `line_number` is used in error messages.
pub fn parse_gold_line(line: &str, line_number: usize) -> Result<CoordGold> {
    let fail = |message: String| Error::Gold {
        line: line_number,
        message,
    };
    let mut tokens: Vec<String> = Vec::new();
    let mut phrases = Vec::new();
    let mut pending: Vec<Conjunct> = Vec::new();
    let mut last_close = 0;
    let mut open_conjunct: Option<(usize, Vec<Span>)> = None;
    let mut open_arg: Option<usize> = None;

    let close_phrase = |pending: &mut Vec<Conjunct>, phrases: &mut Vec<CoordPhrase>| -> Result<()> {
        match pending.len() {
            0 => Ok(()),
            1 => Err(fail(format!(
                "conjunct at tokens {}..{} has no sibling conjunct",
                pending[0].span.start, pending[0].span.end
            ))),
            _ => {
                let conjuncts = std::mem::take(pending);
                let is_acc = conjuncts.iter().any(|c| !c.args.is_empty());
                phrases.push(CoordPhrase { conjuncts, is_acc });
                Ok(())
            }
        }
    };

    for mark in lex(line) {
        match mark {
            Mark::Word(w) => tokens.push(w),
            Mark::OpenConjunct => {
                if open_conjunct.is_some() {
                    return Err(fail("nested round brackets".into()));
                }
                if !pending.is_empty() && !tokens[last_close..].iter().all(|t| is_separator(t)) {
                    close_phrase(&mut pending, &mut phrases)?;
                }
                open_conjunct = Some((tokens.len(), Vec::new()));
            }
            Mark::CloseConjunct => {
                if open_arg.is_some() {
                    return Err(fail("`)` inside an open `[`".into()));
                }
                let (start, args) = open_conjunct.take().ok_or_else(|| fail("unbalanced `)`".into()))?;
                if start == tokens.len() {
                    return Err(fail("empty conjunct".into()));
                }
                pending.push(Conjunct {
                    span: Span::new(start, tokens.len()),
                    args,
                });
                last_close = tokens.len();
            }
            Mark::OpenArg => {
                if open_conjunct.is_none() {
                    return Err(fail("`[` outside a conjunct".into()));
                }
                if open_arg.is_some() {
                    return Err(fail("nested square brackets".into()));
                }
                open_arg = Some(tokens.len());
            }
            Mark::CloseArg => {
                let start = open_arg.take().ok_or_else(|| fail("unbalanced `]`".into()))?;
                if start == tokens.len() {
                    return Err(fail("empty argument".into()));
                }
                if let Some((_, args)) = open_conjunct.as_mut() {
                    args.push(Span::new(start, tokens.len()));
                }
            }
        }
    }
    if open_arg.is_some() {
        return Err(fail("unbalanced `[`".into()));
    }
    if open_conjunct.is_some() {
        return Err(fail("unbalanced `(`".into()));
    }
    close_phrase(&mut pending, &mut phrases)?;
    Ok(CoordGold { tokens, phrases })
}

/// Parse a gold file. Blank lines are skipped.
pub fn parse_gold(text: &str) -> Result<Vec<CoordGold>> {
    text.lines()
        .enumerate()
        .filter(|(_, line)| !line.trim().is_empty())
        .map(|(i, line)| parse_gold_line(line, i + 1))
        .collect()
}

/// Render a sentence back into the markup format, markup detached from tokens.
pub fn write_gold(gold: &CoordGold) -> String {
    let n = gold.tokens.len();
    let mut opens = vec![String::new(); n];
    let mut closes = vec![String::new(); n];
    for phrase in &gold.phrases {
        for conjunct in &phrase.conjuncts {
            opens[conjunct.span.start].push('(');
            for arg in &conjunct.args {
                opens[arg.start].push('[');
                closes[arg.end - 1].push(']');
            }
            closes[conjunct.span.end - 1].push(')');
        }
    }
    let mut parts = Vec::new();
    for (i, token) in gold.tokens.iter().enumerate() {
        parts.extend(opens[i].chars().map(String::from));
        parts.push(token.clone());
        parts.extend(closes[i].chars().map(String::from));
    }
    parts.join(" ")
}
