//! C ABI over acc-treekit.
//!
//! Corpora and grammars are opaque handles. Every call returns an
//! [`AccStatus`]; on failure [`acc_last_error_message`] describes the error
//! for the calling thread. Strings handed out by the library are freed with
//! [`acc_string_free`], handles with their own `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use acc_treekit::detect::detect_all;
use acc_treekit::eval::{self, PhraseScope};
use acc_treekit::pcfg::{extract_grammar, Grammar, Parser};
use acc_treekit::stats::census;
use acc_treekit::transform::{detransform, transform_corpus};
use acc_treekit::tree::serialize_corpus;
use acc_treekit::{parse_trees, serialize, Error, Tree};
use serde_json::json;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AccStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    TransformError = 4,
    EvalError = 5,
    GrammarError = 6,
    NoParse = 7,
    InternalError = 8,
    Panic = 9,
}

/// A parsed treebank.
pub struct AccCorpus {
    trees: Vec<Tree>,
}

/// A probabilistic grammar.
pub struct AccGrammar {
    grammar: Grammar,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(AccStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let status = match &e {
            Error::Parse { .. } | Error::Label { .. } => AccStatus::ParseError,
            Error::Gold { .. } | Error::TokenMismatch { .. } | Error::Evaluation(_) => AccStatus::EvalError,
            Error::Grammar(_) => AccStatus::GrammarError,
            Error::Invariant(_) => AccStatus::InternalError,
            _ => AccStatus::TransformError,
        };
        Failure(status, e.to_string())
    }
}

type FfiResult<T> = Result<T, Failure>;

fn set_error(message: String) {
    let message = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(message));
}

fn guard(f: impl FnOnce() -> FfiResult<()>) -> AccStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AccStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {message}"));
            AccStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(AccStatus::NullArgument, format!("{what} is null"))
}

unsafe fn text_arg<'a>(p: *const c_char, what: &str) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(AccStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> FfiResult<&'a T> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out_ptr<'a, T>(p: *mut *mut T, what: &str) -> FfiResult<&'a mut *mut T> {
    p.as_mut().ok_or_else(|| null(what))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn acc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |m| m.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn acc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse bracketed trees.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn acc_corpus_parse(text: *const c_char, out: *mut *mut AccCorpus) -> AccStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let trees = parse_trees(text_arg(text, "text")?)?;
        *out = boxed(AccCorpus { trees });
        Ok(())
    })
}

/// Number of trees; 0 for NULL.
///
/// # Safety
/// `corpus` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn acc_corpus_len(corpus: *const AccCorpus) -> usize {
    corpus.as_ref().map_or(0, |c| c.trees.len())
}

/// # Safety
/// `corpus` must be NULL or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn acc_corpus_free(corpus: *mut AccCorpus) {
    if !corpus.is_null() {
        drop(Box::from_raw(corpus));
    }
}

/// Render the corpus, one tree per line unless `pretty`.
///
/// # Safety
/// `corpus` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn acc_corpus_serialize(
    corpus: *const AccCorpus,
    pretty: bool,
    out: *mut *mut c_char,
) -> AccStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let corpus = handle(corpus, "corpus")?;
        *out = c_string(serialize_corpus(&corpus.trees, pretty));
        Ok(())
    })
}

/// Rewrite accepted instances. `report`, when not NULL, receives the JSON
/// array of per-candidate records.
///
/// # Safety
/// `corpus` must be a live handle; `out` must be writable; `report` must be
/// NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn acc_corpus_transform(
    corpus: *const AccCorpus,
    out: *mut *mut AccCorpus,
    report: *mut *mut c_char,
) -> AccStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let corpus = handle(corpus, "corpus")?;
        let (trees, records) = transform_corpus(&corpus.trees)?;
        if let Some(report) = report.as_mut() {
            *report = c_string(serde_json::to_string(&records).expect("records serialize"));
        }
        *out = boxed(AccCorpus { trees });
        Ok(())
    })
}

/// Restore co-indexed VP coordination.
///
/// # Safety
/// `corpus` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn acc_corpus_detransform(corpus: *const AccCorpus, out: *mut *mut AccCorpus) -> AccStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let corpus = handle(corpus, "corpus")?;
        let trees = corpus.trees.iter().map(detransform).collect::<Result<Vec<_>, _>>()?;
        *out = boxed(AccCorpus { trees });
        Ok(())
    })
}

/// JSON array with one object per coordination candidate.
///
/// # Safety
/// `corpus` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn acc_corpus_detect_json(corpus: *const AccCorpus, out: *mut *mut c_char) -> AccStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let corpus = handle(corpus, "corpus")?;
        let mut lines = Vec::new();
        for (tree_id, tree) in corpus.trees.iter().enumerate() {
            for inst in detect_all(tree) {
                lines.push(json!({
                    "tree_id": tree_id,
                    "coord_path": inst.coord_path,
                    "accepted": inst.accepted(),
                    "rejection": inst.rejection,
                    "signatures": inst.signatures(),
                }));
            }
        }
        *out = c_string(serde_json::Value::Array(lines).to_string());
        Ok(())
    })
}

/// Corpus census as a JSON object.
///
/// # Safety
/// `corpus` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn acc_corpus_census_json(corpus: *const AccCorpus, out: *mut *mut c_char) -> AccStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let corpus = handle(corpus, "corpus")?;
        let report = census(&corpus.trees)?;
        *out = c_string(serde_json::to_string(&report).expect("census serializes"));
        Ok(())
    })
}

/// Score predicted trees against a bracketed coordination annotation.
/// The result is a JSON object keyed by metric name.
///
/// # Safety
/// `gold` must be a NUL-terminated string; `pred` a live handle; `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn acc_eval_json(
    gold: *const c_char,
    pred: *const AccCorpus,
    out: *mut *mut c_char,
) -> AccStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let gold = eval::parse_gold(text_arg(gold, "gold")?)?;
        let pred = eval::extract_corpus(&handle(pred, "pred")?.trees, &gold)?;
        let mut reports = vec![
            eval::conjunct_recall(&gold, &pred, PhraseScope::All)?,
            eval::conjunct_recall(&gold, &pred, PhraseScope::AccOnly)?,
            eval::argument_recall(&gold, &pred)?,
            eval::internal_given_boundaries(&gold, &pred)?,
        ];
        for strict in [false, true] {
            let (r, p) = eval::accph_identification(&gold, &pred, strict)?;
            reports.extend([r, p]);
        }
        let map: serde_json::Map<String, serde_json::Value> = reports
            .into_iter()
            .map(|r| {
                let v = json!({"numerator": r.numerator, "denominator": r.denominator, "value": r.value});
                (r.metric, v)
            })
            .collect();
        *out = c_string(serde_json::Value::Object(map).to_string());
        Ok(())
    })
}

/// Labeled bracket precision, recall and F1 as JSON.
///
/// # Safety
/// `gold` and `pred` must be live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn acc_evalb_json(
    gold: *const AccCorpus,
    pred: *const AccCorpus,
    out: *mut *mut c_char,
) -> AccStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let score = eval::labeled_bracket_f1(&handle(gold, "gold")?.trees, &handle(pred, "pred")?.trees)?;
        *out = c_string(serde_json::to_string(&score).expect("score serializes"));
        Ok(())
    })
}

/// Extract a grammar from a corpus.
///
/// # Safety
/// `corpus` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn acc_grammar_train(corpus: *const AccCorpus, out: *mut *mut AccGrammar) -> AccStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let grammar = extract_grammar(&handle(corpus, "corpus")?.trees)?;
        *out = boxed(AccGrammar { grammar });
        Ok(())
    })
}

/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn acc_grammar_from_json(json: *const c_char, out: *mut *mut AccGrammar) -> AccStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let grammar = Grammar::from_json(text_arg(json, "json")?)?;
        *out = boxed(AccGrammar { grammar });
        Ok(())
    })
}

/// # Safety
/// `grammar` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn acc_grammar_to_json(grammar: *const AccGrammar, out: *mut *mut c_char) -> AccStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = c_string(handle(grammar, "grammar")?.grammar.to_json());
        Ok(())
    })
}

/// Most probable tree for a whitespace-tokenized sentence, bracketed.
/// Returns `NoParse` when the grammar cannot cover the sentence.
///
/// # Safety
/// `grammar` must be a live handle; `sentence` a NUL-terminated string;
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn acc_grammar_parse(
    grammar: *const AccGrammar,
    sentence: *const c_char,
    out: *mut *mut c_char,
) -> AccStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let grammar = &handle(grammar, "grammar")?.grammar;
        let tokens: Vec<&str> = text_arg(sentence, "sentence")?.split_whitespace().collect();
        let tree = Parser::new(grammar)
            .parse(&tokens)
            .ok_or_else(|| Failure(AccStatus::NoParse, format!("no parse for `{}`", tokens.join(" "))))?;
        *out = c_string(serialize(&tree, false));
        Ok(())
    })
}

/// # Safety
/// `grammar` must be NULL or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn acc_grammar_free(grammar: *mut AccGrammar) {
    if !grammar.is_null() {
        drop(Box::from_raw(grammar));
    }
}
