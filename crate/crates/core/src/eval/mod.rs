//! Coordination-span evaluation against bracketed gold annotations.

pub mod evalb;
pub mod extract;
pub mod gold;
pub mod metrics;

pub use evalb::{labeled_bracket_f1, BracketScore};
pub use extract::{extract_corpus, extract_predicted};
pub use gold::{parse_gold, parse_gold_line, write_gold, ArgSpan, Conjunct, CoordGold, CoordPhrase, Span};
pub use metrics::{
    accph_identification, argument_recall, conjunct_recall, internal_given_boundaries, EvalReport, PhraseScope,
};
