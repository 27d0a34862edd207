//! Tools for argument cluster coordination (ACC) in PTB-style treebanks.
//!
//! * [`tree`] reads and writes bracketed trees.
//! * [`detect`] finds co-indexed VP coordinations and decides whether they
//!   can be rewritten.
//! * [`transform`] rewrites accepted instances into `ACC_X` clusters under an
//!   `ACCPH_X` coordination node, and maps them back.
//! * [`eval`] scores coordination spans against bracketed gold annotations.
//! * [`pcfg`] extracts relative-frequency grammars and parses with CKY.
//! * [`stats`] counts ACC phenomena over a corpus.

pub mod cli;
pub mod detect;
pub mod error;
pub mod eval;
pub mod pcfg;
pub mod stats;
pub mod transform;
pub mod tree;

pub use error::{Error, Result};
pub use tree::{parse_trees, serialize, span_at, yield_tokens, NodeLabel, Path, Tree};
