//! PTB bracketed trees: label decomposition, reading, writing and yields.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Child-index path from the root of a tree. The empty path addresses the root.
pub type Path = Vec<usize>;

/// POS tag of empty elements (traces, elided subjects, null complementizers).
pub const EMPTY_POS: &str = "-NONE-";

/// Categories that start with `-` and must not be split on it.
const ATOMIC_CATEGORIES: &[&str] = &["-NONE-", "-LRB-", "-RRB-", "-LCB-", "-RCB-", "-LSB-", "-RSB-"];

/// Decomposed nonterminal label, e.g. `NP-SBJ-1` or `NP=2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NodeLabel {
    pub category: String,
    pub function_tags: Vec<String>,
    pub ref_index: Option<u32>,
    pub gap_index: Option<u32>,
}

/// Something odd noticed while decomposing a label. Not an error: the label
/// was still read, but recomposing it may not reproduce the source text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabelNote {
    pub label: String,
    pub message: String,
}

impl NodeLabel {
    pub fn new(category: impl Into<String>) -> Self {
        NodeLabel {
            category: category.into(),
            function_tags: Vec::new(),
            ref_index: None,
            gap_index: None,
        }
    }

    pub fn with_ref(mut self, index: u32) -> Self {
        self.ref_index = Some(index);
        self
    }

    pub fn with_gap(mut self, index: u32) -> Self {
        self.gap_index = Some(index);
        self
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.function_tags.push(tag.into());
        self
    }

    /// Decompose a raw label. See [`NodeLabel::parse_noted`] for the variant
    /// that also reports irregular labels.
    pub fn parse(raw: &str) -> Result<NodeLabel> {
        NodeLabel::parse_noted(raw).map(|(label, _)| label)
    }

    pub fn parse_noted(raw: &str) -> Result<(NodeLabel, Vec<LabelNote>)> {
        let bad = |msg: &str| Error::Label {
            label: raw.to_string(),
            message: msg.to_string(),
        };
        if raw.is_empty() {
            return Err(bad("empty label"));
        }
        if raw.chars().any(|c| c.is_whitespace() || c == '(' || c == ')') {
            return Err(bad("label contains whitespace or parentheses"));
        }
        if ATOMIC_CATEGORIES.contains(&raw) {
            return Ok((NodeLabel::new(raw), Vec::new()));
        }

        let mut notes = Vec::new();
        let note = |notes: &mut Vec<LabelNote>, msg: String| {
            notes.push(LabelNote {
                label: raw.to_string(),
                message: msg,
            })
        };

        // ACC_X / ACCPH_X categories join component categories with `-`,
        // so only trailing numeric indices are split off.
        let (category, rest) = if raw.starts_with("ACC_") || raw.starts_with("ACCPH_") {
            split_acc_category(raw)
        } else {
            match raw.find(['-', '=']) {
                Some(pos) => (&raw[..pos], &raw[pos..]),
                None => (raw, ""),
            }
        };
        if category.is_empty() {
            return Err(bad("empty category"));
        }

        let mut label = NodeLabel::new(category);
        let mut segments = Vec::new();
        let mut current = String::new();
        let mut delim = None;
        for c in rest.chars() {
            if c == '-' || c == '=' {
                if let Some(d) = delim {
                    segments.push((d, std::mem::take(&mut current)));
                }
                delim = Some(c);
            } else {
                current.push(c);
            }
        }
        if let Some(d) = delim {
            segments.push((d, current));
        }

        let mut saw_gap_before_ref = false;
        for (delim, text) in segments {
            if text.is_empty() {
                return Err(bad("empty label segment"));
            }
            let numeric = text.bytes().all(|b| b.is_ascii_digit());
            match (delim, numeric) {
                ('=', true) => {
                    let index = parse_index(&text).ok_or_else(|| bad("index must be >= 1"))?;
                    if label.gap_index.is_some() {
                        return Err(bad("more than one `=N` index"));
                    }
                    if label.ref_index.is_some() {
                        note(&mut notes, "`=N` follows `-N`; rewritten in canonical order".into());
                    }
                    label.gap_index = Some(index);
                }
                ('=', false) => return Err(bad("non-numeric `=` suffix")),
                ('-', true) => {
                    let index = parse_index(&text).ok_or_else(|| bad("index must be >= 1"))?;
                    if let Some(previous) = label.ref_index.replace(index) {
                        note(
                            &mut notes,
                            format!("several `-N` indices; keeping {index}, {previous} kept as a function tag"),
                        );
                        label.function_tags.push(previous.to_string());
                    }
                }
                (_, false) => {
                    if label.ref_index.is_some() || label.gap_index.is_some() {
                        saw_gap_before_ref = true;
                    }
                    if !text.chars().all(|c| c.is_ascii_uppercase()) {
                        note(&mut notes, format!("unusual function tag `{text}`"));
                    }
                    label.function_tags.push(text);
                }
                _ => unreachable!(),
            }
        }
        if saw_gap_before_ref {
            note(&mut notes, "function tag after an index; rewritten in canonical order".into());
        }
        Ok((label, notes))
    }

    /// Label with all function tags and indices removed.
    pub fn bare(&self) -> NodeLabel {
        NodeLabel::new(self.category.clone())
    }

    pub fn without_indices(&self) -> NodeLabel {
        NodeLabel {
            category: self.category.clone(),
            function_tags: self.function_tags.clone(),
            ref_index: None,
            gap_index: None,
        }
    }

    pub fn has_index(&self) -> bool {
        self.ref_index.is_some() || self.gap_index.is_some()
    }

    /// Whichever co-indexation number the label carries, gap index first.
    pub fn any_index(&self) -> Option<u32> {
        self.gap_index.or(self.ref_index)
    }

    pub fn is_acc_cluster(&self) -> bool {
        self.category.starts_with("ACC_")
    }

    pub fn is_accph(&self) -> bool {
        self.category.starts_with("ACCPH_")
    }
}

fn parse_index(text: &str) -> Option<u32> {
    text.parse::<u32>().ok().filter(|&n| n >= 1)
}

fn split_acc_category(raw: &str) -> (&str, &str) {
    let mut end = raw.len();
    loop {
        let head = &raw[..end];
        let digits = head.len() - head.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        if digits == 0 || digits == head.len() {
            break;
        }
        let before = head.as_bytes()[head.len() - digits - 1];
        if before == b'-' || before == b'=' {
            end = head.len() - digits - 1;
        } else {
            break;
        }
    }
    (&raw[..end], &raw[end..])
}

impl fmt::Display for NodeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.category)?;
        for tag in &self.function_tags {
            write!(f, "-{tag}")?;
        }
        if let Some(gap) = self.gap_index {
            write!(f, "={gap}")?;
        }
        if let Some(r) = self.ref_index {
            write!(f, "-{r}")?;
        }
        Ok(())
    }
}

/// A constituency tree node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Tree {
    Internal { label: NodeLabel, children: Vec<Tree> },
    Leaf { pos: String, token: String },
}

impl Tree {
    pub fn internal(label: NodeLabel, children: Vec<Tree>) -> Tree {
        Tree::Internal { label, children }
    }

    pub fn leaf(pos: impl Into<String>, token: impl Into<String>) -> Tree {
        Tree::Leaf {
            pos: pos.into(),
            token: token.into(),
        }
    }

    pub fn label(&self) -> Option<&NodeLabel> {
        match self {
            Tree::Internal { label, .. } => Some(label),
            Tree::Leaf { .. } => None,
        }
    }

    pub fn label_mut(&mut self) -> Option<&mut NodeLabel> {
        match self {
            Tree::Internal { label, .. } => Some(label),
            Tree::Leaf { .. } => None,
        }
    }

    /// Nonterminal category, or the POS tag for leaves.
    pub fn category(&self) -> &str {
        match self {
            Tree::Internal { label, .. } => &label.category,
            Tree::Leaf { pos, .. } => pos,
        }
    }

    pub fn children(&self) -> &[Tree] {
        match self {
            Tree::Internal { children, .. } => children,
            Tree::Leaf { .. } => &[],
        }
    }

    pub fn children_mut(&mut self) -> Option<&mut Vec<Tree>> {
        match self {
            Tree::Internal { children, .. } => Some(children),
            Tree::Leaf { .. } => None,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Tree::Leaf { .. })
    }

    pub fn is_empty_element(&self) -> bool {
        matches!(self, Tree::Leaf { pos, .. } if pos == EMPTY_POS)
    }

    /// True when the subtree has no surface tokens.
    pub fn is_empty_only(&self) -> bool {
        match self {
            Tree::Leaf { .. } => self.is_empty_element(),
            Tree::Internal { children, .. } => children.iter().all(Tree::is_empty_only),
        }
    }

    pub fn token_count(&self) -> usize {
        match self {
            Tree::Leaf { .. } => usize::from(!self.is_empty_element()),
            Tree::Internal { children, .. } => children.iter().map(Tree::token_count).sum(),
        }
    }

    pub fn get(&self, path: &[usize]) -> Option<&Tree> {
        path.iter().try_fold(self, |node, &i| node.children().get(i))
    }

    pub fn get_mut(&mut self, path: &[usize]) -> Option<&mut Tree> {
        let mut node = self;
        for &i in path {
            node = node.children_mut()?.get_mut(i)?;
        }
        Some(node)
    }

    /// Leaves in left-to-right order, empty elements included.
    pub fn leaves(&self) -> Vec<&Tree> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a Tree>) {
        match self {
            Tree::Leaf { .. } => out.push(self),
            Tree::Internal { children, .. } => children.iter().for_each(|c| c.collect_leaves(out)),
        }
    }

    /// Pre-order walk over internal nodes with their paths.
    pub fn internal_nodes(&self) -> Vec<(Path, &Tree)> {
        let mut out = Vec::new();
        let mut stack = vec![(Vec::new(), self)];
        while let Some((path, node)) = stack.pop() {
            if let Tree::Internal { children, .. } = node {
                for (i, child) in children.iter().enumerate().rev() {
                    let mut p = path.clone();
                    p.push(i);
                    stack.push((p, child));
                }
                out.push((path, node));
            }
        }
        out
    }

    /// Apply `f` to every internal label in the subtree.
    pub fn map_labels(&mut self, f: &mut impl FnMut(&mut NodeLabel)) {
        if let Tree::Internal { label, children } = self {
            f(label);
            children.iter_mut().for_each(|c| c.map_labels(f));
        }
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize(self, false))
    }
}

/// Parse a bracketed corpus into trees.
pub fn parse_trees(text: &str) -> Result<Vec<Tree>> {
    parse_trees_noted(text).map(|(trees, _)| trees)
}

/// Parse a corpus, also returning notes about irregular labels.
pub fn parse_trees_noted(text: &str) -> Result<(Vec<Tree>, Vec<LabelNote>)> {
    let mut reader = Reader::new(text);
    let mut trees = Vec::new();
    let mut notes = Vec::new();
    loop {
        reader.skip_ws();
        match reader.peek() {
            None => break,
            Some('(') => trees.push(reader.top_level(&mut notes)?),
            Some(_) => return Err(reader.error("expected `(` at start of tree")),
        }
    }
    Ok((trees, notes))
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    line: usize,
    column: usize,
}

enum Item {
    Tree(Tree),
    Atom(String),
}

impl<'a> Reader<'a> {
    fn new(text: &'a str) -> Self {
        Reader {
            chars: text.char_indices().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn error(&self, message: &str) -> Error {
        Error::Parse {
            line: self.line,
            column: self.column,
            message: message.to_string(),
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn atom(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_whitespace() || c == '(' || c == ')' {
                break;
            }
            s.push(c);
            self.bump();
        }
        s
    }

    fn top_level(&mut self, notes: &mut Vec<LabelNote>) -> Result<Tree> {
        let (line, column) = (self.line, self.column);
        match self.node(notes)? {
            Item::Tree(tree) => Ok(tree),
            Item::Atom(_) => Err(Error::Parse {
                line,
                column,
                message: "bare token at top level".into(),
            }),
        }
    }

    /// Reads one parenthesised expression; the opening `(` is next.
    fn node(&mut self, notes: &mut Vec<LabelNote>) -> Result<Item> {
        let (line, column) = (self.line, self.column);
        let fail = |message: &str| Error::Parse {
            line,
            column,
            message: message.to_string(),
        };
        self.bump();
        self.skip_ws();
        let label = match self.peek() {
            Some('(') | Some(')') | None => None,
            Some(_) => Some(self.atom()),
        };

        let mut items = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                None => return Err(fail("unbalanced parentheses: missing `)`")),
                Some(')') => {
                    self.bump();
                    break;
                }
                Some('(') => items.push(self.node(notes)?),
                Some(_) => items.push(Item::Atom(self.atom())),
            }
        }

        match label {
            None => {
                // label-less wrapper `( (S ...) )`
                let mut trees = items.into_iter();
                match (trees.next(), trees.next()) {
                    (None, _) => Err(fail("empty expression")),
                    (Some(Item::Tree(tree)), None) => Ok(Item::Tree(tree)),
                    _ => Err(fail("label-less bracket must wrap exactly one tree")),
                }
            }
            Some(label) => {
                if items.is_empty() {
                    return Err(fail(&format!("`{label}` has no children (leaf with missing token?)")));
                }
                if items.len() == 1 {
                    if let Item::Atom(_) = items[0] {
                        let Some(Item::Atom(token)) = items.pop() else { unreachable!() };
                        return Ok(Item::Tree(Tree::Leaf { pos: label, token }));
                    }
                }
                let mut children = Vec::with_capacity(items.len());
                for item in items {
                    match item {
                        Item::Tree(t) => children.push(t),
                        Item::Atom(a) => {
                            return Err(fail(&format!("token `{a}` mixed with subtrees under `{label}`")))
                        }
                    }
                }
                let (label, mut label_notes) = NodeLabel::parse_noted(&label).map_err(|e| match e {
                    Error::Label { message, .. } => fail(&format!("bad label `{label}`: {message}")),
                    other => other,
                })?;
                notes.append(&mut label_notes);
                Ok(Item::Tree(Tree::Internal { label, children }))
            }
        }
    }
}

/// Render a tree in bracketed form. `pretty` indents one constituent per line.
pub fn serialize(tree: &Tree, pretty: bool) -> String {
    let mut out = String::new();
    if pretty {
        write_pretty(tree, 0, &mut out);
    } else {
        write_flat(tree, &mut out);
    }
    out
}

fn write_flat(tree: &Tree, out: &mut String) {
    match tree {
        Tree::Leaf { pos, token } => {
            out.push('(');
            out.push_str(pos);
            out.push(' ');
            out.push_str(token);
            out.push(')');
        }
        Tree::Internal { label, children } => {
            out.push('(');
            out.push_str(&label.to_string());
            for child in children {
                out.push(' ');
                write_flat(child, out);
            }
            out.push(')');
        }
    }
}

fn write_pretty(tree: &Tree, indent: usize, out: &mut String) {
    match tree {
        Tree::Internal { label, children } if !children.iter().all(Tree::is_leaf) => {
            out.push('(');
            out.push_str(&label.to_string());
            let inner = indent + 2;
            for (i, child) in children.iter().enumerate() {
                if i == 0 && child.is_leaf() {
                    out.push(' ');
                    write_flat(child, out);
                    continue;
                }
                out.push('\n');
                out.push_str(&" ".repeat(inner));
                write_pretty(child, inner, out);
            }
            out.push(')');
        }
        _ => write_flat(tree, out),
    }
}

/// Serialize a corpus, one tree per line (or blank-line separated when pretty).
pub fn serialize_corpus(trees: &[Tree], pretty: bool) -> String {
    let mut out = String::new();
    for tree in trees {
        out.push_str(&serialize(tree, pretty));
        out.push('\n');
        if pretty {
            out.push('\n');
        }
    }
    out
}

/// Leaf tokens left to right. Empty elements only when `include_empty`.
pub fn yield_tokens(tree: &Tree, include_empty: bool) -> Vec<String> {
    tree.leaves()
        .into_iter()
        .filter(|leaf| include_empty || !leaf.is_empty_element())
        .map(|leaf| match leaf {
            Tree::Leaf { token, .. } => token.clone(),
            Tree::Internal { .. } => unreachable!(),
        })
        .collect()
}

/// Half-open token span of the node at `path`, over the non-empty yield.
pub fn span_at(tree: &Tree, path: &[usize]) -> Result<(usize, usize)> {
    let mut node = tree;
    let mut start = 0;
    for (depth, &i) in path.iter().enumerate() {
        let children = node.children();
        let child = children.get(i).ok_or_else(|| Error::InvalidPath {
            path: path.to_vec(),
            message: format!("no child {i} at depth {depth}"),
        })?;
        start += children[..i].iter().map(Tree::token_count).sum::<usize>();
        node = child;
    }
    Ok((start, start + node.token_count()))
}
