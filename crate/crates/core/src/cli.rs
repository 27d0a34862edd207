//! The `acc-treekit` command line.
//!
//! Exit codes: 0 success, 1 usage or input errors, 2 internal invariant
//! violations. File outputs are written to a temporary file in the target
//! directory and renamed into place.

use std::ffi::OsString;
use std::fs;
use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use walkdir::WalkDir;

use crate::detect::{detect_all, RejectionReason};
use crate::error::{Error, Result};
use crate::eval::{self, EvalReport, PhraseScope};
use crate::pcfg::{self, Grammar};
use crate::stats;
use crate::transform::{detransform, transform_tree, TransformRecord};
use crate::tree::{parse_trees_noted, serialize_corpus, Path as TreePath, Tree};

#[derive(Debug, Parser)]
#[command(name = "acc-treekit", version, about = "Argument cluster coordination tools for PTB-style treebanks")]
pub struct RunConfig {
    /// Worker threads for per-tree processing
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: u16,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CorpusIo {
    /// Bracketed corpus file, or a directory of *.mrg files
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Output file (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rewrite accepted ACC instances into ACC_X / ACCPH_X structure
    Transform {
        #[command(flatten)]
        io: CorpusIo,
        /// JSON file receiving one record per candidate
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        pretty: bool,
    },
    /// Restore co-indexed VP coordination from ACC structure
    Detransform {
        #[command(flatten)]
        io: CorpusIo,
        #[arg(long)]
        pretty: bool,
    },
    /// Print one JSON line per coordination candidate
    Detect {
        #[command(flatten)]
        io: CorpusIo,
    },
    /// Corpus census as JSON
    Stats {
        #[command(flatten)]
        io: CorpusIo,
    },
    /// Score predicted trees against bracketed coordination annotations
    Eval {
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        pred: PathBuf,
        /// Comma-separated: conjuncts, conjuncts-acc, args, internal, accph, accph-strict, evalb
        #[arg(long, value_delimiter = ',', default_value = "conjuncts")]
        metrics: Vec<Metric>,
        /// Gold trees, required by the evalb metric
        #[arg(long)]
        gold_trees: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Grammar extraction, parsing and comparison
    #[command(subcommand)]
    Pcfg(PcfgCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Metric {
    Conjuncts,
    ConjunctsAcc,
    Args,
    Internal,
    Accph,
    AccphStrict,
    Evalb,
}

#[derive(Debug, Subcommand)]
pub enum PcfgCommand {
    /// Extract a grammar as JSON
    Train {
        #[command(flatten)]
        io: CorpusIo,
    },
    /// Parse whitespace-tokenized sentences, one per line
    Parse {
        #[arg(long)]
        grammar: PathBuf,
        /// Sentence file (one per line)
        #[arg(long = "in", conflicts_with = "tokens")]
        input: Option<PathBuf>,
        /// A single sentence
        #[arg(long)]
        tokens: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        pretty: bool,
    },
    /// Compare two grammars rule by rule
    Diff {
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn color_enabled() -> bool {
    std::env::var("ACC_TREEKIT_COLOR").map_or(true, |v| v != "0") && std::io::stderr().is_terminal()
}

fn diagnostic(kind: &str, message: &str) {
    let prefix = if color_enabled() {
        let code = if kind == "error" { "31" } else { "33" };
        format!("\x1b[1;{code}m{kind}:\x1b[0m")
    } else {
        format!("{kind}:")
    };
    eprintln!("{prefix} {message}");
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invariant(_) => Failure::Internal(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn input_error(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

fn check_input(path: &Path) -> CliResult<()> {
    if path.exists() {
        Ok(())
    } else {
        Err(input_error(path, "no such file or directory"))
    }
}

fn check_output(path: Option<&Path>) -> CliResult<()> {
    let Some(path) = path else { return Ok(()) };
    if path.is_dir() {
        return Err(input_error(path, "is a directory"));
    }
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    if parent.is_dir() {
        Ok(())
    } else {
        Err(input_error(path, "output directory does not exist"))
    }
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| input_error(path, e))
}

fn corpus_files(path: &Path) -> CliResult<Vec<PathBuf>> {
    if !path.is_dir() {
        return Ok(vec![path.to_path_buf()]);
    }
    let mut files = Vec::new();
    for entry in WalkDir::new(path).sort_by_file_name() {
        let entry = entry.map_err(|e| input_error(path, e))?;
        if entry.file_type().is_file() && entry.path().extension().is_some_and(|x| x == "mrg") {
            files.push(entry.into_path());
        }
    }
    if files.is_empty() {
        return Err(input_error(path, "no .mrg files found"));
    }
    Ok(files)
}

fn read_corpus(path: &Path) -> CliResult<Vec<Tree>> {
    check_input(path)?;
    let mut trees = Vec::new();
    for file in corpus_files(path)? {
        let text = read_text(&file)?;
        let (mut parsed, notes) = parse_trees_noted(&text).map_err(|e| input_error(&file, e))?;
        for note in notes {
            diagnostic("warning", &format!("{}: label `{}`: {}", file.display(), note.label, note.message));
        }
        trees.append(&mut parsed);
    }
    Ok(trees)
}

fn write_output(path: Option<&Path>, content: &str) -> CliResult<()> {
    let Some(path) = path else {
        let mut stdout = std::io::stdout().lock();
        return stdout
            .write_all(content.as_bytes())
            .and_then(|_| stdout.flush())
            .map_err(|e| Failure::Input(format!("stdout: {e}")));
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| input_error(path, e))?;
    tmp.write_all(content.as_bytes()).map_err(|e| input_error(path, e))?;
    tmp.persist(path).map_err(|e| input_error(path, e.error))?;
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn with_trailing_newline(mut s: String) -> String {
    if !s.is_empty() && !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

#[derive(Serialize)]
struct DetectLine<'a> {
    tree_id: usize,
    coord_path: &'a TreePath,
    accepted: bool,
    rejection: &'a Option<RejectionReason>,
    signatures: Vec<Vec<String>>,
}

fn run_transform(io: &CorpusIo, report: Option<&Path>, pretty: bool) -> CliResult<()> {
    check_output(io.out.as_deref())?;
    check_output(report)?;
    let trees = read_corpus(&io.input)?;
    let results: Vec<(Tree, Vec<TransformRecord>)> = trees
        .par_iter()
        .enumerate()
        .map(|(i, t)| transform_tree(i, t))
        .collect::<Result<_>>()?;
    let (out, records): (Vec<Tree>, Vec<Vec<TransformRecord>>) = results.into_iter().unzip();
    let records: Vec<TransformRecord> = records.into_iter().flatten().collect();
    write_output(io.out.as_deref(), &with_trailing_newline(serialize_corpus(&out, pretty)))?;
    if let Some(report) = report {
        write_output(Some(report), &to_json(&records))?;
    }
    Ok(())
}

fn run_detransform(io: &CorpusIo, pretty: bool) -> CliResult<()> {
    check_output(io.out.as_deref())?;
    let trees = read_corpus(&io.input)?;
    let out: Vec<Tree> = trees.par_iter().map(detransform).collect::<Result<_>>()?;
    write_output(io.out.as_deref(), &with_trailing_newline(serialize_corpus(&out, pretty)))
}

fn run_detect(io: &CorpusIo) -> CliResult<()> {
    check_output(io.out.as_deref())?;
    let trees = read_corpus(&io.input)?;
    let lines: Vec<String> = trees
        .par_iter()
        .enumerate()
        .map(|(tree_id, tree)| {
            detect_all(tree)
                .iter()
                .map(|inst| {
                    let line = DetectLine {
                        tree_id,
                        coord_path: &inst.coord_path,
                        accepted: inst.accepted(),
                        rejection: &inst.rejection,
                        signatures: inst.signatures().iter().map(|s| s.to_vec()).collect(),
                    };
                    serde_json::to_string(&line).expect("detect line serializes") + "\n"
                })
                .collect::<String>()
        })
        .collect();
    write_output(io.out.as_deref(), &lines.concat())
}

fn run_stats(io: &CorpusIo) -> CliResult<()> {
    check_output(io.out.as_deref())?;
    let trees = read_corpus(&io.input)?;
    let report = stats::census_parallel(&trees)?;
    write_output(io.out.as_deref(), &to_json(&report))
}

fn run_eval(
    gold_path: &Path,
    pred_path: &Path,
    metrics: &[Metric],
    gold_trees: Option<&Path>,
    out: Option<&Path>,
) -> CliResult<()> {
    check_output(out)?;
    check_input(gold_path)?;
    if metrics.contains(&Metric::Evalb) && gold_trees.is_none() {
        return Err(Failure::Input("the evalb metric needs --gold-trees".into()));
    }
    let pred_trees = read_corpus(pred_path)?;
    let gold_text = read_text(gold_path)?;
    let gold = eval::parse_gold(&gold_text).map_err(|e| input_error(gold_path, e))?;
    let needs_spans = metrics.iter().any(|m| *m != Metric::Evalb);
    let pred = if needs_spans {
        eval::extract_corpus(&pred_trees, &gold)?
    } else {
        Vec::new()
    };
    let mut report = serde_json::Map::new();
    fn put(report: &mut serde_json::Map<String, serde_json::Value>, r: EvalReport) {
        let value = serde_json::json!({
            "numerator": r.numerator,
            "denominator": r.denominator,
            "value": r.value,
        });
        report.insert(r.metric, value);
    }
    for metric in metrics {
        match metric {
            Metric::Conjuncts => put(&mut report, eval::conjunct_recall(&gold, &pred, PhraseScope::All)?),
            Metric::ConjunctsAcc => put(&mut report, eval::conjunct_recall(&gold, &pred, PhraseScope::AccOnly)?),
            Metric::Args => put(&mut report, eval::argument_recall(&gold, &pred)?),
            Metric::Internal => put(&mut report, eval::internal_given_boundaries(&gold, &pred)?),
            Metric::Accph | Metric::AccphStrict => {
                let (r, p) = eval::accph_identification(&gold, &pred, *metric == Metric::AccphStrict)?;
                put(&mut report, r);
                put(&mut report, p);
            }
            Metric::Evalb => {
                let gt = read_corpus(gold_trees.expect("checked above"))?;
                let score = eval::labeled_bracket_f1(&gt, &pred_trees)?;
                report.insert("evalb".into(), serde_json::to_value(score).expect("score serializes"));
            }
        }
    }
    write_output(out, &to_json(&report))
}

fn read_grammar(path: &Path) -> CliResult<Grammar> {
    check_input(path)?;
    Grammar::from_json(&read_text(path)?).map_err(|e| input_error(path, e))
}

fn run_pcfg(cmd: &PcfgCommand) -> CliResult<()> {
    match cmd {
        PcfgCommand::Train { io } => {
            check_output(io.out.as_deref())?;
            let trees = read_corpus(&io.input)?;
            let grammar = pcfg::extract_grammar(&trees)?;
            write_output(io.out.as_deref(), &(grammar.to_json() + "\n"))
        }
        PcfgCommand::Parse {
            grammar,
            input,
            tokens,
            out,
            pretty,
        } => {
            check_output(out.as_deref())?;
            let grammar = read_grammar(grammar)?;
            let sentences: Vec<String> = match (input, tokens) {
                (Some(path), _) => {
                    check_input(path)?;
                    read_text(path)?
                        .lines()
                        .filter(|l| !l.trim().is_empty())
                        .map(str::to_string)
                        .collect()
                }
                (None, Some(t)) => vec![t.clone()],
                (None, None) => return Err(Failure::Input("pcfg parse needs --in or --tokens".into())),
            };
            let parser = pcfg::Parser::new(&grammar);
            let mut trees = Vec::with_capacity(sentences.len());
            for (i, sentence) in sentences.iter().enumerate() {
                let toks: Vec<&str> = sentence.split_whitespace().collect();
                let tree = parser
                    .parse(&toks)
                    .ok_or_else(|| Failure::Input(format!("sentence {}: no parse", i + 1)))?;
                trees.push(tree);
            }
            write_output(out.as_deref(), &with_trailing_newline(serialize_corpus(&trees, *pretty)))
        }
        PcfgCommand::Diff { first, second, out } => {
            check_output(out.as_deref())?;
            let a = read_grammar(first)?;
            let b = read_grammar(second)?;
            write_output(out.as_deref(), &to_json(&pcfg::rule_diff(&a, &b)))
        }
    }
}

fn dispatch(config: &RunConfig) -> CliResult<()> {
    match &config.command {
        Command::Transform { io, report, pretty } => run_transform(io, report.as_deref(), *pretty),
        Command::Detransform { io, pretty } => run_detransform(io, *pretty),
        Command::Detect { io } => run_detect(io),
        Command::Stats { io } => run_stats(io),
        Command::Eval {
            gold,
            pred,
            metrics,
            gold_trees,
            out,
        } => run_eval(gold, pred, metrics, gold_trees.as_deref(), out.as_deref()),
        Command::Pcfg(cmd) => run_pcfg(cmd),
    }
}

/// Run the command line and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(config.jobs as usize).build() {
        Ok(p) => p,
        Err(e) => {
            diagnostic("error", &format!("cannot start worker pool: {e}"));
            return 1;
        }
    };
    match pool.install(|| dispatch(&config)) {
        Ok(()) => 0,
        Err(Failure::Input(msg)) => {
            diagnostic("error", &msg);
            1
        }
        Err(Failure::Internal(msg)) => {
            diagnostic("error", &msg);
            2
        }
    }
}
