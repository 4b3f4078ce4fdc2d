//! Command-line surface: build span-count models from corpora, run semantic
//! queries against them, and verify the algebraic laws they satisfy.
//!
//! Exit codes: 0 success, 1 usage error, 2 bad model or unknown object,
//! 3 verification failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use subtext_core::corpus::{
    count_spans, load_model, persist_model, tokenize, CorpusError, CorpusStats, Text,
};
use subtext_core::format_value;
use subtext_core::metric::{nearest_meanings, ranking_tsv, RankMode};
use subtext_core::semantics::{
    coproduct, export_tsv, hom_copresheaves, internal_hom, product, representable, Copresheaf,
};
use subtext_core::syntax::{Category, SyntaxCategory};
use subtext_core::verify::{run_suite, HomTable, LawEntry, SuiteConfig, VerificationReport};

#[derive(Parser)]
#[command(name = "subtext", version, about = "Span-count models of text corpora with semantic queries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tokenize corpus files, count token spans, and write a model file.
    Build {
        /// Corpus files, one document per file
        corpus: Vec<PathBuf>,
        /// Longest span length to count
        #[arg(long, default_value_t = 4)]
        max_span: usize,
        /// Drop spans occurring fewer times than this
        #[arg(long, default_value_t = 1)]
        min_count: u64,
        /// Keep the original letter case
        #[arg(long)]
        no_lowercase: bool,
        /// Output model path
        #[arg(long, default_value = "model.json")]
        out: PathBuf,
    },
    /// Run a query verb against a model.
    ///
    /// Scalar verbs: hom X Y, dist X Y, homval X Y. Listing verbs:
    /// meaning X, and X Y, or X Y, implies X Y, near X.
    Query {
        /// Model file written by build
        model: PathBuf,
        /// One of: hom, dist, meaning, and, or, implies, homval, near
        verb: String,
        /// Text arguments for the verb
        args: Vec<String>,
        /// Number of lines listing verbs print
        #[arg(long, default_value_t = 10)]
        top: usize,
        /// Print the full table in object order instead of the top entries
        #[arg(long)]
        all: bool,
        /// Distance direction for near: forward, backward, or symmetric
        #[arg(long, default_value = "symmetric")]
        mode: String,
    },
    /// Re-check every law on a model and write a JSON report.
    Verify {
        /// Model file written by build
        model: PathBuf,
        /// Largest violation a law may show and still pass
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Seed for sampled checks on large models
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report path; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
        /// Fault injection: source text of the hom value to perturb
        #[arg(long, requires = "perturb_to", requires = "perturb_delta")]
        perturb_from: Option<String>,
        /// Fault injection: target text of the hom value to perturb
        #[arg(long, requires = "perturb_from")]
        perturb_to: Option<String>,
        /// Fault injection: amount added to the chosen hom value
        #[arg(long, allow_negative_numbers = true, requires = "perturb_from")]
        perturb_delta: Option<f64>,
    },
}

enum CliError {
    Usage(String),
    Model(String),
    LawViolation,
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Model(_) => 2,
            CliError::LawViolation => 3,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            match &err {
                CliError::Usage(msg) | CliError::Model(msg) => eprintln!("error: {msg}"),
                CliError::LawViolation => eprintln!("error: verification failed"),
            }
            ExitCode::from(err.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Build {
            corpus,
            max_span,
            min_count,
            no_lowercase,
            out,
        } => cmd_build(&corpus, max_span, min_count, !no_lowercase, &out),
        Command::Query {
            model,
            verb,
            args,
            top,
            all,
            mode,
        } => cmd_query(&model, &verb, &args, top, all, &mode),
        Command::Verify {
            model,
            tol,
            seed,
            out,
            perturb_from,
            perturb_to,
            perturb_delta,
        } => {
            let perturbation = match (perturb_from, perturb_to, perturb_delta) {
                (Some(from), Some(to), Some(delta)) => Some((from, to, delta)),
                (None, None, None) => None,
                _ => {
                    return Err(CliError::Usage(
                        "perturb-from, perturb-to, and perturb-delta must be given together"
                            .to_string(),
                    ))
                }
            };
            cmd_verify(&model, tol, seed, out.as_deref(), perturbation)
        }
    }
}

fn cmd_build(
    corpus: &[PathBuf],
    max_span: usize,
    min_count: u64,
    lowercase: bool,
    out: &Path,
) -> Result<(), CliError> {
    if max_span == 0 {
        return Err(CliError::Usage("--max-span must be at least 1".to_string()));
    }
    if min_count == 0 {
        return Err(CliError::Usage("--min-count must be at least 1".to_string()));
    }
    let mut stats = CorpusStats::empty(max_span)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    for path in corpus {
        let raw = std::fs::read_to_string(path).map_err(|e| {
            CliError::Usage(format!("cannot read corpus file {}: {e}", path.display()))
        })?;
        let doc = tokenize(&raw, lowercase);
        let doc_stats =
            count_spans(&doc, max_span).map_err(|e| CliError::Model(e.to_string()))?;
        stats
            .merge(&doc_stats)
            .map_err(|e| CliError::Model(e.to_string()))?;
    }
    let stats = stats.pruned(min_count);
    if stats.span_count() == 0 {
        eprintln!("warning: empty corpus, the model has no objects");
    }
    persist_model(&stats, out).map_err(|e| CliError::Model(e.to_string()))?;
    println!(
        "objects: {}\ntotal tokens: {}",
        stats.span_count(),
        stats.total_tokens()
    );
    Ok(())
}

fn load_category(model: &Path) -> Result<SyntaxCategory, CliError> {
    let stats = load_model(model).map_err(|e| CliError::Model(e.to_string()))?;
    Ok(SyntaxCategory::from_stats(&stats))
}

/// Resolves a raw query argument to an object, trying the tokens as written
/// first and lowercased second, so queries hit models built either way.
fn resolve(cat: &SyntaxCategory, raw: &str) -> Result<usize, CliError> {
    for lowercase in [false, true] {
        let tokens = tokenize(raw, lowercase);
        if tokens.is_empty() {
            return Err(CliError::Usage(format!("empty text argument {raw:?}")));
        }
        if let Ok(text) = Text::new(tokens) {
            if let Ok(id) = cat.object_id(&text) {
                return Ok(id);
            }
        }
    }
    Err(CliError::Model(format!(
        "unknown object \"{}\": not a span of the model",
        tokenize(raw, false).join(" ")
    )))
}

fn expect_args<'a>(
    verb: &str,
    args: &'a [String],
    arity: usize,
) -> Result<&'a [String], CliError> {
    if args.len() != arity {
        return Err(CliError::Usage(format!(
            "usage: query <model> {verb} takes {arity} text argument{}",
            if arity == 1 { "" } else { "s" }
        )));
    }
    Ok(args)
}

fn cmd_query(
    model: &Path,
    verb: &str,
    args: &[String],
    top: usize,
    all: bool,
    mode: &str,
) -> Result<(), CliError> {
    if top == 0 {
        return Err(CliError::Usage("--top must be at least 1".to_string()));
    }
    let cat = load_category(model)?;
    match verb {
        "hom" => {
            let args = expect_args(verb, args, 2)?;
            let (x, y) = (resolve(&cat, &args[0])?, resolve(&cat, &args[1])?);
            println!("{}", format_value(cat.hom_by_ids(x, y)));
        }
        "dist" => {
            let args = expect_args(verb, args, 2)?;
            let (x, y) = (resolve(&cat, &args[0])?, resolve(&cat, &args[1])?);
            println!("{}", format_value(cat.metric_hom_by_ids(x, y)));
        }
        "homval" => {
            let args = expect_args(verb, args, 2)?;
            let (x, y) = (resolve(&cat, &args[0])?, resolve(&cat, &args[1])?);
            let value = hom_copresheaves(&representable(&cat, x), &representable(&cat, y));
            println!("{}", format_value(value));
        }
        "meaning" => {
            let args = expect_args(verb, args, 1)?;
            let x = resolve(&cat, &args[0])?;
            print_copresheaf(&cat, &representable(&cat, x), top, all);
        }
        "and" => {
            let args = expect_args(verb, args, 2)?;
            let (x, y) = (resolve(&cat, &args[0])?, resolve(&cat, &args[1])?);
            let f = product(&representable(&cat, x), &representable(&cat, y));
            print_copresheaf(&cat, &f, top, all);
        }
        "or" => {
            let args = expect_args(verb, args, 2)?;
            let (x, y) = (resolve(&cat, &args[0])?, resolve(&cat, &args[1])?);
            let f = coproduct(&representable(&cat, x), &representable(&cat, y));
            print_copresheaf(&cat, &f, top, all);
        }
        "implies" => {
            let args = expect_args(verb, args, 2)?;
            let (x, y) = (resolve(&cat, &args[0])?, resolve(&cat, &args[1])?);
            let f = internal_hom(&cat, &representable(&cat, x), &representable(&cat, y));
            print_copresheaf(&cat, &f, top, all);
        }
        "near" => {
            let args = expect_args(verb, args, 1)?;
            let x = resolve(&cat, &args[0])?;
            let mode: RankMode = mode
                .parse()
                .map_err(|e: subtext_core::metric::MetricError| CliError::Usage(e.to_string()))?;
            let k = if all { cat.object_count() } else { top };
            let ranking = nearest_meanings(&cat, &representable(&cat, x), k, mode);
            print!("{}", ranking_tsv(&cat, &ranking));
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown verb {other:?}: expected hom, dist, meaning, and, or, implies, homval, or near"
            )));
        }
    }
    Ok(())
}

/// Listing verbs print the strongest values first; `--all` switches to the
/// full table in object order.
fn print_copresheaf(cat: &SyntaxCategory, f: &Copresheaf, top: usize, all: bool) {
    if all {
        print!("{}", export_tsv(cat, f));
        return;
    }
    let mut order: Vec<usize> = (0..f.len()).collect();
    order.sort_by(|&a, &b| f.value(b).total_cmp(&f.value(a)).then(a.cmp(&b)));
    for id in order.into_iter().take(top) {
        println!("{}\t{}", cat.label(id), format_value(f.value(id)));
    }
}

fn emit_report(report_json: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, report_json).map_err(|e| {
            CliError::Model(format!("cannot write report {}: {e}", path.display()))
        }),
        None => {
            println!("{report_json}");
            Ok(())
        }
    }
}

fn cmd_verify(
    model: &Path,
    tol: f64,
    seed: u64,
    out: Option<&Path>,
    perturbation: Option<(String, String, f64)>,
) -> Result<(), CliError> {
    let stats = match load_model(model) {
        Ok(stats) => stats,
        Err(err @ CorpusError::Invariant { .. }) => {
            // invariant violations still produce a report naming the witness
            let entry = LawEntry {
                law: "model-invariants".to_string(),
                checked: 1,
                max_violation: 1.0,
                witness: Some(vec![err.to_string()]),
            };
            let report = VerificationReport::new(vec![entry], seed, tol);
            emit_report(&report.to_json(), out)?;
            return Err(CliError::Model(err.to_string()));
        }
        Err(err) => return Err(CliError::Model(err.to_string())),
    };
    let cat = SyntaxCategory::from_stats(&stats);
    let config = SuiteConfig {
        tolerance: tol,
        seed,
        ..SuiteConfig::default()
    };
    let report = match perturbation {
        None => run_suite(&cat, &config),
        Some((from, to, delta)) => {
            let (x, y) = (resolve(&cat, &from)?, resolve(&cat, &to)?);
            let mut table = HomTable::snapshot(&cat);
            table.perturb_hom(x, y, delta);
            run_suite(&table, &config)
        }
    };
    emit_report(&report.to_json(), out)?;
    if report.pass() {
        Ok(())
    } else {
        Err(CliError::LawViolation)
    }
}
