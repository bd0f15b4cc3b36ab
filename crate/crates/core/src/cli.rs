//! The `condlint` command line.

use std::{
    ffi::OsString,
    io::{Read, Write},
    path::{Path, PathBuf},
};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;
use walkdir::WalkDir;

use crate::{
    config::Config,
    corpus::{analyze_corpus, scan_corpus, AnalyzeOptions, CorpusStats, Layout, PrevalenceBasis},
    detect::{detect_all_with, DetectOptions, Diagnostic, PatternKind, PatternSet},
    error::Error,
    report::{self, ReportFormat},
    syntax::ParsedModule,
};

pub const EXIT_CLEAN: i32 = 0;
pub const EXIT_FINDINGS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "condlint",
    version,
    about = "Find anti-patterns in Python conditional statements"
)]
struct Cli {
    /// Read defaults from this file instead of ./condlint.toml.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check files or directories (use `-` for standard input).
    Check(CheckArgs),
    /// Analyze a corpus of submissions and emit aggregate reports.
    Corpus(CorpusArgs),
}

#[derive(ValueEnum, Copy, Clone, Debug)]
enum FormatArg {
    Json,
    Csv,
    Markdown,
}

impl From<FormatArg> for ReportFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => ReportFormat::Json,
            FormatArg::Csv => ReportFormat::Csv,
            FormatArg::Markdown => ReportFormat::Markdown,
        }
    }
}

#[derive(ValueEnum, Copy, Clone, Debug)]
enum BasisArg {
    Occurrences,
    Submissions,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(required = true, value_name = "PATH")]
    paths: Vec<PathBuf>,
    /// Output format [default: markdown on a terminal, json otherwise]
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Comma-separated pattern identifiers to report.
    #[arg(long, value_name = "LIST")]
    patterns: Option<String>,
    /// Omit rewrite suggestions.
    #[arg(long)]
    no_suggestions: bool,
    /// Report files that fail to parse without changing the exit code.
    #[arg(long)]
    skip_invalid: bool,
}

#[derive(Args, Debug)]
struct CorpusArgs {
    root: PathBuf,
    /// Path pattern with {group} and {student} placeholders.
    #[arg(long)]
    layout: Option<String>,
    /// Output format [default: markdown on a terminal, json otherwise]
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Write one file per report into this directory.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Worker threads (0 = one per CPU).
    #[arg(long)]
    workers: Option<usize>,
    /// What prevalence shares count.
    #[arg(long, value_enum)]
    basis: Option<BasisArg>,
    /// Comma-separated pattern identifiers to count.
    #[arg(long, value_name = "LIST")]
    patterns: Option<String>,
    /// Exclude files that fail to parse without changing the exit code.
    #[arg(
        long,
        value_name = "BOOL",
        default_value_t = true,
        num_args = 0..=1,
        default_missing_value = "true",
        action = clap::ArgAction::Set
    )]
    skip_invalid: bool,
}

/// Process environment the CLI depends on, injectable for tests.
#[derive(Clone, Debug)]
pub struct Env {
    pub cwd: PathBuf,
    pub stdout_is_terminal: bool,
    pub no_color: bool,
}

impl Env {
    pub fn from_process() -> Self {
        use std::io::IsTerminal;
        Env {
            cwd: std::env::current_dir().unwrap_or_else(|_| PathBuf::from(".")),
            stdout_is_terminal: std::io::stdout().is_terminal(),
            no_color: std::env::var_os("NO_COLOR").is_some_and(|v| !v.is_empty()),
        }
    }
}

/// Run the CLI and return the process exit code.
pub fn run<I, T>(args: I, env: &Env, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_CLEAN
            };
        }
    };
    let config = match &cli.config {
        Some(p) => Config::load(p),
        None => Config::discover(&env.cwd),
    };
    let config = match config {
        Ok(c) => c,
        Err(e) => return usage(err, &e.to_string()),
    };
    match cli.command {
        Command::Check(args) => cmd_check(args, &config, env, out, err),
        Command::Corpus(args) => cmd_corpus(args, &config, env, out, err),
    }
}

fn usage(err: &mut dyn Write, message: &str) -> i32 {
    let _ = writeln!(err, "error: {message}");
    EXIT_USAGE
}

fn resolve_format(
    flag: Option<FormatArg>,
    config: &Config,
    env: &Env,
) -> Result<ReportFormat, Error> {
    if let Some(f) = flag {
        return Ok(f.into());
    }
    if let Some(f) = &config.format {
        return f.parse();
    }
    Ok(if env.stdout_is_terminal {
        ReportFormat::Markdown
    } else {
        ReportFormat::Json
    })
}

fn resolve_patterns(flag: Option<&str>, config: &Config) -> Result<PatternSet, String> {
    let list = match flag {
        Some(s) => Some(s.to_string()),
        None => config.patterns.as_ref().and_then(|p| p.joined()),
    };
    match list {
        None => Ok(PatternSet::all()),
        Some(list) => PatternSet::parse_list(&list).map_err(|e| {
            let valid: Vec<&str> = PatternKind::ALL.iter().map(|p| p.id()).collect();
            format!("{e}\nvalid identifiers:\n  {}", valid.join("\n  "))
        }),
    }
}

fn color(env: &Env, format: ReportFormat) -> bool {
    env.stdout_is_terminal && !env.no_color && format == ReportFormat::Markdown
}

/// Python files named by `path`: the file itself, or every `.py` file below
/// a directory in sorted order.
fn expand(path: &Path) -> Result<Vec<PathBuf>, Error> {
    if !path.is_dir() {
        return Ok(vec![path.to_path_buf()]);
    }
    let mut files = Vec::new();
    for entry in WalkDir::new(path).sort_by_file_name() {
        let entry = entry?;
        if entry.file_type().is_file() && entry.path().extension().is_some_and(|e| e == "py") {
            files.push(entry.into_path());
        }
    }
    Ok(files)
}

fn read_input(path: &Path) -> Result<(Vec<u8>, PathBuf), Error> {
    if path == Path::new("-") {
        let mut buf = Vec::new();
        std::io::stdin()
            .read_to_end(&mut buf)
            .map_err(|source| Error::Io {
                path: path.to_path_buf(),
                source,
            })?;
        return Ok((buf, PathBuf::from("<stdin>")));
    }
    let bytes = std::fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok((bytes, path.to_path_buf()))
}

fn cmd_check(
    args: CheckArgs,
    config: &Config,
    env: &Env,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let format = match resolve_format(args.format, config, env) {
        Ok(f) => f,
        Err(e) => return usage(err, &e.to_string()),
    };
    let patterns = match resolve_patterns(args.patterns.as_deref(), config) {
        Ok(p) => p,
        Err(e) => return usage(err, &e),
    };
    let options = DetectOptions {
        suggestions: !args.no_suggestions,
        patterns,
    };

    let mut io_failed = false;
    let mut parse_failed = false;
    let mut diags: Vec<Diagnostic> = Vec::new();
    for path in &args.paths {
        let files = match expand(path) {
            Ok(f) => f,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                io_failed = true;
                continue;
            }
        };
        for file in files {
            let (bytes, name) = match read_input(&file) {
                Ok(x) => x,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    io_failed = true;
                    continue;
                }
            };
            let module = ParsedModule::from_bytes(&bytes, name);
            match detect_all_with(&module, &options) {
                Ok(d) => diags.extend(d),
                Err(_) => {
                    parse_failed = true;
                    for e in &module.parse_errors {
                        let _ = writeln!(err, "{}:{e}", module.path.display());
                    }
                }
            }
        }
    }
    let text = report::emit_diagnostics_styled(&diags, format, color(env, format));
    let _ = out.write_all(text.as_bytes());
    if io_failed {
        EXIT_USAGE
    } else if parse_failed && !args.skip_invalid {
        EXIT_PARSE
    } else if diags.is_empty() {
        EXIT_CLEAN
    } else {
        EXIT_FINDINGS
    }
}

/// The four corpus reports, in output order.
pub fn corpus_reports(stats: &CorpusStats, format: ReportFormat) -> Vec<(&'static str, String)> {
    vec![
        ("prevalence", report::emit_prevalence_matrix(stats, format)),
        ("students", report::emit_student_matrix(stats, format)),
        ("totals", report::emit_totals_bar_data(stats, format)),
        ("invalid", report::emit_invalid_tally(stats, format)),
    ]
}

/// All corpus reports as one document.
pub fn combined_corpus_report(stats: &CorpusStats, format: ReportFormat) -> String {
    let reports = corpus_reports(stats, format);
    match format {
        ReportFormat::Json => {
            let mut doc = serde_json::Map::new();
            for (name, text) in reports {
                let v: Value = serde_json::from_str(&text).expect("emitters produce JSON");
                doc.insert(name.to_string(), v);
            }
            let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable");
            s.push('\n');
            s
        }
        ReportFormat::Csv => reports
            .iter()
            .map(|(name, text)| format!("# {name}\n{text}"))
            .collect::<Vec<_>>()
            .join("\n"),
        ReportFormat::Markdown => {
            let titles = [
                "Prevalence of each pattern (%)",
                "Unique students per pattern",
                "Overall share of each pattern",
                "Submissions per group",
            ];
            reports
                .iter()
                .zip(titles)
                .map(|((_, text), title)| format!("## {title}\n\n{text}"))
                .collect::<Vec<_>>()
                .join("\n")
        }
    }
}

fn cmd_corpus(
    args: CorpusArgs,
    config: &Config,
    env: &Env,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let format = match resolve_format(args.format, config, env) {
        Ok(f) => f,
        Err(e) => return usage(err, &e.to_string()),
    };
    let patterns = match resolve_patterns(args.patterns.as_deref(), config) {
        Ok(p) => p,
        Err(e) => return usage(err, &e),
    };
    let layout = match Layout::parse(
        args.layout
            .as_deref()
            .or(config.layout.as_deref())
            .unwrap_or("{group}/{student}/*.py"),
    ) {
        Ok(l) => l,
        Err(e) => return usage(err, &e.to_string()),
    };
    let scan = match scan_corpus(&args.root, &layout) {
        Ok(s) => s,
        Err(e) => return usage(err, &e.to_string()),
    };
    for n in &scan.notices {
        let _ = writeln!(err, "note: {n}");
    }
    if scan.submissions.is_empty() {
        return usage(
            err,
            &format!(
                "no files under {} match layout '{}'",
                args.root.display(),
                layout.as_str()
            ),
        );
    }
    let basis = match args.basis {
        Some(BasisArg::Occurrences) => PrevalenceBasis::Occurrences,
        Some(BasisArg::Submissions) => PrevalenceBasis::Submissions,
        None => config.basis.unwrap_or_default(),
    };
    let options = AnalyzeOptions {
        workers: args.workers.or(config.workers).unwrap_or(0),
        basis,
        detect: DetectOptions {
            suggestions: false,
            patterns,
        },
    };
    let analysis = analyze_corpus(&scan.submissions, &options);
    for n in &analysis.notices {
        let _ = writeln!(err, "note: {n}");
    }
    for f in analysis.invalid_files() {
        let _ = writeln!(err, "invalid: {}", f.meta.path.display());
    }
    let stats = &analysis.stats;

    match &args.out {
        Some(dir) => {
            if let Err(e) = std::fs::create_dir_all(dir) {
                return usage(err, &format!("{}: {e}", dir.display()));
            }
            for (name, text) in corpus_reports(stats, format) {
                let path = dir.join(format!("{name}.{}", format.extension()));
                if let Err(e) = std::fs::write(&path, text) {
                    return usage(err, &format!("{}: {e}", path.display()));
                }
            }
            let _ = writeln!(
                out,
                "{} submissions, {} invalid, {} diagnostics; reports written to {}",
                stats.submissions_total(),
                stats.invalid_total(),
                stats.total_diagnostics(),
                dir.display()
            );
        }
        None => {
            let _ = out.write_all(combined_corpus_report(stats, format).as_bytes());
        }
    }

    if stats.invalid_total() > 0 && !args.skip_invalid {
        EXIT_PARSE
    } else if stats.total_diagnostics() > 0 {
        EXIT_FINDINGS
    } else {
        EXIT_CLEAN
    }
}
