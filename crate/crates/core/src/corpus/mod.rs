//! Corpus runs: find submissions under a root directory, analyze each file,
//! and aggregate per-group statistics.

mod layout;
mod stats;

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use walkdir::WalkDir;

use crate::{
    detect::{detect_all_with, DetectOptions, Diagnostic},
    error::{Error, Result},
    lexer::ParseError,
    syntax::ParsedModule,
};
pub use layout::Layout;
pub use stats::{compute_ordering, CorpusStats, PrevalenceBasis, ReportOrdering};

/// Identity of one submission file.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SubmissionMeta {
    pub group_id: String,
    pub student_id: String,
    pub path: PathBuf,
}

#[derive(Clone, Debug, Default)]
pub struct Scan {
    pub submissions: Vec<SubmissionMeta>,
    /// Files that were skipped, with the reason.
    pub notices: Vec<String>,
}

/// Every file under `root` whose relative path matches `layout`, sorted by
/// path.
pub fn scan_corpus(root: &Path, layout: &Layout) -> Result<Scan> {
    let meta = std::fs::metadata(root).map_err(|source| Error::Io {
        path: root.to_path_buf(),
        source,
    })?;
    if !meta.is_dir() {
        return Err(Error::Io {
            path: root.to_path_buf(),
            source: std::io::Error::new(std::io::ErrorKind::NotADirectory, "not a directory"),
        });
    }
    let mut scan = Scan::default();
    for entry in WalkDir::new(root).sort_by_file_name() {
        let entry = match entry {
            Ok(e) => e,
            Err(e) if e.depth() == 0 => return Err(e.into()),
            Err(e) => {
                scan.notices.push(format!("skipped: {e}"));
                continue;
            }
        };
        if !entry.file_type().is_file() {
            continue;
        }
        let relative = entry.path().strip_prefix(root).unwrap_or(entry.path());
        let relative_str = relative
            .components()
            .map(|c| c.as_os_str().to_string_lossy())
            .collect::<Vec<_>>()
            .join("/");
        match layout.captures(&relative_str) {
            Some((group_id, student_id)) => scan.submissions.push(SubmissionMeta {
                group_id,
                student_id,
                path: entry.path().to_path_buf(),
            }),
            None => scan.notices.push(format!(
                "ignored {}: does not match layout '{}'",
                entry.path().display(),
                layout.as_str()
            )),
        }
    }
    Ok(scan)
}

#[derive(Clone, Debug, Default)]
pub struct AnalyzeOptions {
    /// Worker threads; 0 picks the number of CPUs.
    pub workers: usize,
    pub basis: PrevalenceBasis,
    pub detect: DetectOptions,
}

#[derive(Clone, Debug)]
pub enum FileOutcome {
    Analyzed(Vec<Diagnostic>),
    Invalid(Vec<ParseError>),
    Unreadable(String),
}

#[derive(Clone, Debug)]
pub struct FileReport {
    pub meta: SubmissionMeta,
    pub lloc: usize,
    pub outcome: FileOutcome,
}

#[derive(Clone, Debug)]
pub struct CorpusAnalysis {
    pub stats: CorpusStats,
    /// Per-file results, sorted by path.
    pub files: Vec<FileReport>,
    pub notices: Vec<String>,
}

impl CorpusAnalysis {
    pub fn diagnostics(&self) -> impl Iterator<Item = &Diagnostic> {
        self.files.iter().flat_map(|f| match &f.outcome {
            FileOutcome::Analyzed(d) => d.as_slice(),
            _ => &[],
        })
    }

    pub fn invalid_files(&self) -> impl Iterator<Item = &FileReport> {
        self.files
            .iter()
            .filter(|f| matches!(f.outcome, FileOutcome::Invalid(_)))
    }
}

/// Analyze one submission file.
pub fn analyze_file(meta: &SubmissionMeta, options: &DetectOptions) -> FileReport {
    let bytes = match std::fs::read(&meta.path) {
        Ok(b) => b,
        Err(e) => {
            return FileReport {
                meta: meta.clone(),
                lloc: 0,
                outcome: FileOutcome::Unreadable(e.to_string()),
            }
        }
    };
    let module = ParsedModule::from_bytes(&bytes, meta.path.clone());
    let outcome = match detect_all_with(&module, options) {
        Ok(diags) => FileOutcome::Analyzed(diags),
        Err(_) => FileOutcome::Invalid(module.parse_errors.clone()),
    };
    FileReport {
        meta: meta.clone(),
        lloc: module.lloc,
        outcome,
    }
}

/// Analyze every submission and aggregate. Files with parse errors are
/// excluded from the counts and tallied as invalid per group.
pub fn analyze_corpus(metas: &[SubmissionMeta], options: &AnalyzeOptions) -> CorpusAnalysis {
    let run = || -> Vec<FileReport> {
        metas
            .par_iter()
            .map(|m| analyze_file(m, &options.detect))
            .collect()
    };
    let mut files = match rayon::ThreadPoolBuilder::new()
        .num_threads(options.workers)
        .build()
    {
        Ok(pool) => pool.install(run),
        Err(_) => run(),
    };
    files.sort_by(|a, b| a.meta.cmp(&b.meta));

    let mut stats = CorpusStats::with_patterns(options.basis, options.detect.patterns);
    let mut notices = Vec::new();
    for f in &files {
        match &f.outcome {
            FileOutcome::Analyzed(diags) => {
                stats.record(&f.meta.group_id, &f.meta.student_id, f.lloc, diags)
            }
            FileOutcome::Invalid(_) => stats.record_invalid(&f.meta.group_id),
            FileOutcome::Unreadable(e) => {
                notices.push(format!("skipped {}: {e}", f.meta.path.display()))
            }
        }
    }
    CorpusAnalysis {
        stats,
        files,
        notices,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detect::PatternKind;

    fn write(root: &Path, rel: &str, text: &str) {
        let p = root.join(rel);
        std::fs::create_dir_all(p.parent().unwrap()).unwrap();
        std::fs::write(p, text).unwrap();
    }

    const RETURN_BOOL: &str =
        "def f(c):\n    if c:\n        return True\n    else:\n        return False\n";

    #[test]
    fn scan_by_layout() {
        let dir = tempfile::tempdir().unwrap();
        for lab in ["lab1", "lab2"] {
            for s in ["s1", "s2", "s3"] {
                write(dir.path(), &format!("{lab}/{s}/main.py"), "x = 1\n");
            }
        }
        write(dir.path(), "lab1/README.md", "hi");
        let scan = scan_corpus(dir.path(), &Layout::default()).unwrap();
        assert_eq!(scan.submissions.len(), 6);
        assert_eq!(scan.notices.len(), 1);
        assert_eq!(scan.submissions[0].group_id, "lab1");
        assert_eq!(scan.submissions[0].student_id, "s1");
    }

    #[test]
    fn scan_empty_and_missing() {
        let dir = tempfile::tempdir().unwrap();
        let scan = scan_corpus(dir.path(), &Layout::default()).unwrap();
        assert!(scan.submissions.is_empty());
        assert!(scan_corpus(&dir.path().join("nope"), &Layout::default()).is_err());
    }

    #[test]
    fn analyze_counts_and_invalid() {
        let dir = tempfile::tempdir().unwrap();
        for g in ["g1", "g2", "g3"] {
            for s in 0..5 {
                write(dir.path(), &format!("{g}/s{s}/a.py"), RETURN_BOOL);
            }
        }
        write(dir.path(), "g1/s9/bad.py", "if x\n");
        write(dir.path(), "g2/s9/bad.py", "x = '\u{1}\n");
        let scan = scan_corpus(dir.path(), &Layout::default()).unwrap();
        let a = analyze_corpus(&scan.submissions, &AnalyzeOptions::default());
        let k = PatternKind::IfElseReturnBool;
        for g in ["g1", "g2", "g3"] {
            assert_eq!(a.stats.count(g, k), 5);
            assert_eq!(a.stats.students(g, k), 5);
            assert_eq!(a.stats.prevalence(g, k), 1.0);
        }
        assert_eq!(a.stats.invalid_total(), 2);
        assert_eq!(a.invalid_files().count(), 2);
        assert_eq!(a.stats.total_diagnostics(), 15);
    }

    #[test]
    fn only_invalid_files() {
        let dir = tempfile::tempdir().unwrap();
        for s in 0..4 {
            write(dir.path(), &format!("g/s{s}/a.py"), "def f(:\n");
        }
        let scan = scan_corpus(dir.path(), &Layout::default()).unwrap();
        let a = analyze_corpus(&scan.submissions, &AnalyzeOptions::default());
        assert_eq!(a.stats.total_diagnostics(), 0);
        assert_eq!(a.stats.invalid_total(), 4);
    }
}
