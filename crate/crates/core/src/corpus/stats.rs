use std::{
    cmp::Ordering,
    collections::{BTreeMap, BTreeSet},
};

use serde::{Deserialize, Serialize};

use crate::detect::{Diagnostic, PatternKind, PatternSet};

const PATTERNS: usize = PatternKind::ALL.len();

/// What a prevalence share counts.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrevalenceBasis {
    /// Every detected occurrence.
    #[default]
    Occurrences,
    /// Submissions with at least one occurrence.
    Submissions,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Cell {
    count: u64,
    submissions_with: u64,
    students: BTreeSet<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Group {
    lloc: u64,
    submissions: u64,
    invalid: u64,
    cells: [Cell; PATTERNS],
}

impl Default for Group {
    fn default() -> Self {
        Group {
            lloc: 0,
            submissions: 0,
            invalid: 0,
            cells: std::array::from_fn(|_| Cell::default()),
        }
    }
}

/// Per-(group, pattern) tallies and the statistics derived from them.
///
/// Tallies merge commutatively, so the order files are added in never
/// affects the result. Only the selected patterns form rows and cells.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CorpusStats {
    basis: PrevalenceBasis,
    patterns: PatternSet,
    groups: BTreeMap<String, Group>,
}

impl CorpusStats {
    pub fn new(basis: PrevalenceBasis) -> Self {
        CorpusStats::with_patterns(basis, PatternSet::all())
    }

    pub fn with_patterns(basis: PrevalenceBasis, patterns: PatternSet) -> Self {
        CorpusStats {
            basis,
            patterns,
            groups: BTreeMap::new(),
        }
    }

    /// The selected patterns in catalog order.
    pub fn patterns(&self) -> Vec<PatternKind> {
        PatternKind::ALL
            .into_iter()
            .filter(|&k| self.patterns.contains(k))
            .collect()
    }

    pub fn basis(&self) -> PrevalenceBasis {
        self.basis
    }

    /// Tally one valid submission.
    pub fn record(&mut self, group: &str, student: &str, lloc: usize, diagnostics: &[Diagnostic]) {
        let g = self.groups.entry(group.to_string()).or_default();
        g.lloc += lloc as u64;
        g.submissions += 1;
        let mut seen = [false; PATTERNS];
        for d in diagnostics
            .iter()
            .filter(|d| self.patterns.contains(d.pattern))
        {
            let cell = &mut g.cells[d.pattern.index()];
            cell.count += 1;
            if !seen[d.pattern.index()] {
                seen[d.pattern.index()] = true;
                cell.submissions_with += 1;
                cell.students.insert(student.to_string());
            }
        }
    }

    /// Tally a submission excluded for parse errors.
    pub fn record_invalid(&mut self, group: &str) {
        self.groups.entry(group.to_string()).or_default().invalid += 1;
    }

    pub fn merge(&mut self, other: &CorpusStats) {
        debug_assert_eq!(self.patterns, other.patterns);
        for (name, theirs) in &other.groups {
            let ours = self.groups.entry(name.clone()).or_default();
            ours.lloc += theirs.lloc;
            ours.submissions += theirs.submissions;
            ours.invalid += theirs.invalid;
            for (a, b) in ours.cells.iter_mut().zip(&theirs.cells) {
                a.count += b.count;
                a.submissions_with += b.submissions_with;
                a.students.extend(b.students.iter().cloned());
            }
        }
    }

    pub fn groups(&self) -> impl Iterator<Item = &str> {
        self.groups.keys().map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    fn cell(&self, group: &str, pattern: PatternKind) -> Option<&Cell> {
        self.groups.get(group).map(|g| &g.cells[pattern.index()])
    }

    pub fn count(&self, group: &str, pattern: PatternKind) -> u64 {
        self.cell(group, pattern).map_or(0, |c| c.count)
    }

    pub fn students(&self, group: &str, pattern: PatternKind) -> u64 {
        self.cell(group, pattern)
            .map_or(0, |c| c.students.len() as u64)
    }

    pub fn submissions_with(&self, group: &str, pattern: PatternKind) -> u64 {
        self.cell(group, pattern).map_or(0, |c| c.submissions_with)
    }

    pub fn lloc(&self, group: &str) -> u64 {
        self.groups.get(group).map_or(0, |g| g.lloc)
    }

    pub fn submissions(&self, group: &str) -> u64 {
        self.groups.get(group).map_or(0, |g| g.submissions)
    }

    pub fn invalid(&self, group: &str) -> u64 {
        self.groups.get(group).map_or(0, |g| g.invalid)
    }

    pub fn invalid_total(&self) -> u64 {
        self.groups.values().map(|g| g.invalid).sum()
    }

    pub fn submissions_total(&self) -> u64 {
        self.groups.values().map(|g| g.submissions).sum()
    }

    pub fn lloc_total(&self) -> u64 {
        self.groups.values().map(|g| g.lloc).sum()
    }

    pub fn group_total(&self, group: &str) -> u64 {
        self.patterns().iter().map(|&k| self.count(group, k)).sum()
    }

    pub fn pattern_total(&self, pattern: PatternKind) -> u64 {
        self.groups.keys().map(|g| self.count(g, pattern)).sum()
    }

    pub fn total_diagnostics(&self) -> u64 {
        self.groups.keys().map(|g| self.group_total(g)).sum()
    }

    /// The numerator prevalence shares are computed from.
    pub fn basis_count(&self, group: &str, pattern: PatternKind) -> u64 {
        match self.basis {
            PrevalenceBasis::Occurrences => self.count(group, pattern),
            PrevalenceBasis::Submissions => self.submissions_with(group, pattern),
        }
    }

    fn basis_group_total(&self, group: &str) -> u64 {
        self.patterns()
            .iter()
            .map(|&k| self.basis_count(group, k))
            .sum()
    }

    /// Share of `pattern` among the group's detections, in `[0, 1]`.
    pub fn prevalence(&self, group: &str, pattern: PatternKind) -> f64 {
        ratio(
            self.basis_count(group, pattern),
            self.basis_group_total(group),
        )
    }

    /// Share of `pattern` among all detections in the corpus.
    pub fn overall_prevalence(&self, pattern: PatternKind) -> f64 {
        let num: u64 = self
            .groups
            .keys()
            .map(|g| self.basis_count(g, pattern))
            .sum();
        let den: u64 = self.groups.keys().map(|g| self.basis_group_total(g)).sum();
        ratio(num, den)
    }

    /// Detections per logical line in the group.
    pub fn rate(&self, group: &str) -> f64 {
        ratio(self.group_total(group), self.lloc(group))
    }

    pub fn rate_cell(&self, group: &str, pattern: PatternKind) -> f64 {
        ratio(self.count(group, pattern), self.lloc(group))
    }

    /// Students with `pattern` in any group.
    pub fn unique_students_total(&self, pattern: PatternKind) -> u64 {
        let all: BTreeSet<&String> = self
            .groups
            .values()
            .flat_map(|g| g.cells[pattern.index()].students.iter())
            .collect();
        all.len() as u64
    }

    fn student_cells(&self) -> impl Iterator<Item = f64> + '_ {
        let patterns = self.patterns();
        self.groups.values().flat_map(move |g| {
            patterns
                .clone()
                .into_iter()
                .map(|k| g.cells[k.index()].students.len() as f64)
        })
    }

    fn cell_count(&self) -> usize {
        self.groups.len() * self.patterns().len()
    }

    /// Mean unique-student count over every (group, pattern) cell.
    pub fn mean_students(&self) -> f64 {
        let n = self.cell_count();
        if n == 0 {
            return 0.0;
        }
        self.student_cells().sum::<f64>() / n as f64
    }

    /// Population standard deviation of the same cells.
    pub fn sd_students(&self) -> f64 {
        let n = self.cell_count();
        if n == 0 {
            return 0.0;
        }
        let mean = self.mean_students();
        let var = self
            .student_cells()
            .map(|x| (x - mean).powi(2))
            .sum::<f64>()
            / n as f64;
        var.sqrt()
    }

    /// Two standard deviations above the mean.
    pub fn threshold2sd(&self) -> f64 {
        self.mean_students() + 2.0 * self.sd_students()
    }

    pub fn above_threshold(&self, group: &str, pattern: PatternKind) -> bool {
        self.students(group, pattern) as f64 > self.threshold2sd()
    }

    /// Report ordering: groups by detections per line, patterns by
    /// detections per line over the whole corpus, both descending, ties
    /// broken by identifier.
    pub fn ordering(&self) -> ReportOrdering {
        let mut groups: Vec<&str> = self.groups().collect();
        groups.sort_by(|a, b| {
            cmp_ratio_desc(
                (self.group_total(a), self.lloc(a)),
                (self.group_total(b), self.lloc(b)),
            )
            .then_with(|| a.cmp(b))
        });
        let lloc = self.lloc_total();
        let mut patterns = self.patterns();
        patterns.sort_by(|&a, &b| {
            cmp_ratio_desc((self.pattern_total(a), lloc), (self.pattern_total(b), lloc))
                .then_with(|| a.id().cmp(b.id()))
        });
        ReportOrdering {
            groups: groups.into_iter().map(String::from).collect(),
            patterns,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportOrdering {
    pub groups: Vec<String>,
    pub patterns: Vec<PatternKind>,
}

/// Free-function form of [`CorpusStats::ordering`].
pub fn compute_ordering(stats: &CorpusStats) -> ReportOrdering {
    stats.ordering()
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Compare two fractions exactly, larger first. A zero denominator counts
/// as rate zero.
fn cmp_ratio_desc((an, ad): (u64, u64), (bn, bd): (u64, u64)) -> Ordering {
    let (an, ad) = if ad == 0 { (0, 1) } else { (an, ad) };
    let (bn, bd) = if bd == 0 { (0, 1) } else { (bn, bd) };
    (bn as u128 * ad as u128).cmp(&(an as u128 * bd as u128))
}
