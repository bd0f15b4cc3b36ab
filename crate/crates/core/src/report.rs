//! Diagnostic and corpus reports in JSON, CSV and Markdown.
//!
//! Every emitter is a pure function of its input, so identical input gives
//! byte-identical output.

use std::{fmt::Write as _, str::FromStr};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::{
    corpus::{CorpusStats, ReportOrdering},
    detect::{Diagnostic, PatternKind},
    error::Error,
};

/// Column header of the long-form matrix CSV.
pub const MATRIX_CSV_HEADER: &str =
    "pattern,group,count,unique_students,submissions_with,prevalence_pct,rate_per_lloc";

/// Group label of the corpus-wide rows and columns.
pub const TOTAL: &str = "Total";

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
    Markdown,
}

impl ReportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Json => "json",
            ReportFormat::Csv => "csv",
            ReportFormat::Markdown => "md",
        }
    }
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            _ => Err(Error::Config(format!(
                "unknown format '{s}' (expected json, csv or markdown)"
            ))),
        }
    }
}

/// A share in `[0, 1]` as a percentage with one decimal.
pub fn percent(share: f64) -> String {
    format!("{:.1}", share * 100.0)
}

fn percent_value(share: f64) -> f64 {
    percent(share).parse().unwrap_or(0.0)
}

fn to_json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report values serialize");
    s.push('\n');
    s
}

fn csv_text(rows: impl IntoIterator<Item = Vec<String>>, header: &[&str]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

fn md_row(cells: &[String]) -> String {
    let cells: Vec<String> = cells.iter().map(|c| c.replace('|', "\\|")).collect();
    format!("| {} |\n", cells.join(" | "))
}

fn md_table(header: &[String], rows: &[Vec<String>]) -> String {
    let mut out = md_row(header);
    let rule: Vec<String> = header.iter().map(|_| "---".to_string()).collect();
    out.push_str(&md_row(&rule));
    for row in rows {
        out.push_str(&md_row(row));
    }
    out
}

pub fn emit_diagnostics(diags: &[Diagnostic], format: ReportFormat) -> String {
    emit_diagnostics_styled(diags, format, false)
}

/// Like [`emit_diagnostics`]; `color` adds ANSI styling to Markdown output.
pub fn emit_diagnostics_styled(diags: &[Diagnostic], format: ReportFormat, color: bool) -> String {
    let mut sorted: Vec<&Diagnostic> = diags.iter().collect();
    sorted.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    match format {
        ReportFormat::Json => to_json(&sorted),
        ReportFormat::Csv => {
            let header = [
                "file",
                "pattern",
                "line_start",
                "col_start",
                "line_end",
                "col_end",
                "message",
                "suggestion",
            ];
            let rows = sorted.iter().map(|d| {
                let s = d.span;
                vec![
                    d.file.display().to_string(),
                    d.pattern.id().to_string(),
                    s.line_start.to_string(),
                    s.col_start.to_string(),
                    s.line_end.to_string(),
                    s.col_end.to_string(),
                    d.message.clone(),
                    d.suggestion
                        .as_ref()
                        .and_then(|s| s.replacement.clone())
                        .unwrap_or_default(),
                ]
            });
            csv_text(rows, &header)
        }
        ReportFormat::Markdown => diagnostics_markdown(&sorted, color),
    }
}

fn diagnostics_markdown(diags: &[&Diagnostic], color: bool) -> String {
    let (bold, dim, reset) = if color {
        ("\x1b[1;33m", "\x1b[2m", "\x1b[0m")
    } else {
        ("", "", "")
    };
    let mut out = String::new();
    if diags.is_empty() {
        out.push_str("No conditional anti-patterns found.\n");
        return out;
    }
    let mut current = None;
    for d in diags {
        if current != Some(&d.file) {
            if current.is_some() {
                out.push('\n');
            }
            let _ = writeln!(out, "## {}\n", d.file.display());
            current = Some(&d.file);
        }
        let s = d.span;
        let _ = writeln!(
            out,
            "- {dim}{}:{}-{}:{}{reset} {bold}`{}`{reset} {}",
            s.line_start, s.col_start, s.line_end, s.col_end, d.pattern, d.message
        );
        if let Some(sug) = &d.suggestion {
            match &sug.replacement {
                Some(text) => {
                    let _ = writeln!(out, "\n  Suggested rewrite: {}\n", sug.rationale);
                    out.push_str("  ```python\n");
                    for line in dedent_replacement(text, d.span.col_start) {
                        let _ = writeln!(out, "  {line}");
                    }
                    out.push_str("  ```\n");
                }
                None => {
                    let _ = writeln!(out, "  Hint: {}", sug.rationale);
                }
            }
        }
    }
    let _ = writeln!(out, "\n{} diagnostic(s).", diags.len());
    out
}

/// A replacement starts at `col` while its later lines keep their absolute
/// indentation; shift those back so the snippet reads from column 1.
fn dedent_replacement(text: &str, col: u32) -> impl Iterator<Item = &str> {
    let width = col.saturating_sub(1) as usize;
    text.lines().enumerate().map(move |(i, line)| {
        let lead = line.len() - line.trim_start().len();
        if i == 0 || lead < width {
            line
        } else {
            &line[width..]
        }
    })
}

fn cell_json(stats: &CorpusStats, group: &str, k: PatternKind) -> Value {
    json!({
        "group": group,
        "count": stats.count(group, k),
        "unique_students": stats.students(group, k),
        "submissions_with": stats.submissions_with(group, k),
        "prevalence": stats.prevalence(group, k),
        "prevalence_pct": percent_value(stats.prevalence(group, k)),
        "rate_per_lloc": stats.rate_cell(group, k),
        "above_threshold": stats.above_threshold(group, k),
    })
}

fn total_json(stats: &CorpusStats, k: PatternKind) -> Value {
    let lloc = stats.lloc_total();
    let count = stats.pattern_total(k);
    let subs: u64 = stats.groups().map(|g| stats.submissions_with(g, k)).sum();
    json!({
        "group": TOTAL,
        "count": count,
        "unique_students": stats.unique_students_total(k),
        "submissions_with": subs,
        "prevalence": stats.overall_prevalence(k),
        "prevalence_pct": percent_value(stats.overall_prevalence(k)),
        "rate_per_lloc": if lloc == 0 { 0.0 } else { count as f64 / lloc as f64 },
    })
}

fn groups_json(stats: &CorpusStats, order: &ReportOrdering) -> Value {
    Value::Array(
        order
            .groups
            .iter()
            .map(|g| {
                json!({
                    "group": g,
                    "lloc": stats.lloc(g),
                    "submissions": stats.submissions(g),
                    "invalid": stats.invalid(g),
                    "diagnostics": stats.group_total(g),
                    "rate_per_lloc": stats.rate(g),
                })
            })
            .collect(),
    )
}

fn matrix_json(stats: &CorpusStats, kind: &str) -> String {
    let order = stats.ordering();
    let rows: Vec<Value> = if stats.is_empty() {
        Vec::new()
    } else {
        order
            .patterns
            .iter()
            .map(|&k| {
                let cells: Vec<Value> = order
                    .groups
                    .iter()
                    .map(|g| cell_json(stats, g, k))
                    .collect();
                json!({ "pattern": k.id(), "cells": cells, "total": total_json(stats, k) })
            })
            .collect()
    };
    let mut doc = json!({
        "matrix": kind,
        "basis": stats.basis(),
        "groups": groups_json(stats, &order),
        "rows": rows,
    });
    if kind == "students" {
        doc["mean_students"] = json!(stats.mean_students());
        doc["sd_students"] = json!(stats.sd_students());
        doc["threshold2sd"] = json!(stats.threshold2sd());
    }
    to_json(&doc)
}

/// Long-form CSV shared by both matrices: one row per (pattern, group) in
/// report order, followed by that pattern's `Total` row.
fn matrix_csv(stats: &CorpusStats) -> String {
    let header: Vec<&str> = MATRIX_CSV_HEADER.split(',').collect();
    if stats.is_empty() {
        return csv_text(Vec::new(), &header);
    }
    let order = stats.ordering();
    let mut rows = Vec::new();
    for &k in &order.patterns {
        for g in &order.groups {
            rows.push(vec![
                k.id().to_string(),
                g.clone(),
                stats.count(g, k).to_string(),
                stats.students(g, k).to_string(),
                stats.submissions_with(g, k).to_string(),
                percent(stats.prevalence(g, k)),
                stats.rate_cell(g, k).to_string(),
            ]);
        }
        let total = total_json(stats, k);
        rows.push(vec![
            k.id().to_string(),
            TOTAL.to_string(),
            total["count"].to_string(),
            total["unique_students"].to_string(),
            total["submissions_with"].to_string(),
            percent(stats.overall_prevalence(k)),
            total["rate_per_lloc"].as_f64().unwrap_or(0.0).to_string(),
        ]);
    }
    csv_text(rows, &header)
}

fn matrix_header(order: &ReportOrdering) -> Vec<String> {
    let mut header = vec!["Pattern".to_string()];
    header.extend(order.groups.iter().cloned());
    header.push(TOTAL.to_string());
    header
}

/// Per-group prevalence of each pattern: rows are patterns, columns are
/// groups and a final `Total`, cells are percentages.
pub fn emit_prevalence_matrix(stats: &CorpusStats, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => matrix_json(stats, "prevalence"),
        ReportFormat::Csv => matrix_csv(stats),
        ReportFormat::Markdown => {
            let order = stats.ordering();
            let rows: Vec<Vec<String>> = if stats.is_empty() {
                Vec::new()
            } else {
                order
                    .patterns
                    .iter()
                    .map(|&k| {
                        let mut row = vec![k.id().to_string()];
                        row.extend(order.groups.iter().map(|g| percent(stats.prevalence(g, k))));
                        row.push(percent(stats.overall_prevalence(k)));
                        row
                    })
                    .collect()
            };
            md_table(&matrix_header(&order), &rows)
        }
    }
}

/// Unique students per (group, pattern). Cells above the mean plus two
/// standard deviations are flagged.
pub fn emit_student_matrix(stats: &CorpusStats, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => matrix_json(stats, "students"),
        ReportFormat::Csv => matrix_csv(stats),
        ReportFormat::Markdown => {
            let order = stats.ordering();
            let rows: Vec<Vec<String>> = if stats.is_empty() {
                Vec::new()
            } else {
                order
                    .patterns
                    .iter()
                    .map(|&k| {
                        let mut row = vec![k.id().to_string()];
                        row.extend(order.groups.iter().map(|g| {
                            let n = stats.students(g, k);
                            if stats.above_threshold(g, k) {
                                format!("**{n}**")
                            } else {
                                n.to_string()
                            }
                        }));
                        row.push(stats.unique_students_total(k).to_string());
                        row
                    })
                    .collect()
            };
            let mut out = md_table(&matrix_header(&order), &rows);
            if !stats.is_empty() {
                let _ = writeln!(
                    out,
                    "\nMean {:.1}, SD {:.1}; bold cells exceed {:.1} students.",
                    stats.mean_students(),
                    stats.sd_students(),
                    stats.threshold2sd()
                );
            }
            out
        }
    }
}

/// Overall share of each pattern, largest first.
pub fn totals_bar_data(stats: &CorpusStats) -> Vec<(PatternKind, f64)> {
    let num = |k: PatternKind| -> u64 { stats.groups().map(|g| stats.basis_count(g, k)).sum() };
    let mut kinds = stats.patterns();
    kinds.sort_by(|&a, &b| num(b).cmp(&num(a)).then_with(|| a.id().cmp(b.id())));
    kinds
        .into_iter()
        .map(|k| (k, stats.overall_prevalence(k)))
        .collect()
}

pub fn emit_totals_bar_data(stats: &CorpusStats, format: ReportFormat) -> String {
    let data = if stats.is_empty() {
        Vec::new()
    } else {
        totals_bar_data(stats)
    };
    match format {
        ReportFormat::Json => {
            let rows: Vec<Value> = data
                .iter()
                .map(|(k, p)| json!({ "pattern": k.id(), "proportion": p }))
                .collect();
            to_json(&rows)
        }
        ReportFormat::Csv => csv_text(
            data.iter()
                .map(|(k, p)| vec![k.id().to_string(), p.to_string()]),
            &["pattern", "proportion"],
        ),
        ReportFormat::Markdown => {
            let rows: Vec<Vec<String>> = data
                .iter()
                .map(|(k, p)| vec![k.id().to_string(), percent(*p)])
                .collect();
            md_table(&["Pattern".to_string(), "Share (%)".to_string()], &rows)
        }
    }
}

/// Valid and invalid submission counts per group.
pub fn emit_invalid_tally(stats: &CorpusStats, format: ReportFormat) -> String {
    let order = stats.ordering();
    match format {
        ReportFormat::Json => to_json(&json!({
            "invalid_total": stats.invalid_total(),
            "groups": groups_json(stats, &order),
        })),
        ReportFormat::Csv => csv_text(
            order.groups.iter().map(|g| {
                vec![
                    g.clone(),
                    stats.submissions(g).to_string(),
                    stats.invalid(g).to_string(),
                ]
            }),
            &["group", "valid", "invalid"],
        ),
        ReportFormat::Markdown => {
            let rows: Vec<Vec<String>> = order
                .groups
                .iter()
                .map(|g| {
                    vec![
                        g.clone(),
                        stats.submissions(g).to_string(),
                        stats.invalid(g).to_string(),
                    ]
                })
                .collect();
            md_table(
                &[
                    "Group".to_string(),
                    "Valid".to_string(),
                    "Invalid".to_string(),
                ],
                &rows,
            )
        }
    }
}
