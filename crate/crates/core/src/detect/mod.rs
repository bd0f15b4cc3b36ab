//! The fifteen conditional-statement anti-patterns and the driver that
//! applies them to a parsed module.
//!
//! Two groups of rules overlap on plain if/else statements and are resolved
//! most-specific-first so each construct is reported once per group:
//!
//! * duplication: duplicate body > unnecessary else > several duplicate
//!   statements > duplicate statement;
//! * assignment: assign-bool-return > assign-bool > assign-return.
//!
//! All other rules are independent and may fire on the same chain.

pub mod helpers;
pub mod rules;

use std::{fmt, path::PathBuf, str::FromStr};

use serde::{Deserialize, Serialize};

use crate::{
    error::{Error, Result},
    fix::{suggest_fix, RewriteSuggestion},
    span::Span,
    syntax::{ParsedModule, Stmt},
};
pub use helpers::{common_suffix_len, is_nonfunctional, negates, stmt_equal};
pub use rules::ChainSite;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PatternKind {
    IfElseReturnBool,
    ConfusingElse,
    NestedIf,
    DuplicateIfElseStatement,
    IfReturnBool,
    EmptyIfBody,
    UnnecessaryElif,
    ElseIf,
    EmptyElseBody,
    UnnecessaryElse,
    SeveralDuplicateIfElseStatements,
    IfElseAssignReturn,
    DuplicateIfElseBody,
    IfElseAssignBool,
    IfElseAssignBoolReturn,
}

impl PatternKind {
    pub const ALL: [PatternKind; 15] = [
        PatternKind::IfElseReturnBool,
        PatternKind::ConfusingElse,
        PatternKind::NestedIf,
        PatternKind::DuplicateIfElseStatement,
        PatternKind::IfReturnBool,
        PatternKind::EmptyIfBody,
        PatternKind::UnnecessaryElif,
        PatternKind::ElseIf,
        PatternKind::EmptyElseBody,
        PatternKind::UnnecessaryElse,
        PatternKind::SeveralDuplicateIfElseStatements,
        PatternKind::IfElseAssignReturn,
        PatternKind::DuplicateIfElseBody,
        PatternKind::IfElseAssignBool,
        PatternKind::IfElseAssignBoolReturn,
    ];

    /// Stable identifier used in reports and on the command line.
    pub fn id(self) -> &'static str {
        use PatternKind::*;
        match self {
            IfElseReturnBool => "if_else_return_bool",
            ConfusingElse => "confusing_else",
            NestedIf => "nested_if",
            DuplicateIfElseStatement => "duplicate_if_else_statement",
            IfReturnBool => "if_return_bool",
            EmptyIfBody => "empty_if_body",
            UnnecessaryElif => "unnecessary_elif",
            ElseIf => "else_if",
            EmptyElseBody => "empty_else_body",
            UnnecessaryElse => "unnecessary_else",
            SeveralDuplicateIfElseStatements => "several_duplicate_if_else_statements",
            IfElseAssignReturn => "if_else_assign_return",
            DuplicateIfElseBody => "duplicate_if_else_body",
            IfElseAssignBool => "if_else_assign_bool",
            IfElseAssignBoolReturn => "if_else_assign_bool_return",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn message(self) -> &'static str {
        use PatternKind::*;
        match self {
            IfElseReturnBool => {
                "The if and else branches return opposite booleans; return the condition instead."
            }
            ConfusingElse => {
                "The else body holds only a nested if/else; flatten it into elif branches."
            }
            NestedIf => "The if body holds only another if; combine the conditions with `and`.",
            DuplicateIfElseStatement => {
                "The if and else bodies end with the same statement; move it after the if/else."
            }
            IfReturnBool => {
                "The if returns a boolean and the next statement returns its opposite; return the condition instead."
            }
            EmptyIfBody => "The if body does nothing (only `pass` or self-assignment).",
            UnnecessaryElif => "The elif condition is the negation of the if condition; use else.",
            ElseIf => "The else body holds only an if; use elif.",
            EmptyElseBody => "The else body does nothing (only `pass` or self-assignment).",
            UnnecessaryElse => {
                "One branch is entirely repeated at the end of the other; the else can be removed."
            }
            SeveralDuplicateIfElseStatements => {
                "The if and else bodies end with several identical statements; move them after the if/else."
            }
            IfElseAssignReturn => {
                "Both branches assign a variable that is returned immediately; return the values directly."
            }
            DuplicateIfElseBody => {
                "The if and else bodies are identical; the condition has no effect."
            }
            IfElseAssignBool => {
                "Both branches assign opposite booleans; assign the condition instead."
            }
            IfElseAssignBoolReturn => {
                "Both branches assign opposite booleans that are returned immediately; return the condition instead."
            }
        }
    }
}

impl fmt::Display for PatternKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for PatternKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PatternKind::ALL
            .into_iter()
            .find(|p| p.id() == s)
            .ok_or_else(|| Error::UnknownPattern(s.to_string()))
    }
}

/// A subset of the patterns.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct PatternSet(u16);

impl PatternSet {
    pub fn all() -> Self {
        PatternSet((1 << PatternKind::ALL.len()) - 1)
    }

    pub fn empty() -> Self {
        PatternSet(0)
    }

    pub fn insert(&mut self, p: PatternKind) {
        self.0 |= 1 << p.index();
    }

    pub fn contains(&self, p: PatternKind) -> bool {
        self.0 & (1 << p.index()) != 0
    }

    /// Parse a comma-separated list of identifiers.
    pub fn parse_list(list: &str) -> Result<Self> {
        let mut set = PatternSet::empty();
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            set.insert(item.parse()?);
        }
        Ok(set)
    }
}

impl Default for PatternSet {
    fn default() -> Self {
        PatternSet::all()
    }
}

impl FromIterator<PatternKind> for PatternSet {
    fn from_iter<I: IntoIterator<Item = PatternKind>>(iter: I) -> Self {
        let mut set = PatternSet::empty();
        for p in iter {
            set.insert(p);
        }
        set
    }
}

/// One detected anti-pattern occurrence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub file: PathBuf,
    pub pattern: PatternKind,
    pub span: Span,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suggestion: Option<RewriteSuggestion>,
}

impl Diagnostic {
    pub fn new(pattern: PatternKind, span: Span) -> Self {
        Diagnostic {
            file: PathBuf::new(),
            pattern,
            span,
            message: pattern.message().to_string(),
            suggestion: None,
        }
    }

    /// Report order: file, position, then pattern.
    pub fn sort_key(&self) -> (&std::path::Path, Span, PatternKind) {
        (&self.file, self.span, self.pattern)
    }
}

#[derive(Copy, Clone, Debug)]
pub struct DetectOptions {
    pub suggestions: bool,
    pub patterns: PatternSet,
}

impl Default for DetectOptions {
    fn default() -> Self {
        DetectOptions {
            suggestions: true,
            patterns: PatternSet::all(),
        }
    }
}

/// Apply every rule to one chain.
pub fn detect_chain(site: &ChainSite) -> Vec<Diagnostic> {
    use rules::*;
    let mut out = Vec::new();
    out.extend(detect_if_else_return_bool(site));
    out.extend(detect_if_return_bool(site));
    out.extend(detect_confusing_else(site));
    out.extend(detect_else_if(site));
    out.extend(detect_nested_if(site));
    out.extend(detect_empty_if_body(site));
    out.extend(detect_empty_else_body(site));
    out.extend(detect_unnecessary_elif(site));
    out.extend(detect_duplication_family(site));
    out.extend(detect_assign_family(site));
    out
}

/// Run all rules over every if chain in the module, with suggestions.
pub fn detect_all(module: &ParsedModule) -> Result<Vec<Diagnostic>> {
    detect_all_with(module, &DetectOptions::default())
}

pub fn detect_all_with(module: &ParsedModule, options: &DetectOptions) -> Result<Vec<Diagnostic>> {
    if !module.is_valid() {
        return Err(Error::InvalidModule {
            path: module.path.clone(),
        });
    }
    let mut out = Vec::new();
    walk(module, &module.body, options, &mut out);
    out.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    Ok(out)
}

fn walk(module: &ParsedModule, body: &[Stmt], options: &DetectOptions, out: &mut Vec<Diagnostic>) {
    for (i, stmt) in body.iter().enumerate() {
        if let Some(chain) = stmt.as_if() {
            let site = ChainSite::new(chain, body.get(i + 1));
            for mut diag in detect_chain(&site) {
                if !options.patterns.contains(diag.pattern) {
                    continue;
                }
                diag.file = module.path.clone();
                if options.suggestions {
                    diag.suggestion = suggest_fix(&module.source, &diag, &site);
                }
                out.push(diag);
            }
        }
        for nested in stmt.bodies() {
            walk(module, nested, options, out);
        }
    }
}
