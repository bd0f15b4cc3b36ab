//! Mechanical rewrite suggestions.
//!
//! A suggestion replaces exactly the text covered by its diagnostic's span.
//! The first line of the replacement starts at the span's column; later
//! lines carry their full indentation. Lines outside the span are never
//! touched.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::{
    detect::{common_suffix_len, ChainSite, Diagnostic, PatternKind},
    lexer::{string_interior_lines, tokenize, TokenKind},
    span::{LineIndex, Span},
    syntax::{Expr, ExprKind, IfChain, Stmt},
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RewriteSuggestion {
    /// Text to substitute over the diagnostic span. Absent for patterns that
    /// only get a hint.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replacement: Option<String>,
    pub rationale: String,
}

impl RewriteSuggestion {
    fn rewrite(replacement: String, rationale: &str) -> Self {
        RewriteSuggestion {
            replacement: Some(replacement),
            rationale: rationale.to_string(),
        }
    }

    fn hint(rationale: &str) -> Self {
        RewriteSuggestion {
            replacement: None,
            rationale: rationale.to_string(),
        }
    }
}

/// Build the suggestion for a diagnostic produced on `site`.
pub fn suggest_fix(
    source: &str,
    diagnostic: &Diagnostic,
    site: &ChainSite,
) -> Option<RewriteSuggestion> {
    let text = Text::new(source);
    let chain = site.chain;
    let cond = &chain.branches[0].cond;
    use PatternKind::*;
    let suggestion = match diagnostic.pattern {
        IfElseReturnBool | IfReturnBool => {
            let then = chain.branches[0].body[0].returned_bool()?;
            RewriteSuggestion::rewrite(
                format!("return {}", text.condition_as(cond, then)),
                "Return the condition itself.",
            )
        }
        IfElseAssignBool | IfElseAssignBoolReturn => {
            let (name, then) = assigned_bool(chain)?;
            let mut out = format!("{name} = {}", text.condition_as(cond, then));
            if diagnostic.pattern == IfElseAssignBoolReturn {
                out.push('\n');
                out.push_str(text.indent(chain.span().line_start));
                out.push_str(&format!("return {name}"));
            }
            RewriteSuggestion::rewrite(out, "Assign the condition itself.")
        }
        NestedIf => RewriteSuggestion::rewrite(
            text.merge_nested(chain),
            "Combine the nested conditions with `and`.",
        ),
        ElseIf | ConfusingElse => RewriteSuggestion::rewrite(
            text.flatten(chain, 0),
            "Replace the nested if under else with elif branches.",
        ),
        UnnecessaryElif => {
            let second = chain.branches.get(1)?;
            let start = text.offset(chain.span().start());
            let header_start = text.offset(second.header.start());
            let header_end = text.end_offset(second.header);
            let end = text.end_offset(chain.span());
            RewriteSuggestion::rewrite(
                format!(
                    "{}else:{}",
                    &source[start..header_start],
                    &source[header_end..end]
                ),
                "The elif covers exactly the remaining case; use else.",
            )
        }
        DuplicateIfElseBody | UnnecessaryElse | SeveralDuplicateIfElseStatements
        | DuplicateIfElseStatement => RewriteSuggestion::rewrite(
            text.hoist_suffix(chain)?,
            "Move the statements shared by both branches after the if/else.",
        ),
        EmptyIfBody => RewriteSuggestion::hint(
            "Remove the branch or give it a real body; deleting it is only safe if the body has no side effects.",
        ),
        EmptyElseBody => RewriteSuggestion::hint(
            "Remove the else clause; deleting it is only safe if the body has no side effects.",
        ),
        IfElseAssignReturn => RewriteSuggestion::hint(
            "Return each value directly from its branch instead of assigning it first.",
        ),
    };
    Some(suggestion)
}

/// `source` with `span` replaced by the suggestion text, when there is one.
pub fn apply_suggestion(source: &str, diagnostic: &Diagnostic) -> Option<String> {
    let replacement = diagnostic.suggestion.as_ref()?.replacement.as_ref()?;
    let text = Text::new(source);
    let start = text.offset(diagnostic.span.start());
    let end = text.end_offset(diagnostic.span);
    Some(format!(
        "{}{}{}",
        &source[..start],
        replacement,
        &source[end..]
    ))
}

fn assigned_bool(chain: &IfChain) -> Option<(&str, bool)> {
    match &chain.branches[0].body[0].kind {
        crate::syntax::StmtKind::Assign { target, value } => {
            Some((target.name()?, value.as_bool()?))
        }
        _ => None,
    }
}

struct Text<'a> {
    source: &'a str,
    lines: LineIndex<'a>,
    string_lines: BTreeSet<u32>,
}

impl<'a> Text<'a> {
    fn new(source: &'a str) -> Self {
        let string_lines = tokenize(source)
            .map(|t| string_interior_lines(&t))
            .unwrap_or_default();
        Text {
            source,
            lines: LineIndex::new(source),
            string_lines,
        }
    }

    fn offset(&self, (line, col): (u32, u32)) -> usize {
        self.lines
            .offset(line, col)
            .expect("span lies within the source")
    }

    /// Byte offset just past the last character of `span`.
    fn end_offset(&self, span: Span) -> usize {
        let last = self.offset(span.end());
        last + self.source[last..].chars().next().map_or(0, char::len_utf8)
    }

    fn span_text(&self, span: Span) -> &'a str {
        &self.source[self.offset(span.start())..self.end_offset(span)]
    }

    fn indent(&self, line: u32) -> &'a str {
        self.lines.indent(line)
    }

    /// Source between two byte offsets with up to `by` leading whitespace
    /// characters removed from every line after the first. Lines inside
    /// multi-line strings are left alone.
    fn dedented(&self, start: usize, end: usize, by: usize) -> String {
        let first_line = self.source[..start].matches('\n').count() as u32 + 1;
        let mut out = String::new();
        for (i, piece) in self.source[start..end].split('\n').enumerate() {
            if i == 0 {
                out.push_str(piece);
                continue;
            }
            out.push('\n');
            let line = first_line + i as u32;
            if by == 0 || self.string_lines.contains(&line) {
                out.push_str(piece);
                continue;
            }
            let mut rest = piece;
            for _ in 0..by {
                match rest.strip_prefix([' ', '\t']) {
                    Some(r) => rest = r,
                    None => break,
                }
            }
            out.push_str(rest);
        }
        out
    }

    /// The condition as a standalone expression, negated when `truthy` is
    /// false.
    fn condition_as(&self, cond: &Expr, truthy: bool) -> String {
        if truthy {
            self.plain(cond)
        } else {
            self.negated(cond)
        }
    }

    fn plain(&self, expr: &Expr) -> String {
        let t = self.span_text(expr.span);
        if needs_parens(t, false) {
            format!("({t})")
        } else {
            t.to_string()
        }
    }

    /// Operand of `and`.
    fn conjunct(&self, expr: &Expr) -> String {
        let t = self.span_text(expr.span);
        if needs_parens(t, true) {
            format!("({t})")
        } else {
            t.to_string()
        }
    }

    fn negated(&self, expr: &Expr) -> String {
        match &expr.kind {
            ExprKind::BoolLit(b) => if *b { "False" } else { "True" }.to_string(),
            ExprKind::Not(inner) => self.plain(inner),
            ExprKind::Compare { lhs, op, rhs } => {
                let (l, r) = (self.span_text(lhs.span), self.span_text(rhs.span));
                let out = format!("{l} {} {r}", op.inverse().as_str());
                if out.contains('\n') {
                    format!("({out})")
                } else {
                    out
                }
            }
            ExprKind::Name(n) => format!("not {n}"),
            ExprKind::Opaque => format!("not ({})", self.span_text(expr.span)),
        }
    }

    /// `if a: if b: ... body` becomes `if a and b: body`, through every level
    /// of directly nested lone ifs.
    fn merge_nested(&self, chain: &IfChain) -> String {
        let outer_col = chain.span().col_start;
        let mut conds = vec![self.conjunct(&chain.branches[0].cond)];
        let mut innermost = chain;
        while let [only] = &innermost.branches[0].body[..] {
            match only.as_if() {
                Some(inner) if inner.is_lone_if() => {
                    conds.push(self.conjunct(&inner.branches[0].cond));
                    innermost = inner;
                }
                _ => break,
            }
        }
        let branch = &innermost.branches[0];
        let body = &branch.body;
        let first = body.first().expect("bodies are non-empty").span;
        let last = body.last().unwrap().span;
        let mut out = format!("if {}:", conds.join(" and "));
        if first.line_start == branch.header.line_end {
            out.push(' ');
            out.push_str(&self.source[self.offset(first.start())..self.end_offset(last)]);
        } else {
            let dedent = (innermost.span().col_start - outer_col) as usize;
            let line_start = self.offset((first.line_start, 1));
            out.push('\n');
            // The block starts at column 1, so its first line is dedented here.
            let block = self.dedented(line_start, self.end_offset(last), dedent);
            let first_line = block.split('\n').next().unwrap_or_default();
            let mut rest = first_line;
            for _ in 0..dedent {
                match rest.strip_prefix([' ', '\t']) {
                    Some(r) => rest = r,
                    None => break,
                }
            }
            out.push_str(rest);
            out.push_str(&block[first_line.len()..]);
        }
        out
    }

    /// Text of `chain` with every `else:` whose body is a single if chain
    /// turned into `elif` branches. `dedent` is how far this chain moves left.
    fn flatten(&self, chain: &IfChain, dedent: usize) -> String {
        let span = chain.span();
        let start = self.offset(span.start());
        match (chain.sole_else_chain(), &chain.else_clause) {
            (Some(inner), Some(clause)) => {
                let else_start = self.offset(clause.span.start());
                let mut out = self.dedented(start, else_start, dedent);
                let inner_dedent = dedent + (inner.span().col_start - span.col_start) as usize;
                out.push_str("el");
                out.push_str(&self.flatten(inner, inner_dedent));
                out
            }
            _ => self.dedented(start, self.end_offset(span), dedent),
        }
    }

    /// Statements re-placed at the chain's own indentation, one per line.
    fn at_chain_level(&self, stmts: &[Stmt], chain_col: u32, base: &str) -> String {
        stmts
            .iter()
            .map(|s| {
                self.dedented(
                    self.offset(s.span.start()),
                    self.end_offset(s.span),
                    s.span.col_start.saturating_sub(chain_col) as usize,
                )
            })
            .collect::<Vec<_>>()
            .join(&format!("\n{base}"))
    }

    /// Statements that stay under a header on `header_line`, in their
    /// original layout.
    fn suite(&self, stmts: &[Stmt], header_line: u32) -> String {
        let mut out = String::new();
        let mut prev_line = header_line;
        for (i, s) in stmts.iter().enumerate() {
            if s.span.line_start == prev_line {
                out.push_str(if i == 0 { " " } else { "; " });
            } else {
                out.push('\n');
                out.push_str(self.indent(s.span.line_start));
            }
            out.push_str(self.span_text(s.span));
            prev_line = s.span.line_end;
        }
        out
    }

    fn hoist_suffix(&self, chain: &IfChain) -> Option<String> {
        let branch = &chain.branches[0];
        let clause = chain.else_clause.as_ref()?;
        let (then, other) = (&branch.body, &clause.body);
        let k = common_suffix_len(then, other);
        if k == 0 {
            return None;
        }
        let col = chain.span().col_start;
        let base = self.indent(chain.span().line_start);
        let then_prefix = &then[..then.len() - k];
        let other_prefix = &other[..other.len() - k];
        let mut out = String::new();
        let suffix = match (then_prefix.is_empty(), other_prefix.is_empty()) {
            (true, true) => &then[..],
            (false, true) => {
                out.push_str(self.span_text(branch.header));
                out.push_str(&self.suite(then_prefix, branch.header.line_end));
                &then[then_prefix.len()..]
            }
            (true, false) => {
                out.push_str(&format!("if {}:", self.negated(&branch.cond)));
                out.push_str(&self.suite(other_prefix, clause.header.line_end));
                &other[other_prefix.len()..]
            }
            (false, false) => {
                out.push_str(self.span_text(branch.header));
                out.push_str(&self.suite(then_prefix, branch.header.line_end));
                out.push('\n');
                out.push_str(base);
                out.push_str("else:");
                out.push_str(&self.suite(other_prefix, clause.header.line_end));
                &then[then_prefix.len()..]
            }
        };
        if !out.is_empty() {
            out.push('\n');
            out.push_str(base);
        }
        out.push_str(&self.at_chain_level(suffix, col, base));
        Some(out)
    }
}

/// Whether an expression's text must be parenthesized to be used on its
/// own (`conjunct = false`) or as an operand of `and`.
fn needs_parens(text: &str, conjunct: bool) -> bool {
    if text.contains('\n') {
        return true;
    }
    let Ok(tokens) = tokenize(text) else {
        return true;
    };
    let mut depth = 0i32;
    for t in tokens.iter().filter(|t| !t.is_layout()) {
        match (t.kind, t.text.as_str()) {
            (TokenKind::Op, "(" | "[" | "{") => depth += 1,
            (TokenKind::Op, ")" | "]" | "}") => depth -= 1,
            _ if depth > 0 => {}
            (TokenKind::Op, ":=" | ",") => return true,
            (TokenKind::Name, "lambda" | "yield") => return true,
            (TokenKind::Name, "or" | "if") if conjunct => return true,
            _ => {}
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{detect::detect_all, syntax::parse_module};

    fn fixes(src: &str) -> Vec<(PatternKind, Option<String>)> {
        let m = parse_module(src, "t.py");
        assert!(m.is_valid(), "{:?}", m.parse_errors);
        detect_all(&m)
            .unwrap()
            .into_iter()
            .map(|d| (d.pattern, d.suggestion.and_then(|s| s.replacement)))
            .collect()
    }

    fn only_fix(src: &str) -> String {
        let f = fixes(src);
        assert_eq!(f.len(), 1, "{f:?}");
        f[0].1.clone().expect("a replacement")
    }

    #[test]
    fn return_bool() {
        assert_eq!(
            only_fix("if c:\n    return True\nelse:\n    return False\n"),
            "return c"
        );
        assert_eq!(
            only_fix("if(cond):\n    return False\nelse:\n    return True\n"),
            "return not cond"
        );
        assert_eq!(
            only_fix("if x > 0:\n    return False\nreturn True\n"),
            "return x <= 0"
        );
        assert_eq!(
            only_fix("if a or b:\n    return False\nreturn True\n"),
            "return not (a or b)"
        );
        assert_eq!(
            only_fix("if not(a):\n    return False\nreturn True\n"),
            "return a"
        );
        assert_eq!(
            only_fix("if (y := f()):\n    return True\nreturn False\n"),
            "return (y := f())"
        );
    }

    #[test]
    fn assign_bool() {
        assert_eq!(
            only_fix("def f(c):\n    if c:\n        name = True\n    else:\n        name = False\n    return name\n"),
            "name = c\n    return name"
        );
        assert_eq!(
            only_fix("if c:\n    name = False\nelse:\n    name = True\n"),
            "name = not c"
        );
    }

    #[test]
    fn nested_merge() {
        assert_eq!(
            only_fix("if(cond):\n    if(cond2):\n        a += 1\n"),
            "if cond and cond2:\n    a += 1"
        );
        let f = fixes("if a or b:\n    if c:\n        if d: x()\n");
        assert_eq!(f[0].1.as_deref(), Some("if (a or b) and c and d: x()"));
    }

    #[test]
    fn flatten_else_if() {
        let src = "if a:\n    x()\nelse:\n    if b:\n        y()\n    else:\n        if c:\n            z()\n";
        let f = fixes(src);
        assert_eq!(f[0].0, PatternKind::ConfusingElse);
        assert_eq!(
            f[0].1.as_deref(),
            Some("if a:\n    x()\nelif b:\n    y()\nelif c:\n    z()")
        );
    }

    #[test]
    fn unnecessary_elif_to_else() {
        assert_eq!(
            only_fix("if cond:\n    cond += 1\nelif(not(cond)):\n    print(cond)\n"),
            "if cond:\n    cond += 1\nelse:\n    print(cond)"
        );
    }

    #[test]
    fn worked_example() {
        let src = "def get_last_letter_dictionary(sentence1):\n  sentence1 = sentence1.lower()\n  dict1 = {}\n  words = list(set(sentence1.split()))\n  for i in words:\n    if dict1.get(i[-1]):\n      dict1[i[-1]].append(i)\n    else:\n      dict1[i[-1]] = []\n      dict1[i[-1]].append(i)\n  return dict1\n";
        assert_eq!(
            only_fix(src),
            "if not (dict1.get(i[-1])):\n      dict1[i[-1]] = []\n    dict1[i[-1]].append(i)"
        );
    }

    #[test]
    fn hoisting() {
        assert_eq!(only_fix("if c:\n    b += 1\nelse:\n    b += 1\n"), "b += 1");
        assert_eq!(
            only_fix("if c:\n    a += 1\n    b += 1\nelse:\n    c += 1\n    b += 1\n"),
            "if c:\n    a += 1\nelse:\n    c += 1\nb += 1"
        );
        assert_eq!(
            only_fix("if c: a += 1; b += 1\nelse: b += 1\n"),
            "if c: a += 1\nb += 1"
        );
    }

    #[test]
    fn multiline_string_untouched() {
        let src = "if c:\n    if d:\n        s = '''\n  keep\n'''\n";
        assert_eq!(only_fix(src), "if c and d:\n    s = '''\n  keep\n'''");
    }

    #[test]
    fn hints_only() {
        for src in ["if c:\n    pass\n", "if c:\n    x = 1\nelse:\n    pass\n"] {
            let f = fixes(src);
            assert_eq!(f.len(), 1);
            assert_eq!(f[0].1, None);
        }
    }
}
