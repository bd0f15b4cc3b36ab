use crate::{
    fingerprint::{fingerprint, strip_outer_parens, Fingerprint},
    lexer::{is_keyword, Token, TokenKind},
    span::Span,
};

use super::{CompareOp, Expr, ExprKind, Operand};

/// Shallow expression parse of a non-empty token range.
pub fn parse_expr(tokens: &[Token]) -> Expr {
    let tokens = strip_outer_parens(tokens);
    assert!(!tokens.is_empty(), "parse_expr on an empty range");
    let span = range_span(tokens);
    let opaque = || Expr {
        kind: ExprKind::Opaque,
        span,
        fp: fingerprint(tokens),
    };

    if let [single] = tokens {
        return match (single.kind, single.text.as_str()) {
            (TokenKind::Name, "True") => bool_lit(true, span),
            (TokenKind::Name, "False") => bool_lit(false, span),
            (TokenKind::Name, name) if !is_keyword(name) => Expr {
                kind: ExprKind::Name(name.to_string()),
                span,
                fp: Fingerprint::from_canon(name.to_string()),
            },
            _ => opaque(),
        };
    }

    if has_loose_operator(tokens) {
        return opaque();
    }

    if tokens[0].is_name("not") {
        let inner = parse_expr(&tokens[1..]);
        let fp = Fingerprint::from_canon(format!("not {}", inner.fp));
        return Expr {
            kind: ExprKind::Not(Box::new(inner)),
            span,
            fp,
        };
    }

    let comparisons = find_comparisons(tokens);
    if let [(start, len, op)] = comparisons[..] {
        let (lhs, rhs) = (&tokens[..start], &tokens[start + len..]);
        if !lhs.is_empty() && !rhs.is_empty() {
            let lhs = operand(lhs);
            let rhs = operand(rhs);
            let fp = Fingerprint::from_canon(format!("{} {} {}", lhs.fp, op.as_str(), rhs.fp));
            return Expr {
                kind: ExprKind::Compare { lhs, op, rhs },
                span,
                fp,
            };
        }
    }
    opaque()
}

fn bool_lit(value: bool, span: Span) -> Expr {
    Expr {
        kind: ExprKind::BoolLit(value),
        span,
        fp: Fingerprint::from_canon(if value { "True" } else { "False" }.to_string()),
    }
}

fn operand(tokens: &[Token]) -> Operand {
    Operand {
        fp: fingerprint(strip_outer_parens(tokens)),
        span: range_span(tokens),
    }
}

pub(crate) fn range_span(tokens: &[Token]) -> Span {
    let first = tokens.first().expect("non-empty range").span;
    let last = tokens.last().expect("non-empty range").span;
    first.join(last)
}

/// Iterate `(index, token)` over tokens outside any bracket.
pub(crate) fn top_level(tokens: &[Token]) -> impl Iterator<Item = (usize, &Token)> {
    let mut depth = 0i32;
    tokens.iter().enumerate().filter(move |(_, t)| {
        let was = depth;
        if t.kind == TokenKind::Op {
            match t.text.as_str() {
                "(" | "[" | "{" => depth += 1,
                ")" | "]" | "}" => depth -= 1,
                _ => {}
            }
        }
        was == 0 && depth == 0
    })
}

/// Operators binding looser than `not`, which would make a leading `not`
/// or a comparison only part of the expression.
fn has_loose_operator(tokens: &[Token]) -> bool {
    top_level(tokens).any(|(_, t)| match t.kind {
        TokenKind::Name => matches!(
            t.text.as_str(),
            "and" | "or" | "if" | "else" | "lambda" | "yield" | "for" | "async"
        ),
        TokenKind::Op => matches!(t.text.as_str(), ":=" | "," | ":" | "=" | ";"),
        _ => false,
    })
}

/// Top-level comparison operators as `(start index, token count, op)`.
fn find_comparisons(tokens: &[Token]) -> Vec<(usize, usize, CompareOp)> {
    let top: Vec<(usize, &Token)> = top_level(tokens).collect();
    let mut found = Vec::new();
    let mut k = 0;
    while k < top.len() {
        let (i, t) = top[k];
        let next = top.get(k + 1).filter(|(j, _)| *j == i + 1).map(|(_, t)| *t);
        let op = match (t.kind, t.text.as_str()) {
            (TokenKind::Op, "==") => Some((1, CompareOp::Eq)),
            (TokenKind::Op, "!=") => Some((1, CompareOp::NotEq)),
            (TokenKind::Op, "<") => Some((1, CompareOp::Lt)),
            (TokenKind::Op, "<=") => Some((1, CompareOp::LtE)),
            (TokenKind::Op, ">") => Some((1, CompareOp::Gt)),
            (TokenKind::Op, ">=") => Some((1, CompareOp::GtE)),
            (TokenKind::Name, "is") if next.is_some_and(|n| n.is_name("not")) => {
                Some((2, CompareOp::IsNot))
            }
            (TokenKind::Name, "is") => Some((1, CompareOp::Is)),
            (TokenKind::Name, "not") if next.is_some_and(|n| n.is_name("in")) => {
                Some((2, CompareOp::NotIn))
            }
            (TokenKind::Name, "in") => Some((1, CompareOp::In)),
            _ => None,
        };
        match op {
            Some((len, op)) => {
                found.push((i, len, op));
                k += len;
            }
            None => k += 1,
        }
    }
    found
}
