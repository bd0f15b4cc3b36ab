use std::path::PathBuf;

use crate::{
    fingerprint::{fingerprint, Fingerprint},
    lexer::{count_lloc, tokenize, ParseError, Token, TokenKind},
    span::Span,
};

use super::{
    expr::{parse_expr, range_span, top_level},
    AssignTarget, Branch, ElseClause, IfChain, ParsedModule, Stmt, StmtKind,
};

const AUG_OPS: &[&str] = &[
    "+=", "-=", "*=", "/=", "//=", "%=", "**=", ">>=", "<<=", "&=", "^=", "|=", "@=",
];

/// Parse Python source into the conditional IR.
pub fn parse_module(source: &str, path: impl Into<PathBuf>) -> ParsedModule {
    let path = path.into();
    let lloc = count_lloc(source);
    let (body, parse_errors) = match tokenize(source) {
        Ok(tokens) => {
            let mut parser = Parser {
                tokens,
                pos: 0,
                errors: Vec::new(),
            };
            let body = parser.block(true);
            (body, parser.errors)
        }
        Err(e) => (Vec::new(), vec![e]),
    };
    ParsedModule {
        path,
        source: source.to_string(),
        body,
        lloc,
        parse_errors,
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    errors: Vec<ParseError>,
}

/// A parsed `header: body` clause.
struct Clause {
    keyword: Span,
    header_tokens: std::ops::Range<usize>,
    header_end: Span,
    body: Vec<Stmt>,
    end: Span,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn error(&mut self, span: Span, message: impl Into<String>) {
        self.errors.push(ParseError::new(span, message));
    }

    /// Statements up to the closing `Dedent` (consumed) or end of input.
    fn block(&mut self, top: bool) -> Vec<Stmt> {
        let mut body = Vec::new();
        while let Some(tok) = self.peek() {
            match tok.kind {
                TokenKind::Dedent => {
                    if top {
                        // Unreachable with a consistent lexer; skip defensively.
                        self.pos += 1;
                        continue;
                    }
                    self.pos += 1;
                    return body;
                }
                TokenKind::Indent => {
                    let span = tok.span;
                    self.error(span, "unexpected indent");
                    self.pos += 1;
                    let nested = self.block(false);
                    body.extend(nested);
                }
                TokenKind::Newline => self.pos += 1,
                _ => body.extend(self.statement()),
            }
        }
        body
    }

    /// Index of the `Newline` closing the logical line that starts at `from`.
    fn line_end(&self, from: usize) -> usize {
        self.tokens[from..]
            .iter()
            .position(|t| t.kind == TokenKind::Newline)
            .map(|p| from + p)
            .unwrap_or(self.tokens.len())
    }

    fn statement(&mut self) -> Vec<Stmt> {
        let start = self.pos;
        let end = self.line_end(start);
        let first = &self.tokens[start];
        if first.kind == TokenKind::Name {
            match first.text.as_str() {
                "if" => return vec![self.if_chain()],
                "for" | "while" => return vec![self.compound(&["else"])],
                "try" => return vec![self.compound(&["except", "else", "finally"])],
                "def" | "class" | "with" => return vec![self.compound(&[])],
                "async"
                    if self
                        .tokens
                        .get(start + 1)
                        .is_some_and(|t| matches!(t.text.as_str(), "def" | "for" | "with")) =>
                {
                    let cont: &[&str] = if self.tokens[start + 1].text == "for" {
                        &["else"]
                    } else {
                        &[]
                    };
                    return vec![self.compound(cont)];
                }
                "match" | "case" if self.is_soft_keyword_header(start, end) => {
                    return vec![self.compound(&[])]
                }
                "elif" | "else" | "except" | "finally" => {
                    let span = first.span;
                    let text = first.text.clone();
                    self.error(span, format!("'{text}' without a matching statement"));
                    return self.skip_clause();
                }
                _ => {}
            }
        }
        let stmts = self.simple_statements(start, end);
        self.pos = (end + 1).min(self.tokens.len());
        stmts
    }

    fn is_soft_keyword_header(&self, start: usize, end: usize) -> bool {
        let Some(next) = self.tokens.get(start + 1).filter(|_| start + 1 < end) else {
            return false;
        };
        let starts_expr = match next.kind {
            TokenKind::Op => matches!(next.text.as_str(), "(" | "[" | "{" | "-" | "*" | "~"),
            _ => true,
        };
        starts_expr && self.header_colon(start, end).is_some()
    }

    /// Skip a malformed clause and any block that belongs to it.
    fn skip_clause(&mut self) -> Vec<Stmt> {
        let end = self.line_end(self.pos);
        self.pos = (end + 1).min(self.tokens.len());
        if self.peek().is_some_and(|t| t.kind == TokenKind::Indent) {
            self.pos += 1;
            self.block(false);
        }
        Vec::new()
    }

    /// First top-level `:` of a header, skipping colons that belong to
    /// `lambda` expressions.
    fn header_colon(&self, start: usize, end: usize) -> Option<usize> {
        let mut lambdas = 0usize;
        for (i, t) in top_level(&self.tokens[start..end]) {
            if t.is_name("lambda") {
                lambdas += 1;
            } else if t.is_op(":") {
                if lambdas == 0 {
                    return Some(start + i);
                }
                lambdas -= 1;
            }
        }
        None
    }

    /// Parse `keyword ...: suite` at the current position.
    fn clause(&mut self) -> Option<Clause> {
        let start = self.pos;
        let end = self.line_end(start);
        let keyword = self.tokens[start].span;
        let Some(colon) = self.header_colon(start, end) else {
            let last = self.tokens[start..end].last().map_or(keyword, |t| t.span);
            self.error(keyword.join(last), "expected ':'");
            self.skip_clause();
            return None;
        };
        let header_end = self.tokens[colon].span;
        let body = self.suite(colon, end);
        let end_span = body.last().map_or(header_end, |s| s.span);
        Some(Clause {
            keyword,
            header_tokens: start..colon,
            header_end,
            body,
            end: end_span,
        })
    }

    /// The statements after a header colon: inline simple statements or an
    /// indented block.
    fn suite(&mut self, colon: usize, end: usize) -> Vec<Stmt> {
        if colon + 1 < end {
            let first = &self.tokens[colon + 1];
            if first.kind == TokenKind::Name
                && matches!(
                    first.text.as_str(),
                    "if" | "elif" | "else" | "for" | "while" | "def" | "class" | "try" | "with"
                )
            {
                let span = first.span;
                self.error(
                    span,
                    "compound statement cannot follow ':' on the same line",
                );
            }
            let stmts = self.simple_statements(colon + 1, end);
            self.pos = (end + 1).min(self.tokens.len());
            return stmts;
        }
        self.pos = (end + 1).min(self.tokens.len());
        match self.peek() {
            Some(t) if t.kind == TokenKind::Indent => {
                self.pos += 1;
                self.block(false)
            }
            _ => {
                let span = self.tokens[colon].span;
                self.error(span, "expected an indented block");
                Vec::new()
            }
        }
    }

    fn if_chain(&mut self) -> Stmt {
        let mut branches = Vec::new();
        let mut else_clause = None;
        let mut fp = String::new();
        loop {
            let is_elif = !branches.is_empty();
            let Some(clause) = self.clause() else { break };
            let cond_tokens =
                &self.tokens[clause.header_tokens.start + 1..clause.header_tokens.end];
            let cond = if cond_tokens.is_empty() {
                self.error(clause.keyword, "expected a condition");
                parse_expr(std::slice::from_ref(
                    &self.tokens[clause.header_tokens.start],
                ))
            } else {
                parse_expr(cond_tokens)
            };
            if !fp.is_empty() {
                fp.push(' ');
            }
            fp.push_str(&format!(
                "{} {} : {}",
                if is_elif { "elif" } else { "if" },
                cond.fp,
                block_fp(&clause.body)
            ));
            branches.push(Branch {
                cond,
                span: clause.keyword.join(clause.end),
                header: clause.keyword.join(clause.header_end),
                body: clause.body,
                is_elif,
            });
            match self.peek() {
                Some(t) if t.is_name("elif") => continue,
                Some(t) if t.is_name("else") => {
                    let else_tok = self.pos;
                    let Some(clause) = self.clause() else { break };
                    if clause.header_tokens.len() != 1 {
                        let span = self.tokens[else_tok].span.join(clause.header_end);
                        self.error(span, "invalid syntax after 'else'");
                    }
                    fp.push_str(&format!(" else : {}", block_fp(&clause.body)));
                    else_clause = Some(ElseClause {
                        span: clause.keyword.join(clause.end),
                        header: clause.keyword.join(clause.header_end),
                        body: clause.body,
                    });
                    break;
                }
                _ => break,
            }
        }
        if branches.is_empty() {
            // Header without a colon; the error is recorded already.
            return Stmt {
                kind: StmtKind::OpaqueSimple,
                span: self.tokens[self.pos.saturating_sub(1)].span,
                fp: Fingerprint::from_canon(String::new()),
            };
        }
        let chain = IfChain {
            branches,
            else_clause,
        };
        Stmt {
            span: chain.span(),
            kind: StmtKind::If(chain),
            fp: Fingerprint::from_canon(fp),
        }
    }

    /// Any non-`if` compound statement; `continuations` lists the clause
    /// keywords that may follow the first clause.
    fn compound(&mut self, continuations: &[&str]) -> Stmt {
        let mut bodies = Vec::new();
        let mut fp = String::new();
        let mut header = None;
        let mut span: Option<Span> = None;
        while let Some(clause) = self.clause() {
            let header_fp = fingerprint(&self.tokens[clause.header_tokens.clone()]);
            if !fp.is_empty() {
                fp.push(' ');
            }
            fp.push_str(&format!("{header_fp} : {}", block_fp(&clause.body)));
            header.get_or_insert(header_fp);
            let clause_span = clause.keyword.join(clause.end);
            span = Some(span.map_or(clause_span, |s| s.join(clause_span)));
            bodies.push(clause.body);
            match self.peek() {
                Some(t)
                    if t.kind == TokenKind::Name && continuations.contains(&t.text.as_str()) =>
                {
                    continue
                }
                _ => break,
            }
        }
        let span = span.unwrap_or_else(|| self.tokens[self.pos.saturating_sub(1)].span);
        Stmt {
            kind: StmtKind::OpaqueCompound {
                header: header.unwrap_or_else(|| Fingerprint::from_canon(String::new())),
                bodies,
            },
            span,
            fp: Fingerprint::from_canon(fp),
        }
    }

    /// `;`-separated simple statements in `tokens[start..end]`.
    fn simple_statements(&mut self, start: usize, end: usize) -> Vec<Stmt> {
        let mut stmts = Vec::new();
        let mut piece_start = start;
        let separators: Vec<usize> = top_level(&self.tokens[start..end])
            .filter(|(_, t)| t.is_op(";"))
            .map(|(i, _)| start + i)
            .chain(std::iter::once(end))
            .collect();
        for sep in separators {
            if sep > piece_start {
                let tokens = self.tokens[piece_start..sep].to_vec();
                stmts.push(self.simple(&tokens));
            } else if sep < end {
                let span = self.tokens[sep].span;
                self.error(span, "invalid syntax");
            }
            piece_start = sep + 1;
        }
        stmts
    }

    fn simple(&mut self, tokens: &[Token]) -> Stmt {
        let span = range_span(tokens);
        let first = &tokens[0];
        if first.kind == TokenKind::Op
            && !matches!(
                first.text.as_str(),
                "(" | "[" | "{" | "-" | "+" | "~" | "*" | "@" | "..."
            )
        {
            self.error(first.span, "invalid syntax");
        }
        if first.is_name("pass") && tokens.len() == 1 {
            return Stmt {
                kind: StmtKind::Pass,
                span,
                fp: Fingerprint::from_canon("pass".into()),
            };
        }
        if first.is_name("return") {
            let value = (tokens.len() > 1).then(|| parse_expr(&tokens[1..]));
            let fp = match &value {
                Some(v) => format!("return {}", v.fp),
                None => "return".to_string(),
            };
            return Stmt {
                kind: StmtKind::Return(value),
                span,
                fp: Fingerprint::from_canon(fp),
            };
        }

        let top: Vec<(usize, &Token)> = top_level(tokens).collect();
        let assigns: Vec<usize> = top
            .iter()
            .filter(|(_, t)| t.is_op("="))
            .map(|(i, _)| *i)
            .collect();
        let annotated = top
            .iter()
            .any(|(i, t)| t.is_op(":") && assigns.first().is_none_or(|a| i < a));
        if let [eq] = assigns[..] {
            let (lhs, rhs) = (&tokens[..eq], &tokens[eq + 1..]);
            if lhs.is_empty() || rhs.is_empty() {
                self.error(span, "invalid assignment");
            } else if !annotated && !first.is_name("lambda") {
                let target = match lhs {
                    [t] if t.kind == TokenKind::Name && !crate::lexer::is_keyword(&t.text) => {
                        AssignTarget::Name(t.text.clone())
                    }
                    _ => AssignTarget::Opaque(fingerprint(lhs)),
                };
                let value = parse_expr(rhs);
                let fp = format!("{} = {}", target.fp(), value.fp);
                return Stmt {
                    kind: StmtKind::Assign { target, value },
                    span,
                    fp: Fingerprint::from_canon(fp),
                };
            }
        }
        if let Some(&(i, op)) = top
            .iter()
            .find(|(_, t)| t.kind == TokenKind::Op && AUG_OPS.contains(&t.text.as_str()))
        {
            let (lhs, rhs) = (&tokens[..i], &tokens[i + 1..]);
            if lhs.is_empty() || rhs.is_empty() {
                self.error(span, "invalid augmented assignment");
            } else {
                let target = fingerprint(lhs);
                let value = fingerprint(rhs);
                let fp = format!("{target} {} {value}", op.text);
                return Stmt {
                    kind: StmtKind::AugAssign {
                        target,
                        op: op.text.clone(),
                        value,
                    },
                    span,
                    fp: Fingerprint::from_canon(fp),
                };
            }
        }
        Stmt {
            kind: StmtKind::OpaqueSimple,
            span,
            fp: fingerprint(tokens),
        }
    }
}

fn block_fp(body: &[Stmt]) -> String {
    let inner: Vec<&str> = body.iter().map(|s| s.fp.as_str()).collect();
    format!("{{ {} }}", inner.join(" ; "))
}
