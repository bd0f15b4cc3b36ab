//! Python tokenizer.
//!
//! Produces the token stream the statement parser works on: names, numbers,
//! strings, operators, plus the layout tokens `Newline`, `Indent` and
//! `Dedent`. Comments and blank lines never reach the stream. Inside
//! brackets, and after a trailing backslash, physical lines are joined.

use serde::Serialize;

use crate::span::Span;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Name,
    Number,
    String,
    Op,
    Newline,
    Indent,
    Dedent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub span: Span,
}

impl Token {
    pub fn is_layout(&self) -> bool {
        matches!(
            self.kind,
            TokenKind::Newline | TokenKind::Indent | TokenKind::Dedent
        )
    }

    pub fn is_op(&self, op: &str) -> bool {
        self.kind == TokenKind::Op && self.text == op
    }

    pub fn is_name(&self, name: &str) -> bool {
        self.kind == TokenKind::Name && self.text == name
    }
}

/// A problem that keeps a file from being accepted as valid Python.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParseError {
    pub span: Span,
    pub message: String,
}

impl ParseError {
    pub fn new(span: Span, message: impl Into<String>) -> Self {
        ParseError {
            span,
            message: message.into(),
        }
    }

    pub(crate) fn at(line: u32, col: u32, message: impl Into<String>) -> Self {
        Self::new(Span::new(line, col, line, col), message)
    }
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}:{}: {}",
            self.span.line_start, self.span.col_start, self.message
        )
    }
}

// Longest first so that maximal munch works with a linear scan.
const OPERATORS: &[&str] = &[
    "**=", "//=", ">>=", "<<=", "...", "->", ":=", "==", "!=", "<=", ">=", "**", "//", "<<", ">>",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "@=", "+", "-", "*", "/", "%", "@", "&", "|",
    "^", "~", "<", ">", "(", ")", "[", "]", "{", "}", ",", ":", ".", ";", "=",
];

const STRING_PREFIXES: &[&str] = &["r", "u", "b", "f", "br", "rb", "fr", "rf"];

/// Tokenize `source`.
///
/// Lexing stops at the first error; the error is returned instead of a
/// partial stream because nothing downstream can trust the layout tokens
/// after it.
pub fn tokenize(source: &str) -> Result<Vec<Token>, ParseError> {
    Lexer::new(source).run()
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: u32,
    col: u32,
    tokens: Vec<Token>,
    indents: Vec<String>,
    brackets: Vec<(char, u32, u32)>,
}

impl Lexer {
    fn new(source: &str) -> Self {
        let source = source.strip_prefix('\u{feff}').unwrap_or(source);
        Lexer {
            chars: source.chars().collect(),
            pos: 0,
            line: 1,
            col: 1,
            tokens: Vec::new(),
            indents: vec![String::new()],
            brackets: Vec::new(),
        }
    }

    fn peek(&self, ahead: usize) -> Option<char> {
        self.chars.get(self.pos + ahead).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn push(&mut self, kind: TokenKind, text: String, start: (u32, u32), end: (u32, u32)) {
        self.tokens.push(Token {
            kind,
            text,
            span: Span::new(start.0, start.1, end.0, end.1),
        });
    }

    fn run(mut self) -> Result<Vec<Token>, ParseError> {
        while self.pos < self.chars.len() {
            self.line_start()?;
            self.rest_of_line()?;
        }
        if let Some(&(open, line, col)) = self.brackets.last() {
            return Err(ParseError::at(
                line,
                col,
                format!("'{open}' was never closed"),
            ));
        }
        if self
            .tokens
            .last()
            .is_some_and(|t| !matches!(t.kind, TokenKind::Newline | TokenKind::Dedent))
        {
            let (l, c) = (self.line, self.col);
            self.push(TokenKind::Newline, String::new(), (l, c), (l, c));
        }
        while self.indents.len() > 1 {
            self.indents.pop();
            let (l, c) = (self.line, self.col);
            self.push(TokenKind::Dedent, String::new(), (l, c), (l, c));
        }
        Ok(self.tokens)
    }

    /// Measure indentation at the start of a logical line and emit
    /// `Indent`/`Dedent` tokens. Blank and comment-only lines are skipped.
    fn line_start(&mut self) -> Result<(), ParseError> {
        loop {
            let mut indent = String::new();
            while let Some(c @ (' ' | '\t' | '\x0c')) = self.peek(0) {
                if c != '\x0c' {
                    indent.push(c);
                }
                self.bump();
            }
            match self.peek(0) {
                None => return Ok(()),
                Some('#') => {
                    self.skip_comment();
                    if self.peek(0) == Some('\n') {
                        self.bump();
                    }
                }
                Some('\n') => {
                    self.bump();
                }
                Some('\r') if self.peek(1) == Some('\n') => {
                    self.bump();
                    self.bump();
                }
                Some('\\') if self.peek(1) == Some('\n') || self.peek(1) == Some('\r') => {
                    // A continuation at the start of a line: indentation is
                    // taken from this line, the logical line continues below.
                    return self.apply_indent(indent);
                }
                Some(_) => return self.apply_indent(indent),
            }
        }
    }

    fn apply_indent(&mut self, indent: String) -> Result<(), ParseError> {
        let (line, col) = (self.line, self.col);
        if indent.contains(' ') && indent.contains('\t') {
            return Err(ParseError::at(
                line,
                1,
                "inconsistent use of tabs and spaces in indentation",
            ));
        }
        let current = self.indents.last().cloned().unwrap_or_default();
        if indent == current {
            return Ok(());
        }
        if indent.starts_with(&current) {
            self.indents.push(indent);
            self.push(
                TokenKind::Indent,
                String::new(),
                (line, 1),
                (line, col.max(2) - 1),
            );
            return Ok(());
        }
        if !current.starts_with(&indent) {
            return Err(ParseError::at(
                line,
                1,
                "inconsistent use of tabs and spaces in indentation",
            ));
        }
        while self.indents.last().is_some_and(|i| i.len() > indent.len()) {
            self.indents.pop();
            self.push(TokenKind::Dedent, String::new(), (line, col), (line, col));
        }
        if self.indents.last().map(String::as_str) != Some(indent.as_str()) {
            return Err(ParseError::at(
                line,
                col,
                "unindent does not match any outer indentation level",
            ));
        }
        Ok(())
    }

    fn skip_comment(&mut self) {
        while let Some(c) = self.peek(0) {
            if c == '\n' {
                break;
            }
            self.bump();
        }
    }

    /// Lex tokens until the end of the logical line (inclusive).
    fn rest_of_line(&mut self) -> Result<(), ParseError> {
        while let Some(c) = self.peek(0) {
            let start = (self.line, self.col);
            match c {
                ' ' | '\t' | '\x0c' => {
                    self.bump();
                }
                '\r' if self.peek(1) == Some('\n') => {
                    self.bump();
                }
                '\n' => {
                    if self.brackets.is_empty() {
                        self.push(TokenKind::Newline, "\n".into(), start, start);
                        self.bump();
                        return Ok(());
                    }
                    self.bump();
                }
                '#' => self.skip_comment(),
                '\\' => {
                    self.bump();
                    match (self.peek(0), self.peek(1)) {
                        (Some('\n'), _) => {
                            self.bump();
                        }
                        (Some('\r'), Some('\n')) => {
                            self.bump();
                            self.bump();
                        }
                        (None, _) => {}
                        _ => {
                            return Err(ParseError::at(
                                start.0,
                                start.1,
                                "unexpected character after line continuation character",
                            ))
                        }
                    }
                }
                '"' | '\'' => self.string(String::new(), start)?,
                c if c.is_ascii_digit()
                    || (c == '.' && self.peek(1).is_some_and(|d| d.is_ascii_digit())) =>
                {
                    self.number(start)
                }
                c if is_ident_start(c) => {
                    let mut name = String::new();
                    let mut end = start;
                    while let Some(c) = self.peek(0).filter(|&c| is_ident_continue(c)) {
                        end = (self.line, self.col);
                        name.push(c);
                        self.bump();
                    }
                    let is_prefix = STRING_PREFIXES.contains(&name.to_ascii_lowercase().as_str());
                    if is_prefix && matches!(self.peek(0), Some('"' | '\'')) {
                        self.string(name, start)?;
                    } else {
                        self.push(TokenKind::Name, name, start, end);
                    }
                }
                _ => self.operator(start)?,
            }
        }
        Ok(())
    }

    fn number(&mut self, start: (u32, u32)) {
        let mut text = String::new();
        let mut end = start;
        while let Some(c) = self.peek(0) {
            let exponent_sign = (c == '+' || c == '-')
                && text.ends_with(['e', 'E'])
                && !text.starts_with("0x")
                && !text.starts_with("0X");
            if c.is_ascii_alphanumeric() || c == '_' || c == '.' || exponent_sign {
                end = (self.line, self.col);
                text.push(c);
                self.bump();
            } else {
                break;
            }
        }
        self.push(TokenKind::Number, text, start, end);
    }

    fn string(&mut self, mut text: String, start: (u32, u32)) -> Result<(), ParseError> {
        let quote = self.peek(0).expect("caller saw a quote");
        let triple = self.peek(1) == Some(quote) && self.peek(2) == Some(quote);
        let delim = if triple { 3 } else { 1 };
        for _ in 0..delim {
            text.push(quote);
            self.bump();
        }
        loop {
            let here = (self.line, self.col);
            let Some(c) = self.peek(0) else {
                let what = if triple {
                    "unterminated triple-quoted string literal"
                } else {
                    "unterminated string literal"
                };
                return Err(ParseError::at(start.0, start.1, what));
            };
            if c == '\\' {
                text.push(c);
                self.bump();
                if let Some(n) = self.peek(0) {
                    text.push(n);
                    self.bump();
                }
                continue;
            }
            if c == '\n' && !triple {
                return Err(ParseError::at(
                    start.0,
                    start.1,
                    "unterminated string literal",
                ));
            }
            if c == quote
                && (!triple || (self.peek(1) == Some(quote) && self.peek(2) == Some(quote)))
            {
                let mut end = here;
                for _ in 0..delim {
                    end = (self.line, self.col);
                    text.push(quote);
                    self.bump();
                }
                self.push(TokenKind::String, text, start, end);
                return Ok(());
            }
            text.push(c);
            self.bump();
        }
    }

    fn operator(&mut self, start: (u32, u32)) -> Result<(), ParseError> {
        let op = OPERATORS
            .iter()
            .find(|op| op.chars().enumerate().all(|(i, c)| self.peek(i) == Some(c)));
        let Some(op) = op else {
            let c = self.peek(0).unwrap_or('?');
            return Err(ParseError::at(
                start.0,
                start.1,
                format!("invalid character '{c}'"),
            ));
        };
        let len = op.chars().count() as u32;
        for _ in 0..len {
            self.bump();
        }
        match *op {
            "(" | "[" | "{" => self
                .brackets
                .push((op.chars().next().unwrap(), start.0, start.1)),
            ")" | "]" | "}" => {
                let close = op.chars().next().unwrap();
                match self.brackets.pop() {
                    Some((open, _, _)) if matching(open) == close => {}
                    Some((open, _, _)) => {
                        return Err(ParseError::at(
                            start.0,
                            start.1,
                            format!("closing parenthesis '{close}' does not match opening parenthesis '{open}'"),
                        ))
                    }
                    None => {
                        return Err(ParseError::at(
                            start.0,
                            start.1,
                            format!("unmatched '{close}'"),
                        ))
                    }
                }
            }
            _ => {}
        }
        self.push(
            TokenKind::Op,
            op.to_string(),
            start,
            (start.0, start.1 + len - 1),
        );
        Ok(())
    }
}

fn matching(open: char) -> char {
    match open {
        '(' => ')',
        '[' => ']',
        _ => '}',
    }
}

fn is_ident_start(c: char) -> bool {
    c == '_' || c.is_alphabetic()
}

fn is_ident_continue(c: char) -> bool {
    c == '_' || c.is_alphanumeric()
}

/// Python keywords that can never be plain identifiers.
pub fn is_keyword(name: &str) -> bool {
    matches!(
        name,
        "False"
            | "None"
            | "True"
            | "and"
            | "as"
            | "assert"
            | "async"
            | "await"
            | "break"
            | "class"
            | "continue"
            | "def"
            | "del"
            | "elif"
            | "else"
            | "except"
            | "finally"
            | "for"
            | "from"
            | "global"
            | "if"
            | "import"
            | "in"
            | "is"
            | "lambda"
            | "nonlocal"
            | "not"
            | "or"
            | "pass"
            | "raise"
            | "return"
            | "try"
            | "while"
            | "with"
            | "yield"
    )
}

/// Number of physical lines that carry at least one token.
///
/// Lines inside a multi-line string count, comment-only and blank lines do
/// not. If the source does not tokenize, a line-based approximation is used.
pub fn count_lloc(source: &str) -> usize {
    match tokenize(source) {
        Ok(tokens) => {
            let mut lines: Vec<(u32, u32)> = tokens
                .iter()
                .filter(|t| !t.is_layout())
                .map(|t| (t.span.line_start, t.span.line_end))
                .collect();
            lines.sort_unstable();
            let mut count = 0usize;
            let mut covered_to = 0u32;
            for (start, end) in lines {
                let from = start.max(covered_to + 1);
                if end >= from {
                    count += (end - from + 1) as usize;
                    covered_to = end;
                }
            }
            count
        }
        Err(_) => source
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .count(),
    }
}

/// Lines (1-based) that fall strictly inside a multi-line string token, i.e.
/// every line of such a token except its first. Their leading whitespace is
/// string content, not indentation.
pub fn string_interior_lines(tokens: &[Token]) -> std::collections::BTreeSet<u32> {
    tokens
        .iter()
        .filter(|t| t.kind == TokenKind::String && t.span.line_end > t.span.line_start)
        .flat_map(|t| t.span.line_start + 1..=t.span.line_end)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<(TokenKind, String)> {
        tokenize(src)
            .unwrap()
            .into_iter()
            .map(|t| (t.kind, t.text))
            .collect()
    }

    #[test]
    fn indent_and_dedent() {
        use TokenKind::*;
        let toks: Vec<_> = kinds("if a:\n    b\nc\n")
            .into_iter()
            .map(|t| t.0)
            .collect();
        assert_eq!(
            toks,
            vec![Name, Name, Op, Newline, Indent, Name, Newline, Dedent, Name, Newline]
        );
    }

    #[test]
    fn comments_and_blank_lines_vanish() {
        let a = kinds("x = 1  # one\n\n   # indented comment\ny = 2\n");
        let b = kinds("x = 1\ny = 2\n");
        assert_eq!(a, b);
    }

    #[test]
    fn brackets_join_lines() {
        let toks = kinds("f(a,\n  b)\n");
        assert_eq!(toks.iter().filter(|t| t.0 == TokenKind::Newline).count(), 1);
    }

    #[test]
    fn backslash_continuation() {
        let toks = kinds("x = 1 + \\\n    2\n");
        assert_eq!(toks.len(), 6);
    }

    #[test]
    fn string_forms() {
        let toks = kinds("s = rb'a\\'b' + \"\"\"x\n  y\"\"\" + f\"{z}\"\n");
        let strings: Vec<_> = toks
            .iter()
            .filter(|t| t.0 == TokenKind::String)
            .map(|t| t.1.as_str())
            .collect();
        assert_eq!(strings, vec!["rb'a\\'b'", "\"\"\"x\n  y\"\"\"", "f\"{z}\""]);
    }

    #[test]
    fn numbers() {
        let toks = kinds("x = 1e-5 + 0x1F + .5j - 1_000\n");
        let nums: Vec<_> = toks
            .iter()
            .filter(|t| t.0 == TokenKind::Number)
            .map(|t| t.1.as_str())
            .collect();
        assert_eq!(nums, vec!["1e-5", "0x1F", ".5j", "1_000"]);
    }

    #[test]
    fn operator_munch() {
        let ops: Vec<_> = kinds("a //= b ** c != d -> e := f\n")
            .into_iter()
            .filter(|t| t.0 == TokenKind::Op)
            .map(|t| t.1)
            .collect();
        assert_eq!(ops, vec!["//=", "**", "!=", "->", ":="]);
    }

    #[test]
    fn errors() {
        assert!(tokenize("if a:\n\tx\n        y\n").is_err());
        assert!(tokenize("if a:\n \tx\n").is_err());
        assert!(tokenize("x = (1\n").is_err());
        assert!(tokenize("x = 1)\n").is_err());
        assert!(tokenize("x = 'abc\n").is_err());
        assert!(tokenize("x = $\n").is_err());
        assert!(tokenize("if a:\n        x\n    y\n").is_err());
    }

    #[test]
    fn token_spans() {
        let toks = tokenize("if (ab):\n    return 'é'\n").unwrap();
        assert_eq!(toks[2].span, Span::new(1, 5, 1, 6));
        let s = toks.iter().find(|t| t.kind == TokenKind::String).unwrap();
        assert_eq!(s.span, Span::new(2, 12, 2, 14));
    }

    #[test]
    fn lloc_examples() {
        assert_eq!(count_lloc(""), 0);
        assert_eq!(count_lloc("x=1\n\n# c\ny=2\n"), 2);
        assert_eq!(count_lloc("s = '''a\n\nb'''\n"), 3);
        assert_eq!(count_lloc("f(1,\n  # c\n  2)\n"), 2);
    }
}
