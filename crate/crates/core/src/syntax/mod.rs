//! Conditional-focused intermediate representation of a Python module.
//!
//! Statements are parsed fully for structure, so every nested body is
//! reachable, but only the parts of expressions the detectors reason about
//! are structured: boolean literals, plain names, `not`, and a single
//! comparison. Everything else is kept as an opaque fingerprint.

mod expr;
mod parser;

use std::path::{Path, PathBuf};

use serde::Serialize;

pub use crate::lexer::ParseError;
use crate::{fingerprint::Fingerprint, span::Span};
pub use expr::parse_expr;
pub use parser::parse_module;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CompareOp {
    Eq,
    NotEq,
    Lt,
    LtE,
    Gt,
    GtE,
    Is,
    IsNot,
    In,
    NotIn,
}

impl CompareOp {
    pub const ALL: [CompareOp; 10] = [
        CompareOp::Eq,
        CompareOp::NotEq,
        CompareOp::Lt,
        CompareOp::LtE,
        CompareOp::Gt,
        CompareOp::GtE,
        CompareOp::Is,
        CompareOp::IsNot,
        CompareOp::In,
        CompareOp::NotIn,
    ];

    /// The operator whose result is always the opposite of this one.
    pub fn inverse(self) -> CompareOp {
        use CompareOp::*;
        match self {
            Eq => NotEq,
            NotEq => Eq,
            Lt => GtE,
            GtE => Lt,
            Gt => LtE,
            LtE => Gt,
            Is => IsNot,
            IsNot => Is,
            In => NotIn,
            NotIn => In,
        }
    }

    pub fn as_str(self) -> &'static str {
        use CompareOp::*;
        match self {
            Eq => "==",
            NotEq => "!=",
            Lt => "<",
            LtE => "<=",
            Gt => ">",
            GtE => ">=",
            Is => "is",
            IsNot => "is not",
            In => "in",
            NotIn => "not in",
        }
    }
}

/// One side of a comparison. The span keeps any parentheses the operand
/// was written with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Operand {
    pub fp: Fingerprint,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    BoolLit(bool),
    Name(String),
    Not(Box<Expr>),
    Compare {
        lhs: Operand,
        op: CompareOp,
        rhs: Operand,
    },
    Opaque,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    /// Covers the expression without redundant enclosing parentheses.
    pub span: Span,
    pub fp: Fingerprint,
}

impl Expr {
    pub fn as_bool(&self) -> Option<bool> {
        match self.kind {
            ExprKind::BoolLit(b) => Some(b),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AssignTarget {
    Name(String),
    Opaque(Fingerprint),
}

impl AssignTarget {
    pub fn fp(&self) -> Fingerprint {
        match self {
            AssignTarget::Name(n) => Fingerprint::from_canon(n.clone()),
            AssignTarget::Opaque(fp) => fp.clone(),
        }
    }

    pub fn name(&self) -> Option<&str> {
        match self {
            AssignTarget::Name(n) => Some(n),
            AssignTarget::Opaque(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StmtKind {
    If(IfChain),
    Return(Option<Expr>),
    Assign {
        target: AssignTarget,
        value: Expr,
    },
    AugAssign {
        target: Fingerprint,
        op: String,
        value: Fingerprint,
    },
    Pass,
    OpaqueSimple,
    /// `for`, `while`, `def`, `class`, `try`, `with`, `match` and friends.
    /// One body per clause, in source order.
    OpaqueCompound {
        header: Fingerprint,
        bodies: Vec<Vec<Stmt>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stmt {
    pub kind: StmtKind,
    pub span: Span,
    /// Structural fingerprint; equal for statements that differ only in
    /// layout, comments or redundant parentheses.
    pub fp: Fingerprint,
}

impl Stmt {
    pub fn as_if(&self) -> Option<&IfChain> {
        match &self.kind {
            StmtKind::If(chain) => Some(chain),
            _ => None,
        }
    }

    /// The value of `return <bool literal>`.
    pub fn returned_bool(&self) -> Option<bool> {
        match &self.kind {
            StmtKind::Return(Some(e)) => e.as_bool(),
            _ => None,
        }
    }

    /// True for `return <name>`.
    pub fn returns_name(&self, name: &str) -> bool {
        matches!(&self.kind, StmtKind::Return(Some(Expr { kind: ExprKind::Name(n), .. })) if n == name)
    }

    /// Nested statement lists, in source order.
    pub fn bodies(&self) -> Vec<&[Stmt]> {
        match &self.kind {
            StmtKind::If(chain) => chain
                .branches
                .iter()
                .map(|b| b.body.as_slice())
                .chain(chain.else_clause.iter().map(|e| e.body.as_slice()))
                .collect(),
            StmtKind::OpaqueCompound { bodies, .. } => bodies.iter().map(Vec::as_slice).collect(),
            _ => Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub cond: Expr,
    pub body: Vec<Stmt>,
    /// Keyword through the end of the body.
    pub span: Span,
    /// Keyword through the header colon.
    pub header: Span,
    /// Written with `elif` rather than `if`.
    pub is_elif: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElseClause {
    pub body: Vec<Stmt>,
    /// `else` keyword through the end of the body.
    pub span: Span,
    /// `else` keyword through the colon.
    pub header: Span,
}

/// An `if` statement with its `elif` branches and optional `else`.
///
/// An `if` nested under `else:` stays a separate chain inside the else
/// body; only the literal `elif` keyword adds a branch here.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IfChain {
    pub branches: Vec<Branch>,
    pub else_clause: Option<ElseClause>,
}

impl IfChain {
    pub fn else_body(&self) -> Option<&[Stmt]> {
        self.else_clause.as_ref().map(|e| e.body.as_slice())
    }

    pub fn span(&self) -> Span {
        let first = self.branches[0].span;
        match &self.else_clause {
            Some(e) => first.join(e.span),
            None => first.join(self.branches.last().unwrap().span),
        }
    }

    /// A plain `if`/`else` with no `elif`.
    pub fn is_if_else(&self) -> bool {
        self.branches.len() == 1 && self.else_clause.is_some()
    }

    /// A lone `if` with no `elif` and no `else`.
    pub fn is_lone_if(&self) -> bool {
        self.branches.len() == 1 && self.else_clause.is_none()
    }

    /// The chain nested directly under `else:` when the else body holds
    /// nothing else.
    pub fn sole_else_chain(&self) -> Option<&IfChain> {
        match self.else_body()? {
            [only] => only.as_if(),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ParsedModule {
    pub path: PathBuf,
    pub source: String,
    pub body: Vec<Stmt>,
    /// Physical lines with at least one code token.
    pub lloc: usize,
    pub parse_errors: Vec<ParseError>,
}

impl ParsedModule {
    pub fn is_valid(&self) -> bool {
        self.parse_errors.is_empty()
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Parse raw bytes; invalid UTF-8 yields an invalid module.
    pub fn from_bytes(bytes: &[u8], path: impl Into<PathBuf>) -> ParsedModule {
        match std::str::from_utf8(bytes) {
            Ok(text) => parse_module(text, path),
            Err(e) => {
                let prefix = &bytes[..e.valid_up_to()];
                let line = prefix.iter().filter(|&&b| b == b'\n').count() as u32 + 1;
                let col = String::from_utf8_lossy(
                    prefix.rsplit(|&b| b == b'\n').next().unwrap_or_default(),
                )
                .chars()
                .count() as u32
                    + 1;
                ParsedModule {
                    path: path.into(),
                    source: String::new(),
                    body: Vec::new(),
                    lloc: 0,
                    parse_errors: vec![ParseError::at(line, col, "source is not valid UTF-8")],
                }
            }
        }
    }

    /// Every if chain in the module, outer chains before the chains nested
    /// inside them.
    pub fn chains(&self) -> Vec<&IfChain> {
        fn walk<'a>(body: &'a [Stmt], out: &mut Vec<&'a IfChain>) {
            for stmt in body {
                if let Some(chain) = stmt.as_if() {
                    out.push(chain);
                }
                for b in stmt.bodies() {
                    walk(b, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.body, &mut out);
        out
    }
}
