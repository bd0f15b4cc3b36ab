//! One function per anti-pattern.
//!
//! Each rule looks at a single if chain and, where the pattern involves it,
//! the statement that immediately follows the chain in the same block.

use crate::syntax::{IfChain, Stmt, StmtKind};

use super::{
    helpers::{common_suffix_len, is_nonfunctional, negates},
    Diagnostic, PatternKind,
};

/// An if chain together with its following sibling statement.
#[derive(Copy, Clone, Debug)]
pub struct ChainSite<'a> {
    pub chain: &'a IfChain,
    pub next: Option<&'a Stmt>,
}

impl<'a> ChainSite<'a> {
    pub fn new(chain: &'a IfChain, next: Option<&'a Stmt>) -> Self {
        ChainSite { chain, next }
    }

    fn diag(&self, pattern: PatternKind) -> Diagnostic {
        Diagnostic::new(pattern, self.chain.span())
    }

    fn diag_with_next(&self, pattern: PatternKind) -> Diagnostic {
        let next = self.next.expect("rule matched on the following statement");
        Diagnostic::new(pattern, self.chain.span().join(next.span))
    }
}

fn single(body: &[Stmt]) -> Option<&Stmt> {
    match body {
        [only] => Some(only),
        _ => None,
    }
}

pub fn detect_if_else_return_bool(site: &ChainSite) -> Option<Diagnostic> {
    let chain = site.chain;
    if !chain.is_if_else() {
        return None;
    }
    let then = single(&chain.branches[0].body)?.returned_bool()?;
    let other = single(chain.else_body()?)?.returned_bool()?;
    (then != other).then(|| site.diag(PatternKind::IfElseReturnBool))
}

pub fn detect_if_return_bool(site: &ChainSite) -> Option<Diagnostic> {
    let chain = site.chain;
    if !chain.is_lone_if() {
        return None;
    }
    let then = single(&chain.branches[0].body)?.returned_bool()?;
    let after = site.next?.returned_bool()?;
    (then != after).then(|| site.diag_with_next(PatternKind::IfReturnBool))
}

pub fn detect_confusing_else(site: &ChainSite) -> Option<Diagnostic> {
    let nested = site.chain.sole_else_chain()?;
    let exits = nested.branches.len() + usize::from(nested.else_clause.is_some());
    (exits > 1).then(|| site.diag(PatternKind::ConfusingElse))
}

pub fn detect_else_if(site: &ChainSite) -> Option<Diagnostic> {
    let nested = site.chain.sole_else_chain()?;
    nested.is_lone_if().then(|| site.diag(PatternKind::ElseIf))
}

pub fn detect_nested_if(site: &ChainSite) -> Option<Diagnostic> {
    let chain = site.chain;
    if !chain.is_lone_if() {
        return None;
    }
    let inner = single(&chain.branches[0].body)?.as_if()?;
    inner.is_lone_if().then(|| site.diag(PatternKind::NestedIf))
}

/// Some branch (`if` or `elif`) does nothing. Reported once per chain.
pub fn detect_empty_if_body(site: &ChainSite) -> Option<Diagnostic> {
    site.chain
        .branches
        .iter()
        .any(|b| is_nonfunctional(&b.body))
        .then(|| site.diag(PatternKind::EmptyIfBody))
}

pub fn detect_empty_else_body(site: &ChainSite) -> Option<Diagnostic> {
    let clause = site.chain.else_clause.as_ref()?;
    is_nonfunctional(&clause.body).then(|| site.diag(PatternKind::EmptyElseBody))
}

pub fn detect_unnecessary_elif(site: &ChainSite) -> Option<Diagnostic> {
    let chain = site.chain;
    match &chain.branches[..] {
        [first, second] if chain.else_clause.is_none() && negates(&first.cond, &second.cond) => {
            Some(site.diag(PatternKind::UnnecessaryElif))
        }
        _ => None,
    }
}

/// Duplicated trailing statements in an if/else, most specific pattern
/// first: identical bodies, a body that is a suffix of the other, several
/// shared trailing statements, one shared trailing statement.
pub fn detect_duplication_family(site: &ChainSite) -> Option<Diagnostic> {
    let chain = site.chain;
    if !chain.is_if_else() {
        return None;
    }
    let then = &chain.branches[0].body;
    let other = chain.else_body()?;
    let k = common_suffix_len(then, other);
    let pattern = if k == 0 {
        return None;
    } else if k == then.len() && k == other.len() {
        PatternKind::DuplicateIfElseBody
    } else if k == then.len().min(other.len()) {
        PatternKind::UnnecessaryElse
    } else if k >= 2 {
        PatternKind::SeveralDuplicateIfElseStatements
    } else {
        PatternKind::DuplicateIfElseStatement
    };
    Some(site.diag(pattern))
}

/// Both branches of an if/else assign the same name; most specific first.
pub fn detect_assign_family(site: &ChainSite) -> Option<Diagnostic> {
    let chain = site.chain;
    if !chain.is_if_else() {
        return None;
    }
    let (target, then_value) = match &single(&chain.branches[0].body)?.kind {
        StmtKind::Assign { target, value } => (target.name()?, value),
        _ => return None,
    };
    let else_value = match &single(chain.else_body()?)?.kind {
        StmtKind::Assign { target: t, value } if t.name() == Some(target) => value,
        _ => return None,
    };
    let opposite_bools = matches!(
        (then_value.as_bool(), else_value.as_bool()),
        (Some(a), Some(b)) if a != b
    );
    let returned = site.next.is_some_and(|n| n.returns_name(target));
    match (opposite_bools, returned) {
        (true, true) => Some(site.diag_with_next(PatternKind::IfElseAssignBoolReturn)),
        (true, false) => Some(site.diag(PatternKind::IfElseAssignBool)),
        (false, true) => Some(site.diag_with_next(PatternKind::IfElseAssignReturn)),
        (false, false) => None,
    }
}
