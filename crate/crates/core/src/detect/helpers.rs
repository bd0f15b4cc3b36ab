//! Structural predicates shared by the rules.

use crate::syntax::{Expr, ExprKind, Stmt, StmtKind};

/// Statements are equal when their structural fingerprints are.
pub fn stmt_equal(a: &Stmt, b: &Stmt) -> bool {
    a.fp == b.fp
}

/// True when one expression is the syntactic complement of the other:
/// a `not` wrapper, the inverse comparison operator on the same operands,
/// or the opposite boolean literal.
pub fn negates(a: &Expr, b: &Expr) -> bool {
    match (&a.kind, &b.kind) {
        (ExprKind::BoolLit(x), ExprKind::BoolLit(y)) => x != y,
        (ExprKind::Not(inner), _) if inner.fp == b.fp => true,
        (_, ExprKind::Not(inner)) if inner.fp == a.fp => true,
        (
            ExprKind::Compare { lhs, op, rhs },
            ExprKind::Compare {
                lhs: lhs2,
                op: op2,
                rhs: rhs2,
            },
        ) => lhs.fp == lhs2.fp && rhs.fp == rhs2.fp && op.inverse() == *op2,
        _ => false,
    }
}

/// Length of the longest common suffix of two statement lists.
pub fn common_suffix_len(a: &[Stmt], b: &[Stmt]) -> usize {
    a.iter()
        .rev()
        .zip(b.iter().rev())
        .take_while(|(x, y)| stmt_equal(x, y))
        .count()
}

/// Every statement is `pass` or assigns a variable to itself.
pub fn is_nonfunctional(body: &[Stmt]) -> bool {
    !body.is_empty()
        && body.iter().all(|s| match &s.kind {
            StmtKind::Pass => true,
            StmtKind::Assign { target, value } => target.fp() == value.fp,
            _ => false,
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_module;

    fn stmts(src: &str) -> Vec<Stmt> {
        let m = parse_module(src, "t.py");
        assert!(m.is_valid(), "{:?}", m.parse_errors);
        m.body
    }

    fn cond(src: &str) -> Expr {
        let m = parse_module(&format!("if {src}:\n    pass\n"), "t.py");
        m.body[0].as_if().unwrap().branches[0].cond.clone()
    }

    #[test]
    fn statement_equality() {
        let s = stmts("b += 1\nb += 1\nc += 1\nb+=1  # note\n");
        assert!(stmt_equal(&s[0], &s[1]));
        assert!(!stmt_equal(&s[0], &s[2]));
        assert!(stmt_equal(&s[0], &s[3]));
    }

    #[test]
    fn negation_forms() {
        assert!(negates(&cond("cond"), &cond("not(cond)")));
        assert!(negates(&cond("not cond"), &cond("(cond)")));
        assert!(negates(&cond("x > 0"), &cond("x <= 0")));
        assert!(negates(&cond("x <= 0"), &cond("x > 0")));
        assert!(negates(&cond("k in d"), &cond("k not in d")));
        assert!(negates(&cond("True"), &cond("False")));
        assert!(!negates(&cond("x > 0"), &cond("x < 0")));
        assert!(!negates(&cond("x > 0"), &cond("0 <= x")));
        assert!(!negates(&cond("a"), &cond("b")));
        assert!(!negates(&cond("a"), &cond("not not a")));
        assert!(!negates(&cond("a and b"), &cond("not a or not b")));
    }

    #[test]
    fn suffix_lengths() {
        let a = stmts("a+=1\nb+=1\n");
        let b = stmts("c+=1\nb+=1\n");
        assert_eq!(common_suffix_len(&a, &b), 1);
        let a = stmts("a+=1\nb+=1\nprint(b)\n");
        let b = stmts("c+=1\nb+=1\nprint(b)\n");
        assert_eq!(common_suffix_len(&a, &b), 2);
        assert_eq!(common_suffix_len(&[], &b), 0);
        assert_eq!(common_suffix_len(&b, &b), 3);
    }

    #[test]
    fn nonfunctional_bodies() {
        assert!(is_nonfunctional(&stmts("pass\n")));
        assert!(is_nonfunctional(&stmts("x = x\n")));
        assert!(is_nonfunctional(&stmts("a[i] = (a[i])\npass\n")));
        assert!(!is_nonfunctional(&stmts("x = x + 0\n")));
        assert!(!is_nonfunctional(&stmts("x = 1\n")));
        assert!(!is_nonfunctional(&[]));
    }
}
