//! Structural fingerprints used to compare code fragments for duplication.

use serde::{Deserialize, Serialize};

use crate::lexer::{tokenize, Token};

/// Normalized token sequence of a code fragment.
///
/// Comments and layout are not part of the canon, whitespace collapses to a
/// single separator, literals are kept verbatim and redundant parentheses
/// around the whole fragment are dropped.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fingerprint(String);

impl Fingerprint {
    pub(crate) fn from_canon(canon: String) -> Self {
        Fingerprint(canon)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Fingerprint of a source fragment. Text that does not tokenize is
    /// fingerprinted by its whitespace-collapsed form.
    pub fn of_source(text: &str) -> Self {
        match tokenize(text) {
            Ok(tokens) => fingerprint(&tokens),
            Err(_) => Fingerprint(text.split_whitespace().collect::<Vec<_>>().join(" ")),
        }
    }
}

impl std::fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// Fingerprint of a token range. Layout tokens are ignored.
pub fn fingerprint(tokens: &[Token]) -> Fingerprint {
    let significant: Vec<&Token> = tokens.iter().filter(|t| !t.is_layout()).collect();
    let inner = strip_parens_refs(&significant);
    let mut canon = String::new();
    for (i, t) in inner.iter().enumerate() {
        if i > 0 {
            canon.push(' ');
        }
        canon.push_str(&t.text);
    }
    Fingerprint(canon)
}

/// Drop every level of parentheses that encloses the whole range.
pub fn strip_outer_parens(tokens: &[Token]) -> &[Token] {
    let mut tokens = tokens;
    while tokens.len() >= 3 && tokens[0].is_op("(") && closes_at_end(tokens.iter()) {
        tokens = &tokens[1..tokens.len() - 1];
    }
    tokens
}

fn strip_parens_refs<'a, 'b>(tokens: &'b [&'a Token]) -> &'b [&'a Token] {
    let mut tokens = tokens;
    while tokens.len() >= 3 && tokens[0].is_op("(") && closes_at_end(tokens.iter().copied()) {
        tokens = &tokens[1..tokens.len() - 1];
    }
    tokens
}

/// True when the opening bracket at the front is closed by the last token
/// and by no earlier one.
fn closes_at_end<'a>(tokens: impl ExactSizeIterator<Item = &'a Token>) -> bool {
    let len = tokens.len();
    let mut depth = 0i32;
    for (i, t) in tokens.enumerate() {
        if t.kind != crate::lexer::TokenKind::Op {
            continue;
        }
        match t.text.as_str() {
            "(" | "[" | "{" => depth += 1,
            ")" | "]" | "}" => {
                depth -= 1;
                if depth == 0 {
                    return i == len - 1 && t.text == ")";
                }
            }
            _ => {}
        }
    }
    false
}
