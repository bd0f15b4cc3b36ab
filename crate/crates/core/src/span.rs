//! Source positions.

use serde::{Deserialize, Serialize};

/// Inclusive source range with 1-based lines and columns.
///
/// Columns count Unicode scalar values, not bytes.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Span {
    pub line_start: u32,
    pub col_start: u32,
    pub line_end: u32,
    pub col_end: u32,
}

impl Span {
    pub fn new(line_start: u32, col_start: u32, line_end: u32, col_end: u32) -> Self {
        debug_assert!(
            line_start < line_end || (line_start == line_end && col_start <= col_end),
            "inverted span {line_start}:{col_start}-{line_end}:{col_end}"
        );
        Span {
            line_start,
            col_start,
            line_end,
            col_end,
        }
    }

    /// Smallest span covering both `self` and `other`.
    pub fn join(self, other: Span) -> Span {
        let (line_start, col_start) =
            (self.line_start, self.col_start).min((other.line_start, other.col_start));
        let (line_end, col_end) =
            (self.line_end, self.col_end).max((other.line_end, other.col_end));
        Span {
            line_start,
            col_start,
            line_end,
            col_end,
        }
    }

    pub fn contains(&self, other: &Span) -> bool {
        (self.line_start, self.col_start) <= (other.line_start, other.col_start)
            && (other.line_end, other.col_end) <= (self.line_end, self.col_end)
    }

    pub fn start(&self) -> (u32, u32) {
        (self.line_start, self.col_start)
    }

    pub fn end(&self) -> (u32, u32) {
        (self.line_end, self.col_end)
    }

    /// The text covered by this span.
    ///
    /// Returns `None` when the span does not lie within `source`.
    pub fn slice<'a>(&self, source: &'a str) -> Option<&'a str> {
        let map = LineIndex::new(source);
        let start = map.offset(self.line_start, self.col_start)?;
        let last = map.offset(self.line_end, self.col_end)?;
        let ch = source[last..].chars().next()?;
        Some(&source[start..last + ch.len_utf8()])
    }
}

impl std::fmt::Display for Span {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}:{}-{}:{}",
            self.line_start, self.col_start, self.line_end, self.col_end
        )
    }
}

/// Maps (line, column) positions to byte offsets.
#[derive(Debug, Clone)]
pub struct LineIndex<'a> {
    source: &'a str,
    starts: Vec<usize>,
}

impl<'a> LineIndex<'a> {
    pub fn new(source: &'a str) -> Self {
        let mut starts = vec![0];
        starts.extend(source.match_indices('\n').map(|(i, _)| i + 1));
        LineIndex { source, starts }
    }

    pub fn line_count(&self) -> usize {
        self.starts.len()
    }

    /// Text of a 1-based line, without its terminator.
    pub fn line(&self, line: u32) -> Option<&'a str> {
        let idx = (line as usize).checked_sub(1)?;
        let start = *self.starts.get(idx)?;
        let end = self
            .starts
            .get(idx + 1)
            .map(|e| e - 1)
            .unwrap_or(self.source.len());
        let text = &self.source[start..end];
        Some(text.strip_suffix('\r').unwrap_or(text))
    }

    /// Byte offset of a 1-based (line, column) position.
    pub fn offset(&self, line: u32, col: u32) -> Option<usize> {
        let idx = (line as usize).checked_sub(1)?;
        let start = *self.starts.get(idx)?;
        let col = (col as usize).checked_sub(1)?;
        let rest = &self.source[start..];
        match rest.char_indices().nth(col) {
            Some((i, _)) => Some(start + i),
            None if rest.chars().count() == col => Some(self.source.len()),
            None => None,
        }
    }

    /// Leading whitespace of a line.
    pub fn indent(&self, line: u32) -> &'a str {
        let text = self.line(line).unwrap_or("");
        let trimmed = text.trim_start_matches([' ', '\t', '\x0c']);
        &text[..text.len() - trimmed.len()]
    }
}
