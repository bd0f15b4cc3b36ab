//! Static analysis for anti-patterns in Python conditional statements.
//!
//! The pipeline is: [`syntax::parse_module`] turns source into a small IR,
//! [`detect::detect_all`] runs the fifteen pattern rules over every if
//! chain, [`fix`] attaches rewrite suggestions, [`corpus`] aggregates
//! results over a tree of student submissions, and [`report`] serializes
//! diagnostics and statistics.

pub mod cli;
pub mod config;
pub mod corpus;
pub mod detect;
pub mod error;
pub mod fingerprint;
pub mod fix;
pub mod lexer;
pub mod report;
pub mod span;
pub mod syntax;

pub use detect::{detect_all, Diagnostic, PatternKind};
pub use error::{Error, Result};
pub use fingerprint::Fingerprint;
pub use span::Span;
pub use syntax::{parse_module, ParsedModule};
