//! The scenario language: lexer, parser, resolver, pretty-printer and runner.

mod ast;
mod lexer;
pub mod model;
mod parser;
mod pretty;
mod run;

use std::fmt;

pub use ast::{AdmissibleDecl, Directive, Entry, EquivPair, Ident, MapDecl, PropDecl, Scenario, Span, Spanned, Target};
pub use parser::parse_syntax;
pub use pretty::pretty;
pub use run::{check_scenario, run_scenario, RunOptions, RunOutcome, RunReport, DEFAULT_STEPS, SINK};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Lexical,
    Syntax,
    Resolution,
}

/// A located error from lexing, parsing or resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: Span,
    pub message: String,
    /// Tokens that would have been accepted; empty for resolution errors.
    pub expected: Vec<String>,
}

impl ParseError {
    pub fn new(kind: ParseErrorKind, span: Span, message: String, expected: Vec<String>) -> Self {
        ParseError { kind, span, message, expected }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Parses and resolves a scenario.
pub fn parse_scenario(text: &str) -> Result<Scenario, ParseError> {
    let s = parse_syntax(text)?;
    parser::resolve(&s)?;
    Ok(s)
}
