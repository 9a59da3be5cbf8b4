use std::fmt;

use super::ast::Span;
use super::{ParseError, ParseErrorKind};

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    Number(f64),
    LBrace,
    RBrace,
    Comma,
    Arrow,
    Tilde,
    Eq,
    Le,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Number(n) => write!(f, "number {n}"),
            Tok::LBrace => f.write_str("'{'"),
            Tok::RBrace => f.write_str("'}'"),
            Tok::Comma => f.write_str("','"),
            Tok::Arrow => f.write_str("'->'"),
            Tok::Tilde => f.write_str("'~'"),
            Tok::Eq => f.write_str("'='"),
            Tok::Le => f.write_str("'<='"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

fn ident_start(c: char) -> bool {
    c.is_ascii_alphabetic()
}

fn ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let peek = |j: usize| chars.get(j).copied();
    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, col };
        let start = i;
        let tok = match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
                continue;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            '{' => {
                i += 1;
                Tok::LBrace
            }
            '}' => {
                i += 1;
                Tok::RBrace
            }
            ',' => {
                i += 1;
                Tok::Comma
            }
            '~' => {
                i += 1;
                Tok::Tilde
            }
            '=' => {
                i += 1;
                Tok::Eq
            }
            '≤' => {
                i += 1;
                Tok::Le
            }
            '<' if peek(i + 1) == Some('=') => {
                i += 2;
                Tok::Le
            }
            '-' if peek(i + 1) == Some('>') => {
                i += 2;
                Tok::Arrow
            }
            c if c.is_ascii_digit()
                || ((c == '-' || c == '+' || c == '.')
                    && peek(i + 1).is_some_and(|d| d.is_ascii_digit() || d == '.')) =>
            {
                i += 1;
                while let Some(d) = peek(i) {
                    let exp_sign = (d == '-' || d == '+') && matches!(chars[i - 1], 'e' | 'E');
                    if d.is_ascii_digit() || d == '.' || d == 'e' || d == 'E' || exp_sign {
                        i += 1;
                    } else {
                        break;
                    }
                }
                let raw: String = chars[start..i].iter().collect();
                match raw.parse::<f64>() {
                    Ok(v) if v.is_finite() => Tok::Number(v),
                    _ => {
                        return Err(ParseError::new(
                            ParseErrorKind::Lexical,
                            span,
                            format!("malformed number `{raw}`"),
                            Vec::new(),
                        ))
                    }
                }
            }
            c if ident_start(c) => {
                i += 1;
                while let Some(d) = peek(i) {
                    if ident_continue(d) || (d == '-' && peek(i + 1).is_some_and(ident_continue)) {
                        i += 1;
                    } else {
                        break;
                    }
                }
                Tok::Ident(chars[start..i].iter().collect())
            }
            other => {
                return Err(ParseError::new(
                    ParseErrorKind::Lexical,
                    span,
                    format!("unexpected character `{other}`"),
                    Vec::new(),
                ))
            }
        };
        col += i - start;
        tokens.push(Token { tok, span });
    }
    tokens.push(Token { tok: Tok::Eof, span: Span { line, col } });
    Ok(tokens)
}
