//! Recursive-descent parser for the ASCII formula syntax.
//!
//! ```text
//! formula = imp
//! imp     = or ( "->" imp )?          right associative
//! or      = and ( "|" and )*
//! and     = unary ( "&" unary )*
//! unary   = "#" unary | "~" unary | atom | "true" | "false" | "(" formula ")"
//! ```
//!
//! Atoms start with a lowercase letter and continue with letters, digits or
//! `_`. Names starting with `_` are reserved for generated atoms.

use crate::formula::Formula;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {offset}: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<String>,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Arrow,
    Bar,
    Amp,
    Hash,
    Tilde,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Arrow => "`->`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Hash => "`#`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(src: &str, allow_reserved: bool) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                toks.push((i, Tok::Arrow));
                i += 2;
            }
            b'|' => {
                toks.push((i, Tok::Bar));
                i += 1;
            }
            b'&' => {
                toks.push((i, Tok::Amp));
                i += 1;
            }
            b'#' => {
                toks.push((i, Tok::Hash));
                i += 1;
            }
            b'~' => {
                toks.push((i, Tok::Tilde));
                i += 1;
            }
            b'(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            b')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            b'a'..=b'z' | b'_' if c != b'_' || allow_reserved => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((start, Tok::Ident(src[start..i].to_string())));
            }
            _ => {
                let found = src[i..].chars().next().map(|ch| format!("`{ch}`")).unwrap_or_default();
                let expected = if c == b'_' {
                    vec!["an atom not starting with `_`".to_string()]
                } else {
                    vec!["a formula token".to_string()]
                };
                return Err(ParseError { offset: i, expected, found });
            }
        }
    }
    toks.push((src.len(), Tok::Eof));
    Ok(toks)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        ParseError {
            offset: self.offset(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().describe(),
        }
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.imp()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.and()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let rhs = self.and()?;
            acc = Formula::or(acc, rhs);
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            acc = Formula::and(acc, rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        const START: &[&str] = &["atom", "`true`", "`false`", "`#`", "`~`", "`(`"];
        match self.peek().clone() {
            Tok::Hash => {
                self.bump();
                Ok(Formula::boxed(self.unary()?))
            }
            Tok::Tilde => {
                self.bump();
                Ok(Formula::neg(self.unary()?))
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(match name.as_str() {
                    "true" => Formula::Top,
                    "false" => Formula::Bot,
                    _ => Formula::Atom(name),
                })
            }
            Tok::LParen => {
                self.bump();
                let inner = self.imp()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error(&["`)`", "`->`", "`|`", "`&`"]));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.error(START)),
        }
    }
}

/// Parse a formula, desugaring `~A` to `A -> false`.
pub fn parse(src: &str) -> Result<Formula, ParseError> {
    parse_with(src, false)
}

/// Like [`parse`] but also accepts generated `_`-prefixed atoms. Used when
/// reading back serialized certificates and models.
pub fn parse_internal(src: &str) -> Result<Formula, ParseError> {
    parse_with(src, true)
}

fn parse_with(src: &str, allow_reserved: bool) -> Result<Formula, ParseError> {
    let mut parser = Parser { toks: lex(src, allow_reserved)?, pos: 0 };
    let f = parser.imp()?;
    if *parser.peek() != Tok::Eof {
        return Err(parser.error(&["`->`", "`|`", "`&`", "end of input"]));
    }
    Ok(f)
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}
