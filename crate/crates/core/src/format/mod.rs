//! Line-oriented text formats.
//!
//! Every format holds one record per line with `#` comments. Cyclic
//! sequences are written from their smallest element so that serializing a
//! parsed value reproduces the canonical text.

pub mod hg;
pub mod plat;
pub mod surf;
pub mod tgl;

use std::fmt;

use thiserror::Error;

use crate::model::{Endpoint, Side, VertexId};

pub use hg::{parse_hg, serialize_hg};
pub use plat::{parse_plat, serialize_plat};
pub use surf::{parse_surf, serialize_surf};
pub use tgl::{parse_tgl, serialize_tgl};

/// One problem found while parsing, 1-based position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub diagnostics: Vec<Diagnostic>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, d) in self.diagnostics.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// A whitespace-separated word and its 1-based column.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Token<'a> {
    pub text: &'a str,
    pub col: usize,
}

/// A non-empty line with comments removed.
pub(crate) struct Line<'a> {
    pub number: usize,
    pub tokens: Vec<Token<'a>>,
}

pub(crate) fn lines(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let content = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let mut tokens = Vec::new();
        let mut start = None;
        for (i, ch) in content.char_indices() {
            if ch.is_whitespace() {
                if let Some(s) = start.take() {
                    tokens.push(Token { text: &content[s..i], col: content[..s].chars().count() + 1 });
                }
            } else if start.is_none() {
                start = Some(i);
            }
        }
        if let Some(s) = start {
            tokens.push(Token { text: &content[s..], col: content[..s].chars().count() + 1 });
        }
        if !tokens.is_empty() {
            out.push(Line { number: k + 1, tokens });
        }
    }
    out
}

/// Collects diagnostics while a parser keeps going.
#[derive(Default)]
pub(crate) struct Sink {
    pub diagnostics: Vec<Diagnostic>,
}

impl Sink {
    pub fn error(&mut self, line: usize, col: usize, message: impl Into<String>) {
        self.diagnostics.push(Diagnostic { line, col, message: message.into() });
    }

    pub fn finish<T>(mut self, value: T) -> Result<T, ParseError> {
        if self.diagnostics.is_empty() {
            Ok(value)
        } else {
            self.diagnostics.sort_by_key(|d| (d.line, d.col));
            Err(ParseError { diagnostics: self.diagnostics })
        }
    }
}

pub(crate) fn is_ident(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

pub(crate) fn parse_vertex(s: &str) -> Option<VertexId> {
    let (num, side) = match s.strip_suffix('+') {
        Some(n) => (n, Side::Plus),
        None => (s.strip_suffix('-')?, Side::Minus),
    };
    if num.is_empty() || !num.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let handle: usize = num.parse().ok()?;
    (handle >= 1).then_some(VertexId::new(handle, side))
}

pub(crate) fn parse_endpoint(s: &str) -> Option<Endpoint> {
    let (v, label) = s.split_once('.')?;
    let vertex = parse_vertex(v)?;
    is_ident(label).then(|| Endpoint::new(vertex, label))
}

/// Split a comma list, reporting the column of each item within the line.
pub(crate) fn comma_items<'a>(token: Token<'a>) -> Vec<Token<'a>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for part in token.text.split(',') {
        out.push(Token { text: part, col: token.col + offset });
        offset += part.chars().count() + 1;
    }
    out
}

/// Everything after the `:` separator joined back into one comma list
/// token, so that `a, b, c` and `a,b,c` read the same.
pub(crate) fn list_after_colon<'a>(line: &Line<'a>, colon_at: usize, buf: &'a mut String) -> Option<Token<'a>> {
    let rest = &line.tokens[colon_at + 1..];
    let first = rest.first()?;
    buf.clear();
    for t in rest {
        buf.push_str(t.text);
    }
    Some(Token { text: buf.as_str(), col: first.col })
}
