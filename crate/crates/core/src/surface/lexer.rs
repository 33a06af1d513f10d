//! Tokens of the Twelf-style concrete syntax.

use alloc::string::String;
use alloc::vec::Vec;

use crate::diag::{Code, Diagnostic, Span};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Colon,
    Dot,
    Eq,
    LParen,
    RParen,
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    Arrow,
    BackArrow,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => alloc::format!("identifier `{}`", s),
            Tok::Colon => "`:`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Eq => "`=`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::BackArrow => "`<-`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

pub fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '/' | '\'' | '+' | '-')
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.src[self.pos..].chars();
        it.next();
        it.next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn mark(&self) -> (usize, u32, u32) {
        (self.pos, self.line, self.col)
    }

    fn span_from(&self, m: (usize, u32, u32)) -> Span {
        Span { start: m.0, end: self.pos, line: m.1, col: m.2, end_line: self.line, end_col: self.col }
    }
}

/// Tokenize. Lexical errors are reported and the offending character
/// skipped, so parsing can still proceed.
pub fn lex(src: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    let mut cur = Cursor { src, pos: 0, line: 1, col: 1 };
    let mut toks = Vec::new();
    let mut diags = Vec::new();
    while let Some(c) = cur.peek() {
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == '%' {
            while let Some(c) = cur.peek() {
                if c == '\n' {
                    break;
                }
                cur.bump();
            }
            continue;
        }
        let m = cur.mark();
        let single = match c {
            ':' => Some(Tok::Colon),
            '.' => Some(Tok::Dot),
            '=' => Some(Tok::Eq),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBrack),
            ']' => Some(Tok::RBrack),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            _ => None,
        };
        if let Some(tok) = single {
            cur.bump();
            toks.push(Token { tok, span: cur.span_from(m) });
            continue;
        }
        if c == '-' && cur.peek2() == Some('>') {
            cur.bump();
            cur.bump();
            toks.push(Token { tok: Tok::Arrow, span: cur.span_from(m) });
            continue;
        }
        if c == '<' && cur.peek2() == Some('-') {
            cur.bump();
            cur.bump();
            toks.push(Token { tok: Tok::BackArrow, span: cur.span_from(m) });
            continue;
        }
        if is_ident_char(c) {
            let mut s = String::new();
            while let Some(c) = cur.peek() {
                // `->` terminates an identifier
                if !is_ident_char(c) || (c == '-' && cur.peek2() == Some('>')) {
                    break;
                }
                s.push(c);
                cur.bump();
            }
            toks.push(Token { tok: Tok::Ident(s), span: cur.span_from(m) });
            continue;
        }
        cur.bump();
        let msg = if c.is_ascii() {
            alloc::format!("unexpected character `{}`", c)
        } else {
            alloc::format!("unexpected character `{}` (identifiers are ASCII only)", c)
        };
        diags.push(Diagnostic::error(Code::Lexical, msg).with_span(Some(cur.span_from(m))));
    }
    let m = cur.mark();
    toks.push(Token { tok: Tok::Eof, span: cur.span_from(m) });
    (toks, diags)
}
