//! Recursive-descent parser for declarations `name : A.` and
//! `name : A = M.`

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use super::lexer::{lex, Tok, Token};
use crate::diag::{Code, Diagnostic, Span};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binder {
    pub name: String,
    pub ann: Option<Box<Expr>>,
    pub span: Span,
}

/// Concrete expressions. Terms, types and kinds share one grammar; the
/// elaborator sorts them out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Ident(String, Span),
    /// `_`
    Hole(Span),
    /// Head applied to one or more arguments.
    App(Box<Expr>, Vec<Expr>, Span),
    /// `{x : A} B` or `{x} B`
    Pi(Binder, Box<Expr>, Span),
    /// `A -> B`; `B <- A` is normalized to this.
    Arrow(Box<Expr>, Box<Expr>, Span),
    /// `[x] M` or `[x : A] M`
    Lam(Binder, Box<Expr>, Span),
}

impl Expr {
    pub fn span(&self) -> Span {
        match self {
            Expr::Ident(_, s) | Expr::Hole(s) | Expr::App(_, _, s) | Expr::Pi(_, _, s) => *s,
            Expr::Arrow(_, _, s) | Expr::Lam(_, _, s) => *s,
        }
    }

    /// The rightmost target of a Pi/arrow telescope.
    pub fn target(&self) -> &Expr {
        match self {
            Expr::Pi(_, b, _) | Expr::Arrow(_, b, _) => b.target(),
            e => e,
        }
    }

    /// True if this is a kind: its telescope ends in `type` or `cotype`.
    pub fn is_kind(&self) -> bool {
        matches!(self.target(), Expr::Ident(s, _) if s == "type" || s == "cotype")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceDecl {
    pub name: String,
    pub name_span: Span,
    pub ty: Expr,
    pub def: Option<Expr>,
    pub span: Span,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, Diagnostic>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, what: &str) -> Diagnostic {
        let msg = alloc::format!("expected {}, found {}", what, self.peek().describe());
        Diagnostic::error(Code::Syntax, msg).with_span(Some(self.span()))
    }

    fn expect(&mut self, tok: Tok, what: &str) -> PResult<Token> {
        if *self.peek() == tok {
            Ok(self.bump())
        } else {
            Err(self.error_here(what))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<(String, Span)> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let sp = self.bump().span;
                Ok((s, sp))
            }
            _ => Err(self.error_here(what)),
        }
    }

    fn decl(&mut self) -> PResult<SurfaceDecl> {
        let (name, name_span) = self.ident("a declaration name")?;
        if name == "_" || name == "type" || name == "cotype" {
            return Err(Diagnostic::error(Code::Syntax, alloc::format!("`{}` cannot be declared", name))
                .with_span(Some(name_span)));
        }
        self.expect(Tok::Colon, "`:`")?;
        let ty = self.expr()?;
        let def = if *self.peek() == Tok::Eq {
            self.bump();
            Some(self.expr()?)
        } else {
            None
        };
        let dot = self.expect(Tok::Dot, "`.` ending the declaration")?;
        Ok(SurfaceDecl { name, name_span, ty, def, span: name_span.join(dot.span) })
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Tok::Ident(_) | Tok::LParen | Tok::LBrace | Tok::LBrack)
    }

    fn expr(&mut self) -> PResult<Expr> {
        if !self.starts_atom() {
            return Err(self.error_here("an expression"));
        }
        let first = self.app()?;
        match self.peek() {
            Tok::Arrow => {
                self.bump();
                let rhs = self.expr()?;
                let sp = first.span().join(rhs.span());
                Ok(Expr::Arrow(Box::new(first), Box::new(rhs), sp))
            }
            Tok::BackArrow => {
                // A <- B <- C  is  C -> (B -> A)
                let mut acc = first;
                while *self.peek() == Tok::BackArrow {
                    self.bump();
                    if !self.starts_atom() {
                        return Err(self.error_here("an expression after `<-`"));
                    }
                    let rhs = self.app()?;
                    let sp = acc.span().join(rhs.span());
                    acc = Expr::Arrow(Box::new(rhs), Box::new(acc), sp);
                }
                if *self.peek() == Tok::Arrow {
                    return Err(Diagnostic::error(Code::Syntax, "mixing `->` and `<-` requires parentheses")
                        .with_span(Some(self.span())));
                }
                Ok(acc)
            }
            _ => Ok(first),
        }
    }

    /// Juxtaposition. A binder argument extends to the end of the
    /// expression and is therefore always last.
    fn app(&mut self) -> PResult<Expr> {
        let bare_binder = |t: &Tok| matches!(t, Tok::LBrace | Tok::LBrack);
        if bare_binder(self.peek()) {
            return self.atom();
        }
        let head = self.atom()?;
        let mut args = Vec::new();
        while self.starts_atom() {
            let last = bare_binder(self.peek());
            args.push(self.atom()?);
            if last {
                break;
            }
        }
        if args.is_empty() {
            Ok(head)
        } else {
            let sp = head.span().join(args.last().unwrap().span());
            Ok(Expr::App(Box::new(head), args, sp))
        }
    }

    fn atom(&mut self) -> PResult<Expr> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let sp = self.bump().span;
                if s == "_" {
                    Ok(Expr::Hole(sp))
                } else {
                    Ok(Expr::Ident(s, sp))
                }
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::LBrace => {
                let open = self.bump().span;
                let b = self.binder(Tok::RBrace, "`}`")?;
                let body = self.expr()?;
                let sp = open.join(body.span());
                Ok(Expr::Pi(b, Box::new(body), sp))
            }
            Tok::LBrack => {
                let open = self.bump().span;
                let b = self.binder(Tok::RBrack, "`]`")?;
                let body = self.expr()?;
                let sp = open.join(body.span());
                Ok(Expr::Lam(b, Box::new(body), sp))
            }
            _ => Err(self.error_here("an expression")),
        }
    }

    fn binder(&mut self, close: Tok, close_desc: &str) -> PResult<Binder> {
        let (name, span) = self.ident("a bound variable")?;
        let ann = if *self.peek() == Tok::Colon {
            self.bump();
            Some(Box::new(self.expr()?))
        } else {
            None
        };
        self.expect(close, close_desc)?;
        Ok(Binder { name, ann, span })
    }

    /// Skip to just after the next `.`, for error recovery.
    fn recover(&mut self) {
        loop {
            match self.peek() {
                Tok::Eof => return,
                Tok::Dot => {
                    self.bump();
                    return;
                }
                _ => {
                    self.bump();
                }
            }
        }
    }
}

/// Parse a whole file. Declarations with syntax errors are dropped and
/// reported; parsing resumes after the next `.`.
pub fn parse(src: &str) -> (Vec<SurfaceDecl>, Vec<Diagnostic>) {
    let (toks, mut diags) = lex(src);
    let mut p = Parser { toks, pos: 0 };
    let mut decls = Vec::new();
    while *p.peek() != Tok::Eof {
        match p.decl() {
            Ok(d) => decls.push(d),
            Err(e) => {
                diags.push(e);
                p.recover();
            }
        }
    }
    (decls, diags)
}
