//! Kernel syntax back to concrete syntax.
//!
//! Output re-parses: binders that would be read as declared names are
//! renamed, and `{x : A} B` collapses to `A -> B` when `x` is unused.
//! Implicit arguments and implicit Pis are omitted unless requested.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use super::lexer::is_ident_char;
use crate::syntax::{
    all_var_names, all_var_names_kind, all_var_names_type, free_vars, free_vars_type, fresh_avoiding, Decl,
    DeclBody, Head, Kind, Name, Signature, Term, TermNode, Type,
};

#[derive(Clone, Copy, Debug, Default)]
pub struct PrintOptions {
    pub show_implicit: bool,
}

pub struct Printer<'a> {
    sig: Option<&'a Signature>,
    opts: PrintOptions,
}

fn valid_binder(x: &str) -> bool {
    !x.is_empty() && x != "_" && x != "type" && x != "cotype" && x.chars().all(is_ident_char)
        && !x.contains("->")
}

impl<'a> Printer<'a> {
    pub fn new(sig: Option<&'a Signature>, opts: PrintOptions) -> Self {
        Printer { sig, opts }
    }

    /// Without a signature every argument is shown.
    pub fn plain() -> Printer<'static> {
        Printer { sig: None, opts: PrintOptions { show_implicit: true } }
    }

    fn hidden_args(&self, h: &Name) -> usize {
        if self.opts.show_implicit {
            return 0;
        }
        self.sig.and_then(|s| s.get(h)).map_or(0, |d| d.implicit)
    }

    fn clashes(&self, x: &Name) -> bool {
        !valid_binder(x) || self.sig.map_or(false, |s| s.get(x).is_some())
    }

    pub fn term(&self, m: &Term) -> String {
        let mut out = String::new();
        self.term_into(&mut out, m, false);
        out
    }

    pub fn ty(&self, a: &Type) -> String {
        let mut out = String::new();
        self.type_into(&mut out, a, false);
        out
    }

    pub fn kind(&self, k: &Kind) -> String {
        let mut out = String::new();
        self.kind_into(&mut out, k);
        out
    }

    /// `atomic` requests parentheses around anything that is not a single
    /// token.
    fn term_into(&self, out: &mut String, m: &Term, atomic: bool) {
        match m.node() {
            TermNode::Stub => out.push('_'),
            TermNode::Lam(x, body) => {
                let (x, body) = if self.clashes(x) {
                    let mut avoid = BTreeSet::new();
                    all_var_names(body, &mut avoid);
                    self.extend_avoid(&mut avoid);
                    let y = fresh_avoiding(if valid_binder(x) { x } else { "x" }, &avoid);
                    let b = body.rename_free(x, &y);
                    (y, b)
                } else {
                    (x.clone(), body.clone())
                };
                if atomic {
                    out.push('(');
                }
                let _ = write!(out, "[{}] ", x);
                self.term_into(out, &body, false);
                if atomic {
                    out.push(')');
                }
            }
            TermNode::App(h, spine) => {
                let skip = match h {
                    Head::Var(_) => 0,
                    _ => self.hidden_args(h.name()).min(spine.len()),
                };
                let shown = &spine[skip..];
                if shown.is_empty() {
                    out.push_str(h.name());
                    return;
                }
                if atomic {
                    out.push('(');
                }
                out.push_str(h.name());
                for a in shown {
                    out.push(' ');
                    self.term_into(out, a, true);
                }
                if atomic {
                    out.push(')');
                }
            }
        }
    }

    fn extend_avoid(&self, avoid: &mut BTreeSet<Name>) {
        if let Some(sig) = self.sig {
            for d in sig.decls() {
                avoid.insert(d.name.clone());
            }
        }
        avoid.insert(Name::new("type"));
        avoid.insert(Name::new("cotype"));
    }

    fn pi_binder(&self, x: &Name, rest_names: impl FnOnce(&mut BTreeSet<Name>)) -> Option<Name> {
        if !self.clashes(x) {
            return None;
        }
        let mut avoid = BTreeSet::new();
        rest_names(&mut avoid);
        self.extend_avoid(&mut avoid);
        Some(fresh_avoiding(if valid_binder(x) { x } else { "x" }, &avoid))
    }

    fn type_into(&self, out: &mut String, a: &Type, atomic: bool) {
        match a {
            Type::Atom(f, spine) => {
                let skip = self.hidden_args(f).min(spine.len());
                let shown = &spine[skip..];
                if shown.is_empty() {
                    out.push_str(f);
                    return;
                }
                if atomic {
                    out.push('(');
                }
                out.push_str(f);
                for m in shown {
                    out.push(' ');
                    self.term_into(out, m, true);
                }
                if atomic {
                    out.push(')');
                }
            }
            Type::Pi(x, dom, cod) => {
                if atomic {
                    out.push('(');
                }
                if !free_vars_type(cod).contains(x) {
                    self.type_into(out, dom, matches!(**dom, Type::Pi(..)));
                    out.push_str(" -> ");
                    self.type_into(out, cod, false);
                } else {
                    let renamed = self.pi_binder(x, |s| all_var_names_type(cod, s));
                    let (x, cod) = match renamed {
                        Some(y) => {
                            let c = cod.rename_free(x, &y);
                            (y, c)
                        }
                        None => (x.clone(), (**cod).clone()),
                    };
                    let _ = write!(out, "{{{} : ", x);
                    self.type_into(out, dom, false);
                    out.push_str("} ");
                    self.type_into(out, &cod, false);
                }
                if atomic {
                    out.push(')');
                }
            }
        }
    }

    fn kind_into(&self, out: &mut String, k: &Kind) {
        match k {
            Kind::Type => out.push_str("type"),
            Kind::Cotype => out.push_str("cotype"),
            Kind::Pi(x, dom, rest) => {
                let mut fv = BTreeSet::new();
                crate::syntax::fv_kind(rest, &mut Vec::new(), &mut fv);
                if !fv.contains(x) {
                    self.type_into(out, dom, matches!(**dom, Type::Pi(..)));
                    out.push_str(" -> ");
                    self.kind_into(out, rest);
                } else {
                    let renamed = self.pi_binder(x, |s| all_var_names_kind(rest, s));
                    let (x, rest) = match renamed {
                        Some(y) => {
                            let r = rest.rename_free(x, &y);
                            (y, r)
                        }
                        None => (x.clone(), (**rest).clone()),
                    };
                    let _ = write!(out, "{{{} : ", x);
                    self.type_into(out, dom, false);
                    out.push_str("} ");
                    self.kind_into(out, &rest);
                }
            }
        }
    }

    /// `name : A.` or `name : A = M.`, hiding the declaration's own implicit
    /// binders unless requested.
    pub fn decl(&self, d: &Decl) -> String {
        let hide = if self.opts.show_implicit { 0 } else { d.implicit };
        let mut out = String::new();
        out.push_str(&d.name);
        out.push_str(" : ");
        match &d.body {
            DeclBody::Family(k) => self.kind_into(&mut out, drop_kind_pis(k, hide)),
            DeclBody::Const(a) => self.type_into(&mut out, drop_type_pis(a, hide), false),
            DeclBody::Def(a, m) => {
                self.type_into(&mut out, drop_type_pis(a, hide), false);
                out.push_str(" = ");
                self.term_into(&mut out, drop_lams(m, hide), false);
            }
        }
        out.push('.');
        out
    }

    pub fn signature(&self, sig: &Signature) -> String {
        let mut out = String::new();
        for d in sig.decls() {
            out.push_str(&self.decl(d));
            out.push('\n');
        }
        out
    }
}

fn drop_type_pis(a: &Type, n: usize) -> &Type {
    match (n, a) {
        (0, _) => a,
        (_, Type::Pi(_, _, b)) => drop_type_pis(b, n - 1),
        _ => a,
    }
}

fn drop_kind_pis(k: &Kind, n: usize) -> &Kind {
    match (n, k) {
        (0, _) => k,
        (_, Kind::Pi(_, _, r)) => drop_kind_pis(r, n - 1),
        _ => k,
    }
}

fn drop_lams(m: &Term, n: usize) -> &Term {
    match (n, m.node()) {
        (0, _) => m,
        (_, TermNode::Lam(_, b)) => drop_lams(b, n - 1),
        _ => m,
    }
}

/// Every argument shown, no signature-aware renaming.
pub fn term_to_string(m: &Term) -> String {
    Printer::plain().term(m)
}

pub fn type_to_string(a: &Type) -> String {
    Printer::plain().ty(a)
}

pub fn kind_to_string(k: &Kind) -> String {
    Printer::plain().kind(k)
}

/// Free variables of a term, rendered for messages.
pub fn vars_to_string(m: &Term) -> String {
    let v: Vec<String> = free_vars(m).iter().map(|n| n.to_string()).collect();
    v.join(", ")
}
