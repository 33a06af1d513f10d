//! Finite terms with metavariables, used only during elaboration.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::syntax::{fresh_avoiding, Head, Kind, Name, Term, TermNode, Type};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum EHead {
    Var(Name),
    Const(Name),
    Rec(Name),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum ETerm {
    Lam(Name, Box<ETerm>),
    App(EHead, Vec<ETerm>),
    /// `?m[σ] · S`: the first arguments instantiate the meta's context,
    /// in order; any further ones are applied to its solution.
    Meta(usize, Vec<ETerm>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum EType {
    Pi(Name, Box<EType>, Box<EType>),
    Atom(Name, Vec<ETerm>),
    Meta(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum EKind {
    Type,
    Cotype,
    Pi(Name, Box<EType>, Box<EKind>),
}

pub(crate) fn var(x: &Name) -> ETerm {
    ETerm::App(EHead::Var(x.clone()), Vec::new())
}

/// Fresh binder names, distinct from everything handed out before.
#[derive(Clone, Debug, Default)]
pub(crate) struct Names {
    used: BTreeSet<Name>,
}

impl Names {
    pub(crate) fn reserve(&mut self, x: Name) {
        self.used.insert(x);
    }

    pub(crate) fn fresh(&mut self, base: &str) -> Name {
        let ok = !base.is_empty() && base != "_" && base.chars().all(super::super::lexer::is_ident_char);
        let x = if ok && !self.used.contains(&Name::new(base)) {
            Name::new(base)
        } else {
            fresh_avoiding(if ok { base } else { "x" }, &self.used)
        };
        self.used.insert(x.clone());
        x
    }

    /// Like `fresh`, but also avoiding `extra`.
    pub(crate) fn fresh_except(&mut self, base: &str, extra: &BTreeSet<Name>) -> Name {
        let mut avoid = self.used.clone();
        avoid.extend(extra.iter().cloned());
        let x = fresh_avoiding(base, &avoid);
        self.used.insert(x.clone());
        x
    }
}

/// Substitution engine. Substituting a lambda for an applied variable
/// reduces on the spot; `fuel` bounds that work so ill-typed input cannot
/// loop.
pub(crate) struct Subst<'a> {
    pub names: &'a mut Names,
    pub fuel: &'a mut usize,
}

pub(crate) type Sub = BTreeMap<Name, ETerm>;

#[derive(Debug)]
pub(crate) struct OutOfFuel;

fn fv_of(f: impl FnOnce(&mut Vec<Name>, &mut BTreeSet<Name>)) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    f(&mut Vec::new(), &mut out);
    out
}

fn fv_sub(s: &Sub) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    for t in s.values() {
        fv_tm(t, &mut Vec::new(), &mut out);
    }
    out
}

pub(crate) fn fv_tm(t: &ETerm, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
    match t {
        ETerm::Lam(x, b) => {
            bound.push(x.clone());
            fv_tm(b, bound, out);
            bound.pop();
        }
        ETerm::App(h, s) => {
            if let EHead::Var(x) = h {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            for a in s {
                fv_tm(a, bound, out);
            }
        }
        ETerm::Meta(_, s) => {
            for a in s {
                fv_tm(a, bound, out);
            }
        }
    }
}

pub(crate) fn fv_ty(a: &EType, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
    match a {
        EType::Pi(x, d, c) => {
            fv_ty(d, bound, out);
            bound.push(x.clone());
            fv_ty(c, bound, out);
            bound.pop();
        }
        EType::Atom(_, s) => {
            for m in s {
                fv_tm(m, bound, out);
            }
        }
        EType::Meta(_) => {}
    }
}

fn fv_kind(k: &EKind, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
    if let EKind::Pi(x, d, r) = k {
        fv_ty(d, bound, out);
        bound.push(x.clone());
        fv_kind(r, bound, out);
        bound.pop();
    }
}

impl<'a> Subst<'a> {
    fn tick(&mut self) -> Result<(), OutOfFuel> {
        if *self.fuel == 0 {
            return Err(OutOfFuel);
        }
        *self.fuel -= 1;
        Ok(())
    }

    /// Enter binder `x`: rename it if it would capture, and stop
    /// substituting for it.
    fn under(&mut self, x: &Name, body_fv: BTreeSet<Name>, s: &Sub, danger: &BTreeSet<Name>) -> (Name, Sub) {
        let mut s2 = s.clone();
        s2.remove(x);
        if danger.contains(x) {
            let mut avoid = danger.clone();
            avoid.extend(body_fv);
            let y = self.names.fresh_except(x, &avoid);
            s2.insert(x.clone(), var(&y));
            (y, s2)
        } else {
            (x.clone(), s2)
        }
    }

    pub(crate) fn tm(&mut self, t: &ETerm, s: &Sub) -> Result<ETerm, OutOfFuel> {
        if s.is_empty() {
            return Ok(t.clone());
        }
        let danger = fv_sub(s);
        self.tm_d(t, s, &danger)
    }

    fn tm_d(&mut self, t: &ETerm, s: &Sub, danger: &BTreeSet<Name>) -> Result<ETerm, OutOfFuel> {
        self.tick()?;
        match t {
            ETerm::Lam(x, b) => {
                let (y, s2) = self.under(x, fv_of(|b2, o| fv_tm(b, b2, o)), s, danger);
                Ok(ETerm::Lam(y, Box::new(self.tm_d(b, &s2, danger)?)))
            }
            ETerm::App(h, args) => {
                let args2 = args.iter().map(|a| self.tm_d(a, s, danger)).collect::<Result<Vec<_>, _>>()?;
                match h {
                    EHead::Var(x) if s.contains_key(x) => self.apply(&s[x], args2),
                    _ => Ok(ETerm::App(h.clone(), args2)),
                }
            }
            ETerm::Meta(m, args) => {
                let args2 = args.iter().map(|a| self.tm_d(a, s, danger)).collect::<Result<Vec<_>, _>>()?;
                Ok(ETerm::Meta(*m, args2))
            }
        }
    }

    /// `f · args`, reducing when `f` is a lambda.
    pub(crate) fn apply(&mut self, f: &ETerm, args: Vec<ETerm>) -> Result<ETerm, OutOfFuel> {
        let mut f = f.clone();
        let mut it = args.into_iter();
        while let Some(a) = it.next() {
            self.tick()?;
            f = match f {
                ETerm::Lam(x, b) => {
                    let mut s = Sub::new();
                    s.insert(x, a);
                    self.tm(&b, &s)?
                }
                ETerm::App(h, mut sp) => {
                    sp.push(a);
                    sp.extend(it.by_ref());
                    return Ok(ETerm::App(h, sp));
                }
                // arguments beyond the meta's context are applied to its
                // solution once known
                ETerm::Meta(m, mut sp) => {
                    sp.push(a);
                    sp.extend(it.by_ref());
                    return Ok(ETerm::Meta(m, sp));
                }
            };
        }
        Ok(f)
    }

    pub(crate) fn ty(&mut self, a: &EType, s: &Sub) -> Result<EType, OutOfFuel> {
        if s.is_empty() {
            return Ok(a.clone());
        }
        let danger = fv_sub(s);
        self.ty_d(a, s, &danger)
    }

    fn ty_d(&mut self, a: &EType, s: &Sub, danger: &BTreeSet<Name>) -> Result<EType, OutOfFuel> {
        self.tick()?;
        match a {
            EType::Pi(x, d, c) => {
                let d2 = self.ty_d(d, s, danger)?;
                let (y, s2) = self.under(x, fv_of(|b2, o| fv_ty(c, b2, o)), s, danger);
                Ok(EType::Pi(y, Box::new(d2), Box::new(self.ty_d(c, &s2, danger)?)))
            }
            EType::Atom(f, args) => Ok(EType::Atom(
                f.clone(),
                args.iter().map(|m| self.tm_d(m, s, danger)).collect::<Result<Vec<_>, _>>()?,
            )),
            EType::Meta(_) => Ok(a.clone()),
        }
    }

    pub(crate) fn kind(&mut self, k: &EKind, s: &Sub) -> Result<EKind, OutOfFuel> {
        match k {
            EKind::Type | EKind::Cotype => Ok(k.clone()),
            EKind::Pi(x, d, r) => {
                let d2 = self.ty(d, s)?;
                let danger = fv_sub(s);
                let (y, s2) = self.under(x, fv_of(|b2, o| fv_kind(r, b2, o)), s, &danger);
                Ok(EKind::Pi(y, Box::new(d2), Box::new(self.kind(r, &s2)?)))
            }
        }
    }
}

pub(crate) fn single(x: &Name, t: ETerm) -> Sub {
    let mut s = Sub::new();
    s.insert(x.clone(), t);
    s
}

// --- conversions to and from kernel syntax -------------------------------

pub(crate) fn from_term(t: &Term) -> ETerm {
    match t.node() {
        // kernel terms produced by elaboration are finite and stub-free
        TermNode::Stub => ETerm::App(EHead::Const(Name::new("_")), Vec::new()),
        TermNode::Lam(x, b) => ETerm::Lam(x.clone(), Box::new(from_term(b))),
        TermNode::App(h, s) => {
            let h = match h {
                Head::Var(x) => EHead::Var(x.clone()),
                Head::Const(c) => EHead::Const(c.clone()),
                Head::Rec(r) => EHead::Rec(r.clone()),
            };
            ETerm::App(h, s.iter().map(from_term).collect())
        }
    }
}

pub(crate) fn from_type(a: &Type) -> EType {
    match a {
        Type::Pi(x, d, c) => EType::Pi(x.clone(), Box::new(from_type(d)), Box::new(from_type(c))),
        Type::Atom(f, s) => EType::Atom(f.clone(), s.iter().map(from_term).collect()),
    }
}

pub(crate) fn from_kind(k: &Kind) -> EKind {
    match k {
        Kind::Type => EKind::Type,
        Kind::Cotype => EKind::Cotype,
        Kind::Pi(x, d, r) => EKind::Pi(x.clone(), Box::new(from_type(d)), Box::new(from_kind(r))),
    }
}

/// Fails on a remaining metavariable, returning its id.
pub(crate) fn to_term(t: &ETerm) -> Result<Term, usize> {
    match t {
        ETerm::Lam(x, b) => Ok(Term::lam(x.clone(), to_term(b)?)),
        ETerm::App(h, s) => {
            let h = match h {
                EHead::Var(x) => Head::Var(x.clone()),
                EHead::Const(c) => Head::Const(c.clone()),
                EHead::Rec(r) => Head::Rec(r.clone()),
            };
            Ok(Term::app(h, s.iter().map(to_term).collect::<Result<_, _>>()?))
        }
        ETerm::Meta(m, _) => Err(*m),
    }
}

/// Fails on a remaining type metavariable, returning its id.
pub(crate) fn to_type(a: &EType) -> Result<Type, Result<usize, usize>> {
    match a {
        EType::Pi(x, d, c) => Ok(Type::Pi(x.clone(), Box::new(to_type(d)?), Box::new(to_type(c)?))),
        EType::Atom(f, s) => Ok(Type::Atom(f.clone(), s.iter().map(to_term).collect::<Result<_, _>>().map_err(Ok)?)),
        EType::Meta(m) => Err(Err(*m)),
    }
}

pub(crate) fn to_kind(k: &EKind) -> Result<Kind, Result<usize, usize>> {
    match k {
        EKind::Type => Ok(Kind::Type),
        EKind::Cotype => Ok(Kind::Cotype),
        EKind::Pi(x, d, r) => Ok(Kind::Pi(x.clone(), Box::new(to_type(d)?), Box::new(to_kind(r)?))),
    }
}
