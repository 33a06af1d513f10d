//! Depth-`k` expansion of finitary signatures and equality up to depth `k`.
//!
//! Expansion replaces every recursion constant by its (recursively expanded)
//! definition body, applied hereditarily to the expanded arguments. Constant
//! heads consume one observation, so contractive definitions unfold to any
//! finite depth in finitely many steps.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::subst::{erase, spine_apply, Undefined};
use crate::syntax::{Decl, DeclBody, Depth, Head, Kind, Name, Signature, SimpleType, Term, TermNode, Type};

#[derive(Clone, Debug)]
pub struct DefEntry {
    pub ty: Type,
    pub body: Term,
    /// Always `erase(ty)`.
    pub tau: SimpleType,
}

/// Recursion constants of a signature with their declared types and bodies.
#[derive(Clone, Debug, Default)]
pub struct DefTable {
    defs: BTreeMap<Name, DefEntry>,
}

impl DefTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_signature(sig: &Signature) -> Self {
        let mut t = DefTable::new();
        for d in sig.decls() {
            if let DeclBody::Def(ty, body) = &d.body {
                t.insert(d.name.clone(), ty.clone(), body.clone());
            }
        }
        t
    }

    pub fn insert(&mut self, name: Name, ty: Type, body: Term) {
        let tau = erase(&ty);
        self.defs.insert(name, DefEntry { ty, body, tau });
    }

    pub fn remove(&mut self, name: &Name) -> Option<DefEntry> {
        self.defs.remove(name)
    }

    pub fn get(&self, name: &Name) -> Option<&DefEntry> {
        self.defs.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &Name> {
        self.defs.keys()
    }

    pub fn len(&self) -> usize {
        self.defs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.defs.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExpandError {
    UnboundRec(Name),
    /// Spine application failed while unfolding the named definition.
    Undefined(Name, Undefined),
    /// The definition needs its own expansion at the same depth, i.e. it is
    /// not guarded by a constant.
    Unguarded(Name),
}

impl fmt::Display for ExpandError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpandError::UnboundRec(r) => write!(f, "unknown recursive definition `{}`", r),
            ExpandError::Undefined(r, u) => write!(f, "expanding `{}`: {}", r, u),
            ExpandError::Unguarded(r) => {
                write!(f, "expanding `{}` requires itself at the same depth (no constructor guards the recursion)", r)
            }
        }
    }
}

/// Expansion with a memo of `(definition, depth) -> expanded body`.
///
/// Definition bodies are closed, so a memoized body can be shared by every
/// use site; capture is handled by hereditary substitution at the use site.
pub struct Expander {
    defs: DefTable,
    memo: BTreeMap<(Name, Depth), Term>,
    in_progress: BTreeSet<(Name, Depth)>,
    max_entries: usize,
}

impl Expander {
    pub fn new(defs: DefTable) -> Self {
        Expander { defs, memo: BTreeMap::new(), in_progress: BTreeSet::new(), max_entries: usize::MAX }
    }

    /// Bound the memo; it is flushed when full.
    pub fn with_max_entries(mut self, n: usize) -> Self {
        self.max_entries = n.max(1);
        self
    }

    pub fn defs(&self) -> &DefTable {
        &self.defs
    }

    /// Make a definition available to later expansions.
    pub fn add_def(&mut self, name: Name, ty: Type, body: Term) {
        self.defs.insert(name, ty, body);
    }

    /// Withdraw a definition and forget its memoized expansions.
    pub fn remove_def(&mut self, name: &Name) {
        self.defs.remove(name);
        self.memo.retain(|(n, _), _| n != name);
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// `exp_k(r)`: the expanded body of a definition.
    pub fn expand_def(&mut self, r: &Name, k: Depth) -> Result<Term, ExpandError> {
        if k == 0 {
            return Ok(Term::stub());
        }
        let key = (r.clone(), k);
        if let Some(t) = self.memo.get(&key) {
            return Ok(t.clone());
        }
        let entry = self.defs.get(r).ok_or_else(|| ExpandError::UnboundRec(r.clone()))?;
        if !self.in_progress.insert(key.clone()) {
            return Err(ExpandError::Unguarded(r.clone()));
        }
        let body = entry.body.clone();
        let res = self.expand_term(&body, k);
        self.in_progress.remove(&key);
        let t = res?;
        if self.memo.len() >= self.max_entries {
            self.memo.clear();
        }
        self.memo.insert(key, t.clone());
        Ok(t)
    }

    /// `exp_k(M)`.
    pub fn expand_term(&mut self, m: &Term, k: Depth) -> Result<Term, ExpandError> {
        if k == 0 {
            return Ok(Term::stub());
        }
        match m.node() {
            TermNode::Stub => Ok(m.clone()),
            TermNode::Lam(x, body) => Ok(Term::lam(x.clone(), self.expand_term(body, k)?)),
            TermNode::App(h @ Head::Const(_), spine) => Ok(Term::app(h.clone(), self.expand_suspended(spine, k)?)),
            TermNode::App(h @ Head::Var(_), spine) => Ok(Term::app(h.clone(), self.expand_continuing(spine, k)?)),
            TermNode::App(Head::Rec(r), spine) => {
                let args = self.expand_continuing(spine, k)?;
                let body = self.expand_def(r, k)?;
                let tau = &self.defs.get(r).ok_or_else(|| ExpandError::UnboundRec(r.clone()))?.tau;
                spine_apply(&args, tau, &body, k).map_err(|u| ExpandError::Undefined(r.clone(), u))
            }
        }
    }

    /// `exp^T_k`: elements at the same depth.
    pub fn expand_continuing(&mut self, spine: &[Term], k: Depth) -> Result<Vec<Term>, ExpandError> {
        spine.iter().map(|m| self.expand_term(m, k)).collect()
    }

    /// `exp^S_k`: elements one depth lower.
    pub fn expand_suspended(&mut self, spine: &[Term], k: Depth) -> Result<Vec<Term>, ExpandError> {
        let k2 = k.saturating_sub(1);
        spine.iter().map(|m| self.expand_term(m, k2)).collect()
    }

    /// `exp_k(A)`; atomic-type indices are observed at `k - 1`.
    pub fn expand_type(&mut self, a: &Type, k: Depth) -> Result<Type, ExpandError> {
        match a {
            Type::Pi(x, b, c) => {
                Ok(Type::Pi(x.clone(), Box::new(self.expand_type(b, k)?), Box::new(self.expand_type(c, k)?)))
            }
            Type::Atom(f, spine) => Ok(Type::Atom(f.clone(), self.expand_suspended(spine, k)?)),
        }
    }

    pub fn expand_kind(&mut self, kd: &Kind, k: Depth) -> Result<Kind, ExpandError> {
        match kd {
            Kind::Type | Kind::Cotype => Ok(kd.clone()),
            Kind::Pi(x, a, rest) => {
                Ok(Kind::Pi(x.clone(), Box::new(self.expand_type(a, k)?), Box::new(self.expand_kind(rest, k)?)))
            }
        }
    }

    /// `exp_k(Σ)`: families and constants expanded, definitions dropped.
    /// Errors carry the offending declaration's name.
    pub fn expand_signature(&mut self, sig: &Signature, k: Depth) -> Result<Signature, (Name, ExpandError)> {
        let mut out = Signature::new();
        for d in sig.decls() {
            let body = match &d.body {
                DeclBody::Family(kd) => DeclBody::Family(self.expand_kind(kd, k).map_err(|e| (d.name.clone(), e))?),
                DeclBody::Const(a) => DeclBody::Const(self.expand_type(a, k).map_err(|e| (d.name.clone(), e))?),
                DeclBody::Def(..) => continue,
            };
            // scoping was established on the finitary signature
            let _ = out.push(Decl { name: d.name.clone(), body, implicit: d.implicit, span: d.span });
        }
        Ok(out)
    }
}

/// One-shot `exp_k(M)` without a persistent memo.
pub fn expand_term(m: &Term, k: Depth, defs: &DefTable) -> Result<Term, ExpandError> {
    Expander::new(defs.clone()).expand_term(m, k)
}

pub fn expand_signature(sig: &Signature, k: Depth) -> Result<Signature, (Name, ExpandError)> {
    let defs = DefTable::from_signature(sig);
    Expander::new(defs).expand_signature(sig, k)
}

/// Pairs of corresponding bound variables, innermost last.
type Env = Vec<(Name, Name)>;

fn vars_correspond(env: &Env, x: &Name, y: &Name) -> bool {
    for (a, b) in env.iter().rev() {
        match (a == x, b == y) {
            (true, true) => return true,
            (false, false) => continue,
            _ => return false,
        }
    }
    x == y
}

fn heads_match(env: &Env, h1: &Head, h2: &Head) -> bool {
    match (h1, h2) {
        (Head::Var(x), Head::Var(y)) => vars_correspond(env, x, y),
        (Head::Const(a), Head::Const(b)) | (Head::Rec(a), Head::Rec(b)) => a == b,
        _ => false,
    }
}

fn eq_term(env: &mut Env, m: &Term, n: &Term, k: Depth) -> bool {
    if k == 0 {
        return true;
    }
    if env.is_empty() && m.ptr_eq(n) {
        return true;
    }
    match (m.node(), n.node()) {
        (TermNode::Stub, TermNode::Stub) => true,
        (TermNode::Lam(x, b1), TermNode::Lam(y, b2)) => {
            env.push((x.clone(), y.clone()));
            let ok = eq_term(env, b1, b2, k);
            env.pop();
            ok
        }
        (TermNode::App(h1, s1), TermNode::App(h2, s2)) => {
            if !heads_match(env, h1, h2) || s1.len() != s2.len() {
                return false;
            }
            let k2 = h1.spine_depth(k);
            s1.iter().zip(s2).all(|(a, b)| eq_term(env, a, b, k2))
        }
        _ => false,
    }
}

fn eq_type(env: &mut Env, a: &Type, b: &Type, k: Depth) -> bool {
    match (a, b) {
        (Type::Pi(x, a1, a2), Type::Pi(y, b1, b2)) => {
            if !eq_type(env, a1, b1, k) {
                return false;
            }
            env.push((x.clone(), y.clone()));
            let ok = eq_type(env, a2, b2, k);
            env.pop();
            ok
        }
        (Type::Atom(f, s1), Type::Atom(g, s2)) => {
            let k2 = k.saturating_sub(1);
            f == g && s1.len() == s2.len() && s1.iter().zip(s2).all(|(m, n)| eq_term(env, m, n, k2))
        }
        _ => false,
    }
}

fn eq_kind(env: &mut Env, a: &Kind, b: &Kind, k: Depth) -> bool {
    match (a, b) {
        (Kind::Type, Kind::Type) | (Kind::Cotype, Kind::Cotype) => true,
        (Kind::Pi(x, a1, k1), Kind::Pi(y, b1, k2)) => {
            if !eq_type(env, a1, b1, k) {
                return false;
            }
            env.push((x.clone(), y.clone()));
            let ok = eq_kind(env, k1, k2, k);
            env.pop();
            ok
        }
        _ => false,
    }
}

/// `M =_k N`, up to renaming of bound variables.
pub fn eq_at_depth(m: &Term, n: &Term, k: Depth) -> bool {
    eq_term(&mut Vec::new(), m, n, k)
}

/// Structural equality of types whose index terms agree up to depth `k - 1`
/// (atomic-type indices are a suspended spine).
pub fn eq_types_at_depth(a: &Type, b: &Type, k: Depth) -> bool {
    eq_type(&mut Vec::new(), a, b, k)
}

pub fn eq_kinds_at_depth(a: &Kind, b: &Kind, k: Depth) -> bool {
    eq_kind(&mut Vec::new(), a, b, k)
}

/// Renders an expansion error with the definition it concerns.
pub fn describe(err: &ExpandError) -> String {
    alloc::format!("{}", err)
}
