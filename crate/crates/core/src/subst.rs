//! Erasure and hereditary substitution at a finite observation depth.
//!
//! All substitution functions are typing-agnostic: given any inputs they
//! terminate, either with a result or with [`Undefined`] when no clause
//! applies. Termination follows the lexicographic order on the simple type,
//! the depth and the subject term.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

use crate::syntax::{
    all_var_names, all_var_names_kind, all_var_names_type, free_vars, fresh_avoiding, truncate_to, Context,
    Depth, Head, Kind, Name, SimpleType, Term, TermNode, Type,
};

/// No substitution clause applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Undefined {
    pub reason: &'static str,
}

impl fmt::Display for Undefined {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "hereditary substitution undefined: {}", self.reason)
    }
}

fn undefined<T>(reason: &'static str) -> Result<T, Undefined> {
    Err(Undefined { reason })
}

/// Pi telescopes become arrows, atomic types become `*`.
pub fn erase(ty: &Type) -> SimpleType {
    match ty {
        Type::Pi(_, a, b) => SimpleType::arrow(erase(a), erase(b)),
        Type::Atom(..) => SimpleType::Base,
    }
}

/// Simple typing context mapping heads to simple types.
pub type SimpleContext = BTreeMap<Head, SimpleType>;

/// `Δ ⊢ N(k) : τ`. Anything checks at depth 0.
pub fn simple_type_check(delta: &SimpleContext, n: &Term, tau: &SimpleType, k: Depth) -> bool {
    let mut delta = delta.clone();
    stc(&mut delta, n, tau, k)
}

fn stc(delta: &mut SimpleContext, n: &Term, tau: &SimpleType, k: Depth) -> bool {
    if k == 0 {
        return true;
    }
    match (n.node(), tau) {
        (TermNode::Stub, _) => false,
        (TermNode::Lam(x, body), SimpleType::Arrow(t1, t2)) => {
            let key = Head::Var(x.clone());
            let saved = delta.insert(key.clone(), (**t1).clone());
            let ok = stc(delta, body, t2, k);
            match saved {
                Some(t) => delta.insert(key, t),
                None => delta.remove(&key),
            };
            ok
        }
        (TermNode::Lam(..), SimpleType::Base) => false,
        (TermNode::App(h, spine), _) => {
            let Some(mut ht) = delta.get(h).cloned() else { return false };
            let k2 = h.spine_depth(k);
            for m in spine {
                match ht {
                    SimpleType::Arrow(dom, cod) => {
                        if !stc(delta, m, &dom, k2) {
                            return false;
                        }
                        ht = *cod;
                    }
                    SimpleType::Base => return false,
                }
            }
            &ht == tau
        }
    }
}

/// One substitution `[N/x]^τ` where `N` was supplied at depth `n_depth`.
struct Subst<'a> {
    n: &'a Term,
    n_depth: Depth,
    x: &'a Name,
    tau: &'a SimpleType,
    /// Names a traversed binder must not take: free variables of `N` and `x`.
    danger: BTreeSet<Name>,
}

impl<'a> Subst<'a> {
    fn new(n: &'a Term, n_depth: Depth, x: &'a Name, tau: &'a SimpleType) -> Self {
        let mut danger = free_vars(n);
        danger.insert(x.clone());
        Subst { n, n_depth, x, tau, danger }
    }

    /// `N` viewed at depth `k ≤ n_depth`.
    fn n_at(&self, k: Depth) -> Term {
        if k >= self.n_depth {
            self.n.clone()
        } else {
            truncate_to(self.n, k)
        }
    }

    /// Rename binder `y` of `body` if it could capture a free variable of N.
    fn open_binder(&self, y: &Name, body: &Term) -> (Name, Term) {
        if !self.danger.contains(y) || y == self.x {
            return (y.clone(), body.clone());
        }
        let mut avoid = self.danger.clone();
        all_var_names(body, &mut avoid);
        let y2 = fresh_avoiding(y, &avoid);
        (y2.clone(), body.rename_free(y, &y2))
    }

    fn canonical(&self, m: &Term, k: Depth) -> Result<Term, Undefined> {
        if k == 0 {
            return Ok(Term::stub());
        }
        match m.node() {
            TermNode::Stub => Ok(m.clone()),
            TermNode::Lam(y, body) => {
                if y == self.x {
                    return Ok(m.clone());
                }
                let (y2, body2) = self.open_binder(y, body);
                Ok(Term::lam(y2, self.canonical(&body2, k)?))
            }
            TermNode::App(..) => self.neutral(m, k),
        }
    }

    fn neutral(&self, m: &Term, k: Depth) -> Result<Term, Undefined> {
        if k == 0 {
            return Ok(Term::stub());
        }
        let TermNode::App(h, spine) = m.node() else {
            return self.canonical(m, k);
        };
        match h {
            Head::Var(y) if y == self.x => {
                let t2 = self.continuing(spine, k)?;
                spine_apply(&t2, self.tau, &self.n_at(k), k)
            }
            Head::Const(_) => Ok(Term::app(h.clone(), self.suspended(spine, k)?)),
            // variables other than x, and recursion constants in surface terms
            _ => Ok(Term::app(h.clone(), self.continuing(spine, k)?)),
        }
    }

    fn continuing(&self, spine: &[Term], k: Depth) -> Result<Vec<Term>, Undefined> {
        spine.iter().map(|m| self.canonical(m, k)).collect()
    }

    /// Elements of a suspended spine at depth `k` are observed at `k - 1`,
    /// with N lowered to match.
    fn suspended(&self, spine: &[Term], k: Depth) -> Result<Vec<Term>, Undefined> {
        let k2 = k.saturating_sub(1);
        spine.iter().map(|m| self.canonical(m, k2)).collect()
    }

    fn cantype(&self, a: &Type, k: Depth) -> Result<Type, Undefined> {
        match a {
            Type::Pi(y, b, c) => {
                let b2 = self.cantype(b, k)?;
                if y == self.x {
                    return Ok(Type::Pi(y.clone(), Box::new(b2), c.clone()));
                }
                let (y2, c2) = self.open_type_binder(y, c);
                Ok(Type::Pi(y2, Box::new(b2), Box::new(self.cantype(&c2, k)?)))
            }
            Type::Atom(f, spine) => Ok(Type::Atom(f.clone(), self.suspended(spine, k)?)),
        }
    }

    fn kind(&self, kd: &Kind, k: Depth) -> Result<Kind, Undefined> {
        match kd {
            Kind::Type | Kind::Cotype => Ok(kd.clone()),
            Kind::Pi(y, a, rest) => {
                let a2 = self.cantype(a, k)?;
                if y == self.x {
                    return Ok(Kind::Pi(y.clone(), Box::new(a2), rest.clone()));
                }
                let (y2, rest2) = if self.danger.contains(y) {
                    let mut avoid = self.danger.clone();
                    all_var_names_kind(rest, &mut avoid);
                    let y2 = fresh_avoiding(y, &avoid);
                    let r = rest.rename_free(y, &y2);
                    (y2, r)
                } else {
                    (y.clone(), (**rest).clone())
                };
                Ok(Kind::Pi(y2, Box::new(a2), Box::new(self.kind(&rest2, k)?)))
            }
        }
    }

    fn open_type_binder(&self, y: &Name, body: &Type) -> (Name, Type) {
        if !self.danger.contains(y) {
            return (y.clone(), body.clone());
        }
        let mut avoid = self.danger.clone();
        all_var_names_type(body, &mut avoid);
        let y2 = fresh_avoiding(y, &avoid);
        (y2.clone(), body.rename_free(y, &y2))
    }
}

/// `[N/x]^τ M` with both `N` and `M` at depth `k`.
pub fn subst_canonical(n: &Term, x: &Name, tau: &SimpleType, m: &Term, k: Depth) -> Result<Term, Undefined> {
    Subst::new(n, k, x, tau).canonical(m, k)
}

/// `[N/x]^τ R` for a neutral `R`. Non-neutral input is handled as canonical.
pub fn subst_neutral(n: &Term, x: &Name, tau: &SimpleType, r: &Term, k: Depth) -> Result<Term, Undefined> {
    Subst::new(n, k, x, tau).neutral(r, k)
}

/// Pointwise substitution into the spine of a variable head, at depth `k`.
pub fn subst_continuing_spine(
    n: &Term,
    x: &Name,
    tau: &SimpleType,
    spine: &[Term],
    k: Depth,
) -> Result<Vec<Term>, Undefined> {
    if k == 0 {
        return Ok(spine.iter().map(|_| Term::stub()).collect());
    }
    Subst::new(n, k, x, tau).continuing(spine, k)
}

/// Substitution into the spine of a constant head at depth `k`: `N` is at
/// depth `k - 1`, as are the elements.
pub fn subst_suspended_spine(
    n: &Term,
    x: &Name,
    tau: &SimpleType,
    spine: &[Term],
    k: Depth,
) -> Result<Vec<Term>, Undefined> {
    Subst::new(n, k.saturating_sub(1), x, tau).suspended(spine, k)
}

/// `T ▷^τ N`: apply a head-normal term to a spine, reducing hereditarily.
pub fn spine_apply(spine: &[Term], tau: &SimpleType, n: &Term, k: Depth) -> Result<Term, Undefined> {
    if k == 0 {
        return Ok(Term::stub());
    }
    let mut cur = n.clone();
    let mut tau = tau;
    for m in spine {
        let SimpleType::Arrow(t2, t1) = tau else {
            return undefined("argument applied at base type");
        };
        let TermNode::Lam(y, body) = cur.node() else {
            return undefined("argument applied to a non-lambda");
        };
        cur = subst_canonical(m, y, t2, body, k)?;
        tau = t1;
    }
    match (tau, cur.node()) {
        (SimpleType::Base, TermNode::App(..) | TermNode::Stub) => Ok(cur),
        (SimpleType::Base, TermNode::Lam(..)) => undefined("lambda at base type"),
        (SimpleType::Arrow(..), _) => undefined("under-applied head (not eta-long)"),
    }
}

/// `[N/x]^τ K` with `N` at depth `k - 1` and `K` at depth `k`.
pub fn subst_kind(n: &Term, x: &Name, tau: &SimpleType, kd: &Kind, k: Depth) -> Result<Kind, Undefined> {
    Subst::new(n, k.saturating_sub(1), x, tau).kind(kd, k)
}

/// `[N/x]^τ A` with `N` at depth `k - 1` and `A` at depth `k`.
pub fn subst_cantype(n: &Term, x: &Name, tau: &SimpleType, a: &Type, k: Depth) -> Result<Type, Undefined> {
    Subst::new(n, k.saturating_sub(1), x, tau).cantype(a, k)
}

/// `[N/x]^τ (a · S)`; the spine is treated as suspended.
pub fn subst_atomtype(n: &Term, x: &Name, tau: &SimpleType, p: &Type, k: Depth) -> Result<Type, Undefined> {
    match p {
        Type::Atom(..) => subst_cantype(n, x, tau, p, k),
        Type::Pi(..) => undefined("not an atomic type"),
    }
}

/// `[N/x]^τ Γ`, entry by entry. Bound names are kept; the caller must
/// ensure no entry rebinds a free variable of `N`.
pub fn subst_context(n: &Term, x: &Name, tau: &SimpleType, ctx: &Context, k: Depth) -> Result<Context, Undefined> {
    let s = Subst::new(n, k.saturating_sub(1), x, tau);
    ctx.entries().iter().map(|(y, a)| Ok((y.clone(), s.cantype(a, k)?))).collect()
}
