//! Metavariable instantiation and higher-order pattern unification.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use super::ir::{fv_tm, fv_ty, from_term, single, var, EHead, EKind, ETerm, EType, Sub};
use super::Elab;
use crate::diag::{Code, Diagnostic, Span};
use crate::syntax::{DeclBody, Name};

pub(crate) type Res<T> = Result<T, Diagnostic>;

/// Unfoldings of recursion constants allowed per top-level equation.
const UNFOLD_FUEL: usize = 32;

impl<'s> Elab<'s> {
    pub(crate) fn out_of_fuel(&self, sp: Span) -> Diagnostic {
        Diagnostic::error(Code::TypeMismatch, "term is too large to normalize (is it well typed?)").with_span(Some(sp))
    }

    pub(crate) fn subst_tm(&mut self, t: &ETerm, s: &Sub, sp: Span) -> Res<ETerm> {
        let r = self.subst().tm(t, s);
        r.map_err(|_| self.out_of_fuel(sp))
    }

    pub(crate) fn subst_ty(&mut self, a: &EType, s: &Sub, sp: Span) -> Res<EType> {
        let r = self.subst().ty(a, s);
        r.map_err(|_| self.out_of_fuel(sp))
    }

    pub(crate) fn subst_kind(&mut self, k: &EKind, s: &Sub, sp: Span) -> Res<EKind> {
        let r = self.subst().kind(k, s);
        r.map_err(|_| self.out_of_fuel(sp))
    }

    pub(crate) fn apply(&mut self, f: &ETerm, args: Vec<ETerm>, sp: Span) -> Res<ETerm> {
        let r = self.subst().apply(f, args);
        r.map_err(|_| self.out_of_fuel(sp))
    }

    /// Instantiate a solved meta at the head, repeatedly.
    pub(crate) fn whnf_tm(&mut self, t: &ETerm, sp: Span) -> Res<ETerm> {
        let mut t = t.clone();
        while let ETerm::Meta(m, args) = &t {
            let Some(sol) = self.metas[*m].sol.clone() else { break };
            let ctx = self.metas[*m].ctx.clone();
            let n = ctx.len().min(args.len());
            let s: Sub = ctx.iter().cloned().zip(args[..n].iter().cloned()).collect();
            let body = self.subst_tm(&sol, &s, sp)?;
            let rest = args[n..].to_vec();
            t = self.apply(&body, rest, sp)?;
        }
        Ok(t)
    }

    pub(crate) fn whnf_ty(&self, a: &EType) -> EType {
        let mut a = a.clone();
        while let EType::Meta(m) = a {
            match &self.tmetas[m].sol {
                Some(b) => a = b.clone(),
                None => break,
            }
        }
        a
    }

    pub(crate) fn zonk_tm(&mut self, t: &ETerm, sp: Span) -> Res<ETerm> {
        let t = self.whnf_tm(t, sp)?;
        Ok(match t {
            ETerm::Lam(x, b) => ETerm::Lam(x, Box::new(self.zonk_tm(&b, sp)?)),
            ETerm::App(h, s) => ETerm::App(h, s.iter().map(|a| self.zonk_tm(a, sp)).collect::<Res<_>>()?),
            ETerm::Meta(m, s) => ETerm::Meta(m, s.iter().map(|a| self.zonk_tm(a, sp)).collect::<Res<_>>()?),
        })
    }

    pub(crate) fn zonk_ty(&mut self, a: &EType, sp: Span) -> Res<EType> {
        Ok(match self.whnf_ty(a) {
            EType::Pi(x, d, c) => EType::Pi(x, Box::new(self.zonk_ty(&d, sp)?), Box::new(self.zonk_ty(&c, sp)?)),
            EType::Atom(f, s) => EType::Atom(f, s.iter().map(|m| self.zonk_tm(m, sp)).collect::<Res<_>>()?),
            m @ EType::Meta(_) => m,
        })
    }

    pub(crate) fn zonk_kind(&mut self, k: &EKind, sp: Span) -> Res<EKind> {
        Ok(match k {
            EKind::Pi(x, d, r) => EKind::Pi(x.clone(), Box::new(self.zonk_ty(d, sp)?), Box::new(self.zonk_kind(r, sp)?)),
            other => other.clone(),
        })
    }

    fn mismatch_ty(&mut self, expected: &EType, found: &EType, sp: Span) -> Diagnostic {
        let e = self.zonk_ty(expected, sp).map(|a| self.show_ty(&a)).unwrap_or_default();
        let f = self.zonk_ty(found, sp).map(|a| self.show_ty(&a)).unwrap_or_default();
        Diagnostic::error(Code::TypeMismatch, format!("type mismatch: expected `{}`, found `{}`", e, f)).with_span(Some(sp))
    }

    fn mismatch_tm(&mut self, a: &ETerm, b: &ETerm, sp: Span) -> Diagnostic {
        let x = self.zonk_tm(a, sp).map(|t| self.show_tm(&t)).unwrap_or_default();
        let y = self.zonk_tm(b, sp).map(|t| self.show_tm(&t)).unwrap_or_default();
        Diagnostic::error(Code::TypeMismatch, format!("`{}` and `{}` do not match", x, y)).with_span(Some(sp))
    }

    /// `expected ≐ found`
    pub(crate) fn unify_ty(&mut self, expected: &EType, found: &EType, sp: Span) -> Res<()> {
        let a = self.whnf_ty(expected);
        let b = self.whnf_ty(found);
        match (&a, &b) {
            (EType::Meta(m), EType::Meta(n)) if m == n => Ok(()),
            (EType::Meta(m), t) | (t, EType::Meta(m)) => self.solve_ty(*m, t, sp, &a, &b),
            (EType::Pi(x, d1, c1), EType::Pi(y, d2, c2)) => {
                self.unify_ty(d1, d2, sp)?;
                if x == y {
                    return self.unify_ty(c1, c2, sp);
                }
                // keep a named binder rather than an arrow's `_`
                if x.as_str() == "_" {
                    let c1 = self.subst_ty(c1, &single(x, var(y)), sp)?;
                    self.unify_ty(&c1, c2, sp)
                } else {
                    let c2 = self.subst_ty(c2, &single(y, var(x)), sp)?;
                    self.unify_ty(c1, &c2, sp)
                }
            }
            (EType::Atom(f, s), EType::Atom(g, t)) if f == g && s.len() == t.len() => {
                for (m, n) in s.iter().zip(t.iter()) {
                    self.unify_tm(m, n, sp)?;
                }
                Ok(())
            }
            _ => Err(self.mismatch_ty(&a, &b, sp)),
        }
    }

    fn solve_ty(&mut self, m: usize, t: &EType, sp: Span, a: &EType, b: &EType) -> Res<()> {
        let t = self.zonk_ty(t, sp)?;
        if tmeta_occurs(m, &t) {
            return Err(Diagnostic::error(Code::OccursCheck, "a type would have to contain itself").with_span(Some(sp)));
        }
        let mut fv = BTreeSet::new();
        fv_ty(&t, &mut Vec::new(), &mut fv);
        let scope = &self.tmetas[m].scope;
        if fv.iter().any(|x| !scope.contains(x) && !self.is_implicit(x)) {
            return Err(self.mismatch_ty(a, b, sp));
        }
        self.tmetas[m].sol = Some(t);
        Ok(())
    }

    pub(crate) fn unify_tm(&mut self, m: &ETerm, n: &ETerm, sp: Span) -> Res<()> {
        let mut fuel = UNFOLD_FUEL;
        self.unify_tm_f(m, n, sp, &mut fuel)
    }

    fn unify_tm_f(&mut self, m: &ETerm, n: &ETerm, sp: Span, fuel: &mut usize) -> Res<()> {
        let a = self.whnf_tm(m, sp)?;
        let b = self.whnf_tm(n, sp)?;
        match (&a, &b) {
            (ETerm::Lam(x, b1), ETerm::Lam(y, b2)) => {
                let b2 = if x == y { (**b2).clone() } else { self.subst_tm(b2, &single(y, var(x)), sp)? };
                self.unify_tm_f(b1, &b2, sp, fuel)
            }
            (ETerm::Lam(x, body), other) | (other, ETerm::Lam(x, body)) => {
                let z = self.names.fresh(x);
                let body = self.subst_tm(body, &single(x, var(&z)), sp)?;
                let other = self.apply(other, alloc::vec![var(&z)], sp)?;
                self.unify_tm_f(&body, &other, sp, fuel)
            }
            (ETerm::Meta(p, s), ETerm::Meta(q, t)) if p == q => {
                if s == t {
                    Ok(())
                } else {
                    self.postponed.push((a.clone(), b.clone(), sp));
                    Ok(())
                }
            }
            (ETerm::Meta(p, s), other) | (other, ETerm::Meta(p, s)) => self.solve(*p, s, other, sp),
            (ETerm::App(h1, s1), ETerm::App(h2, s2)) => {
                if h1 == h2 && s1.len() == s2.len() {
                    for (x, y) in s1.iter().zip(s2.iter()) {
                        self.unify_tm_f(x, y, sp, fuel)?;
                    }
                    return Ok(());
                }
                // a recursion constant equals its unfolding
                for (h, s, other) in [(h1, s1, &b), (h2, s2, &a)] {
                    if let EHead::Rec(r) = h {
                        if *fuel == 0 {
                            return Ok(());
                        }
                        match self.def_body(r) {
                            Some(body) => {
                                *fuel -= 1;
                                let u = self.apply(&body, s.clone(), sp)?;
                                return self.unify_tm_f(&u, other, sp, fuel);
                            }
                            // the definition being elaborated: left to the kernel
                            None => return Ok(()),
                        }
                    }
                }
                Err(self.mismatch_tm(&a, &b, sp))
            }
        }
    }

    fn def_body(&self, r: &Name) -> Option<ETerm> {
        match &self.sig.get(r)?.body {
            DeclBody::Def(_, m) => Some(from_term(m)),
            _ => None,
        }
    }

    /// `?p[args] ≐ t`. Solved when the arguments are distinct variables
    /// (Miller's pattern fragment); postponed otherwise.
    fn solve(&mut self, p: usize, args: &[ETerm], t: &ETerm, sp: Span) -> Res<()> {
        let mut vars = Vec::new();
        for a in args {
            match self.whnf_tm(a, sp)? {
                ETerm::App(EHead::Var(y), s) if s.is_empty() && !vars.contains(&y) => vars.push(y),
                _ => {
                    self.postponed.push((ETerm::Meta(p, args.to_vec()), t.clone(), sp));
                    return Ok(());
                }
            }
        }
        let t = self.zonk_tm(t, sp)?;
        if meta_occurs(p, &t) {
            return Err(Diagnostic::error(
                Code::OccursCheck,
                format!("`{}` would have to contain itself", self.show_tm(&t)),
            )
            .with_span(Some(sp)));
        }
        let mut fv = BTreeSet::new();
        fv_tm(&t, &mut Vec::new(), &mut fv);
        if fv.iter().any(|x| !vars.contains(x) && !self.is_implicit(x)) {
            self.postponed.push((ETerm::Meta(p, args.to_vec()), t, sp));
            return Ok(());
        }
        let ctx = self.metas[p].ctx.clone();
        let n = ctx.len().min(vars.len());
        let mut s = Sub::new();
        let mut extra = Vec::new();
        for (i, y) in vars.iter().enumerate() {
            if i < n {
                s.insert(y.clone(), var(&ctx[i]));
            } else {
                let z = self.names.fresh(y);
                s.insert(y.clone(), var(&z));
                extra.push(z);
            }
        }
        let mut sol = self.subst_tm(&t, &s, sp)?;
        for z in extra.into_iter().rev() {
            sol = ETerm::Lam(z, Box::new(sol));
        }
        self.metas[p].sol = Some(sol);
        Ok(())
    }

    /// Retry postponed equations until no more progress is made.
    pub(crate) fn drain_postponed(&mut self) -> Res<()> {
        loop {
            let before = self.solved_count();
            let eqs = core::mem::take(&mut self.postponed);
            let n = eqs.len();
            for (a, b, sp) in eqs {
                self.unify_tm(&a, &b, sp)?;
            }
            if self.postponed.len() >= n && self.solved_count() == before {
                break;
            }
        }
        let eqs = core::mem::take(&mut self.postponed);
        for (a, b, sp) in eqs {
            let a = self.zonk_tm(&a, sp)?;
            let b = self.zonk_tm(&b, sp)?;
            if a != b {
                return Err(Diagnostic::error(
                    Code::UnsolvedHole,
                    format!("cannot solve `{}` = `{}`", self.show_tm(&a), self.show_tm(&b)),
                )
                .with_span(Some(sp)));
            }
        }
        Ok(())
    }

    fn solved_count(&self) -> usize {
        self.metas.iter().filter(|m| m.sol.is_some()).count() + self.tmetas.iter().filter(|m| m.sol.is_some()).count()
    }
}

pub(crate) fn meta_occurs(p: usize, t: &ETerm) -> bool {
    match t {
        ETerm::Lam(_, b) => meta_occurs(p, b),
        ETerm::App(_, s) => s.iter().any(|a| meta_occurs(p, a)),
        ETerm::Meta(q, s) => *q == p || s.iter().any(|a| meta_occurs(p, a)),
    }
}

pub(crate) fn metas_in_tm(t: &ETerm, out: &mut Vec<usize>) {
    match t {
        ETerm::Lam(_, b) => metas_in_tm(b, out),
        ETerm::App(_, s) => s.iter().for_each(|a| metas_in_tm(a, out)),
        ETerm::Meta(q, s) => {
            if !out.contains(q) {
                out.push(*q);
            }
            s.iter().for_each(|a| metas_in_tm(a, out));
        }
    }
}

pub(crate) fn metas_in_ty(a: &EType, out: &mut Vec<usize>) {
    match a {
        EType::Pi(_, d, c) => {
            metas_in_ty(d, out);
            metas_in_ty(c, out);
        }
        EType::Atom(_, s) => s.iter().for_each(|m| metas_in_tm(m, out)),
        EType::Meta(_) => {}
    }
}

fn tmeta_occurs(m: usize, a: &EType) -> bool {
    match a {
        EType::Pi(_, d, c) => tmeta_occurs(m, d) || tmeta_occurs(m, c),
        EType::Atom(..) => false,
        EType::Meta(n) => *n == m,
    }
}
