//! From parsed declarations to kernel declarations.
//!
//! Free capitalized identifiers become implicit arguments, bound by
//! leading Pis (or lambdas, for definitions) that uses of the declared
//! name fill in by unification. Variables are eta-expanded; constants are
//! not, so shape errors on them are left for the kernel to report.

mod ir;
mod unify;

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use self::ir::{from_kind, from_type, single, to_kind, to_term, to_type, var, EHead, EKind, ETerm, EType, Names, Subst};
use self::unify::{metas_in_ty, Res};
use super::parser::{Expr, SurfaceDecl};
use super::print::{term_to_string, type_to_string};
use crate::diag::{Code, Diagnostic, Span};
use crate::syntax::{Decl, DeclBody, Name, Signature, SignatureError, Term, Type};

/// Bounds substitution work per declaration.
const FUEL: usize = 1_000_000;

pub(crate) struct MetaInfo {
    ctx: Vec<Name>,
    ty: EType,
    sol: Option<ETerm>,
    span: Span,
}

pub(crate) struct TMetaInfo {
    scope: Vec<Name>,
    sol: Option<EType>,
}

struct Implicit {
    name: Name,
    ty: EType,
    span: Span,
}

pub(crate) struct Elab<'s> {
    sig: &'s Signature,
    names: Names,
    fuel: usize,
    metas: Vec<MetaInfo>,
    tmetas: Vec<TMetaInfo>,
    /// Bound variables, innermost last: surface name, internal name, type.
    scope: Vec<(String, Name, EType)>,
    implicits: Vec<Implicit>,
    allow_new_implicits: bool,
    /// The definition being elaborated: name, full type, implicit count.
    this_def: Option<(Name, EType, usize)>,
    postponed: Vec<(ETerm, ETerm, Span)>,
    binder_names: BTreeSet<String>,
}

fn binder_names(e: &Expr, out: &mut BTreeSet<String>) {
    match e {
        Expr::Ident(..) | Expr::Hole(_) => {}
        Expr::App(h, args, _) => {
            binder_names(h, out);
            args.iter().for_each(|a| binder_names(a, out));
        }
        Expr::Pi(b, body, _) | Expr::Lam(b, body, _) => {
            out.insert(b.name.clone());
            if let Some(a) = &b.ann {
                binder_names(a, out);
            }
            binder_names(body, out);
        }
        Expr::Arrow(a, b, _) => {
            binder_names(a, out);
            binder_names(b, out);
        }
    }
}

fn flatten_app(e: &Expr) -> (&Expr, Vec<&Expr>) {
    match e {
        Expr::App(h, args, _) => {
            let (h2, mut pre) = flatten_app(h);
            pre.extend(args.iter());
            (h2, pre)
        }
        _ => (e, Vec::new()),
    }
}

impl<'s> Elab<'s> {
    fn new(sig: &'s Signature) -> Self {
        Elab {
            sig,
            names: Names::default(),
            fuel: FUEL,
            metas: Vec::new(),
            tmetas: Vec::new(),
            scope: Vec::new(),
            implicits: Vec::new(),
            allow_new_implicits: true,
            this_def: None,
            postponed: Vec::new(),
            binder_names: BTreeSet::new(),
        }
    }

    pub(crate) fn subst(&mut self) -> Subst<'_> {
        Subst { names: &mut self.names, fuel: &mut self.fuel }
    }

    pub(crate) fn is_implicit(&self, x: &Name) -> bool {
        self.implicits.iter().any(|i| &i.name == x)
    }

    pub(crate) fn show_tm(&self, t: &ETerm) -> String {
        term_to_string(&lossy_term(t))
    }

    pub(crate) fn show_ty(&self, a: &EType) -> String {
        type_to_string(&lossy_type(a))
    }

    fn scope_names(&self) -> Vec<Name> {
        self.scope.iter().map(|s| s.1.clone()).collect()
    }

    fn new_tmeta(&mut self) -> EType {
        let scope = self.scope_names();
        self.tmetas.push(TMetaInfo { scope, sol: None });
        EType::Meta(self.tmetas.len() - 1)
    }

    /// A fresh term of type `ty` in the current scope; metas of function
    /// type are created under lambdas so that they reduce when applied.
    fn new_meta(&mut self, ty: &EType, sp: Span) -> Res<ETerm> {
        let mut ctx = self.scope_names();
        let mut binders = Vec::new();
        let mut ty = self.whnf_ty(ty);
        while let EType::Pi(x, _, c) = ty {
            let z = self.names.fresh(if x.as_str() == "_" { "x" } else { &x });
            ctx.push(z.clone());
            binders.push(z.clone());
            ty = self.subst_ty(&c, &single(&x, var(&z)), sp)?;
            ty = self.whnf_ty(&ty);
        }
        let args: Vec<ETerm> = ctx.iter().map(var).collect();
        self.metas.push(MetaInfo { ctx, ty, sol: None, span: sp });
        let mut t = ETerm::Meta(self.metas.len() - 1, args);
        for z in binders.into_iter().rev() {
            t = ETerm::Lam(z, Box::new(t));
        }
        Ok(t)
    }

    fn implicit_var(&mut self, s: &str, sp: Span) -> Res<(Name, EType)> {
        if let Some(i) = self.implicits.iter().find(|i| i.name.as_str() == s) {
            return Ok((i.name.clone(), i.ty.clone()));
        }
        if !self.allow_new_implicits {
            return Err(Diagnostic::error(
                Code::Undeclared,
                format!("undeclared identifier `{}` (implicit variables must occur in the type)", s),
            )
            .with_span(Some(sp)));
        }
        if self.binder_names.contains(s) {
            return Err(Diagnostic::error(
                Code::Shadowing,
                format!("`{}` is used both as a bound variable and as an implicit variable", s),
            )
            .with_span(Some(sp)));
        }
        let name = Name::new(s);
        self.names.reserve(name.clone());
        // implicit variables live at the top of the declaration
        self.tmetas.push(TMetaInfo { scope: Vec::new(), sol: None });
        let ty = EType::Meta(self.tmetas.len() - 1);
        self.implicits.push(Implicit { name: name.clone(), ty: ty.clone(), span: sp });
        Ok((name, ty))
    }

    /// Supply metas for the first `n` Pis of `ty`.
    fn instantiate(&mut self, mut ty: EType, n: usize, sp: Span) -> Res<(Vec<ETerm>, EType)> {
        let mut spine = Vec::new();
        for _ in 0..n {
            match self.whnf_ty(&ty) {
                EType::Pi(x, d, c) => {
                    let m = self.new_meta(&d, sp)?;
                    ty = self.subst_ty(&c, &single(&x, m.clone()), sp)?;
                    spine.push(m);
                }
                _ => break,
            }
        }
        Ok((spine, ty))
    }

    // --- terms -------------------------------------------------------

    fn head(&mut self, e: &Expr) -> Res<(EHead, EType, Vec<ETerm>)> {
        let Expr::Ident(s, sp) = e else {
            return Err(Diagnostic::error(Code::Syntax, "only variables and constants can be applied (terms are canonical)")
                .with_span(Some(e.span())));
        };
        let sp = *sp;
        if let Some((_, z, ty)) = self.scope.iter().rev().find(|b| &b.0 == s) {
            return Ok((EHead::Var(z.clone()), ty.clone(), Vec::new()));
        }
        if let Some((r, ty, n)) = self.this_def.clone() {
            if r.as_str() == s {
                let (spine, ty) = self.instantiate(ty, n, sp)?;
                return Ok((EHead::Rec(r), ty, spine));
            }
        }
        if let Some(d) = self.sig.get_str(s) {
            let (h, ty) = match &d.body {
                DeclBody::Const(a) => (EHead::Const(d.name.clone()), from_type(a)),
                DeclBody::Def(a, _) => (EHead::Rec(d.name.clone()), from_type(a)),
                DeclBody::Family(_) => {
                    return Err(Diagnostic::error(Code::Namespace, format!("type family `{}` used as a term", s))
                        .with_span(Some(sp)))
                }
            };
            let (spine, ty) = self.instantiate(ty, d.implicit, sp)?;
            return Ok((h, ty, spine));
        }
        if s == "type" || s == "cotype" {
            return Err(Diagnostic::error(Code::Namespace, format!("`{}` used as a term", s)).with_span(Some(sp)));
        }
        if Name::new(s).is_capitalized() {
            let (x, ty) = self.implicit_var(s, sp)?;
            return Ok((EHead::Var(x), ty, Vec::new()));
        }
        Err(Diagnostic::error(Code::Undeclared, format!("undeclared identifier `{}`", s)).with_span(Some(sp)))
    }

    /// Elaborate `h args`, returning the term and its type.
    fn spine(&mut self, e: &Expr) -> Res<(ETerm, EType, bool)> {
        let (h, args) = flatten_app(e);
        let (head, mut ty, mut spine) = self.head(h)?;
        let is_var = matches!(head, EHead::Var(_));
        for a in args {
            let sp = a.span();
            if let EType::Meta(m) = self.whnf_ty(&ty) {
                // unknown function type: give it a fresh telescope
                let scope = self.tmetas[m].scope.clone();
                let z = self.names.fresh("x");
                self.tmetas.push(TMetaInfo { scope: scope.clone(), sol: None });
                let d = EType::Meta(self.tmetas.len() - 1);
                let mut scope2 = scope;
                scope2.push(z.clone());
                self.tmetas.push(TMetaInfo { scope: scope2, sol: None });
                let c = EType::Meta(self.tmetas.len() - 1);
                self.tmetas[m].sol = Some(EType::Pi(z, Box::new(d), Box::new(c)));
            }
            match self.whnf_ty(&ty) {
                EType::Pi(x, d, c) => {
                    let m = self.check(a, &d)?;
                    ty = self.subst_ty(&c, &single(&x, m.clone()), sp)?;
                    spine.push(m);
                }
                _ => {
                    // too many arguments; the kernel reports the arity
                    let t = self.new_tmeta();
                    let m = self.check(a, &t)?;
                    spine.push(m);
                }
            }
        }
        Ok((ETerm::App(head, spine), ty, is_var))
    }

    fn check(&mut self, e: &Expr, expected: &EType) -> Res<ETerm> {
        let sp = e.span();
        match e {
            Expr::Lam(b, body, _) => {
                let mut want = self.whnf_ty(expected);
                if let EType::Meta(_) = want {
                    let d = self.new_tmeta();
                    let z = self.names.fresh(&b.name);
                    self.scope.push((String::new(), z.clone(), d.clone()));
                    let c = self.new_tmeta();
                    self.scope.pop();
                    let pi = EType::Pi(z, Box::new(d), Box::new(c));
                    self.unify_ty(expected, &pi, sp)?;
                    want = pi;
                }
                match want {
                    EType::Pi(x, d, c) => {
                        if let Some(ann) = &b.ann {
                            let t = self.elab_type(ann)?;
                            self.unify_ty(&d, &t, ann.span())?;
                        }
                        let z = self.names.fresh(&b.name);
                        let c = self.subst_ty(&c, &single(&x, var(&z)), sp)?;
                        self.scope.push((b.name.clone(), z.clone(), (*d).clone()));
                        let r = self.check(body, &c);
                        self.scope.pop();
                        Ok(ETerm::Lam(z, Box::new(r?)))
                    }
                    other => {
                        let shown = self.zonk_ty(&other, sp).map(|a| self.show_ty(&a)).unwrap_or_default();
                        Err(Diagnostic::error(
                            Code::LambdaAgainstAtomic,
                            format!("a function `[{}] ...` is expected to have atomic type `{}`", b.name, shown),
                        )
                        .with_span(Some(sp)))
                    }
                }
            }
            Expr::Hole(_) => self.new_meta(expected, sp),
            Expr::Pi(..) | Expr::Arrow(..) => {
                Err(Diagnostic::error(Code::Namespace, "a type cannot be used as a term").with_span(Some(sp)))
            }
            Expr::Ident(..) | Expr::App(..) => {
                let (t, ty, is_var) = self.spine(e)?;
                let got = self.whnf_ty(&ty);
                let want = self.whnf_ty(expected);
                match (&got, &want) {
                    (EType::Pi(..), EType::Pi(..)) if is_var => {
                        self.unify_ty(expected, &ty, sp)?;
                        let want = self.zonk_ty(expected, sp)?;
                        self.eta_expand(t, &want, sp)
                    }
                    // shape errors are the kernel's to report
                    (EType::Pi(..), EType::Atom(..)) | (EType::Atom(..), EType::Pi(..)) => Ok(t),
                    _ => {
                        self.unify_ty(expected, &ty, sp)?;
                        Ok(t)
                    }
                }
            }
        }
    }

    fn infer(&mut self, e: &Expr) -> Res<(ETerm, EType)> {
        match e {
            Expr::Ident(..) | Expr::App(..) => {
                let (t, ty, _) = self.spine(e)?;
                Ok((t, ty))
            }
            _ => {
                let a = self.new_tmeta();
                let t = self.check(e, &a)?;
                Ok((t, a))
            }
        }
    }

    fn eta_expand(&mut self, t: ETerm, ty: &EType, sp: Span) -> Res<ETerm> {
        match self.whnf_ty(ty) {
            EType::Pi(x, d, c) => {
                let z = self.names.fresh(if x.as_str() == "_" { "x" } else { &x });
                let arg = self.eta_expand(var(&z), &d, sp)?;
                let body = self.apply(&t, alloc::vec![arg.clone()], sp)?;
                let c = self.subst_ty(&c, &single(&x, arg), sp)?;
                let body = self.eta_expand(body, &c, sp)?;
                Ok(ETerm::Lam(z, Box::new(body)))
            }
            _ => Ok(t),
        }
    }

    // --- types and kinds ---------------------------------------------

    fn binder_type(&mut self, ann: &Option<Box<Expr>>) -> Res<EType> {
        match ann {
            Some(a) => self.elab_type(a),
            None => Ok(self.new_tmeta()),
        }
    }

    fn elab_type(&mut self, e: &Expr) -> Res<EType> {
        let sp = e.span();
        match e {
            Expr::Pi(b, body, _) => {
                let d = self.binder_type(&b.ann)?;
                let z = self.names.fresh(&b.name);
                self.scope.push((b.name.clone(), z.clone(), d.clone()));
                let c = self.elab_type(body);
                self.scope.pop();
                Ok(EType::Pi(z, Box::new(d), Box::new(c?)))
            }
            Expr::Arrow(a, b, _) => {
                let d = self.elab_type(a)?;
                let c = self.elab_type(b)?;
                Ok(EType::Pi(Name::new("_"), Box::new(d), Box::new(c)))
            }
            Expr::Hole(_) => Ok(self.new_tmeta()),
            Expr::Lam(..) => Err(Diagnostic::error(Code::Namespace, "a term cannot be used as a type").with_span(Some(sp))),
            Expr::Ident(..) | Expr::App(..) => {
                let (h, args) = flatten_app(e);
                let Expr::Ident(f, fsp) = h else {
                    return Err(Diagnostic::error(Code::Syntax, "expected a type family").with_span(Some(h.span())));
                };
                let bound = self.scope.iter().any(|b| &b.0 == f);
                let kind = match self.sig.get_str(f) {
                    _ if bound => None,
                    Some(d) => match &d.body {
                        DeclBody::Family(k) => Some((d.name.clone(), from_kind(k), d.implicit)),
                        _ => None,
                    },
                    None => {
                        if f == "type" || f == "cotype" {
                            return Err(Diagnostic::error(Code::Namespace, format!("`{}` can only end a kind", f))
                                .with_span(Some(*fsp)));
                        }
                        return Err(Diagnostic::error(Code::Undeclared, format!("undeclared type family `{}`", f))
                            .with_span(Some(*fsp)));
                    }
                };
                let Some((name, mut k, n)) = kind else {
                    return Err(Diagnostic::error(Code::Namespace, format!("`{}` is not a type family", f))
                        .with_span(Some(*fsp)));
                };
                let mut spine = Vec::new();
                for _ in 0..n {
                    if let EKind::Pi(x, d, r) = k {
                        let m = self.new_meta(&d, *fsp)?;
                        k = self.subst_kind(&r, &single(&x, m.clone()), *fsp)?;
                        spine.push(m);
                    }
                }
                for a in args {
                    match k {
                        EKind::Pi(x, d, r) => {
                            let m = self.check(a, &d)?;
                            k = self.subst_kind(&r, &single(&x, m.clone()), a.span())?;
                            spine.push(m);
                        }
                        _ => {
                            // over-application is reported by the kernel
                            let (m, _) = self.infer(a)?;
                            spine.push(m);
                        }
                    }
                }
                Ok(EType::Atom(name, spine))
            }
        }
    }

    fn elab_kind(&mut self, e: &Expr) -> Res<EKind> {
        match e {
            Expr::Ident(s, _) if s == "type" => Ok(EKind::Type),
            Expr::Ident(s, _) if s == "cotype" => Ok(EKind::Cotype),
            Expr::Pi(b, body, _) => {
                let d = self.binder_type(&b.ann)?;
                let z = self.names.fresh(&b.name);
                self.scope.push((b.name.clone(), z.clone(), d.clone()));
                let k = self.elab_kind(body);
                self.scope.pop();
                Ok(EKind::Pi(z, Box::new(d), Box::new(k?)))
            }
            Expr::Arrow(a, b, _) => {
                let d = self.elab_type(a)?;
                let k = self.elab_kind(b)?;
                Ok(EKind::Pi(Name::new("_"), Box::new(d), Box::new(k)))
            }
            other => Err(Diagnostic::error(Code::Syntax, "expected a kind").with_span(Some(other.span()))),
        }
    }

    // --- implicit arguments -------------------------------------------

    /// Solve what can be solved, turn leftover top-level metas of base
    /// type into implicit variables, and order the implicit variables so
    /// that each one's type only mentions earlier ones.
    fn close_implicits(&mut self, mentioned: &mut Vec<usize>, sp: Span) -> Res<Vec<(Name, EType)>> {
        self.drain_postponed()?;
        let mut fresh_count = 0;
        loop {
            let mut all = mentioned.clone();
            for i in 0..self.implicits.len() {
                let t = self.implicits[i].ty.clone();
                let t = self.zonk_ty(&t, sp)?;
                metas_in_ty(&t, &mut all);
            }
            let unsolved: Vec<usize> = all.into_iter().filter(|m| self.metas[*m].sol.is_none()).collect();
            if unsolved.is_empty() {
                break;
            }
            for m in unsolved {
                let ty = self.metas[m].ty.clone();
                let ty = self.zonk_ty(&ty, sp)?;
                let msp = self.metas[m].span;
                if !self.metas[m].ctx.is_empty() || !matches!(ty, EType::Atom(..)) {
                    return Err(Diagnostic::error(Code::UnsolvedHole, "cannot infer this implicit argument")
                        .with_span(Some(msp)));
                }
                let name = loop {
                    fresh_count += 1;
                    let n = Name::new(&format!("_{}", fresh_count));
                    if !self.is_implicit(&n) {
                        break n;
                    }
                };
                self.names.reserve(name.clone());
                self.implicits.push(Implicit { name: name.clone(), ty, span: msp });
                self.metas[m].sol = Some(var(&name));
            }
            mentioned.clear();
        }
        // types must be known
        let mut typed = Vec::new();
        for i in 0..self.implicits.len() {
            let t = self.implicits[i].ty.clone();
            let t = self.zonk_ty(&t, sp)?;
            if matches!(to_type(&t), Err(Err(_))) {
                return Err(Diagnostic::error(
                    Code::CannotInferImplicit,
                    format!("cannot infer the type of implicit variable `{}`", self.implicits[i].name),
                )
                .with_span(Some(self.implicits[i].span)));
            }
            typed.push((self.implicits[i].name.clone(), t));
        }
        // stable topological order
        let mut placed: Vec<(Name, EType)> = Vec::new();
        let mut rest = typed;
        while !rest.is_empty() {
            let pos = rest.iter().position(|(_, t)| {
                let mut fv = BTreeSet::new();
                ir::fv_ty(t, &mut Vec::new(), &mut fv);
                fv.iter().all(|x| placed.iter().any(|p| &p.0 == x) || !rest.iter().any(|r| &r.0 == x))
            });
            match pos {
                Some(i) => placed.push(rest.remove(i)),
                None => {
                    let name = rest[0].0.clone();
                    let isp = self.implicits.iter().find(|i| i.name == name).map(|i| i.span).unwrap_or(sp);
                    return Err(Diagnostic::error(
                        Code::CannotInferImplicit,
                        format!("the type of implicit variable `{}` depends on itself", name),
                    )
                    .with_span(Some(isp)));
                }
            }
        }
        Ok(placed)
    }

    fn decl(&mut self, sd: &SurfaceDecl) -> Res<Decl> {
        binder_names(&sd.ty, &mut self.binder_names);
        if let Some(d) = &sd.def {
            binder_names(d, &mut self.binder_names);
        }
        let sp = sd.span;
        let name = Name::new(&sd.name);
        if sd.ty.is_kind() {
            if sd.def.is_some() {
                return Err(Diagnostic::error(Code::Syntax, "a type family cannot have a definition").with_span(Some(sp)));
            }
            let k = self.elab_kind(&sd.ty)?;
            let mut mentioned = Vec::new();
            let k = self.zonk_kind(&k, sp)?;
            kind_metas(&k, &mut mentioned);
            let imps = self.close_implicits(&mut mentioned, sp)?;
            let mut full = self.zonk_kind(&k, sp)?;
            for (x, t) in imps.iter().rev() {
                let t = self.zonk_ty(t, sp)?;
                full = EKind::Pi(x.clone(), Box::new(t), Box::new(full));
            }
            let kind = to_kind(&full).map_err(|e| self.unresolved(e, sp))?;
            return Ok(Decl { name, body: DeclBody::Family(kind), implicit: imps.len(), span: Some(sp) });
        }
        let a = self.elab_type(&sd.ty)?;
        let a = self.zonk_ty(&a, sp)?;
        let mut mentioned = Vec::new();
        metas_in_ty(&a, &mut mentioned);
        let imps = self.close_implicits(&mut mentioned, sp)?;
        let a = self.zonk_ty(&a, sp)?;
        let mut full = a.clone();
        for (x, t) in imps.iter().rev() {
            let t = self.zonk_ty(t, sp)?;
            full = EType::Pi(x.clone(), Box::new(t), Box::new(full));
        }
        let ty = to_type(&full).map_err(|e| self.unresolved(e, sp))?;
        let Some(def) = &sd.def else {
            return Ok(Decl { name, body: DeclBody::Const(ty), implicit: imps.len(), span: Some(sp) });
        };
        self.this_def = Some((name.clone(), full, imps.len()));
        self.allow_new_implicits = false;
        let m = self.check(def, &a)?;
        self.drain_postponed()?;
        let mut m = self.zonk_tm(&m, sp)?;
        for (x, _) in imps.iter().rev() {
            m = ETerm::Lam(x.clone(), Box::new(m));
        }
        let body = to_term(&m).map_err(|id| self.unresolved(Ok(id), sp))?;
        Ok(Decl { name, body: DeclBody::Def(ty, body), implicit: imps.len(), span: Some(sp) })
    }

    fn unresolved(&self, which: Result<usize, usize>, sp: Span) -> Diagnostic {
        match which {
            Ok(m) => Diagnostic::error(Code::UnsolvedHole, "cannot infer this term").with_span(Some(self.metas[m].span)),
            Err(_) => Diagnostic::error(Code::CannotInferImplicit, "cannot infer the type of a bound variable")
                .with_span(Some(sp)),
        }
    }
}

fn kind_metas(k: &EKind, out: &mut Vec<usize>) {
    if let EKind::Pi(_, d, r) = k {
        metas_in_ty(d, out);
        kind_metas(r, out);
    }
}

fn lossy_term(t: &ETerm) -> Term {
    match t {
        ETerm::Meta(..) => Term::stub(),
        ETerm::Lam(x, b) => Term::lam(x.clone(), lossy_term(b)),
        ETerm::App(..) => {
            let ETerm::App(h, s) = t else { unreachable!() };
            let h = match h {
                EHead::Var(x) => crate::syntax::Head::Var(x.clone()),
                EHead::Const(c) => crate::syntax::Head::Const(c.clone()),
                EHead::Rec(r) => crate::syntax::Head::Rec(r.clone()),
            };
            Term::app(h, s.iter().map(lossy_term).collect())
        }
    }
}

fn lossy_type(a: &EType) -> Type {
    match a {
        EType::Pi(x, d, c) => Type::Pi(x.clone(), Box::new(lossy_type(d)), Box::new(lossy_type(c))),
        EType::Atom(f, s) => Type::Atom(f.clone(), s.iter().map(lossy_term).collect()),
        EType::Meta(_) => Type::Atom(Name::new("_"), Vec::new()),
    }
}

/// Elaborate declarations in order onto `sig`. A declaration that fails is
/// reported and skipped.
pub fn elaborate_into(sig: &mut Signature, decls: &[SurfaceDecl], diags: &mut Vec<Diagnostic>) {
    for sd in decls {
        if sig.get_str(&sd.name).is_some() {
            diags.push(
                Diagnostic::error(Code::Duplicate, format!("`{}` is already declared", sd.name)).with_span(Some(sd.name_span)),
            );
            continue;
        }
        let res = Elab::new(sig).decl(sd);
        match res {
            Ok(d) => {
                if let Err(e) = sig.push(d) {
                    let code = match e {
                        SignatureError::Duplicate(_) => Code::Duplicate,
                        SignatureError::Unscoped(..) => Code::Undeclared,
                    };
                    diags.push(Diagnostic::error(code, format!("{}", e)).with_span(Some(sd.span)));
                }
            }
            Err(e) => diags.push(e.with_span(Some(sd.span))),
        }
    }
}

pub fn elaborate(decls: &[SurfaceDecl]) -> (Signature, Vec<Diagnostic>) {
    let mut sig = Signature::new();
    let mut diags = Vec::new();
    elaborate_into(&mut sig, decls, &mut diags);
    (sig, diags)
}
