//! Bidirectional type checking at a fixed finite depth.
//!
//! Every judgment takes the depth `k` at which its subject is observed.
//! Elements of suspended spines (after constants, and type-family indices)
//! are checked one depth lower; elements of continuing spines (after
//! variables) at the same depth. At depth 0 every judgment holds.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::diag::{Code, Diagnostic};
use crate::subst::{erase, subst_cantype, subst_kind, Undefined};
use crate::surface::print::{kind_to_string, term_to_string, type_to_string};
use crate::syntax::{
    all_var_names, all_var_names_type, fresh_avoiding, judgment_label, Context, Decl, DeclBody, Depth, Head, Kind,
    Name, Signature, Term, TermNode, Type,
};
use crate::unfold::{eq_types_at_depth, DefTable, ExpandError, Expander};
use crate::validity::is_contractive;

/// Checks judgments against an expanded signature (no definitions).
pub struct Checker<'s> {
    sig: &'s Signature,
    trail: Vec<String>,
}

type CResult<T> = Result<T, Diagnostic>;

impl<'s> Checker<'s> {
    pub fn new(sig: &'s Signature) -> Self {
        Checker { sig, trail: Vec::new() }
    }

    fn fail(&self, code: Code, msg: String) -> Diagnostic {
        Diagnostic::error(code, msg).with_trail(self.trail.clone())
    }

    fn enter(&mut self, name: &str, k: Depth) {
        self.trail.push(judgment_label(name, k));
    }

    fn leave<T>(&mut self, r: CResult<T>) -> CResult<T> {
        self.trail.pop();
        r
    }

    fn undefined(&self, u: Undefined) -> Diagnostic {
        self.fail(Code::UndefinedSubstitution, format!("{}", u))
    }

    /// `⊢ Γ validctx`
    pub fn check_context(&mut self, ctx: &Context, k: Depth) -> CResult<()> {
        if k == 0 {
            return Ok(());
        }
        self.enter("validctx", k);
        let mut prefix = Context::new();
        let mut r = Ok(());
        for (x, a) in ctx.entries() {
            r = self.check_type(&prefix, a, k);
            if r.is_err() {
                break;
            }
            prefix.push(x.clone(), a.clone());
        }
        self.leave(r)
    }

    /// `Γ ⊢ K ⇐ kind`
    pub fn check_kind(&mut self, ctx: &Context, kd: &Kind, k: Depth) -> CResult<()> {
        if k == 0 {
            return Ok(());
        }
        self.enter("kind", k);
        let r = match kd {
            Kind::Type | Kind::Cotype => Ok(()),
            Kind::Pi(x, a, rest) => self.check_type(ctx, a, k).and_then(|_| {
                let mut ctx2 = ctx.clone();
                ctx2.push(x.clone(), (**a).clone());
                self.check_kind(&ctx2, rest, k)
            }),
        };
        self.leave(r)
    }

    /// `Γ ⊢ A ⇐ type/cotype`
    pub fn check_type(&mut self, ctx: &Context, a: &Type, k: Depth) -> CResult<()> {
        if k == 0 {
            return Ok(());
        }
        self.enter("type", k);
        let r = match a {
            Type::Pi(x, b, c) => self.check_type(ctx, b, k).and_then(|_| {
                let mut ctx2 = ctx.clone();
                ctx2.push(x.clone(), (**b).clone());
                self.check_type(&ctx2, c, k)
            }),
            Type::Atom(f, _) => match self.infer_atomic(ctx, a, k) {
                Ok(Kind::Type | Kind::Cotype) => Ok(()),
                Ok(residual) => Err(self.fail(
                    Code::FamilyUnderApplied,
                    format!(
                        "type family `{}` is under-applied; it still expects arguments of kind `{}`",
                        f,
                        kind_to_string(&residual)
                    ),
                )),
                Err(e) => Err(e),
            },
        };
        self.leave(r)
    }

    /// `Γ ⊢ a · S ⇒ K`
    pub fn infer_atomic(&mut self, ctx: &Context, p: &Type, k: Depth) -> CResult<Kind> {
        let Type::Atom(f, spine) = p else {
            return Err(self.fail(Code::TypeMismatch, format!("`{}` is not an atomic type", type_to_string(p))));
        };
        self.enter("atomic", k);
        let r = match self.sig.family_kind(f) {
            None => Err(self.fail(Code::UnboundHead, format!("unknown type family `{}`", f))),
            Some(kd) if k == 0 => Ok(kd.clone()),
            Some(kd) => {
                let kd = kd.clone();
                self.spine_check_kind(ctx, f, spine, &kd, k)
            }
        };
        self.leave(r)
    }

    /// `Γ ⊢ S ▷ K ⇒ K'`. Indices are observed at `k - 1`.
    pub fn spine_check_kind(&mut self, ctx: &Context, f: &Name, spine: &[Term], kd: &Kind, k: Depth) -> CResult<Kind> {
        if k == 0 {
            return Ok(kd.clone());
        }
        self.enter("spine-kind", k);
        let r = self.kind_spine(ctx, f, spine, kd, k);
        self.leave(r)
    }

    fn kind_spine(&mut self, ctx: &Context, f: &Name, spine: &[Term], kd: &Kind, k: Depth) -> CResult<Kind> {
        let mut cur = kd.clone();
        for m in spine {
            match cur {
                Kind::Pi(x, a, rest) => {
                    self.check_term(ctx, m, &a, k - 1)?;
                    cur = subst_kind(m, &x, &erase(&a), &rest, k).map_err(|u| self.undefined(u))?;
                }
                Kind::Type | Kind::Cotype => {
                    return Err(self.fail(
                        Code::FamilyOverApplied,
                        format!("type family `{}` is applied to {} arguments, more than its kind allows", f, spine.len()),
                    ))
                }
            }
        }
        Ok(cur)
    }

    /// `Γ ⊢ M ⇐ A`
    pub fn check_term(&mut self, ctx: &Context, m: &Term, a: &Type, k: Depth) -> CResult<()> {
        if k == 0 {
            return Ok(());
        }
        self.enter("check", k);
        let r = match (m.node(), a) {
            (TermNode::Stub, _) => Err(self.fail(
                Code::StubAtPositiveDepth,
                format!("unobservable term `_` at depth {} (expected `{}`)", k, type_to_string(a)),
            )),
            (TermNode::Lam(x, body), Type::Pi(y, b, c)) => {
                let (z, body, c) = self.common_binder(ctx, x, body, y, c);
                let mut ctx2 = ctx.clone();
                ctx2.push(z, (**b).clone());
                self.check_term(&ctx2, &body, &c, k)
            }
            (TermNode::Lam(..), Type::Atom(..)) => Err(self.fail(
                Code::LambdaAgainstAtomic,
                format!("`{}` is a function but is expected to have atomic type `{}`", term_to_string(m), type_to_string(a)),
            )),
            (TermNode::App(..), Type::Pi(..)) => Err(self.fail(
                Code::NeutralAgainstPi,
                format!(
                    "`{}` is checked against the function type `{}`; terms of function type must be written as `[x] ...` (eta-long)",
                    term_to_string(m),
                    type_to_string(a)
                ),
            )),
            (TermNode::App(..), Type::Atom(..)) => match self.infer_neutral(ctx, m, k) {
                Ok(p) if eq_types_at_depth(&p, a, k) => Ok(()),
                Ok(p) => Err(self.fail(
                    Code::TypeMismatch,
                    format!(
                        "type mismatch at depth {}: expected `{}`, found `{}` for `{}`",
                        k,
                        type_to_string(a),
                        type_to_string(&p),
                        term_to_string(m)
                    ),
                )),
                Err(e) => Err(e),
            },
        };
        self.leave(r)
    }

    /// A binder name usable for both the lambda and the Pi, not clashing
    /// with anything in scope.
    fn common_binder(&self, ctx: &Context, x: &Name, body: &Term, y: &Name, c: &Type) -> (Name, Term, Type) {
        if x == y && !ctx.contains(x) {
            return (x.clone(), body.clone(), c.clone());
        }
        let mut avoid: BTreeSet<Name> = ctx.entries().iter().map(|(n, _)| n.clone()).collect();
        all_var_names(body, &mut avoid);
        all_var_names_type(c, &mut avoid);
        let z = if !avoid.contains(x) && valid_name(x) { x.clone() } else { fresh_avoiding(x, &avoid) };
        (z.clone(), body.rename_free(x, &z), c.rename_free(y, &z))
    }

    /// `Γ ⊢ R ⇒ P`
    pub fn infer_neutral(&mut self, ctx: &Context, r: &Term, k: Depth) -> CResult<Type> {
        let TermNode::App(h, spine) = r.node() else {
            return Err(self.fail(Code::TypeMismatch, format!("`{}` is not a neutral term", term_to_string(r))));
        };
        self.enter("infer", k);
        let res = match h {
            Head::Var(x) => match ctx.lookup(x) {
                Some(a) => {
                    let a = a.clone();
                    self.spine_check_continuing(ctx, h, spine, &a, k)
                }
                None => Err(self.fail(Code::UnboundHead, format!("unbound variable `{}`", x))),
            },
            Head::Const(c) => match self.sig.get(c).and_then(|d| match &d.body {
                DeclBody::Const(a) => Some(a.clone()),
                _ => None,
            }) {
                Some(a) => self.spine_check_suspended(ctx, h, spine, &a, k),
                None => Err(self.fail(Code::UnboundHead, format!("unknown constant `{}`", c))),
            },
            Head::Rec(r) => Err(self.fail(
                Code::UnboundHead,
                format!("recursive definition `{}` must be expanded before checking", r),
            )),
        };
        self.leave(res)
    }

    /// `Γ ⊢ T ▷ A ⇒ P`: elements at the same depth.
    pub fn spine_check_continuing(&mut self, ctx: &Context, h: &Head, spine: &[Term], a: &Type, k: Depth) -> CResult<Type> {
        self.enter("spine-continuing", k);
        let r = self.spine_check(ctx, h, spine, a, k, k);
        self.leave(r)
    }

    /// `Γ ⊢ S ▷ A ⇒ P`: elements one depth lower.
    pub fn spine_check_suspended(&mut self, ctx: &Context, h: &Head, spine: &[Term], a: &Type, k: Depth) -> CResult<Type> {
        self.enter("spine-suspended", k);
        let r = self.spine_check(ctx, h, spine, a, k, k.saturating_sub(1));
        self.leave(r)
    }

    fn spine_check(&mut self, ctx: &Context, h: &Head, spine: &[Term], a: &Type, k: Depth, elem_k: Depth) -> CResult<Type> {
        if k == 0 {
            return Ok(a.clone());
        }
        let mut cur = a.clone();
        for (i, m) in spine.iter().enumerate() {
            match cur {
                Type::Pi(x, b, rest) => {
                    self.check_term(ctx, m, &b, elem_k)?;
                    // the substituted term is viewed at k - 1
                    let n = if elem_k == k { crate::syntax::truncate_to(m, k - 1) } else { m.clone() };
                    cur = subst_cantype(&n, &x, &erase(&b), &rest, k).map_err(|u| self.undefined(u))?;
                }
                Type::Atom(..) => {
                    return Err(self.fail(
                        Code::SpineArity,
                        format!(
                            "`{}` is applied to {} arguments but its type `{}` only accepts {}",
                            h.name(),
                            spine.len(),
                            type_to_string(a),
                            i
                        ),
                    ))
                }
            }
        }
        match cur {
            Type::Atom(..) => Ok(cur),
            Type::Pi(..) => Err(self.fail(
                Code::SpineArity,
                format!(
                    "`{}` is applied to {} arguments but its type `{}` needs more (terms must be eta-long)",
                    h.name(),
                    spine.len(),
                    type_to_string(a)
                ),
            )),
        }
    }
}

fn valid_name(x: &Name) -> bool {
    x.as_str() != "_"
}

/// Check a finitary signature at depth `k`: every declaration is expanded
/// to depth `k` and checked against the declarations before it. Definition
/// bodies must be contractive, expand, and check against their type.
///
/// A failing declaration is reported and left out, so later declarations
/// that mention it report their own errors.
pub fn check_signature(sig: &Signature, k: Depth) -> Vec<Diagnostic> {
    check_signature_with(sig, k, usize::MAX)
}

/// As [`check_signature`], bounding the expansion memo.
pub fn check_signature_with(sig: &Signature, k: Depth, max_memo: usize) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    if k == 0 {
        return diags;
    }
    let mut ex = Expander::new(DefTable::new()).with_max_entries(max_memo);
    let mut expanded = Signature::new();
    for d in sig.decls() {
        let here = |e: Diagnostic| e.with_span(d.span);
        let outcome: Result<Option<Decl>, Diagnostic> = (|| {
            let mut ck = Checker::new(&expanded);
            match &d.body {
                DeclBody::Family(kd) => {
                    let kd = ex.expand_kind(kd, k).map_err(|e| expansion_diag(&d.name, e))?;
                    ck.check_kind(&Context::new(), &kd, k)?;
                    Ok(Some(Decl { body: DeclBody::Family(kd), ..d.clone() }))
                }
                DeclBody::Const(a) => {
                    let a = ex.expand_type(a, k).map_err(|e| expansion_diag(&d.name, e))?;
                    ck.check_type(&Context::new(), &a, k)?;
                    Ok(Some(Decl { body: DeclBody::Const(a), ..d.clone() }))
                }
                DeclBody::Def(a, m) => {
                    let ea = ex.expand_type(a, k).map_err(|e| expansion_diag(&d.name, e))?;
                    ck.check_type(&Context::new(), &ea, k)?;
                    if !is_contractive(m) {
                        return Err(Diagnostic::error(
                            Code::NonContractive,
                            format!("definition `{}` is not contractive: its body must start with a constant after its lambdas", d.name),
                        ));
                    }
                    ex.add_def(d.name.clone(), a.clone(), m.clone());
                    let res = ex
                        .expand_def(&d.name, k)
                        .map_err(|e| expansion_diag(&d.name, e))
                        .and_then(|em| ck.check_term(&Context::new(), &em, &ea, k));
                    if let Err(e) = res {
                        ex.remove_def(&d.name);
                        return Err(e);
                    }
                    Ok(None)
                }
            }
        })();
        match outcome {
            Ok(Some(decl)) => {
                let _ = expanded.push(decl);
            }
            Ok(None) => {}
            Err(e) => diags.push(here(e)),
        }
    }
    diags
}

fn expansion_diag(name: &Name, e: ExpandError) -> Diagnostic {
    let code = match e {
        ExpandError::Undefined(..) => Code::UndefinedSubstitution,
        ExpandError::UnboundRec(_) => Code::UnboundHead,
        ExpandError::Unguarded(_) => Code::ExpansionFailure,
    };
    Diagnostic::error(code, format!("while expanding `{}`: {}", name, e))
}
