//! Random simply typed canonical terms, and an untyped reference
//! normalizer to compare hereditary substitution against.

use colfw_core::subst::SimpleContext;
use colfw_core::syntax::{Head, Name, SimpleType, Term, TermNode};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn base() -> SimpleType {
    SimpleType::Base
}

pub fn arr(a: SimpleType, b: SimpleType) -> SimpleType {
    SimpleType::arrow(a, b)
}

/// Constants available to generated terms.
pub fn constants() -> Vec<(&'static str, SimpleType)> {
    vec![
        ("z", base()),
        ("s", arr(base(), base())),
        ("p", arr(base(), arr(base(), base()))),
        ("h", arr(arr(base(), base()), base())),
        ("g", arr(arr(arr(base(), base()), base()), base())),
    ]
}

/// Free variables every generated term may use.
pub fn free_context() -> Vec<(Name, SimpleType)> {
    vec![(Name::new("a"), base()), (Name::new("f"), arr(base(), base()))]
}

pub fn simple_context(vars: &[(Name, SimpleType)]) -> SimpleContext {
    let mut d = SimpleContext::new();
    for (c, t) in constants() {
        d.insert(Head::Const(Name::new(c)), t);
    }
    for (x, t) in vars {
        d.insert(Head::Var(x.clone()), t.clone());
    }
    d
}

pub fn random_type(rng: &mut ChaCha8Rng, height: usize) -> SimpleType {
    if height == 0 || rng.gen_bool(0.45) {
        base()
    } else {
        arr(random_type(rng, height - 1), random_type(rng, height - 1))
    }
}

fn arity(mut t: &SimpleType) -> Vec<SimpleType> {
    let mut out = Vec::new();
    while let SimpleType::Arrow(a, b) = t {
        out.push((**a).clone());
        t = b;
    }
    out
}

/// Binder names are drawn from a small pool that overlaps the free
/// variables, so shadowing and capture situations are common.
const BINDERS: [&str; 5] = ["u", "v", "w", "a", "x"];

pub struct Gen<'r> {
    pub rng: &'r mut ChaCha8Rng,
    budget: i32,
}

impl<'r> Gen<'r> {
    pub fn new(rng: &'r mut ChaCha8Rng, budget: i32) -> Self {
        Gen { rng, budget }
    }

    /// An η-long β-normal term of type `t`; innermost bindings win.
    pub fn canonical(&mut self, ctx: &mut Vec<(Name, SimpleType)>, t: &SimpleType) -> Term {
        match t {
            SimpleType::Arrow(a, b) => {
                let y = Name::new(BINDERS[self.rng.gen_range(0..BINDERS.len())]);
                ctx.push((y.clone(), (**a).clone()));
                let body = self.canonical(ctx, b);
                ctx.pop();
                Term::lam(y, body)
            }
            SimpleType::Base => {
                self.budget -= 1;
                let mut heads: Vec<(Head, SimpleType)> = Vec::new();
                for (c, ct) in constants() {
                    heads.push((Head::Const(Name::new(c)), ct));
                }
                for (i, (x, xt)) in ctx.iter().enumerate() {
                    let shadowed = ctx[i + 1..].iter().any(|(y, _)| y == x);
                    if !shadowed {
                        heads.push((Head::Var(x.clone()), xt.clone()));
                    }
                }
                if self.budget <= 0 {
                    heads.retain(|(_, t)| arity(t).is_empty());
                } else if self.rng.gen_bool(0.5) {
                    // favour variables: they are what substitution acts on
                    let vars: Vec<_> = heads.iter().filter(|(h, _)| matches!(h, Head::Var(_))).cloned().collect();
                    if !vars.is_empty() {
                        heads = vars;
                    }
                }
                let (h, ht) = heads[self.rng.gen_range(0..heads.len())].clone();
                let spine = arity(&ht).iter().map(|a| self.canonical(ctx, a)).collect();
                Term::app(h, spine)
            }
        }
    }
}

pub fn contains_var(m: &Term, x: &Name) -> bool {
    colfw_core::syntax::free_vars(m).contains(x)
}

/// Untyped λ-terms with named variables.
#[derive(Clone, Debug)]
pub enum U {
    V(String),
    C(String),
    L(String, Box<U>),
    A(Box<U>, Box<U>),
}

pub fn from_term(m: &Term) -> U {
    match m.node() {
        TermNode::Stub => panic!("stub in finite term"),
        TermNode::Lam(x, b) => U::L(x.to_string(), Box::new(from_term(b))),
        TermNode::App(h, s) => {
            let head = match h {
                Head::Var(x) => U::V(x.to_string()),
                Head::Const(c) | Head::Rec(c) => U::C(c.to_string()),
            };
            s.iter().fold(head, |acc, a| U::A(Box::new(acc), Box::new(from_term(a))))
        }
    }
}

fn free_in(u: &U, x: &str) -> bool {
    match u {
        U::V(y) => y == x,
        U::C(_) => false,
        U::L(y, b) => y != x && free_in(b, x),
        U::A(f, a) => free_in(f, x) || free_in(a, x),
    }
}

pub struct Oracle {
    counter: usize,
    pub fuel: usize,
}

impl Oracle {
    pub fn new(fuel: usize) -> Self {
        Oracle { counter: 0, fuel }
    }

    fn fresh(&mut self) -> String {
        self.counter += 1;
        // not a legal identifier, so it cannot clash with anything generated
        format!("#{}", self.counter)
    }

    /// Capture-avoiding `[n/x]u`.
    pub fn subst(&mut self, u: &U, x: &str, n: &U) -> U {
        match u {
            U::V(y) if y == x => n.clone(),
            U::V(_) | U::C(_) => u.clone(),
            U::A(f, a) => U::A(Box::new(self.subst(f, x, n)), Box::new(self.subst(a, x, n))),
            U::L(y, _) if y == x => u.clone(),
            U::L(y, b) => {
                if free_in(n, y) {
                    let z = self.fresh();
                    let b2 = self.subst(b, y, &U::V(z.clone()));
                    U::L(z, Box::new(self.subst(&b2, x, n)))
                } else {
                    U::L(y.clone(), Box::new(self.subst(b, x, n)))
                }
            }
        }
    }

    /// Normal-order reduction to β-normal form; `None` when fuel runs out.
    pub fn normalize(&mut self, u: &U) -> Option<U> {
        match u {
            U::V(_) | U::C(_) => Some(u.clone()),
            U::L(x, b) => Some(U::L(x.clone(), Box::new(self.normalize(b)?))),
            U::A(..) => {
                let w = self.whnf(u)?;
                match w {
                    U::A(f, a) => {
                        let f = self.normalize(&f)?;
                        let a = self.normalize(&a)?;
                        Some(U::A(Box::new(f), Box::new(a)))
                    }
                    U::L(..) => self.normalize(&w),
                    _ => Some(w),
                }
            }
        }
    }

    fn whnf(&mut self, u: &U) -> Option<U> {
        match u {
            U::A(f, a) => {
                let f = self.whnf(f)?;
                match f {
                    U::L(x, b) => {
                        if self.fuel == 0 {
                            return None;
                        }
                        self.fuel -= 1;
                        let r = self.subst(&b, &x, a);
                        self.whnf(&r)
                    }
                    f => Some(U::A(Box::new(f), a.clone())),
                }
            }
            _ => Some(u.clone()),
        }
    }
}

/// A β-normal untyped term as a kernel term; `None` if not normal.
pub fn to_term(u: &U) -> Option<Term> {
    match u {
        U::L(x, b) => Some(Term::lam(Name::new(x), to_term(b)?)),
        _ => {
            let mut args = Vec::new();
            let mut cur = u;
            while let U::A(f, a) = cur {
                args.push(to_term(a)?);
                cur = f;
            }
            args.reverse();
            let h = match cur {
                U::V(x) => Head::Var(Name::new(x)),
                U::C(c) => Head::Const(Name::new(c)),
                _ => return None,
            };
            Some(Term::app(h, args))
        }
    }
}

/// Reference `[n/x]m`, normalized; `None` if it does not normalize.
pub fn reference_subst(n: &Term, x: &Name, m: &Term) -> Option<Term> {
    let mut o = Oracle::new(20_000);
    let u = o.subst(&from_term(m), x.as_str(), &from_term(n));
    let nf = o.normalize(&u)?;
    to_term(&nf)
}
