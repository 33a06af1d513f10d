//! Reference for trace validity: unfold each definition lazily with an
//! environment machine, recording along every path which definitions were
//! entered and which constructors were passed. Between two entries of the
//! same definition on one path there must be a constructor, and the
//! highest-priority one there must be coinductive.
//!
//! The machine also rebuilds the depth-12 expansion, which is compared with
//! the kernel's to make sure the traces are the right ones.

use std::collections::BTreeMap;
use std::rc::Rc;

use colfw_core::driver::load;
use colfw_core::syntax::{DeclBody, Head, Kind, Name, Signature, Term, TermNode};
use colfw_core::unfold::{eq_at_depth, DefTable, ExpandError, Expander};
use colfw_core::validity::validity_report;

const DEPTH: usize = 12;
const MAX_NODES: usize = 3_000_000;

enum Val {
    Clo(Term, Env),
    Free(Name),
}

#[derive(Clone, Default)]
struct Env(Option<Rc<(Name, Rc<Val>, Env)>>);

impl Env {
    fn bind(&self, x: Name, v: Rc<Val>) -> Env {
        Env(Some(Rc::new((x, v, self.clone()))))
    }

    fn get(&self, x: &Name) -> Option<Rc<Val>> {
        let mut cur = &self.0;
        while let Some(n) = cur {
            if &n.0 == x {
                return Some(n.1.clone());
            }
            cur = &n.2 .0;
        }
        None
    }
}

#[derive(Clone)]
enum Ev {
    Enter(Name),
    Pass(Name),
}

#[derive(Debug, PartialEq, Eq)]
enum Verdict {
    Valid,
    Inductive,
    Unproductive,
}

struct Machine<'s> {
    bodies: BTreeMap<Name, Term>,
    /// Constructor name to (priority, coinductive).
    prio: &'s BTreeMap<Name, (usize, bool)>,
    path: Vec<Ev>,
    verdict: Verdict,
    fresh: usize,
    nodes: usize,
}

impl Machine<'_> {
    fn check_segment(&mut self, r: &Name) {
        let Some(start) = self.path.iter().rposition(|e| matches!(e, Ev::Enter(s) if s == r)) else { return };
        let top = self.path[start + 1..]
            .iter()
            .filter_map(|e| match e {
                Ev::Pass(c) => self.prio.get(c),
                Ev::Enter(_) => None,
            })
            .max_by_key(|p| p.0);
        match top {
            None => self.verdict = Verdict::Unproductive,
            Some(&(_, false)) if self.verdict == Verdict::Valid => self.verdict = Verdict::Inductive,
            _ => {}
        }
    }

    fn force(&mut self, v: &Rc<Val>, k: usize) -> Option<Term> {
        match &**v {
            Val::Clo(t, e) => self.eval(t.clone(), e.clone(), Vec::new(), k),
            Val::Free(x) => Some(Term::var(x.as_str())),
        }
    }

    /// The depth-`k` tree of `t` in `env` applied to `args`; `None` once
    /// an unproductive cycle is found, since the tree is then not finite.
    fn eval(&mut self, mut t: Term, mut env: Env, mut args: Vec<Rc<Val>>, k: usize) -> Option<Term> {
        self.nodes += 1;
        if self.nodes > MAX_NODES {
            return None;
        }
        let entered = self.path.len();
        let out = loop {
            if k == 0 {
                break Some(Term::stub());
            }
            match t.node() {
                TermNode::Stub => break Some(Term::stub()),
                TermNode::Lam(x, b) => {
                    if !args.is_empty() {
                        env = env.bind(x.clone(), args.remove(0));
                        t = b.clone();
                        continue;
                    }
                    self.fresh += 1;
                    let v = Name::new(&format!("v{}", self.fresh));
                    let e2 = env.bind(x.clone(), Rc::new(Val::Free(v.clone())));
                    let body = self.eval(b.clone(), e2, Vec::new(), k)?;
                    break Some(Term::lam(v, body));
                }
                TermNode::App(h, s) => {
                    let mut all: Vec<Rc<Val>> = s.iter().map(|m| Rc::new(Val::Clo(m.clone(), env.clone()))).collect();
                    all.append(&mut args);
                    match h {
                        Head::Var(x) => match env.get(x).as_deref() {
                            Some(Val::Clo(t2, e2)) => {
                                t = t2.clone();
                                env = e2.clone();
                                args = all;
                            }
                            other => {
                                let v = match other {
                                    Some(Val::Free(v)) => v.clone(),
                                    _ => x.clone(),
                                };
                                let spine = all.iter().map(|a| self.force(a, k)).collect::<Option<Vec<_>>>()?;
                                break Some(Term::app(Head::Var(v), spine));
                            }
                        },
                        Head::Const(c) => {
                            self.path.push(Ev::Pass(c.clone()));
                            let spine = all.iter().map(|a| self.force(a, k - 1)).collect::<Option<Vec<_>>>();
                            self.path.pop();
                            break Some(Term::app(h.clone(), spine?));
                        }
                        Head::Rec(r) => {
                            self.check_segment(r);
                            if self.verdict == Verdict::Unproductive {
                                break None;
                            }
                            self.path.push(Ev::Enter(r.clone()));
                            t = self.bodies[r].clone();
                            env = Env::default();
                            args = all;
                        }
                    }
                }
            }
        };
        self.path.truncate(entered);
        out
    }
}

fn priorities(sig: &Signature) -> BTreeMap<Name, (usize, bool)> {
    let mut fams: BTreeMap<Name, (usize, bool)> = BTreeMap::new();
    let mut out = BTreeMap::new();
    for d in sig.decls() {
        match &d.body {
            DeclBody::Family(k) => {
                let n = fams.len();
                fams.insert(d.name.clone(), (n, matches!(k.terminal(), Kind::Cotype)));
            }
            DeclBody::Const(a) => {
                if let Some(p) = fams.get(a.target().0) {
                    out.insert(d.name.clone(), *p);
                }
            }
            DeclBody::Def(..) => {}
        }
    }
    out
}

/// Number of definitions whose verdict matches, or a description of the
/// first disagreement.
pub fn compare(file: &str, src: &str) -> Result<usize, String> {
    compare_counting(file, src).map(|(n, _)| n)
}

/// Also returns how many definitions the reference judged invalid.
pub fn compare_counting(file: &str, src: &str) -> Result<(usize, usize), String> {
    let (sig, diags) = load(src);
    if !diags.is_empty() {
        return Err(format!("{}: does not elaborate: {:?}\n{}", file, diags, src));
    }
    let prio = priorities(&sig);
    let bodies: BTreeMap<Name, Term> = sig
        .decls()
        .iter()
        .filter_map(|d| match &d.body {
            DeclBody::Def(_, m) => Some((d.name.clone(), m.clone())),
            _ => None,
        })
        .collect();
    let (reports, _) = validity_report(&sig);
    let mut kernel = Expander::new(DefTable::from_signature(&sig));
    let mut invalid = 0;
    for rep in &reports {
        let mut m = Machine { bodies: bodies.clone(), prio: &prio, path: Vec::new(), verdict: Verdict::Valid, fresh: 0, nodes: 0 };
        let tree = m.eval(Term::rec(rep.name.as_str(), vec![]), Env::default(), Vec::new(), DEPTH);
        if m.nodes > MAX_NODES {
            return Err(format!("{}: `{}` has too many traces to enumerate", file, rep.name));
        }
        let expanded = kernel.expand_def(&rep.name, DEPTH);
        match (&tree, &expanded) {
            (Some(t), Ok(e)) if !eq_at_depth(t, e, DEPTH) => {
                return Err(format!("{}: `{}` traces differ from the kernel expansion", file, rep.name))
            }
            (Some(_), Ok(_)) | (None, Err(ExpandError::Unguarded(_))) => {}
            (t, e) => {
                return Err(format!("{}: `{}` machine {:?} vs kernel {:?}", file, rep.name, t.is_some(), e))
            }
        }
        let valid = m.verdict == Verdict::Valid;
        if !valid {
            invalid += 1;
        }
        if valid != rep.valid {
            return Err(format!(
                "{}: `{}` reference says {:?}, graph says valid={}\n{}",
                file, rep.name, m.verdict, rep.valid, src
            ));
        }
    }
    Ok((reports.len(), invalid))
}
