//! Trace validity of recursive definitions.
//!
//! Families are ranked by declaration order (later is higher) and
//! constructors inherit the rank of their target family. An infinite
//! trace is valid when the highest-ranked constructor occurring infinitely
//! often on it is coinductive. Definitions are finitary, so the infinite
//! traces of their expansions are the infinite paths through a finite
//! graph over recursion constants; the condition is decided per strongly
//! connected component.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::diag::{Code, Diagnostic, Span};
use crate::syntax::{DeclBody, Head, Kind, Name, Signature, Term, TermNode};

pub type Priority = usize;

#[derive(Clone, Debug, Default)]
pub struct Priorities {
    families: BTreeMap<Name, (Priority, bool)>,
    constants: BTreeMap<Name, Priority>,
    names: Vec<Name>,
}

impl Priorities {
    pub fn family(&self, a: &Name) -> Option<Priority> {
        self.families.get(a).map(|p| p.0)
    }

    pub fn constant(&self, c: &Name) -> Option<Priority> {
        self.constants.get(c).copied()
    }

    /// Whether the family of rank `p` was declared `cotype`.
    pub fn is_coinductive(&self, p: Priority) -> bool {
        self.names.get(p).and_then(|a| self.families.get(a)).map_or(false, |f| f.1)
    }

    pub fn family_name(&self, p: Priority) -> Option<&Name> {
        self.names.get(p)
    }
}

pub fn assign_priorities(sig: &Signature) -> Priorities {
    let mut pr = Priorities::default();
    for d in sig.decls() {
        match &d.body {
            DeclBody::Family(kd) => {
                let p = pr.names.len();
                pr.names.push(d.name.clone());
                pr.families.insert(d.name.clone(), (p, matches!(kd.terminal(), Kind::Cotype)));
            }
            DeclBody::Const(a) => {
                if let Some(p) = pr.family(a.target().0) {
                    pr.constants.insert(d.name.clone(), p);
                }
            }
            DeclBody::Def(..) => {}
        }
    }
    pr
}

/// The body's head, under its lambdas, is a constant.
pub fn is_contractive(body: &Term) -> bool {
    matches!(body.strip_lams().1.node(), TermNode::App(Head::Const(_), _))
}

/// Every recursion constant is applied only to distinct bound variables
/// (possibly eta-expanded).
pub fn is_prepattern(body: &Term) -> bool {
    fn bound_var(m: &Term) -> Option<&Name> {
        let (xs, h) = m.strip_lams();
        match h.node() {
            TermNode::App(Head::Var(y), args) if args.len() == xs.len() => {
                let eta = args.iter().zip(xs.iter()).all(|(a, x)| bound_var(a) == Some(*x));
                (eta && !xs.contains(&y)).then_some(y)
            }
            _ => None,
        }
    }
    fn go(m: &Term, bound: &mut Vec<Name>) -> bool {
        match m.node() {
            TermNode::Stub => true,
            TermNode::Lam(x, b) => {
                bound.push(x.clone());
                let r = go(b, bound);
                bound.pop();
                r
            }
            TermNode::App(Head::Rec(_), args) => {
                let mut seen = BTreeSet::new();
                args.iter().all(|a| match bound_var(a) {
                    Some(y) => bound.contains(y) && seen.insert(y.clone()),
                    None => false,
                })
            }
            TermNode::App(_, args) => args.iter().all(|a| go(a, bound)),
        }
    }
    go(body, &mut Vec::new())
}

/// The highest-ranked constructor seen so far on a path, if any.
pub type Label = Option<(Priority, Name)>;

fn join(a: &Label, b: &Label) -> Label {
    match (a, b) {
        (Some(x), Some(y)) => Some(if y.0 > x.0 { y.clone() } else { x.clone() }),
        (Some(x), None) | (None, Some(x)) => Some(x.clone()),
        (None, None) => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: Name,
    pub to: Name,
    pub label: Label,
}

/// Nodes are the recursion constants of contractive definitions.
#[derive(Clone, Debug, Default)]
pub struct TraceGraph {
    pub nodes: Vec<Name>,
    pub edges: Vec<Edge>,
}

/// For each definition and parameter, the labels of the paths from the
/// root of its expansion to occurrences of that parameter.
type Summaries = BTreeMap<Name, Vec<BTreeSet<Label>>>;

struct Walk<'a> {
    prios: &'a Priorities,
    summaries: &'a Summaries,
    params: Vec<(Name, usize)>,
    edges: BTreeSet<(Name, Label)>,
    param_hits: Vec<BTreeSet<Label>>,
}

impl<'a> Walk<'a> {
    fn param_index(&self, x: &Name) -> Option<usize> {
        self.params.iter().rev().find(|(y, _)| y == x).map(|p| p.1)
    }

    fn walk(&mut self, m: &Term, cur: &BTreeSet<Label>) {
        match m.node() {
            TermNode::Stub => {}
            TermNode::Lam(x, b) => {
                // shadows a parameter of the same name
                self.params.push((x.clone(), usize::MAX));
                self.walk(b, cur);
                self.params.pop();
            }
            TermNode::App(Head::Const(c), args) => {
                let lc: Label = self.prios.constant(c).map(|p| (p, c.clone()));
                let next: BTreeSet<Label> = cur.iter().map(|l| join(l, &lc)).collect();
                for a in args {
                    self.walk(a, &next);
                }
            }
            TermNode::App(Head::Var(x), args) => {
                if let Some(i) = self.param_index(x).filter(|&i| i != usize::MAX) {
                    self.param_hits[i].extend(cur.iter().cloned());
                }
                for a in args {
                    self.walk(a, cur);
                }
            }
            TermNode::App(Head::Rec(t), args) => {
                for l in cur {
                    self.edges.insert((t.clone(), l.clone()));
                }
                // an argument is reached through the callee's paths to
                // the corresponding parameter
                let summ = self.summaries.get(t);
                for (j, a) in args.iter().enumerate() {
                    let Some(pl) = summ.and_then(|s| s.get(j)) else { continue };
                    let next: BTreeSet<Label> = cur.iter().flat_map(|l| pl.iter().map(move |p| join(l, p))).collect();
                    if !next.is_empty() {
                        self.walk(a, &next);
                    }
                }
            }
        }
    }
}

fn walk_def(prios: &Priorities, summaries: &Summaries, body: &Term) -> (BTreeSet<(Name, Label)>, Vec<BTreeSet<Label>>) {
    let (xs, inner) = body.strip_lams();
    let mut w = Walk {
        prios,
        summaries,
        params: xs.iter().enumerate().map(|(i, x)| ((*x).clone(), i)).collect(),
        edges: BTreeSet::new(),
        param_hits: vec![BTreeSet::new(); xs.len()],
    };
    let start: BTreeSet<Label> = [None].into_iter().collect();
    w.walk(inner, &start);
    (w.edges, w.param_hits)
}

/// Build the trace graph over the contractive definitions of `sig`.
pub fn build_trace_graph(sig: &Signature, prios: &Priorities) -> TraceGraph {
    let defs: Vec<(&Name, &Term)> = sig
        .decls()
        .iter()
        .filter_map(|d| match &d.body {
            DeclBody::Def(_, m) if is_contractive(m) => Some((&d.name, m)),
            _ => None,
        })
        .collect();
    let mut summaries: Summaries = BTreeMap::new();
    // Definitions only mention earlier ones and themselves, so one
    // fixpoint per definition, in order, suffices.
    for (r, m) in &defs {
        loop {
            let (_, hits) = walk_def(prios, &summaries, m);
            if summaries.get(*r) == Some(&hits) {
                break;
            }
            summaries.insert((*r).clone(), hits);
        }
    }
    let mut g = TraceGraph::default();
    let known: BTreeSet<&Name> = defs.iter().map(|d| d.0).collect();
    for (r, m) in &defs {
        g.nodes.push((*r).clone());
        let (edges, _) = walk_def(prios, &summaries, m);
        for (t, label) in edges {
            if known.contains(&t) {
                g.edges.push(Edge { from: (*r).clone(), to: t, label });
            }
        }
    }
    g
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// The highest-ranked constructor on the cycle is inductive.
    Inductive(Name),
    /// No constructor at all on the cycle.
    Unproductive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Closed path, first node repeated at the end.
    pub cycle: Vec<Name>,
}

impl Violation {
    /// The latest-declared definition on the cycle, which is where the
    /// cycle is closed.
    pub fn owner<'a>(&'a self, order: &[Name]) -> &'a Name {
        self.cycle
            .iter()
            .max_by_key(|n| order.iter().position(|m| m == *n).unwrap_or(0))
            .unwrap_or(&self.cycle[0])
    }

    pub fn witness(&self) -> String {
        let path: Vec<&str> = self.cycle.iter().map(|n| n.as_str()).collect();
        match &self.kind {
            ViolationKind::Inductive(c) => format!("{} (highest constructor `{}` is inductive)", path.join(" -> "), c),
            ViolationKind::Unproductive => format!("{} (no constructor on the cycle)", path.join(" -> ")),
        }
    }
}

/// Tarjan's algorithm over the given edge subset; returns a component id
/// per node.
fn components(n: usize, adj: &[Vec<usize>]) -> Vec<usize> {
    struct St<'a> {
        adj: &'a [Vec<usize>],
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on: Vec<bool>,
        stack: Vec<usize>,
        comp: Vec<usize>,
        next: usize,
        ncomp: usize,
    }
    fn visit(s: &mut St, v: usize) {
        s.index[v] = Some(s.next);
        s.low[v] = s.next;
        s.next += 1;
        s.stack.push(v);
        s.on[v] = true;
        for i in 0..s.adj[v].len() {
            let w = s.adj[v][i];
            match s.index[w] {
                None => {
                    visit(s, w);
                    s.low[v] = s.low[v].min(s.low[w]);
                }
                Some(iw) if s.on[w] => s.low[v] = s.low[v].min(iw),
                _ => {}
            }
        }
        if Some(s.low[v]) == s.index[v] {
            while let Some(w) = s.stack.pop() {
                s.on[w] = false;
                s.comp[w] = s.ncomp;
                if w == v {
                    break;
                }
            }
            s.ncomp += 1;
        }
    }
    let mut s = St {
        adj,
        index: vec![None; n],
        low: vec![0; n],
        on: vec![false; n],
        stack: Vec::new(),
        comp: vec![0; n],
        next: 0,
        ncomp: 0,
    };
    for v in 0..n {
        if s.index[v].is_none() {
            visit(&mut s, v);
        }
    }
    s.comp
}

/// A path `to ~> from` inside `allowed`, closed into a cycle through the
/// edge `from -> to`.
fn witness_cycle(g: &TraceGraph, idx: &BTreeMap<&Name, usize>, allowed: &[bool], e: usize) -> Vec<Name> {
    let (from, to) = (idx[&g.edges[e].from], idx[&g.edges[e].to]);
    let mut prev: Vec<Option<usize>> = vec![None; g.nodes.len()];
    let mut seen = vec![false; g.nodes.len()];
    let mut queue = alloc::collections::VecDeque::new();
    seen[to] = true;
    queue.push_back(to);
    while let Some(v) = queue.pop_front() {
        if v == from {
            break;
        }
        for (i, ed) in g.edges.iter().enumerate() {
            if allowed[i] && idx[&ed.from] == v {
                let w = idx[&ed.to];
                if !seen[w] {
                    seen[w] = true;
                    prev[w] = Some(v);
                    queue.push_back(w);
                }
            }
        }
    }
    let mut path = vec![from];
    let mut v = from;
    while v != to {
        match prev[v] {
            Some(p) => {
                path.push(p);
                v = p;
            }
            None => break,
        }
    }
    path.reverse();
    let mut cycle: Vec<Name> = path.into_iter().map(|i| g.nodes[i].clone()).collect();
    cycle.insert(0, g.nodes[from].clone());
    // cycle is now from, to, ..., from
    cycle
}

/// Every violating cycle, one witness per offending edge class.
pub fn check_validity(g: &TraceGraph, prios: &Priorities) -> Vec<Violation> {
    let idx: BTreeMap<&Name, usize> = g.nodes.iter().enumerate().map(|(i, n)| (n, i)).collect();
    let n = g.nodes.len();
    let mut out: Vec<Violation> = Vec::new();
    let mut reported: BTreeSet<(usize, Option<Priority>)> = BTreeSet::new();
    let mut check = |pred: &dyn Fn(&Label) -> bool, bad: &dyn Fn(&Label) -> bool, kind: &dyn Fn(&Label) -> ViolationKind| {
        let allowed: Vec<bool> = g.edges.iter().map(|e| pred(&e.label)).collect();
        let mut adj = vec![Vec::new(); n];
        for (i, e) in g.edges.iter().enumerate() {
            if allowed[i] {
                adj[idx[&e.from]].push(idx[&e.to]);
            }
        }
        let comp = components(n, &adj);
        for (i, e) in g.edges.iter().enumerate() {
            if allowed[i] && bad(&e.label) && comp[idx[&e.from]] == comp[idx[&e.to]] {
                let key = (comp[idx[&e.from]], e.label.as_ref().map(|l| l.0));
                if reported.insert(key) {
                    out.push(Violation { kind: kind(&e.label), cycle: witness_cycle(g, &idx, &allowed, i) });
                }
            }
        }
    };
    let mut inductive: Vec<Priority> = g
        .edges
        .iter()
        .filter_map(|e| e.label.as_ref().map(|l| l.0))
        .filter(|&p| !prios.is_coinductive(p))
        .collect();
    inductive.sort_unstable();
    inductive.dedup();
    for p in inductive {
        check(
            &|l| l.as_ref().map_or(true, |x| x.0 <= p),
            &|l| l.as_ref().map_or(false, |x| x.0 == p),
            &|l| ViolationKind::Inductive(l.as_ref().unwrap().1.clone()),
        );
    }
    check(&|l| l.is_none(), &|_| true, &|_| ViolationKind::Unproductive);
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefReport {
    pub name: Name,
    pub contractive: bool,
    pub prepattern: bool,
    /// Contractive, and no violating cycle is reachable from it.
    pub valid: bool,
    pub witness: Option<String>,
    pub span: Option<Span>,
}

/// Run the whole pipeline: priorities, contractiveness, trace graph,
/// cycle condition, prepattern status. Diagnostics are attached to the
/// definition closing each offending cycle.
pub fn validity_report(sig: &Signature) -> (Vec<DefReport>, Vec<Diagnostic>) {
    let prios = assign_priorities(sig);
    let g = build_trace_graph(sig, &prios);
    let violations = check_validity(&g, &prios);
    let mut diags = Vec::new();
    let mut reports = Vec::new();
    let span_of = |n: &Name| sig.get(n).and_then(|d| d.span);
    for d in sig.decls() {
        let DeclBody::Def(_, m) = &d.body else { continue };
        let contractive = is_contractive(m);
        if !contractive {
            diags.push(
                Diagnostic::error(
                    Code::NonContractive,
                    format!("definition `{}` is not contractive: its body must start with a constant after its lambdas", d.name),
                )
                .with_span(d.span),
            );
        }
        reports.push(DefReport {
            name: d.name.clone(),
            contractive,
            prepattern: is_prepattern(m),
            valid: contractive,
            witness: None,
            span: d.span,
        });
    }
    for v in &violations {
        let owner = v.owner(&g.nodes);
        let (code, what) = match v.kind {
            ViolationKind::Inductive(_) => (Code::InvalidCycle, "is not trace-valid"),
            ViolationKind::Unproductive => (Code::UnproductiveCycle, "is not productive"),
        };
        diags.push(
            Diagnostic::error(code, format!("definition `{}` {}: cycle {}", owner, what, v.witness())).with_span(span_of(owner)),
        );
    }
    // a definition is invalid if it can reach a violating cycle
    let reach = reachability(&g);
    for r in &mut reports {
        if !r.valid {
            continue;
        }
        if let Some(v) = violations.iter().find(|v| v.cycle.iter().any(|c| reach.contains(&(r.name.clone(), c.clone())))) {
            r.valid = false;
            r.witness = Some(v.witness());
        }
    }
    (reports, diags)
}

fn reachability(g: &TraceGraph) -> BTreeSet<(Name, Name)> {
    let mut out = BTreeSet::new();
    for s in &g.nodes {
        let mut stack = vec![s.clone()];
        out.insert((s.clone(), s.clone()));
        while let Some(v) = stack.pop() {
            for e in g.edges.iter().filter(|e| e.from == v) {
                if out.insert((s.clone(), e.to.clone())) {
                    stack.push(e.to.clone());
                }
            }
        }
    }
    out
}
