//! Kernel syntax: canonical terms in head-spine form, types, kinds,
//! signatures and contexts.
//!
//! The same representation serves both the finitary surface calculus
//! (where recursion constants may appear as heads) and the depth-indexed
//! infinitary calculus produced by expansion. A term observed at depth `k`
//! is materialized up to `k` observations; the unobservable remainder is the
//! distinguished [`TermNode::Stub`] leaf.
//!
//! Variables are nominal. Capture is avoided by renaming binders against a
//! [`NameSupply`].

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Deref;

use crate::diag::Span;

/// Observation depth. Always finite; "depth ω" is only ever expressed as
/// "for every finite depth".
pub type Depth = usize;

/// An identifier. Cheap to clone.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(s: &str) -> Self {
        Name(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Twelf convention: identifiers starting with an upper-case letter or
    /// `_` may stand for implicitly quantified variables.
    pub fn is_capitalized(&self) -> bool {
        self.0
            .chars()
            .next()
            .map_or(false, |c| c.is_ascii_uppercase() || c == '_')
    }
}

impl Deref for Name {
    type Target = str;
    fn deref(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name::new(s)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// The namespace a name lives in. Names in distinct namespaces never
/// compare equal, which is why heads carry their namespace as a variant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Namespace {
    TypeFamily,
    Constant,
    RecursionConstant,
    Variable,
}

/// Head of a neutral term.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Head {
    Var(Name),
    Const(Name),
    /// Only in unexpanded (surface) terms.
    Rec(Name),
}

/// How the elements of a spine are observed, determined by the head.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpineKind {
    /// After a variable head: elements observed at the same depth.
    Continuing,
    /// After a constant head: elements observed one depth lower.
    Suspended,
    /// After a recursion constant in a finitary term; split by expansion.
    Surface,
}

impl Head {
    pub fn name(&self) -> &Name {
        match self {
            Head::Var(x) | Head::Const(x) | Head::Rec(x) => x,
        }
    }

    pub fn namespace(&self) -> Namespace {
        match self {
            Head::Var(_) => Namespace::Variable,
            Head::Const(_) => Namespace::Constant,
            Head::Rec(_) => Namespace::RecursionConstant,
        }
    }

    pub fn spine_kind(&self) -> SpineKind {
        match self {
            Head::Var(_) => SpineKind::Continuing,
            Head::Const(_) => SpineKind::Suspended,
            Head::Rec(_) => SpineKind::Surface,
        }
    }

    /// Depth at which the spine elements of a neutral term at depth `k`
    /// are observed.
    pub fn spine_depth(&self, k: Depth) -> Depth {
        match self.spine_kind() {
            SpineKind::Suspended => k.saturating_sub(1),
            SpineKind::Continuing | SpineKind::Surface => k,
        }
    }
}

/// A canonical term. Immutable and shared; cloning is a reference-count bump.
#[derive(Clone)]
pub struct Term(Arc<TermNode>);

#[derive(Debug, PartialEq, Eq)]
pub enum TermNode {
    /// The unobservable term of depth 0.
    Stub,
    Lam(Name, Term),
    /// `h · (M1; ...; Mn)`. β-redexes are not representable.
    App(Head, Vec<Term>),
}

impl Term {
    pub fn stub() -> Term {
        Term(Arc::new(TermNode::Stub))
    }

    pub fn lam(x: Name, body: Term) -> Term {
        Term(Arc::new(TermNode::Lam(x, body)))
    }

    pub fn app(head: Head, spine: Vec<Term>) -> Term {
        Term(Arc::new(TermNode::App(head, spine)))
    }

    pub fn var(x: &str) -> Term {
        Term::app(Head::Var(Name::new(x)), Vec::new())
    }

    pub fn cnst(c: &str, spine: Vec<Term>) -> Term {
        Term::app(Head::Const(Name::new(c)), spine)
    }

    pub fn rec(r: &str, spine: Vec<Term>) -> Term {
        Term::app(Head::Rec(Name::new(r)), spine)
    }

    pub fn node(&self) -> &TermNode {
        &self.0
    }

    pub fn is_stub(&self) -> bool {
        matches!(*self.0, TermNode::Stub)
    }

    pub fn ptr_eq(&self, other: &Term) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Leading lambda binders and the neutral (or stub) body beneath them.
    pub fn strip_lams(&self) -> (Vec<&Name>, &Term) {
        let mut binders = Vec::new();
        let mut t = self;
        while let TermNode::Lam(x, body) = t.node() {
            binders.push(x);
            t = body;
        }
        (binders, t)
    }

    /// True if no recursion constant occurs anywhere in the term.
    pub fn is_expanded(&self) -> bool {
        match self.node() {
            TermNode::Stub => true,
            TermNode::Lam(_, b) => b.is_expanded(),
            TermNode::App(h, s) => !matches!(h, Head::Rec(_)) && s.iter().all(Term::is_expanded),
        }
    }

    /// Number of nodes, stubs included.
    pub fn size(&self) -> usize {
        match self.node() {
            TermNode::Stub => 1,
            TermNode::Lam(_, b) => 1 + b.size(),
            TermNode::App(_, s) => 1 + s.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// Rename free occurrences of variable `from` to `to`. The caller must
    /// pick `to` so that no binder inside the term is named `to`.
    pub fn rename_free(&self, from: &Name, to: &Name) -> Term {
        match self.node() {
            TermNode::Stub => self.clone(),
            TermNode::Lam(y, body) => {
                if y == from {
                    self.clone()
                } else {
                    Term::lam(y.clone(), body.rename_free(from, to))
                }
            }
            TermNode::App(h, spine) => {
                let h = match h {
                    Head::Var(x) if x == from => Head::Var(to.clone()),
                    other => other.clone(),
                };
                Term::app(h, spine.iter().map(|m| m.rename_free(from, to)).collect())
            }
        }
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        self.ptr_eq(other) || self.0 == other.0
    }
}

impl Eq for Term {}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            TermNode::Stub => f.write_str("_"),
            TermNode::Lam(x, b) => write!(f, "λ{}. {:?}", x, b),
            TermNode::App(h, s) => {
                write!(f, "{}·(", h.name())?;
                for (i, m) in s.iter().enumerate() {
                    if i > 0 {
                        f.write_str("; ")?;
                    }
                    write!(f, "{:?}", m)?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Canonical types: `Πx:A. B` or an atomic type `a · S`. Type structure is
/// inductive; only the index terms are depth-indexed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Type {
    Pi(Name, Box<Type>, Box<Type>),
    Atom(Name, Vec<Term>),
}

/// Kinds: `type`, `cotype` or `Πx:A. K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Kind {
    Type,
    Cotype,
    Pi(Name, Box<Type>, Box<Kind>),
}

impl Type {
    pub fn pi(x: &str, dom: Type, cod: Type) -> Type {
        Type::Pi(Name::new(x), Box::new(dom), Box::new(cod))
    }

    pub fn arrow(dom: Type, cod: Type) -> Type {
        Type::pi("_", dom, cod)
    }

    pub fn atom(a: &str, spine: Vec<Term>) -> Type {
        Type::Atom(Name::new(a), spine)
    }

    /// The atomic type at the end of the Pi telescope.
    pub fn target(&self) -> (&Name, &[Term]) {
        match self {
            Type::Pi(_, _, b) => b.target(),
            Type::Atom(a, s) => (a, s),
        }
    }

    pub fn rename_free(&self, from: &Name, to: &Name) -> Type {
        match self {
            Type::Pi(y, a, b) => {
                let a = a.rename_free(from, to);
                let b = if y == from { (**b).clone() } else { b.rename_free(from, to) };
                Type::Pi(y.clone(), Box::new(a), Box::new(b))
            }
            Type::Atom(a, s) => Type::Atom(a.clone(), s.iter().map(|m| m.rename_free(from, to)).collect()),
        }
    }

    pub fn is_expanded(&self) -> bool {
        match self {
            Type::Pi(_, a, b) => a.is_expanded() && b.is_expanded(),
            Type::Atom(_, s) => s.iter().all(Term::is_expanded),
        }
    }
}

impl Kind {
    pub fn pi(x: &str, dom: Type, cod: Kind) -> Kind {
        Kind::Pi(Name::new(x), Box::new(dom), Box::new(cod))
    }

    /// `type` or `cotype` at the end of the telescope.
    pub fn terminal(&self) -> &Kind {
        match self {
            Kind::Pi(_, _, k) => k.terminal(),
            other => other,
        }
    }

    pub fn rename_free(&self, from: &Name, to: &Name) -> Kind {
        match self {
            Kind::Pi(y, a, k) => {
                let a = a.rename_free(from, to);
                let k = if y == from { (**k).clone() } else { k.rename_free(from, to) };
                Kind::Pi(y.clone(), Box::new(a), Box::new(k))
            }
            other => other.clone(),
        }
    }
}

/// Erased simple types `τ ::= * | τ → τ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SimpleType {
    Base,
    Arrow(Box<SimpleType>, Box<SimpleType>),
}

impl SimpleType {
    pub fn arrow(a: SimpleType, b: SimpleType) -> SimpleType {
        SimpleType::Arrow(Box::new(a), Box::new(b))
    }

    /// Nesting depth of arrows on the left, a crude order measure.
    pub fn height(&self) -> usize {
        match self {
            SimpleType::Base => 0,
            SimpleType::Arrow(a, b) => 1 + a.height().max(b.height()),
        }
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleType::Base => f.write_str("*"),
            SimpleType::Arrow(a, b) => match **a {
                SimpleType::Base => write!(f, "* -> {}", b),
                _ => write!(f, "({}) -> {}", a, b),
            },
        }
    }
}

/// Ordered typing context `x1 : A1, ..., xn : An`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Context {
    entries: Vec<(Name, Type)>,
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: Name, ty: Type) {
        self.entries.push((x, ty));
    }

    pub fn pop(&mut self) -> Option<(Name, Type)> {
        self.entries.pop()
    }

    /// Innermost binding wins.
    pub fn lookup(&self, x: &Name) -> Option<&Type> {
        self.entries.iter().rev().find(|(y, _)| y == x).map(|(_, t)| t)
    }

    pub fn contains(&self, x: &Name) -> bool {
        self.entries.iter().any(|(y, _)| y == x)
    }

    pub fn entries(&self) -> &[(Name, Type)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn truncate(&mut self, len: usize) {
        self.entries.truncate(len);
    }
}

impl FromIterator<(Name, Type)> for Context {
    fn from_iter<I: IntoIterator<Item = (Name, Type)>>(iter: I) -> Self {
        Context { entries: iter.into_iter().collect() }
    }
}

/// A signature entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeclBody {
    Family(Kind),
    Const(Type),
    /// `r : A = M`. `M` may mention recursion constants.
    Def(Type, Term),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decl {
    pub name: Name,
    pub body: DeclBody,
    /// Number of leading Pi binders that were inserted by implicit-argument
    /// elaboration. Uses of the name receive this many leading arguments.
    pub implicit: usize,
    pub span: Option<Span>,
}

impl Decl {
    pub fn family(name: &str, kind: Kind) -> Decl {
        Decl { name: Name::new(name), body: DeclBody::Family(kind), implicit: 0, span: None }
    }

    pub fn constant(name: &str, ty: Type) -> Decl {
        Decl { name: Name::new(name), body: DeclBody::Const(ty), implicit: 0, span: None }
    }

    pub fn def(name: &str, ty: Type, body: Term) -> Decl {
        Decl { name: Name::new(name), body: DeclBody::Def(ty, body), implicit: 0, span: None }
    }

    pub fn namespace(&self) -> Namespace {
        match self.body {
            DeclBody::Family(_) => Namespace::TypeFamily,
            DeclBody::Const(_) => Namespace::Constant,
            DeclBody::Def(..) => Namespace::RecursionConstant,
        }
    }

    /// The classifying type of a constant or definition.
    pub fn ty(&self) -> Option<&Type> {
        match &self.body {
            DeclBody::Family(_) => None,
            DeclBody::Const(t) | DeclBody::Def(t, _) => Some(t),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SignatureError {
    Duplicate(Name),
    /// `(declaration, referenced name)`
    Unscoped(Name, Name),
}

impl fmt::Display for SignatureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignatureError::Duplicate(n) => write!(f, "duplicate declaration of `{}`", n),
            SignatureError::Unscoped(d, n) => {
                write!(f, "declaration `{}` refers to `{}` which is not declared before it", d, n)
            }
        }
    }
}

/// An ordered list of declarations with unique names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    decls: Vec<Decl>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a declaration, checking name uniqueness and that every name
    /// it mentions is already declared (a definition may mention itself).
    pub fn push(&mut self, decl: Decl) -> Result<(), SignatureError> {
        if self.get(&decl.name).is_some() {
            return Err(SignatureError::Duplicate(decl.name.clone()));
        }
        let mut refs = BTreeSet::new();
        decl_refs(&decl, &mut refs);
        for (ns, n) in refs {
            let ok = match self.get(&n) {
                Some(d) => d.namespace() == ns,
                None => ns == Namespace::RecursionConstant && n == decl.name,
            };
            if !ok {
                return Err(SignatureError::Unscoped(decl.name.clone(), n));
            }
        }
        self.decls.push(decl);
        Ok(())
    }

    pub fn from_decls(decls: impl IntoIterator<Item = Decl>) -> Result<Self, SignatureError> {
        let mut sig = Signature::new();
        for d in decls {
            sig.push(d)?;
        }
        Ok(sig)
    }

    pub fn decls(&self) -> &[Decl] {
        &self.decls
    }

    pub fn get(&self, name: &Name) -> Option<&Decl> {
        self.decls.iter().find(|d| &d.name == name)
    }

    pub fn get_str(&self, name: &str) -> Option<&Decl> {
        self.decls.iter().find(|d| d.name.as_str() == name)
    }

    pub fn family_kind(&self, a: &Name) -> Option<&Kind> {
        match self.get(a).map(|d| &d.body) {
            Some(DeclBody::Family(k)) => Some(k),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.decls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }
}

fn decl_refs(decl: &Decl, out: &mut BTreeSet<(Namespace, Name)>) {
    match &decl.body {
        DeclBody::Family(k) => kind_refs(k, out),
        DeclBody::Const(a) => type_refs(a, out),
        DeclBody::Def(a, m) => {
            type_refs(a, out);
            term_refs(m, out);
        }
    }
}

fn kind_refs(k: &Kind, out: &mut BTreeSet<(Namespace, Name)>) {
    if let Kind::Pi(_, a, k) = k {
        type_refs(a, out);
        kind_refs(k, out);
    }
}

fn type_refs(a: &Type, out: &mut BTreeSet<(Namespace, Name)>) {
    match a {
        Type::Pi(_, a, b) => {
            type_refs(a, out);
            type_refs(b, out);
        }
        Type::Atom(f, s) => {
            out.insert((Namespace::TypeFamily, f.clone()));
            s.iter().for_each(|m| term_refs(m, out));
        }
    }
}

fn term_refs(m: &Term, out: &mut BTreeSet<(Namespace, Name)>) {
    match m.node() {
        TermNode::Stub => {}
        TermNode::Lam(_, b) => term_refs(b, out),
        TermNode::App(h, s) => {
            if !matches!(h, Head::Var(_)) {
                out.insert((h.namespace(), h.name().clone()));
            }
            s.iter().for_each(|m| term_refs(m, out));
        }
    }
}

/// Error for [`truncate`] when asked to raise a term's depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthIncrease {
    pub from: Depth,
    pub to: Depth,
}

impl fmt::Display for DepthIncrease {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot view a depth-{} term at greater depth {}", self.from, self.to)
    }
}

/// View a term of depth `from` at the lesser depth `to`.
pub fn truncate(term: &Term, from: Depth, to: Depth) -> Result<Term, DepthIncrease> {
    if to > from {
        return Err(DepthIncrease { from, to });
    }
    if to == from {
        return Ok(term.clone());
    }
    Ok(truncate_to(term, to))
}

/// Cut a term after `k` observations: constant-headed spines cost one
/// observation, lambdas and variable-headed spines cost none.
pub fn truncate_to(term: &Term, k: Depth) -> Term {
    if k == 0 {
        return Term::stub();
    }
    match term.node() {
        TermNode::Stub => term.clone(),
        TermNode::Lam(x, b) => Term::lam(x.clone(), truncate_to(b, k)),
        TermNode::App(h, s) => {
            let k2 = h.spine_depth(k);
            Term::app(h.clone(), s.iter().map(|m| truncate_to(m, k2)).collect())
        }
    }
}

/// True when the term can be observed `k` times without reaching a stub,
/// i.e. it is a well-formed term of depth at least `k`.
pub fn observable_to(term: &Term, k: Depth) -> bool {
    if k == 0 {
        return true;
    }
    match term.node() {
        TermNode::Stub => false,
        TermNode::Lam(_, b) => observable_to(b, k),
        TermNode::App(h, s) => {
            let k2 = h.spine_depth(k);
            s.iter().all(|m| observable_to(m, k2))
        }
    }
}

/// Exact free variables (constants and recursion constants excluded).
pub fn free_vars(term: &Term) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    let mut bound = Vec::new();
    fv_term(term, &mut bound, &mut out);
    out
}

pub fn free_vars_type(ty: &Type) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    let mut bound = Vec::new();
    fv_type(ty, &mut bound, &mut out);
    out
}

fn fv_term(term: &Term, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
    match term.node() {
        TermNode::Stub => {}
        TermNode::Lam(x, b) => {
            bound.push(x.clone());
            fv_term(b, bound, out);
            bound.pop();
        }
        TermNode::App(h, s) => {
            if let Head::Var(x) = h {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            s.iter().for_each(|m| fv_term(m, bound, out));
        }
    }
}

fn fv_type(ty: &Type, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
    match ty {
        Type::Pi(x, a, b) => {
            fv_type(a, bound, out);
            bound.push(x.clone());
            fv_type(b, bound, out);
            bound.pop();
        }
        Type::Atom(_, s) => s.iter().for_each(|m| fv_term(m, bound, out)),
    }
}

pub(crate) fn fv_kind(k: &Kind, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
    if let Kind::Pi(x, a, k) = k {
        fv_type(a, bound, out);
        bound.push(x.clone());
        fv_kind(k, bound, out);
        bound.pop();
    }
}

/// Every variable name occurring in the term, bound or free.
pub fn all_var_names(term: &Term, out: &mut BTreeSet<Name>) {
    match term.node() {
        TermNode::Stub => {}
        TermNode::Lam(x, b) => {
            out.insert(x.clone());
            all_var_names(b, out);
        }
        TermNode::App(h, s) => {
            if let Head::Var(x) = h {
                out.insert(x.clone());
            }
            s.iter().for_each(|m| all_var_names(m, out));
        }
    }
}

pub fn all_var_names_type(ty: &Type, out: &mut BTreeSet<Name>) {
    match ty {
        Type::Pi(x, a, b) => {
            out.insert(x.clone());
            all_var_names_type(a, out);
            all_var_names_type(b, out);
        }
        Type::Atom(_, s) => s.iter().for_each(|m| all_var_names(m, out)),
    }
}

pub fn all_var_names_kind(k: &Kind, out: &mut BTreeSet<Name>) {
    if let Kind::Pi(x, a, k) = k {
        out.insert(x.clone());
        all_var_names_type(a, out);
        all_var_names_kind(k, out);
    }
}

/// Supplies variable names that avoid a growing set.
#[derive(Clone, Debug, Default)]
pub struct NameSupply {
    avoid: BTreeSet<Name>,
    counter: usize,
}

impl NameSupply {
    pub fn new(avoid: BTreeSet<Name>) -> Self {
        NameSupply { avoid, counter: 0 }
    }

    pub fn avoid(&mut self, name: Name) {
        self.avoid.insert(name);
    }

    pub fn is_avoided(&self, name: &Name) -> bool {
        self.avoid.contains(name)
    }

    /// A name of the form `<base><n>` not yet avoided; it is avoided from
    /// now on. Trailing digits and primes of `base` are dropped first.
    pub fn fresh(&mut self, base: &str) -> Name {
        let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
        let stem = if stem.is_empty() || stem == "_" { "x" } else { stem };
        loop {
            let candidate = Name::new(&format!("{}{}", stem, self.counter));
            self.counter += 1;
            if !self.avoid.contains(&candidate) {
                self.avoid.insert(candidate.clone());
                return candidate;
            }
        }
    }
}

/// Fresh name avoiding `avoid`, without a persistent supply.
pub fn fresh_avoiding(base: &str, avoid: &BTreeSet<Name>) -> Name {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() || stem == "_" { "x" } else { stem };
    let mut n = 0usize;
    loop {
        let candidate = Name::new(&format!("{}{}", stem, n));
        if !avoid.contains(&candidate) {
            return candidate;
        }
        n += 1;
    }
}

/// Rename every binder so that all bound variables are distinct from each
/// other and from the supply's avoid set. The result is alpha-equivalent.
pub fn alpha_rename(term: &Term, supply: &mut NameSupply) -> Term {
    let mut env: Vec<(Name, Name)> = Vec::new();
    rename_rec(term, supply, &mut env)
}

fn rename_rec(term: &Term, supply: &mut NameSupply, env: &mut Vec<(Name, Name)>) -> Term {
    match term.node() {
        TermNode::Stub => term.clone(),
        TermNode::Lam(x, b) => {
            let x2 = supply.fresh(x);
            env.push((x.clone(), x2.clone()));
            let b2 = rename_rec(b, supply, env);
            env.pop();
            Term::lam(x2, b2)
        }
        TermNode::App(h, s) => {
            let h2 = match h {
                Head::Var(x) => match env.iter().rev().find(|(y, _)| y == x) {
                    Some((_, y2)) => Head::Var(y2.clone()),
                    None => h.clone(),
                },
                other => other.clone(),
            };
            Term::app(h2, s.iter().map(|m| rename_rec(m, supply, env)).collect())
        }
    }
}

/// Display helper used in diagnostics: `name@depth`.
pub(crate) fn judgment_label(name: &str, k: Depth) -> String {
    format!("{}@{}", name, k)
}
