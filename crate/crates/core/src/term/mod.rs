//! Terms of the theory of modal μ-algebras.
//!
//! A [`Term`] is an immutable syntax tree. Identifiers come in two kinds:
//! generators (free constants of the algebra) and variables (bound by a
//! fixed-point binder, or declared as the unknowns/parameters of an equation
//! system). The parser resolves every identifier that is not bound by an
//! enclosing `mu`/`nu` to a generator.

mod classify;
mod closure;
mod cnf;
mod guard;
mod nnf;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use classify::{classify, Fragment};
pub use closure::fl_closure;
pub use cnf::{clauses_to_term, modal_cnf, Clause, Literal};
pub(crate) use guard::{expose, replace_unguarded};
pub use guard::{guard, is_guarded, unguarded_vars};
pub use nnf::nnf;

use thiserror::Error;

/// Identifier of a generator, a variable or an action.
pub type Name = String;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TermError {
    #[error("expected a fixed-point term, found `{0}`")]
    NotAFixpoint(String),
    #[error("guarding left unguarded occurrences in `{0}`")]
    GuardingFailed(String),
    #[error("variables of special conjunction blocks overlap on `{0}`")]
    OverlappingBlocks(Name),
    #[error("`{0}` is not a literal")]
    NotALiteral(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Gen(Name),
    Var(Name),
    Top,
    Bot,
    And(Box<Term>, Box<Term>),
    Or(Box<Term>, Box<Term>),
    Not(Box<Term>),
    Dia(Name, Box<Term>),
    Nec(Name, Box<Term>),
    Mu(Name, Box<Term>),
    Nu(Name, Box<Term>),
    /// Arrow term `→σ{t₁,…,tₙ}`, i.e. `□σ(t₁ ∨ … ∨ tₙ) ∧ ◊σt₁ ∧ … ∧ ◊σtₙ`.
    Arrow(Name, Vec<Term>),
}

impl Term {
    pub fn gen(name: impl Into<Name>) -> Term {
        Term::Gen(name.into())
    }

    pub fn var(name: impl Into<Name>) -> Term {
        Term::Var(name.into())
    }

    pub fn and(l: Term, r: Term) -> Term {
        Term::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Term, r: Term) -> Term {
        Term::Or(Box::new(l), Box::new(r))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(t: Term) -> Term {
        Term::Not(Box::new(t))
    }

    pub fn dia(action: impl Into<Name>, t: Term) -> Term {
        Term::Dia(action.into(), Box::new(t))
    }

    pub fn nec(action: impl Into<Name>, t: Term) -> Term {
        Term::Nec(action.into(), Box::new(t))
    }

    pub fn mu(var: impl Into<Name>, body: Term) -> Term {
        Term::Mu(var.into(), Box::new(body))
    }

    pub fn nu(var: impl Into<Name>, body: Term) -> Term {
        Term::Nu(var.into(), Box::new(body))
    }

    pub fn arrow_node(action: impl Into<Name>, items: Vec<Term>) -> Term {
        Term::Arrow(action.into(), items)
    }

    /// Left-nested conjunction; the empty conjunction is `⊤`.
    pub fn big_and(items: impl IntoIterator<Item = Term>) -> Term {
        items.into_iter().reduce(Term::and).unwrap_or(Term::Top)
    }

    /// Left-nested disjunction; the empty disjunction is `⊥`.
    pub fn big_or(items: impl IntoIterator<Item = Term>) -> Term {
        items.into_iter().reduce(Term::or).unwrap_or(Term::Bot)
    }

    pub fn is_fixpoint(&self) -> bool {
        matches!(self, Term::Mu(..) | Term::Nu(..))
    }

    /// Immediate subterms, left to right.
    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Gen(_) | Term::Var(_) | Term::Top | Term::Bot => vec![],
            Term::And(l, r) | Term::Or(l, r) => vec![l, r],
            Term::Not(t) | Term::Dia(_, t) | Term::Nec(_, t) | Term::Mu(_, t) | Term::Nu(_, t) => {
                vec![t]
            }
            Term::Arrow(_, items) => items.iter().collect(),
        }
    }

    /// Rebuilds this node with every immediate subterm mapped through `f`.
    pub fn map_children(&self, mut f: impl FnMut(&Term) -> Term) -> Term {
        match self {
            Term::Gen(_) | Term::Var(_) | Term::Top | Term::Bot => self.clone(),
            Term::And(l, r) => Term::and(f(l), f(r)),
            Term::Or(l, r) => Term::or(f(l), f(r)),
            Term::Not(t) => Term::not(f(t)),
            Term::Dia(a, t) => Term::dia(a.clone(), f(t)),
            Term::Nec(a, t) => Term::nec(a.clone(), f(t)),
            Term::Mu(x, t) => Term::mu(x.clone(), f(t)),
            Term::Nu(x, t) => Term::nu(x.clone(), f(t)),
            Term::Arrow(a, items) => Term::Arrow(a.clone(), items.iter().map(f).collect()),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Term::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self
            .children()
            .into_iter()
            .map(Term::depth)
            .max()
            .unwrap_or(0)
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        match self {
            Term::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Term::Mu(x, body) | Term::Nu(x, body) => {
                bound.push(x.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            _ => {
                for c in self.children() {
                    c.collect_free(bound, out);
                }
            }
        }
    }

    pub fn occurs_free(&self, x: &str) -> bool {
        match self {
            Term::Var(y) => y == x,
            Term::Mu(y, body) | Term::Nu(y, body) => y != x && body.occurs_free(x),
            _ => self.children().into_iter().any(|c| c.occurs_free(x)),
        }
    }

    pub fn generators(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| {
            if let Term::Gen(p) = t {
                out.insert(p.clone());
            }
        });
        out
    }

    pub fn actions(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| match t {
            Term::Dia(a, _) | Term::Nec(a, _) | Term::Arrow(a, _) => {
                out.insert(a.clone());
            }
            _ => {}
        });
        out
    }

    /// Every identifier mentioned anywhere (generators, variables, binders).
    pub fn names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| match t {
            Term::Gen(n) | Term::Var(n) | Term::Mu(n, _) | Term::Nu(n, _) => {
                out.insert(n.clone());
            }
            _ => {}
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit(&self, f: &mut impl FnMut(&Term)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    /// Capture-avoiding simultaneous substitution of free variables.
    pub fn substitute(&self, binding: &BTreeMap<Name, Term>) -> Term {
        if binding.is_empty() {
            return self.clone();
        }
        match self {
            Term::Var(x) => binding.get(x).cloned().unwrap_or_else(|| self.clone()),
            Term::Mu(x, body) | Term::Nu(x, body) => {
                let mut inner: BTreeMap<Name, Term> = binding
                    .iter()
                    .filter(|(k, _)| *k != x && body.occurs_free(k))
                    .map(|(k, v)| (k.clone(), v.clone()))
                    .collect();
                if inner.is_empty() {
                    return self.clone();
                }
                let captured = inner.values().any(|v| v.occurs_free(x));
                let (binder, body) = if captured {
                    let mut avoid = body.names();
                    for (k, v) in &inner {
                        avoid.insert(k.clone());
                        avoid.extend(v.free_vars());
                    }
                    let fresh = fresh_name(x, &avoid);
                    let renamed =
                        body.substitute(&BTreeMap::from([(x.clone(), Term::Var(fresh.clone()))]));
                    (fresh, renamed)
                } else {
                    (x.clone(), (**body).clone())
                };
                inner.remove(&binder);
                let body = body.substitute(&inner);
                match self {
                    Term::Mu(..) => Term::mu(binder, body),
                    _ => Term::nu(binder, body),
                }
            }
            _ => self.map_children(|c| c.substitute(binding)),
        }
    }

    /// Substitutes a single variable.
    pub fn subst1(&self, x: &str, t: &Term) -> Term {
        self.substitute(&BTreeMap::from([(x.to_string(), t.clone())]))
    }

    /// Renames generators to terms (used to route generators through variables).
    pub fn replace_gens(&self, map: &BTreeMap<Name, Term>) -> Term {
        match self {
            Term::Gen(p) => map.get(p).cloned().unwrap_or_else(|| self.clone()),
            _ => self.map_children(|c| c.replace_gens(map)),
        }
    }

    /// Turns generators with the given names into variables.
    pub fn gens_to_vars(&self, names: &BTreeSet<Name>) -> Term {
        match self {
            Term::Gen(p) if names.contains(p) => Term::Var(p.clone()),
            _ => self.map_children(|c| c.gens_to_vars(names)),
        }
    }

    /// Unfolds a fixed point once: `μx.s ↦ s[μx.s/x]`.
    pub fn unfold(&self) -> Result<Term, TermError> {
        match self {
            Term::Mu(x, body) | Term::Nu(x, body) => Ok(body.subst1(x, self)),
            _ => Err(TermError::NotAFixpoint(self.to_string())),
        }
    }

    /// Representative of the alpha-equivalence class: binders renamed to
    /// `#k` where `k` is the binding depth.
    pub fn canonical(&self) -> Term {
        fn go(t: &Term, scope: &mut Vec<(Name, Name)>) -> Term {
            match t {
                Term::Var(x) => match scope.iter().rev().find(|(orig, _)| orig == x) {
                    Some((_, new)) => Term::Var(new.clone()),
                    None => t.clone(),
                },
                Term::Mu(x, body) | Term::Nu(x, body) => {
                    let new = format!("#{}", scope.len());
                    scope.push((x.clone(), new.clone()));
                    let b = go(body, scope);
                    scope.pop();
                    if matches!(t, Term::Mu(..)) {
                        Term::mu(new, b)
                    } else {
                        Term::nu(new, b)
                    }
                }
                _ => t.map_children(|c| go(c, scope)),
            }
        }
        go(self, &mut Vec::new())
    }

    pub fn alpha_eq(&self, other: &Term) -> bool {
        self.canonical() == other.canonical()
    }

    /// Constant folding of lattice units and vacuous binders.
    pub fn simplify(&self) -> Term {
        let t = self.map_children(Term::simplify);
        match t {
            Term::And(l, r) => match (*l, *r) {
                (Term::Bot, _) | (_, Term::Bot) => Term::Bot,
                (Term::Top, x) | (x, Term::Top) => x,
                (l, r) => Term::and(l, r),
            },
            Term::Or(l, r) => match (*l, *r) {
                (Term::Top, _) | (_, Term::Top) => Term::Top,
                (Term::Bot, x) | (x, Term::Bot) => x,
                (l, r) => Term::or(l, r),
            },
            Term::Not(b) => match *b {
                Term::Top => Term::Bot,
                Term::Bot => Term::Top,
                Term::Not(inner) => *inner,
                b => Term::not(b),
            },
            Term::Dia(_, ref b) if **b == Term::Bot => Term::Bot,
            Term::Nec(_, ref b) if **b == Term::Top => Term::Top,
            Term::Mu(ref x, ref b) | Term::Nu(ref x, ref b) if !b.occurs_free(x) => (**b).clone(),
            other => other,
        }
    }

    /// Associative-commutative normal form: nested `∧`/`∨` flattened, sorted
    /// by canonical form and deduplicated, units removed. Used as vertex
    /// identity for cover graphs; semantically equal to the input.
    pub fn normalize(&self) -> Term {
        fn flatten(t: Term, conj: bool, out: &mut Vec<Term>) {
            match t {
                Term::And(l, r) if conj => {
                    flatten(*l, conj, out);
                    flatten(*r, conj, out);
                }
                Term::Or(l, r) if !conj => {
                    flatten(*l, conj, out);
                    flatten(*r, conj, out);
                }
                other => out.push(other),
            }
        }
        let t = self.simplify().map_children(Term::normalize).simplify();
        match t {
            Term::And(..) | Term::Or(..) => {
                let conj = matches!(t, Term::And(..));
                let (unit, absorb) = if conj {
                    (Term::Top, Term::Bot)
                } else {
                    (Term::Bot, Term::Top)
                };
                let mut parts = Vec::new();
                flatten(t, conj, &mut parts);
                if parts.contains(&absorb) {
                    return absorb;
                }
                let mut keyed: BTreeMap<Term, Term> = BTreeMap::new();
                for p in parts.into_iter().filter(|p| *p != unit) {
                    keyed.entry(p.canonical()).or_insert(p);
                }
                let items = keyed.into_values();
                if conj {
                    Term::big_and(items)
                } else {
                    Term::big_or(items)
                }
            }
            Term::Arrow(a, items) => {
                let mut keyed: BTreeMap<Term, Term> = BTreeMap::new();
                for p in items {
                    keyed.entry(p.canonical()).or_insert(p);
                }
                Term::Arrow(a, keyed.into_values().collect())
            }
            other => other,
        }
    }

    /// Rewrites every arrow node into its defining `□`/`◊` form.
    pub fn expand_arrows(&self) -> Term {
        match self {
            Term::Arrow(a, items) => {
                let items: Vec<Term> = items.iter().map(Term::expand_arrows).collect();
                arrow(a, &items)
            }
            _ => self.map_children(Term::expand_arrows),
        }
    }
}

/// Chooses `base_k` (smallest `k ≥ 1`) not in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<Name>) -> Name {
    (1..)
        .map(|k| format!("{base}_{k}"))
        .find(|n| !avoid.contains(n))
        .expect("unbounded search")
}

/// The arrow term `□σ⋁X ∧ ⋀_{x∈X} ◊σx`, expanded. `arrow(σ, {})` is `□σ⊥`.
pub fn arrow(action: &str, items: &[Term]) -> Term {
    let nec = Term::nec(action, Term::big_or(items.iter().cloned()));
    Term::big_and(std::iter::once(nec).chain(items.iter().map(|x| Term::dia(action, x.clone()))))
}

/// Data of a special conjunction `⋀Λ ∧ ⋀_{σ∈Σ} →σXσ`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpconSpec {
    pub literals: BTreeSet<Literal>,
    /// Per-action variable blocks, pairwise disjoint.
    pub blocks: BTreeMap<Name, Vec<Name>>,
}

impl SpconSpec {
    pub fn new(
        literals: impl IntoIterator<Item = Literal>,
        blocks: impl IntoIterator<Item = (Name, Vec<Name>)>,
    ) -> Result<SpconSpec, TermError> {
        let blocks: BTreeMap<Name, Vec<Name>> = blocks.into_iter().collect();
        let mut seen = BTreeSet::new();
        for vars in blocks.values() {
            for v in vars {
                if !seen.insert(v.clone()) {
                    return Err(TermError::OverlappingBlocks(v.clone()));
                }
            }
        }
        Ok(SpconSpec {
            literals: literals.into_iter().collect(),
            blocks,
        })
    }

    /// Coordinates in declared order: actions in order, then block order.
    pub fn coordinates(&self) -> Vec<Name> {
        self.blocks.values().flatten().cloned().collect()
    }

    /// Block (action) owning a coordinate.
    pub fn action_of(&self, coordinate: &str) -> Option<&Name> {
        self.blocks
            .iter()
            .find(|(_, vars)| vars.iter().any(|v| v == coordinate))
            .map(|(a, _)| a)
    }

    pub fn to_term(&self) -> Term {
        spcon(self)
    }

    /// Instantiates the coordinates with the given terms.
    pub fn apply(&self, args: &[Term]) -> Term {
        let coords = self.coordinates();
        let binding: BTreeMap<Name, Term> = coords.into_iter().zip(args.iter().cloned()).collect();
        self.to_term().substitute(&binding)
    }
}

/// Expanded special conjunction term.
pub fn spcon(spec: &SpconSpec) -> Term {
    let lits = spec.literals.iter().map(Literal::to_term);
    let arrows = spec.blocks.iter().flat_map(|(a, vars)| {
        let items: Vec<Term> = vars.iter().map(|v| Term::var(v.clone())).collect();
        let nec = Term::nec(a.clone(), Term::big_or(items.clone()));
        std::iter::once(nec).chain(items.into_iter().map(move |x| Term::dia(a.clone(), x)))
    });
    Term::big_and(lits.chain(arrows))
}

/// A finite set of terms with identity modulo bound-variable renaming.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TermSet {
    members: BTreeMap<Term, Term>,
}

impl TermSet {
    pub fn new() -> TermSet {
        TermSet::default()
    }

    /// Inserts `t`; returns false when an alpha-equivalent member exists.
    pub fn insert(&mut self, t: Term) -> bool {
        let key = t.canonical();
        if let std::collections::btree_map::Entry::Vacant(e) = self.members.entry(key) {
            e.insert(t);
            true
        } else {
            false
        }
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.members.contains_key(&t.canonical())
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Representatives in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = &Term> {
        self.members.values()
    }
}

impl FromIterator<Term> for TermSet {
    fn from_iter<I: IntoIterator<Item = Term>>(iter: I) -> Self {
        let mut s = TermSet::new();
        for t in iter {
            s.insert(t);
        }
        s
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_term(self))
    }
}
