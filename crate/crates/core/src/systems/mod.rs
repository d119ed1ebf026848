//! Systems of equations `x = Fₓ(X, Y)`: classification, solving and the
//! rewrites that move a system into the disjunctive-simple class.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::kripke::{eval, ApproximantTrace, Env, KripkeError, KripkeModel, StateSet};
use crate::lattice::FinLattice;
use crate::term::{unguarded_vars, Name, Term};

mod compile;
mod guard;
mod harness;
mod powerset;
mod unravel;

pub use compile::{compile_sigma1, generator_env};
pub use guard::{guard_system, GuardStep, GuardStepKind};
pub use harness::{
    cofinal_check, regular_harness, sandwich_check, HarnessVerdicts, RegularHarnessTrace,
};
pub use powerset::{powerset_translate, PowersetTranslation};
pub use unravel::unravel_to_simple;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SystemError {
    #[error("equations do not match the bound variables")]
    DomainMismatch,
    #[error("`{0}` is declared both bound and free")]
    Overlap(Name),
    #[error("bound variable `{0}` occurs under odd negations in `{1}`")]
    NotPositive(Name, Name),
    #[error("system is not simple: equation for `{0}`")]
    NotSimple(Name),
    #[error("term is not in the sigma1 fragment")]
    NotSigma1,
    #[error("greatest fixed point over bound variables cannot be unravelled: `{0}`")]
    GreatestFixpoint(String),
    #[error("{0} did not terminate within {1} rounds")]
    NoProgress(&'static str, usize),
    #[error(transparent)]
    Eval(#[from] KripkeError),
}

/// Values of bound (or free) variables.
pub type Assignment = BTreeMap<Name, StateSet>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct System {
    pub bound: Vec<Name>,
    pub free: Vec<Name>,
    pub equations: BTreeMap<Name, Term>,
}

impl System {
    pub fn new(
        bound: Vec<Name>,
        free: Vec<Name>,
        equations: BTreeMap<Name, Term>,
    ) -> Result<System, SystemError> {
        let keys: BTreeSet<&Name> = equations.keys().collect();
        let declared: BTreeSet<&Name> = bound.iter().collect();
        if keys != declared || declared.len() != bound.len() {
            return Err(SystemError::DomainMismatch);
        }
        if let Some(y) = free.iter().find(|y| declared.contains(y)) {
            return Err(SystemError::Overlap(y.clone()));
        }
        for (x, rhs) in &equations {
            for v in &bound {
                if !positive_in(rhs, v, false) {
                    return Err(SystemError::NotPositive(v.clone(), x.clone()));
                }
            }
        }
        Ok(System {
            bound,
            free,
            equations,
        })
    }

    /// Single-equation system with no free variables.
    pub fn single(x: &str, rhs: Term) -> System {
        let free = rhs.free_vars().into_iter().filter(|v| v != x).collect();
        System {
            bound: vec![x.to_string()],
            free,
            equations: BTreeMap::from([(x.to_string(), rhs)]),
        }
    }

    pub fn rhs(&self, x: &str) -> &Term {
        &self.equations[x]
    }

    pub fn bound_set(&self) -> BTreeSet<Name> {
        self.bound.iter().cloned().collect()
    }

    /// One application of the system map.
    pub fn step(
        &self,
        m: &KripkeModel,
        env: &Env,
        cur: &Assignment,
    ) -> Result<Assignment, KripkeError> {
        let mut local = env.clone();
        local.extend(cur.iter().map(|(k, v)| (k.clone(), *v)));
        self.bound
            .iter()
            .map(|x| Ok((x.clone(), eval(m, &self.equations[x], &local)?)))
            .collect()
    }

    pub fn bottom(&self) -> Assignment {
        self.bound
            .iter()
            .map(|x| (x.clone(), StateSet::EMPTY))
            .collect()
    }

    /// `Fᵏ(⊥)` for `k = 0..=n`.
    pub fn approximants(
        &self,
        m: &KripkeModel,
        env: &Env,
        n: usize,
    ) -> Result<Vec<Assignment>, KripkeError> {
        let mut out = vec![self.bottom()];
        for _ in 0..n {
            let next = self.step(m, env, out.last().expect("nonempty"))?;
            out.push(next);
        }
        Ok(out)
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::formats::print_system(self))
    }
}

fn positive_in(t: &Term, x: &str, negated: bool) -> bool {
    match t {
        Term::Var(y) => y != x || !negated,
        Term::Not(b) => positive_in(b, x, !negated),
        Term::Mu(y, _) | Term::Nu(y, _) if y == x => true,
        _ => t.children().into_iter().all(|c| positive_in(c, x, negated)),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SystemClass {
    pub elementary: bool,
    pub simple: bool,
    pub disjunctive_simple: bool,
    pub guarded: bool,
}

impl fmt::Display for SystemClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let flags = [
            ("elementary", self.elementary),
            ("simple", self.simple),
            ("disjunctive_simple", self.disjunctive_simple),
            ("guarded", self.guarded),
        ];
        let on: Vec<&str> = flags.iter().filter(|(_, b)| *b).map(|(n, _)| *n).collect();
        if on.is_empty() {
            f.write_str("none")
        } else {
            f.write_str(&on.join(" "))
        }
    }
}

pub fn classify_system(s: &System) -> SystemClass {
    let xs = s.bound_set();
    let all = |p: &dyn Fn(&Term) -> bool| s.equations.values().all(p);
    SystemClass {
        elementary: all(&is_elementary),
        simple: all(&|t| is_simple(t, &xs)),
        disjunctive_simple: all(&|t| is_disjunctive_simple(t, &xs)),
        guarded: all(&|t| unguarded_vars(t).is_disjoint(&xs)),
    }
}

pub(crate) fn is_x_free(t: &Term, xs: &BTreeSet<Name>) -> bool {
    t.free_vars().is_disjoint(xs)
}

pub(crate) fn is_elementary(t: &Term) -> bool {
    let var = |t: &Term| matches!(t, Term::Var(_));
    match t {
        Term::Var(_) | Term::Top | Term::Bot => true,
        Term::And(l, r) | Term::Or(l, r) => var(l) && var(r),
        Term::Arrow(_, items) => items.iter().all(var),
        _ => false,
    }
}

/// Lattice term over bound variables, `⊤` and `⊥`.
pub(crate) fn is_lattice_over(t: &Term, xs: &BTreeSet<Name>) -> bool {
    match t {
        Term::Var(x) => xs.contains(x),
        Term::Top | Term::Bot => true,
        Term::And(l, r) | Term::Or(l, r) => is_lattice_over(l, xs) && is_lattice_over(r, xs),
        _ => false,
    }
}

/// Lattice combination of parameters (subterms without bound variables)
/// and arrows whose items are lattice terms over the bound variables.
pub(crate) fn is_simple(t: &Term, xs: &BTreeSet<Name>) -> bool {
    match t {
        Term::And(l, r) | Term::Or(l, r) if !is_x_free(t, xs) => {
            is_simple(l, xs) && is_simple(r, xs)
        }
        Term::Arrow(_, items) if items.iter().all(|d| is_lattice_over(d, xs)) => true,
        _ => is_x_free(t, xs),
    }
}

/// Join of blocks; a block is a meet of parameters and at most one arrow per
/// action whose items are joins of bound variables (or `⊤`).
pub(crate) fn is_disjunctive_simple(t: &Term, xs: &BTreeSet<Name>) -> bool {
    fn join_of_vars(t: &Term, xs: &BTreeSet<Name>) -> bool {
        match t {
            Term::Var(x) => xs.contains(x),
            Term::Top | Term::Bot => true,
            Term::Or(l, r) => join_of_vars(l, xs) && join_of_vars(r, xs),
            _ => false,
        }
    }
    fn block(t: &Term, xs: &BTreeSet<Name>, seen: &mut BTreeSet<Name>) -> bool {
        if is_x_free(t, xs) {
            return true;
        }
        match t {
            Term::And(l, r) => block(l, xs, seen) && block(r, xs, seen),
            Term::Arrow(a, items) => {
                seen.insert(a.clone()) && items.iter().all(|d| join_of_vars(d, xs))
            }
            _ => false,
        }
    }
    match t {
        Term::Or(l, r) => is_disjunctive_simple(l, xs) && is_disjunctive_simple(r, xs),
        _ => block(t, xs, &mut BTreeSet::new()),
    }
}

/// Joint iteration of the whole vector map from `⊥`.
pub fn simultaneous_solve(
    s: &System,
    m: &KripkeModel,
    env: &Env,
) -> Result<(Assignment, ApproximantTrace<Assignment>), SystemError> {
    let trace = ApproximantTrace::iterate(s.bottom(), |cur| s.step(m, env, cur))?;
    Ok((trace.limit().clone(), trace))
}

/// Eliminates bound variables one at a time, last first: `xₖ` becomes
/// `μxₖ.Fₖ` and is substituted into the remaining equations. The closed
/// first coordinate is then evaluated and its value propagated forward.
pub fn bekic_solve(s: &System, m: &KripkeModel, env: &Env) -> Result<Assignment, SystemError> {
    let closed = bekic_terms(s);
    let mut local = env.clone();
    let mut out = Assignment::new();
    for x in &s.bound {
        let v = eval(m, &closed[x], &local)?;
        local.insert(x.clone(), v);
        out.insert(x.clone(), v);
    }
    Ok(out)
}

/// Per-variable terms after elimination; the term for `xₖ` mentions only
/// `x₁ … xₖ₋₁` among the bound variables.
pub fn bekic_terms(s: &System) -> BTreeMap<Name, Term> {
    let mut eqs = s.equations.clone();
    for (k, x) in s.bound.iter().enumerate().rev() {
        let fixed = if eqs[x].occurs_free(x) {
            Term::mu(x.clone(), eqs[x].clone())
        } else {
            eqs[x].clone()
        };
        for y in &s.bound[..k] {
            let t = eqs[y].subst1(x, &fixed);
            eqs.insert(y.clone(), t);
        }
        eqs.insert(x.clone(), fixed);
    }
    eqs
}

/// Joint least fixed point of `(x, y) ↦ (f(x,y), g(x,y))` on a finite
/// lattice, by iteration from `(⊥, ⊥)`.
pub fn lattice_simultaneous(
    l: &FinLattice,
    f: impl Fn(usize, usize) -> usize,
    g: impl Fn(usize, usize) -> usize,
) -> (usize, usize) {
    let mut cur = (l.bot, l.bot);
    loop {
        let next = (f(cur.0, cur.1), g(cur.0, cur.1));
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// The same fixed point by elimination: `x* = μx.f(x, μy.g(x,y))`,
/// `y* = μy.g(x*, y)`.
pub fn lattice_bekic(
    l: &FinLattice,
    f: impl Fn(usize, usize) -> usize,
    g: impl Fn(usize, usize) -> usize,
) -> (usize, usize) {
    let lfp = |h: &dyn Fn(usize) -> usize| {
        let mut c = l.bot;
        loop {
            let n = h(c);
            if n == c {
                return c;
            }
            c = n;
        }
    };
    let inner = |x: usize| lfp(&|y| g(x, y));
    let x = lfp(&|x| f(x, inner(x)));
    (x, inner(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::example_m1;
    use crate::syntax::parse_term_with_vars;

    pub(crate) fn sys(eqs: &[(&str, &str)], free: &[&str]) -> System {
        let vars: BTreeSet<Name> = eqs
            .iter()
            .map(|(x, _)| x.to_string())
            .chain(free.iter().map(|y| y.to_string()))
            .collect();
        let equations = eqs
            .iter()
            .map(|(x, t)| (x.to_string(), parse_term_with_vars(t, &vars).unwrap()))
            .collect();
        System::new(
            eqs.iter().map(|(x, _)| x.to_string()).collect(),
            free.iter().map(|y| y.to_string()).collect(),
            equations,
        )
        .unwrap()
    }

    fn set(bits: u64) -> StateSet {
        StateSet(bits)
    }

    #[test]
    fn validation() {
        let eqs = BTreeMap::from([("x".to_string(), Term::not(Term::var("x")))]);
        assert!(matches!(
            System::new(vec!["x".into()], vec![], eqs),
            Err(SystemError::NotPositive(..))
        ));
        let eqs = BTreeMap::from([("x".to_string(), Term::Bot)]);
        assert_eq!(
            System::new(vec!["y".into()], vec![], eqs.clone()),
            Err(SystemError::DomainMismatch)
        );
        assert_eq!(
            System::new(vec!["x".into()], vec!["x".into()], eqs),
            Err(SystemError::Overlap("x".into()))
        );
    }

    #[test]
    fn classification() {
        let c = classify_system(&sys(&[("x", "arrow a {x}")], &[]));
        assert!(c.elementary && c.guarded && c.simple && c.disjunctive_simple);
        let c = classify_system(&sys(&[("x", "p & arrow a {x | x2}"), ("x2", "F")], &[]));
        assert!(c.simple && !c.elementary);
        let c = classify_system(&sys(&[("x", "x | p")], &[]));
        assert_eq!(c, SystemClass::default());
        let c = classify_system(&sys(&[("x", "arrow a {x & x2}"), ("x2", "T")], &[]));
        assert!(c.simple && !c.disjunctive_simple);
        let c = classify_system(&sys(&[("x", "arrow a {x} & arrow a {x}")], &[]));
        assert!(c.simple && !c.disjunctive_simple);
    }

    #[test]
    fn solving_examples() {
        let m = example_m1();
        let env = Env::new();
        let s = sys(&[("x", "p | <a>x")], &[]);
        assert_eq!(bekic_solve(&s, &m, &env).unwrap()["x"], set(0b11));
        let s = sys(&[("x", "y1"), ("y1", "x")], &[]);
        let b = bekic_solve(&s, &m, &env).unwrap();
        assert_eq!((b["x"], b["y1"]), (StateSet::EMPTY, StateSet::EMPTY));
        let s = sys(&[("x", "<a>y")], &["y"]);
        let env = Env::from([("y".to_string(), set(0b10))]);
        assert_eq!(bekic_solve(&s, &m, &env).unwrap()["x"], set(0b11));
        let (sol, trace) = simultaneous_solve(&s, &m, &env).unwrap();
        assert_eq!(sol["x"], set(0b11));
        assert_eq!(trace.stabilized_at(), 1);
    }

    #[test]
    fn degenerate_systems() {
        let m = example_m1();
        let s = sys(&[("x", "F")], &[]);
        let (sol, trace) = simultaneous_solve(&s, &m, &Env::new()).unwrap();
        assert_eq!(sol["x"], StateSet::EMPTY);
        assert_eq!(trace.stages.len(), 2);
        let empty = System::new(vec![], vec![], BTreeMap::new()).unwrap();
        assert!(simultaneous_solve(&empty, &m, &Env::new())
            .unwrap()
            .0
            .is_empty());
        assert!(bekic_solve(&empty, &m, &Env::new()).unwrap().is_empty());
    }

    #[test]
    fn elimination_terms_close_off_later_variables() {
        let s = sys(&[("x", "p | <a>z"), ("z", "x | [a]z")], &[]);
        let ts = bekic_terms(&s);
        assert!(ts["x"].free_vars().is_empty());
        assert_eq!(ts["z"].free_vars(), BTreeSet::from(["x".to_string()]));
    }

    #[test]
    fn lattice_bekic_on_chain() {
        let l = FinLattice::chain(3);
        let f = |x: usize, y: usize| (x.max(y) + 1).min(2).min(if y == 0 { 0 } else { 2 });
        let g = |x: usize, _y: usize| x.max(1);
        assert_eq!(lattice_bekic(&l, f, g), lattice_simultaneous(&l, f, g));
    }
}
