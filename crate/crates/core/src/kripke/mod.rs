//! Finite modal algebras: powerset algebras of Kripke models.
//!
//! States are limited to 64 so that an element of the algebra is a `u64`
//! bitset. Every semantic oracle of the crate bottoms out here.

mod product;
mod sampler;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::term::{Name, Term};

pub use product::{
    char_hom, product_with_two, whitman_check, Character, PairElem, TwoProductAlgebra,
    WhitmanReport,
};
pub use sampler::{
    check_leq, check_leq_on, random_model, sample_models, LeqVerdict, ModelBounds, SamplerConfig,
};

pub const MAX_STATES: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KripkeError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(Name),
    #[error("unknown action `{0}`")]
    UnknownAction(Name),
    #[error("{0} states exceed the limit of 64")]
    TooManyStates(usize),
    #[error("no character selects the bottom element")]
    CharacterOfBottom,
}

/// A set of states, bit `i` standing for state `i`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateSet(pub u64);

impl StateSet {
    pub const EMPTY: StateSet = StateSet(0);

    pub fn full(n: usize) -> StateSet {
        if n >= 64 {
            StateSet(u64::MAX)
        } else {
            StateSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> StateSet {
        StateSet(1 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn union(self, o: StateSet) -> StateSet {
        StateSet(self.0 | o.0)
    }

    pub fn inter(self, o: StateSet) -> StateSet {
        StateSet(self.0 & o.0)
    }

    pub fn minus(self, o: StateSet) -> StateSet {
        StateSet(self.0 & !o.0)
    }

    /// Complement relative to `n` states.
    pub fn complement(self, n: usize) -> StateSet {
        StateSet(!self.0 & StateSet::full(n).0)
    }

    pub fn is_subset(self, o: StateSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |i| self.contains(*i))
    }

    /// Least state in the set.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }
}

/// Environment for free variables.
pub type Env = BTreeMap<Name, StateSet>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KripkeModel {
    pub states: Vec<Name>,
    /// Successor sets per action, indexed by state.
    pub relations: BTreeMap<Name, Vec<StateSet>>,
    /// Missing generators denote the empty set.
    pub valuation: BTreeMap<Name, StateSet>,
}

impl KripkeModel {
    pub fn new(states: Vec<Name>) -> Result<KripkeModel, KripkeError> {
        if states.len() > MAX_STATES {
            return Err(KripkeError::TooManyStates(states.len()));
        }
        Ok(KripkeModel {
            states,
            relations: BTreeMap::new(),
            valuation: BTreeMap::new(),
        })
    }

    /// Model with states `s0 … s{n-1}`.
    pub fn with_states(n: usize) -> KripkeModel {
        KripkeModel::new((0..n).map(|i| format!("s{i}")).collect()).expect("state bound")
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn full(&self) -> StateSet {
        StateSet::full(self.len())
    }

    pub fn declare_action(&mut self, action: &str) {
        let n = self.len();
        self.relations
            .entry(action.to_string())
            .or_insert_with(|| vec![StateSet::EMPTY; n]);
    }

    pub fn add_edge(&mut self, action: &str, from: usize, to: usize) {
        self.declare_action(action);
        let succ = self.relations.get_mut(action).expect("declared");
        succ[from] = succ[from].union(StateSet::singleton(to));
    }

    pub fn set_val(&mut self, gen: &str, set: StateSet) {
        self.valuation.insert(gen.to_string(), set);
    }

    pub fn val(&self, gen: &str) -> StateSet {
        self.valuation.get(gen).copied().unwrap_or_default()
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    fn succ(&self, action: &str) -> Result<&[StateSet], KripkeError> {
        self.relations
            .get(action)
            .map(Vec::as_slice)
            .ok_or_else(|| KripkeError::UnknownAction(action.to_string()))
    }

    /// `◊σ z`: states with some σ-successor in `z`.
    pub fn dia(&self, action: &str, z: StateSet) -> Result<StateSet, KripkeError> {
        let succ = self.succ(action)?;
        let mut out = 0u64;
        for (s, next) in succ.iter().enumerate() {
            if !next.inter(z).is_empty() {
                out |= 1 << s;
            }
        }
        Ok(StateSet(out))
    }

    /// `□σ z`: states all of whose σ-successors lie in `z`.
    pub fn nec(&self, action: &str, z: StateSet) -> Result<StateSet, KripkeError> {
        let succ = self.succ(action)?;
        let mut out = 0u64;
        for (s, next) in succ.iter().enumerate() {
            if next.is_subset(z) {
                out |= 1 << s;
            }
        }
        Ok(StateSet(out))
    }

    /// Right adjoint of `◊σ`: the largest `z` with `◊σ z ⊆ m`, i.e. the
    /// states whose σ-predecessors all lie in `m`.
    pub fn dia_adjoint(&self, action: &str, m: StateSet) -> Result<StateSet, KripkeError> {
        let succ = self.succ(action)?;
        let mut bad = 0u64;
        for (s, next) in succ.iter().enumerate() {
            if !m.contains(s) {
                bad |= next.0;
            }
        }
        Ok(StateSet(bad).complement(self.len()))
    }

    pub fn show(&self, z: StateSet) -> String {
        let names: Vec<&str> = z
            .iter()
            .filter(|i| *i < self.len())
            .map(|i| self.states[i].as_str())
            .collect();
        format!("{{{}}}", names.join(", "))
    }
}

impl fmt::Display for KripkeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::formats::print_model(self))
    }
}

/// Denotation of `t` under `env`; fixed points are computed by iteration
/// from `∅` (`μ`) or the full set (`ν`).
pub fn eval(m: &KripkeModel, t: &Term, env: &Env) -> Result<StateSet, KripkeError> {
    Evaluator {
        m,
        env,
        scope: Vec::new(),
    }
    .go(t)
}

struct Evaluator<'a> {
    m: &'a KripkeModel,
    env: &'a Env,
    scope: Vec<(&'a str, StateSet)>,
}

impl<'a> Evaluator<'a> {
    fn go(&mut self, t: &'a Term) -> Result<StateSet, KripkeError> {
        let n = self.m.len();
        Ok(match t {
            Term::Gen(p) => self.m.val(p),
            Term::Var(x) => match self.scope.iter().rev().find(|(y, _)| y == x) {
                Some((_, v)) => *v,
                None => *self
                    .env
                    .get(x)
                    .ok_or_else(|| KripkeError::UnboundVariable(x.clone()))?,
            },
            Term::Top => self.m.full(),
            Term::Bot => StateSet::EMPTY,
            Term::And(l, r) => self.go(l)?.inter(self.go(r)?),
            Term::Or(l, r) => self.go(l)?.union(self.go(r)?),
            Term::Not(b) => self.go(b)?.complement(n),
            Term::Dia(a, b) => {
                let z = self.go(b)?;
                self.m.dia(a, z)?
            }
            Term::Nec(a, b) => {
                let z = self.go(b)?;
                self.m.nec(a, z)?
            }
            Term::Arrow(a, items) => {
                let mut any = StateSet::EMPTY;
                let mut all = self.m.full();
                for it in items {
                    let z = self.go(it)?;
                    any = any.union(z);
                    all = all.inter(self.m.dia(a, z)?);
                }
                self.m.nec(a, any)?.inter(all)
            }
            Term::Mu(x, b) | Term::Nu(x, b) => {
                let mut cur = if matches!(t, Term::Mu(..)) {
                    StateSet::EMPTY
                } else {
                    self.m.full()
                };
                loop {
                    self.scope.push((x.as_str(), cur));
                    let next = self.go(b);
                    self.scope.pop();
                    let next = next?;
                    if next == cur {
                        break cur;
                    }
                    cur = next;
                }
            }
        })
    }
}

/// Finite-stage approximants `f⁰(⊥), f¹(⊥), …` up to the first repetition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproximantTrace<T> {
    pub stages: Vec<T>,
}

impl<T: PartialEq + Clone> ApproximantTrace<T> {
    /// Iterates `step` from `start` until two consecutive stages agree.
    pub fn iterate<E>(start: T, mut step: impl FnMut(&T) -> Result<T, E>) -> Result<Self, E> {
        let mut stages = vec![start];
        loop {
            let next = step(stages.last().expect("nonempty"))?;
            let done = &next == stages.last().expect("nonempty");
            stages.push(next);
            if done {
                return Ok(ApproximantTrace { stages });
            }
        }
    }

    /// Index of the first stage equal to its successor.
    pub fn stabilized_at(&self) -> usize {
        self.stages.len() - 2
    }

    pub fn limit(&self) -> &T {
        self.stages.last().expect("nonempty")
    }
}

/// Approximants of `μvar.body`.
pub fn lfp_iterate(
    m: &KripkeModel,
    body: &Term,
    var: &str,
    env: &Env,
) -> Result<ApproximantTrace<StateSet>, KripkeError> {
    let mut local = env.clone();
    ApproximantTrace::iterate(StateSet::EMPTY, |cur| {
        local.insert(var.to_string(), *cur);
        eval(m, body, &local)
    })
}

pub fn atoms(m: &KripkeModel) -> Vec<StateSet> {
    (0..m.len()).map(StateSet::singleton).collect()
}

/// The running example: two states, `a`-edges `s0→s1`, `s1→s1`, `p` at `s1`.
pub fn example_m1() -> KripkeModel {
    let mut m = KripkeModel::with_states(2);
    m.add_edge("a", 0, 1);
    m.add_edge("a", 1, 1);
    m.set_val("p", StateSet::singleton(1));
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;
    use crate::term::nnf;

    fn p(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn m1_examples() {
        let m = example_m1();
        let e = Env::new();
        assert_eq!(eval(&m, &Term::Bot, &e).unwrap(), StateSet::EMPTY);
        assert_eq!(eval(&m, &p("<a>p"), &e).unwrap(), StateSet(0b11));
        assert_eq!(eval(&m, &p("mu x . p | <a>x"), &e).unwrap(), StateSet(0b11));
    }

    #[test]
    fn m1_traces() {
        let m = example_m1();
        let e = Env::new();
        let t = lfp_iterate(&m, &parse_term_vars("p | <a>x"), "x", &e).unwrap();
        assert_eq!(
            t.stages,
            vec![StateSet(0), StateSet(0b10), StateSet(0b11), StateSet(0b11)]
        );
        assert_eq!(t.stabilized_at(), 2);
        let t = lfp_iterate(&m, &Term::var("x"), "x", &e).unwrap();
        assert_eq!(t.stages, vec![StateSet(0), StateSet(0)]);
        let t = lfp_iterate(&m, &Term::Top, "x", &e).unwrap();
        assert_eq!(t.stages, vec![StateSet(0), StateSet(0b11), StateSet(0b11)]);
    }

    fn parse_term_vars(s: &str) -> Term {
        crate::syntax::parse_term_with_vars(s, &["x".to_string()].into()).unwrap()
    }

    #[test]
    fn errors() {
        let m = example_m1();
        assert_eq!(
            eval(&m, &Term::var("z"), &Env::new()),
            Err(KripkeError::UnboundVariable("z".into()))
        );
        assert_eq!(
            eval(&m, &p("<b>p"), &Env::new()),
            Err(KripkeError::UnknownAction("b".into()))
        );
    }

    #[test]
    fn nnf_preserves_meaning_on_m1() {
        let m = example_m1();
        for s in ["~(p & <a>q)", "~(mu x . p | <a>x)", "~(nu x . [a]x & ~p)"] {
            let t = p(s);
            assert_eq!(
                eval(&m, &t, &Env::new()),
                eval(&m, &nnf(&t), &Env::new()),
                "{s}"
            );
        }
    }

    #[test]
    fn dia_adjoint_is_right_adjoint() {
        let m = example_m1();
        for z in 0..4u64 {
            for t in 0..4u64 {
                let (z, t) = (StateSet(z), StateSet(t));
                let lhs = m.dia("a", z).unwrap().is_subset(t);
                let rhs = z.is_subset(m.dia_adjoint("a", t).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn empty_model() {
        let m = KripkeModel::with_states(0);
        assert_eq!(eval(&m, &Term::Top, &Env::new()).unwrap(), StateSet::EMPTY);
    }

    #[test]
    fn atoms_of_m1() {
        assert_eq!(atoms(&example_m1()), vec![StateSet(1), StateSet(2)]);
    }
}
