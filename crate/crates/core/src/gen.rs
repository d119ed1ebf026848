//! Seeded random generators for terms and systems.

use rand::seq::SliceRandom;
use rand::Rng;

use std::collections::BTreeMap;

use crate::systems::System;
use crate::term::Term;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermShape {
    pub depth: usize,
    pub generators: usize,
    pub actions: usize,
    /// Allow negated generators.
    pub negation: bool,
    /// With `negation`, also negate closed subterms.
    pub negate_subterms: bool,
    pub mu: bool,
    pub nu: bool,
    /// Free variables that may occur (positively) at the leaves.
    pub free: Vec<String>,
}

impl Default for TermShape {
    fn default() -> Self {
        TermShape {
            depth: 4,
            generators: 2,
            actions: 1,
            negation: false,
            negate_subterms: true,
            mu: true,
            nu: true,
            free: Vec::new(),
        }
    }
}

pub const GENERATORS: [&str; 4] = ["p", "q", "r", "s"];
pub const ACTIONS: [&str; 3] = ["a", "b", "c"];
const BINDERS: [&str; 4] = ["x", "y", "z", "w"];

/// A positive random term, closed apart from `shape.free`. Without `nu` and `negate_subterms` the
/// result is in the sigma1 fragment.
pub fn random_term(rng: &mut impl Rng, shape: &TermShape) -> Term {
    go(rng, shape, shape.depth, &mut Vec::new())
}

fn leaf(rng: &mut impl Rng, shape: &TermShape, scope: &[String]) -> Term {
    let roll = rng.gen_range(0..10);
    if (!scope.is_empty() || !shape.free.is_empty()) && roll < 4 {
        let k = rng.gen_range(0..scope.len() + shape.free.len());
        return Term::var(
            scope
                .get(k)
                .unwrap_or_else(|| &shape.free[k - scope.len()])
                .clone(),
        );
    }
    if roll == 9 {
        return if rng.gen_bool(0.5) {
            Term::Top
        } else {
            Term::Bot
        };
    }
    let g = Term::gen(GENERATORS[rng.gen_range(0..shape.generators.max(1))]);
    if shape.negation && rng.gen_bool(0.3) {
        Term::not(g)
    } else {
        g
    }
}

fn go(rng: &mut impl Rng, shape: &TermShape, depth: usize, scope: &mut Vec<String>) -> Term {
    if depth == 0 || rng.gen_bool(0.2) {
        return leaf(rng, shape, scope);
    }
    let action = ACTIONS[rng.gen_range(0..shape.actions.max(1))];
    let mut kinds = vec![0, 1, 2, 3];
    if shape.mu {
        kinds.push(4);
    }
    if shape.nu {
        kinds.push(5);
    }
    if shape.negation && shape.negate_subterms {
        kinds.push(6);
    }
    match *kinds.choose(rng).expect("nonempty") {
        0 => Term::and(
            go(rng, shape, depth - 1, scope),
            go(rng, shape, depth - 1, scope),
        ),
        1 => Term::or(
            go(rng, shape, depth - 1, scope),
            go(rng, shape, depth - 1, scope),
        ),
        2 => Term::dia(action, go(rng, shape, depth - 1, scope)),
        3 => Term::nec(action, go(rng, shape, depth - 1, scope)),
        k @ (4 | 5) => {
            let names: Vec<&str> = BINDERS
                .iter()
                .copied()
                .filter(|b| !shape.free.iter().any(|f| f == b))
                .collect();
            let x = names.choose(rng).expect("binder names left").to_string();
            scope.push(x.clone());
            let body = go(rng, shape, depth - 1, scope);
            scope.pop();
            if k == 4 {
                Term::mu(x, body)
            } else {
                Term::nu(x, body)
            }
        }
        _ => Term::not(go(rng, shape, depth - 1, &mut Vec::new())),
    }
}

/// Random system over bound variables `u1 … uk` whose right-hand sides are
/// random terms in those variables.
pub fn random_system(rng: &mut impl Rng, k: usize, shape: &TermShape) -> System {
    let bound: Vec<String> = (1..=k).map(|i| format!("u{i}")).collect();
    let shape = TermShape {
        free: bound.clone(),
        ..shape.clone()
    };
    let equations: BTreeMap<String, Term> = bound
        .iter()
        .map(|x| (x.clone(), random_term(rng, &shape)))
        .collect();
    System::new(bound, Vec::new(), equations).expect("positive by construction")
}

/// Lattice term over the given atoms, with `⊤` and `⊥`.
fn lattice_term(rng: &mut impl Rng, atoms: &[Term], depth: usize) -> Term {
    if depth == 0 || rng.gen_bool(0.4) {
        return match rng.gen_range(0..10) {
            0 => Term::Top,
            1 => Term::Bot,
            _ => atoms.choose(rng).expect("atoms").clone(),
        };
    }
    let (l, r) = (
        lattice_term(rng, atoms, depth - 1),
        lattice_term(rng, atoms, depth - 1),
    );
    if rng.gen_bool(0.5) {
        Term::and(l, r)
    } else {
        Term::or(l, r)
    }
}

/// Random simple system: lattice combinations of parameters (literals of
/// `p`, `q`) and arrow terms whose items are lattice terms over the
/// bound variables.
pub fn random_simple_system(rng: &mut impl Rng, k: usize, actions: usize) -> System {
    let bound: Vec<String> = (1..=k).map(|i| format!("u{i}")).collect();
    let vars: Vec<Term> = bound.iter().map(|x| Term::var(x.clone())).collect();
    let params = [
        Term::gen("p"),
        Term::gen("q"),
        Term::not(Term::gen("p")),
        Term::not(Term::gen("q")),
    ];
    let mut equations = BTreeMap::new();
    for x in &bound {
        let mut leaves = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            if rng.gen_bool(0.35) {
                leaves.push(params.choose(rng).expect("params").clone());
            } else {
                let a = ACTIONS[rng.gen_range(0..actions.max(1))];
                let items = (0..rng.gen_range(0..=2))
                    .map(|_| lattice_term(rng, &vars, 2))
                    .collect();
                leaves.push(Term::arrow_node(a, items));
            }
        }
        equations.insert(x.clone(), lattice_term(rng, &leaves, 2));
    }
    System::new(bound, Vec::new(), equations).expect("positive by construction")
}
