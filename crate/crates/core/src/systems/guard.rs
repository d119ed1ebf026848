use std::collections::BTreeMap;

use super::{System, SystemError};
use crate::term::{expose, guard, nnf, replace_unguarded, unguarded_vars, Name, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GuardStepKind {
    /// `x = (x ∧ f) ∨ g  ↝  x = g`.
    LoopElimination,
    /// Unguarded occurrences of one variable replaced by its right-hand side
    /// in every other equation.
    Substitution,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuardStep {
    pub kind: GuardStepKind,
    pub variable: Name,
    pub before: System,
    pub after: System,
}

/// Rewrites the system until every bound variable is guarded in every
/// right-hand side, eliminating one variable at a time in declaration
/// order: its own loop is removed, then its right-hand side is substituted
/// for its unguarded occurrences elsewhere. Afterwards no equation mentions
/// that variable unguarded, and later steps cannot reintroduce it.
pub fn guard_system(s: &System) -> Result<(System, Vec<GuardStep>), SystemError> {
    let mut cur = s.clone();
    for rhs in cur.equations.values_mut() {
        *rhs = guard(&nnf(rhs));
    }
    let mut log = Vec::new();
    for x in &s.bound {
        if unguarded_vars(&cur.equations[x]).contains(x) {
            let mut next = cur.clone();
            let body = replace_unguarded(&expose(&cur.equations[x], x), x, &Term::Bot).simplify();
            next.equations.insert(x.clone(), body);
            log.push(GuardStep {
                kind: GuardStepKind::LoopElimination,
                variable: x.clone(),
                before: cur,
                after: next.clone(),
            });
            cur = next;
        }
        let users: Vec<Name> = s
            .bound
            .iter()
            .filter(|y| *y != x && unguarded_vars(&cur.equations[*y]).contains(x))
            .cloned()
            .collect();
        if users.is_empty() {
            continue;
        }
        let def = BTreeMap::from([(x.clone(), cur.equations[x].clone())]);
        let mut next = cur.clone();
        for y in users {
            let t = replace_many(&expose(&cur.equations[&y], x), &def).simplify();
            next.equations.insert(y, t);
        }
        log.push(GuardStep {
            kind: GuardStepKind::Substitution,
            variable: x.clone(),
            before: cur,
            after: next.clone(),
        });
        cur = next;
    }
    debug_assert!(cur
        .equations
        .values()
        .all(|t| unguarded_vars(t).is_disjoint(&s.bound_set())));
    Ok((cur, log))
}

/// Replaces unguarded occurrences (outside modal operators and binders).
fn replace_many(s: &Term, map: &BTreeMap<Name, Term>) -> Term {
    match s {
        Term::Var(y) => map.get(y).cloned().unwrap_or_else(|| s.clone()),
        Term::Dia(..) | Term::Nec(..) | Term::Arrow(..) | Term::Mu(..) | Term::Nu(..) => s.clone(),
        _ => s.map_children(|c| replace_many(c, map)),
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::sys;
    use super::super::{classify_system, sandwich_check, simultaneous_solve};
    use super::*;
    use crate::kripke::{sample_models, Env, SamplerConfig};

    #[test]
    fn loop_is_dropped() {
        let (g, log) = guard_system(&sys(&[("x", "x | p")], &[])).unwrap();
        assert_eq!(g, sys(&[("x", "p")], &[]));
        assert!(log.is_empty() || log[0].kind == GuardStepKind::LoopElimination);
    }

    #[test]
    fn one_substitution() {
        let (g, log) = guard_system(&sys(&[("x", "y1"), ("y1", "<a>x | p")], &[])).unwrap();
        assert_eq!(g, sys(&[("x", "<a>x | p"), ("y1", "<a>x | p")], &[]));
        assert_eq!(log.len(), 1);
        assert_eq!(log[0].kind, GuardStepKind::Substitution);
    }

    #[test]
    fn guarded_is_fixed() {
        let s = sys(&[("x", "<a>x")], &[]);
        let (g, log) = guard_system(&s).unwrap();
        assert_eq!(g, s);
        assert!(log.is_empty());
    }

    #[test]
    fn steps_preserve_solution_and_sandwich() {
        let s = sys(
            &[
                ("x1", "x2"),
                ("x2", "x3 & q"),
                ("x3", "x4 | x1"),
                ("x4", "p | <a>x1"),
            ],
            &[],
        );
        let (g, log) = guard_system(&s).unwrap();
        assert!(classify_system(&g).guarded);
        let models = sample_models(
            &SamplerConfig {
                random_models: 30,
                ..Default::default()
            },
            &["p".into(), "q".into()],
            &["a".into()],
        );
        for m in &models {
            let want = simultaneous_solve(&s, m, &Env::new()).unwrap().0;
            assert_eq!(simultaneous_solve(&g, m, &Env::new()).unwrap().0, want);
            for step in &log {
                assert!(sandwich_check(&step.before, &step.after, m, &Env::new(), 10).unwrap());
            }
        }
    }
}
