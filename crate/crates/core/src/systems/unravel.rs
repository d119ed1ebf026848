use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{guard_system, is_x_free, System, SystemError};
use crate::term::{fresh_name, Name, Term};

const MAX_EQUATIONS: usize = 1024;

/// Turns a guarded system into a simple one. Modal subterms become arrows
/// (`◊t = →{t,⊤}`, `□t = →{t} ∨ →∅`) whose non-lattice items are hoisted
/// into fresh bound variables; least fixed points over bound variables are
/// unfolded. Alpha-equal hoisted terms share one variable. The witness maps
/// each original variable to its counterpart in the result.
pub fn unravel_to_simple(s: &System) -> Result<(System, BTreeMap<Name, Name>), SystemError> {
    let (g, _) = guard_system(s)?;
    let mut u = Unraveller {
        xs: g.bound_set(),
        avoid: g
            .equations
            .values()
            .flat_map(Term::names)
            .chain(g.bound.iter().cloned())
            .chain(g.free.iter().cloned())
            .collect(),
        defs: BTreeMap::new(),
        pending: VecDeque::new(),
        order: g.bound.clone(),
    };
    let mut out = BTreeMap::new();
    for x in &g.bound {
        let t = u.rhs(x, &g.equations[x])?;
        out.insert(x.clone(), t);
    }
    while let Some((x, body)) = u.pending.pop_front() {
        if u.order.len() > MAX_EQUATIONS {
            return Err(SystemError::NoProgress("unravelling", MAX_EQUATIONS));
        }
        let t = u.rhs(&x, &body)?;
        out.insert(x, t);
    }
    let witness = g.bound.iter().map(|x| (x.clone(), x.clone())).collect();
    let result = System::new(u.order, g.free.clone(), out)?;
    Ok((result, witness))
}

struct Unraveller {
    xs: BTreeSet<Name>,
    avoid: BTreeSet<Name>,
    defs: BTreeMap<Term, Name>,
    pending: VecDeque<(Name, Term)>,
    order: Vec<Name>,
}

impl Unraveller {
    fn rhs(&mut self, owner: &str, t: &Term) -> Result<Term, SystemError> {
        if is_x_free(t, &self.xs) {
            return Ok(t.clone());
        }
        Ok(match t {
            Term::And(l, r) => Term::and(self.rhs(owner, l)?, self.rhs(owner, r)?),
            Term::Or(l, r) => Term::or(self.rhs(owner, l)?, self.rhs(owner, r)?),
            Term::Dia(a, b) => Term::arrow_node(a.clone(), vec![self.item(owner, b)?, Term::Top]),
            Term::Nec(a, b) => Term::or(
                Term::arrow_node(a.clone(), vec![self.item(owner, b)?]),
                Term::arrow_node(a.clone(), vec![]),
            ),
            Term::Arrow(a, items) => Term::arrow_node(
                a.clone(),
                items
                    .iter()
                    .map(|d| self.item(owner, d))
                    .collect::<Result<_, _>>()?,
            ),
            Term::Mu(..) => self.rhs(owner, &t.unfold().expect("fixpoint"))?,
            Term::Nu(..) => return Err(SystemError::GreatestFixpoint(t.to_string())),
            _ => t.clone(),
        })
    }

    /// Keeps the lattice structure of an arrow item over bound variables and
    /// hoists every other leaf; least fixed points are unfolded first so
    /// that no bound variable ends up unguarded in a hoisted equation.
    fn item(&mut self, owner: &str, d: &Term) -> Result<Term, SystemError> {
        Ok(match d {
            Term::Var(x) if self.xs.contains(x) => d.clone(),
            Term::Top | Term::Bot => d.clone(),
            Term::And(l, r) => Term::and(self.item(owner, l)?, self.item(owner, r)?),
            Term::Or(l, r) => Term::or(self.item(owner, l)?, self.item(owner, r)?),
            Term::Mu(..) if !is_x_free(d, &self.xs) => {
                self.item(owner, &d.unfold().expect("fixpoint"))?
            }
            Term::Nu(..) if !is_x_free(d, &self.xs) => {
                return Err(SystemError::GreatestFixpoint(d.to_string()))
            }
            _ => self.hoist(owner, d),
        })
    }

    fn hoist(&mut self, owner: &str, d: &Term) -> Term {
        let key = d.canonical();
        if let Some(v) = self.defs.get(&key) {
            return Term::var(v.clone());
        }
        let v = fresh_name(owner.split('_').next().unwrap_or(owner), &self.avoid);
        self.avoid.insert(v.clone());
        self.xs.insert(v.clone());
        self.order.push(v.clone());
        self.defs.insert(key, v.clone());
        self.pending.push_back((v.clone(), d.clone()));
        Term::var(v)
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::sys;
    use super::super::{classify_system, cofinal_check, simultaneous_solve};
    use super::*;
    use crate::kripke::{sample_models, Env, SamplerConfig};

    fn check(s: &System) -> System {
        let (u, witness) = unravel_to_simple(s).unwrap();
        assert!(classify_system(&u).simple, "{u}");
        let cfg = SamplerConfig {
            random_models: 40,
            ..Default::default()
        };
        for m in sample_models(&cfg, &["p".into()], &["a".into()]) {
            let want = simultaneous_solve(s, &m, &Env::new()).unwrap().0;
            let got = simultaneous_solve(&u, &m, &Env::new()).unwrap().0;
            for (x, y) in &witness {
                assert_eq!(got[y], want[x]);
            }
            assert!(cofinal_check(s, &u, &m, &Env::new(), 20, Some(&witness)).unwrap());
        }
        u
    }

    #[test]
    fn nested_diamonds_are_hoisted() {
        let u = check(&sys(&[("x", "<a><a>x")], &[]));
        assert_eq!(
            u,
            sys(&[("x", "arrow a {x_1, T}"), ("x_1", "arrow a {x, T}")], &[])
        );
    }

    #[test]
    fn arrow_system_unchanged() {
        let s = sys(&[("x", "arrow a {x}")], &[]);
        let (u, w) = unravel_to_simple(&s).unwrap();
        assert_eq!(u, s);
        assert_eq!(w, BTreeMap::from([("x".to_string(), "x".to_string())]));
    }

    #[test]
    fn join_item_is_hoisted_with_parameter() {
        let u = check(&sys(&[("x", "p & <a>(x | p)")], &[]));
        assert_eq!(u.bound, vec!["x".to_string(), "x_1".to_string()]);
        assert_eq!(u.equations["x"].to_string(), "p & arrow a {x | x_1, T}");
        assert_eq!(u.equations["x_1"], Term::gen("p"));
    }

    #[test]
    fn inner_least_fixpoints_and_boxes() {
        check(&sys(&[("x", "mu y . p | <a>y | [a]x")], &[]));
        check(&sys(&[("x", "[a](x & <a>x) | p")], &[]));
        check(&sys(&[("x", "<a>(mu y . x | <a>y)")], &[]));
    }

    #[test]
    fn greatest_fixpoint_over_unknowns_rejected() {
        let s = sys(&[("x", "nu y . <a>y & <a>x")], &[]);
        assert!(matches!(
            unravel_to_simple(&s),
            Err(SystemError::GreatestFixpoint(_))
        ));
    }
}
