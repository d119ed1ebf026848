use std::collections::{BTreeMap, BTreeSet};

use super::{System, SystemError};
use crate::kripke::{Env, KripkeModel};
use crate::term::{classify, fresh_name, Fragment, Name, Term};

/// Elementary system whose designated coordinate denotes `t`.
///
/// Each subterm gets a variable, in depth-first preorder starting with the
/// designated `x`. `◊σt` becomes `→σ{t, ⊤}`, `□σt` becomes `→σ{t} ∨ →σ∅`
/// and `μv.t` adds `v = t` beside the node's own equation. Generators enter
/// through free variables `y_p` (and `yn_p` for `¬p`); see [`generator_env`].
pub fn compile_sigma1(t: &Term) -> Result<(System, Name), SystemError> {
    if classify(t) != Fragment::Sigma1 {
        return Err(SystemError::NotSigma1);
    }
    let mut c = Compiler {
        taken: t.names(),
        next: 0,
        bound: Vec::new(),
        free: BTreeSet::new(),
        equations: BTreeMap::new(),
    };
    let root = c.node(t, &BTreeMap::new());
    let sys = System::new(c.bound, c.free.into_iter().collect(), c.equations)?;
    Ok((sys, root))
}

/// Values of the `y_p` / `yn_p` inputs of a compiled system.
pub fn generator_env(m: &KripkeModel, s: &System) -> Env {
    s.free
        .iter()
        .filter_map(|y| {
            if let Some(p) = y.strip_prefix("yn_") {
                Some((y.clone(), m.val(p).complement(m.len())))
            } else {
                y.strip_prefix("y_").map(|p| (y.clone(), m.val(p)))
            }
        })
        .collect()
}

struct Compiler {
    taken: BTreeSet<Name>,
    next: usize,
    bound: Vec<Name>,
    free: BTreeSet<Name>,
    equations: BTreeMap<Name, Term>,
}

impl Compiler {
    fn fresh(&mut self) -> Name {
        loop {
            let v = if self.next == 0 {
                "x".to_string()
            } else {
                format!("x{}", self.next)
            };
            self.next += 1;
            if self.taken.insert(v.clone()) {
                self.bound.push(v.clone());
                return v;
            }
        }
    }

    fn define(&mut self, x: &Name, rhs: Term) {
        self.equations.insert(x.clone(), rhs);
    }

    /// `scope` maps binder names of `t` to their system variables.
    fn node(&mut self, t: &Term, scope: &BTreeMap<Name, Name>) -> Name {
        let x = self.fresh();
        let rhs = match t {
            Term::Gen(p) => self.input(format!("y_{p}")),
            Term::Not(b) => match &**b {
                Term::Gen(p) => self.input(format!("yn_{p}")),
                _ => unreachable!("sigma1 terms negate generators only"),
            },
            Term::Var(v) => Term::var(scope.get(v).cloned().unwrap_or_else(|| v.clone())),
            Term::Top | Term::Bot => t.clone(),
            Term::And(l, r) => Term::and(
                Term::var(self.node(l, scope)),
                Term::var(self.node(r, scope)),
            ),
            Term::Or(l, r) => Term::or(
                Term::var(self.node(l, scope)),
                Term::var(self.node(r, scope)),
            ),
            Term::Dia(a, b) => {
                let body = self.node(b, scope);
                let top = self.fresh();
                self.define(&top, Term::Top);
                Term::arrow_node(a.clone(), vec![Term::var(body), Term::var(top)])
            }
            Term::Nec(a, b) => {
                let some = self.fresh();
                let body = self.node(b, scope);
                let none = self.fresh();
                self.define(&some, Term::arrow_node(a.clone(), vec![Term::var(body)]));
                self.define(&none, Term::arrow_node(a.clone(), vec![]));
                Term::or(Term::var(some), Term::var(none))
            }
            Term::Arrow(a, items) => Term::arrow_node(
                a.clone(),
                items
                    .iter()
                    .map(|d| Term::var(self.node(d, scope)))
                    .collect(),
            ),
            Term::Mu(v, b) => {
                let own = fresh_name(v, &self.taken);
                self.taken.insert(own.clone());
                self.bound.push(own.clone());
                let mut inner = scope.clone();
                inner.insert(v.clone(), own.clone());
                let body = self.node(b, &inner);
                self.define(&own, Term::var(body.clone()));
                Term::var(body)
            }
            Term::Nu(..) => unreachable!("sigma1 terms have no greatest fixed points"),
        };
        self.define(&x, rhs);
        x
    }

    fn input(&mut self, y: Name) -> Term {
        self.free.insert(y.clone());
        Term::var(y)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{bekic_solve, classify_system};
    use super::*;
    use crate::gen::{random_term, TermShape};
    use crate::kripke::{eval, sample_models, SamplerConfig};
    use crate::syntax::parse_term;
    use rand::SeedableRng;

    #[test]
    fn generator_becomes_input() {
        let (s, x) = compile_sigma1(&parse_term("p").unwrap()).unwrap();
        assert_eq!(x, "x");
        assert_eq!(
            s.equations,
            BTreeMap::from([("x".to_string(), Term::var("y_p"))])
        );
        assert_eq!(s.free, vec!["y_p".to_string()]);
    }

    #[test]
    fn diamond_shape() {
        let (s, _) = compile_sigma1(&parse_term("<a>q").unwrap()).unwrap();
        assert_eq!(s.bound, vec!["x", "x1", "x2"]);
        assert_eq!(
            s.equations["x"],
            Term::arrow_node("a", vec![Term::var("x1"), Term::var("x2")])
        );
        assert_eq!(s.equations["x1"], Term::var("y_q"));
        assert_eq!(s.equations["x2"], Term::Top);
    }

    #[test]
    fn binder_equation_added() {
        let (s, _) = compile_sigma1(&parse_term("mu y . p | <a>y").unwrap()).unwrap();
        assert_eq!(s.equations["y_1"], Term::var("x1"));
        assert_eq!(s.equations["x"], Term::var("x1"));
        assert!(classify_system(&s).elementary);
    }

    #[test]
    fn rejects_other_fragments() {
        assert_eq!(
            compile_sigma1(&parse_term("nu y . <a>y").unwrap()),
            Err(SystemError::NotSigma1)
        );
    }

    #[test]
    fn designated_coordinate_matches_eval() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let shape = TermShape {
            nu: false,
            negation: true,
            negate_subterms: false,
            ..Default::default()
        };
        let models = sample_models(
            &SamplerConfig {
                random_models: 20,
                exhaustive_cap: 64,
                ..Default::default()
            },
            &["p".into(), "q".into()],
            &["a".into()],
        );
        for _ in 0..40 {
            let t = crate::term::nnf(&random_term(&mut rng, &shape));
            let (s, x) = compile_sigma1(&t).unwrap();
            assert!(classify_system(&s).elementary);
            for m in &models {
                let env = generator_env(m, &s);
                assert_eq!(
                    bekic_solve(&s, m, &env).unwrap()[&x],
                    eval(m, &t, &Env::new()).unwrap(),
                    "{t}"
                );
            }
        }
    }
}
