use std::collections::BTreeMap;

use super::{eval, Env, KripkeError, KripkeModel, StateSet};
use crate::term::{Literal, Name, Term};

/// Two-valued Boolean morphism `z ↦ [atom ∈ z]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Character {
    pub atom: usize,
}

impl Character {
    pub fn apply(&self, z: StateSet) -> bool {
        z.contains(self.atom)
    }
}

/// Character selecting `y`, at the least atom below it.
pub fn char_hom(_m: &KripkeModel, y: StateSet) -> Result<Character, KripkeError> {
    y.first()
        .map(|atom| Character { atom })
        .ok_or(KripkeError::CharacterOfBottom)
}

pub type PairElem = (StateSet, bool);

/// The algebra `A × 2` with `◊σ(z, w) = (◊σ z, χσ(z))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoProductAlgebra {
    pub base: KripkeModel,
    /// Atoms of the characters joined into `χσ`; absent or empty means `χσ ≡ ⊥`.
    pub chars: BTreeMap<Name, Vec<Character>>,
    /// Second coordinate of each generator.
    pub bits: BTreeMap<Name, bool>,
}

/// Builds `A × 2` from the non-bottom elements listed per action.
pub fn product_with_two(
    m: &KripkeModel,
    ys: &BTreeMap<Name, Vec<StateSet>>,
) -> Result<TwoProductAlgebra, KripkeError> {
    let mut chars = BTreeMap::new();
    for (a, list) in ys {
        let cs = list
            .iter()
            .map(|y| char_hom(m, *y))
            .collect::<Result<Vec<_>, _>>()?;
        chars.insert(a.clone(), cs);
    }
    Ok(TwoProductAlgebra {
        base: m.clone(),
        chars,
        bits: BTreeMap::new(),
    })
}

impl TwoProductAlgebra {
    pub fn chi(&self, action: &str, z: StateSet) -> bool {
        self.chars
            .get(action)
            .is_some_and(|cs| cs.iter().any(|c| c.apply(z)))
    }

    pub fn top(&self) -> PairElem {
        (self.base.full(), true)
    }

    pub fn neg(&self, (z, w): PairElem) -> PairElem {
        (z.complement(self.base.len()), !w)
    }

    pub fn dia(&self, action: &str, (z, _): PairElem) -> Result<PairElem, KripkeError> {
        Ok((self.base.dia(action, z)?, self.chi(action, z)))
    }

    pub fn nec(&self, action: &str, x: PairElem) -> Result<PairElem, KripkeError> {
        Ok(self.neg(self.dia(action, self.neg(x))?))
    }

    /// Every element of the carrier.
    pub fn carrier(&self) -> Vec<PairElem> {
        let n = self.base.len();
        (0..1u64 << n)
            .flat_map(|z| [(StateSet(z), false), (StateSet(z), true)])
            .collect()
    }

    pub fn eval(&self, t: &Term, env: &BTreeMap<Name, PairElem>) -> Result<PairElem, KripkeError> {
        let mut scope = Vec::new();
        self.go(t, env, &mut scope)
    }

    fn go(
        &self,
        t: &Term,
        env: &BTreeMap<Name, PairElem>,
        scope: &mut Vec<(Name, PairElem)>,
    ) -> Result<PairElem, KripkeError> {
        Ok(match t {
            Term::Gen(p) => (self.base.val(p), self.bits.get(p).copied().unwrap_or(false)),
            Term::Var(x) => match scope.iter().rev().find(|(y, _)| y == x) {
                Some((_, v)) => *v,
                None => *env
                    .get(x)
                    .ok_or_else(|| KripkeError::UnboundVariable(x.clone()))?,
            },
            Term::Top => self.top(),
            Term::Bot => (StateSet::EMPTY, false),
            Term::And(l, r) => {
                let (a, b) = (self.go(l, env, scope)?, self.go(r, env, scope)?);
                (a.0.inter(b.0), a.1 && b.1)
            }
            Term::Or(l, r) => {
                let (a, b) = (self.go(l, env, scope)?, self.go(r, env, scope)?);
                (a.0.union(b.0), a.1 || b.1)
            }
            Term::Not(b) => {
                let v = self.go(b, env, scope)?;
                self.neg(v)
            }
            Term::Dia(a, b) => {
                let v = self.go(b, env, scope)?;
                self.dia(a, v)?
            }
            Term::Nec(a, b) => {
                let v = self.go(b, env, scope)?;
                self.nec(a, v)?
            }
            Term::Arrow(..) => self.go(&t.expand_arrows(), env, scope)?,
            Term::Mu(x, b) | Term::Nu(x, b) => {
                let mut cur = if matches!(t, Term::Mu(..)) {
                    (StateSet::EMPTY, false)
                } else {
                    self.top()
                };
                loop {
                    scope.push((x.clone(), cur));
                    let next = self.go(b, env, scope);
                    scope.pop();
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

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WhitmanReport {
    /// Both `p` and `¬p` occur among the literals.
    LiteralClash(Name),
    /// Some listed `y` (met with `xσ` in the alternate form) denotes `⊥`.
    BottomWitness { action: Name, y: Term },
    /// Second coordinates, in `A × 2`, of `⋀Λ` (a), `□σ⋁Yσ` (bσ),
    /// `⋀_y ◊σ y` (cσ), and of the whole antecedent.
    Certificate {
        a: bool,
        b: BTreeMap<Name, bool>,
        c: BTreeMap<Name, bool>,
        value: bool,
    },
}

impl WhitmanReport {
    pub fn certified(&self) -> bool {
        match self {
            WhitmanReport::Certificate { a, b, c, value } => {
                *a && *value && b.values().all(|v| *v) && c.values().all(|v| *v)
            }
            _ => false,
        }
    }
}

/// Replays the proof that `⋀Λ ∧ ⋀σ(□σ⋁Yσ ∧ ⋀◊σ y) ≤ ⊥` forces a literal
/// clash or a bottom `y`. With `xs`, checks the form where `□σ xσ` replaces
/// `□σ⋁Yσ` by rewriting each `y` to `xσ ∧ y`.
pub fn whitman_check(
    lambda: &[Literal],
    ys: &BTreeMap<Name, Vec<Term>>,
    xs: Option<&BTreeMap<Name, Term>>,
    m: &KripkeModel,
) -> Result<WhitmanReport, KripkeError> {
    for l in lambda {
        if let Literal::Pos(Term::Gen(p)) = l {
            if lambda.contains(&Literal::Neg(Term::Gen(p.clone()))) {
                return Ok(WhitmanReport::LiteralClash(p.clone()));
            }
        }
    }
    let ys: BTreeMap<Name, Vec<Term>> = match xs {
        None => ys.clone(),
        Some(xs) => ys
            .iter()
            .map(|(a, list)| {
                let x = xs.get(a).cloned().unwrap_or(Term::Top);
                (
                    a.clone(),
                    list.iter()
                        .map(|y| Term::and(x.clone(), y.clone()))
                        .collect(),
                )
            })
            .collect(),
    };
    let env = Env::new();
    let mut values = BTreeMap::new();
    for (a, list) in &ys {
        let mut vs = Vec::new();
        for y in list {
            let v = eval(m, y, &env)?;
            if v.is_empty() {
                return Ok(WhitmanReport::BottomWitness {
                    action: a.clone(),
                    y: y.clone(),
                });
            }
            vs.push(v);
        }
        values.insert(a.clone(), vs);
    }
    let mut alg = product_with_two(m, &values)?;
    for l in lambda {
        if let Literal::Pos(Term::Gen(p)) = l {
            alg.bits.insert(p.clone(), true);
        }
    }
    let penv = BTreeMap::new();
    let lits = Term::big_and(lambda.iter().map(Literal::to_term));
    let a = alg.eval(&lits, &penv)?.1;
    let mut b = BTreeMap::new();
    let mut c = BTreeMap::new();
    let mut parts = vec![lits];
    for (act, list) in &ys {
        let boxed = Term::nec(act.clone(), Term::big_or(list.iter().cloned()));
        b.insert(act.clone(), alg.eval(&boxed, &penv)?.1);
        let dias = Term::big_and(list.iter().map(|y| Term::dia(act.clone(), y.clone())));
        c.insert(act.clone(), alg.eval(&dias, &penv)?.1);
        parts.push(boxed);
        parts.push(dias);
    }
    let value = alg.eval(&Term::big_and(parts), &penv)?.1;
    Ok(WhitmanReport::Certificate { a, b, c, value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::example_m1;
    use crate::syntax::parse_term;

    #[test]
    fn characters() {
        let m = example_m1();
        let chi = char_hom(&m, StateSet(0b10)).unwrap();
        assert!(
            chi.apply(StateSet(0b10)) && chi.apply(StateSet(0b11)) && !chi.apply(StateSet(0b01))
        );
        assert_eq!(
            char_hom(&m, StateSet::EMPTY),
            Err(KripkeError::CharacterOfBottom)
        );
    }

    #[test]
    fn product_examples() {
        let m = example_m1();
        let alg = product_with_two(&m, &BTreeMap::new()).unwrap();
        for (z, w) in alg.carrier() {
            assert!(!alg.dia("a", (z, w)).unwrap().1);
        }
        let ys = BTreeMap::from([("a".to_string(), vec![StateSet(0b10)])]);
        let alg = product_with_two(&m, &ys).unwrap();
        assert_eq!(
            alg.dia("a", (StateSet(0b10), false)).unwrap(),
            (StateSet(0b11), true)
        );
        let carrier = alg.carrier();
        for x in &carrier {
            for y in &carrier {
                let j = (x.0.union(y.0), x.1 || y.1);
                let l = alg.dia("a", j).unwrap();
                let (dx, dy) = (alg.dia("a", *x).unwrap(), alg.dia("a", *y).unwrap());
                assert_eq!(l, (dx.0.union(dy.0), dx.1 || dy.1));
            }
        }
        let bad = BTreeMap::from([("a".to_string(), vec![StateSet::EMPTY])]);
        assert!(product_with_two(&m, &bad).is_err());
    }

    #[test]
    fn whitman_examples() {
        let mut m = example_m1();
        m.set_val("q", StateSet(0b10));
        let p = Literal::Pos(Term::gen("p"));
        let np = Literal::Neg(Term::gen("p"));
        assert_eq!(
            whitman_check(&[p.clone(), np], &BTreeMap::new(), None, &m).unwrap(),
            WhitmanReport::LiteralClash("p".into())
        );
        let ys = BTreeMap::from([("a".to_string(), vec![Term::Bot])]);
        assert_eq!(
            whitman_check(&[], &ys, None, &m).unwrap(),
            WhitmanReport::BottomWitness {
                action: "a".into(),
                y: Term::Bot
            }
        );
        let ys = BTreeMap::from([("a".to_string(), vec![parse_term("q").unwrap()])]);
        let r = whitman_check(std::slice::from_ref(&p), &ys, None, &m).unwrap();
        assert!(r.certified(), "{r:?}");
        let xs = BTreeMap::from([("a".to_string(), parse_term("p").unwrap())]);
        assert!(whitman_check(std::slice::from_ref(&p), &ys, Some(&xs), &m)
            .unwrap()
            .certified());
        let xs = BTreeMap::from([("a".to_string(), parse_term("~q").unwrap())]);
        assert!(matches!(
            whitman_check(&[p], &ys, Some(&xs), &m).unwrap(),
            WhitmanReport::BottomWitness { .. }
        ));
    }

    #[test]
    fn first_projection_preserves_fixpoints() {
        let m = example_m1();
        let ys = BTreeMap::from([("a".to_string(), vec![StateSet(0b01)])]);
        let mut alg = product_with_two(&m, &ys).unwrap();
        alg.bits.insert("p".into(), true);
        for s in ["mu x . p | <a>x", "nu x . [a]x & ~p", "mu x . [a]x"] {
            let t = parse_term(s).unwrap();
            assert_eq!(
                alg.eval(&t, &BTreeMap::new()).unwrap().0,
                eval(&m, &t, &Env::new()).unwrap()
            );
        }
    }
}
