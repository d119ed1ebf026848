use std::collections::{BTreeMap, BTreeSet};

use super::{is_lattice_over, is_simple, is_x_free, Assignment, System, SystemError};
use crate::kripke::{eval, Env, KripkeError, KripkeModel, StateSet};
use crate::term::{Name, Term};

/// Join of subset variables, each a bitmask over the source variables.
/// Mask `0` is the empty meet `⊤`; the empty set is `⊥`.
type Item = BTreeSet<u64>;

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
struct Block {
    params: BTreeSet<Term>,
    arrows: BTreeMap<Name, BTreeSet<Item>>,
}

/// Join of blocks.
type Dsf = BTreeSet<Block>;

/// A simple system over `X` together with the disjunctive-simple system
/// over the nonempty subsets of `X` that it is conjugate to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowersetTranslation {
    pub source: System,
    pub target: System,
    /// `(mask, variable)` for each nonempty subset, in mask order.
    pub subsets: Vec<(u64, Name)>,
}

pub fn subset_name(mask: u64) -> Name {
    format!("ps_{mask}")
}

pub fn powerset_translate(s: &System) -> Result<PowersetTranslation, SystemError> {
    let xs = s.bound_set();
    if let Some((x, _)) = s.equations.iter().find(|(_, t)| !is_simple(t, &xs)) {
        return Err(SystemError::NotSimple(x.clone()));
    }
    let n = s.bound.len();
    let index: BTreeMap<&Name, usize> = s.bound.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let forms: Vec<Dsf> = s
        .bound
        .iter()
        .map(|x| dsf(&s.equations[x], &xs, &index))
        .collect();
    let subsets: Vec<(u64, Name)> = (1..1u64 << n).map(|m| (m, subset_name(m))).collect();
    let mut equations = BTreeMap::new();
    for (mask, name) in &subsets {
        let meet = (0..n)
            .filter(|j| mask >> j & 1 == 1)
            .map(|j| forms[j].clone())
            .reduce(|a, b| product(&a, &b))
            .expect("nonempty subset");
        equations.insert(name.clone(), render(&meet));
    }
    let target = System::new(
        subsets.iter().map(|(_, v)| v.clone()).collect(),
        s.free.clone(),
        equations,
    )?;
    Ok(PowersetTranslation {
        source: s.clone(),
        target,
        subsets,
    })
}

impl PowersetTranslation {
    /// `i_S(x) = ⋀_{j∈S} xⱼ`.
    pub fn embed(&self, x: &Assignment) -> Assignment {
        self.subsets
            .iter()
            .map(|(mask, v)| {
                let meet = self
                    .source
                    .bound
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| mask >> j & 1 == 1)
                    .fold(StateSet(u64::MAX), |acc, (_, x_j)| acc.inter(x[x_j]));
                (v.clone(), meet)
            })
            .collect()
    }

    /// Singleton projections.
    pub fn project(&self, g: &Assignment) -> Assignment {
        self.source
            .bound
            .iter()
            .enumerate()
            .map(|(j, x)| (x.clone(), g[&subset_name(1 << j)]))
            .collect()
    }

    /// `⋀_{j∈S} Fⱼ(x) = G_S(i(x))` for every nonempty `S`.
    pub fn commutes_at(
        &self,
        m: &KripkeModel,
        env: &Env,
        x: &Assignment,
    ) -> Result<bool, KripkeError> {
        let mut src = env.clone();
        src.extend(x.iter().map(|(k, v)| (k.clone(), *v)));
        let mut tgt = env.clone();
        tgt.extend(self.embed(x));
        for (mask, v) in &self.subsets {
            let mut lhs = m.full();
            for (j, x_j) in self.source.bound.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    lhs = lhs.inter(eval(m, &self.source.equations[x_j], &src)?);
                }
            }
            if lhs != eval(m, &self.target.equations[v], &tgt)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Stage-by-stage instance of the transfer lemma: `i(Fᵏ(⊥)) = Gᵏ(⊥)`
    /// and `Fᵏ(⊥) = π(Gᵏ(⊥))` for `k ≤ n`.
    pub fn transfer_holds(
        &self,
        m: &KripkeModel,
        env: &Env,
        n: usize,
    ) -> Result<bool, KripkeError> {
        let fs = self.source.approximants(m, env, n)?;
        let gs = self.target.approximants(m, env, n)?;
        Ok(fs
            .iter()
            .zip(&gs)
            .all(|(f, g)| self.embed(f) == *g && self.project(g) == *f))
    }
}

fn dsf(t: &Term, xs: &BTreeSet<Name>, index: &BTreeMap<&Name, usize>) -> Dsf {
    match t {
        Term::Or(l, r) => {
            return dsf(l, xs, index)
                .union(&dsf(r, xs, index))
                .cloned()
                .collect()
        }
        Term::And(l, r) => return product(&dsf(l, xs, index), &dsf(r, xs, index)),
        _ => {}
    }
    if let Term::Arrow(a, items) = t {
        if items.iter().all(|d| is_lattice_over(d, xs)) {
            let items: BTreeSet<Item> = items.iter().map(|d| dnf(d, index)).collect();
            if items.iter().any(BTreeSet::is_empty) {
                return Dsf::new();
            }
            return Dsf::from([Block {
                params: BTreeSet::new(),
                arrows: BTreeMap::from([(a.clone(), items)]),
            }]);
        }
    }
    if is_x_free(t, xs) {
        return match t {
            Term::Bot => Dsf::new(),
            Term::Top => Dsf::from([Block::default()]),
            _ => Dsf::from([Block {
                params: BTreeSet::from([t.clone()]),
                arrows: BTreeMap::new(),
            }]),
        };
    }
    unreachable!("checked simple")
}

fn dnf(d: &Term, index: &BTreeMap<&Name, usize>) -> Item {
    match d {
        Term::Var(x) => Item::from([1 << index[x]]),
        Term::Top => Item::from([0]),
        Term::Bot => Item::new(),
        Term::Or(l, r) => absorb(dnf(l, index).union(&dnf(r, index)).copied().collect()),
        Term::And(l, r) => meet(&dnf(l, index), &dnf(r, index)),
        _ => unreachable!("checked lattice term"),
    }
}

fn absorb(it: Item) -> Item {
    if it.contains(&0) {
        Item::from([0])
    } else {
        it
    }
}

/// Meet of two joins of subset variables: `x_S ∧ x_T = x_{S∪T}` on the
/// image of the embedding.
fn meet(a: &Item, b: &Item) -> Item {
    absorb(
        a.iter()
            .flat_map(|s| b.iter().map(move |t| s | t))
            .collect(),
    )
}

fn product(a: &Dsf, b: &Dsf) -> Dsf {
    a.iter()
        .flat_map(|x| b.iter().filter_map(move |y| merge(x, y)))
        .collect()
}

/// Meet of two blocks; `None` when it is `⊥`.
fn merge(x: &Block, y: &Block) -> Option<Block> {
    let mut out = x.clone();
    out.params.extend(y.params.iter().cloned());
    for (a, d2) in &y.arrows {
        let Some(d1) = x.arrows.get(a) else {
            out.arrows.insert(a.clone(), d2.clone());
            continue;
        };
        let merged = arrow_meet(d1, d2)?;
        out.arrows.insert(a.clone(), merged);
    }
    Some(out)
}

/// `→D₁ ∧ →D₂`: `→∅` if both are empty, `⊥` if exactly one is, and
/// otherwise `→{d₁ ∧ ⋁D₂, ⋁D₁ ∧ d₂}`.
fn arrow_meet(d1: &BTreeSet<Item>, d2: &BTreeSet<Item>) -> Option<BTreeSet<Item>> {
    match (d1.is_empty(), d2.is_empty()) {
        (true, true) => Some(BTreeSet::new()),
        (true, false) | (false, true) => None,
        _ => {
            let join = |d: &BTreeSet<Item>| absorb(d.iter().flatten().copied().collect());
            let (j1, j2) = (join(d1), join(d2));
            Some(
                d1.iter()
                    .map(|d| meet(d, &j2))
                    .chain(d2.iter().map(|d| meet(&j1, d)))
                    .collect(),
            )
        }
    }
}

fn render(f: &Dsf) -> Term {
    Term::big_or(f.iter().map(|b| {
        let arrows = b.arrows.iter().map(|(a, items)| {
            let items = items
                .iter()
                .map(|it| {
                    if it.contains(&0) {
                        Term::Top
                    } else {
                        Term::big_or(it.iter().map(|m| Term::var(subset_name(*m))))
                    }
                })
                .collect();
            Term::arrow_node(a.clone(), items)
        });
        Term::big_and(b.params.iter().cloned().chain(arrows))
    }))
}

#[cfg(test)]
mod tests {
    use super::super::tests::sys;
    use super::super::{classify_system, simultaneous_solve};
    use super::*;
    use crate::kripke::{sample_models, SamplerConfig};

    #[test]
    fn three_arrow_cases() {
        let t = powerset_translate(&sys(&[("x", "arrow a {} & arrow a {x}")], &[])).unwrap();
        assert_eq!(t.target.equations["ps_1"], Term::Bot);
        let t = powerset_translate(&sys(&[("x", "arrow a {} & arrow a {}")], &[])).unwrap();
        assert_eq!(t.target.equations["ps_1"], Term::arrow_node("a", vec![]));
        let t = powerset_translate(&sys(&[("x", "arrow a {x} & arrow a {z}"), ("z", "p")], &[]))
            .unwrap();
        assert_eq!(
            t.target.equations["ps_1"],
            Term::arrow_node("a", vec![Term::var("ps_3")])
        );
    }

    #[test]
    fn single_variable_is_a_renaming() {
        let s = sys(&[("x", "p & arrow a {x, T} | q")], &[]);
        let t = powerset_translate(&s).unwrap();
        assert_eq!(t.subsets, vec![(1, "ps_1".to_string())]);
        let renamed = s.equations["x"].subst1("x", &Term::var("ps_1"));
        let cfg = SamplerConfig::default();
        for m in sample_models(&cfg, &["p".into(), "q".into()], &["a".into()])
            .iter()
            .take(100)
        {
            for z in 0..1u64 << m.len() {
                let env = Env::from([("ps_1".to_string(), StateSet(z))]);
                assert_eq!(
                    eval(m, &renamed, &env).unwrap(),
                    eval(m, &t.target.equations["ps_1"], &env).unwrap()
                );
            }
        }
    }

    #[test]
    fn square_commutes_and_transfers() {
        let s = sys(
            &[
                ("x", "p & arrow a {x & z, T} | arrow b {z}"),
                ("z", "arrow a {x | z} & arrow a {x}"),
            ],
            &[],
        );
        let t = powerset_translate(&s).unwrap();
        assert!(
            classify_system(&t.target).disjunctive_simple,
            "{}",
            t.target
        );
        let cfg = SamplerConfig {
            random_models: 30,
            ..Default::default()
        };
        for m in sample_models(&cfg, &["p".into()], &["a".into(), "b".into()]) {
            for bits in 0..1u64 << (2 * m.len()).min(8) {
                let x = Assignment::from([
                    ("x".to_string(), StateSet(bits & m.full().0)),
                    ("z".to_string(), StateSet((bits >> m.len()) & m.full().0)),
                ]);
                assert_eq!(t.project(&t.embed(&x)), x);
                assert!(t.commutes_at(&m, &Env::new(), &x).unwrap());
            }
            assert!(t.transfer_holds(&m, &Env::new(), 12).unwrap());
            let f = simultaneous_solve(&s, &m, &Env::new()).unwrap().0;
            let g = simultaneous_solve(&t.target, &m, &Env::new()).unwrap().0;
            assert_eq!(t.project(&g), f);
        }
    }

    #[test]
    fn rejects_non_simple() {
        assert!(matches!(
            powerset_translate(&sys(&[("x", "<a>x")], &[])),
            Err(SystemError::NotSimple(_))
        ));
    }
}
