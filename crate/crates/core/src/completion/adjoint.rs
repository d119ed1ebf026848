use std::collections::BTreeMap;

use super::{members, CompletionError, CutLattice, FinitePoset};
use crate::lattice::FinLattice;
use crate::term::{Name, Term};

/// `f∨` on the cut lattice and its upper adjoint `g∧`, as tables over cut indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedAdjoint {
    pub ext: Vec<usize>,
    pub right: Vec<usize>,
}

impl ExtendedAdjoint {
    /// `f∨ ∘ ι = ι ∘ f`.
    pub fn extends(&self, c: &CutLattice, f: &[usize]) -> bool {
        (0..c.poset.len()).all(|x| self.ext[c.iota[x]] == c.iota[f[x]])
    }

    /// `f∨(x) ≤ y  ⟺  x ≤ g∧(y)` for all cuts.
    pub fn adjunction(&self, c: &CutLattice) -> bool {
        let l = &c.lattice;
        (0..l.len()).all(|x| (0..l.len()).all(|y| l.leq(self.ext[x], y) == l.leq(x, self.right[y])))
    }

    pub fn preserves_joins(&self, c: &CutLattice) -> bool {
        let l = &c.lattice;
        self.ext[l.bot] == l.bot
            && (0..l.len()).all(|x| {
                (0..l.len()).all(|y| self.ext[l.join(x, y)] == l.join(self.ext[x], self.ext[y]))
            })
    }

    pub fn right_preserves_meets(&self, c: &CutLattice) -> bool {
        let l = &c.lattice;
        self.right[l.top] == l.top
            && (0..l.len()).all(|x| {
                (0..l.len())
                    .all(|y| self.right[l.meet(x, y)] == l.meet(self.right[x], self.right[y]))
            })
    }
}

/// Checks that `f` is monotone and preserves every join that exists in the poset.
fn check_join_preserving(p: &FinitePoset, f: &[usize]) -> Result<(), CompletionError> {
    let n = p.len();
    if f.len() != n || f.iter().any(|&y| y >= n) {
        return Err(CompletionError::NotJoinPreserving(
            "table does not match the carrier".into(),
        ));
    }
    for a in 0..n {
        for b in 0..n {
            if p.leq(a, b) && !p.leq(f[a], f[b]) {
                return Err(CompletionError::NotJoinPreserving(format!(
                    "not monotone at {} ≤ {}",
                    p.elements[a], p.elements[b]
                )));
            }
        }
    }
    let subsets: Box<dyn Iterator<Item = u64>> = if n <= 16 {
        Box::new(0..1u64 << n)
    } else {
        Box::new(
            std::iter::once(0)
                .chain((0..n).flat_map(|a| (0..n).map(move |b| 1u64 << a | 1u64 << b))),
        )
    };
    for s in subsets {
        let Some(j) = p.join_of(s) else { continue };
        let image = members(s).fold(0u64, |m, x| m | 1 << f[x]);
        if p.join_of(image) != Some(f[j]) {
            return Err(CompletionError::NotJoinPreserving(format!(
                "join of {s:#b} not preserved"
            )));
        }
    }
    Ok(())
}

/// Extends a join-preserving map on the poset by `f∨(A) = ⋁_{a∈A} ι(f a)`.
pub fn extend_left_adjoint(
    c: &CutLattice,
    f: &[usize],
) -> Result<ExtendedAdjoint, CompletionError> {
    check_join_preserving(&c.poset, f)?;
    let l = &c.lattice;
    let ext: Vec<usize> = c
        .cuts
        .iter()
        .map(|&a| l.join_all(members(a).map(|x| c.iota[f[x]])))
        .collect();
    let right = (0..l.len())
        .map(|y| l.upper_adjoint_of(|x| ext[x], y))
        .collect::<Option<Vec<usize>>>()
        .ok_or_else(|| {
            CompletionError::NotJoinPreserving("extension has no upper adjoint".into())
        })?;
    Ok(ExtendedAdjoint { ext, right })
}

/// The cut lattice with every operation of the poset extended.
pub fn complete_modal_structure(c: &CutLattice) -> Result<FinLattice, CompletionError> {
    let mut l = c.lattice.clone();
    for (a, f) in &c.poset.ops {
        l.ops.insert(a.clone(), extend_left_adjoint(c, f)?.ext);
    }
    Ok(l)
}

fn complement(l: &FinLattice, x: usize) -> Option<usize> {
    let mut cs = (0..l.len()).filter(|&y| l.meet(x, y) == l.bot && l.join(x, y) == l.top);
    let c = cs.next()?;
    cs.next().is_none().then_some(c)
}

/// Evaluates a term in a finite lattice with operations; generators and free
/// variables are read from `env`. Negation and boxes need unique complements.
pub fn lattice_eval(
    l: &FinLattice,
    t: &Term,
    env: &BTreeMap<Name, usize>,
) -> Result<usize, CompletionError> {
    let unsupported = || CompletionError::Unsupported(t.to_string());
    Ok(match t {
        Term::Gen(x) | Term::Var(x) => *env
            .get(x)
            .ok_or_else(|| CompletionError::Unknown(x.clone()))?,
        Term::Top => l.top,
        Term::Bot => l.bot,
        Term::And(a, b) => l.meet(lattice_eval(l, a, env)?, lattice_eval(l, b, env)?),
        Term::Or(a, b) => l.join(lattice_eval(l, a, env)?, lattice_eval(l, b, env)?),
        Term::Not(a) => complement(l, lattice_eval(l, a, env)?).ok_or_else(unsupported)?,
        Term::Dia(a, b) => {
            let op = l
                .ops
                .get(a)
                .ok_or_else(|| CompletionError::Unknown(a.clone()))?;
            op[lattice_eval(l, b, env)?]
        }
        Term::Nec(a, b) => {
            let nb = complement(l, lattice_eval(l, b, env)?).ok_or_else(unsupported)?;
            let op = l
                .ops
                .get(a)
                .ok_or_else(|| CompletionError::Unknown(a.clone()))?;
            complement(l, op[nb]).ok_or_else(unsupported)?
        }
        Term::Mu(x, b) | Term::Nu(x, b) => {
            let mut local = env.clone();
            let mut cur = if matches!(t, Term::Mu(..)) {
                l.bot
            } else {
                l.top
            };
            for _ in 0..=l.len() {
                local.insert(x.clone(), cur);
                let next = lattice_eval(l, b, &local)?;
                if next == cur {
                    return Ok(cur);
                }
                cur = next;
            }
            return Err(unsupported());
        }
        Term::Arrow(..) => lattice_eval(l, &t.expand_arrows(), env)?,
    })
}

/// Partial evaluation in a poset: `None` when a needed join or meet does
/// not exist. Only the positive, negation-free fragment is supported.
pub fn poset_eval(
    p: &FinitePoset,
    t: &Term,
    env: &BTreeMap<Name, usize>,
) -> Result<Option<usize>, CompletionError> {
    let pair = |a: &Term, b: &Term| -> Result<Option<u64>, CompletionError> {
        Ok(match (poset_eval(p, a, env)?, poset_eval(p, b, env)?) {
            (Some(x), Some(y)) => Some(1 << x | 1 << y),
            _ => None,
        })
    };
    Ok(match t {
        Term::Gen(x) | Term::Var(x) => Some(
            *env.get(x)
                .ok_or_else(|| CompletionError::Unknown(x.clone()))?,
        ),
        Term::Top => p.top(),
        Term::Bot => p.bottom(),
        Term::And(a, b) => pair(a, b)?.and_then(|s| p.meet_of(s)),
        Term::Or(a, b) => pair(a, b)?.and_then(|s| p.join_of(s)),
        Term::Dia(a, b) => {
            let op = p
                .ops
                .get(a)
                .ok_or_else(|| CompletionError::Unknown(a.clone()))?;
            poset_eval(p, b, env)?.map(|x| op[x])
        }
        Term::Mu(x, b) => {
            let mut local = env.clone();
            let Some(mut cur) = p.bottom() else {
                return Ok(None);
            };
            for _ in 0..=p.len() {
                local.insert(x.clone(), cur);
                match poset_eval(p, b, &local)? {
                    None => return Ok(None),
                    Some(next) if next == cur => return Ok(Some(cur)),
                    Some(next) => cur = next,
                }
            }
            return Err(CompletionError::Unsupported(t.to_string()));
        }
        _ => return Err(CompletionError::Unsupported(t.to_string())),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PreservationVerdict {
    /// `ι` carries every approximant, and the least fixed point, across.
    Preserved,
    /// The hypotheses held but stage `n` disagrees.
    Violated { stage: usize },
    /// The polynomial is not preserved by `ι`; the check does not apply.
    HypothesisFailure(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreservationReport {
    pub verdict: PreservationVerdict,
    /// Approximants in the poset.
    pub source: Vec<usize>,
    /// Approximants in the completion.
    pub target: Vec<usize>,
}

/// Compares `μvar.body` in the poset and in its completion, stage by stage.
pub fn preservation_check(
    c: &CutLattice,
    body: &Term,
    var: &str,
    env: &BTreeMap<Name, usize>,
) -> Result<PreservationReport, CompletionError> {
    let fail = |msg: String| {
        Ok(PreservationReport {
            verdict: PreservationVerdict::HypothesisFailure(msg),
            source: vec![],
            target: vec![],
        })
    };
    let l = match complete_modal_structure(c) {
        Ok(l) => l,
        Err(CompletionError::NotJoinPreserving(e)) => return fail(e),
        Err(e) => return Err(e),
    };
    let p = &c.poset;
    let Some(bot) = p.bottom() else {
        return fail("the poset has no least element".into());
    };
    let mut src_env = env.clone();
    let mut tgt_env: BTreeMap<Name, usize> =
        env.iter().map(|(k, &v)| (k.clone(), c.iota[v])).collect();
    let mut step = |x: usize| -> Result<Result<usize, String>, CompletionError> {
        src_env.insert(var.to_string(), x);
        tgt_env.insert(var.to_string(), c.iota[x]);
        let Some(y) = poset_eval(p, body, &src_env)? else {
            return Ok(Err(format!(
                "the polynomial leaves the poset at {}",
                p.elements[x]
            )));
        };
        if lattice_eval(&l, body, &tgt_env)? != c.iota[y] {
            return Ok(Err(format!(
                "ι does not commute with the polynomial at {}",
                p.elements[x]
            )));
        }
        Ok(Ok(y))
    };
    for x in 0..p.len() {
        if let Err(e) = step(x)? {
            return fail(e);
        }
    }
    let mut source = vec![bot];
    loop {
        let next = step(*source.last().expect("nonempty"))?.expect("checked on every point");
        if next == *source.last().expect("nonempty") {
            break;
        }
        source.push(next);
    }
    let mut target = vec![l.bot];
    let mut local = tgt_env.clone();
    loop {
        local.insert(var.to_string(), *target.last().expect("nonempty"));
        let next = lattice_eval(&l, body, &local)?;
        if next == *target.last().expect("nonempty") {
            break;
        }
        target.push(next);
    }
    let stages = source.len().max(target.len());
    let at = |v: &[usize], i: usize| v[i.min(v.len() - 1)];
    let verdict = match (0..stages).find(|&i| c.iota[at(&source, i)] != at(&target, i)) {
        Some(stage) => PreservationVerdict::Violated { stage },
        None => PreservationVerdict::Preserved,
    };
    Ok(PreservationReport {
        verdict,
        source,
        target,
    })
}

#[cfg(test)]
mod tests {
    use super::super::dm_completion;
    use super::*;
    use crate::kripke::{example_m1, random_model, ModelBounds};
    use crate::syntax::parse_term;

    fn p(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn identity_and_diamond_extend_trivially() {
        let l = FinLattice::powerset(&example_m1()).unwrap();
        let c = dm_completion(&FinitePoset::from_lattice(&l)).unwrap();
        let id: Vec<usize> = (0..l.len()).collect();
        let e = extend_left_adjoint(&c, &id).unwrap();
        assert_eq!(e.ext, (0..c.len()).collect::<Vec<_>>());
        let dia = &l.ops["a"];
        let e = extend_left_adjoint(&c, dia).unwrap();
        assert!(
            e.extends(&c, dia)
                && e.adjunction(&c)
                && e.preserves_joins(&c)
                && e.right_preserves_meets(&c)
        );
    }

    #[test]
    fn antichain_swap_extends() {
        let c = dm_completion(&FinitePoset::antichain(&["a", "b"])).unwrap();
        for f in [vec![1, 0], vec![0, 0], vec![1, 1]] {
            let e = extend_left_adjoint(&c, &f).unwrap();
            assert!(
                e.extends(&c, &f) && e.adjunction(&c) && e.preserves_joins(&c),
                "{f:?}"
            );
        }
    }

    #[test]
    fn non_monotone_rejected() {
        let c = dm_completion(&FinitePoset::from_lattice(&FinLattice::chain(3))).unwrap();
        assert!(matches!(
            extend_left_adjoint(&c, &[2, 1, 0]),
            Err(CompletionError::NotJoinPreserving(_))
        ));
    }

    #[test]
    fn preservation_examples() {
        let l = FinLattice::powerset(&example_m1()).unwrap();
        let c = dm_completion(&FinitePoset::from_lattice(&l)).unwrap();
        let env = BTreeMap::from([("p".to_string(), 2)]);
        let r = preservation_check(&c, &p("p"), "x", &env).unwrap();
        assert_eq!(r.verdict, PreservationVerdict::Preserved);
        assert_eq!(r.source, vec![0, 2]);
        let r = preservation_check(&c, &p("p | <a>x"), "x", &env).unwrap();
        assert_eq!(r.verdict, PreservationVerdict::Preserved);
        assert_eq!(*r.source.last().unwrap(), 3);

        let mut ab =
            FinitePoset::from_pairs(vec!["z".into(), "a".into(), "b".into()], &[(0, 1), (0, 2)])
                .unwrap();
        ab.ops.insert("a".into(), vec![0, 1, 2]);
        let c = dm_completion(&ab).unwrap();
        let env = BTreeMap::from([("p".to_string(), 1), ("q".to_string(), 2)]);
        let r = preservation_check(&c, &p("p | q | x"), "x", &env).unwrap();
        assert!(matches!(
            r.verdict,
            PreservationVerdict::HypothesisFailure(_)
        ));
    }

    #[test]
    fn sampled_lattices_preserve() {
        for seed in 0..15 {
            let m = random_model(
                seed,
                &ModelBounds {
                    max_states: 3,
                    ..Default::default()
                },
            );
            let l = FinLattice::powerset(&m).unwrap();
            let c = dm_completion(&FinitePoset::from_lattice(&l)).unwrap();
            let env = BTreeMap::from([
                ("p".to_string(), m.val("p").0 as usize),
                ("q".to_string(), m.val("q").0 as usize),
            ]);
            for body in ["p | <a>x", "q & (p | <a><a>x)", "<a>x | (p & <a>q)"] {
                let r = preservation_check(&c, &p(body), "x", &env).unwrap();
                assert_eq!(
                    r.verdict,
                    PreservationVerdict::Preserved,
                    "{body} seed {seed}"
                );
            }
        }
    }
}
