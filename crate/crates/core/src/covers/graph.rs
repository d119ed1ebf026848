//! Cover graphs, pan-based covers of parametrized least fixed points and
//! automaton reachability.

use super::{
    apply, cover, prune, vec_leq, vec_meet, Backend, CoverError, CoverSet, Descriptor, FinBackend,
};
use crate::kripke::ApproximantTrace;

pub const DEFAULT_BUDGET: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge<E> {
    pub from: usize,
    pub to: usize,
    /// Parameter part of the cover that produced this edge.
    pub label: Vec<E>,
}

/// `𝒢ₓ(f, l)`: vertices reachable from the root `l` (index 0) along
/// `l →^{m'} l'` for `(l', m') ∈ Cov(f, l)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverGraph<E> {
    pub vertices: Vec<E>,
    pub edges: Vec<Edge<E>>,
    pub budget: usize,
    /// Exploration finished before the budget ran out.
    pub closed: bool,
}

impl<E> CoverGraph<E> {
    fn out(&self, v: usize) -> impl Iterator<Item = &Edge<E>> {
        self.edges.iter().filter(move |e| e.from == v)
    }
}

fn split<E: Clone>(c: &[E], bound: usize) -> (E, Vec<E>) {
    let mut rest = c.to_vec();
    let x = rest.remove(bound);
    (x, rest)
}

/// Breadth-first exploration of the cover graph of `inner` in coordinate `bound`.
pub fn cover_graph<B: Backend>(
    b: &B,
    inner: &Descriptor<B::Elem>,
    bound: usize,
    root: &B::Elem,
    budget: usize,
) -> Result<CoverGraph<B::Elem>, CoverError> {
    let (arity, coarity) = inner.shape()?;
    if coarity != 1 || bound >= arity {
        return Err(CoverError::Arity(format!(
            "cover graph over coordinate {bound} of a map {arity} -> {coarity}"
        )));
    }
    let mut g = CoverGraph {
        vertices: vec![b.canon(root)],
        edges: Vec::new(),
        budget,
        closed: true,
    };
    let mut next = 0;
    while next < g.vertices.len() {
        let v = g.vertices[next].clone();
        for c in cover(b, inner, &[v])?.vectors {
            let (x, label) = split(&c, bound);
            let x = b.canon(&x);
            let to = match g.vertices.iter().position(|w| *w == x) {
                Some(i) => i,
                None if g.vertices.len() >= budget => {
                    g.closed = false;
                    return Ok(g);
                }
                None => {
                    g.vertices.push(x);
                    g.vertices.len() - 1
                }
            };
            g.edges.push(Edge {
                from: next,
                to,
                label,
            });
        }
        next += 1;
    }
    Ok(g)
}

/// Covers of `μx.f` at `l`: meets of edge labels along pans (a simple path
/// from the root followed by a simple cycle), pruned to maximal vectors.
pub fn mu_cover<B: Backend>(
    b: &B,
    d: &Descriptor<B::Elem>,
    l: &B::Elem,
    budget: usize,
) -> Result<CoverSet<B::Elem>, CoverError> {
    let Descriptor::Mu { inner, bound } = d else {
        return Err(CoverError::Arity("mu_cover expects a mu descriptor".into()));
    };
    let g = cover_graph(b, inner, *bound, l, budget)?;
    if !g.closed {
        return Err(CoverError::Unclosed(budget));
    }
    let width = inner.arity()? - 1;
    let mut found = Vec::new();
    let mut on_path = vec![false; g.vertices.len()];
    pans(b, &g, 0, &vec![b.top(); width], &mut on_path, &mut found);
    Ok(CoverSet {
        vectors: prune(b, found),
        syntactic_only: !b.exact(),
    })
}

fn pans<B: Backend>(
    b: &B,
    g: &CoverGraph<B::Elem>,
    v: usize,
    acc: &[B::Elem],
    on_path: &mut [bool],
    found: &mut Vec<Vec<B::Elem>>,
) {
    on_path[v] = true;
    for e in g.out(v) {
        let m = vec_meet(b, acc, &e.label);
        if found.iter().any(|f| vec_leq(b, &m, f)) {
            continue;
        }
        if on_path[e.to] {
            found.push(m);
        } else {
            pans(b, g, e.to, &m, on_path, found);
        }
    }
    on_path[v] = false;
}

/// Reach set of a family of single-output maps: the least set containing
/// the seeds and every component of every cover of a member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reach<E> {
    pub states: Vec<E>,
    pub closed: bool,
}

pub fn automaton_reach<B: Backend>(
    b: &B,
    family: &[Descriptor<B::Elem>],
    seeds: &[B::Elem],
    budget: usize,
) -> Result<Reach<B::Elem>, CoverError> {
    let mut states: Vec<B::Elem> = Vec::new();
    for s in seeds {
        let s = b.canon(s);
        if !states.contains(&s) {
            states.push(s);
        }
    }
    let mut next = 0;
    while next < states.len() {
        let q = states[next].clone();
        for f in family {
            for c in cover(b, f, std::slice::from_ref(&q))?.vectors {
                for x in c {
                    let x = b.canon(&x);
                    if states.contains(&x) {
                        continue;
                    }
                    if states.len() >= budget {
                        return Ok(Reach {
                            states,
                            closed: false,
                        });
                    }
                    states.push(x);
                }
            }
        }
        next += 1;
    }
    Ok(Reach {
        states,
        closed: true,
    })
}

/// Evidence that `μx.f(x, m) = ⋁ₙ fⁿ(⊥, m)` with the pigeonhole bound:
/// for every `l`, `f^N(⊥, m) ≤ l` already forces `μx.f(x, m) ≤ l` when `N`
/// is the number of vertices of `𝒢ₓ(f, l)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructiveReport {
    pub value: usize,
    pub trace: ApproximantTrace<usize>,
    /// Largest closed cover graph met while checking the bound.
    pub max_vertices: usize,
    pub bound_holds: bool,
}

pub fn constructive_sup(
    fb: &FinBackend,
    d: &Descriptor<usize>,
    params: &[usize],
    budget: usize,
) -> Result<ConstructiveReport, CoverError> {
    let Descriptor::Mu { inner, bound } = d else {
        return Err(CoverError::Arity(
            "constructive_sup expects a mu descriptor".into(),
        ));
    };
    let step = |x: &usize| -> Result<usize, CoverError> {
        let mut full = params.to_vec();
        full.insert(*bound, *x);
        Ok(apply(fb, inner, &full)?[0])
    };
    let trace = ApproximantTrace::iterate(fb.bot(), step)?;
    let value = *trace.limit();
    let mut max_vertices = 0;
    let mut bound_holds = true;
    for l in 0..fb.lattice.len() {
        let g = cover_graph(fb, inner, *bound, &l, budget)?;
        if !g.closed {
            return Err(CoverError::Unclosed(budget));
        }
        let n = g.vertices.len();
        max_vertices = max_vertices.max(n);
        let mut x = fb.bot();
        for _ in 0..n {
            x = step(&x)?;
        }
        if fb.leq(&x, &l) && !fb.leq(&value, &l) {
            bound_holds = false;
        }
    }
    Ok(ConstructiveReport {
        value,
        trace,
        max_vertices,
        bound_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{same_lower_set, semantic_cover_oracle, SyntacticBackend};
    use super::*;
    use crate::kripke::{example_m1, random_model, ModelBounds};
    use crate::lattice::FinLattice;
    use crate::syntax::parse_term;
    use crate::term::{Literal, SpconSpec, Term};

    fn m1() -> FinBackend {
        FinBackend::new(FinLattice::powerset(&example_m1()).unwrap())
    }

    /// `(x, y) ↦ y ∨ ◊a x`.
    fn star() -> Descriptor<usize> {
        Descriptor::compose(
            Descriptor::Join(2),
            Descriptor::Pair(vec![
                Descriptor::proj(2, 1),
                Descriptor::compose(Descriptor::Diamond("a".into()), Descriptor::proj(2, 0)),
            ]),
        )
    }

    #[test]
    fn graph_examples() {
        let b = m1();
        let g = cover_graph(&b, &Descriptor::Join(2), 0, &1, 16).unwrap();
        assert_eq!(g.vertices, vec![1]);
        assert_eq!(
            g.edges,
            vec![Edge {
                from: 0,
                to: 0,
                label: vec![1]
            }]
        );
        let k = Descriptor::Constant { arity: 2, value: 3 };
        let g = cover_graph(&b, &k, 0, &1, 16).unwrap();
        assert_eq!((g.vertices.len(), g.edges.len()), (1, 0));
    }

    #[test]
    fn trivial_mu_covers() {
        let b = m1();
        let ignore = Descriptor::mu(Descriptor::proj(2, 1), 0);
        assert_eq!(
            mu_cover(&b, &ignore, &2, 16).unwrap().vectors,
            vec![vec![2]]
        );
        let id = Descriptor::mu(Descriptor::proj(2, 0), 0);
        assert_eq!(mu_cover(&b, &id, &0, 16).unwrap().vectors, vec![vec![3]]);
    }

    #[test]
    fn star_matches_oracle() {
        for seed in 0..20 {
            let m = random_model(
                seed,
                &ModelBounds {
                    max_states: 4,
                    ..Default::default()
                },
            );
            let b = FinBackend::new(FinLattice::powerset(&m).unwrap());
            let d = Descriptor::mu(star(), 0);
            for l in 0..b.lattice.len() {
                let got = mu_cover(&b, &d, &l, DEFAULT_BUDGET).unwrap();
                let want = semantic_cover_oracle(&b, &d, &[l]).unwrap();
                assert!(same_lower_set(&b, &got.vectors, &want), "seed {seed} l {l}");
            }
        }
    }

    #[test]
    fn star_on_m1_is_constructive() {
        let b = m1();
        let r = constructive_sup(&b, &Descriptor::mu(star(), 0), &[2], DEFAULT_BUDGET).unwrap();
        assert_eq!(r.value, 3);
        assert!(r.trace.stages.len() <= 4);
        assert!(r.bound_holds);
        let k = Descriptor::mu(Descriptor::Constant { arity: 2, value: 1 }, 0);
        let r = constructive_sup(&b, &k, &[0], DEFAULT_BUDGET).unwrap();
        assert_eq!((r.value, r.trace.stabilized_at()), (1, 1));
    }

    #[test]
    fn reach_examples() {
        let b = m1();
        assert_eq!(automaton_reach(&b, &[], &[2], 8).unwrap().states, vec![2]);
        assert_eq!(
            automaton_reach(&b, &[Descriptor::Identity(1)], &[2], 8)
                .unwrap()
                .states,
            vec![2]
        );

        let spec = SpconSpec::new(
            [Literal::Pos(Term::gen("p"))],
            [("a".to_string(), vec!["x".to_string()])],
        )
        .unwrap();
        let seed = parse_term("~q | <a>(r & <a>q) | [a]s").unwrap();
        let r = automaton_reach(
            &SyntacticBackend,
            &[Descriptor::Spcon(spec)],
            std::slice::from_ref(&seed),
            64,
        )
        .unwrap();
        assert!(r.closed);
        for q in &r.states {
            assert!(super::super::in_fl_lattice(q, &seed), "{q}");
        }
    }
}
