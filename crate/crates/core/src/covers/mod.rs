//! Cover sets of `𝒪f`-adjoints: for a monotone `f` and a target `m`, a
//! finite set `Cov(f, m)` with `f(x) ≤ m` iff `x ≤ c` for some member `c`.
//!
//! Maps are described by [`Descriptor`] terms and evaluated on a
//! [`Backend`]: either a finite lattice (exact order) or the term algebra
//! (order approximated syntactically, soundness checked by refutation).

use std::fmt;

use thiserror::Error;

use crate::kripke::KripkeError;
use crate::term::{SpconSpec, TermError};

mod backends;
mod graph;
mod syntactic;
mod term_map;

pub use backends::{FinBackend, SyntacticBackend};
pub use graph::DEFAULT_BUDGET;
pub use graph::{
    automaton_reach, constructive_sup, cover_graph, mu_cover, ConstructiveReport, CoverGraph, Edge,
    Reach,
};
pub use syntactic::{
    dia_right_adjoint, in_fl_lattice, kleene_inverse_iteration, spcon_cover, syntactic_leq,
    InverseIteration,
};
pub use term_map::descriptor_of_term;

/// A fallible monotone step `x ↦ f(x)`.
pub type StepFn<'a, E> = dyn FnMut(&E) -> Result<E, CoverError> + 'a;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error("no cover rule for {0} on this backend")]
    NoCoverRule(&'static str),
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("cover graph not closed within {0} vertices")]
    Unclosed(usize),
    #[error("search space of {0} points exceeds the oracle limit")]
    TooLarge(usize),
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Kripke(#[from] KripkeError),
}

/// Operations a carrier must provide for the cover calculus.
pub trait Backend {
    type Elem: Clone + Ord + fmt::Debug;

    /// Whether `leq` decides the order (rather than approximating it from below).
    fn exact(&self) -> bool;
    fn top(&self) -> Self::Elem;
    fn bot(&self) -> Self::Elem;
    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn dia(&self, action: &str, a: &Self::Elem) -> Result<Self::Elem, CoverError>;
    fn dia_cover(&self, action: &str, m: &Self::Elem) -> Result<Vec<Self::Elem>, CoverError>;
    /// Covers of `x ↦ k ∧ x`.
    fn const_meet_cover(
        &self,
        k: &Self::Elem,
        m: &Self::Elem,
    ) -> Result<Vec<Self::Elem>, CoverError>;
    fn spcon(&self, spec: &SpconSpec, args: &[Self::Elem]) -> Result<Self::Elem, CoverError>;
    fn spcon_cover(
        &self,
        spec: &SpconSpec,
        m: &Self::Elem,
    ) -> Result<Vec<Vec<Self::Elem>>, CoverError>;
    /// Least fixed point of `f`.
    fn lfp(&self, f: &mut StepFn<Self::Elem>) -> Result<Self::Elem, CoverError>;
    /// Representative used for vertex identity in cover graphs.
    fn canon(&self, a: &Self::Elem) -> Self::Elem {
        a.clone()
    }
    fn show(&self, a: &Self::Elem) -> String;
}

/// A monotone map `L^arity → L^coarity` built from primitives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Descriptor<E> {
    Identity(usize),
    Projection {
        arity: usize,
        index: usize,
    },
    /// `⟨f₁, …, fₖ⟩`, outputs concatenated.
    Pair(Vec<Descriptor<E>>),
    /// `outer ∘ inner`.
    Compose(Box<Descriptor<E>>, Box<Descriptor<E>>),
    Join(usize),
    Constant {
        arity: usize,
        value: E,
    },
    /// `x ↦ k ∧ x`.
    ConstMeet(E),
    Diamond(String),
    Spcon(SpconSpec),
    /// `μ` over coordinate `bound` of a single-output map.
    Mu {
        inner: Box<Descriptor<E>>,
        bound: usize,
    },
}

impl<E: Clone> Descriptor<E> {
    pub fn compose(outer: Descriptor<E>, inner: Descriptor<E>) -> Descriptor<E> {
        Descriptor::Compose(Box::new(outer), Box::new(inner))
    }

    pub fn mu(inner: Descriptor<E>, bound: usize) -> Descriptor<E> {
        Descriptor::Mu {
            inner: Box::new(inner),
            bound,
        }
    }

    pub fn proj(arity: usize, index: usize) -> Descriptor<E> {
        Descriptor::Projection { arity, index }
    }

    /// `(arity, coarity)`, checking that the parts fit together.
    pub fn shape(&self) -> Result<(usize, usize), CoverError> {
        let bad = |msg: String| Err(CoverError::Arity(msg));
        Ok(match self {
            Descriptor::Identity(n) => (*n, *n),
            Descriptor::Projection { arity, index } => {
                if index >= arity {
                    return bad(format!("projection {index} of arity {arity}"));
                }
                (*arity, 1)
            }
            Descriptor::Pair(ds) => {
                let Some(first) = ds.first() else {
                    return bad("empty pairing".into());
                };
                let n = first.shape()?.0;
                let mut k = 0;
                for d in ds {
                    let (a, c) = d.shape()?;
                    if a != n {
                        return bad(format!("pairing components of arity {n} and {a}"));
                    }
                    k += c;
                }
                (n, k)
            }
            Descriptor::Compose(outer, inner) => {
                let (a, b) = inner.shape()?;
                let (c, d) = outer.shape()?;
                if b != c {
                    return bad(format!("composing coarity {b} into arity {c}"));
                }
                (a, d)
            }
            Descriptor::Join(n) => (*n, 1),
            Descriptor::Constant { arity, .. } => (*arity, 1),
            Descriptor::ConstMeet(_) | Descriptor::Diamond(_) => (1, 1),
            Descriptor::Spcon(spec) => (spec.coordinates().len(), 1),
            Descriptor::Mu { inner, bound } => {
                let (a, c) = inner.shape()?;
                if c != 1 || *bound >= a {
                    return bad(format!("mu over coordinate {bound} of a map {a} -> {c}"));
                }
                (a - 1, 1)
            }
        })
    }

    pub fn arity(&self) -> Result<usize, CoverError> {
        Ok(self.shape()?.0)
    }
}

/// Finite set of vectors; `syntactic_only` marks sets whose completeness
/// holds only relative to the approximate order of a syntactic backend.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverSet<E> {
    pub vectors: Vec<Vec<E>>,
    pub syntactic_only: bool,
}

impl<E> CoverSet<E> {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

fn vec_leq<B: Backend>(b: &B, x: &[B::Elem], y: &[B::Elem]) -> bool {
    x.iter().zip(y).all(|(p, q)| b.leq(p, q))
}

fn vec_meet<B: Backend>(b: &B, x: &[B::Elem], y: &[B::Elem]) -> Vec<B::Elem> {
    x.iter().zip(y).map(|(p, q)| b.meet(p, q)).collect()
}

/// Keeps the maximal vectors (w.r.t. the backend order), without duplicates.
pub fn prune<B: Backend>(b: &B, vs: Vec<Vec<B::Elem>>) -> Vec<Vec<B::Elem>> {
    let mut vs = vs;
    vs.sort();
    vs.dedup();
    let mut out: Vec<Vec<B::Elem>> = Vec::new();
    for (i, v) in vs.iter().enumerate() {
        let dominated = vs
            .iter()
            .enumerate()
            .any(|(j, w)| j != i && vec_leq(b, v, w) && (!vec_leq(b, w, v) || j < i));
        if !dominated {
            out.push(v.clone());
        }
    }
    out
}

/// `d(args)`.
pub fn apply<B: Backend>(
    b: &B,
    d: &Descriptor<B::Elem>,
    args: &[B::Elem],
) -> Result<Vec<B::Elem>, CoverError> {
    let (arity, _) = d.shape()?;
    if args.len() != arity {
        return Err(CoverError::Arity(format!(
            "{} arguments for arity {arity}",
            args.len()
        )));
    }
    Ok(match d {
        Descriptor::Identity(_) => args.to_vec(),
        Descriptor::Projection { index, .. } => vec![args[*index].clone()],
        Descriptor::Pair(ds) => {
            let mut out = Vec::new();
            for d in ds {
                out.extend(apply(b, d, args)?);
            }
            out
        }
        Descriptor::Compose(outer, inner) => apply(b, outer, &apply(b, inner, args)?)?,
        Descriptor::Join(_) => vec![args.iter().fold(b.bot(), |acc, x| b.join(&acc, x))],
        Descriptor::Constant { value, .. } => vec![value.clone()],
        Descriptor::ConstMeet(k) => vec![b.meet(k, &args[0])],
        Descriptor::Diamond(a) => vec![b.dia(a, &args[0])?],
        Descriptor::Spcon(spec) => vec![b.spcon(spec, args)?],
        Descriptor::Mu { inner, bound } => {
            let mut f = |x: &B::Elem| -> Result<B::Elem, CoverError> {
                let mut full = args.to_vec();
                full.insert(*bound, x.clone());
                Ok(apply(b, inner, &full)?.remove(0))
            };
            vec![b.lfp(&mut f)?]
        }
    })
}

/// `Cov(d, m)` by the rules of the calculus, pruned to maximal vectors.
pub fn cover<B: Backend>(
    b: &B,
    d: &Descriptor<B::Elem>,
    m: &[B::Elem],
) -> Result<CoverSet<B::Elem>, CoverError> {
    let vectors = prune(b, raw_cover(b, d, m)?);
    Ok(CoverSet {
        vectors,
        syntactic_only: !b.exact(),
    })
}

fn raw_cover<B: Backend>(
    b: &B,
    d: &Descriptor<B::Elem>,
    m: &[B::Elem],
) -> Result<Vec<Vec<B::Elem>>, CoverError> {
    let (arity, coarity) = d.shape()?;
    if m.len() != coarity {
        return Err(CoverError::Arity(format!(
            "target of length {} for coarity {coarity}",
            m.len()
        )));
    }
    let top = || vec![b.top(); arity];
    if m.iter().all(|x| *x == b.top()) {
        return Ok(vec![top()]);
    }
    Ok(match d {
        Descriptor::Identity(_) => vec![m.to_vec()],
        Descriptor::Projection { index, .. } => {
            let mut c = top();
            c[*index] = m[0].clone();
            vec![c]
        }
        Descriptor::Pair(ds) => {
            let mut acc = vec![top()];
            let mut at = 0;
            for d in ds {
                let k = d.shape()?.1;
                let part = raw_cover(b, d, &m[at..at + k])?;
                at += k;
                let next = acc.iter().flat_map(|x| part.iter().map(move |y| (x, y)));
                acc = prune(b, next.map(|(x, y)| vec_meet(b, x, y)).collect());
            }
            acc
        }
        Descriptor::Compose(outer, inner) => {
            let mut out = Vec::new();
            for c in raw_cover(b, outer, m)? {
                out.extend(raw_cover(b, inner, &c)?);
            }
            out
        }
        Descriptor::Join(n) => vec![vec![m[0].clone(); *n]],
        Descriptor::Constant { value, .. } => {
            if b.leq(value, &m[0]) {
                vec![top()]
            } else {
                vec![]
            }
        }
        Descriptor::ConstMeet(k) => b
            .const_meet_cover(k, &m[0])?
            .into_iter()
            .map(|c| vec![c])
            .collect(),
        Descriptor::Diamond(a) => b
            .dia_cover(a, &m[0])?
            .into_iter()
            .map(|c| vec![c])
            .collect(),
        Descriptor::Spcon(spec) => b.spcon_cover(spec, &m[0])?,
        Descriptor::Mu { .. } => mu_cover(b, d, &m[0], graph::DEFAULT_BUDGET)?.vectors,
    })
}

/// Maximal `x ∈ L^arity` with `d(x) ≤ m`, by enumeration.
pub fn semantic_cover_oracle(
    fb: &FinBackend,
    d: &Descriptor<usize>,
    m: &[usize],
) -> Result<Vec<Vec<usize>>, CoverError> {
    let arity = d.arity()?;
    let n = fb.lattice.len();
    let points = n.checked_pow(arity as u32).unwrap_or(usize::MAX);
    if points > 1 << 12 {
        return Err(CoverError::TooLarge(points));
    }
    let mut below = Vec::new();
    for code in 0..points {
        let x: Vec<usize> = (0..arity).map(|i| code / n.pow(i as u32) % n).collect();
        if vec_leq(fb, &apply(fb, d, &x)?, m) {
            below.push(x);
        }
    }
    Ok(prune(fb, below))
}

/// The lower sets generated by `xs` and `ys` coincide.
pub fn same_lower_set<B: Backend>(b: &B, xs: &[Vec<B::Elem>], ys: &[Vec<B::Elem>]) -> bool {
    xs.iter().all(|x| ys.iter().any(|y| vec_leq(b, x, y)))
        && ys.iter().all(|y| xs.iter().any(|x| vec_leq(b, y, x)))
}

/// One vector per line, components separated by ` ; `.
pub fn render_covers<B: Backend>(b: &B, cs: &CoverSet<B::Elem>) -> String {
    let mut out = String::new();
    for v in &cs.vectors {
        let parts: Vec<String> = v.iter().map(|e| b.show(e)).collect();
        out.push_str(&format!("({})\n", parts.join(" ; ")));
    }
    if cs.syntactic_only {
        out.push_str("# completeness relative to the syntactic order\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::{example_m1, random_model, ModelBounds};
    use crate::lattice::FinLattice;

    fn chain3() -> FinBackend {
        FinBackend::new(FinLattice::chain(3))
    }

    #[test]
    fn primitive_rules() {
        let b = chain3();
        assert_eq!(
            cover(&b, &Descriptor::Identity(1), &[1]).unwrap().vectors,
            vec![vec![1]]
        );
        assert_eq!(
            cover(&b, &Descriptor::Join(2), &[1]).unwrap().vectors,
            vec![vec![1, 1]]
        );
        let k = |v| Descriptor::Constant { arity: 1, value: v };
        assert!(cover(&b, &k(2), &[1]).unwrap().is_empty());
        assert_eq!(cover(&b, &k(1), &[1]).unwrap().vectors, vec![vec![2]]);
        assert_eq!(
            cover(&b, &Descriptor::proj(2, 1), &[0]).unwrap().vectors,
            vec![vec![2, 0]]
        );
    }

    #[test]
    fn shapes_are_checked() {
        let d: Descriptor<usize> =
            Descriptor::compose(Descriptor::Join(3), Descriptor::Identity(2));
        assert!(matches!(d.shape(), Err(CoverError::Arity(_))));
        let d: Descriptor<usize> = Descriptor::mu(Descriptor::Join(2), 0);
        assert_eq!(d.shape().unwrap(), (1, 1));
    }

    #[test]
    fn spcon_has_no_finite_rule() {
        let b = FinBackend::new(FinLattice::powerset(&example_m1()).unwrap());
        let spec = SpconSpec::new([], [("a".to_string(), vec!["x".to_string()])]).unwrap();
        assert_eq!(
            cover(&b, &Descriptor::Spcon(spec), &[1]),
            Err(CoverError::NoCoverRule("special conjunction"))
        );
    }

    fn descriptors(actions: &[&str], size: usize) -> Vec<Descriptor<usize>> {
        let (k1, k2) = (1 % size, 2 % size);
        let mut ds = vec![
            Descriptor::Identity(1),
            Descriptor::Join(2),
            Descriptor::proj(2, 0),
            Descriptor::Pair(vec![Descriptor::proj(2, 1), Descriptor::Join(2)]),
            Descriptor::compose(Descriptor::ConstMeet(k1), Descriptor::Join(2)),
        ];
        for a in actions {
            let dia = Descriptor::Diamond(a.to_string());
            ds.push(dia.clone());
            ds.push(Descriptor::compose(dia.clone(), Descriptor::Join(2)));
            ds.push(Descriptor::compose(
                Descriptor::Join(2),
                Descriptor::Pair(vec![
                    Descriptor::proj(2, 1),
                    Descriptor::compose(dia.clone(), Descriptor::proj(2, 0)),
                ]),
            ));
            ds.push(Descriptor::compose(
                dia.clone(),
                Descriptor::compose(Descriptor::ConstMeet(k2), dia),
            ));
        }
        ds
    }

    #[test]
    fn calculus_matches_oracle_on_small_powersets() {
        for seed in 0..12 {
            let m = random_model(
                seed,
                &ModelBounds {
                    min_states: 1,
                    max_states: 3,
                    ..Default::default()
                },
            );
            let b = FinBackend::new(FinLattice::powerset(&m).unwrap());
            for d in descriptors(&["a"], b.lattice.len()) {
                let k = d.shape().unwrap().1;
                for code in 0..b.lattice.len().pow(k as u32) {
                    let target: Vec<usize> = (0..k)
                        .map(|i| code / b.lattice.len().pow(i as u32) % b.lattice.len())
                        .collect();
                    let got = cover(&b, &d, &target).unwrap();
                    let want = semantic_cover_oracle(&b, &d, &target).unwrap();
                    assert!(
                        same_lower_set(&b, &got.vectors, &want),
                        "{d:?} at {target:?}"
                    );
                }
            }
        }
    }
}
