//! Dedekind-MacNeille completion of finite posets and the extension of
//! left adjoints (and hence diamonds) to the completion.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::lattice::{FinLattice, LatticeError};
use crate::term::Name;

mod adjoint;
mod enumerate;

pub use adjoint::{
    complete_modal_structure, extend_left_adjoint, lattice_eval, poset_eval, preservation_check,
    ExtendedAdjoint, PreservationReport, PreservationVerdict,
};
pub use enumerate::{isomorphic, posets_up_to_iso, random_poset};

/// Cuts are bit masks over the poset, so posets are limited to 64 elements;
/// the completion itself is capped separately.
pub const MAX_POSET: usize = 64;
pub const MAX_CUTS: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompletionError {
    #[error("relation is not a partial order")]
    NotAPartialOrder,
    #[error("{0} elements exceed the limit")]
    TooLarge(usize),
    #[error("map is not join-preserving: {0}")]
    NotJoinPreserving(String),
    #[error("cannot evaluate `{0}` here")]
    Unsupported(String),
    #[error("unknown name `{0}`")]
    Unknown(Name),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A finite poset with optional named unary maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    pub elements: Vec<Name>,
    leq: Vec<Vec<bool>>,
    pub ops: BTreeMap<Name, Vec<usize>>,
}

impl FinitePoset {
    /// Validates reflexivity, antisymmetry and transitivity.
    pub fn new(elements: Vec<Name>, leq: Vec<Vec<bool>>) -> Result<FinitePoset, CompletionError> {
        let n = elements.len();
        if n > MAX_POSET {
            return Err(CompletionError::TooLarge(n));
        }
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(CompletionError::NotAPartialOrder);
        }
        for i in 0..n {
            if !leq[i][i] {
                return Err(CompletionError::NotAPartialOrder);
            }
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(CompletionError::NotAPartialOrder);
                }
                if leq[i][j] && (0..n).any(|k| leq[j][k] && !leq[i][k]) {
                    return Err(CompletionError::NotAPartialOrder);
                }
            }
        }
        Ok(FinitePoset {
            elements,
            leq,
            ops: BTreeMap::new(),
        })
    }

    /// Reflexive-transitive closure of the given strict pairs.
    pub fn from_pairs(
        elements: Vec<Name>,
        pairs: &[(usize, usize)],
    ) -> Result<FinitePoset, CompletionError> {
        let n = elements.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in pairs {
            leq[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if leq[i][k] && leq[k][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
        FinitePoset::new(elements, leq)
    }

    /// The antichain on the given names.
    pub fn antichain(names: &[&str]) -> FinitePoset {
        FinitePoset::from_pairs(names.iter().map(|s| s.to_string()).collect(), &[])
            .expect("antichain")
    }

    /// Underlying poset of a lattice, keeping its labels and operations.
    pub fn from_lattice(l: &FinLattice) -> FinitePoset {
        let n = l.len();
        let leq = (0..n)
            .map(|i| (0..n).map(|j| l.leq(i, j)).collect())
            .collect();
        let mut p = FinitePoset::new(l.labels.clone(), leq).expect("lattice order");
        p.ops = l.ops.clone();
        p
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    fn full(&self) -> u64 {
        mask_of(0..self.len())
    }

    /// `↓x` as a mask.
    pub fn down(&self, x: usize) -> u64 {
        mask_of((0..self.len()).filter(|&y| self.leq(y, x)))
    }

    /// `↑x` as a mask.
    pub fn up(&self, x: usize) -> u64 {
        mask_of((0..self.len()).filter(|&y| self.leq(x, y)))
    }

    /// Common lower bounds of a set.
    pub fn lower_bounds(&self, s: u64) -> u64 {
        members(s).fold(self.full(), |acc, x| acc & self.down(x))
    }

    /// Common upper bounds of a set.
    pub fn upper_bounds(&self, s: u64) -> u64 {
        members(s).fold(self.full(), |acc, x| acc & self.up(x))
    }

    /// Least element of a mask, if any.
    fn least(&self, s: u64) -> Option<usize> {
        members(s).find(|&x| members(s).all(|y| self.leq(x, y)))
    }

    pub fn join_of(&self, s: u64) -> Option<usize> {
        self.least(self.upper_bounds(s))
    }

    pub fn meet_of(&self, s: u64) -> Option<usize> {
        members(self.lower_bounds(s))
            .find(|&x| members(self.lower_bounds(s)).all(|y| self.leq(y, x)))
    }

    pub fn bottom(&self) -> Option<usize> {
        self.join_of(0)
    }

    pub fn top(&self) -> Option<usize> {
        self.meet_of(0)
    }

    pub fn is_lattice(&self) -> bool {
        !self.is_empty()
            && (0..self.len()).all(|a| {
                (0..self.len()).all(|b| {
                    let s = (1 << a) | (1 << b);
                    self.join_of(s).is_some() && self.meet_of(s).is_some()
                })
            })
    }
}

pub(crate) fn mask_of(xs: impl IntoIterator<Item = usize>) -> u64 {
    xs.into_iter().fold(0, |m, x| m | 1 << x)
}

pub(crate) fn members(s: u64) -> impl Iterator<Item = usize> + Clone {
    (0..64).filter(move |i| s >> i & 1 == 1)
}

/// The cut lattice: each cut is stored by its lower set `A`
/// (`A = lb(ub(A))`), ordered by inclusion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutLattice {
    pub poset: FinitePoset,
    /// Lower sets, sorted by (size, mask).
    pub cuts: Vec<u64>,
    pub lattice: FinLattice,
    /// `ι`: poset element to cut index.
    pub iota: Vec<usize>,
}

impl CutLattice {
    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }

    pub fn index_of(&self, lower: u64) -> Option<usize> {
        self.cuts.iter().position(|&c| c == lower)
    }

    /// Upper set `B` of cut `i`.
    pub fn upper(&self, i: usize) -> u64 {
        self.poset.upper_bounds(self.cuts[i])
    }

    /// `ι` is an order embedding.
    pub fn embedding_ok(&self) -> bool {
        let n = self.poset.len();
        (0..n).all(|x| {
            (0..n).all(|y| self.poset.leq(x, y) == self.lattice.leq(self.iota[x], self.iota[y]))
        })
    }

    /// Every cut is the join of the `ι`-images below it and the meet of those above it.
    pub fn dense(&self) -> bool {
        let l = &self.lattice;
        (0..self.len()).all(|c| {
            let below = self.iota.iter().copied().filter(|&i| l.leq(i, c));
            let above = self.iota.iter().copied().filter(|&i| l.leq(c, i));
            l.join_all(below) == c && l.meet_all(above) == c
        })
    }

    /// Order matrix with a header of cut labels.
    pub fn dump(&self) -> String {
        let mut out = format!("cuts: {}\n", self.lattice.labels.join(" "));
        for i in 0..self.len() {
            let row: Vec<&str> = (0..self.len())
                .map(|j| if self.lattice.leq(i, j) { "1" } else { "0" })
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

/// All cuts of `p`: intersections of principal down-sets, plus the whole set.
pub fn dm_completion(p: &FinitePoset) -> Result<CutLattice, CompletionError> {
    let mut cuts: BTreeSet<u64> = BTreeSet::from([p.full()]);
    let mut frontier: Vec<u64> = vec![p.full()];
    while let Some(c) = frontier.pop() {
        for x in 0..p.len() {
            let d = c & p.down(x);
            if cuts.insert(d) {
                if cuts.len() > MAX_CUTS {
                    return Err(CompletionError::TooLarge(cuts.len()));
                }
                frontier.push(d);
            }
        }
    }
    let mut cuts: Vec<u64> = cuts.into_iter().collect();
    cuts.sort_by_key(|&c| (c.count_ones(), c));
    let leq = cuts
        .iter()
        .map(|&a| cuts.iter().map(|&b| a & !b == 0).collect())
        .collect();
    let mut lattice = FinLattice::from_order(leq)?;
    let iota: Vec<usize> = (0..p.len())
        .map(|x| {
            cuts.iter()
                .position(|&c| c == p.down(x))
                .expect("principal cut")
        })
        .collect();
    lattice.labels = cuts
        .iter()
        .enumerate()
        .map(|(i, &c)| match iota.iter().position(|&j| j == i) {
            Some(x) => p.elements[x].clone(),
            None => format!(
                "{{{}}}",
                members(c)
                    .map(|x| p.elements[x].as_str())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
        })
        .collect();
    Ok(CutLattice {
        poset: p.clone(),
        cuts,
        lattice,
        iota,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::{random_model, ModelBounds};

    #[test]
    fn antichain_gets_bottom_and_top() {
        let c = dm_completion(&FinitePoset::antichain(&["a", "b"])).unwrap();
        assert_eq!(c.len(), 4);
        assert_eq!(c.cuts, vec![0, 1, 2, 3]);
        assert_eq!(c.lattice.labels, vec!["{}", "a", "b", "{a,b}"]);
        assert!(c.embedding_ok() && c.dense());
    }

    #[test]
    fn empty_poset_has_one_cut() {
        let c = dm_completion(&FinitePoset::antichain(&[])).unwrap();
        assert_eq!(c.cuts, vec![0]);
    }

    #[test]
    fn lattices_complete_to_themselves() {
        for seed in 0..10 {
            let m = random_model(
                seed,
                &ModelBounds {
                    max_states: 3,
                    ..Default::default()
                },
            );
            let l = FinLattice::powerset(&m).unwrap();
            let c = dm_completion(&FinitePoset::from_lattice(&l)).unwrap();
            assert!(isomorphic(&c.lattice, &l));
            assert!(c.embedding_ok() && c.dense());
        }
        let c = dm_completion(&FinitePoset::from_lattice(&FinLattice::chain(4))).unwrap();
        assert_eq!(c.len(), 4);
    }

    #[test]
    fn invalid_orders_rejected() {
        let e = || vec!["a".to_string(), "b".to_string()];
        assert!(FinitePoset::new(e(), vec![vec![true, true], vec![true, true]]).is_err());
        assert!(FinitePoset::new(e(), vec![vec![false, false], vec![false, true]]).is_err());
        assert!(FinitePoset::from_pairs(e(), &[(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn completion_is_idempotent() {
        for seed in 0..25 {
            let p = random_poset(seed, 6, 0.3);
            let c = dm_completion(&p).unwrap();
            assert!(c.embedding_ok() && c.dense(), "seed {seed}");
            let cc = dm_completion(&FinitePoset::from_lattice(&c.lattice)).unwrap();
            assert!(isomorphic(&cc.lattice, &c.lattice));
        }
    }
}
