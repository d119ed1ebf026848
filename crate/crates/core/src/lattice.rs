//! Finite lattices with explicit order, join and meet tables.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::kripke::{KripkeModel, StateSet};
use crate::term::Name;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("order is not reflexive, antisymmetric and transitive")]
    NotAPartialOrder,
    #[error("elements {0} and {1} have no least upper bound")]
    NoJoin(usize, usize),
    #[error("elements {0} and {1} have no greatest lower bound")]
    NoMeet(usize, usize),
    #[error("the empty lattice is not allowed")]
    Empty,
    #[error("carrier of {0} elements is too large")]
    TooLarge(usize),
}

/// Elements are `0..len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinLattice {
    leq: Vec<Vec<bool>>,
    join: Vec<Vec<usize>>,
    meet: Vec<Vec<usize>>,
    pub bot: usize,
    pub top: usize,
    /// Named unary operations (modalities).
    pub ops: BTreeMap<Name, Vec<usize>>,
    pub labels: Vec<String>,
}

impl FinLattice {
    pub fn from_order(leq: Vec<Vec<bool>>) -> Result<FinLattice, LatticeError> {
        let n = leq.len();
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        for i in 0..n {
            if !leq[i][i] {
                return Err(LatticeError::NotAPartialOrder);
            }
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(LatticeError::NotAPartialOrder);
                }
                for k in 0..n {
                    if leq[i][j] && leq[j][k] && !leq[i][k] {
                        return Err(LatticeError::NotAPartialOrder);
                    }
                }
            }
        }
        let mut join = vec![vec![0; n]; n];
        let mut meet = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                let ub: Vec<usize> = (0..n).filter(|&k| leq[i][k] && leq[j][k]).collect();
                join[i][j] = *ub
                    .iter()
                    .find(|&&k| ub.iter().all(|&u| leq[k][u]))
                    .ok_or(LatticeError::NoJoin(i, j))?;
                let lb: Vec<usize> = (0..n).filter(|&k| leq[k][i] && leq[k][j]).collect();
                meet[i][j] = *lb
                    .iter()
                    .find(|&&k| lb.iter().all(|&l| leq[l][k]))
                    .ok_or(LatticeError::NoMeet(i, j))?;
            }
        }
        let bot = (0..n)
            .find(|&b| (0..n).all(|k| leq[b][k]))
            .expect("finite lattice has bottom");
        let top = (0..n)
            .find(|&t| (0..n).all(|k| leq[k][t]))
            .expect("finite lattice has top");
        let labels = (0..n).map(|i| i.to_string()).collect();
        Ok(FinLattice {
            leq,
            join,
            meet,
            bot,
            top,
            ops: BTreeMap::new(),
            labels,
        })
    }

    /// The chain `0 < 1 < … < k-1`.
    pub fn chain(k: usize) -> FinLattice {
        FinLattice::from_order((0..k).map(|i| (0..k).map(|j| i <= j).collect()).collect())
            .expect("chain")
    }

    /// Powerset algebra of a model: element `i` is the state set with mask
    /// `i`; each action contributes its diamond as a named operation.
    pub fn powerset(m: &KripkeModel) -> Result<FinLattice, LatticeError> {
        let n = m.len();
        if n > 6 {
            return Err(LatticeError::TooLarge(1 << n));
        }
        let size = 1usize << n;
        let leq = (0..size)
            .map(|i| (0..size).map(|j| i & !j == 0).collect())
            .collect();
        let mut l = FinLattice::from_order(leq)?;
        for a in m.relations.keys() {
            let table = (0..size)
                .map(|z| m.dia(a, StateSet(z as u64)).expect("declared").0 as usize)
                .collect();
            l.ops.insert(a.clone(), table);
        }
        l.labels = (0..size).map(|z| m.show(StateSet(z as u64))).collect();
        Ok(l)
    }

    pub fn len(&self) -> usize {
        self.leq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leq.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    pub fn join_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.bot, |a, b| self.join(a, b))
    }

    pub fn meet_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.top, |a, b| self.meet(a, b))
    }

    /// Greatest `x` with `f(x) ≤ m`, if the set of such `x` has a maximum.
    pub fn upper_adjoint_of(&self, f: impl Fn(usize) -> usize, m: usize) -> Option<usize> {
        let below: Vec<usize> = (0..self.len()).filter(|&x| self.leq(f(x), m)).collect();
        below
            .iter()
            .copied()
            .find(|&c| below.iter().all(|&x| self.leq(x, c)))
    }

    /// Relative pseudo-complement `k → m`.
    pub fn implies(&self, k: usize, m: usize) -> Option<usize> {
        self.upper_adjoint_of(|x| self.meet(k, x), m)
    }

    /// Maximal elements of a set.
    pub fn maximal(&self, xs: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = xs
            .iter()
            .copied()
            .filter(|&x| !xs.iter().any(|&y| y != x && self.leq(x, y)))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn is_distributive(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| {
            (0..n).all(|b| {
                (0..n).all(|c| {
                    self.meet(a, self.join(b, c)) == self.join(self.meet(a, b), self.meet(a, c))
                })
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::example_m1;

    #[test]
    fn chain_tables() {
        let c = FinLattice::chain(3);
        assert_eq!((c.bot, c.top), (0, 2));
        assert_eq!(c.join(0, 2), 2);
        assert_eq!(c.meet(1, 2), 1);
        assert_eq!(c.implies(2, 1), Some(1));
        assert_eq!(c.implies(1, 1), Some(2));
    }

    #[test]
    fn non_lattices_rejected() {
        // two incomparable maximal elements
        let leq = vec![
            vec![true, true, true],
            vec![false, true, false],
            vec![false, false, true],
        ];
        assert!(matches!(
            FinLattice::from_order(leq),
            Err(LatticeError::NoJoin(1, 2))
        ));
        let cyc = vec![vec![true, true], vec![true, true]];
        assert_eq!(
            FinLattice::from_order(cyc),
            Err(LatticeError::NotAPartialOrder)
        );
    }

    #[test]
    fn powerset_of_m1() {
        let l = FinLattice::powerset(&example_m1()).unwrap();
        assert_eq!(l.len(), 4);
        assert_eq!(l.ops["a"], vec![0, 0, 3, 3]);
        assert!(l.is_distributive());
        let dia = |x: usize| l.ops["a"][x];
        assert_eq!(l.upper_adjoint_of(dia, 0b10), Some(0b01));
        assert_eq!(l.upper_adjoint_of(dia, 0b11), Some(0b11));
    }
}
