use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::FinitePoset;
use crate::lattice::FinLattice;

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("e{i}")).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// One representative per isomorphism class of posets on `n ≤ 6` elements.
pub fn posets_up_to_iso(n: usize) -> Vec<FinitePoset> {
    assert!(n <= 6, "enumeration is limited to 6 elements");
    // Every poset has a linear extension, so strict pairs `i < j` suffice.
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for bits in 0..1u64 << pairs.len() {
        let rel: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| bits >> k & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        let closed = rel
            .iter()
            .all(|&(a, b)| rel.iter().all(|&(c, d)| b != c || rel.contains(&(a, d))));
        if !closed {
            continue;
        }
        let key = perms
            .iter()
            .map(|pi| {
                let mut code: Vec<(usize, usize)> =
                    rel.iter().map(|&(a, b)| (pi[a], pi[b])).collect();
                code.sort_unstable();
                code
            })
            .min()
            .expect("at least one permutation");
        if seen.insert(key) {
            out.push(FinitePoset::from_pairs(names(n), &rel).expect("strict order"));
        }
    }
    out
}

/// Random poset: each pair `i < j` is related with probability `density`,
/// then transitively closed.
pub fn random_poset(seed: u64, n: usize, density: f64) -> FinitePoset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|_| rng.gen_bool(density))
        .collect();
    FinitePoset::from_pairs(names(n), &pairs).expect("acyclic")
}

fn profile(l: &FinLattice, x: usize) -> (usize, usize) {
    (
        (0..l.len()).filter(|&y| l.leq(y, x)).count(),
        (0..l.len()).filter(|&y| l.leq(x, y)).count(),
    )
}

/// Order isomorphism, by backtracking over elements with matching
/// (down-set size, up-set size) profiles.
pub fn isomorphic(a: &FinLattice, b: &FinLattice) -> bool {
    let n = a.len();
    if n != b.len() {
        return false;
    }
    let pa: Vec<_> = (0..n).map(|x| profile(a, x)).collect();
    let pb: Vec<_> = (0..n).map(|x| profile(b, x)).collect();
    let (mut sa, mut sb) = (pa.clone(), pb.clone());
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return false;
    }
    fn extend(
        a: &FinLattice,
        b: &FinLattice,
        pa: &[(usize, usize)],
        pb: &[(usize, usize)],
        map: &mut Vec<usize>,
        used: &mut [bool],
    ) -> bool {
        let x = map.len();
        if x == pa.len() {
            return true;
        }
        for y in 0..pb.len() {
            if used[y] || pa[x] != pb[y] {
                continue;
            }
            if (0..x).all(|z| a.leq(z, x) == b.leq(map[z], y) && a.leq(x, z) == b.leq(y, map[z])) {
                used[y] = true;
                map.push(y);
                if extend(a, b, pa, pb, map, used) {
                    return true;
                }
                map.pop();
                used[y] = false;
            }
        }
        false
    }
    extend(a, b, &pa, &pb, &mut Vec::new(), &mut vec![false; n])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poset_counts() {
        let counts: Vec<usize> = (0..=5).map(|n| posets_up_to_iso(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 16, 63]);
    }

    #[test]
    fn iso_distinguishes() {
        let c4 = FinLattice::chain(4);
        let sq = FinLattice::from_order(vec![
            vec![true, true, true, true],
            vec![false, true, false, true],
            vec![false, false, true, true],
            vec![false, false, false, true],
        ])
        .unwrap();
        assert!(isomorphic(&c4, &c4));
        assert!(!isomorphic(&c4, &sq));
    }
}
