//! The hidden total order and its counted comparison interface.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Dag;

/// Ground-truth linear order answering counted `precedes` queries.
///
/// Every comparison made by the sorter and the baselines goes through
/// [`LinearOracle::precedes`], so `query_count` is the exact query total.
#[derive(Debug, Clone)]
pub struct LinearOracle {
    rank: Vec<usize>,
    queries: u64,
}

impl LinearOracle {
    /// `rank[v]` is the position of vertex `v` in the order. When `g` is
    /// given, every edge must go from a lower to a higher rank.
    pub fn from_ranks(rank: Vec<usize>, g: Option<&Dag>) -> Result<Self> {
        let n = rank.len();
        let mut seen = vec![false; n];
        for (v, &r) in rank.iter().enumerate() {
            if r >= n {
                return Err(Error::InvalidPermutation {
                    n,
                    reason: format!("rank {r} of vertex {v} out of range"),
                });
            }
            if std::mem::replace(&mut seen[r], true) {
                return Err(Error::InvalidPermutation {
                    n,
                    reason: format!("rank {r} assigned twice"),
                });
            }
        }
        let oracle = LinearOracle { rank, queries: 0 };
        if let Some(g) = g {
            oracle.validate_extension(g)?;
        }
        Ok(oracle)
    }

    /// Builds the oracle whose order is `order` (first element smallest).
    pub fn from_order(order: &[usize], g: Option<&Dag>) -> Result<Self> {
        let n = order.len();
        let mut rank = vec![usize::MAX; n];
        for (pos, &v) in order.iter().enumerate() {
            if v >= n {
                return Err(Error::InvalidPermutation {
                    n,
                    reason: format!("vertex {v} out of range"),
                });
            }
            rank[v] = pos;
        }
        Self::from_ranks(rank, g)
    }

    pub fn validate_extension(&self, g: &Dag) -> Result<()> {
        if g.n() != self.rank.len() {
            return Err(Error::InvalidPermutation {
                n: self.rank.len(),
                reason: format!("graph has {} vertices", g.n()),
            });
        }
        match g.edges().find(|&(u, v)| self.rank[u] > self.rank[v]) {
            Some((from, to)) => Err(Error::NotAnExtension { from, to }),
            None => Ok(()),
        }
    }

    /// Counted query: is `x` before `y`?
    pub fn precedes(&mut self, x: usize, y: usize) -> Result<bool> {
        if x == y {
            return Err(Error::SameElement(x));
        }
        self.queries += 1;
        Ok(self.rank[x] < self.rank[y])
    }

    pub fn query_count(&self) -> u64 {
        self.queries
    }

    pub fn n(&self) -> usize {
        self.rank.len()
    }

    /// Uncounted rank lookup, for post-hoc verification only.
    pub fn rank(&self, v: usize) -> usize {
        self.rank[v]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.rank
    }

    /// The full order, smallest first.
    pub fn sorted_order(&self) -> Vec<usize> {
        let mut order = vec![0; self.rank.len()];
        for (v, &r) in self.rank.iter().enumerate() {
            order[r] = v;
        }
        order
    }

    /// Fresh oracle over the same order with the counter reset.
    pub fn fresh(&self) -> Self {
        LinearOracle {
            rank: self.rank.clone(),
            queries: 0,
        }
    }

    /// Parses the permutation format: line `i` holds the rank of vertex `i`.
    pub fn parse_permutation(text: &str, g: Option<&Dag>) -> Result<Self> {
        let mut rank = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let r = line.parse().map_err(|_| Error::Parse {
                line: i + 1,
                msg: format!("not a rank: {line:?}"),
            })?;
            rank.push(r);
        }
        Self::from_ranks(rank, g)
    }

    pub fn to_permutation(&self) -> String {
        self.rank.iter().map(|r| format!("{r}\n")).collect()
    }
}

/// Random topological order: repeatedly pick a uniformly random current
/// source. Deterministic per seed. Not uniform over linear extensions.
pub fn sample_extension(g: &Dag, seed: u64) -> LinearOracle {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = g.n();
    let mut indeg: Vec<usize> = (0..n).map(|v| g.in_neighbors(v).len()).collect();
    let mut sources: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut rank = vec![0; n];
    let mut next = 0;
    while !sources.is_empty() {
        let u = sources.swap_remove(rng.gen_range(0..sources.len()));
        rank[u] = next;
        next += 1;
        for &v in g.out_neighbors(u) {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                sources.push(v);
            }
        }
    }
    LinearOracle { rank, queries: 0 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn chain(n: usize) -> Dag {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Dag::new(n, &edges).unwrap()
    }

    #[test]
    fn from_ranks_validates() {
        let g = chain(3);
        assert!(LinearOracle::from_ranks(vec![0, 1, 2], Some(&g)).is_ok());
        assert_eq!(
            LinearOracle::from_ranks(vec![1, 0, 2], Some(&g)).unwrap_err(),
            Error::NotAnExtension { from: 0, to: 1 }
        );
        let g = Dag::new(4, &[(0, 1), (1, 2)]).unwrap();
        assert!(LinearOracle::from_ranks(vec![0, 2, 3, 1], Some(&g)).is_ok());

        assert!(matches!(
            LinearOracle::from_ranks(vec![0, 0, 1], None),
            Err(Error::InvalidPermutation { .. })
        ));
        assert!(matches!(
            LinearOracle::from_ranks(vec![0, 3, 1], None),
            Err(Error::InvalidPermutation { .. })
        ));
    }

    #[test]
    fn precedes_counts() {
        let mut o = LinearOracle::from_ranks(vec![0, 1, 2], None).unwrap();
        assert!(o.precedes(0, 2).unwrap());
        assert_eq!(o.query_count(), 1);
        assert!(!o.precedes(2, 1).unwrap());
        assert_eq!(o.query_count(), 2);
        assert_eq!(o.precedes(1, 1), Err(Error::SameElement(1)));
        assert_eq!(o.query_count(), 2);

        let mut o = LinearOracle::from_ranks(vec![2, 1, 0], None).unwrap();
        assert!(!o.precedes(0, 1).unwrap());
    }

    #[test]
    fn strict_total_order_spot_check() {
        let g = Dag::new(9, &[(0, 4), (2, 7), (4, 8)]).unwrap();
        let mut o = sample_extension(&g, 11);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let (a, b, c) = (rng.gen_range(0..9), rng.gen_range(0..9), rng.gen_range(0..9));
            if a == b || b == c || a == c {
                continue;
            }
            let ab = o.precedes(a, b).unwrap();
            assert_ne!(ab, o.precedes(b, a).unwrap());
            if ab && o.precedes(b, c).unwrap() {
                assert!(o.precedes(a, c).unwrap());
            }
        }
    }

    #[test]
    fn sample_chain_is_unique() {
        let g = chain(4);
        for seed in 0..20 {
            assert_eq!(sample_extension(&g, seed).ranks(), &[0, 1, 2, 3]);
        }
    }

    #[test]
    fn sample_edgeless_hits_all_permutations() {
        let g = Dag::new(3, &[]).unwrap();
        let seen: HashSet<Vec<usize>> = (0..200)
            .map(|s| sample_extension(&g, s).ranks().to_vec())
            .collect();
        assert_eq!(seen.len(), 6);
    }

    #[test]
    fn sample_respects_edge() {
        let g = Dag::new(3, &[(0, 1)]).unwrap();
        let seen: HashSet<Vec<usize>> = (0..1000)
            .map(|s| {
                let o = sample_extension(&g, s);
                assert!(o.validate_extension(&g).is_ok());
                o.sorted_order()
            })
            .collect();
        let expect: HashSet<Vec<usize>> =
            [vec![0, 1, 2], vec![0, 2, 1], vec![2, 0, 1]].into_iter().collect();
        assert_eq!(seen, expect);
    }

    #[test]
    fn sample_is_deterministic() {
        let g = Dag::new(8, &[(0, 3), (1, 3), (3, 6)]).unwrap();
        assert_eq!(sample_extension(&g, 9).ranks(), sample_extension(&g, 9).ranks());
    }

    #[test]
    fn permutation_format() {
        let o = LinearOracle::parse_permutation("1\n0\n# x\n2\n", None).unwrap();
        assert_eq!(o.ranks(), &[1, 0, 2]);
        assert_eq!(o.sorted_order(), vec![1, 0, 2]);
        let back = LinearOracle::parse_permutation(&o.to_permutation(), None).unwrap();
        assert_eq!(back.ranks(), o.ranks());
        assert!(matches!(
            LinearOracle::parse_permutation("0\nbanana\n", None),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
