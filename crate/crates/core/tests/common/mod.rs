//! Brute-force reference computations shared by the integration tests.
//! Everything here works on raw edge lists and subset bitmasks; nothing
//! is computed with the library's own density code.

#![allow(dead_code)]

use fairdense::{Rational, TemporalGraph, VertexSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random instance kept next to the edge lists it was built from.
#[derive(Clone)]
pub struct Case {
    pub n: usize,
    pub snapshots: Vec<Vec<(usize, usize)>>,
    pub graph: TemporalGraph,
}

impl std::fmt::Debug for Case {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Case {{ n: {}, snapshots: {:?} }}", self.n, self.snapshots)
    }
}

impl Case {
    pub fn new(n: usize, snapshots: Vec<Vec<(usize, usize)>>) -> Self {
        let graph = TemporalGraph::new(n, snapshots.clone()).unwrap();
        Case { n, snapshots, graph }
    }

    /// Every snapshot an independent `G(n, p)`, with `p` drawn per instance.
    pub fn random(rng: &mut ChaCha8Rng, n: usize, r: usize) -> Self {
        let p: f64 = rng.random_range(0.15..0.85);
        let snapshots = (0..r)
            .map(|_| {
                let mut edges = Vec::new();
                for u in 0..n {
                    for v in u + 1..n {
                        if rng.random_bool(p) {
                            edges.push((u, v));
                        }
                    }
                }
                edges
            })
            .collect();
        Case::new(n, snapshots)
    }

    pub fn r(&self) -> usize {
        self.snapshots.len()
    }

    /// Edge counts of the subgraph induced by `mask` in every snapshot.
    pub fn counts(&self, mask: u32) -> Vec<i128> {
        self.snapshots
            .iter()
            .map(|edges| edges.iter().filter(|&&(u, v)| mask >> u & 1 == 1 && mask >> v & 1 == 1).count() as i128)
            .collect()
    }

    pub fn stats(&self, mask: u32) -> Stats {
        let size = mask.count_ones() as i128;
        let counts = self.counts(mask);
        let d = |m: i128| Rational::new(m, size);
        let max = *counts.iter().max().unwrap();
        let min = *counts.iter().min().unwrap();
        Stats { total: d(counts.iter().sum()), gap: d(max - min), min: d(min) }
    }

    /// Statistics of every non-empty subset, computed once.
    pub fn oracle(&self) -> Oracle {
        Oracle { table: (1u32..1 << self.n).map(|mask| self.stats(mask)).collect() }
    }

    pub fn stats_of(&self, set: &VertexSet) -> Option<Stats> {
        let mask = set.iter().fold(0u32, |m, v| m | 1 << v);
        (mask != 0).then(|| self.stats(mask))
    }
}

pub struct Oracle {
    table: Vec<Stats>,
}

impl Oracle {
    pub fn tds(&self) -> Rational {
        self.table.iter().map(|s| s.total).max().unwrap()
    }

    pub fn fds(&self, alpha: &Rational) -> Rational {
        self.table.iter().filter(|s| s.gap <= *alpha).map(|s| s.total).max().unwrap()
    }

    /// `None` when no set reaches the density floor.
    pub fn sds(&self, sigma: &Rational) -> Option<Rational> {
        self.table.iter().filter(|s| s.total >= *sigma).map(|s| s.gap).min()
    }

    pub fn mds(&self) -> Rational {
        self.table.iter().map(|s| s.min).max().unwrap()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stats {
    pub total: Rational,
    pub gap: Rational,
    pub min: Rational,
}

/// The fixed pool of small random instances used by several suites.
pub fn pool(count: usize, seed: u64) -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(4..=12);
            let r = rng.random_range(1..=3);
            Case::random(&mut rng, n, r)
        })
        .collect()
}

pub fn q(num: i128, den: i128) -> Rational {
    Rational::new(num, den)
}

/// Triangle test by direct triple enumeration.
pub fn has_triangle(n: usize, edges: &[(usize, usize)]) -> bool {
    let adj = |a: usize, b: usize| edges.iter().any(|&(u, v)| (u, v) == (a, b) || (u, v) == (b, a));
    (0..n).any(|a| (a + 1..n).any(|b| adj(a, b) && (b + 1..n).any(|c| adj(a, c) && adj(b, c))))
}
