//! Graph snapshots over a shared vertex set and the density quantities
//! defined on them.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{int, Rational};

/// Upper limit on `n * r`; keeps adversarial inputs from allocating
/// unbounded adjacency storage.
pub const MAX_CELLS: usize = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Snapshot {
    /// Normalized `(u, v)` with `u < v`, sorted.
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

/// A sequence of undirected simple graphs `G_0, ..., G_{r-1}` sharing the
/// vertex set `0..n`. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalGraph {
    n: usize,
    snapshots: Vec<Snapshot>,
}

impl TemporalGraph {
    /// Builds a graph, dropping repeated edges inside a snapshot.
    pub fn new(n: usize, snapshots: Vec<Vec<(usize, usize)>>) -> Result<Self> {
        Self::with_dedup(n, snapshots).map(|(graph, _)| graph)
    }

    /// Like [`TemporalGraph::new`] but also returns how many duplicate
    /// edges were dropped.
    pub fn with_dedup(n: usize, snapshots: Vec<Vec<(usize, usize)>>) -> Result<(Self, usize)> {
        if n == 0 {
            return Err(Error::Input("a graph needs at least one vertex".into()));
        }
        if snapshots.is_empty() {
            return Err(Error::Input("a graph needs at least one snapshot".into()));
        }
        if n.saturating_mul(snapshots.len()) > MAX_CELLS {
            return Err(Error::Input(format!(
                "graph too large: n = {n}, r = {} exceeds {MAX_CELLS} vertex-snapshot cells",
                snapshots.len()
            )));
        }
        let mut duplicates = 0;
        let mut built = Vec::with_capacity(snapshots.len());
        for (t, edges) in snapshots.into_iter().enumerate() {
            let mut seen = HashSet::with_capacity(edges.len());
            let mut normalized = Vec::with_capacity(edges.len());
            for (u, v) in edges {
                if u == v {
                    return Err(Error::Input(format!("self-loop on vertex {u} in snapshot {t}")));
                }
                if u >= n || v >= n {
                    return Err(Error::Input(format!(
                        "edge ({u}, {v}) in snapshot {t} has an endpoint >= n = {n}"
                    )));
                }
                let key = (u.min(v), u.max(v));
                if seen.insert(key) {
                    normalized.push(key);
                } else {
                    duplicates += 1;
                }
            }
            normalized.sort_unstable();
            let mut adj = vec![Vec::new(); n];
            for &(u, v) in &normalized {
                adj[u].push(v);
                adj[v].push(u);
            }
            built.push(Snapshot { edges: normalized, adj });
        }
        Ok((TemporalGraph { n, snapshots: built }, duplicates))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of snapshots.
    pub fn r(&self) -> usize {
        self.snapshots.len()
    }

    /// Sorted edges `(u, v)`, `u < v`, of one snapshot.
    pub fn edges(&self, snapshot: usize) -> &[(usize, usize)] {
        &self.snapshots[snapshot].edges
    }

    pub fn neighbors(&self, snapshot: usize, v: usize) -> &[usize] {
        &self.snapshots[snapshot].adj[v]
    }

    pub fn degree(&self, snapshot: usize, v: usize) -> usize {
        self.snapshots[snapshot].adj[v].len()
    }

    /// Degree of `v` summed over all snapshots.
    pub fn total_degree(&self, v: usize) -> usize {
        self.snapshots.iter().map(|s| s.adj[v].len()).sum()
    }

    pub fn edge_count(&self, snapshot: usize) -> usize {
        self.snapshots[snapshot].edges.len()
    }

    pub fn total_edge_count(&self) -> usize {
        self.snapshots.iter().map(|s| s.edges.len()).sum()
    }

    pub fn has_edge(&self, snapshot: usize, u: usize, v: usize) -> bool {
        let key = (u.min(v), u.max(v));
        self.snapshots[snapshot].edges.binary_search(&key).is_ok()
    }

    /// Edge lists per snapshot, suitable for rebuilding the graph.
    pub fn snapshot_edges(&self) -> Vec<Vec<(usize, usize)>> {
        self.snapshots.iter().map(|s| s.edges.clone()).collect()
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::from_sorted_unchecked((0..self.n).collect())
    }

    fn check_set(&self, set: &VertexSet) -> Result<()> {
        match set.members().last() {
            Some(&v) if v >= self.n => Err(Error::Input(format!(
                "vertex {v} is out of range for a graph with n = {}",
                self.n
            ))),
            _ => Ok(()),
        }
    }

    fn check_snapshot(&self, snapshot: usize) -> Result<()> {
        if snapshot >= self.r() {
            return Err(Error::Input(format!(
                "snapshot {snapshot} is out of range for r = {}",
                self.r()
            )));
        }
        Ok(())
    }

    fn membership(&self, set: &VertexSet) -> Vec<bool> {
        let mut mask = vec![false; self.n];
        for &v in set.members() {
            mask[v] = true;
        }
        mask
    }

    fn induced_edges_with(&self, snapshot: usize, set: &VertexSet, mask: &[bool]) -> u64 {
        let adj = &self.snapshots[snapshot].adj;
        set.members()
            .iter()
            .map(|&u| adj[u].iter().filter(|&&v| v > u && mask[v]).count() as u64)
            .sum()
    }

    /// `m(S, G_i)`: number of edges of snapshot `i` with both ends in `set`.
    pub fn induced_edges(&self, snapshot: usize, set: &VertexSet) -> Result<u64> {
        self.check_snapshot(snapshot)?;
        self.check_set(set)?;
        let mask = self.membership(set);
        Ok(self.induced_edges_with(snapshot, set, &mask))
    }

    /// Induced edge counts of every snapshot.
    pub fn induced_edge_counts(&self, set: &VertexSet) -> Result<Vec<u64>> {
        self.check_set(set)?;
        let mask = self.membership(set);
        Ok((0..self.r()).map(|i| self.induced_edges_with(i, set, &mask)).collect())
    }

    /// `dens(S, G_i) = m(S, G_i) / |S|`, zero for the empty set.
    pub fn density(&self, snapshot: usize, set: &VertexSet) -> Result<Rational> {
        let m = self.induced_edges(snapshot, set)?;
        Ok(density_of(m, set.len()))
    }

    /// Full per-snapshot density profile of `set`.
    pub fn profile(&self, set: &VertexSet) -> Result<DensityProfile> {
        Ok(DensityProfile::from_counts(self.induced_edge_counts(set)?, set.len()))
    }
}

pub(crate) fn density_of(edges: u64, size: usize) -> Rational {
    if size == 0 {
        Rational::from_integer(0)
    } else {
        Rational::new(edges as i128, size as i128)
    }
}

/// A candidate solution: a sorted set of vertex ids. May be empty.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        VertexSet(members)
    }

    pub fn empty() -> Self {
        VertexSet(Vec::new())
    }

    pub(crate) fn from_sorted_unchecked(members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        VertexSet(members)
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        let (mut i, mut j, mut common) = (0, 0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    common += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        common
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::new(iter)
    }
}

/// Induced edge counts and densities of one vertex set over all snapshots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityProfile {
    pub size: usize,
    /// `m(S, G_i)` per snapshot.
    pub edge_counts: Vec<u64>,
    /// `dens(S, G_i)` per snapshot.
    pub densities: Vec<Rational>,
    /// Sum of the per-snapshot densities.
    pub total: Rational,
    /// Max minus min per-snapshot density.
    pub gap: Rational,
    /// Max minus min per-snapshot induced edge count.
    pub edge_gap: u64,
}

impl DensityProfile {
    pub fn from_counts(edge_counts: Vec<u64>, size: usize) -> Self {
        let densities: Vec<Rational> = edge_counts.iter().map(|&m| density_of(m, size)).collect();
        let total_edges: u64 = edge_counts.iter().sum();
        let max = edge_counts.iter().copied().max().unwrap_or(0);
        let min = edge_counts.iter().copied().min().unwrap_or(0);
        let edge_gap = max - min;
        DensityProfile {
            size,
            total: density_of(total_edges, size),
            gap: density_of(edge_gap, size),
            edge_gap,
            densities,
            edge_counts,
        }
    }

    pub fn total_edges(&self) -> u64 {
        self.edge_counts.iter().sum()
    }

    pub fn min_density(&self) -> Rational {
        self.densities.iter().copied().min().unwrap_or_else(|| int(0))
    }

    pub fn max_density(&self) -> Rational {
        self.densities.iter().copied().max().unwrap_or_else(|| int(0))
    }

    pub fn avg_density(&self) -> Rational {
        if self.densities.is_empty() {
            int(0)
        } else {
            self.total / int(self.densities.len() as i128)
        }
    }
}
