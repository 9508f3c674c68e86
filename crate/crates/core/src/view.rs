//! Mutable view of a vertex set that keeps induced edge counts current
//! under single-vertex moves in `O(sum_i deg_i(v))`.

use crate::error::{Error, Result};
use crate::graph::{DensityProfile, TemporalGraph, VertexSet};

#[derive(Debug, Clone)]
pub struct IncrementalView<'g> {
    graph: &'g TemporalGraph,
    member: Vec<bool>,
    size: usize,
    edge_counts: Vec<u64>,
    /// `inside[i][v]`: neighbors of `v` in snapshot `i` that are members.
    inside: Vec<Vec<u32>>,
}

impl<'g> IncrementalView<'g> {
    pub fn new(graph: &'g TemporalGraph, set: &VertexSet) -> Result<Self> {
        let mut view = IncrementalView {
            graph,
            member: vec![false; graph.n()],
            size: 0,
            edge_counts: vec![0; graph.r()],
            inside: vec![vec![0; graph.n()]; graph.r()],
        };
        for v in set.iter() {
            view.add(v)?;
        }
        Ok(view)
    }

    pub fn graph(&self) -> &'g TemporalGraph {
        self.graph
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn contains(&self, v: usize) -> bool {
        self.member.get(v).copied().unwrap_or(false)
    }

    pub fn edge_counts(&self) -> &[u64] {
        &self.edge_counts
    }

    /// Number of members adjacent to `v` in snapshot `i`.
    pub fn inside_degree(&self, snapshot: usize, v: usize) -> u64 {
        u64::from(self.inside[snapshot][v])
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.graph.n() {
            return Err(Error::Input(format!("vertex {v} out of range (n = {})", self.graph.n())));
        }
        Ok(())
    }

    pub fn add(&mut self, v: usize) -> Result<()> {
        self.check_vertex(v)?;
        if self.member[v] {
            return Err(Error::Logic(format!("vertex {v} is already in the set")));
        }
        self.member[v] = true;
        self.size += 1;
        for i in 0..self.graph.r() {
            self.edge_counts[i] += u64::from(self.inside[i][v]);
            for &u in self.graph.neighbors(i, v) {
                self.inside[i][u] += 1;
            }
        }
        Ok(())
    }

    pub fn remove(&mut self, v: usize) -> Result<()> {
        self.check_vertex(v)?;
        if !self.member[v] {
            return Err(Error::Logic(format!("vertex {v} is not in the set")));
        }
        self.member[v] = false;
        self.size -= 1;
        for i in 0..self.graph.r() {
            self.edge_counts[i] -= u64::from(self.inside[i][v]);
            for &u in self.graph.neighbors(i, v) {
                self.inside[i][u] -= 1;
            }
        }
        Ok(())
    }

    /// Edge counts the set would have after toggling `v` in or out.
    pub fn toggled_counts(&self, v: usize, out: &mut Vec<u64>) {
        out.clear();
        let adding = !self.member[v];
        for i in 0..self.graph.r() {
            let delta = u64::from(self.inside[i][v]);
            out.push(if adding { self.edge_counts[i] + delta } else { self.edge_counts[i] - delta });
        }
    }

    pub fn set(&self) -> VertexSet {
        VertexSet::from_sorted_unchecked((0..self.graph.n()).filter(|&v| self.member[v]).collect())
    }

    pub fn profile(&self) -> DensityProfile {
        DensityProfile::from_counts(self.edge_counts.clone(), self.size)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn triangle() -> TemporalGraph {
        TemporalGraph::new(3, vec![vec![(0, 1), (1, 2), (0, 2)]]).unwrap()
    }

    #[test]
    fn add_and_remove_update_counts() {
        let g = triangle();
        let mut view = IncrementalView::new(&g, &VertexSet::new([0, 1])).unwrap();
        assert_eq!(view.edge_counts(), &[1]);
        view.add(2).unwrap();
        assert_eq!(view.edge_counts(), &[3]);

        let mut view = IncrementalView::new(&g, &VertexSet::new([0, 1, 2])).unwrap();
        view.remove(0).unwrap();
        assert_eq!(view.edge_counts(), &[1]);
    }

    #[test]
    fn double_moves_are_logic_errors() {
        let g = triangle();
        let mut view = IncrementalView::new(&g, &VertexSet::new([0])).unwrap();
        assert!(matches!(view.add(0), Err(Error::Logic(_))));
        assert!(matches!(view.remove(1), Err(Error::Logic(_))));
        assert!(view.add(7).is_err());
    }

    #[test]
    fn random_moves_match_recount() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 10;
        let mut snapshots = Vec::new();
        for _ in 0..3 {
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random_bool(0.4) {
                        edges.push((u, v));
                    }
                }
            }
            snapshots.push(edges);
        }
        let g = TemporalGraph::new(n, snapshots).unwrap();
        let mut view = IncrementalView::new(&g, &VertexSet::empty()).unwrap();
        for _ in 0..1000 {
            let v = rng.random_range(0..n);
            if view.contains(v) {
                view.remove(v).unwrap();
            } else {
                view.add(v).unwrap();
            }
        }
        let set = view.set();
        assert_eq!(view.profile(), g.profile(&set).unwrap());
    }
}
