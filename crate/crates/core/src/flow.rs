//! Exact max-flow / min-cut on integer capacities (Dinic).

use std::collections::VecDeque;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    rev: usize,
    cap: i128,
    original: i128,
}

/// Directed network with a distinguished source and sink and non-negative
/// integer arc capacities.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    arcs: Vec<Vec<Arc>>,
    source: usize,
    sink: usize,
}

/// Result of a max-flow computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinCut {
    pub value: i128,
    /// Nodes on the source side of the minimal minimum cut, excluding the
    /// source itself, in increasing order.
    pub source_side: Vec<usize>,
}

impl FlowNetwork {
    pub fn new(nodes: usize, source: usize, sink: usize) -> Self {
        assert!(source < nodes && sink < nodes && source != sink);
        FlowNetwork { arcs: vec![Vec::new(); nodes], source, sink }
    }

    pub fn nodes(&self) -> usize {
        self.arcs.len()
    }

    pub fn add_arc(&mut self, from: usize, to: usize, cap: i128) {
        assert!(cap >= 0, "negative capacity {cap}");
        let rev_from = self.arcs[to].len() + usize::from(from == to);
        let rev_to = self.arcs[from].len();
        self.arcs[from].push(Arc { to, rev: rev_from, cap, original: cap });
        self.arcs[to].push(Arc { to: from, rev: rev_to, cap: 0, original: 0 });
    }

    fn levels(&self) -> Option<Vec<usize>> {
        let mut level = vec![usize::MAX; self.nodes()];
        level[self.source] = 0;
        let mut queue = VecDeque::from([self.source]);
        while let Some(u) = queue.pop_front() {
            for arc in &self.arcs[u] {
                if arc.cap > 0 && level[arc.to] == usize::MAX {
                    level[arc.to] = level[u] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
        (level[self.sink] != usize::MAX).then_some(level)
    }

    fn push(&mut self, u: usize, limit: i128, level: &[usize], next: &mut [usize]) -> i128 {
        if u == self.sink {
            return limit;
        }
        while next[u] < self.arcs[u].len() {
            let Arc { to, rev, cap, .. } = self.arcs[u][next[u]];
            if cap > 0 && level[to] == level[u] + 1 {
                let pushed = self.push(to, limit.min(cap), level, next);
                if pushed > 0 {
                    self.arcs[u][next[u]].cap -= pushed;
                    self.arcs[to][rev].cap += pushed;
                    return pushed;
                }
            }
            next[u] += 1;
        }
        0
    }

    /// Runs max-flow to completion and returns the flow value together with
    /// the source side of the minimal minimum cut.
    pub fn max_flow_min_cut(&mut self) -> MinCut {
        let mut value = 0i128;
        while let Some(level) = self.levels() {
            let mut next = vec![0; self.nodes()];
            loop {
                let pushed = self.push(self.source, i128::MAX, &level, &mut next);
                if pushed == 0 {
                    break;
                }
                value += pushed;
            }
        }
        debug_assert!(self.conserves_flow());

        let mut seen = vec![false; self.nodes()];
        seen[self.source] = true;
        let mut queue = VecDeque::from([self.source]);
        while let Some(u) = queue.pop_front() {
            for arc in &self.arcs[u] {
                if arc.cap > 0 && !seen[arc.to] {
                    seen[arc.to] = true;
                    queue.push_back(arc.to);
                }
            }
        }
        let source_side = (0..self.nodes()).filter(|&v| v != self.source && seen[v]).collect();
        MinCut { value, source_side }
    }

    /// Flow on each forward arc is `original - residual`; checks capacity
    /// bounds and conservation at every node except source and sink.
    pub fn conserves_flow(&self) -> bool {
        let mut balance = vec![0i128; self.nodes()];
        for (u, arcs) in self.arcs.iter().enumerate() {
            for arc in arcs {
                let flow = arc.original - arc.cap;
                if arc.original > 0 && !(0..=arc.original).contains(&flow) {
                    return false;
                }
                if arc.original > 0 {
                    balance[u] -= flow;
                    balance[arc.to] += flow;
                }
            }
        }
        balance
            .iter()
            .enumerate()
            .all(|(v, &b)| v == self.source || v == self.sink || b == 0)
    }
}
