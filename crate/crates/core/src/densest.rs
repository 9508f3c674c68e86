//! Total-density (TDS) solving: the snapshot sequence is flattened into one
//! weighted graph whose densest subgraph is found exactly with parametric
//! min-cuts, plus a greedy peeling baseline.

use std::collections::{BTreeSet, HashMap};
use std::time::Instant;

use crate::flow::FlowNetwork;
use crate::graph::{TemporalGraph, VertexSet};
use crate::rational::{int, parts, ratio, snapped_midpoint, Rational};
use crate::report::{Certificate, Method, Problem, SolveReport, TraceStep};

/// Single graph whose edge weights count the snapshots containing the edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<(usize, usize, u64)>,
    adj: Vec<Vec<(usize, u64)>>,
    wdeg: Vec<u64>,
    total: u64,
}

impl WeightedGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges `(u, v, w)` with `u < v`, sorted by endpoints.
    pub fn edges(&self) -> &[(usize, usize, u64)] {
        &self.edges
    }

    pub fn weight(&self, u: usize, v: usize) -> u64 {
        let key = (u.min(v), u.max(v));
        self.edges
            .binary_search_by(|&(a, b, _)| (a, b).cmp(&key))
            .map(|i| self.edges[i].2)
            .unwrap_or(0)
    }

    pub fn weighted_degree(&self, v: usize) -> u64 {
        self.wdeg[v]
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, u64)] {
        &self.adj[v]
    }

    /// Sum of all edge weights.
    pub fn total_weight(&self) -> u64 {
        self.total
    }

    /// Total weight of edges with both ends in `set`.
    pub fn induced_weight(&self, set: &VertexSet) -> u64 {
        let mut mask = vec![false; self.n];
        for v in set.iter() {
            mask[v] = true;
        }
        self.edges.iter().filter(|&&(u, v, _)| mask[u] && mask[v]).map(|e| e.2).sum()
    }
}

pub fn flatten(graph: &TemporalGraph) -> WeightedGraph {
    let mut weights: HashMap<(usize, usize), u64> = HashMap::new();
    for i in 0..graph.r() {
        for &edge in graph.edges(i) {
            *weights.entry(edge).or_default() += 1;
        }
    }
    let mut edges: Vec<_> = weights.into_iter().map(|((u, v), w)| (u, v, w)).collect();
    edges.sort_unstable();
    let n = graph.n();
    let mut adj = vec![Vec::new(); n];
    let mut wdeg = vec![0; n];
    for &(u, v, w) in &edges {
        adj[u].push((v, w));
        adj[v].push((u, w));
        wdeg[u] += w;
        wdeg[v] += w;
    }
    let total = edges.iter().map(|e| e.2).sum();
    WeightedGraph { n, edges, adj, wdeg, total }
}

/// Solves `max_S W(S) - gamma |S|` with a single min-cut and returns the
/// minimal maximizer; it is non-empty iff some set has density above
/// `gamma`.
pub fn densest_cut(wg: &WeightedGraph, gamma: &Rational) -> VertexSet {
    let (p, q) = parts(gamma);
    let n = wg.n();
    let big = q * wg.total_weight() as i128;
    let (source, sink) = (n, n + 1);
    let mut net = FlowNetwork::new(n + 2, source, sink);
    for v in 0..n {
        net.add_arc(source, v, big);
        net.add_arc(v, sink, big + 2 * p - q * wg.weighted_degree(v) as i128);
    }
    for &(u, v, w) in wg.edges() {
        net.add_arc(u, v, q * w as i128);
        net.add_arc(v, u, q * w as i128);
    }
    VertexSet::from_sorted_unchecked(net.max_flow_min_cut().source_side)
}

fn weighted_density(wg: &WeightedGraph, set: &VertexSet) -> Rational {
    if set.is_empty() {
        int(0)
    } else {
        ratio(wg.induced_weight(set) as i128, set.len() as i128)
    }
}

/// Exact maximum total density over non-empty vertex sets.
pub fn tds_exact(graph: &TemporalGraph) -> SolveReport {
    let start = Instant::now();
    let wg = flatten(graph);
    let n = graph.n();
    if wg.total_weight() == 0 {
        let mut report = SolveReport::new(
            Problem::Tds,
            Method::Exact,
            VertexSet::empty(),
            graph.profile(&VertexSet::empty()).expect("empty set is valid"),
        );
        report.warnings.push("graph has no edges; returning the empty set".into());
        report.elapsed = start.elapsed();
        return report;
    }

    // Achievable densities are fractions with denominator at most n, so two
    // distinct ones differ by at least 1 / (n (n - 1)).
    let resolution = if n > 1 { ratio(1, (n * (n - 1)) as i128) } else { int(1) };
    let grid = 4 * (n * n) as i128;
    let max_wdeg = (0..n).map(|v| wg.weighted_degree(v)).max().unwrap_or(0);

    let mut best = graph.all_vertices();
    let mut lower = weighted_density(&wg, &best);
    let mut upper = ratio(max_wdeg as i128, 2);
    let mut trace = Vec::new();
    while upper - lower >= resolution {
        let gamma = snapped_midpoint(&lower, &upper, grid);
        let cut = densest_cut(&wg, &gamma);
        trace.push(TraceStep { gamma, nonempty: !cut.is_empty() });
        if cut.is_empty() {
            upper = gamma;
        } else {
            lower = weighted_density(&wg, &cut);
            debug_assert!(lower > gamma);
            best = cut;
        }
    }
    // Confirm nothing is strictly denser than the incumbent.
    let cut = densest_cut(&wg, &lower);
    trace.push(TraceStep { gamma: lower, nonempty: !cut.is_empty() });
    debug_assert!(cut.is_empty());

    let profile = graph.profile(&best).expect("cut sets are in range");
    debug_assert_eq!(profile.total, lower);
    let mut report = SolveReport::new(Problem::Tds, Method::Exact, best, profile);
    report.iterations = trace.len();
    report.trace = trace;
    report.elapsed = start.elapsed();
    report
}

/// Greedy peeling on the flattened graph: repeatedly drop a vertex of
/// minimum remaining weighted degree and keep the densest prefix. Within a
/// factor 2 of the optimum.
pub fn peel_baseline(graph: &TemporalGraph) -> SolveReport {
    let start = Instant::now();
    let wg = flatten(graph);
    let n = graph.n();
    let mut degree: Vec<u64> = (0..n).map(|v| wg.weighted_degree(v)).collect();
    let mut alive = vec![true; n];
    let mut queue: BTreeSet<(u64, usize)> = (0..n).map(|v| (degree[v], v)).collect();
    let mut weight = wg.total_weight();
    let mut size = n;
    let mut best_density = ratio(weight as i128, size as i128);
    let mut best_size = n;
    let mut removal_order = Vec::with_capacity(n);
    while let Some((d, v)) = queue.pop_first() {
        alive[v] = false;
        removal_order.push(v);
        weight -= d;
        size -= 1;
        for &(u, w) in wg.neighbors(v) {
            if alive[u] {
                queue.remove(&(degree[u], u));
                degree[u] -= w;
                queue.insert((degree[u], u));
            }
        }
        if size > 0 {
            let density = ratio(weight as i128, size as i128);
            if density > best_density {
                best_density = density;
                best_size = size;
            }
        }
    }
    let set: VertexSet = removal_order[n - best_size..].iter().copied().collect();
    let profile = graph.profile(&set).expect("peeled sets are in range");
    let mut report = SolveReport::new(Problem::Tds, Method::Peel, set, profile);
    report.iterations = n;
    report.certificate = Certificate::Approx(int(2));
    report.elapsed = start.elapsed();
    report
}
