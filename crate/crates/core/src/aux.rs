//! Exact solvers for the parametric subproblems behind the binary-search
//! drivers. For a trial value `gamma`:
//!
//! * FDS(gamma): maximize `sum_i m(S, G_i) - gamma |S|` subject to
//!   `b(S) <= alpha |S|`;
//! * SDS(gamma): minimize `b(S) - gamma |S|` subject to
//!   `sum_i m(S, G_i) >= sigma |S|`;
//! * MDS(gamma): maximize `min_i m(S, G_i) - gamma |S|`.
//!
//! The empty set is always feasible and scores zero. Among optimal sets the
//! smallest is returned, then the lexicographically smallest member list, so
//! both backends return the same witness.

use std::cmp::Ordering;
use std::time::{Duration, Instant};

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::graph::{TemporalGraph, VertexSet};
use crate::rational::{parts, Rational};

/// Largest vertex count [`solve_enum`] accepts.
pub const DEFAULT_ENUM_LIMIT: usize = 22;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AuxKind {
    Fds { alpha: Rational },
    Sds { sigma: Rational },
    Mds,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxProblem {
    pub kind: AuxKind,
    pub gamma: Rational,
}

impl AuxProblem {
    pub fn fds(gamma: Rational, alpha: Rational) -> Self {
        AuxProblem { kind: AuxKind::Fds { alpha }, gamma }
    }

    pub fn sds(gamma: Rational, sigma: Rational) -> Self {
        AuxProblem { kind: AuxKind::Sds { sigma }, gamma }
    }

    pub fn mds(gamma: Rational) -> Self {
        AuxProblem { kind: AuxKind::Mds, gamma }
    }

    /// True for the kinds whose objective is maximized.
    pub fn maximizes(&self) -> bool {
        !matches!(self.kind, AuxKind::Sds { .. })
    }

    fn validate(&self) -> Result<()> {
        if self.gamma.is_negative() {
            return Err(Error::Input(format!("gamma must be non-negative, got {}", self.gamma)));
        }
        match &self.kind {
            AuxKind::Fds { alpha } if alpha.is_negative() => {
                Err(Error::Input(format!("alpha must be non-negative, got {alpha}")))
            }
            AuxKind::Sds { sigma } if sigma.is_negative() => {
                Err(Error::Input(format!("sigma must be non-negative, got {sigma}")))
            }
            _ => Ok(()),
        }
    }

    /// Objective of `set`, or `None` when it violates the side constraint.
    pub fn evaluate(&self, graph: &TemporalGraph, set: &VertexSet) -> Result<Option<Rational>> {
        let counts = graph.induced_edge_counts(set)?;
        let scorer = Scorer::new(self);
        Ok(scorer.score(&counts, set.len()).map(|s| scorer.objective(s)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxSolution {
    pub set: VertexSet,
    pub objective: Rational,
    pub nodes_explored: u64,
    pub proven_optimal: bool,
}

/// Limits for one branch-and-bound solve. Running out is not an error: the
/// best set found so far is returned with `proven_optimal == false`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Budget {
    pub node_limit: Option<u64>,
    pub time_limit: Option<Duration>,
    pub deadline: Option<Instant>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn with_time_limit(time_limit: Duration) -> Self {
        Budget { time_limit: Some(time_limit), ..Default::default() }
    }

    fn deadline_from(&self, start: Instant) -> Option<Instant> {
        let by_limit = self.time_limit.map(|t| start + t);
        match (by_limit, self.deadline) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }
}

/// Integer scoring with all rationals cleared of denominators. Scores are
/// oriented so that larger is better for every kind, and scaled by the
/// denominator of `gamma`.
#[derive(Debug, Clone, Copy)]
struct Scorer {
    kind: Kind,
    gp: i128,
    gq: i128,
    /// Side-constraint parameter as `num / den`.
    cp: i128,
    cq: i128,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Fds,
    Sds,
    Mds,
}

impl Scorer {
    fn new(problem: &AuxProblem) -> Self {
        let (gp, gq) = parts(&problem.gamma);
        let (kind, (cp, cq)) = match &problem.kind {
            AuxKind::Fds { alpha } => (Kind::Fds, parts(alpha)),
            AuxKind::Sds { sigma } => (Kind::Sds, parts(sigma)),
            AuxKind::Mds => (Kind::Mds, (0, 1)),
        };
        Scorer { kind, gp, gq, cp, cq }
    }

    fn score(&self, counts: &[u64], size: usize) -> Option<i128> {
        let size = size as i128;
        let max = counts.iter().copied().max().unwrap_or(0) as i128;
        let min = counts.iter().copied().min().unwrap_or(0) as i128;
        match self.kind {
            Kind::Fds => {
                let total: i128 = counts.iter().map(|&m| m as i128).sum();
                ((max - min) * self.cq <= self.cp * size).then(|| self.gq * total - self.gp * size)
            }
            Kind::Sds => {
                let total: i128 = counts.iter().map(|&m| m as i128).sum();
                (total * self.cq >= self.cp * size).then(|| self.gp * size - self.gq * (max - min))
            }
            Kind::Mds => Some(self.gq * min - self.gp * size),
        }
    }

    fn objective(&self, score: i128) -> Rational {
        let value = Rational::new(score, self.gq);
        if self.kind == Kind::Sds {
            -value
        } else {
            value
        }
    }
}

/// Total order on candidates: higher score, then smaller size, then
/// lexicographically smaller member list.
fn compare_masks(score_a: i128, a: u32, score_b: i128, b: u32) -> Ordering {
    score_b
        .cmp(&score_a)
        .then_with(|| a.count_ones().cmp(&b.count_ones()))
        .then_with(|| {
            let diff = a ^ b;
            if diff == 0 {
                Ordering::Equal
            } else if a & (1 << diff.trailing_zeros()) != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
}

/// Exhaustive search over all `2^n` subsets (Gray-code order with
/// incremental edge counts).
pub fn solve_enum(graph: &TemporalGraph, problem: &AuxProblem) -> Result<AuxSolution> {
    solve_enum_with_limit(graph, problem, DEFAULT_ENUM_LIMIT)
}

pub fn solve_enum_with_limit(graph: &TemporalGraph, problem: &AuxProblem, limit: usize) -> Result<AuxSolution> {
    problem.validate()?;
    let n = graph.n();
    let limit = limit.min(31);
    if n > limit {
        return Err(Error::EnumerationLimit { n, limit });
    }
    let r = graph.r();
    let adj: Vec<Vec<u32>> = (0..r)
        .map(|i| {
            (0..n)
                .map(|v| graph.neighbors(i, v).iter().fold(0u32, |acc, &u| acc | (1 << u)))
                .collect()
        })
        .collect();
    let scorer = Scorer::new(problem);
    let mut counts = vec![0u64; r];
    let mut mask = 0u32;
    let mut best_mask = 0u32;
    let mut best_score = 0i128;
    let total: u64 = 1 << n;
    for step in 1..total {
        let v = step.trailing_zeros() as usize;
        let bit = 1u32 << v;
        if mask & bit == 0 {
            for i in 0..r {
                counts[i] += u64::from((adj[i][v] & mask).count_ones());
            }
            mask |= bit;
        } else {
            mask &= !bit;
            for i in 0..r {
                counts[i] -= u64::from((adj[i][v] & mask).count_ones());
            }
        }
        if let Some(score) = scorer.score(&counts, mask.count_ones() as usize) {
            if compare_masks(score, mask, best_score, best_mask) == Ordering::Less {
                best_score = score;
                best_mask = mask;
            }
        }
    }
    Ok(AuxSolution {
        set: (0..n).filter(|&v| best_mask & (1 << v) != 0).collect(),
        objective: scorer.objective(best_score),
        nodes_explored: total,
        proven_optimal: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Free,
    In,
    Out,
}

struct Search<'g> {
    graph: &'g TemporalGraph,
    scorer: Scorer,
    order: Vec<usize>,
    status: Vec<Status>,
    /// `in_cnt[i][v]` / `free_cnt[i][v]`: neighbors of `v` in snapshot `i`
    /// that are included / still undecided.
    in_cnt: Vec<Vec<u32>>,
    free_cnt: Vec<Vec<u32>>,
    in_edges: Vec<u64>,
    in_size: usize,
    free_size: usize,
    best_score: i128,
    best_set: Vec<usize>,
    nodes: u64,
    node_limit: Option<u64>,
    deadline: Option<Instant>,
    aborted: bool,
}

impl<'g> Search<'g> {
    fn new(graph: &'g TemporalGraph, problem: &AuxProblem) -> Self {
        let n = graph.n();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(graph.total_degree(v)), v));
        Search {
            graph,
            scorer: Scorer::new(problem),
            order,
            status: vec![Status::Free; n],
            in_cnt: vec![vec![0; n]; graph.r()],
            free_cnt: (0..graph.r())
                .map(|i| (0..n).map(|v| graph.degree(i, v) as u32).collect())
                .collect(),
            in_edges: vec![0; graph.r()],
            in_size: 0,
            free_size: n,
            best_score: 0,
            best_set: Vec::new(),
            nodes: 0,
            node_limit: None,
            deadline: None,
            aborted: false,
        }
    }

    fn include(&mut self, v: usize) {
        debug_assert_eq!(self.status[v], Status::Free);
        self.status[v] = Status::In;
        self.in_size += 1;
        self.free_size -= 1;
        for i in 0..self.graph.r() {
            self.in_edges[i] += u64::from(self.in_cnt[i][v]);
            for &u in self.graph.neighbors(i, v) {
                self.in_cnt[i][u] += 1;
                self.free_cnt[i][u] -= 1;
            }
        }
    }

    fn undo_include(&mut self, v: usize) {
        self.status[v] = Status::Free;
        self.in_size -= 1;
        self.free_size += 1;
        for i in 0..self.graph.r() {
            self.in_edges[i] -= u64::from(self.in_cnt[i][v]);
            for &u in self.graph.neighbors(i, v) {
                self.in_cnt[i][u] -= 1;
                self.free_cnt[i][u] += 1;
            }
        }
    }

    fn exclude(&mut self, v: usize) {
        debug_assert_eq!(self.status[v], Status::Free);
        self.status[v] = Status::Out;
        self.free_size -= 1;
        for i in 0..self.graph.r() {
            for &u in self.graph.neighbors(i, v) {
                self.free_cnt[i][u] -= 1;
            }
        }
    }

    fn undo_exclude(&mut self, v: usize) {
        self.status[v] = Status::Free;
        self.free_size += 1;
        for i in 0..self.graph.r() {
            for &u in self.graph.neighbors(i, v) {
                self.free_cnt[i][u] += 1;
            }
        }
    }

    fn free_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.status.len()).filter(|&v| self.status[v] == Status::Free)
    }

    /// Twice an upper bound on the score of every completion of the current
    /// partial assignment. Side constraints are ignored.
    ///
    /// For `S = In + T`, `T` a subset of the free vertices,
    /// `m_i(S) = m_i(In) + sum_{v in T} d_i(v, In) + m_i(T)` and
    /// `m_i(T) <= 1/2 sum_{v in T} d_i(v, Free)`; each free vertex then
    /// contributes independently and only positive contributions count.
    fn bound2(&self) -> i128 {
        let Scorer { gp, gq, .. } = self.scorer;
        let r = self.graph.r();
        let in_size = self.in_size as i128;
        match self.scorer.kind {
            Kind::Fds => {
                let in_total: i128 = self.in_edges.iter().map(|&m| m as i128).sum();
                let mut bound = 2 * (gq * in_total - gp * in_size);
                for v in self.free_vertices() {
                    let (inside, free) = (0..r).fold((0i128, 0i128), |(a, b), i| {
                        (a + self.in_cnt[i][v] as i128, b + self.free_cnt[i][v] as i128)
                    });
                    bound += (2 * gq * inside + gq * free - 2 * gp).max(0);
                }
                bound
            }
            Kind::Mds => (0..r)
                .map(|i| {
                    let mut bound = 2 * (gq * self.in_edges[i] as i128 - gp * in_size);
                    for v in self.free_vertices() {
                        let inside = self.in_cnt[i][v] as i128;
                        let free = self.free_cnt[i][v] as i128;
                        bound += (2 * gq * inside + gq * free - 2 * gp).max(0);
                    }
                    bound
                })
                .min()
                .unwrap_or(0),
            Kind::Sds => {
                // Lower bound on 2 (gq b(S) - gp |S|), using
                // b(S) >= m_k(S) - m_j(S) >= m_k(In) - m_j(In)
                //   + sum_{v in T} (d_k(v, In) - d_j(v, In)) - m_j(T).
                let all = in_size + self.free_size as i128;
                let mut lower = -2 * gp * all;
                for k in 0..r {
                    for j in 0..r {
                        if j == k {
                            continue;
                        }
                        let base = self.in_edges[k] as i128 - self.in_edges[j] as i128;
                        let mut bound = 2 * (gq * base - gp * in_size);
                        for v in self.free_vertices() {
                            let delta = self.in_cnt[k][v] as i128 - self.in_cnt[j][v] as i128;
                            let free_j = self.free_cnt[j][v] as i128;
                            bound += (2 * gq * delta - gq * free_j - 2 * gp).min(0);
                        }
                        lower = lower.max(bound);
                    }
                }
                -lower
            }
        }
    }

    fn current_set(&self) -> Vec<usize> {
        (0..self.status.len()).filter(|&v| self.status[v] == Status::In).collect()
    }

    /// Offers the included set (all free vertices excluded) as a candidate.
    fn offer_current(&mut self) {
        let Some(score) = self.scorer.score(&self.in_edges, self.in_size) else {
            return;
        };
        let better = match score.cmp(&self.best_score) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => match self.in_size.cmp(&self.best_set.len()) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => self.current_set() < self.best_set,
            },
        };
        if better {
            self.best_score = score;
            self.best_set = self.current_set();
        }
    }

    fn out_of_budget(&mut self) -> bool {
        if self.aborted {
            return true;
        }
        if self.node_limit.is_some_and(|limit| self.nodes >= limit) {
            self.aborted = true;
        } else if self.nodes % 256 == 0 && self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.aborted = true;
        }
        self.aborted
    }

    fn dfs(&mut self, depth: usize) {
        if self.out_of_budget() {
            return;
        }
        self.nodes += 1;
        if depth == self.order.len() {
            return;
        }
        let bound = self.bound2();
        let best = 2 * self.best_score;
        // Completions other than the (already offered) empty set have at
        // least max(|In|, 1) members; at equal score they lose to a smaller
        // incumbent.
        let min_size = self.in_size.max(1);
        if bound < best || (bound == best && min_size > self.best_set.len()) {
            return;
        }
        let v = self.order[depth];
        self.include(v);
        self.offer_current();
        self.dfs(depth + 1);
        self.undo_include(v);

        self.exclude(v);
        self.dfs(depth + 1);
        self.undo_exclude(v);
    }
}

/// Depth-first branch and bound. Branches on vertices in decreasing order of
/// total degree, include-branch first.
pub fn solve_bnb(graph: &TemporalGraph, problem: &AuxProblem, budget: Budget) -> Result<AuxSolution> {
    problem.validate()?;
    let start = Instant::now();
    let mut search = Search::new(graph, problem);
    search.node_limit = budget.node_limit;
    search.deadline = budget.deadline_from(start);
    search.offer_current();
    search.dfs(0);
    Ok(AuxSolution {
        objective: search.scorer.objective(search.best_score),
        set: VertexSet::from_sorted_unchecked(std::mem::take(&mut search.best_set)),
        nodes_explored: search.nodes,
        proven_optimal: !search.aborted,
    })
}

/// The relaxation bound used for pruning, evaluated at the partial
/// assignment where `include` is fixed in, `exclude` fixed out and every
/// other vertex undecided. For maximizing kinds it bounds every completion's
/// objective from above; for SDS from below.
pub fn relaxation_bound(
    graph: &TemporalGraph,
    problem: &AuxProblem,
    include: &VertexSet,
    exclude: &VertexSet,
) -> Result<Rational> {
    problem.validate()?;
    if include.intersection_len(exclude) > 0 {
        return Err(Error::Input("a vertex cannot be both included and excluded".into()));
    }
    for v in include.iter().chain(exclude.iter()) {
        if v >= graph.n() {
            return Err(Error::Input(format!("vertex {v} out of range")));
        }
    }
    let mut search = Search::new(graph, problem);
    for v in include.iter() {
        search.include(v);
    }
    for v in exclude.iter() {
        search.exclude(v);
    }
    let bound = Rational::new(search.bound2(), 2 * search.scorer.gq);
    Ok(if problem.maximizes() { bound } else { -bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn k3() -> Vec<(usize, usize)> {
        vec![(0, 1), (1, 2), (0, 2)]
    }

    fn twin_triangles() -> TemporalGraph {
        TemporalGraph::new(3, vec![k3(), k3()]).unwrap()
    }

    fn both(graph: &TemporalGraph, problem: &AuxProblem) -> AuxSolution {
        let a = solve_enum(graph, problem).unwrap();
        let b = solve_bnb(graph, problem, Budget::unlimited()).unwrap();
        assert_eq!(a.set, b.set);
        assert_eq!(a.objective, b.objective);
        assert!(b.proven_optimal);
        a
    }

    #[test]
    fn fds_examples() {
        let g = twin_triangles();
        let sol = both(&g, &AuxProblem::fds(int(1), int(0)));
        assert_eq!(sol.set, VertexSet::new([0, 1, 2]));
        assert_eq!(sol.objective, int(3));

        let sol = both(&g, &AuxProblem::fds(ratio(21, 10), int(0)));
        assert!(sol.set.is_empty());
        assert_eq!(sol.objective, int(0));
    }

    #[test]
    fn mds_example() {
        let sol = both(&twin_triangles(), &AuxProblem::mds(ratio(2, 5)));
        assert_eq!(sol.set, VertexSet::new([0, 1, 2]));
        assert_eq!(sol.objective, ratio(9, 5));
    }

    #[test]
    fn sds_prefers_balanced_sets() {
        // Triangle in snapshot 0, only one edge of it in snapshot 1.
        let g = TemporalGraph::new(3, vec![k3(), vec![(0, 1)]]).unwrap();
        // b({0,1}) = 0 with |S| = 2 beats the whole triangle (b = 2, |S| = 3).
        let sol = both(&g, &AuxProblem::sds(int(1), int(0)));
        assert_eq!(sol.set, VertexSet::new([0, 1]));
        assert_eq!(sol.objective, int(-2));
        let sol = both(&g, &AuxProblem::sds(int(1), int(1)));
        assert_eq!(sol.set, VertexSet::new([0, 1]));
        assert_eq!(sol.objective, int(-2));
    }

    #[test]
    fn enumeration_limit_is_enforced() {
        let g = TemporalGraph::new(23, vec![vec![]]).unwrap();
        let err = solve_enum(&g, &AuxProblem::mds(int(0))).unwrap_err();
        assert!(matches!(err, Error::EnumerationLimit { n: 23, limit: 22 }));
    }

    #[test]
    fn negative_parameters_are_rejected() {
        let g = twin_triangles();
        assert!(solve_bnb(&g, &AuxProblem::fds(int(-1), int(0)), Budget::unlimited()).is_err());
        assert!(solve_enum(&g, &AuxProblem::fds(int(1), int(-1))).is_err());
    }

    #[test]
    fn node_limit_flags_unproven() {
        let g = TemporalGraph::new(6, vec![vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)], vec![(0, 5), (1, 4)]]).unwrap();
        let budget = Budget { node_limit: Some(3), ..Budget::default() };
        let sol = solve_bnb(&g, &AuxProblem::fds(ratio(1, 10), int(1)), budget).unwrap();
        assert!(!sol.proven_optimal);
    }

    #[test]
    fn evaluate_checks_side_constraints() {
        let g = TemporalGraph::new(3, vec![k3(), vec![]]).unwrap();
        let all = VertexSet::new([0, 1, 2]);
        assert_eq!(AuxProblem::fds(int(0), int(0)).evaluate(&g, &all).unwrap(), None);
        assert_eq!(AuxProblem::fds(int(0), int(1)).evaluate(&g, &all).unwrap(), Some(int(3)));
        assert_eq!(AuxProblem::sds(int(1), int(2)).evaluate(&g, &all).unwrap(), None);
        assert_eq!(AuxProblem::sds(int(1), int(1)).evaluate(&g, &all).unwrap(), Some(int(0)));
        assert_eq!(AuxProblem::mds(int(1)).evaluate(&g, &all).unwrap(), Some(int(-3)));
    }
}
