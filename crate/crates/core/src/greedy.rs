//! Local-search heuristics built on single-vertex add/remove moves.

use std::time::Instant;

use crate::densest::tds_exact;
use crate::error::{Error, Result};
use crate::graph::{TemporalGraph, VertexSet};
use crate::rational::{int, parts, ratio, Rational};
use crate::report::{Certificate, GreedyMove, GreedyTrace, Method, MoveKind, Problem, SigmaAttempt, SolveReport};
use crate::view::IncrementalView;

/// Density-floor schedules tried by [`fds_greedy`] until one yields a
/// feasible set.
pub const DEFAULT_K_SCHEDULE: [usize; 2] = [20, 100];

fn gap_parts(counts: &[u64]) -> i128 {
    let max = counts.iter().copied().max().unwrap_or(0);
    let min = counts.iter().copied().min().unwrap_or(0);
    (max - min) as i128
}

fn total_edges(counts: &[u64]) -> i128 {
    counts.iter().map(|&m| m as i128).sum()
}

fn record(view: &IncrementalView<'_>, kind: MoveKind, vertex: usize) -> GreedyMove {
    let p = view.profile();
    GreedyMove { kind, vertex, gap: p.gap, total: p.total }
}

fn apply(view: &mut IncrementalView<'_>, v: usize) -> MoveKind {
    if view.contains(v) {
        view.remove(v).expect("member");
        MoveKind::Remove
    } else {
        view.add(v).expect("non-member");
        MoveKind::Add
    }
}

/// Repeatedly applies the add/remove move with the smallest resulting gap
/// among those keeping total density at least `sigma` and the set
/// non-empty, while the gap strictly decreases.
fn descend_gap(view: &mut IncrementalView<'_>, sigma: &Rational) -> Vec<GreedyMove> {
    let (sp, sq) = parts(sigma);
    let n = view.graph().n();
    let mut counts = Vec::new();
    let mut moves = Vec::new();
    loop {
        let size = view.len() as i128;
        // Current gap as a fraction `gap_num / gap_den`.
        let (mut best_num, mut best_den) = (gap_parts(view.edge_counts()), size.max(1));
        let mut best = None;
        for v in 0..n {
            let new_size = if view.contains(v) { size - 1 } else { size + 1 };
            if new_size == 0 {
                continue;
            }
            view.toggled_counts(v, &mut counts);
            if total_edges(&counts) * sq < sp * new_size {
                continue;
            }
            let num = gap_parts(&counts);
            if num * best_den < best_num * new_size {
                best_num = num;
                best_den = new_size;
                best = Some(v);
            }
        }
        let Some(v) = best else { break };
        let kind = apply(view, v);
        moves.push(record(view, kind, v));
    }
    moves
}

/// Hill-climbs total density with single-vertex moves that keep the gap at
/// most `alpha` and the set non-empty.
fn climb_density(view: &mut IncrementalView<'_>, alpha: &Rational) -> Vec<GreedyMove> {
    let (ap, aq) = parts(alpha);
    let n = view.graph().n();
    let mut counts = Vec::new();
    let mut moves = Vec::new();
    loop {
        let size = view.len() as i128;
        let (mut best_num, mut best_den) = (total_edges(view.edge_counts()), size.max(1));
        let mut best = None;
        for v in 0..n {
            let new_size = if view.contains(v) { size - 1 } else { size + 1 };
            if new_size == 0 {
                continue;
            }
            view.toggled_counts(v, &mut counts);
            if gap_parts(&counts) * aq > ap * new_size {
                continue;
            }
            let num = total_edges(&counts);
            if num * best_den > best_num * new_size {
                best_num = num;
                best_den = new_size;
                best = Some(v);
            }
        }
        let Some(v) = best else { break };
        let kind = apply(view, v);
        moves.push(record(view, kind, v));
    }
    moves
}

fn start_set(graph: &TemporalGraph, tds_set: &VertexSet) -> VertexSet {
    if tds_set.is_empty() {
        graph.all_vertices()
    } else {
        tds_set.clone()
    }
}

fn run_sds(graph: &TemporalGraph, start: &VertexSet, sigma: &Rational) -> (VertexSet, Vec<GreedyMove>) {
    let mut view = IncrementalView::new(graph, start).expect("start set is in range");
    let moves = descend_gap(&mut view, sigma);
    debug_assert_eq!(view.profile(), graph.profile(&view.set()).unwrap());
    (view.set(), moves)
}

/// Greedy SDS: start from the densest set and move single vertices in or
/// out while the density gap strictly decreases and the total density stays
/// at least `sigma`.
pub fn sds_greedy(graph: &TemporalGraph, sigma: Rational) -> Result<SolveReport> {
    let start = Instant::now();
    let tds = tds_exact(graph);
    if sigma > tds.objective {
        return Err(Error::Infeasible { sigma, d_tds: tds.objective });
    }
    let (set, moves) = run_sds(graph, &start_set(graph, &tds.set), &sigma);
    let profile = graph.profile(&set)?;
    let mut report = SolveReport::new(Problem::Sds, Method::Greedy, set, profile);
    report.sigma = Some(sigma);
    report.certificate = Certificate::Heuristic;
    report.iterations = moves.len();
    report.greedy = Some(GreedyTrace { moves, sigma_attempts: Vec::new() });
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Two-phase greedy FDS. Phase one runs the SDS greedy for density floors
/// `i / k * d_tds`, `i = k, ..., 0`, keeping the densest result whose gap is
/// at most `alpha`, and moves to the next `k` of the schedule only if none
/// is feasible. Phase two hill-climbs total density from that set.
pub fn fds_greedy(graph: &TemporalGraph, alpha: Rational, k_schedule: &[usize]) -> Result<SolveReport> {
    let start = Instant::now();
    if alpha < int(0) {
        return Err(Error::Input(format!("alpha must be non-negative, got {alpha}")));
    }
    if k_schedule.is_empty() || k_schedule.contains(&0) {
        return Err(Error::Input("k schedule must be a non-empty list of positive counts".into()));
    }
    let tds = tds_exact(graph);
    let d_tds = tds.objective;
    let origin = start_set(graph, &tds.set);
    let mut attempts = Vec::new();
    let mut chosen: Option<(VertexSet, Rational)> = None;
    for &k in k_schedule {
        for i in (0..=k).rev() {
            let sigma = d_tds * ratio(i as i128, k as i128);
            let (set, moves) = run_sds(graph, &origin, &sigma);
            let profile = graph.profile(&set)?;
            let feasible = profile.gap <= alpha;
            attempts.push(SigmaAttempt {
                k,
                sigma,
                feasible,
                total: profile.total,
                gap: profile.gap,
                moves: moves.len(),
            });
            if feasible && chosen.as_ref().is_none_or(|(_, best)| profile.total > *best) {
                chosen = Some((set, profile.total));
            }
        }
        if chosen.is_some() {
            break;
        }
    }
    let Some((set, _)) = chosen else {
        return Err(Error::NoFeasibleSet { alpha });
    };

    let mut view = IncrementalView::new(graph, &set)?;
    let moves = climb_density(&mut view, &alpha);
    let set = view.set();
    let profile = graph.profile(&set)?;
    debug_assert_eq!(profile, view.profile());
    debug_assert!(profile.gap <= alpha);
    let mut report = SolveReport::new(Problem::Fds, Method::Greedy, set, profile);
    report.alpha = Some(alpha);
    report.certificate = Certificate::Heuristic;
    report.iterations = moves.len();
    report.greedy = Some(GreedyTrace { moves, sigma_attempts: attempts });
    report.elapsed = start.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> Vec<(usize, usize)> {
        vec![(0, 1), (1, 2), (0, 2)]
    }

    #[test]
    fn sds_greedy_keeps_fair_tds_set() {
        let g = TemporalGraph::new(4, vec![k3(), k3()]).unwrap();
        let report = sds_greedy(&g, int(1)).unwrap();
        assert_eq!(report.set, VertexSet::new([0, 1, 2]));
        assert_eq!(report.iterations, 0);
        assert_eq!(report.objective, int(0));
    }

    #[test]
    fn sds_greedy_moves_strictly_improve() {
        let g = TemporalGraph::new(5, vec![vec![(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)], vec![(0, 1), (3, 4)]]).unwrap();
        let report = sds_greedy(&g, int(0)).unwrap();
        let moves = &report.greedy.as_ref().unwrap().moves;
        let tds_gap = tds_exact(&g).profile.gap;
        let mut previous = tds_gap;
        for m in moves {
            assert!(m.gap < previous);
            previous = m.gap;
        }
        assert!(report.profile.gap <= tds_gap);
        // Each recorded state matches a recount of the prefix.
        let mut set: Vec<usize> = tds_exact(&g).set.iter().collect();
        for m in moves {
            match m.kind {
                MoveKind::Add => set.push(m.vertex),
                MoveKind::Remove => set.retain(|&v| v != m.vertex),
            }
            let p = g.profile(&VertexSet::new(set.iter().copied())).unwrap();
            assert_eq!((p.gap, p.total), (m.gap, m.total));
        }
    }

    #[test]
    fn sds_greedy_infeasible_sigma() {
        let g = TemporalGraph::new(3, vec![k3()]).unwrap();
        assert!(matches!(sds_greedy(&g, int(2)), Err(Error::Infeasible { .. })));
    }

    #[test]
    fn fds_greedy_identical_snapshots() {
        let g = TemporalGraph::new(4, vec![k3(), k3()]).unwrap();
        let report = fds_greedy(&g, int(0), &DEFAULT_K_SCHEDULE).unwrap();
        assert_eq!(report.objective, int(2));
        assert_eq!(report.profile.gap, int(0));
        let attempts = &report.greedy.as_ref().unwrap().sigma_attempts;
        assert_eq!(attempts.len(), 21);
        assert!(attempts[0].feasible);
    }

    #[test]
    fn fds_greedy_rejects_bad_schedule() {
        let g = TemporalGraph::new(3, vec![k3()]).unwrap();
        assert!(fds_greedy(&g, int(0), &[]).is_err());
        assert!(fds_greedy(&g, int(0), &[0]).is_err());
    }
}
