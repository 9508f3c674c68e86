//! Binary-search drivers that turn the parametric subproblems of [`crate::aux`]
//! into solutions of FDS, SDS and MDS.
//!
//! For FDS and MDS the subproblem at `gamma` has a non-empty solution exactly
//! when `gamma` is below the optimum, so the search keeps `aux(L)` non-empty
//! and `aux(U)` empty. SDS is mirrored: `aux(gamma)` is non-empty exactly when
//! `gamma` exceeds the optimal gap.

use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};

use crate::aux::{solve_bnb, solve_enum_with_limit, AuxProblem, AuxSolution, Budget, DEFAULT_ENUM_LIMIT};
use crate::densest::tds_exact;
use crate::error::{Error, Result};
use crate::graph::{TemporalGraph, VertexSet};
use crate::rational::{int, ratio, Rational};
use crate::report::{Certificate, Method, Problem, SolveReport, TraceStep};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Backend {
    Enumeration,
    #[default]
    BranchAndBound,
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub epsilon: Rational,
    /// Shrinks epsilon below the threshold at which the search is exact.
    pub exactness: bool,
    pub backend: Backend,
    pub max_iterations: usize,
    /// Limits applied to every subproblem solve.
    pub aux_budget: Budget,
    /// Wall-clock limit for the whole driver call.
    pub total_time_limit: Option<Duration>,
    pub enum_limit: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            epsilon: ratio(1, 100),
            exactness: false,
            backend: Backend::default(),
            max_iterations: 64,
            aux_budget: Budget::unlimited(),
            total_time_limit: None,
            enum_limit: DEFAULT_ENUM_LIMIT,
        }
    }
}

impl SearchConfig {
    pub fn exact() -> Self {
        SearchConfig { exactness: true, ..Default::default() }
    }

    pub fn with_backend(mut self, backend: Backend) -> Self {
        self.backend = backend;
        self
    }

    fn validate(&self) -> Result<()> {
        if !self.epsilon.is_positive() {
            return Err(Error::Input(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        Ok(())
    }
}

fn cube(n: usize) -> i128 {
    let n = n as i128;
    n * n * n
}

/// Epsilon at or below which the FDS search returns the exact optimum.
pub fn fds_exact_threshold(graph: &TemporalGraph) -> Rational {
    ratio(1, graph.r() as i128 * cube(graph.n()))
}

/// Epsilon at or below which the SDS and MDS searches are exact.
pub fn sds_mds_exact_threshold(graph: &TemporalGraph) -> Rational {
    ratio(1, cube(graph.n()))
}

/// Below this trial value a search that has never seen a non-empty
/// subproblem concludes that the optimum is zero: positive densities and
/// gaps are at least `1 / n`.
pub fn zero_floor(graph: &TemporalGraph) -> Rational {
    let n = graph.n() as i128;
    ratio(1, 2 * graph.r() as i128 * n * n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    /// Non-empty below the optimum (FDS, MDS).
    Below,
    /// Non-empty above the optimum (SDS).
    Above,
}

struct Bisection {
    witness: Option<VertexSet>,
    trace: Vec<TraceStep>,
    lower: Rational,
    upper: Rational,
    zero_optimum: bool,
    failure: Option<String>,
}

struct Driver<'a> {
    graph: &'a TemporalGraph,
    cfg: &'a SearchConfig,
    deadline: Option<Instant>,
}

impl Driver<'_> {
    fn solve(&self, problem: &AuxProblem) -> Result<AuxSolution> {
        match self.cfg.backend {
            Backend::Enumeration => solve_enum_with_limit(self.graph, problem, self.cfg.enum_limit),
            Backend::BranchAndBound => {
                let mut budget = self.cfg.aux_budget;
                budget.deadline = match (budget.deadline, self.deadline) {
                    (Some(a), Some(b)) => Some(a.min(b)),
                    (a, b) => a.or(b),
                };
                solve_bnb(self.graph, problem, budget)
            }
        }
    }

    fn bisect(
        &self,
        upper: Rational,
        epsilon: &Rational,
        side: Side,
        make: impl Fn(Rational) -> AuxProblem,
    ) -> Result<Bisection> {
        let floor = zero_floor(self.graph);
        let mut out = Bisection {
            witness: None,
            trace: Vec::new(),
            lower: int(0),
            upper,
            zero_optimum: false,
            failure: None,
        };
        loop {
            let (lower, upper) = (out.lower, out.upper);
            if lower.is_positive() && upper - lower <= epsilon * lower {
                break;
            }
            if lower.is_zero() && upper <= floor {
                out.zero_optimum = true;
                break;
            }
            if out.trace.len() >= self.cfg.max_iterations {
                out.failure = Some(format!("iteration cap of {} reached", self.cfg.max_iterations));
                break;
            }
            if self.deadline.is_some_and(|d| Instant::now() >= d) {
                out.failure.get_or_insert_with(|| "time limit reached".into());
                break;
            }
            let gamma = (lower + upper) / int(2);
            let sol = self.solve(&make(gamma))?;
            if !sol.proven_optimal && out.failure.is_none() {
                out.failure = Some(format!("subproblem budget exhausted at gamma = {gamma}"));
            }
            let nonempty = !sol.set.is_empty();
            out.trace.push(TraceStep { gamma, nonempty });
            match (side, nonempty) {
                (Side::Below, true) | (Side::Above, false) => out.lower = gamma,
                (Side::Below, false) | (Side::Above, true) => out.upper = gamma,
            }
            if nonempty {
                out.witness = Some(sol.set);
            }
        }
        Ok(out)
    }

    fn finish(
        &self,
        start: Instant,
        problem: Problem,
        set: VertexSet,
        run: Bisection,
        epsilon: Rational,
        exact_threshold: Rational,
    ) -> Result<SolveReport> {
        let profile = self.graph.profile(&set)?;
        let mut report = SolveReport::new(problem, Method::Exact, set, profile);
        report.epsilon = Some(epsilon);
        report.certificate = match run.failure {
            Some(why) => Certificate::Uncertified(why),
            None if run.zero_optimum || epsilon <= exact_threshold => Certificate::Exact,
            None => Certificate::Approx(int(1) + epsilon),
        };
        report.iterations = run.trace.len();
        report.trace = run.trace;
        report.elapsed = start.elapsed();
        Ok(report)
    }
}

fn effective_epsilon(cfg: &SearchConfig, threshold: &Rational) -> Rational {
    if cfg.exactness && cfg.epsilon > *threshold {
        *threshold
    } else {
        cfg.epsilon
    }
}

fn driver<'a>(graph: &'a TemporalGraph, cfg: &'a SearchConfig, start: Instant) -> Driver<'a> {
    Driver { graph, cfg, deadline: cfg.total_time_limit.map(|t| start + t) }
}

/// Maximum total density subject to a density gap of at most `alpha`.
pub fn fds_solve(graph: &TemporalGraph, alpha: Rational, cfg: &SearchConfig) -> Result<SolveReport> {
    let start = Instant::now();
    cfg.validate()?;
    if alpha.is_negative() {
        return Err(Error::Input(format!("alpha must be non-negative, got {alpha}")));
    }
    let threshold = fds_exact_threshold(graph);
    let epsilon = effective_epsilon(cfg, &threshold);
    let upper = ratio((graph.r() * (graph.n() - 1)) as i128, 2);
    let d = driver(graph, cfg, start);
    let run = d.bisect(upper, &epsilon, Side::Below, |gamma| AuxProblem::fds(gamma, alpha))?;
    let set = run.witness.clone().unwrap_or_default();
    let mut report = d.finish(start, Problem::Fds, set, run, epsilon, threshold)?;
    report.alpha = Some(alpha);
    Ok(report)
}

/// Maximum of the minimum per-snapshot density.
pub fn mds_solve(graph: &TemporalGraph, cfg: &SearchConfig) -> Result<SolveReport> {
    let start = Instant::now();
    cfg.validate()?;
    let threshold = sds_mds_exact_threshold(graph);
    let epsilon = effective_epsilon(cfg, &threshold);
    let upper = ratio((graph.n() - 1) as i128, 2);
    let d = driver(graph, cfg, start);
    let run = d.bisect(upper, &epsilon, Side::Below, AuxProblem::mds)?;
    let set = run.witness.clone().unwrap_or_default();
    d.finish(start, Problem::Mds, set, run, epsilon, threshold)
}

/// Minimum density gap over sets whose total density is at least `sigma`.
/// Fails with [`Error::Infeasible`] when `sigma` exceeds the best total
/// density.
pub fn sds_solve(graph: &TemporalGraph, sigma: Rational, cfg: &SearchConfig) -> Result<SolveReport> {
    let start = Instant::now();
    cfg.validate()?;
    if sigma.is_negative() {
        return Err(Error::Input(format!("sigma must be non-negative, got {sigma}")));
    }
    let d_tds = tds_exact(graph).objective;
    if sigma > d_tds || d_tds.is_zero() && sigma.is_positive() {
        return Err(Error::Infeasible { sigma, d_tds });
    }
    let threshold = sds_mds_exact_threshold(graph);
    let epsilon = effective_epsilon(cfg, &threshold);
    // Gaps never exceed (n - 1) / 2, so aux(n / 2) is non-empty.
    let upper = ratio(graph.n() as i128, 2);
    let d = driver(graph, cfg, start);
    let mut run = d.bisect(upper, &epsilon, Side::Above, |gamma| AuxProblem::sds(gamma, sigma))?;
    let set = match run.witness.clone() {
        Some(set) => set,
        None => {
            let sol = d.solve(&AuxProblem::sds(run.upper, sigma))?;
            if !sol.proven_optimal && run.failure.is_none() {
                run.failure = Some("subproblem budget exhausted at the upper bracket".into());
            }
            sol.set
        }
    };
    let mut report = d.finish(start, Problem::Sds, set, run, epsilon, threshold)?;
    report.sigma = Some(sigma);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> Vec<(usize, usize)> {
        vec![(0, 1), (1, 2), (0, 2)]
    }

    #[test]
    fn fds_twin_triangles() {
        let g = TemporalGraph::new(3, vec![k3(), k3()]).unwrap();
        let report = fds_solve(&g, int(0), &SearchConfig::exact()).unwrap();
        assert_eq!(report.objective, int(2));
        assert_eq!(report.set, VertexSet::new([0, 1, 2]));
        assert_eq!(report.profile.gap, int(0));
        assert_eq!(report.certificate, Certificate::Exact);
        assert_eq!(report.iterations, report.trace.len());
    }

    #[test]
    fn fds_zero_optimum() {
        let g = TemporalGraph::new(2, vec![vec![(0, 1)], vec![]]).unwrap();
        let report = fds_solve(&g, int(0), &SearchConfig::default()).unwrap();
        assert_eq!(report.objective, int(0));
        assert!(report.trace.iter().all(|s| !s.nonempty));
        assert!(report.iterations <= 64);
        assert_eq!(report.certificate, Certificate::Exact);
    }

    #[test]
    fn mds_examples() {
        let g = TemporalGraph::new(3, vec![k3(), k3()]).unwrap();
        let report = mds_solve(&g, &SearchConfig::default()).unwrap();
        assert_eq!(report.objective, int(1));
        assert_eq!(report.set, VertexSet::new([0, 1, 2]));

        let g = TemporalGraph::new(3, vec![k3(), vec![]]).unwrap();
        assert_eq!(mds_solve(&g, &SearchConfig::default()).unwrap().objective, int(0));
    }

    #[test]
    fn sds_identical_snapshots_have_zero_gap() {
        let g = TemporalGraph::new(4, vec![k3(), k3()]).unwrap();
        for sigma in [int(0), int(1), int(2)] {
            let report = sds_solve(&g, sigma, &SearchConfig::default()).unwrap();
            assert_eq!(report.objective, int(0));
            assert!(report.profile.total >= sigma);
        }
    }

    #[test]
    fn sds_rejects_unreachable_floor() {
        let g = TemporalGraph::new(3, vec![k3()]).unwrap();
        let err = sds_solve(&g, int(99), &SearchConfig::default()).unwrap_err();
        assert!(matches!(err, Error::Infeasible { d_tds, .. } if d_tds == int(1)));
        assert!(err.to_string().contains("d_tds = 1"));
    }

    #[test]
    fn single_vertex_graph() {
        let g = TemporalGraph::new(1, vec![vec![]]).unwrap();
        let cfg = SearchConfig::exact();
        assert_eq!(fds_solve(&g, int(0), &cfg).unwrap().objective, int(0));
        assert_eq!(mds_solve(&g, &cfg).unwrap().objective, int(0));
        assert_eq!(sds_solve(&g, int(0), &cfg).unwrap().objective, int(0));
    }

    #[test]
    fn rejects_non_positive_epsilon() {
        let g = TemporalGraph::new(3, vec![k3()]).unwrap();
        let cfg = SearchConfig { epsilon: int(0), ..Default::default() };
        assert!(fds_solve(&g, int(0), &cfg).is_err());
    }
}
