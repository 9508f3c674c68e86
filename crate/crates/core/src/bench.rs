//! Batch runs described by a TOML file, reported as CSV rows.
//!
//! ```toml
//! epsilon = "0.01"
//! backend = "bnb"
//! time_limit = 60
//!
//! [[instances]]
//! kind = "synthetic"
//! seeds = [1, 2, 3]
//!
//! [[runs]]
//! problem = "fds"
//! methods = ["exact", "greedy"]
//! constraints = [3.9]
//!
//! [[runs]]
//! problem = "sds"
//! methods = ["greedy"]
//! constraints = ["0.69"]
//! ```
//!
//! FDS constraints are values of alpha; SDS constraints are density floors
//! relative to the best total density (`sigma = c * d_tds`).

use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Deserialize;

use crate::aux::Budget;
use crate::densest::{peel_baseline, tds_exact};
use crate::error::{Error, Result};
use crate::graph::{TemporalGraph, VertexSet};
use crate::greedy::{fds_greedy, sds_greedy, DEFAULT_K_SCHEDULE};
use crate::instances::{gen_clique_reduction, gen_random, gen_synthetic, jaccard};
use crate::io;
use crate::rational::{parse_rational, Rational};
use crate::report::{Method, Problem, ReportRow, SolveReport};
use crate::search::{fds_solve, mds_solve, sds_solve, Backend, SearchConfig};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Number {
    fn to_rational(&self) -> Result<Rational> {
        let text = match self {
            Number::Int(v) => v.to_string(),
            Number::Float(v) => v.to_string(),
            Number::Text(s) => s.clone(),
        };
        parse_rational(&text).map_err(|e| Error::Config(format!("bad number '{text}': {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum InstanceSpec {
    Synthetic {
        seeds: Vec<u64>,
    },
    File {
        path: PathBuf,
        name: Option<String>,
    },
    Random {
        n: usize,
        r: usize,
        m: usize,
        seeds: Vec<u64>,
    },
    /// Clique reduction of a random single-snapshot graph `G(h_n, h_m)`.
    Clique {
        h_n: usize,
        h_m: usize,
        k: usize,
        seeds: Vec<u64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemName {
    Tds,
    Fds,
    Sds,
    Mds,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodName {
    Exact,
    Greedy,
    Peel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendName {
    Enum,
    Bnb,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub problem: ProblemName,
    pub methods: Vec<MethodName>,
    #[serde(default)]
    pub constraints: Vec<Number>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    #[serde(default)]
    pub instances: Vec<InstanceSpec>,
    #[serde(default)]
    pub runs: Vec<RunSpec>,
    pub epsilon: Option<Number>,
    #[serde(default)]
    pub exactness: bool,
    pub backend: Option<BackendName>,
    /// Seconds allowed for each subproblem solve of an exact driver.
    pub time_limit: Option<f64>,
    /// Seconds allowed for a whole exact driver call.
    pub total_time_limit: Option<f64>,
    /// Search nodes allowed for each subproblem solve. Unlike the time
    /// limits this keeps budgeted rows reproducible.
    pub node_limit: Option<u64>,
    pub k_schedule: Option<Vec<usize>>,
    /// Adds TDS and MDS rows for every instance.
    #[serde(default = "default_true")]
    pub baselines: bool,
}

fn default_true() -> bool {
    true
}

impl BenchConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        let mut config = Self::parse(&text)?;
        // File instances are relative to the config file.
        if let Some(dir) = path.parent() {
            for instance in &mut config.instances {
                if let InstanceSpec::File { path, .. } = instance {
                    if path.is_relative() {
                        *path = dir.join(&*path);
                    }
                }
            }
        }
        Ok(config)
    }

    fn search_config(&self) -> Result<SearchConfig> {
        let mut cfg = SearchConfig { exactness: self.exactness, ..Default::default() };
        if let Some(eps) = &self.epsilon {
            cfg.epsilon = eps.to_rational()?;
        }
        cfg.backend = match self.backend {
            Some(BackendName::Enum) => Backend::Enumeration,
            Some(BackendName::Bnb) | None => Backend::BranchAndBound,
        };
        if let Some(secs) = self.time_limit {
            cfg.aux_budget = Budget::with_time_limit(seconds(secs)?);
        }
        cfg.aux_budget.node_limit = self.node_limit;
        if let Some(secs) = self.total_time_limit {
            cfg.total_time_limit = Some(seconds(secs)?);
        }
        Ok(cfg)
    }
}

fn seconds(secs: f64) -> Result<Duration> {
    Duration::try_from_secs_f64(secs).map_err(|_| Error::Config(format!("invalid time limit {secs}")))
}

/// A generated or loaded graph with an optional ground-truth set.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub graph: TemporalGraph,
    pub truth: Option<VertexSet>,
}

impl InstanceSpec {
    pub fn build(&self) -> Result<Vec<Instance>> {
        match self {
            InstanceSpec::Synthetic { seeds } => Ok(seeds
                .iter()
                .map(|&seed| {
                    let (graph, truth) = gen_synthetic(seed);
                    Instance { name: format!("syn-s{seed}"), graph, truth: Some(truth.set) }
                })
                .collect()),
            InstanceSpec::File { path, name } => {
                let graph = io::load(path)?.graph;
                let name = name.clone().unwrap_or_else(|| {
                    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "file".into())
                });
                Ok(vec![Instance { name, graph, truth: None }])
            }
            InstanceSpec::Random { n, r, m, seeds } => seeds
                .iter()
                .map(|&seed| {
                    let graph = gen_random(*n, *r, *m, seed)?;
                    Ok(Instance { name: format!("rnd-n{n}-r{r}-m{m}-s{seed}"), graph, truth: None })
                })
                .collect(),
            InstanceSpec::Clique { h_n, h_m, k, seeds } => seeds
                .iter()
                .map(|&seed| {
                    let h = gen_random(*h_n, 1, *h_m, seed)?;
                    let graph = gen_clique_reduction(&h, *k)?;
                    Ok(Instance { name: format!("clq-n{h_n}-m{h_m}-k{k}-s{seed}"), graph, truth: None })
                })
                .collect(),
        }
    }
}

/// Rows in config order plus the messages of runs that failed; a failed
/// run still gets a row with only its label cells filled.
#[derive(Debug, Clone, Default)]
pub struct BenchOutput {
    pub rows: Vec<ReportRow>,
    pub errors: Vec<(usize, String)>,
}

struct Runner {
    cfg: SearchConfig,
    k_schedule: Vec<usize>,
}

impl Runner {
    fn solve(
        &self,
        graph: &TemporalGraph,
        problem: ProblemName,
        method: MethodName,
        constraint: Option<&Rational>,
    ) -> Result<SolveReport> {
        let need = |what: &str| {
            constraint.copied().ok_or_else(|| Error::Config(format!("{what} runs need a constraint")))
        };
        match (problem, method) {
            (ProblemName::Tds, MethodName::Exact) => Ok(tds_exact(graph)),
            (ProblemName::Tds, MethodName::Peel) => Ok(peel_baseline(graph)),
            (ProblemName::Mds, MethodName::Exact) => mds_solve(graph, &self.cfg),
            (ProblemName::Fds, MethodName::Exact) => fds_solve(graph, need("FDS")?, &self.cfg),
            (ProblemName::Fds, MethodName::Greedy) => fds_greedy(graph, need("FDS")?, &self.k_schedule),
            (ProblemName::Sds, method @ (MethodName::Exact | MethodName::Greedy)) => {
                let sigma = need("SDS")? * tds_exact(graph).objective;
                if method == MethodName::Exact {
                    sds_solve(graph, sigma, &self.cfg)
                } else {
                    sds_greedy(graph, sigma)
                }
            }
            (p, m) => Err(Error::Config(format!("no {m:?} method for {p:?}").to_lowercase())),
        }
    }
}

fn label(problem: ProblemName, method: MethodName) -> String {
    let problem = match problem {
        ProblemName::Tds => Problem::Tds,
        ProblemName::Fds => Problem::Fds,
        ProblemName::Sds => Problem::Sds,
        ProblemName::Mds => Problem::Mds,
    };
    let method = match method {
        MethodName::Exact => Method::Exact,
        MethodName::Greedy => Method::Greedy,
        MethodName::Peel => Method::Peel,
    };
    format!("{problem}-{method}")
}

pub fn bench_run(config: &BenchConfig) -> Result<BenchOutput> {
    let runner = Runner {
        cfg: config.search_config()?,
        k_schedule: config.k_schedule.clone().unwrap_or_else(|| DEFAULT_K_SCHEDULE.to_vec()),
    };
    let mut jobs: Vec<(ProblemName, MethodName, Option<Rational>)> = Vec::new();
    if config.baselines {
        jobs.push((ProblemName::Tds, MethodName::Exact, None));
        jobs.push((ProblemName::Mds, MethodName::Exact, None));
    }
    for run in &config.runs {
        let constraints = run.constraints.iter().map(Number::to_rational).collect::<Result<Vec<_>>>()?;
        for &method in &run.methods {
            if constraints.is_empty() {
                jobs.push((run.problem, method, None));
            }
            for c in &constraints {
                jobs.push((run.problem, method, Some(*c)));
            }
        }
    }

    let mut out = BenchOutput::default();
    for spec in &config.instances {
        for instance in spec.build()? {
            for (problem, method, constraint) in &jobs {
                let algorithm = format!("{}/{}", instance.name, label(*problem, *method));
                match runner.solve(&instance.graph, *problem, *method, constraint.as_ref()) {
                    Ok(report) => {
                        let score = instance.truth.as_ref().map(|truth| jaccard(&report.set, truth));
                        out.rows.push(report.row(algorithm, *constraint, score));
                    }
                    Err(e) => {
                        out.errors.push((out.rows.len(), format!("{algorithm}: {e}")));
                        out.rows.push(ReportRow::failed(algorithm, *constraint));
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::write_csv;

    #[test]
    fn empty_instance_list_gives_header_only() {
        let config = BenchConfig::parse("[[runs]]\nproblem = \"fds\"\nmethods = [\"greedy\"]\nconstraints = [1]\n").unwrap();
        let out = bench_run(&config).unwrap();
        assert!(out.rows.is_empty());
        let mut buf = Vec::new();
        write_csv(&mut buf, &out.rows).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "algorithm,constraint,d_sum,d_min,d_max,d_avg,delta,iterations,size,jaccard,time_seconds\n"
        );
    }

    #[test]
    fn rows_follow_config_order() {
        let config = BenchConfig::parse(
            r#"
            baselines = false
            [[instances]]
            kind = "random"
            n = 8
            r = 2
            m = 10
            seeds = [1, 2]
            [[runs]]
            problem = "fds"
            methods = ["exact", "greedy"]
            constraints = [0.5, "1/2", 3]
            [[runs]]
            problem = "tds"
            methods = ["peel"]
            "#,
        )
        .unwrap();
        let out = bench_run(&config).unwrap();
        assert_eq!(out.rows.len(), 2 * (2 * 3 + 1));
        assert_eq!(out.rows[0].algorithm, "rnd-n8-r2-m10-s1/FDS-Exact");
        assert_eq!(out.rows[3].algorithm, "rnd-n8-r2-m10-s1/FDS-Greedy");
        assert_eq!(out.rows[6].algorithm, "rnd-n8-r2-m10-s1/TDS-Peel");
        assert_eq!(out.rows[7].algorithm, "rnd-n8-r2-m10-s2/FDS-Exact");
        assert_eq!(out.rows[0].constraint, "0.50");
    }

    #[test]
    fn failures_are_recorded_and_run_continues() {
        let config = BenchConfig::parse(
            r#"
            [[instances]]
            kind = "random"
            n = 6
            r = 2
            m = 6
            seeds = [3]
            [[runs]]
            problem = "sds"
            methods = ["greedy"]
            constraints = [2, 1]
            [[runs]]
            problem = "mds"
            methods = ["peel"]
            "#,
        )
        .unwrap();
        let out = bench_run(&config).unwrap();
        assert_eq!(out.rows.len(), 5);
        let failed: Vec<usize> = out.errors.iter().map(|e| e.0).collect();
        assert_eq!(failed, vec![2, 4]);
        assert!(out.rows[2].d_sum.is_empty());
        assert!(!out.rows[3].d_sum.is_empty());
        assert!(out.errors[0].1.contains("d_tds"));
    }

    #[test]
    fn rejects_unknown_fields() {
        assert!(BenchConfig::parse("epsilon = 0.1\nbogus = 1\n").is_err());
        assert!(BenchConfig::parse("[[instances]]\nkind = \"nope\"\n").is_err());
        assert!(BenchConfig::parse("epsilon = \"-1\"\n").unwrap().search_config().is_err());
    }
}
