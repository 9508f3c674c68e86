//! Solver results and their JSON / CSV renderings.

use std::fmt;
use std::time::Duration;

use serde::Serialize;

use crate::graph::{DensityProfile, VertexSet};
use crate::rational::{fmt2, parts, to_f64, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    Tds,
    Fds,
    Sds,
    Mds,
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Problem::Tds => "TDS",
            Problem::Fds => "FDS",
            Problem::Sds => "SDS",
            Problem::Mds => "MDS",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Greedy,
    Peel,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Exact => "Exact",
            Method::Greedy => "Greedy",
            Method::Peel => "Peel",
        })
    }
}

/// How much the reported objective can be trusted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// The objective is the true optimum.
    Exact,
    /// Within the given multiplicative factor of the optimum.
    Approx(Rational),
    /// No guarantee (heuristics).
    Heuristic,
    /// An exact search was cut short; bounds are best effort.
    Uncertified(String),
}

impl Certificate {
    pub fn is_certified(&self) -> bool {
        matches!(self, Certificate::Exact | Certificate::Approx(_))
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::Exact => f.write_str("exact"),
            Certificate::Approx(ratio) => write!(f, "within factor {ratio}"),
            Certificate::Heuristic => f.write_str("heuristic"),
            Certificate::Uncertified(why) => write!(f, "uncertified: {why}"),
        }
    }
}

/// One probe of a parametric search: the trial value and whether the
/// auxiliary solve returned a non-empty set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub gamma: Rational,
    pub nonempty: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MoveKind {
    Add,
    Remove,
}

/// An accepted single-vertex move of a greedy search, with the state it
/// produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyMove {
    pub kind: MoveKind,
    pub vertex: usize,
    pub gap: Rational,
    pub total: Rational,
}

/// One density-floor candidate tried in the first phase of the FDS greedy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaAttempt {
    pub k: usize,
    pub sigma: Rational,
    pub feasible: bool,
    pub total: Rational,
    pub gap: Rational,
    pub moves: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GreedyTrace {
    /// Accepted moves (for FDS: those of the hill-climbing phase).
    pub moves: Vec<GreedyMove>,
    pub sigma_attempts: Vec<SigmaAttempt>,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub problem: Problem,
    pub method: Method,
    pub alpha: Option<Rational>,
    pub sigma: Option<Rational>,
    pub epsilon: Option<Rational>,
    pub set: VertexSet,
    pub profile: DensityProfile,
    /// Total density (TDS/FDS), density gap (SDS) or minimum density (MDS).
    pub objective: Rational,
    pub iterations: usize,
    pub trace: Vec<TraceStep>,
    pub greedy: Option<GreedyTrace>,
    pub elapsed: Duration,
    pub certificate: Certificate,
    pub warnings: Vec<String>,
}

impl SolveReport {
    pub(crate) fn new(problem: Problem, method: Method, set: VertexSet, profile: DensityProfile) -> Self {
        let objective = objective_of(problem, &profile);
        SolveReport {
            problem,
            method,
            alpha: None,
            sigma: None,
            epsilon: None,
            set,
            profile,
            objective,
            iterations: 0,
            trace: Vec::new(),
            greedy: None,
            elapsed: Duration::ZERO,
            certificate: Certificate::Exact,
            warnings: Vec::new(),
        }
    }

    /// Short algorithm label, e.g. `FDS-Exact`.
    pub fn label(&self) -> String {
        format!("{}-{}", self.problem, self.method)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let p = &self.profile;
        let trace: Vec<_> = self
            .trace
            .iter()
            .map(|s| serde_json::json!({ "gamma": exact(&s.gamma), "nonempty": s.nonempty }))
            .collect();
        let greedy = self.greedy.as_ref().map(|g| {
            serde_json::json!({
                "moves": g.moves.iter().map(|m| serde_json::json!({
                    "kind": m.kind, "vertex": m.vertex, "gap": exact(&m.gap), "total": exact(&m.total),
                })).collect::<Vec<_>>(),
                "sigma_attempts": g.sigma_attempts.iter().map(|a| serde_json::json!({
                    "k": a.k, "sigma": exact(&a.sigma), "feasible": a.feasible,
                    "total": exact(&a.total), "gap": exact(&a.gap), "moves": a.moves,
                })).collect::<Vec<_>>(),
            })
        });
        serde_json::json!({
            "problem": self.problem,
            "method": self.method,
            "algorithm": self.label(),
            "parameters": {
                "alpha": self.alpha.as_ref().map(exact),
                "sigma": self.sigma.as_ref().map(exact),
                "epsilon": self.epsilon.as_ref().map(exact),
            },
            "set": self.set,
            "size": self.set.len(),
            "profile": {
                "edge_counts": p.edge_counts,
                "densities": p.densities.iter().map(exact).collect::<Vec<_>>(),
                "total": exact(&p.total),
                "gap": exact(&p.gap),
                "edge_gap": p.edge_gap,
            },
            "objective": exact(&self.objective),
            "iterations": self.iterations,
            "trace": trace,
            "greedy": greedy,
            "time_seconds": self.elapsed.as_secs_f64(),
            "certificate": self.certificate.to_string(),
            "certified": self.certificate.is_certified(),
            "warnings": self.warnings,
        })
    }

    /// The CSV row for this report.
    pub fn row(&self, algorithm: String, constraint: Option<Rational>, jaccard: Option<Rational>) -> ReportRow {
        let p = &self.profile;
        ReportRow {
            algorithm,
            constraint: constraint.as_ref().map(fmt2).unwrap_or_default(),
            d_sum: fmt2(&p.total),
            d_min: fmt2(&p.min_density()),
            d_max: fmt2(&p.max_density()),
            d_avg: fmt2(&p.avg_density()),
            delta: fmt2(&p.gap),
            iterations: self.iterations.to_string(),
            size: self.set.len().to_string(),
            jaccard: jaccard.as_ref().map(fmt2).unwrap_or_default(),
            time_seconds: format!("{:.3}", self.elapsed.as_secs_f64()),
        }
    }
}

pub(crate) fn objective_of(problem: Problem, profile: &DensityProfile) -> Rational {
    match problem {
        Problem::Tds | Problem::Fds => profile.total,
        Problem::Sds => profile.gap,
        Problem::Mds => profile.min_density(),
    }
}

fn exact(value: &Rational) -> serde_json::Value {
    let (num, den) = parts(value);
    let int = |x: i128| match i64::try_from(x) {
        Ok(small) => serde_json::json!(small),
        Err(_) => serde_json::json!(x.to_string()),
    };
    serde_json::json!({ "num": int(num), "den": int(den), "value": to_f64(value) })
}

/// Column order of the CSV report.
pub const CSV_HEADER: [&str; 11] = [
    "algorithm",
    "constraint",
    "d_sum",
    "d_min",
    "d_max",
    "d_avg",
    "delta",
    "iterations",
    "size",
    "jaccard",
    "time_seconds",
];

/// One CSV line: already-rendered cells, empty strings for missing values.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ReportRow {
    pub algorithm: String,
    pub constraint: String,
    pub d_sum: String,
    pub d_min: String,
    pub d_max: String,
    pub d_avg: String,
    pub delta: String,
    pub iterations: String,
    pub size: String,
    pub jaccard: String,
    pub time_seconds: String,
}

impl ReportRow {
    /// A row for a run that failed; only the label is filled in.
    pub fn failed(algorithm: String, constraint: Option<Rational>) -> Self {
        ReportRow {
            algorithm,
            constraint: constraint.as_ref().map(fmt2).unwrap_or_default(),
            ..Default::default()
        }
    }
}

/// Writes rows under [`CSV_HEADER`].
pub fn write_csv<W: std::io::Write>(out: W, rows: &[ReportRow]) -> csv::Result<()> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    writer.write_record(CSV_HEADER)?;
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}
