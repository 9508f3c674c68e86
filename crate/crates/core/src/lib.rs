//! Dense subgraphs shared by a sequence of graph snapshots, with fairness
//! constraints on how evenly the density is spread across snapshots.
//!
//! * [`densest`]: maximum total density (TDS) via flattening and min-cuts,
//!   plus a peeling baseline.
//! * [`aux`]: exact solvers for the parametric subproblems.
//! * [`search`]: binary-search drivers for FDS, SDS and MDS.
//! * [`greedy`]: local-search heuristics for SDS and FDS.
//! * [`instances`]: synthetic, reduction-based and random generators.
//! * [`io`] and [`bench`]: edge-list files and benchmark reports.

pub mod aux;
pub mod bench;
pub mod densest;
pub mod error;
pub mod flow;
pub mod graph;
pub mod greedy;
pub mod instances;
pub mod io;
pub mod rational;
pub mod report;
pub mod search;
pub mod view;

pub use error::{Error, Result};
pub use graph::{DensityProfile, TemporalGraph, VertexSet};
pub use rational::Rational;
pub use report::{Certificate, Method, Problem, SolveReport};
