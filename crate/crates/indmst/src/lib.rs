//! Exact schedulers for incremental network design: given a connected set of
//! existing edges and a pool of potential edges that must all be built one
//! per period, order the builds so the total of per-period minimum spanning
//! tree weights is as small as possible. The same machinery runs over any
//! matroid through an independence oracle, with spanning trees as the
//! graphic special case.
//!
//! * [`matroid`]: independence oracles, bit sets, rank/closure/circuit
//!   primitives, greedy bases, exchange witnesses.
//! * [`graph`]: multigraphs, union-find, the graphic oracle, validation.
//! * [`solver`]: the three exact solvers and plan/trace types.
//! * [`reference`]: brute-force optima, lower-bound series, trace audits.
//! * [`io`]: instance text format, seeded generator, plan rendering.

pub mod error;
pub mod graph;
pub mod io;
pub mod matroid;
pub mod reference;
pub mod solver;

pub use error::{Error, Result};
pub use graph::Graph;
pub use matroid::{ElementId, ElementSet, Instance, MatroidOracle, Weight};
pub use solver::{BuildPlan, ExchangePair, TraceSnapshot};
