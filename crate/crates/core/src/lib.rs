//! Evolutionary framework for two-stage stochastic resource allocation
//! problems, instantiated on the two-stage stochastic Steiner tree problem.
//!
//! The framework alternates a first-stage local search over resource
//! purchases with per-scenario BRKGA runs, feeding the best chromosome of
//! every scenario back into the next local search. The Steiner instantiation
//! uses the MST 2-approximation as the inner heuristic and as the decoder
//! of the genetic algorithm.
//!
//! Module map:
//! - [`model`] and [`params`]: instance and solution types, objective and
//!   feasibility checks, control parameters.
//! - [`brkga`]: a generic biased random-key genetic algorithm.
//! - [`steiner`]: shortest-path metric, MST-approx, perturbed-cost decoder
//!   and an exact enumeration oracle for tiny graphs.
//! - [`evfw`]: recourse and reduced costs, local search, second-stage
//!   metaheuristic, convergence control and the main loop.
//! - [`oracle`]: exhaustive first-stage enumeration for desk-scale checks.
//! - [`io`]: instance format, solution listing, metrics and the batch
//!   harness.

pub mod brkga;
mod dsu;
pub mod error;
pub mod evfw;
pub mod io;
pub mod model;
pub mod oracle;
pub mod params;
pub mod steiner;

pub use error::{Error, Result};
pub use model::{
    check_feasible, solution_cost, CostVector, EdgeId, EdgeSet, Graph, NodeId, Scenario,
    SstpInstance, StochasticSolution,
};
pub use params::{BrkgaParams, EvfwParams};
