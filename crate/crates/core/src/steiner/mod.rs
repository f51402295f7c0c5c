//! Deterministic Steiner tree layer: the terminal shortest-path metric, the
//! MST 2-approximation, the perturbed-cost decoder and an exact oracle for
//! graphs of at most 16 nodes.

mod approx;
mod decoder;
mod exact;
mod metric;

pub use approx::{mst_approx, MstApprox};
pub(crate) use decoder::cost_multiplier;
pub use decoder::{perturb_costs, stp_decode, SteinerDecoder};
pub use exact::{exact_stp, EXACT_NODE_LIMIT};
pub use metric::{terminal_metric, TerminalMetric};

use crate::error::{Error, Result};
use crate::model::{EdgeId, Graph, NodeId};

/// A single Steiner tree instance borrowing its graph, costs and terminals.
/// Terminals are sorted and distinct.
#[derive(Debug, Clone, Copy)]
pub struct StpInstance<'a> {
    graph: &'a Graph,
    costs: &'a [f64],
    terminals: &'a [NodeId],
}

impl<'a> StpInstance<'a> {
    pub fn new(graph: &'a Graph, costs: &'a [f64], terminals: &'a [NodeId]) -> Result<Self> {
        if costs.len() != graph.edge_count() {
            return Err(Error::LengthMismatch {
                expected: graph.edge_count(),
                found: costs.len(),
            });
        }
        if terminals.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Validation("terminals must be sorted and distinct".into()));
        }
        if terminals.last().is_some_and(|&t| t >= graph.node_count()) {
            return Err(Error::Structural("terminal outside the graph".into()));
        }
        Ok(Self {
            graph,
            costs,
            terminals,
        })
    }

    pub fn graph(&self) -> &'a Graph {
        self.graph
    }

    pub fn costs(&self) -> &'a [f64] {
        self.costs
    }

    pub fn terminals(&self) -> &'a [NodeId] {
        self.terminals
    }

    /// Cost of `edges` under this instance's costs, summed in the given order.
    pub fn cost_of(&self, edges: &[EdgeId]) -> f64 {
        edges.iter().fold(0.0, |acc, &e| acc + self.costs[e])
    }
}

/// A fast Steiner heuristic usable both inside the decoder and when
/// evaluating recourse costs. Returned edge ids must be sorted ascending.
pub trait SteinerHeuristic: Sync {
    fn solve(&self, instance: &StpInstance<'_>) -> Result<Vec<EdgeId>>;
}

impl<H: SteinerHeuristic + ?Sized> SteinerHeuristic for &H {
    fn solve(&self, instance: &StpInstance<'_>) -> Result<Vec<EdgeId>> {
        (**self).solve(instance)
    }
}

/// Structural check used by tests and debug assertions: `edges` form a tree
/// (acyclic and connected) containing every terminal.
pub fn is_steiner_tree(graph: &Graph, edges: &[EdgeId], terminals: &[NodeId]) -> bool {
    if edges.is_empty() {
        return terminals.len() < 2;
    }
    let mut sets = crate::dsu::DisjointSets::new(graph.node_count());
    let mut touched = vec![false; graph.node_count()];
    for &e in edges {
        let (u, v) = graph.endpoints(e);
        if !sets.union(u, v) {
            return false;
        }
        touched[u] = true;
        touched[v] = true;
    }
    let nodes: Vec<_> = (0..graph.node_count()).filter(|&n| touched[n]).collect();
    let root = sets.find(nodes[0]);
    nodes.iter().all(|&n| sets.find(n) == root) && terminals.iter().all(|&t| touched[t] && sets.find(t) == root)
}

/// Repeatedly removes leaves that are not terminals. `edges` must be a forest.
pub(crate) fn prune_leaves(graph: &Graph, edges: &mut Vec<EdgeId>, terminals: &[NodeId]) {
    let n = graph.node_count();
    let mut is_terminal = vec![false; n];
    for &t in terminals {
        is_terminal[t] = true;
    }
    let mut degree = vec![0usize; n];
    let mut incident: Vec<Vec<EdgeId>> = vec![Vec::new(); n];
    for &e in edges.iter() {
        let (u, v) = graph.endpoints(e);
        degree[u] += 1;
        degree[v] += 1;
        incident[u].push(e);
        incident[v].push(e);
    }
    let mut removed = vec![false; graph.edge_count()];
    let mut stack: Vec<NodeId> = (0..n).filter(|&v| degree[v] == 1 && !is_terminal[v]).collect();
    while let Some(v) = stack.pop() {
        if degree[v] != 1 {
            continue;
        }
        let Some(&e) = incident[v].iter().find(|&&e| !removed[e]) else {
            continue;
        };
        removed[e] = true;
        let (a, b) = graph.endpoints(e);
        let w = if a == v { b } else { a };
        degree[v] = 0;
        degree[w] -= 1;
        if degree[w] == 1 && !is_terminal[w] {
            stack.push(w);
        }
    }
    edges.retain(|&e| !removed[e]);
}
