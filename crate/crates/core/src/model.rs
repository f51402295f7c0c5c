//! Instance and solution types for the two-stage stochastic Steiner tree
//! problem, with the objective and the feasibility predicate.

use std::collections::{BTreeSet, HashMap};

use crate::dsu::DisjointSets;
use crate::error::{Error, Result};

pub type NodeId = usize;
/// Dense edge id: position of the edge in [`Graph::edges`].
pub type EdgeId = usize;
pub type EdgeSet = BTreeSet<EdgeId>;

/// Tolerance on the sum of scenario probabilities.
pub const PROBABILITY_TOLERANCE: f64 = 1e-6;

/// Simple undirected graph. Edge ids are positions in the edge list.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    node_count: usize,
    edges: Vec<(NodeId, NodeId)>,
    adjacency: Vec<Vec<(NodeId, EdgeId)>>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, dangling endpoints and parallel
    /// edges.
    pub fn new(node_count: usize, edges: Vec<(NodeId, NodeId)>) -> Result<Self> {
        let mut seen = HashMap::with_capacity(edges.len());
        let mut adjacency = vec![Vec::new(); node_count];
        for (id, &(u, v)) in edges.iter().enumerate() {
            if u >= node_count || v >= node_count {
                return Err(Error::Structural(format!(
                    "edge {id} ({u}, {v}) references a node outside 0..{node_count}"
                )));
            }
            if u == v {
                return Err(Error::Validation(format!("edge {id} is a self-loop on node {u}")));
            }
            if let Some(prev) = seen.insert((u.min(v), u.max(v)), id) {
                return Err(Error::Validation(format!(
                    "edge {id} duplicates edge {prev} between nodes {u} and {v}"
                )));
            }
            adjacency[u].push((v, id));
            adjacency[v].push((u, id));
        }
        Ok(Self {
            node_count,
            edges,
            adjacency,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn endpoints(&self, edge: EdgeId) -> (NodeId, NodeId) {
        self.edges[edge]
    }

    /// Neighbours of `node` as `(neighbour, edge)` pairs in increasing edge id.
    pub fn neighbors(&self, node: NodeId) -> &[(NodeId, EdgeId)] {
        &self.adjacency[node]
    }

    /// Looks up the edge joining `u` and `v`, in either orientation.
    pub fn find_edge(&self, u: NodeId, v: NodeId) -> Option<EdgeId> {
        if u >= self.node_count {
            return None;
        }
        self.adjacency[u]
            .iter()
            .find(|&&(w, _)| w == v)
            .map(|&(_, e)| e)
    }

    /// True when all `nodes` lie in one component of `(V, edges)`.
    pub fn connects<I>(&self, edges: I, nodes: &[NodeId]) -> bool
    where
        I: IntoIterator<Item = EdgeId>,
    {
        if nodes.len() < 2 {
            return true;
        }
        let mut sets = DisjointSets::new(self.node_count);
        for e in edges {
            let (u, v) = self.edges[e];
            sets.union(u, v);
        }
        let root = sets.find(nodes[0]);
        nodes[1..].iter().all(|&n| sets.find(n) == root)
    }
}

/// Non-negative, finite edge costs indexed by edge id.
#[derive(Debug, Clone, PartialEq)]
pub struct CostVector(Vec<f64>);

impl CostVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some((i, c)) = values
            .iter()
            .enumerate()
            .find(|(_, c)| !c.is_finite() || **c < 0.0)
        {
            return Err(Error::Validation(format!("cost of edge {i} is {c}, expected a finite value >= 0")));
        }
        Ok(Self(values))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Sum over `edges`, accumulated in iteration order.
    pub fn total<I>(&self, edges: I) -> f64
    where
        I: IntoIterator<Item = EdgeId>,
    {
        edges.into_iter().fold(0.0, |acc, e| acc + self.0[e])
    }
}

impl std::ops::Index<EdgeId> for CostVector {
    type Output = f64;

    fn index(&self, edge: EdgeId) -> &f64 {
        &self.0[edge]
    }
}

impl AsRef<[f64]> for CostVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// One realisation of the second stage.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    probability: f64,
    costs: CostVector,
    terminals: Vec<NodeId>,
}

impl Scenario {
    /// `terminals` are stored sorted; duplicates are rejected.
    pub fn new(probability: f64, costs: CostVector, mut terminals: Vec<NodeId>) -> Result<Self> {
        if !(probability > 0.0 && probability <= 1.0) {
            return Err(Error::Validation(format!(
                "scenario probability {probability} outside (0, 1]"
            )));
        }
        terminals.sort_unstable();
        if let Some(w) = terminals.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Validation(format!("terminal {} listed twice", w[0])));
        }
        Ok(Self {
            probability,
            costs,
            terminals,
        })
    }

    pub fn probability(&self) -> f64 {
        self.probability
    }

    pub fn costs(&self) -> &CostVector {
        &self.costs
    }

    pub fn terminals(&self) -> &[NodeId] {
        &self.terminals
    }

    /// Fewer than two terminals: the empty edge set already serves it.
    pub fn is_trivial(&self) -> bool {
        self.terminals.len() < 2
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SstpInstance {
    graph: Graph,
    first_stage_costs: CostVector,
    scenarios: Vec<Scenario>,
}

impl SstpInstance {
    /// Validates cost lengths, terminal ranges and the probability sum.
    /// Probabilities are stored as given, not renormalised.
    pub fn new(graph: Graph, first_stage_costs: CostVector, scenarios: Vec<Scenario>) -> Result<Self> {
        let m = graph.edge_count();
        if first_stage_costs.len() != m {
            return Err(Error::LengthMismatch {
                expected: m,
                found: first_stage_costs.len(),
            });
        }
        if scenarios.is_empty() {
            return Err(Error::Validation("instance has no scenarios".into()));
        }
        for (s, scenario) in scenarios.iter().enumerate() {
            if scenario.costs.len() != m {
                return Err(Error::LengthMismatch {
                    expected: m,
                    found: scenario.costs.len(),
                });
            }
            if let Some(&t) = scenario.terminals.iter().find(|&&t| t >= graph.node_count()) {
                return Err(Error::Structural(format!(
                    "scenario {s} terminal {t} outside 0..{}",
                    graph.node_count()
                )));
            }
        }
        let sum: f64 = scenarios.iter().map(|s| s.probability).sum();
        if (sum - 1.0).abs() > PROBABILITY_TOLERANCE {
            return Err(Error::ProbabilitySum {
                sum,
                tolerance: PROBABILITY_TOLERANCE,
            });
        }
        Ok(Self {
            graph,
            first_stage_costs,
            scenarios,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn first_stage_costs(&self) -> &CostVector {
        &self.first_stage_costs
    }

    pub fn scenarios(&self) -> &[Scenario] {
        &self.scenarios
    }

    pub fn scenario(&self, s: usize) -> &Scenario {
        &self.scenarios[s]
    }

    pub fn scenario_count(&self) -> usize {
        self.scenarios.len()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.scenarios.iter().map(|s| s.probability).collect()
    }

    /// First-stage cost plus probability-weighted second-stage costs, summed
    /// in edge id order and then scenario order. Every cost reported by this
    /// crate goes through this function so equal solutions compare equal.
    pub(crate) fn compose_cost(&self, first_stage: &EdgeSet, per_scenario: &[EdgeSet]) -> f64 {
        let first = self.first_stage_costs.total(first_stage.iter().copied());
        let second: f64 = self
            .scenarios
            .iter()
            .zip(per_scenario)
            .fold(0.0, |acc, (sc, set)| acc + sc.probability * sc.costs.total(set.iter().copied()));
        first + second
    }

    /// Weighted second-stage sum given per-scenario unweighted costs.
    pub(crate) fn weighted_recourse(&self, scenario_costs: &[f64]) -> f64 {
        self.scenarios
            .iter()
            .zip(scenario_costs)
            .fold(0.0, |acc, (sc, c)| acc + sc.probability * c)
    }
}

/// First-stage purchases plus the completing edges of every scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticSolution {
    pub first_stage: EdgeSet,
    pub per_scenario: Vec<EdgeSet>,
    pub cost: f64,
}

impl StochasticSolution {
    /// Builds a solution and fills in its cost. Fails on structural errors or
    /// overlap between the stages; feasibility is not checked here.
    pub fn new(instance: &SstpInstance, first_stage: EdgeSet, per_scenario: Vec<EdgeSet>) -> Result<Self> {
        let mut sol = Self {
            first_stage,
            per_scenario,
            cost: 0.0,
        };
        sol.cost = solution_cost(instance, &sol)?;
        Ok(sol)
    }
}

fn validate_structure(instance: &SstpInstance, sol: &StochasticSolution) -> Result<()> {
    let m = instance.edge_count();
    if sol.per_scenario.len() != instance.scenario_count() {
        return Err(Error::Structural(format!(
            "solution has {} scenario sets, instance has {} scenarios",
            sol.per_scenario.len(),
            instance.scenario_count()
        )));
    }
    let out_of_range = |set: &EdgeSet| set.iter().next_back().is_some_and(|&e| e >= m);
    if out_of_range(&sol.first_stage) {
        return Err(Error::Structural(format!("first-stage edge id outside 0..{m}")));
    }
    for (s, set) in sol.per_scenario.iter().enumerate() {
        if out_of_range(set) {
            return Err(Error::Structural(format!("scenario {s} edge id outside 0..{m}")));
        }
        if let Some(e) = set.intersection(&sol.first_stage).next() {
            return Err(Error::Validation(format!(
                "edge {e} bought in both the first stage and scenario {s}"
            )));
        }
    }
    Ok(())
}

/// Objective value: first-stage cost plus expected second-stage cost.
pub fn solution_cost(instance: &SstpInstance, sol: &StochasticSolution) -> Result<f64> {
    validate_structure(instance, sol)?;
    Ok(instance.compose_cost(&sol.first_stage, &sol.per_scenario))
}

/// True iff every scenario's terminals are connected by first-stage plus
/// that scenario's edges.
pub fn check_feasible(instance: &SstpInstance, sol: &StochasticSolution) -> Result<bool> {
    validate_structure(instance, sol)?;
    let graph = instance.graph();
    Ok(instance
        .scenarios()
        .iter()
        .zip(&sol.per_scenario)
        .all(|(sc, set)| graph.connects(sol.first_stage.iter().chain(set).copied(), sc.terminals())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge_set(ids: &[EdgeId]) -> EdgeSet {
        ids.iter().copied().collect()
    }

    fn path_instance(c0: f64, cs: f64) -> SstpInstance {
        let graph = Graph::new(2, vec![(0, 1)]).unwrap();
        let sc = Scenario::new(1.0, CostVector::new(vec![cs]).unwrap(), vec![0, 1]).unwrap();
        SstpInstance::new(graph, CostVector::new(vec![c0]).unwrap(), vec![sc]).unwrap()
    }

    #[test]
    fn graph_rejects_parallel_and_loops() {
        assert!(matches!(Graph::new(3, vec![(0, 1), (1, 0)]), Err(Error::Validation(_))));
        assert!(matches!(Graph::new(3, vec![(2, 2)]), Err(Error::Validation(_))));
        assert!(matches!(Graph::new(3, vec![(0, 3)]), Err(Error::Structural(_))));
    }

    #[test]
    fn cost_vector_rejects_negative() {
        assert!(CostVector::new(vec![1.0, -0.5]).is_err());
        assert!(CostVector::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn single_scenario_cost() {
        let inst = path_instance(3.0, 7.0);
        let sol = StochasticSolution::new(&inst, EdgeSet::new(), vec![edge_set(&[0])]).unwrap();
        assert_eq!(sol.cost, 7.0);
    }

    #[test]
    fn first_stage_only_cost() {
        let graph = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let sc = Scenario::new(1.0, CostVector::new(vec![1.0, 1.0]).unwrap(), vec![0, 2]).unwrap();
        let inst = SstpInstance::new(graph, CostVector::new(vec![11.0, 9.0]).unwrap(), vec![sc]).unwrap();
        let sol = StochasticSolution::new(&inst, edge_set(&[0, 1]), vec![EdgeSet::new()]).unwrap();
        assert_eq!(sol.cost, 20.0);
    }

    #[test]
    fn overlap_and_range_errors() {
        let inst = path_instance(1.0, 1.0);
        let overlap = StochasticSolution {
            first_stage: edge_set(&[0]),
            per_scenario: vec![edge_set(&[0])],
            cost: 0.0,
        };
        assert!(matches!(solution_cost(&inst, &overlap), Err(Error::Validation(_))));
        let range = StochasticSolution {
            first_stage: edge_set(&[4]),
            per_scenario: vec![EdgeSet::new()],
            cost: 0.0,
        };
        assert!(matches!(solution_cost(&inst, &range), Err(Error::Structural(_))));
        let arity = StochasticSolution {
            first_stage: EdgeSet::new(),
            per_scenario: vec![],
            cost: 0.0,
        };
        assert!(matches!(check_feasible(&inst, &arity), Err(Error::Structural(_))));
    }

    #[test]
    fn feasibility_on_a_path() {
        let inst = path_instance(1.0, 1.0);
        let bought = StochasticSolution::new(&inst, edge_set(&[0]), vec![EdgeSet::new()]).unwrap();
        assert!(check_feasible(&inst, &bought).unwrap());
        let empty = StochasticSolution::new(&inst, EdgeSet::new(), vec![EdgeSet::new()]).unwrap();
        assert!(!check_feasible(&inst, &empty).unwrap());
    }

    #[test]
    fn single_terminal_scenario_is_trivially_feasible() {
        let graph = Graph::new(2, vec![(0, 1)]).unwrap();
        let lone = Scenario::new(0.5, CostVector::new(vec![1.0]).unwrap(), vec![1]).unwrap();
        let none = Scenario::new(0.5, CostVector::new(vec![1.0]).unwrap(), vec![]).unwrap();
        let inst = SstpInstance::new(graph, CostVector::new(vec![1.0]).unwrap(), vec![lone, none]).unwrap();
        let sol = StochasticSolution::new(&inst, EdgeSet::new(), vec![EdgeSet::new(), EdgeSet::new()]).unwrap();
        assert!(check_feasible(&inst, &sol).unwrap());
        assert_eq!(sol.cost, 0.0);
    }

    #[test]
    fn probability_sum_enforced() {
        let graph = Graph::new(2, vec![(0, 1)]).unwrap();
        let sc = Scenario::new(0.9, CostVector::new(vec![1.0]).unwrap(), vec![0, 1]).unwrap();
        let err = SstpInstance::new(graph, CostVector::new(vec![1.0]).unwrap(), vec![sc]).unwrap_err();
        assert!(matches!(err, Error::ProbabilitySum { .. }));
    }
}
