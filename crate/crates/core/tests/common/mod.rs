#![allow(dead_code)]

use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;
use stochastic_steiner::io::read_instance_file;
use stochastic_steiner::{CostVector, EdgeSet, Graph, NodeId, Scenario, SstpInstance, StochasticSolution};

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn ten_node() -> SstpInstance {
    read_instance_file(&data("ten_node.sstp")).unwrap()
}

/// Edge id of the 1-based pair `(u, v)`.
pub fn edge(inst: &SstpInstance, u: usize, v: usize) -> usize {
    inst.graph().find_edge(u - 1, v - 1).expect("edge exists")
}

pub fn ten_node_reference(inst: &SstpInstance) -> StochasticSolution {
    let set = |pairs: &[(usize, usize)]| -> EdgeSet { pairs.iter().map(|&(u, v)| edge(inst, u, v)).collect() };
    StochasticSolution::new(
        inst,
        set(&[(1, 5), (3, 10)]),
        vec![
            set(&[(1, 7), (1, 10)]),
            set(&[(1, 9), (1, 6), (6, 10)]),
            set(&[(1, 7), (7, 8), (1, 10)]),
            set(&[]),
            set(&[(1, 9), (8, 9), (1, 10)]),
        ],
    )
    .unwrap()
}

/// Four-node graph with edges a..f; terminals are nodes 0, 1, 3.
pub fn four_node() -> (Graph, Vec<f64>, Vec<NodeId>) {
    let g = Graph::new(4, vec![(0, 3), (2, 3), (1, 3), (0, 2), (1, 2), (0, 1)]).unwrap();
    (g, vec![9.0, 5.0, 9.0, 5.0, 5.0, 9.0], vec![0, 1, 3])
}

/// Connected graph: a random spanning tree plus `extra` random edges.
pub fn random_graph<R: Rng>(rng: &mut R, nodes: usize, extra: usize) -> Graph {
    let mut order: Vec<usize> = (0..nodes).collect();
    order.shuffle(rng);
    let mut pairs = Vec::new();
    for i in 1..nodes {
        let j = rng.gen_range(0..i);
        pairs.push((order[i].min(order[j]), order[i].max(order[j])));
    }
    for _ in 0..extra {
        let u = rng.gen_range(0..nodes);
        let v = rng.gen_range(0..nodes);
        let key = (u.min(v), u.max(v));
        if u != v && !pairs.contains(&key) {
            pairs.push(key);
        }
    }
    pairs.shuffle(rng);
    Graph::new(nodes, pairs).unwrap()
}

/// Costs drawn from a small integer range or as arbitrary reals.
pub fn random_costs<R: Rng>(rng: &mut R, len: usize) -> Vec<f64> {
    if rng.gen_bool(0.5) {
        (0..len).map(|_| f64::from(rng.gen_range(0u32..=20))).collect()
    } else {
        (0..len).map(|_| rng.gen_range(0.0..50.0)).collect()
    }
}

pub fn random_terminals<R: Rng>(rng: &mut R, nodes: usize, min: usize) -> Vec<NodeId> {
    let k = rng.gen_range(min.min(nodes)..=nodes);
    let mut all: Vec<usize> = (0..nodes).collect();
    all.shuffle(rng);
    let mut t = all[..k].to_vec();
    t.sort_unstable();
    t
}

/// Small two-stage instance; second-stage costs inflate the first stage by
/// a random factor per edge.
pub fn random_sstp<R: Rng>(rng: &mut R, max_nodes: usize, max_scenarios: usize) -> SstpInstance {
    let n = rng.gen_range(3..=max_nodes);
    let extra = rng.gen_range(0..=n);
    let graph = random_graph(rng, n, extra);
    let m = graph.edge_count();
    let c0 = random_costs(rng, m);
    let k = rng.gen_range(1..=max_scenarios);
    let mut weights: Vec<f64> = (0..k).map(|_| rng.gen_range(0.1..1.0)).collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    let scenarios = weights
        .iter()
        .map(|&p| {
            let cs = c0.iter().map(|&c| c * rng.gen_range(0.8..2.0)).collect();
            Scenario::new(p, CostVector::new(cs).unwrap(), random_terminals(rng, n, 1)).unwrap()
        })
        .collect();
    SstpInstance::new(graph, CostVector::new(c0).unwrap(), scenarios).unwrap()
}

/// Whether `edges` join all `terminals`, by a fresh union-find.
pub fn joins(graph: &Graph, edges: impl IntoIterator<Item = usize>, terminals: &[NodeId]) -> bool {
    let mut parent: Vec<usize> = (0..graph.node_count()).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            x = p[x];
        }
        x
    }
    for e in edges {
        let (u, v) = graph.endpoints(e);
        let (a, b) = (root(&mut parent, u), root(&mut parent, v));
        parent[a] = b;
    }
    terminals.windows(2).all(|w| root(&mut parent, w[0]) == root(&mut parent, w[1]))
}

/// Cheapest edge subset joining the terminals, by trying all `2^|E|`.
pub fn brute_force_steiner(graph: &Graph, costs: &[f64], terminals: &[NodeId]) -> f64 {
    let m = graph.edge_count();
    assert!(m <= 16);
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << m) {
        let edges = (0..m).filter(|&e| mask & (1 << e) != 0);
        let cost: f64 = edges.clone().map(|e| costs[e]).sum();
        if cost < best && joins(graph, edges, terminals) {
            best = cost;
        }
    }
    best
}
