use super::{prune_leaves, terminal_metric, SteinerHeuristic, StpInstance};
use crate::dsu::DisjointSets;
use crate::error::Result;
use crate::model::EdgeId;

/// The MST 2-approximation as a [`SteinerHeuristic`].
#[derive(Debug, Clone, Copy, Default)]
pub struct MstApprox;

impl SteinerHeuristic for MstApprox {
    fn solve(&self, instance: &StpInstance<'_>) -> Result<Vec<EdgeId>> {
        mst_approx(instance)
    }
}

/// MST over the terminal shortest-path metric, expanded back into graph
/// edges and pruned to a tree: cycle edges are dropped by a minimum spanning
/// forest over the expanded edges, then non-terminal leaves are removed.
///
/// Ties in the terminal MST go to the lexicographically smaller terminal
/// pair. Returns sorted edge ids; empty when there are fewer than two
/// terminals.
pub fn mst_approx(instance: &StpInstance<'_>) -> Result<Vec<EdgeId>> {
    let terminals = instance.terminals();
    let k = terminals.len();
    if k < 2 {
        return Ok(Vec::new());
    }
    let metric = terminal_metric(instance)?;

    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(k * (k - 1) / 2);
    for i in 0..k {
        for j in i + 1..k {
            pairs.push((metric.distance(i, j), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let graph = instance.graph();
    let mut in_union = vec![false; graph.edge_count()];
    let mut sets = DisjointSets::new(k);
    let mut joined = 0;
    for &(_, i, j) in &pairs {
        if sets.union(i, j) {
            for e in metric.path(instance, i, j) {
                in_union[e] = true;
            }
            joined += 1;
            if joined == k - 1 {
                break;
            }
        }
    }

    let costs = instance.costs();
    let mut union: Vec<EdgeId> = (0..graph.edge_count()).filter(|&e| in_union[e]).collect();
    union.sort_by(|&a, &b| costs[a].total_cmp(&costs[b]).then(a.cmp(&b)));
    let mut forest = DisjointSets::new(graph.node_count());
    let mut tree: Vec<EdgeId> = union
        .into_iter()
        .filter(|&e| {
            let (u, v) = graph.endpoints(e);
            forest.union(u, v)
        })
        .collect();
    prune_leaves(graph, &mut tree, terminals);
    tree.sort_unstable();
    debug_assert!(super::is_steiner_tree(graph, &tree, terminals));
    Ok(tree)
}
