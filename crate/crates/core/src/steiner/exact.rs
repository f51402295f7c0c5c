use super::{prune_leaves, StpInstance};
use crate::dsu::DisjointSets;
use crate::error::{Error, NodeLabel, Result};
use crate::model::EdgeId;

/// Largest graph [`exact_stp`] accepts.
pub const EXACT_NODE_LIMIT: usize = 16;

/// Optimal Steiner tree by enumeration: for every subset of non-terminal
/// nodes, the minimum spanning tree of the subgraph induced by the terminals
/// plus that subset. The cheapest spanning one is optimal because any
/// Steiner tree costs at least the MST of the subgraph induced by its nodes.
pub fn exact_stp(instance: &StpInstance<'_>) -> Result<(Vec<EdgeId>, f64)> {
    let graph = instance.graph();
    let n = graph.node_count();
    if n > EXACT_NODE_LIMIT {
        return Err(Error::TooLarge {
            what: "node count",
            found: n,
            limit: EXACT_NODE_LIMIT,
        });
    }
    let terminals = instance.terminals();
    if terminals.len() < 2 {
        return Ok((Vec::new(), 0.0));
    }
    let costs = instance.costs();

    let terminal_mask: u32 = terminals.iter().fold(0, |m, &t| m | (1 << t));
    let optional: Vec<usize> = (0..n).filter(|v| terminal_mask & (1 << v) == 0).collect();
    let mut order: Vec<EdgeId> = (0..graph.edge_count()).collect();
    order.sort_by(|&a, &b| costs[a].total_cmp(&costs[b]).then(a.cmp(&b)));

    let mut best: Option<(f64, Vec<EdgeId>)> = None;
    let mut tree = Vec::with_capacity(n);
    for subset in 0u32..(1 << optional.len()) {
        let mut mask = terminal_mask;
        for (bit, &v) in optional.iter().enumerate() {
            if subset & (1 << bit) != 0 {
                mask |= 1 << v;
            }
        }
        let nodes = mask.count_ones() as usize;
        let mut sets = DisjointSets::new(n);
        let mut cost = 0.0;
        tree.clear();
        for &e in &order {
            let (u, v) = graph.endpoints(e);
            if mask & (1 << u) != 0 && mask & (1 << v) != 0 && sets.union(u, v) {
                cost += costs[e];
                tree.push(e);
                if tree.len() + 1 == nodes {
                    break;
                }
            }
        }
        if tree.len() + 1 != nodes {
            continue;
        }
        if best.as_ref().is_none_or(|(c, _)| cost < *c) {
            best = Some((cost, tree.clone()));
        }
    }

    let Some((_, mut tree)) = best else {
        let all: Vec<EdgeId> = (0..graph.edge_count()).collect();
        let mut sets = DisjointSets::new(n);
        for &e in &all {
            let (u, v) = graph.endpoints(e);
            sets.union(u, v);
        }
        let root = sets.find(terminals[0]);
        let lost = terminals.iter().copied().find(|&t| sets.find(t) != root).unwrap_or(terminals[1]);
        return Err(Error::Infeasible {
            from: NodeLabel(terminals[0]),
            to: NodeLabel(lost),
        });
    };
    prune_leaves(graph, &mut tree, terminals);
    tree.sort_unstable();
    let cost = instance.cost_of(&tree);
    Ok((tree, cost))
}
