use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use super::StpInstance;
use crate::error::{Error, NodeLabel, Result};
use crate::model::{EdgeId, NodeId};

#[derive(Debug, Clone, Copy, PartialEq)]
struct Dist(f64);

impl Eq for Dist {}

impl PartialOrd for Dist {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dist {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Shortest-path distances between terminals, with one shortest-path tree per
/// source terminal for path reconstruction.
#[derive(Debug, Clone)]
pub struct TerminalMetric {
    terminals: Vec<NodeId>,
    /// `dist[i][v]`: distance from terminal `i` to node `v`.
    dist: Vec<Vec<f64>>,
    /// `pred[i][v]`: last edge on the chosen shortest path from terminal `i`.
    pred: Vec<Vec<Option<EdgeId>>>,
}

impl TerminalMetric {
    pub fn terminals(&self) -> &[NodeId] {
        &self.terminals
    }

    /// Distance between the `i`-th and `j`-th terminal.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.dist[i][self.terminals[j]]
    }

    /// Edges of the stored shortest path between terminals `i` and `j`,
    /// walked from `j` back to `i`.
    pub fn path(&self, instance: &StpInstance<'_>, i: usize, j: usize) -> Vec<EdgeId> {
        let graph = instance.graph();
        let source = self.terminals[i];
        let mut node = self.terminals[j];
        let mut edges = Vec::new();
        while node != source {
            let e = self.pred[i][node].expect("reachable node has a predecessor");
            edges.push(e);
            let (u, v) = graph.endpoints(e);
            node = if u == node { v } else { u };
        }
        edges
    }
}

/// Label-setting search from every terminal. Among equally short paths the
/// predecessor with the lower edge id wins, as long as the node is unsettled.
pub fn terminal_metric(instance: &StpInstance<'_>) -> Result<TerminalMetric> {
    let graph = instance.graph();
    let costs = instance.costs();
    let terminals = instance.terminals();
    let n = graph.node_count();
    let mut is_terminal = vec![false; n];
    for &t in terminals {
        is_terminal[t] = true;
    }

    let mut all_dist = Vec::with_capacity(terminals.len());
    let mut all_pred = Vec::with_capacity(terminals.len());
    for &source in terminals {
        let mut dist = vec![f64::INFINITY; n];
        let mut pred: Vec<Option<EdgeId>> = vec![None; n];
        let mut settled = vec![false; n];
        let mut heap = BinaryHeap::new();
        let mut remaining = terminals.len();
        dist[source] = 0.0;
        heap.push(Reverse((Dist(0.0), source)));
        while let Some(Reverse((Dist(d), u))) = heap.pop() {
            if settled[u] {
                continue;
            }
            settled[u] = true;
            if is_terminal[u] {
                remaining -= 1;
                if remaining == 0 {
                    break;
                }
            }
            for &(v, e) in graph.neighbors(u) {
                if settled[v] {
                    continue;
                }
                let nd = d + costs[e];
                if nd < dist[v] {
                    dist[v] = nd;
                    pred[v] = Some(e);
                    heap.push(Reverse((Dist(nd), v)));
                } else if nd == dist[v] && pred[v].is_some_and(|p| e < p) {
                    pred[v] = Some(e);
                }
            }
        }
        if let Some(&t) = terminals.iter().find(|&&t| !settled[t]) {
            return Err(Error::Infeasible {
                from: NodeLabel(source),
                to: NodeLabel(t),
            });
        }
        all_dist.push(dist);
        all_pred.push(pred);
    }
    Ok(TerminalMetric {
        terminals: terminals.to_vec(),
        dist: all_dist,
        pred: all_pred,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Graph;

    #[test]
    fn two_node_path() {
        let g = Graph::new(2, vec![(0, 1)]).unwrap();
        let costs = [5.0];
        let inst = StpInstance::new(&g, &costs, &[0, 1]).unwrap();
        let m = terminal_metric(&inst).unwrap();
        assert_eq!(m.distance(0, 1), 5.0);
        assert_eq!(m.distance(1, 0), 5.0);
        assert_eq!(m.distance(0, 0), 0.0);
        assert_eq!(m.path(&inst, 0, 1), vec![0]);
    }

    #[test]
    fn unreachable_terminal() {
        let g = Graph::new(3, vec![(0, 1)]).unwrap();
        let costs = [1.0];
        let inst = StpInstance::new(&g, &costs, &[0, 2]).unwrap();
        assert!(matches!(terminal_metric(&inst), Err(Error::Infeasible { .. })));
    }

    #[test]
    fn equal_paths_prefer_lower_edge_id() {
        // Square 0-1-3 and 0-2-3 with equal costs. Node 3 is reached through
        // edge 3 first, then edge 2 ties and wins on id.
        let g = Graph::new(4, vec![(0, 2), (0, 1), (2, 3), (1, 3)]).unwrap();
        let costs = [1.0; 4];
        let inst = StpInstance::new(&g, &costs, &[0, 3]).unwrap();
        let m = terminal_metric(&inst).unwrap();
        assert_eq!(m.distance(0, 1), 2.0);
        let mut p = m.path(&inst, 0, 1);
        p.sort();
        assert_eq!(p, vec![0, 2]);
    }
}
