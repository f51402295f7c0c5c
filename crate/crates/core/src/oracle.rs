//! Exhaustive solver for desk-scale instances: every first-stage subset,
//! each scenario completed by an optimal Steiner tree.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{EdgeSet, SstpInstance, StochasticSolution};
use crate::steiner::{exact_stp, StpInstance, EXACT_NODE_LIMIT};

/// Largest edge count [`exact_sstp`] accepts.
pub const ORACLE_EDGE_LIMIT: usize = 20;

/// Optimal two-stage solution by enumerating all `2^|E|` first stages.
/// Among equally cheap first stages the one with the smallest bitmask wins.
pub fn exact_sstp(instance: &SstpInstance) -> Result<StochasticSolution> {
    let m = instance.edge_count();
    if m > ORACLE_EDGE_LIMIT {
        return Err(Error::TooLarge {
            what: "edge count",
            found: m,
            limit: ORACLE_EDGE_LIMIT,
        });
    }
    let n = instance.graph().node_count();
    if n > EXACT_NODE_LIMIT {
        return Err(Error::TooLarge {
            what: "node count",
            found: n,
            limit: EXACT_NODE_LIMIT,
        });
    }

    // Fails early on disconnected scenarios.
    let empty = complete(instance, 0, f64::INFINITY)?.expect("no bound");
    let bound = AtomicU64::new(empty.0.to_bits());

    let best = (0u32..(1 << m))
        .into_par_iter()
        .map(|subset| -> Result<Option<(f64, u32, Vec<EdgeSet>)>> {
            let limit = f64::from_bits(bound.load(Ordering::Relaxed));
            let found = complete(instance, subset, limit)?;
            if let Some((cost, _)) = &found {
                bound.fetch_min(cost.to_bits(), Ordering::Relaxed);
            }
            Ok(found.map(|(cost, sets)| (cost, subset, sets)))
        })
        .try_reduce(
            || None,
            |a, b| {
                Ok(match (a, b) {
                    (None, x) | (x, None) => x,
                    (Some(x), Some(y)) => {
                        if (y.0, y.1) < (x.0, x.1) {
                            Some(y)
                        } else {
                            Some(x)
                        }
                    }
                })
            },
        )?;
    let (_, subset, sets) = best.expect("the empty first stage is always evaluated");
    StochasticSolution::new(instance, first_stage_of(subset, m), sets)
}

fn first_stage_of(subset: u32, m: usize) -> EdgeSet {
    (0..m).filter(|&e| subset & (1 << e) != 0).collect()
}

/// Optimal completion of one first stage, or `None` once the cost provably
/// exceeds `limit`. The running sum adds in a different order than the final
/// cost, so the cut-off carries a little slack to never drop a tie.
/// Costs are non-negative, so the bit patterns of candidate costs order
/// like the values.
fn complete(instance: &SstpInstance, subset: u32, limit: f64) -> Result<Option<(f64, Vec<EdgeSet>)>> {
    let limit = limit * (1.0 + 1e-12) + 1e-12;
    let m = instance.edge_count();
    let first_stage = first_stage_of(subset, m);
    let c0 = instance.first_stage_costs().total(first_stage.iter().copied());
    if c0 > limit {
        return Ok(None);
    }
    let graph = instance.graph();
    let mut partial = c0;
    let mut sets = Vec::with_capacity(instance.scenario_count());
    for scenario in instance.scenarios() {
        let costs: Vec<f64> = (0..m)
            .map(|e| if first_stage.contains(&e) { 0.0 } else { scenario.costs()[e] })
            .collect();
        let view = StpInstance::new(graph, &costs, scenario.terminals())?;
        let (tree, _) = exact_stp(&view)?;
        let set: EdgeSet = tree.into_iter().filter(|e| !first_stage.contains(e)).collect();
        partial += scenario.probability() * scenario.costs().total(set.iter().copied());
        if partial > limit {
            return Ok(None);
        }
        sets.push(set);
    }
    Ok(Some((instance.compose_cost(&first_stage, &sets), sets)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CostVector, Graph, Scenario};

    #[test]
    fn bridge_is_bought_when_cheaper() {
        let g = Graph::new(2, vec![(0, 1)]).unwrap();
        let sc = Scenario::new(1.0, CostVector::new(vec![10.0]).unwrap(), vec![0, 1]).unwrap();
        let inst = SstpInstance::new(g, CostVector::new(vec![1.0]).unwrap(), vec![sc]).unwrap();
        let sol = exact_sstp(&inst).unwrap();
        assert_eq!(sol.first_stage, EdgeSet::from([0]));
        assert_eq!(sol.cost, 1.0);
    }

    #[test]
    fn deferral_when_first_stage_is_dear() {
        let g = Graph::new(2, vec![(0, 1)]).unwrap();
        let a = Scenario::new(0.5, CostVector::new(vec![4.0]).unwrap(), vec![0, 1]).unwrap();
        let b = Scenario::new(0.5, CostVector::new(vec![4.0]).unwrap(), vec![0]).unwrap();
        let inst = SstpInstance::new(g, CostVector::new(vec![3.0]).unwrap(), vec![a, b]).unwrap();
        let sol = exact_sstp(&inst).unwrap();
        assert!(sol.first_stage.is_empty());
        assert_eq!(sol.cost, 2.0);
    }

    #[test]
    fn edge_guard() {
        let edges: Vec<_> = (0..16).flat_map(|u| ((u + 1)..16).map(move |v| (u, v))).take(21).collect();
        let g = Graph::new(16, edges).unwrap();
        let sc = Scenario::new(1.0, CostVector::new(vec![1.0; 21]).unwrap(), vec![0, 1]).unwrap();
        let inst = SstpInstance::new(g, CostVector::new(vec![1.0; 21]).unwrap(), vec![sc]).unwrap();
        assert!(matches!(exact_sstp(&inst), Err(Error::TooLarge { .. })));
    }
}
