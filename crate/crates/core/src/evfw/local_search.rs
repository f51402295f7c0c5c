use super::recourse::{recourse_masked, weighted_average_alleles, FeedbackSet};
use crate::error::Result;
use crate::model::{EdgeId, EdgeSet, SstpInstance};
use crate::steiner::SteinerHeuristic;

#[derive(Debug, Clone, PartialEq)]
pub struct LocalSearchOutcome {
    pub first_stage: EdgeSet,
    /// Surviving edges in the order they were bought.
    pub acquisition_order: Vec<EdgeId>,
    /// Biased recourse cost of `first_stage`.
    pub recourse: f64,
    /// Recourse cost of the empty first stage under the same feedback.
    pub initial_recourse: f64,
}

impl LocalSearchOutcome {
    /// First-stage cost plus biased recourse cost.
    pub fn total(&self, instance: &SstpInstance) -> f64 {
        instance.first_stage_costs().total(self.first_stage.iter().copied()) + self.recourse
    }
}

/// First-improvement local search over first-stage purchases.
///
/// Starting from nothing bought, edges are scanned once by increasing
/// weighted average key (lower edge id on ties) and bought whenever the
/// reduced cost is not positive. Then the bought edges are scanned once in
/// acquisition order and sold whenever that strictly lowers the total. The
/// recourse value of the current set is carried along and only recomputed
/// when the set changes.
pub fn local_search<H: SteinerHeuristic + ?Sized>(
    instance: &SstpInstance,
    feedback: &FeedbackSet,
    heuristic: &H,
    alpha: f64,
) -> Result<LocalSearchOutcome> {
    feedback.check(instance)?;
    let m = instance.edge_count();
    let c0 = instance.first_stage_costs();
    let avg = weighted_average_alleles(feedback, &instance.probabilities());
    let mut order: Vec<EdgeId> = (0..m).collect();
    order.sort_by(|&a, &b| avg[a].total_cmp(&avg[b]).then(a.cmp(&b)));

    let mut bought = vec![false; m];
    let evaluate = |mask: &[bool]| recourse_masked(instance, heuristic, Some(feedback), alpha, mask).map(|r| r.value);
    let initial = evaluate(&bought)?;
    let mut current = initial;
    let mut acquired = Vec::new();

    for r in order {
        bought[r] = true;
        let next = evaluate(&bought)?;
        if c0[r] + next - current <= 0.0 {
            debug_assert!(c0.total(acquired.iter().copied()) + c0[r] + next <= c0.total(acquired.iter().copied()) + current + 1e-9 * current.abs().max(1.0));
            acquired.push(r);
            current = next;
        } else {
            bought[r] = false;
        }
    }

    let mut kept = Vec::with_capacity(acquired.len());
    for &r in &acquired {
        bought[r] = false;
        let next = evaluate(&bought)?;
        if next - current - c0[r] < 0.0 {
            current = next;
        } else {
            bought[r] = true;
            kept.push(r);
        }
    }

    Ok(LocalSearchOutcome {
        first_stage: kept.iter().copied().collect(),
        acquisition_order: kept,
        recourse: current,
        initial_recourse: initial,
    })
}
