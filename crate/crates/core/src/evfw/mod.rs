//! The evolutionary framework: a local search over first-stage purchases
//! alternating with one genetic algorithm per scenario, the best chromosome
//! of each scenario steering the next local search.

mod budget;
mod convergence;
mod local_search;
pub mod recourse;
mod second_stage;

use std::time::Instant;

pub use budget::{CallCounts, CountingHeuristic};
pub use convergence::{update_convergence, ConvergenceState};
pub use local_search::{local_search, LocalSearchOutcome};
pub use recourse::{
    biased_scenario_costs, buy_none, recourse_cost, recourse_cost_unbiased, reduced_cost, reduced_cost_unbiased,
    weighted_average_alleles, FeedbackSet, Recourse,
};
pub use second_stage::{second_stage_metaheuristic, tail_step, SecondStage, StreamSeed, TAIL_PHASE};

use crate::error::Result;
use crate::io::report::{compute_metrics, RunRecord};
use crate::model::{EdgeSet, SstpInstance, StochasticSolution};
use crate::params::{BrkgaParams, EvfwParams};
use crate::steiner::{MstApprox, SteinerHeuristic};

#[derive(Debug, Clone, PartialEq)]
pub struct EvfwOutcome {
    pub solution: StochasticSolution,
    pub buy_none_cost: f64,
    /// Best cost before the tail step.
    pub pre_tail_cost: f64,
    pub iterations: u32,
    /// Cost of each iteration's solution, in order.
    pub iteration_costs: Vec<f64>,
    /// Best cost after each iteration.
    pub best_costs: Vec<f64>,
    pub calls: CallCounts,
    pub wall_seconds: f64,
}

impl EvfwOutcome {
    pub fn record(&self, instance_id: &str, seed: u64, opt: Option<f64>) -> Result<RunRecord> {
        let (delta_c_percent, gap_percent) = compute_metrics(self.solution.cost, self.buy_none_cost, opt)?;
        Ok(RunRecord {
            instance_id: instance_id.to_string(),
            seed,
            cost: self.solution.cost,
            buy_none_cost: self.buy_none_cost,
            delta_c_percent,
            gap_percent,
            wall_seconds: self.wall_seconds,
            iterations: self.iterations,
            heuristic_calls: self.calls.total(),
        })
    }
}

struct Snapshot {
    first_stage: EdgeSet,
    feedback: FeedbackSet,
    sets: Vec<EdgeSet>,
    cost: f64,
}

/// Runs the framework with MST-approx as the scenario heuristic.
pub fn evfw_run(instance: &SstpInstance, params: &EvfwParams, brkga: &BrkgaParams, seed: u64) -> Result<EvfwOutcome> {
    evfw_run_with(instance, MstApprox, params, brkga, seed)
}

/// Runs the framework with any scenario heuristic. Results depend only on
/// the inputs and `seed`, not on the number of worker threads.
pub fn evfw_run_with<H: SteinerHeuristic>(
    instance: &SstpInstance,
    heuristic: H,
    params: &EvfwParams,
    brkga: &BrkgaParams,
    seed: u64,
) -> Result<EvfwOutcome> {
    params.validate()?;
    brkga.validate()?;
    let start = Instant::now();
    let heuristic = CountingHeuristic::new(heuristic);
    let mut calls = CallCounts::default();

    // Also rejects instances with a disconnected scenario.
    let none = buy_none(instance, &heuristic)?;
    let none_cost = instance.compose_cost(&EdgeSet::new(), &none.per_scenario);
    calls.buy_none = heuristic.calls();

    let mut feedback = FeedbackSet::neutral(instance.scenario_count(), instance.edge_count())?;
    let mut state = ConvergenceState::default();
    let mut best: Option<Snapshot> = None;
    let mut iteration_costs = Vec::new();
    let mut best_costs = Vec::new();
    let mut iterations = 0u32;

    loop {
        iterations += 1;
        let before = heuristic.calls();
        let ls = local_search(instance, &feedback, &heuristic, params.alpha)?;
        let after_ls = heuristic.calls();
        calls.local_search += after_ls - before;

        let stream = StreamSeed {
            master: seed,
            phase: u64::from(iterations),
        };
        let ssm = second_stage_metaheuristic(instance, &feedback, &heuristic, &ls.first_stage, brkga, params.alpha, stream)?;
        calls.second_stage += heuristic.calls() - after_ls;

        let cost = instance.compose_cost(&ls.first_stage, &ssm.sets);
        iteration_costs.push(cost);
        if best.as_ref().is_none_or(|b| cost < b.cost) {
            best = Some(Snapshot {
                first_stage: ls.first_stage,
                feedback: ssm.chromosomes.clone(),
                sets: ssm.sets,
                cost,
            });
        }
        best_costs.push(best.as_ref().map_or(cost, |b| b.cost));
        feedback = ssm.chromosomes;

        state.elapsed = start.elapsed();
        let (next, stop) = update_convergence(state, cost, params);
        state = next;
        if stop {
            break;
        }
    }

    let best = best.expect("at least one iteration runs");
    let before = heuristic.calls();
    let tail = tail_step(
        instance,
        &best.feedback,
        &heuristic,
        &best.first_stage,
        brkga,
        params.alpha,
        params.tail_factor,
        StreamSeed {
            master: seed,
            phase: TAIL_PHASE,
        },
    )?;
    calls.tail = heuristic.calls() - before;

    let tail_cost = instance.compose_cost(&best.first_stage, &tail.sets);
    let (first_stage, sets, cost) = if tail_cost <= best.cost {
        (best.first_stage, tail.sets, tail_cost)
    } else {
        (best.first_stage, best.sets, best.cost)
    };
    let solution = if cost <= none_cost {
        StochasticSolution::new(instance, first_stage, sets)?
    } else {
        StochasticSolution::new(instance, EdgeSet::new(), none.per_scenario)?
    };
    debug_assert!(crate::model::check_feasible(instance, &solution)?);

    Ok(EvfwOutcome {
        solution,
        buy_none_cost: none_cost,
        pre_tail_cost: best.cost,
        iterations,
        iteration_costs,
        best_costs,
        calls,
        wall_seconds: start.elapsed().as_secs_f64(),
    })
}
