use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::recourse::{biased_costs_masked, FeedbackSet};
use crate::brkga::{brkga_run, Chromosome};
use crate::error::{Error, Result};
use crate::model::{EdgeSet, SstpInstance};
use crate::params::BrkgaParams;
use crate::steiner::{SteinerDecoder, SteinerHeuristic, StpInstance};

/// Stream phase reserved for the tail step.
pub const TAIL_PHASE: u64 = u32::MAX as u64;

/// Derives one independent generator per scenario from a master seed and a
/// phase (the iteration number, or [`TAIL_PHASE`]), so scenarios can be
/// solved in any order without changing results.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamSeed {
    pub master: u64,
    pub phase: u64,
}

impl StreamSeed {
    pub fn rng(&self, scenario: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream((self.phase << 32) | scenario as u64);
        rng
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SecondStage {
    /// Best chromosome per scenario, fed back to the next local search.
    pub chromosomes: FeedbackSet,
    /// Best completing edges per scenario, first-stage edges excluded.
    pub sets: Vec<EdgeSet>,
    /// Unweighted original cost of each set.
    pub costs: Vec<f64>,
}

/// Solves every scenario with a BRKGA over costs that are zero on the
/// first stage and original elsewhere, seeding each run with the incoming
/// chromosome of that scenario.
#[allow(clippy::too_many_arguments)]
pub fn second_stage_metaheuristic<H: SteinerHeuristic + ?Sized>(
    instance: &SstpInstance,
    feedback: &FeedbackSet,
    heuristic: &H,
    first_stage: &EdgeSet,
    params: &BrkgaParams,
    alpha: f64,
    seeds: StreamSeed,
) -> Result<SecondStage> {
    feedback.check(instance)?;
    params.validate()?;
    let m = instance.edge_count();
    let mut mask = vec![false; m];
    for &e in first_stage {
        if e >= m {
            return Err(Error::Structural(format!("edge {e} outside 0..{m}")));
        }
        mask[e] = true;
    }
    let graph = instance.graph();

    let solved: Vec<(Chromosome, EdgeSet, f64)> = (0..instance.scenario_count())
        .into_par_iter()
        .map(|s| {
            let scenario = instance.scenario(s);
            let seed = feedback.get(s);
            if scenario.is_trivial() {
                return Ok((seed.clone(), EdgeSet::new(), 0.0));
            }
            let costs = biased_costs_masked(instance, s, &mask, None, alpha);
            let view = StpInstance::new(graph, &costs, scenario.terminals())?;
            let decoder = SteinerDecoder::new(view, alpha, heuristic);
            let outcome = brkga_run(&decoder, m, seed, params, &mut seeds.rng(s))?;
            let set: EdgeSet = outcome.best.solution.into_iter().filter(|&e| !mask[e]).collect();
            let cost = scenario.costs().total(set.iter().copied());
            Ok((outcome.best.chromosome, set, cost))
        })
        .collect::<Result<_>>()?;

    let mut chromosomes = Vec::with_capacity(solved.len());
    let mut sets = Vec::with_capacity(solved.len());
    let mut costs = Vec::with_capacity(solved.len());
    for (q, set, cost) in solved {
        chromosomes.push(q);
        sets.push(set);
        costs.push(cost);
    }
    Ok(SecondStage {
        chromosomes: FeedbackSet::new(chromosomes),
        sets,
        costs,
    })
}

/// One more second-stage pass with `tail_factor` times the generations.
#[allow(clippy::too_many_arguments)]
pub fn tail_step<H: SteinerHeuristic + ?Sized>(
    instance: &SstpInstance,
    feedback: &FeedbackSet,
    heuristic: &H,
    first_stage: &EdgeSet,
    params: &BrkgaParams,
    alpha: f64,
    tail_factor: u32,
    seeds: StreamSeed,
) -> Result<SecondStage> {
    if tail_factor == 0 {
        return Err(Error::Config("tail_factor must be >= 1".into()));
    }
    let longer = params.with_generations(params.generations * tail_factor as usize);
    second_stage_metaheuristic(instance, feedback, heuristic, first_stage, &longer, alpha, seeds)
}
