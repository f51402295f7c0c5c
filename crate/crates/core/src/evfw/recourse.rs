//! Recourse and reduced costs, plain and biased by feedback chromosomes.

use rayon::prelude::*;

use crate::brkga::{neutral_chromosome, Chromosome};
use crate::error::{Error, Result};
use crate::model::{EdgeId, EdgeSet, SstpInstance};
use crate::steiner::{cost_multiplier as multiplier, SteinerHeuristic, StpInstance};

/// One chromosome per scenario, each of length `|E|`.
#[derive(Debug, Clone, PartialEq)]
pub struct FeedbackSet(Vec<Chromosome>);

impl FeedbackSet {
    pub fn new(chromosomes: Vec<Chromosome>) -> Self {
        Self(chromosomes)
    }

    pub fn neutral(scenarios: usize, edges: usize) -> Result<Self> {
        let q = neutral_chromosome(edges)?;
        Ok(Self(vec![q; scenarios]))
    }

    pub fn chromosomes(&self) -> &[Chromosome] {
        &self.0
    }

    pub fn get(&self, scenario: usize) -> &Chromosome {
        &self.0[scenario]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<Chromosome> {
        self.0
    }

    pub(crate) fn check(&self, instance: &SstpInstance) -> Result<()> {
        if self.0.len() != instance.scenario_count() {
            return Err(Error::LengthMismatch {
                expected: instance.scenario_count(),
                found: self.0.len(),
            });
        }
        if let Some(q) = self.0.iter().find(|q| q.len() != instance.edge_count()) {
            return Err(Error::LengthMismatch {
                expected: instance.edge_count(),
                found: q.len(),
            });
        }
        Ok(())
    }
}

/// Result of solving every scenario on top of a first-stage set.
#[derive(Debug, Clone, PartialEq)]
pub struct Recourse {
    /// Probability-weighted second-stage cost under the original costs.
    pub value: f64,
    /// Completing edges per scenario, first-stage edges excluded.
    pub per_scenario: Vec<EdgeSet>,
    /// Unweighted second-stage cost per scenario.
    pub scenario_costs: Vec<f64>,
}

fn mask_of(instance: &SstpInstance, first_stage: &EdgeSet) -> Result<Vec<bool>> {
    let m = instance.edge_count();
    let mut mask = vec![false; m];
    for &e in first_stage {
        if e >= m {
            return Err(Error::Structural(format!("edge {e} outside 0..{m}")));
        }
        mask[e] = true;
    }
    Ok(mask)
}

/// Scenario costs with first-stage edges free and every other edge
/// perturbed by the scenario's chromosome.
pub fn biased_scenario_costs(
    instance: &SstpInstance,
    scenario: usize,
    first_stage: &EdgeSet,
    chromosome: &Chromosome,
    alpha: f64,
) -> Result<Vec<f64>> {
    if scenario >= instance.scenario_count() {
        return Err(Error::Structural(format!("scenario {scenario} out of range")));
    }
    if chromosome.len() != instance.edge_count() {
        return Err(Error::LengthMismatch {
            expected: instance.edge_count(),
            found: chromosome.len(),
        });
    }
    let mask = mask_of(instance, first_stage)?;
    Ok(biased_costs_masked(instance, scenario, &mask, Some(chromosome), alpha))
}

/// `chromosome = None` gives the plain split: zero on the first stage,
/// original cost elsewhere.
pub(crate) fn biased_costs_masked(
    instance: &SstpInstance,
    scenario: usize,
    in_first_stage: &[bool],
    chromosome: Option<&Chromosome>,
    alpha: f64,
) -> Vec<f64> {
    let costs = instance.scenario(scenario).costs().as_slice();
    match chromosome {
        Some(q) => costs
            .iter()
            .zip(q.keys())
            .zip(in_first_stage)
            .map(|((&c, &k), &bought)| if bought { 0.0 } else { multiplier(k, alpha) * c })
            .collect(),
        None => costs
            .iter()
            .zip(in_first_stage)
            .map(|(&c, &bought)| if bought { 0.0 } else { c })
            .collect(),
    }
}

pub(crate) fn recourse_masked<H: SteinerHeuristic + ?Sized>(
    instance: &SstpInstance,
    heuristic: &H,
    feedback: Option<&FeedbackSet>,
    alpha: f64,
    in_first_stage: &[bool],
) -> Result<Recourse> {
    let graph = instance.graph();
    let solved: Vec<(EdgeSet, f64)> = (0..instance.scenario_count())
        .into_par_iter()
        .map(|s| {
            let scenario = instance.scenario(s);
            if scenario.is_trivial() {
                return Ok((EdgeSet::new(), 0.0));
            }
            let biased = biased_costs_masked(instance, s, in_first_stage, feedback.map(|f| f.get(s)), alpha);
            let view = StpInstance::new(graph, &biased, scenario.terminals())?;
            let tree = heuristic.solve(&view)?;
            let set: EdgeSet = tree.into_iter().filter(|&e| !in_first_stage[e]).collect();
            let cost = scenario.costs().total(set.iter().copied());
            Ok((set, cost))
        })
        .collect::<Result<_>>()?;
    let (per_scenario, scenario_costs): (Vec<_>, Vec<_>) = solved.into_iter().unzip();
    Ok(Recourse {
        value: instance.weighted_recourse(&scenario_costs),
        per_scenario,
        scenario_costs,
    })
}

/// Expected completion cost of `first_stage` when every scenario is solved
/// by `heuristic` on its biased costs. The biased costs steer the heuristic
/// only; the value is measured with the original second-stage costs.
pub fn recourse_cost<H: SteinerHeuristic + ?Sized>(
    first_stage: &EdgeSet,
    heuristic: &H,
    instance: &SstpInstance,
    feedback: &FeedbackSet,
    alpha: f64,
) -> Result<Recourse> {
    feedback.check(instance)?;
    let mask = mask_of(instance, first_stage)?;
    recourse_masked(instance, heuristic, Some(feedback), alpha, &mask)
}

/// Recourse cost without feedback: first-stage edges free, all other edges
/// at their scenario cost.
pub fn recourse_cost_unbiased<H: SteinerHeuristic + ?Sized>(
    first_stage: &EdgeSet,
    heuristic: &H,
    instance: &SstpInstance,
) -> Result<Recourse> {
    let mask = mask_of(instance, first_stage)?;
    recourse_masked(instance, heuristic, None, 0.5, &mask)
}

/// First-stage cost of `edge` plus the change in recourse cost when it is
/// bought. `cached` may carry the recourse value of `first_stage`.
pub fn reduced_cost<H: SteinerHeuristic + ?Sized>(
    edge: EdgeId,
    first_stage: &EdgeSet,
    heuristic: &H,
    instance: &SstpInstance,
    feedback: &FeedbackSet,
    alpha: f64,
    cached: Option<f64>,
) -> Result<f64> {
    if first_stage.contains(&edge) {
        return Err(Error::Contract(format!("edge {edge} is already in the first stage")));
    }
    if edge >= instance.edge_count() {
        return Err(Error::Structural(format!("edge {edge} out of range")));
    }
    let current = match cached {
        Some(v) => v,
        None => recourse_cost(first_stage, heuristic, instance, feedback, alpha)?.value,
    };
    let mut grown = first_stage.clone();
    grown.insert(edge);
    let next = recourse_cost(&grown, heuristic, instance, feedback, alpha)?.value;
    Ok(instance.first_stage_costs()[edge] + next - current)
}

/// Reduced cost without feedback.
pub fn reduced_cost_unbiased<H: SteinerHeuristic + ?Sized>(
    edge: EdgeId,
    first_stage: &EdgeSet,
    heuristic: &H,
    instance: &SstpInstance,
) -> Result<f64> {
    if first_stage.contains(&edge) {
        return Err(Error::Contract(format!("edge {edge} is already in the first stage")));
    }
    let current = recourse_cost_unbiased(first_stage, heuristic, instance)?.value;
    let mut grown = first_stage.clone();
    grown.insert(edge);
    let next = recourse_cost_unbiased(&grown, heuristic, instance)?.value;
    Ok(instance.first_stage_costs()[edge] + next - current)
}

/// Probability-weighted mean key per edge, clamped to `[0, 1]`.
pub fn weighted_average_alleles(feedback: &FeedbackSet, probabilities: &[f64]) -> Vec<f64> {
    let m = feedback.chromosomes().first().map_or(0, Chromosome::len);
    (0..m)
        .map(|r| {
            feedback
                .chromosomes()
                .iter()
                .zip(probabilities)
                .map(|(q, &p)| q.keys()[r] * p)
                .sum::<f64>()
                .clamp(0.0, 1.0)
        })
        .collect()
}

/// The upper bound that buys nothing in the first stage.
pub fn buy_none<H: SteinerHeuristic + ?Sized>(instance: &SstpInstance, heuristic: &H) -> Result<Recourse> {
    let neutral = FeedbackSet::neutral(instance.scenario_count(), instance.edge_count())?;
    recourse_cost(&EdgeSet::new(), heuristic, instance, &neutral, 0.7)
}
