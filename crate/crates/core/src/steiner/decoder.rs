use super::{mst_approx, SteinerHeuristic, StpInstance};
use crate::brkga::{Chromosome, Decoder};
use crate::error::{Error, Result};
use crate::model::EdgeId;

/// Cost multiplier of a key. A key of exactly 0.5 yields exactly 1 for
/// every alpha, so neutral chromosomes reproduce unbiased costs bit for bit.
#[inline]
pub(crate) fn cost_multiplier(key: f64, alpha: f64) -> f64 {
    if key == 0.5 {
        1.0
    } else {
        1.0 - alpha + 2.0 * alpha * key
    }
}

/// `(1 - alpha + 2 alpha key) * cost` per edge. Keys below 0.5 discount an
/// edge, keys above 0.5 surcharge it.
pub fn perturb_costs(costs: &[f64], chromosome: &Chromosome, alpha: f64) -> Result<Vec<f64>> {
    if chromosome.len() != costs.len() {
        return Err(Error::LengthMismatch {
            expected: costs.len(),
            found: chromosome.len(),
        });
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Config(format!("alpha {alpha} outside (0, 1]")));
    }
    Ok(costs
        .iter()
        .zip(chromosome.keys())
        .map(|(&c, &q)| cost_multiplier(q, alpha) * c)
        .collect())
}

/// Decoder that runs a Steiner heuristic on perturbed costs and scores the
/// result with the instance's own costs.
pub struct SteinerDecoder<'a, H: SteinerHeuristic> {
    instance: StpInstance<'a>,
    alpha: f64,
    heuristic: H,
}

impl<'a, H: SteinerHeuristic> SteinerDecoder<'a, H> {
    pub fn new(instance: StpInstance<'a>, alpha: f64, heuristic: H) -> Self {
        Self {
            instance,
            alpha,
            heuristic,
        }
    }
}

impl<H: SteinerHeuristic> Decoder for SteinerDecoder<'_, H> {
    type Solution = Vec<EdgeId>;

    fn decode(&self, chromosome: &Chromosome) -> Result<(Vec<EdgeId>, f64)> {
        let perturbed = perturb_costs(self.instance.costs(), chromosome, self.alpha)?;
        let view = StpInstance::new(self.instance.graph(), &perturbed, self.instance.terminals())?;
        let tree = self.heuristic.solve(&view)?;
        let fitness = self.instance.cost_of(&tree);
        Ok((tree, fitness))
    }
}

/// Decodes one chromosome with MST-approx.
pub fn stp_decode(chromosome: &Chromosome, instance: &StpInstance<'_>, alpha: f64) -> Result<(Vec<EdgeId>, f64)> {
    let perturbed = perturb_costs(instance.costs(), chromosome, alpha)?;
    let view = StpInstance::new(instance.graph(), &perturbed, instance.terminals())?;
    let tree = mst_approx(&view)?;
    let fitness = instance.cost_of(&tree);
    Ok((tree, fitness))
}
