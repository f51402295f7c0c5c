//! Control parameters of the framework and of the inner genetic algorithm.
//! Defaults are the tuned values used for the large benchmark runs.

use std::time::Duration;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct EvfwParams {
    /// Perturbation intensity of the decoder and of the biased recourse costs.
    pub alpha: f64,
    /// Minimum relative improvement that resets a convergence counter.
    pub min_improve: f64,
    /// Iterations tolerated since the best solution was found.
    pub max_since_best: u32,
    /// Iterations tolerated since the last improving iteration.
    pub max_since_improve: u32,
    /// Generation multiplier of the tail step.
    pub tail_factor: u32,
    /// Wall-clock budget, checked between iterations.
    pub time_limit: Option<Duration>,
}

impl Default for EvfwParams {
    fn default() -> Self {
        Self {
            alpha: 0.7,
            min_improve: 0.001,
            max_since_best: 3,
            max_since_improve: 2,
            tail_factor: 3,
            time_limit: None,
        }
    }
}

impl EvfwParams {
    /// The permissive setting used on small benchmark instances.
    pub fn permissive() -> Self {
        Self {
            max_since_best: 10,
            max_since_improve: 6,
            tail_factor: 10,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::Config(format!("alpha {} outside (0, 1]", self.alpha)));
        }
        if !(self.min_improve >= 0.0 && self.min_improve.is_finite()) {
            return Err(Error::Config(format!("min_improve {} must be >= 0", self.min_improve)));
        }
        if self.tail_factor < 1 {
            return Err(Error::Config("tail_factor must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BrkgaParams {
    pub population: usize,
    pub elite: usize,
    pub mutants: usize,
    /// Probability of inheriting an allele from the elite parent.
    pub elite_prob: f64,
    pub generations: usize,
}

impl Default for BrkgaParams {
    fn default() -> Self {
        Self::from_fractions(25, 0.1, 0.2, 0.4, 25)
    }
}

impl BrkgaParams {
    /// Elite and mutant counts are `ceil(fraction * population)`.
    pub fn from_fractions(
        population: usize,
        elite_frac: f64,
        mutant_frac: f64,
        elite_prob: f64,
        generations: usize,
    ) -> Self {
        let count = |frac: f64| (frac * population as f64 - 1e-9).ceil().max(0.0) as usize;
        Self {
            population,
            elite: count(elite_frac).max(1),
            mutants: count(mutant_frac),
            elite_prob,
            generations,
        }
    }

    /// Defaults with a population of 100, as in the permissive setting.
    pub fn permissive() -> Self {
        Self::from_fractions(100, 0.1, 0.2, 0.4, 25)
    }

    pub fn with_generations(&self, generations: usize) -> Self {
        Self {
            generations,
            ..self.clone()
        }
    }

    /// A single-generation run needs no offspring, so it only requires the
    /// elite to fit in the population. Evolving runs need room for at least
    /// one crossover child.
    pub fn validate(&self) -> Result<()> {
        if self.population == 0 || self.generations == 0 || self.elite == 0 {
            return Err(Error::Config(format!(
                "population ({}), generations ({}) and elite ({}) must all be >= 1",
                self.population, self.generations, self.elite
            )));
        }
        if !(self.elite_prob > 0.0 && self.elite_prob < 1.0) {
            return Err(Error::Config(format!("elite_prob {} outside (0, 1)", self.elite_prob)));
        }
        if self.generations > 1 && self.elite + self.mutants >= self.population {
            return Err(Error::Config(format!(
                "elite ({}) + mutants ({}) must be below the population ({})",
                self.elite, self.mutants, self.population
            )));
        }
        if self.elite > self.population {
            return Err(Error::Config("elite larger than population".into()));
        }
        Ok(())
    }
}
