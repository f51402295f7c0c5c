//! Biased random-key genetic algorithm.
//!
//! Individuals are vectors of keys in `[0, 1]`; a [`Decoder`] maps a
//! chromosome to a solution and its fitness (lower is better). Each
//! generation keeps the elite, adds uniform mutants and fills the rest with
//! biased crossovers between an elite and a non-elite parent. One regular
//! chromosome supplied by the caller is placed in the initial population.
//!
//! All random draws of a generation happen on the caller's generator before
//! any decoding, so decoding in parallel never changes the outcome.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::params::BrkgaParams;

/// Name of the pseudo-random generator behind every seeded run. Changing the
/// generator changes all seeded results, so it is versioned here.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha 0.3), stream-split per scenario";

#[derive(Debug, Clone, PartialEq)]
pub struct Chromosome(Vec<f64>);

impl Chromosome {
    pub fn new(keys: Vec<f64>) -> Result<Self> {
        if keys.is_empty() {
            return Err(Error::InvalidLength(0));
        }
        if let Some(k) = keys.iter().find(|k| !(0.0..=1.0).contains(*k)) {
            return Err(Error::Validation(format!("key {k} outside [0, 1]")));
        }
        Ok(Self(keys))
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        Self((0..len).map(|_| rng.gen::<f64>()).collect())
    }

    pub fn keys(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_neutral(&self) -> bool {
        self.0.iter().all(|&k| k == 0.5)
    }
}

/// The regular chromosome: every key 0.5, which leaves costs unperturbed.
pub fn neutral_chromosome(len: usize) -> Result<Chromosome> {
    if len == 0 {
        return Err(Error::InvalidLength(0));
    }
    Ok(Chromosome(vec![0.5; len]))
}

/// Maps a chromosome to a solution and its fitness. Must be deterministic.
pub trait Decoder: Sync {
    type Solution: Clone + Send;

    fn decode(&self, chromosome: &Chromosome) -> Result<(Self::Solution, f64)>;
}

#[derive(Debug, Clone)]
pub struct Individual<S> {
    pub chromosome: Chromosome,
    pub solution: S,
    pub fitness: f64,
}

/// Best individual of a run plus the number of decoder calls it spent.
#[derive(Debug, Clone)]
pub struct BrkgaOutcome<S> {
    pub best: Individual<S>,
    pub decodes: u64,
}

/// `population` chromosomes: `seed` at index 0, the rest uniform random.
pub fn init_population<R: Rng + ?Sized>(
    population: usize,
    len: usize,
    seed: &Chromosome,
    rng: &mut R,
) -> Result<Vec<Chromosome>> {
    if population == 0 {
        return Err(Error::Config("population must be >= 1".into()));
    }
    if seed.len() != len {
        return Err(Error::LengthMismatch {
            expected: len,
            found: seed.len(),
        });
    }
    let mut pop = Vec::with_capacity(population);
    pop.push(seed.clone());
    pop.extend((1..population).map(|_| Chromosome::random(len, rng)));
    Ok(pop)
}

/// Each key comes from `elite` with probability `elite_prob`, otherwise from
/// `other`. `elite_prob` may be 1, which copies the elite parent.
pub fn crossover<R: Rng + ?Sized>(
    elite: &Chromosome,
    other: &Chromosome,
    elite_prob: f64,
    rng: &mut R,
) -> Result<Chromosome> {
    if elite.len() != other.len() {
        return Err(Error::LengthMismatch {
            expected: elite.len(),
            found: other.len(),
        });
    }
    if !(0.0..=1.0).contains(&elite_prob) {
        return Err(Error::Config(format!("elite_prob {elite_prob} outside [0, 1]")));
    }
    let keys = elite
        .0
        .iter()
        .zip(&other.0)
        .map(|(&e, &o)| if rng.gen::<f64>() < elite_prob { e } else { o })
        .collect();
    Ok(Chromosome(keys))
}

fn decode_all<D: Decoder>(decoder: &D, chromosomes: Vec<Chromosome>) -> Result<Vec<Individual<D::Solution>>> {
    chromosomes
        .into_par_iter()
        .map(|chromosome| {
            let (solution, fitness) = decoder.decode(&chromosome)?;
            Ok(Individual {
                chromosome,
                solution,
                fitness,
            })
        })
        .collect()
}

/// Stable ascending sort; ties keep insertion order.
fn sort_by_fitness<S>(pop: &mut [Individual<S>]) {
    pop.sort_by(|a, b| a.fitness.total_cmp(&b.fitness));
}

/// Produces the next generation from a decoded, fitness-sorted population:
/// elite copies, then mutants, then crossover children. Returns the sorted
/// generation and the number of decoder calls spent.
pub fn evolve_generation<D: Decoder, R: Rng + ?Sized>(
    pop: Vec<Individual<D::Solution>>,
    decoder: &D,
    params: &BrkgaParams,
    rng: &mut R,
) -> Result<(Vec<Individual<D::Solution>>, u64)> {
    let p = pop.len();
    let (pe, pm) = (params.elite, params.mutants);
    if pe == 0 || pe + pm >= p {
        return Err(Error::Config(format!(
            "elite ({pe}) + mutants ({pm}) must be below the population ({p}) with elite >= 1"
        )));
    }
    let len = pop[0].chromosome.len();

    let mut fresh = Vec::with_capacity(p - pe);
    fresh.extend((0..pm).map(|_| Chromosome::random(len, rng)));
    for _ in 0..p - pe - pm {
        let elite = &pop[rng.gen_range(0..pe)].chromosome;
        let other = &pop[rng.gen_range(pe..p)].chromosome;
        fresh.push(crossover(elite, other, params.elite_prob, rng)?);
    }

    let decodes = fresh.len() as u64;
    let children = decode_all(decoder, fresh)?;
    let mut next: Vec<_> = pop.into_iter().take(pe).collect();
    next.extend(children);
    sort_by_fitness(&mut next);
    Ok((next, decodes))
}

/// Runs `params.generations` generations and returns the best individual ever
/// decoded. Because `seed` is decoded in the first generation, the result is
/// never worse than `decoder.decode(seed)`.
pub fn brkga_run<D: Decoder, R: Rng + ?Sized>(
    decoder: &D,
    len: usize,
    seed: &Chromosome,
    params: &BrkgaParams,
    rng: &mut R,
) -> Result<BrkgaOutcome<D::Solution>> {
    params.validate()?;
    let initial = init_population(params.population, len, seed, rng)?;
    let mut decodes = initial.len() as u64;
    let mut pop = decode_all(decoder, initial)?;
    sort_by_fitness(&mut pop);
    let mut best = pop[0].clone();

    for _ in 1..params.generations {
        let (next, spent) = evolve_generation(pop, decoder, params, rng)?;
        decodes += spent;
        pop = next;
        if pop[0].fitness < best.fitness {
            best = pop[0].clone();
        }
    }
    Ok(BrkgaOutcome { best, decodes })
}
