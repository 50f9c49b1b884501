//! Generation loop: evaluate every genome in the game, select parents by
//! fitness, recombine, mutate and record per-generation statistics.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::env::{run_episode, EpisodeResult, WorldConfig};
use crate::error::{ConfigError, GenomeError};
use crate::neat::{crossover, mutate, Genome, InnovationTracker, MutationParams, Network};

/// Frames survived are worth this much fitness each; small enough that
/// fitness still equals pipes crossed to six decimal places.
pub const SURVIVAL_WEIGHT: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    FitnessProportionate,
    /// Best of `k` uniformly drawn members.
    Tournament(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EpisodeSeedPolicy {
    /// A new pipe sequence every generation, shared by all its members.
    FixedPerGeneration,
    /// The same pipe sequence for the whole run.
    FixedGlobal,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionConfig {
    pub population_size: usize,
    pub generations: usize,
    pub elitism_count: usize,
    pub selection: Selection,
    pub mutation: MutationParams,
    pub episode_seed_policy: EpisodeSeedPolicy,
    pub master_seed: u64,
    /// Episodes averaged into each genome's fitness.
    pub episodes_per_genome: usize,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        EvolutionConfig {
            population_size: 100,
            generations: 50,
            elitism_count: 2,
            selection: Selection::FitnessProportionate,
            mutation: MutationParams::default(),
            episode_seed_policy: EpisodeSeedPolicy::FixedPerGeneration,
            master_seed: 0,
            episodes_per_genome: 1,
        }
    }
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |field, reason: &str| {
            Err(ConfigError::InvalidField {
                field,
                reason: reason.to_string(),
            })
        };
        if self.population_size < 2 {
            return invalid("population_size", "must be at least 2");
        }
        if self.elitism_count >= self.population_size {
            return invalid("elitism_count", "must be smaller than population_size");
        }
        if self.generations < 1 {
            return invalid("generations", "must be at least 1");
        }
        if self.episodes_per_genome < 1 {
            return invalid("episodes_per_genome", "must be at least 1");
        }
        if let Selection::Tournament(k) = self.selection {
            if k < 1 {
                return invalid("selection", "tournament size must be at least 1");
            }
        }
        self.mutation
            .check()
            .map_err(|(field, value)| ConfigError::InvalidField {
                field,
                reason: format!("{value} is out of range"),
            })
    }
}

/// How one genome did in one generation.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub fitness: f64,
    /// Pipes crossed, averaged over the genome's episodes.
    pub score: f64,
    /// The episode played on the generation's base seed.
    pub first_episode: EpisodeResult,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenerationStats {
    pub generation_index: usize,
    pub episode_seed: u64,
    pub max_score: f64,
    pub average_score: f64,
    pub average_fitness: f64,
    pub best_fitness: f64,
    pub best_genome: Genome,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub stats: Vec<GenerationStats>,
    /// Fittest genome seen in any generation (earliest on ties).
    pub champion: Genome,
    /// Base episode seed of the generation the champion was found in.
    pub champion_seed: u64,
    /// The champion's episode on `champion_seed`.
    pub champion_episode: EpisodeResult,
    pub evolution: EvolutionConfig,
    pub world: WorldConfig,
}

impl RunResult {
    /// Mean of the per-generation average scores.
    pub fn run_average_score(&self) -> f64 {
        self.stats.iter().map(|s| s.average_score).sum::<f64>() / self.stats.len() as f64
    }

    /// Highest single-generation max score.
    pub fn max_score(&self) -> f64 {
        self.stats.iter().map(|s| s.max_score).fold(0.0, f64::max)
    }
}

/// Plays one episode with `genome` steering.
pub fn play(genome: &Genome, world: &WorldConfig, seed: u64) -> Result<EpisodeResult, GenomeError> {
    let network = Network::compile(genome)?;
    let mut evaluator = network.evaluator();
    let height = world.screen_height;
    let result = run_episode(world, seed, |obs| evaluator.decide(&obs.normalized(height)))
        .expect("world config is validated before evolution starts");
    Ok(result)
}

pub fn fitness_of(result: &EpisodeResult) -> f64 {
    result.score as f64 + result.frames as f64 * SURVIVAL_WEIGHT
}

/// `population_size` minimal genomes.
pub fn init_population<R: Rng + ?Sized>(
    config: &EvolutionConfig,
    rng: &mut R,
    tracker: &mut InnovationTracker,
) -> Result<Vec<Genome>, ConfigError> {
    config.validate()?;
    Ok((0..config.population_size)
        .map(|_| Genome::initial(rng, tracker))
        .collect())
}

/// Plays every genome on the same pipe sequence(s). Episode `j` of each
/// genome uses seed `episode_seed + j`. Results are in population order.
pub fn evaluate_population(
    population: &[Genome],
    world: &WorldConfig,
    episode_seed: u64,
    episodes: usize,
) -> Result<Vec<Evaluation>, GenomeError> {
    population
        .par_iter()
        .map(|genome| {
            let runs = (0..episodes.max(1) as u64)
                .map(|j| play(genome, world, episode_seed.wrapping_add(j)))
                .collect::<Result<Vec<_>, _>>()?;
            let n = runs.len() as f64;
            Ok(Evaluation {
                fitness: runs.iter().map(fitness_of).sum::<f64>() / n,
                score: runs.iter().map(|r| r.score as f64).sum::<f64>() / n,
                first_episode: runs[0],
            })
        })
        .collect()
}

/// Indices sorted by descending fitness, lower index first on ties.
fn ranking(fitnesses: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..fitnesses.len()).collect();
    order.sort_by(|&a, &b| fitnesses[b].total_cmp(&fitnesses[a]).then(a.cmp(&b)));
    order
}

struct Selector {
    scheme: Selection,
    proportionate: Option<WeightedIndex<f64>>,
    rank_of: Vec<usize>,
}

impl Selector {
    fn new(scheme: Selection, fitnesses: &[f64]) -> Self {
        let proportionate = match scheme {
            Selection::FitnessProportionate => {
                WeightedIndex::new(fitnesses.iter().map(|f| f.max(0.0))).ok()
            }
            Selection::Tournament(_) => None,
        };
        let mut rank_of = vec![0; fitnesses.len()];
        for (rank, idx) in ranking(fitnesses).into_iter().enumerate() {
            rank_of[idx] = rank;
        }
        Selector {
            scheme,
            proportionate,
            rank_of,
        }
    }

    fn pick<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let n = self.rank_of.len();
        match self.scheme {
            Selection::FitnessProportionate => match &self.proportionate {
                Some(weights) => weights.sample(rng),
                // All fitnesses zero: uniform.
                None => rng.random_range(0..n),
            },
            Selection::Tournament(k) => (0..k)
                .map(|_| rng.random_range(0..n))
                .min_by_key(|&i| self.rank_of[i])
                .expect("tournament size is at least 1"),
        }
    }
}

/// Builds the next population: the `elitism_count` fittest genomes verbatim,
/// then children of two selected parents, each crossed over and mutated.
pub fn next_generation<R: Rng + ?Sized>(
    population: &[Genome],
    fitnesses: &[f64],
    config: &EvolutionConfig,
    rng: &mut R,
    tracker: &mut InnovationTracker,
) -> Vec<Genome> {
    assert_eq!(population.len(), fitnesses.len(), "one fitness per genome");
    tracker.begin_generation();
    let scored: Vec<Genome> = population
        .iter()
        .zip(fitnesses)
        .map(|(g, &f)| {
            let mut g = g.clone();
            g.fitness = f;
            g
        })
        .collect();

    let mut next: Vec<Genome> = ranking(fitnesses)
        .into_iter()
        .take(config.elitism_count)
        .map(|i| scored[i].clone())
        .collect();

    let selector = Selector::new(config.selection, fitnesses);
    while next.len() < config.population_size {
        let a = selector.pick(rng);
        let mut b = selector.pick(rng);
        // Prefer two distinct parents; a dominant genome may still pair with itself.
        for _ in 0..8 {
            if b != a {
                break;
            }
            b = selector.pick(rng);
        }
        let child = crossover(&scored[a], &scored[b], rng);
        let mut child = mutate(&child, rng, &config.mutation, tracker);
        child.fitness = 0.0;
        next.push(child);
    }
    next
}

/// Seeds for the master RNG (stream 0) and the episode-seed RNG (stream 1).
fn rngs(master_seed: u64) -> (ChaCha8Rng, ChaCha8Rng) {
    let master = ChaCha8Rng::seed_from_u64(master_seed);
    let mut episodes = ChaCha8Rng::seed_from_u64(master_seed);
    episodes.set_stream(1);
    (master, episodes)
}

/// Runs the whole evolution. The result is a pure function of the two configs.
pub fn run_evolution(config: &EvolutionConfig, world: &WorldConfig) -> Result<RunResult, ConfigError> {
    run_evolution_with(config, world, |_| {})
}

/// [`run_evolution`], reporting each generation's stats as they are produced.
pub fn run_evolution_with<F>(
    config: &EvolutionConfig,
    world: &WorldConfig,
    mut on_generation: F,
) -> Result<RunResult, ConfigError>
where
    F: FnMut(&GenerationStats),
{
    config.validate()?;
    world.validate()?;
    let (mut rng, mut seed_rng) = rngs(config.master_seed);
    let mut tracker = InnovationTracker::new();
    let mut population = init_population(config, &mut rng, &mut tracker)?;
    let global_seed: u64 = seed_rng.random();

    let mut stats = Vec::with_capacity(config.generations);
    let mut champion: Option<(Genome, u64, EpisodeResult)> = None;
    for generation in 0..config.generations {
        let episode_seed = match config.episode_seed_policy {
            EpisodeSeedPolicy::FixedGlobal => global_seed,
            EpisodeSeedPolicy::FixedPerGeneration if generation == 0 => global_seed,
            EpisodeSeedPolicy::FixedPerGeneration => seed_rng.random(),
        };
        let evaluations = evaluate_population(&population, world, episode_seed, config.episodes_per_genome)
            .expect("evolution only produces acyclic genomes");
        let fitnesses: Vec<f64> = evaluations.iter().map(|e| e.fitness).collect();
        for (genome, &f) in population.iter_mut().zip(&fitnesses) {
            genome.fitness = f;
        }

        let best = ranking(&fitnesses)[0];
        let n = population.len() as f64;
        let generation_stats = GenerationStats {
            generation_index: generation,
            episode_seed,
            max_score: evaluations.iter().map(|e| e.score).fold(0.0, f64::max),
            average_score: evaluations.iter().map(|e| e.score).sum::<f64>() / n,
            average_fitness: fitnesses.iter().sum::<f64>() / n,
            best_fitness: fitnesses[best],
            best_genome: population[best].clone(),
        };
        on_generation(&generation_stats);
        stats.push(generation_stats);

        if champion.as_ref().is_none_or(|(c, _, _)| fitnesses[best] > c.fitness) {
            champion = Some((population[best].clone(), episode_seed, evaluations[best].first_episode));
        }
        if generation + 1 < config.generations {
            population = next_generation(&population, &fitnesses, config, &mut rng, &mut tracker);
        }
    }

    let (champion, champion_seed, champion_episode) = champion.expect("generations >= 1");
    Ok(RunResult {
        stats,
        champion,
        champion_seed,
        champion_episode,
        evolution: config.clone(),
        world: world.clone(),
    })
}
