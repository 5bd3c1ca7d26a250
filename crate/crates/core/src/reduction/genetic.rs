//! Genetic algorithm over path-selection bit vectors.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{repair, CoverageMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub population_size: usize,
    pub initial_probability_to_set_gene: f64,
    pub probability_to_mutate_one_gene: f64,
    pub probability_to_mutate_zero_gene: f64,
    pub max_generations: usize,
    pub max_generations_without_improvement: usize,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population_size: 30,
            initial_probability_to_set_gene: 0.2,
            probability_to_mutate_one_gene: 0.4,
            probability_to_mutate_zero_gene: 0.6,
            max_generations: 100,
            max_generations_without_improvement: 40,
        }
    }
}

impl GaConfig {
    pub fn is_valid(&self) -> bool {
        let unit = |p: f64| (0.0..=1.0).contains(&p);
        unit(self.initial_probability_to_set_gene)
            && unit(self.probability_to_mutate_one_gene)
            && unit(self.probability_to_mutate_zero_gene)
            && self.population_size >= 1
            && self.max_generations >= 1
            && self.max_generations_without_improvement >= 1
    }
}

/// `maxCost − (uncovered · (|P| + 1) + |selected|)` with
/// `maxCost = |R| · (|P| + 1) + |P|`.
///
/// The `|P| + 1` weight makes any full cover outscore any partial one.
pub fn ga_fitness(individual: &[bool], matrix: &CoverageMatrix) -> f64 {
    let selected: Vec<usize> = selected(individual);
    let p = matrix.path_count() as f64;
    let max_cost = matrix.requirement_count() as f64 * (p + 1.0) + p;
    let uncovered = matrix.uncovered_count(&selected) as f64;
    max_cost - (uncovered * (p + 1.0) + selected.len() as f64)
}

pub(crate) fn selected(bits: &[bool]) -> Vec<usize> {
    bits.iter()
        .enumerate()
        .filter(|(_, b)| **b)
        .map(|(i, _)| i)
        .collect()
}

#[derive(Clone)]
struct Individual {
    genes: Vec<bool>,
    fitness: f64,
    uncovered: usize,
}

struct Evaluator<'m> {
    matrix: &'m CoverageMatrix,
}

impl Evaluator<'_> {
    fn individual(&self, genes: Vec<bool>) -> Individual {
        let sel = selected(&genes);
        let uncovered = self.matrix.uncovered_count(&sel);
        let p = self.matrix.path_count() as f64;
        let max_cost = self.matrix.requirement_count() as f64 * (p + 1.0) + p;
        let fitness = max_cost - (uncovered as f64 * (p + 1.0) + sel.len() as f64);
        Individual {
            genes,
            fitness,
            uncovered,
        }
    }
}

/// Roulette wheel over `fitness + 1` so that zero-fitness individuals can
/// still be drawn.
fn roulette(pool: &[Individual], rng: &mut ChaCha8Rng) -> usize {
    let total: f64 = pool.iter().map(|i| i.fitness + 1.0).sum();
    let mut ticket = rng.gen::<f64>() * total;
    for (idx, ind) in pool.iter().enumerate() {
        ticket -= ind.fitness + 1.0;
        if ticket < 0.0 {
            return idx;
        }
    }
    pool.len() - 1
}

fn mutate(genes: &mut [bool], config: &GaConfig, rng: &mut ChaCha8Rng) {
    let g = rng.gen_range(0..genes.len());
    let p = if genes[g] {
        config.probability_to_mutate_one_gene
    } else {
        config.probability_to_mutate_zero_gene
    };
    if rng.gen::<f64>() < p {
        genes[g] = !genes[g];
    }
}

/// Two-point crossover: offspring take the parents' middle segment
/// `[point1, point2)` swapped. Chromosomes shorter than three genes have no
/// legal cut points and are copied unchanged.
fn crossover(a: &[bool], b: &[bool], rng: &mut ChaCha8Rng) -> (Vec<bool>, Vec<bool>) {
    let n = a.len();
    if n < 3 {
        return (a.to_vec(), b.to_vec());
    }
    let p1 = rng.gen_range(1..n - 1);
    let p2 = rng.gen_range(p1 + 1..n);
    let mut c1 = a.to_vec();
    let mut c2 = b.to_vec();
    c1[p1..p2].copy_from_slice(&b[p1..p2]);
    c2[p1..p2].copy_from_slice(&a[p1..p2]);
    (c1, c2)
}

/// First individual with the highest fitness.
fn fittest(pool: &[Individual]) -> &Individual {
    pool.iter()
        .fold(None::<&Individual>, |acc, ind| match acc {
            Some(a) if a.fitness >= ind.fitness => Some(a),
            _ => Some(ind),
        })
        .expect("non-empty population")
}

fn by_fitness_desc(a: &Individual, b: &Individual) -> std::cmp::Ordering {
    b.fitness.total_cmp(&a.fitness)
}

/// Genetic-algorithm reduction; the best individual found is repaired to a
/// full cover of the coverable requirements before returning.
pub fn reduce_ga(matrix: &CoverageMatrix, config: &GaConfig, seed: u64) -> Vec<usize> {
    let n = matrix.path_count();
    let restricted = matrix.restrict_to_coverable();
    if n == 0 || restricted.requirement_count() == 0 {
        return Vec::new();
    }
    let eval = Evaluator {
        matrix: &restricted,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pop_size = config.population_size.max(1);

    let mut population: Vec<Individual> = (0..pop_size)
        .map(|_| {
            let genes = (0..n)
                .map(|_| rng.gen::<f64>() < config.initial_probability_to_set_gene)
                .collect();
            eval.individual(genes)
        })
        .collect();

    let mut best = fittest(&population).clone();
    let is_optimal = |ind: &Individual| ind.uncovered == 0 && ind.genes.iter().filter(|g| **g).count() == 1;

    let mut stagnant = 0;
    for _generation in 0..config.max_generations {
        if is_optimal(&best) {
            break;
        }

        let mut offspring = Vec::with_capacity(2 * (pop_size / 3));
        for _ in 0..pop_size / 3 {
            let p1 = roulette(&population, &mut rng);
            let p2 = roulette(&population, &mut rng);
            let (mut c1, mut c2) = crossover(&population[p1].genes, &population[p2].genes, &mut rng);
            mutate(&mut c1, config, &mut rng);
            mutate(&mut c2, config, &mut rng);
            offspring.push(eval.individual(c1));
            offspring.push(eval.individual(c2));
        }
        population.extend(offspring);

        // Stable sort: ties keep the older individual first.
        population.sort_by(by_fitness_desc);
        let elite_count = (pop_size / 10).min(population.len());
        let rest = population.split_off(elite_count);
        let mut next = population;
        while next.len() < pop_size && !rest.is_empty() {
            let idx = roulette(&rest, &mut rng);
            next.push(rest[idx].clone());
        }
        population = next;

        let gen_best = fittest(&population);
        if gen_best.fitness > best.fitness {
            best = gen_best.clone();
            stagnant = 0;
        } else {
            stagnant += 1;
            if stagnant >= config.max_generations_without_improvement {
                break;
            }
        }
    }

    repair(matrix, selected(&best.genes))
}
