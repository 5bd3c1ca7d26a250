//! Simulated annealing over path-selection bit vectors with a geometric
//! cooling schedule.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::genetic::selected;
use super::{repair, CoverageMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct SaConfig {
    /// Geometric cooling coefficient, `t ← alpha · t`.
    pub alpha: f64,
    /// The system is frozen once the temperature drops below this.
    pub freeze_threshold: f64,
}

impl Default for SaConfig {
    fn default() -> Self {
        Self {
            alpha: 0.8,
            freeze_threshold: 1e-6,
        }
    }
}

impl SaConfig {
    pub fn is_valid(&self) -> bool {
        self.alpha > 0.0 && self.alpha < 1.0 && self.freeze_threshold > 0.0
    }
}

/// `|P|^2.2 · 1.5`
pub fn initial_temperature(path_count: usize) -> f64 {
    (path_count as f64).powf(2.2) * 1.5
}

/// `uncovered · (|P| + 1) + |selected|`.
pub fn sa_energy(point: &[bool], matrix: &CoverageMatrix) -> f64 {
    let sel = selected(point);
    let p = matrix.path_count() as f64;
    matrix.uncovered_count(&sel) as f64 * (p + 1.0) + sel.len() as f64
}

/// Incrementally maintained energy of a point.
struct State<'m> {
    matrix: &'m CoverageMatrix,
    bits: Vec<bool>,
    /// Selected paths covering each requirement.
    hits: Vec<u32>,
    uncovered: usize,
    chosen: usize,
}

impl<'m> State<'m> {
    fn new(matrix: &'m CoverageMatrix, bits: Vec<bool>) -> Self {
        let mut hits = vec![0u32; matrix.requirement_count()];
        for (p, _) in bits.iter().enumerate().filter(|(_, b)| **b) {
            for &r in matrix.covers(p) {
                hits[r] += 1;
            }
        }
        let uncovered = hits.iter().filter(|&&h| h == 0).count();
        let chosen = bits.iter().filter(|b| **b).count();
        Self {
            matrix,
            bits,
            hits,
            uncovered,
            chosen,
        }
    }

    fn energy(&self) -> f64 {
        self.uncovered as f64 * (self.matrix.path_count() as f64 + 1.0) + self.chosen as f64
    }

    fn flip(&mut self, p: usize) {
        let on = !self.bits[p];
        self.bits[p] = on;
        for &r in self.matrix.covers(p) {
            if on {
                if self.hits[r] == 0 {
                    self.uncovered -= 1;
                }
                self.hits[r] += 1;
            } else {
                self.hits[r] -= 1;
                if self.hits[r] == 0 {
                    self.uncovered += 1;
                }
            }
        }
        if on {
            self.chosen += 1;
        } else {
            self.chosen -= 1;
        }
    }
}

/// Simulated-annealing reduction; the best point seen is repaired to a full
/// cover of the coverable requirements before returning.
///
/// Each temperature runs `⌈t⌉` single-bit-flip trials. Improving moves are
/// always taken (and update the best point), worsening ones with
/// probability `exp(−Δ/t)`.
pub fn reduce_sa(matrix: &CoverageMatrix, config: &SaConfig, seed: u64) -> Vec<usize> {
    let n = matrix.path_count();
    let restricted = matrix.restrict_to_coverable();
    if n == 0 || restricted.requirement_count() == 0 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start: Vec<bool> = (0..n).map(|_| rng.gen::<bool>()).collect();
    let mut actual = State::new(&restricted, start.clone());
    let mut best_bits = start;
    let mut best_energy = actual.energy();

    let mut t = initial_temperature(n);
    while t >= config.freeze_threshold {
        let trials = t.ceil() as u64;
        for _ in 0..trials {
            let bit = rng.gen_range(0..n);
            let before = actual.energy();
            actual.flip(bit);
            let after = actual.energy();
            let delta = after - before;
            if delta < 0.0 {
                if after < best_energy {
                    best_energy = after;
                    best_bits.clone_from(&actual.bits);
                }
            } else if rng.gen::<f64>() >= (-delta / t).exp() {
                actual.flip(bit);
            }
        }
        t *= config.alpha;
    }

    repair(matrix, selected(&best_bits))
}
