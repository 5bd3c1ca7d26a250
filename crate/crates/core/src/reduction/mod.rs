//! Path-set reduction as weighted-free set cover.
//!
//! Every reducer takes a [`CoverageMatrix`] and returns indices into its
//! path list. All of them cover every requirement the input paths cover.

mod annealing;
mod genetic;
mod greedy;
mod matrix;

pub use annealing::{initial_temperature, reduce_sa, sa_energy, SaConfig};
pub use genetic::{ga_fitness, reduce_ga, GaConfig};
pub use greedy::{reduce_chvatal, reduce_none, reduce_random, reduce_sorted};
pub use matrix::CoverageMatrix;

use std::fmt;
use std::str::FromStr;

use crate::model::{Graph, TestPath};

/// Set-cover reducer applied to the initial path set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Reduction {
    None,
    Random,
    Sorted,
    Chvatal,
    Genetic,
    Annealing,
}

impl Reduction {
    pub const ALL: [Reduction; 6] = [
        Reduction::None,
        Reduction::Random,
        Reduction::Sorted,
        Reduction::Chvatal,
        Reduction::Genetic,
        Reduction::Annealing,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Reduction::None => "none",
            Reduction::Random => "random",
            Reduction::Sorted => "sorted",
            Reduction::Chvatal => "chvatal",
            Reduction::Genetic => "ga",
            Reduction::Annealing => "sa",
        }
    }

    /// Whether the result depends on the seed.
    pub fn is_stochastic(self) -> bool {
        matches!(self, Reduction::Random | Reduction::Genetic | Reduction::Annealing)
    }

    pub fn apply(
        self,
        matrix: &CoverageMatrix,
        seed: u64,
        ga: &GaConfig,
        sa: &SaConfig,
    ) -> Vec<usize> {
        match self {
            Reduction::None => reduce_none(matrix),
            Reduction::Random => reduce_random(matrix, seed),
            Reduction::Sorted => reduce_sorted(matrix),
            Reduction::Chvatal => reduce_chvatal(matrix),
            Reduction::Genetic => reduce_ga(matrix, ga, seed),
            Reduction::Annealing => reduce_sa(matrix, sa, seed),
        }
    }
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Reduction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Reduction::ALL
            .into_iter()
            .find(|r| r.as_str() == s.to_ascii_lowercase())
            .ok_or_else(|| format!("unknown reduction '{s}'"))
    }
}

/// Adds paths to `selected` until every coverable requirement is covered,
/// each time taking the path that covers the most uncovered requirements
/// (lowest index on ties).
pub(crate) fn repair(matrix: &CoverageMatrix, mut selected: Vec<usize>) -> Vec<usize> {
    let coverable = matrix.coverable();
    let mut uncovered = coverable.clone();
    for &p in &selected {
        for &r in matrix.covers(p) {
            uncovered[r] = false;
        }
    }
    loop {
        let gain = |p: usize| matrix.covers(p).iter().filter(|&&r| uncovered[r]).count();
        let Some((p, g)) = (0..matrix.path_count())
            .map(|p| (p, gain(p)))
            .fold(None, |acc: Option<(usize, usize)>, (p, g)| match acc {
                Some((_, bg)) if bg >= g => acc,
                _ => Some((p, g)),
            })
        else {
            break;
        };
        if g == 0 {
            break;
        }
        selected.push(p);
        for &r in matrix.covers(p) {
            uncovered[r] = false;
        }
    }
    selected
}

/// Drops duplicate paths and every path that is a contiguous sub-path of
/// another one. The first copy of a duplicate is kept; relative order is
/// preserved.
pub fn enforce_no_subpath_rule(paths: Vec<TestPath>, graph: &Graph) -> Vec<TestPath> {
    let mut unique: Vec<TestPath> = Vec::with_capacity(paths.len());
    for p in paths {
        if !unique.contains(&p) {
            unique.push(p);
        }
    }
    // Proper containment is transitive, so checking against the full set
    // equals checking against the survivors.
    let keep: Vec<bool> = unique
        .iter()
        .enumerate()
        .map(|(i, p)| {
            !unique
                .iter()
                .enumerate()
                .any(|(j, q)| i != j && p.is_subpath_of(q, graph))
        })
        .collect();
    unique
        .into_iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(p))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::{path, triangle};

    #[test]
    fn subpath_rule_examples() {
        let g = triangle();
        let ab = path(&g, &["a", "b"]);
        let abc = path(&g, &["a", "b", "c"]);
        let bc = path(&g, &["b", "c"]);
        assert_eq!(
            enforce_no_subpath_rule(vec![ab.clone(), abc.clone()], &g),
            vec![abc]
        );
        assert_eq!(
            enforce_no_subpath_rule(vec![ab.clone(), bc.clone()], &g),
            vec![ab.clone(), bc]
        );
        assert_eq!(enforce_no_subpath_rule(vec![ab.clone(), ab.clone()], &g), vec![ab]);
    }

    #[test]
    fn repair_completes_cover() {
        let m = CoverageMatrix::from_subsets(vec![vec![0], vec![1, 2], vec![2], vec![]], 4);
        let fixed = repair(&m, vec![2]);
        // p0 and p1 each add one requirement; the tie goes to p0.
        assert_eq!(fixed, vec![2, 0, 1]);
        assert!(m.covers_all_coverable(&fixed));
    }

    #[test]
    fn names_round_trip() {
        for r in Reduction::ALL {
            assert_eq!(r.as_str().parse::<Reduction>(), Ok(r));
        }
        assert!("bogus".parse::<Reduction>().is_err());
    }
}
