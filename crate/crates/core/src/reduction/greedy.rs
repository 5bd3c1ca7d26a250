//! Scan-based reductions (random order, sorted order) and Chvátal's greedy
//! set cover.

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use super::CoverageMatrix;

/// Keeps every path, in input order.
pub fn reduce_none(matrix: &CoverageMatrix) -> Vec<usize> {
    (0..matrix.path_count()).collect()
}

/// Keeps a path iff it covers something still uncovered when visited.
fn scan(matrix: &CoverageMatrix, order: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut uncovered = matrix.coverable();
    let mut remaining = uncovered.iter().filter(|&&u| u).count();
    let mut kept = Vec::new();
    for p in order {
        if remaining == 0 {
            break;
        }
        let mut fresh = false;
        for &r in matrix.covers(p) {
            if uncovered[r] {
                uncovered[r] = false;
                remaining -= 1;
                fresh = true;
            }
        }
        if fresh {
            kept.push(p);
        }
    }
    kept
}

/// Visits paths in a seeded uniformly random order.
pub fn reduce_random(matrix: &CoverageMatrix, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..matrix.path_count()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    scan(matrix, order)
}

/// Visits paths by descending number of covered requirements, computed once
/// up front; ties keep input order.
pub fn reduce_sorted(matrix: &CoverageMatrix) -> Vec<usize> {
    let mut order: Vec<usize> = (0..matrix.path_count()).collect();
    order.sort_by_key(|&p| std::cmp::Reverse(matrix.covers(p).len()));
    scan(matrix, order)
}

/// Chvátal's greedy set cover with unit path costs.
///
/// Requirements contained in another coverable requirement are dropped
/// first (covering the container covers them), then paths covering none of
/// the remaining requirements. The greedy step repeatedly takes the path
/// covering the most still-uncovered requirements, lowest index on ties.
pub fn reduce_chvatal(matrix: &CoverageMatrix) -> Vec<usize> {
    let coverable = matrix.coverable();
    let binding: Vec<bool> = (0..matrix.requirement_count())
        .map(|r| coverable[r] && !matrix.contained_in(r).iter().any(|&o| coverable[o]))
        .collect();

    let candidates: Vec<usize> = (0..matrix.path_count())
        .filter(|&p| matrix.covers(p).iter().any(|&r| binding[r]))
        .collect();

    let mut uncovered = binding;
    let mut remaining = uncovered.iter().filter(|&&u| u).count();
    let mut taken = vec![false; matrix.path_count()];
    let mut chosen = Vec::new();
    while remaining > 0 {
        let gain = |p: usize| matrix.covers(p).iter().filter(|&&r| uncovered[r]).count();
        let Some((best, gained)) = candidates
            .iter()
            .filter(|&&p| !taken[p])
            .map(|&p| (p, gain(p)))
            .fold(None, |acc: Option<(usize, usize)>, (p, g)| match acc {
                Some((_, bg)) if bg >= g => acc,
                _ => Some((p, g)),
            })
        else {
            break;
        };
        if gained == 0 {
            break;
        }
        taken[best] = true;
        chosen.push(best);
        for &r in matrix.covers(best) {
            if uncovered[r] {
                uncovered[r] = false;
                remaining -= 1;
            }
        }
    }
    chosen
}
