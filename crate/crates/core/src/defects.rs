//! Simulated defects planted on model edges and the path-set metrics used
//! to compare generated test sets.

use std::collections::{BTreeSet, VecDeque};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{EdgeId, Graph, TestPath, VertexId};

/// Type 1 defects sit on single edges; Type 2 defects on ordered edge
/// pairs and fire only when the second edge follows the first in a path.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DefectSet {
    pub type1: BTreeSet<EdgeId>,
    pub type2: BTreeSet<(EdgeId, EdgeId)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DefectError {
    #[error("requested {requested} type {kind} defects but only {available} candidates exist")]
    InsufficientCandidates {
        kind: u8,
        requested: usize,
        available: usize,
    },
}

/// Shortest walk length from `from` to every vertex (`None` if
/// unreachable).
fn distances_from(graph: &Graph, from: VertexId) -> Vec<Option<usize>> {
    let adj = graph.adjacency();
    let mut dist = vec![None; graph.vertices.len()];
    dist[from.0] = Some(0);
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        let d = dist[v.0].expect("queued vertices have a distance");
        for &e in adj.outgoing(v) {
            let t = graph.edge(e).target;
            if dist[t.0].is_none() {
                dist[t.0] = Some(d + 1);
                queue.push_back(t);
            }
        }
    }
    dist
}

/// Edges strictly between `e1` and `e2` on a shortest connecting walk, or
/// `None` if `e2` cannot follow `e1`. Adjacent edges are at distance 0.
pub fn pair_distance(graph: &Graph, e1: EdgeId, e2: EdgeId) -> Option<usize> {
    distances_from(graph, graph.edge(e1).target)[graph.edge(e2).source.0]
}

/// All ordered pairs `(e1, e2)`, `e1 ≠ e2`, such that some walk traverses
/// `e1` and later `e2`, in lexicographic order.
pub fn connected_pairs(graph: &Graph) -> Vec<(EdgeId, EdgeId)> {
    let reach: Vec<Vec<Option<usize>>> = graph.vertex_ids().map(|v| distances_from(graph, v)).collect();
    let mut pairs = Vec::new();
    for e1 in graph.edge_ids() {
        let from = graph.edge(e1).target;
        for e2 in graph.edge_ids() {
            if e1 != e2 && reach[from.0][graph.edge(e2).source.0].is_some() {
                pairs.push((e1, e2));
            }
        }
    }
    pairs
}

impl DefectSet {
    /// Problems with this defect set on `graph`, as messages.
    pub fn check(&self, graph: &Graph) -> Vec<String> {
        let n = graph.edges.len();
        let mut problems = Vec::new();
        for e in &self.type1 {
            if e.0 >= n {
                problems.push(format!("type 1 defect on unknown edge {e}"));
            }
        }
        for (e1, e2) in &self.type2 {
            if e1.0 >= n || e2.0 >= n {
                problems.push(format!("type 2 defect on unknown edge ({e1}, {e2})"));
            } else if pair_distance(graph, *e1, *e2).is_none() {
                problems.push(format!(
                    "type 2 defect ({}, {}) has no connecting path",
                    graph.edge(*e1).name,
                    graph.edge(*e2).name
                ));
            }
        }
        problems
    }

    /// Mean [`pair_distance`] over Type 2 defects; 0 when there are none.
    pub fn mean_pair_distance(&self, graph: &Graph) -> f64 {
        if self.type2.is_empty() {
            return 0.0;
        }
        let total: usize = self
            .type2
            .iter()
            .filter_map(|(a, b)| pair_distance(graph, *a, *b))
            .sum();
        total as f64 / self.type2.len() as f64
    }
}

/// `(type 1 activations, type 2 activations)`.
///
/// A Type 1 defect fires once per traversal of its edge. A Type 2 defect
/// fires at most once per path, when the path contains `e1` at some index
/// and `e2` at a later one.
pub fn activate_defects(paths: &[TestPath], defects: &DefectSet) -> (usize, usize) {
    let mut type1 = 0;
    let mut type2 = 0;
    for p in paths {
        let edges = p.edges();
        type1 += edges.iter().filter(|e| defects.type1.contains(e)).count();
        for (e1, e2) in &defects.type2 {
            let fired = edges
                .iter()
                .position(|e| e == e1)
                .is_some_and(|i| edges[i + 1..].contains(e2));
            if fired {
                type2 += 1;
            }
        }
    }
    (type1, type2)
}

/// Evaluation metrics of a path set. Ratios are kept at full precision.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MetricsReport {
    pub steps: usize,
    pub path_count: usize,
    pub avg_steps: f64,
    pub unique_steps: usize,
    pub ut: f64,
    pub type1_activated: usize,
    pub type2_activated: usize,
    pub eff1: f64,
    pub eff2: f64,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn compute_metrics(paths: &[TestPath], defects: &DefectSet) -> MetricsReport {
    let steps: usize = paths.iter().map(TestPath::len).sum();
    let unique_steps = paths
        .iter()
        .flat_map(|p| p.edges().iter().copied())
        .collect::<BTreeSet<_>>()
        .len();
    let (type1_activated, type2_activated) = activate_defects(paths, defects);
    MetricsReport {
        steps,
        path_count: paths.len(),
        avg_steps: ratio(steps, paths.len()),
        unique_steps,
        ut: ratio(steps, unique_steps),
        type1_activated,
        type2_activated,
        eff1: ratio(type1_activated, steps),
        eff2: ratio(type2_activated, steps),
    }
}

/// Samples Type 1 edges and connected Type 2 pairs uniformly without
/// replacement.
pub fn plant_random_defects(
    graph: &Graph,
    type1_count: usize,
    type2_count: usize,
    seed: u64,
) -> Result<DefectSet, DefectError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = graph.edges.len();
    if type1_count > edges {
        return Err(DefectError::InsufficientCandidates {
            kind: 1,
            requested: type1_count,
            available: edges,
        });
    }
    let type1 = sample(&mut rng, edges, type1_count)
        .into_iter()
        .map(EdgeId)
        .collect();

    let pairs = if type2_count == 0 {
        Vec::new()
    } else {
        connected_pairs(graph)
    };
    if type2_count > pairs.len() {
        return Err(DefectError::InsufficientCandidates {
            kind: 2,
            requested: type2_count,
            available: pairs.len(),
        });
    }
    let type2 = sample(&mut rng, pairs.len(), type2_count)
        .into_iter()
        .map(|i| pairs[i])
        .collect();
    Ok(DefectSet { type1, type2 })
}
