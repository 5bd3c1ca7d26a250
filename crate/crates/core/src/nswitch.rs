//! N-switch style baseline: enumerate every bounded-length walk, keep the
//! valid test paths, then scan them in enumeration order keeping each one
//! that covers a still-uncovered requirement.

use thiserror::Error;

use crate::model::{Adjacency, EdgeId, Graph, PrioritySelection, TestPath};
use crate::requirements::{generate_requirements, CoverageCriterion, Requirement};

/// Default bound on the number of enumerated partial paths.
pub const DEFAULT_ENUM_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NSwitchError {
    #[error("path enumeration would produce {count} partial paths, above the cap of {cap}")]
    EnumerationOverflow { count: u64, cap: u64 },
}

/// Number of walks with length in `1..=max_length`, summed over every
/// first edge. Saturates at `u64::MAX`.
pub fn count_bounded_paths(graph: &Graph, max_length: usize) -> u64 {
    if max_length == 0 {
        return 0;
    }
    let adj = graph.adjacency();
    // walks[v] = walks of exactly the current length leaving v.
    let mut walks = vec![1u64; graph.vertices.len()];
    let mut total = 0u64;
    for _ in 1..=max_length {
        // Walks of length k starting with edge e = walks of length k-1 from
        // its target.
        for e in &graph.edges {
            total = total.saturating_add(walks[e.target.0]);
        }
        walks = graph
            .vertex_ids()
            .map(|v| {
                adj.outgoing(v)
                    .iter()
                    .fold(0u64, |acc, e| acc.saturating_add(walks[graph.edge(*e).target.0]))
            })
            .collect();
    }
    total
}

struct Scan<'a> {
    graph: &'a Graph,
    adj: Adjacency,
    min_length: usize,
    max_length: usize,
    requirements: &'a [Requirement],
    uncovered: Vec<bool>,
    remaining: usize,
    kept: Vec<TestPath>,
}

impl Scan<'_> {
    /// Depth-first, pre-order; returns false once every requirement is
    /// covered.
    fn visit(&mut self, walk: &mut Vec<EdgeId>) -> bool {
        let len = walk.len();
        if len >= self.min_length {
            let first = self.graph.edge(walk[0]).source;
            let last = self.graph.edge(walk[len - 1]).target;
            if self.graph.is_path_start(first) && self.graph.is_path_end(last) {
                self.offer(TestPath::from_parts_unchecked(first, walk.clone()));
                if self.remaining == 0 {
                    return false;
                }
            }
        }
        if len < self.max_length {
            let tip = self.graph.edge(walk[len - 1]).target;
            for i in 0..self.adj.outgoing(tip).len() {
                walk.push(self.adj.outgoing(tip)[i]);
                let go_on = self.visit(walk);
                walk.pop();
                if !go_on {
                    return false;
                }
            }
        }
        true
    }

    fn offer(&mut self, path: TestPath) {
        let mut fresh = false;
        for (i, r) in self.requirements.iter().enumerate() {
            if self.uncovered[i] && r.is_covered_by(&path, self.graph) {
                self.uncovered[i] = false;
                self.remaining -= 1;
                fresh = true;
            }
        }
        if fresh {
            self.kept.push(path);
        }
    }
}

/// Baseline over an explicit requirement list.
pub fn nswitch_reduce_requirements(
    graph: &Graph,
    min_length: usize,
    max_length: usize,
    requirements: &[Requirement],
    enum_cap: u64,
) -> Result<Vec<TestPath>, NSwitchError> {
    let min_length = min_length.max(1);
    let count = count_bounded_paths(graph, max_length);
    if count > enum_cap {
        return Err(NSwitchError::EnumerationOverflow { count, cap: enum_cap });
    }
    if requirements.is_empty() || min_length > max_length {
        return Ok(Vec::new());
    }
    let mut scan = Scan {
        graph,
        adj: graph.adjacency(),
        min_length,
        max_length,
        requirements,
        uncovered: vec![true; requirements.len()],
        remaining: requirements.len(),
        kept: Vec::new(),
    };
    let mut walk = Vec::with_capacity(max_length);
    for e in graph.edge_ids() {
        walk.push(e);
        let go_on = scan.visit(&mut walk);
        walk.pop();
        if !go_on {
            break;
        }
    }
    Ok(scan.kept)
}

/// Generates the criterion's requirements and runs the baseline.
pub fn nswitch_reduce(
    graph: &Graph,
    min_length: usize,
    max_length: usize,
    criterion: CoverageCriterion,
    selection: &PrioritySelection,
    enum_cap: u64,
) -> Result<Vec<TestPath>, NSwitchError> {
    let requirements: Vec<Requirement> = generate_requirements(graph, criterion, selection)
        .into_iter()
        .collect();
    nswitch_reduce_requirements(graph, min_length, max_length, &requirements, enum_cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::{path, triangle, triangle_with};
    use crate::model::GraphBuilder;

    #[test]
    fn triangle_example() {
        let g = triangle_with(&[], &["b"]);
        let out = nswitch_reduce(
            &g,
            2,
            3,
            CoverageCriterion::Basic,
            &PrioritySelection::default(),
            DEFAULT_ENUM_CAP,
        )
        .unwrap();
        assert_eq!(out, vec![path(&g, &["a", "b"])]);
    }

    #[test]
    fn empty_requirements() {
        let g = triangle();
        let out = nswitch_reduce(
            &g,
            2,
            3,
            CoverageCriterion::Extended,
            &PrioritySelection::default(),
            DEFAULT_ENUM_CAP,
        )
        .unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn triangle_counts() {
        // One walk of each length per first edge.
        assert_eq!(count_bounded_paths(&triangle(), 3), 9);
        assert_eq!(count_bounded_paths(&triangle(), 0), 0);
    }

    fn complete(n: usize) -> Graph {
        let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let mut b = GraphBuilder::new("k");
        for v in &names {
            b = b.vertex(v, 0.0);
        }
        for (i, s) in names.iter().enumerate() {
            for (j, t) in names.iter().enumerate() {
                if i != j {
                    b = b.edge(&format!("e{i}_{j}"), s, t, 3.0);
                }
            }
        }
        b.start("v0").test_starts(&["v0"]).test_ends(&["v9"]).build()
    }

    #[test]
    fn complete_graph_overflows() {
        let g = complete(10);
        // 90 first edges, 9 choices per further step: Σ_{k=1..8} 90·9^(k-1).
        let expected: u64 = (0..8).map(|k| 90 * 9u64.pow(k)).sum();
        assert_eq!(count_bounded_paths(&g, 8), expected);
        let err = nswitch_reduce(
            &g,
            1,
            8,
            CoverageCriterion::Basic,
            &PrioritySelection::default(),
            100_000,
        )
        .unwrap_err();
        assert_eq!(err, NSwitchError::EnumerationOverflow { count: expected, cap: 100_000 });
    }
}
