//! Shortest test path through a requirement, with a length window.
//!
//! The path is assembled as `prefix ++ requirement ++ suffix`. The prefix
//! grows backward from the requirement's first vertex until it reaches a
//! test start; the suffix grows forward from the requirement's last vertex
//! until it reaches a test end. The two frontiers are expanded alternately,
//! breadth first, one length layer at a time (start side first).
//!
//! Whether a prefix and a suffix can be joined depends only on their
//! lengths, so each side keeps a single representative per length that
//! reaches a valid endpoint (the `representatives` map). Partial paths are
//! deduplicated by `(vertex, length)`, which keeps the search polynomial in
//! dense multigraphs: two partial paths with the same far vertex and the same
//! length are interchangeable for every later extension.

use std::collections::BTreeMap;

use crate::model::{Adjacency, EdgeId, Graph, TestPath, VertexId};
use crate::requirements::Requirement;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Direction {
    /// Walk incoming edges; paths end at the root.
    Backward,
    /// Walk outgoing edges; paths begin at the root.
    Forward,
}

#[derive(Debug, Clone, Copy)]
struct Entry {
    vertex: VertexId,
    via: Option<EdgeId>,
    parent: usize,
}

/// One side of the bidirectional search.
#[derive(Debug)]
struct Frontier {
    direction: Direction,
    layers: Vec<Vec<Entry>>,
    /// Path length → index of the first entry in that layer whose far
    /// vertex is a valid test start (backward) or test end (forward).
    representatives: BTreeMap<usize, usize>,
    stamp: Vec<usize>,
}

impl Frontier {
    fn new(root: VertexId, direction: Direction, vertex_count: usize) -> Self {
        Self {
            direction,
            layers: vec![vec![Entry {
                vertex: root,
                via: None,
                parent: 0,
            }]],
            representatives: BTreeMap::new(),
            stamp: vec![usize::MAX; vertex_count],
        }
    }

    fn depth(&self) -> usize {
        self.layers.len() - 1
    }

    fn is_exhausted(&self) -> bool {
        self.layers.last().is_none_or(|l| l.is_empty())
    }

    fn shortest(&self) -> Option<usize> {
        self.representatives.keys().next().copied()
    }

    /// Records a representative for the newest layer if one of its far
    /// vertices is accepted; returns the length if recorded.
    fn record(&mut self, accept: impl Fn(VertexId) -> bool) -> Option<usize> {
        let depth = self.depth();
        let idx = self.layers[depth].iter().position(|e| accept(e.vertex))?;
        self.representatives.entry(depth).or_insert(idx);
        Some(depth)
    }

    fn grow(&mut self, graph: &Graph, adj: &Adjacency) {
        let depth = self.depth() + 1;
        let mut next = Vec::new();
        for (parent, entry) in self.layers[depth - 1].iter().enumerate() {
            let edges = match self.direction {
                Direction::Backward => adj.incoming(entry.vertex),
                Direction::Forward => adj.outgoing(entry.vertex),
            };
            for &e in edges {
                let edge = graph.edge(e);
                let far = match self.direction {
                    Direction::Backward => edge.source,
                    Direction::Forward => edge.target,
                };
                if self.stamp[far.0] != depth {
                    self.stamp[far.0] = depth;
                    next.push(Entry {
                        vertex: far,
                        via: Some(e),
                        parent,
                    });
                }
            }
        }
        self.layers.push(next);
    }

    /// Edges of the representative path of `length`, in walking order, and
    /// its far vertex.
    fn path(&self, length: usize) -> (VertexId, Vec<EdgeId>) {
        let mut idx = self.representatives[&length];
        let far = self.layers[length][idx].vertex;
        let mut edges = Vec::with_capacity(length);
        for depth in (1..=length).rev() {
            let entry = self.layers[depth][idx];
            edges.push(entry.via.expect("non-root entry"));
            idx = entry.parent;
        }
        // Walking back to the root from the far end yields walking order for
        // a prefix and reversed order for a suffix.
        if self.direction == Direction::Forward {
            edges.reverse();
        }
        (far, edges)
    }
}

/// Reusable search context over one graph.
#[derive(Debug)]
pub struct PathSearch<'g> {
    graph: &'g Graph,
    adjacency: Adjacency,
}

impl<'g> PathSearch<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        Self {
            graph,
            adjacency: graph.adjacency(),
        }
    }

    /// Shortest test path containing `requirement` whose length lies in
    /// `[min_length, max_length]`, or `None` if there is none.
    ///
    /// A `min_length` of 0 is treated as 1: test paths have at least one
    /// edge.
    pub fn find(
        &self,
        requirement: &Requirement,
        min_length: usize,
        max_length: usize,
    ) -> Option<TestPath> {
        let graph = self.graph;
        let min_length = min_length.max(1);
        let body = requirement.body();
        if min_length > max_length || body.len() > max_length {
            return None;
        }
        let budget = max_length - body.len();
        let n = graph.vertices.len();

        let mut starts = Frontier::new(requirement.first_vertex(graph), Direction::Backward, n);
        let mut ends = Frontier::new(requirement.last_vertex(graph), Direction::Forward, n);
        let is_start = |v| graph.is_path_start(v);
        let is_end = |v| graph.is_path_end(v);

        // Best join so far: (total length, prefix length, suffix length).
        let mut best: Option<(usize, usize, usize)> = None;
        let consider = |prefix: usize, suffix: usize, best: &mut Option<(usize, usize, usize)>| {
            let total = prefix + body.len() + suffix;
            if total >= min_length && total <= max_length && best.is_none_or(|b| total < b.0) {
                *best = Some((total, prefix, suffix));
            }
        };

        starts.record(is_start);
        ends.record(is_end);
        if let (Some(a), Some(b)) = (starts.shortest(), ends.shortest()) {
            consider(a, b, &mut best);
        }

        loop {
            let can_grow = |side: &Frontier, other: &Frontier| {
                !side.is_exhausted()
                    && side.depth() + 1 + other.shortest().unwrap_or(0) <= budget
            };
            let grow_starts = can_grow(&starts, &ends);
            let grow_ends = can_grow(&ends, &starts);

            // Any join not yet seen needs a layer deeper than the current one
            // on at least one side.
            let bound = [
                grow_starts.then(|| starts.depth() + 1),
                grow_ends.then(|| ends.depth() + 1),
            ]
            .into_iter()
            .flatten()
            .min();
            match (bound, best) {
                (None, _) => break,
                (Some(lb), Some((total, _, _))) if total <= (lb + body.len()).max(min_length) => {
                    break
                }
                _ => {}
            }

            if grow_starts {
                starts.grow(graph, &self.adjacency);
                if let Some(a) = starts.record(is_start) {
                    for &b in ends.representatives.keys() {
                        consider(a, b, &mut best);
                    }
                }
            }
            if can_grow(&ends, &starts) {
                ends.grow(graph, &self.adjacency);
                if let Some(b) = ends.record(is_end) {
                    for &a in starts.representatives.keys() {
                        consider(a, b, &mut best);
                    }
                }
            }
        }

        let (_, prefix_len, suffix_len) = best?;
        let (first, mut edges) = starts.path(prefix_len);
        edges.extend_from_slice(body);
        edges.extend(ends.path(suffix_len).1);
        Some(TestPath::from_parts_unchecked(first, edges))
    }
}

/// One-shot form of [`PathSearch::find`].
pub fn find_path_in_range(
    requirement: &Requirement,
    graph: &Graph,
    min_length: usize,
    max_length: usize,
) -> Option<TestPath> {
    PathSearch::new(graph).find(requirement, min_length, max_length)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::{path, triangle};
    use crate::model::GraphBuilder;

    fn edge_req(g: &Graph, names: &[&str]) -> Requirement {
        Requirement::EdgeSequence(names.iter().map(|n| g.edge_by_name(n).unwrap()).collect())
    }

    #[test]
    fn triangle_examples() {
        let g = triangle();
        assert_eq!(
            find_path_in_range(&edge_req(&g, &["b"]), &g, 2, 6),
            Some(path(&g, &["a", "b"]))
        );
        let va = Requirement::VertexVisit(g.vertex_by_name("A").unwrap());
        assert_eq!(find_path_in_range(&va, &g, 2, 2), Some(path(&g, &["a", "b"])));
        assert_eq!(find_path_in_range(&edge_req(&g, &["c"]), &g, 1, 3), None);
    }

    #[test]
    fn window_forces_long_walk() {
        let g = triangle();
        assert_eq!(
            find_path_in_range(&edge_req(&g, &["b"]), &g, 4, 5),
            Some(path(&g, &["a", "b", "c", "a", "b"]))
        );
        assert_eq!(
            find_path_in_range(&edge_req(&g, &["c"]), &g, 1, 6),
            Some(path(&g, &["a", "b", "c", "a", "b"]))
        );
    }

    #[test]
    fn body_longer_than_window() {
        let g = triangle();
        assert_eq!(find_path_in_range(&edge_req(&g, &["a", "b"]), &g, 1, 1), None);
        assert_eq!(find_path_in_range(&edge_req(&g, &["b"]), &g, 3, 2), None);
    }

    #[test]
    fn lopsided_frontiers_still_minimal() {
        // The start side reaches a test start only after three edges while
        // the end side hits a test end immediately; a naive first-join
        // would still be correct here, but a long end-side detour must not
        // win over the direct suffix.
        let g = GraphBuilder::new("lop")
            .vertex("S", 0.0)
            .vertex("X", 0.0)
            .vertex("Y", 0.0)
            .vertex("R", 0.0)
            .vertex("T", 0.0)
            .vertex("U", 0.0)
            .edge("s", "S", "X", 0.0)
            .edge("x", "X", "Y", 0.0)
            .edge("y", "Y", "R", 0.0)
            .edge("r", "R", "T", 3.0)
            .edge("t", "T", "U", 0.0)
            .edge("u", "U", "T", 0.0)
            .start("S")
            .test_starts(&["S", "R"])
            .test_ends(&["T"])
            .build();
        let r = edge_req(&g, &["r"]);
        assert_eq!(find_path_in_range(&r, &g, 1, 8), Some(path(&g, &["r"])));
        assert_eq!(find_path_in_range(&r, &g, 3, 8), Some(path(&g, &["r", "t", "u"])));
        assert_eq!(find_path_in_range(&r, &g, 4, 4), Some(path(&g, &["s", "x", "y", "r"])));
    }
}
