//! Artificial model generator and structural property measurement.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::RangeInclusive;

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::model::{Edge, Graph, PriorityScale, PrioritySelection, Vertex, VertexId};

/// Cycles counted beyond this are reported as "at least".
pub const CYCLE_CAP: usize = 10_000;
const CYCLE_WORK_BUDGET: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceSpec {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub cycle_count: usize,
    pub test_start_count: usize,
    pub test_end_count: usize,
    pub overlap_count: usize,
    pub end_vertex_count: usize,
    pub priority_scale: PriorityScale,
    /// Band the priority elements are drawn from; everything else is drawn
    /// from the scale outside it.
    pub priority_band: PrioritySelection,
    pub priority_vertex_count: usize,
    pub priority_edge_count: usize,
    pub seed: u64,
}

impl Default for InstanceSpec {
    fn default() -> Self {
        Self {
            vertex_count: 10,
            edge_count: 19,
            cycle_count: 2,
            test_start_count: 2,
            test_end_count: 2,
            overlap_count: 1,
            end_vertex_count: 1,
            priority_scale: PriorityScale::default(),
            priority_band: PrioritySelection::default(),
            priority_vertex_count: 3,
            priority_edge_count: 5,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("instance spec cannot be realized: {0}")]
    SpecUnsatisfiable(String),
}

impl InstanceSpec {
    pub fn check(&self) -> Result<(), InstanceError> {
        let fail = |m: String| Err(InstanceError::SpecUnsatisfiable(m));
        let n = self.vertex_count;
        if n == 0 {
            return fail("at least one vertex is required".into());
        }
        if self.edge_count + 1 < n {
            return fail(format!(
                "{} edges cannot connect {} vertices (need at least {})",
                self.edge_count,
                n,
                n - 1
            ));
        }
        if self.test_start_count == 0 || self.test_start_count > n {
            return fail(format!("test start count {} not in 1..={n}", self.test_start_count));
        }
        if self.test_end_count > n {
            return fail(format!("test end count {} exceeds {n} vertices", self.test_end_count));
        }
        if self.overlap_count > self.test_start_count.min(self.test_end_count) {
            return fail("overlap exceeds test start or test end count".into());
        }
        if self.test_end_count - self.overlap_count > n - self.test_start_count {
            return fail("not enough vertices for disjoint test starts and test ends".into());
        }
        if self.end_vertex_count > self.test_end_count {
            return fail("end vertices must be a subset of test ends".into());
        }
        if self.priority_vertex_count > n || self.priority_edge_count > self.edge_count {
            return fail("more priority elements than elements".into());
        }
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(self.priority_scale.min < self.priority_scale.max)
            || !self.priority_band.fits(&self.priority_scale)
        {
            return fail("priority band must lie inside the priority scale".into());
        }
        let needs_cold = self.priority_vertex_count < n || self.priority_edge_count < self.edge_count;
        if needs_cold && self.cold_range().is_none() {
            return fail("priority band leaves no room for non-priority values".into());
        }
        Ok(())
    }

    /// Range for non-priority values: below the band if possible, else above.
    fn cold_range(&self) -> Option<(f64, f64, bool)> {
        let (scale, band) = (self.priority_scale, self.priority_band);
        if scale.min < band.min {
            Some((scale.min, band.min, false))
        } else if band.max < scale.max {
            Some((band.max, scale.max, true))
        } else {
            None
        }
    }

    /// Spec drawn from ranges resembling the experimental corpus: a few
    /// cycles, one to three test starts and ends, roughly a quarter of the
    /// elements prioritized.
    pub fn sample(
        seed: u64,
        vertices: RangeInclusive<usize>,
        edges: RangeInclusive<usize>,
    ) -> InstanceSpec {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_5eed);
        let n = rng.gen_range(vertices).max(1);
        let lo = (*edges.start()).max(n - 1);
        let hi = (*edges.end()).max(lo);
        let m = rng.gen_range(lo..=hi);
        let ts = rng.gen_range(1..=3.min(n));
        let te = rng.gen_range(1..=3.min(n));
        let overlap_max = ts.min(te);
        // Disjoint parts must fit next to the test starts.
        let overlap_min = te.saturating_sub(n - ts);
        let overlap = rng.gen_range(overlap_min..=overlap_max.min(overlap_min.max(1)));
        InstanceSpec {
            vertex_count: n,
            edge_count: m,
            cycle_count: rng.gen_range(0..=6),
            test_start_count: ts,
            test_end_count: te,
            overlap_count: overlap,
            end_vertex_count: rng.gen_range(1.min(te)..=te.min(2)),
            priority_scale: PriorityScale::default(),
            priority_band: PrioritySelection::default(),
            priority_vertex_count: rng.gen_range(0..=n / 2),
            priority_edge_count: rng.gen_range(2.min(m)..=(m / 2).max(2.min(m))),
            seed,
        }
    }
}

/// Generated model plus the cycle count actually reached.
#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    pub graph: Graph,
    pub cycles: CycleStats,
}

/// Random spanning arborescence from the start vertex, then back edges
/// towards ancestors until the cycle target is met, then forward edges that
/// avoid overshooting it where possible.
pub fn generate(spec: &InstanceSpec) -> Result<GeneratedInstance, InstanceError> {
    spec.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.vertex_count;

    let mut order: Vec<usize> = (1..n).collect();
    order.shuffle(&mut rng);
    order.insert(0, 0);
    let mut rank = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }

    let mut graph = Graph {
        name: format!("instance-{}", spec.seed),
        vertices: (0..n)
            .map(|i| Vertex {
                name: format!("v{i}"),
                priority: 0.0,
            })
            .collect(),
        edges: Vec::with_capacity(spec.edge_count),
        start: VertexId(0),
        end_vertices: BTreeSet::new(),
        test_starts: BTreeSet::new(),
        test_ends: BTreeSet::new(),
        priority_scale: spec.priority_scale,
    };
    let push = |graph: &mut Graph, s: usize, t: usize| {
        let i = graph.edges.len();
        graph.edges.push(Edge {
            name: format!("e{i}"),
            source: VertexId(s),
            target: VertexId(t),
            label: format!("t{i}"),
            priority: 0.0,
        });
    };

    let mut parent = vec![usize::MAX; n];
    for i in 1..n {
        let p = order[rng.gen_range(0..i)];
        parent[order[i]] = p;
        push(&mut graph, p, order[i]);
    }
    let ancestors = |v: usize| {
        let mut out = vec![v];
        let mut cur = v;
        while parent[cur] != usize::MAX {
            cur = parent[cur];
            out.push(cur);
        }
        out
    };

    let target = spec.cycle_count;
    let cycles_within = |g: &Graph| {
        let c = count_cycles(g, target + 1);
        !c.capped && c.count <= target
    };

    // Back edges towards ancestors: each closes at least one cycle.
    let mut attempts = 0;
    while graph.edges.len() < spec.edge_count
        && count_cycles(&graph, target).count < target
        && attempts < 50 * (target + 1)
    {
        attempts += 1;
        let u = rng.gen_range(0..n);
        let anc = ancestors(u);
        // A vertex with no proper ancestor can only close a self-loop.
        let w = if anc.len() > 1 {
            anc[rng.gen_range(1..anc.len())]
        } else {
            u
        };
        push(&mut graph, u, w);
        if !cycles_within(&graph) {
            graph.edges.pop();
        }
    }

    // Forward edges respecting the tree order; parallel edges allowed.
    while graph.edges.len() < spec.edge_count {
        let mut placed = false;
        for _ in 0..20 {
            let (s, t) = if n == 1 {
                (0, 0)
            } else {
                let a = rng.gen_range(0..n - 1);
                let b = rng.gen_range(a + 1..n);
                (order[a], order[b])
            };
            push(&mut graph, s, t);
            if cycles_within(&graph) {
                placed = true;
                break;
            }
            graph.edges.pop();
        }
        if !placed {
            let s = rng.gen_range(0..n);
            let t = rng.gen_range(0..n);
            push(&mut graph, s, t);
        }
    }

    // Roles.
    let others: Vec<usize> = sample(&mut rng, n - 1, spec.test_start_count - 1)
        .into_iter()
        .map(|i| i + 1)
        .collect();
    let starts: Vec<usize> = std::iter::once(0).chain(others).collect();
    let shared: Vec<usize> = sample(&mut rng, starts.len(), spec.overlap_count)
        .into_iter()
        .map(|i| starts[i])
        .collect();
    let non_starts: Vec<usize> = (0..n).filter(|v| !starts.contains(v)).collect();
    let own: Vec<usize> = sample(&mut rng, non_starts.len(), spec.test_end_count - spec.overlap_count)
        .into_iter()
        .map(|i| non_starts[i])
        .collect();
    let ends: Vec<usize> = shared.into_iter().chain(own).collect();
    let finals: Vec<usize> = sample(&mut rng, ends.len(), spec.end_vertex_count)
        .into_iter()
        .map(|i| ends[i])
        .collect();
    graph.test_starts = starts.into_iter().map(VertexId).collect();
    graph.test_ends = ends.into_iter().map(VertexId).collect();
    graph.end_vertices = finals.into_iter().map(VertexId).collect();

    // Priorities.
    let band = spec.priority_band;
    let cold = spec.cold_range();
    let draw = |hot: bool, rng: &mut ChaCha8Rng| -> f64 {
        if hot {
            rng.gen_range(band.min..=band.max)
        } else {
            let (lo, hi, above) = cold.expect("checked in spec");
            if above {
                // (band.max, scale.max]
                hi - rng.gen_range(0.0..(hi - lo))
            } else {
                rng.gen_range(lo..hi)
            }
        }
    };
    let hot_vertices: BTreeSet<usize> =
        sample(&mut rng, n, spec.priority_vertex_count).into_iter().collect();
    for i in 0..n {
        graph.vertices[i].priority = draw(hot_vertices.contains(&i), &mut rng);
    }
    let m = graph.edges.len();
    let hot_edges: BTreeSet<usize> = sample(&mut rng, m, spec.priority_edge_count).into_iter().collect();
    for i in 0..m {
        graph.edges[i].priority = draw(hot_edges.contains(&i), &mut rng);
    }

    let cycles = count_cycles(&graph, CYCLE_CAP);
    Ok(GeneratedInstance { graph, cycles })
}

/// Distinct simple cycles (rotations counted once, parallel edges giving
/// distinct cycles) and their total length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct CycleStats {
    pub count: usize,
    pub total_length: usize,
    /// Enumeration stopped early; `count` is a lower bound.
    pub capped: bool,
}

impl CycleStats {
    pub fn mean_length(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.total_length as f64 / self.count as f64
        }
    }
}

/// Enumerates simple cycles rooted at their lowest vertex, stopping once
/// more than `cap` are found or the work budget runs out.
pub fn count_cycles(graph: &Graph, cap: usize) -> CycleStats {
    let adj = graph.adjacency();
    let n = graph.vertices.len();
    let mut stats = CycleStats::default();
    let mut on_path = vec![false; n];
    let mut work = 0usize;

    struct Dfs<'a> {
        graph: &'a Graph,
        adj: &'a crate::model::Adjacency,
        root: usize,
        cap: usize,
    }

    fn walk(
        d: &Dfs<'_>,
        v: usize,
        depth: usize,
        on_path: &mut [bool],
        stats: &mut CycleStats,
        work: &mut usize,
    ) -> bool {
        for &e in d.adj.outgoing(VertexId(v)) {
            *work += 1;
            if *work > CYCLE_WORK_BUDGET {
                stats.capped = true;
                return false;
            }
            let t = d.graph.edge(e).target.0;
            if t == d.root {
                stats.count += 1;
                stats.total_length += depth + 1;
                if stats.count > d.cap {
                    stats.capped = true;
                    return false;
                }
            } else if t > d.root && !on_path[t] {
                on_path[t] = true;
                let go_on = walk(d, t, depth + 1, on_path, stats, work);
                on_path[t] = false;
                if !go_on {
                    return false;
                }
            }
        }
        true
    }

    for root in 0..n {
        let d = Dfs {
            graph,
            adj: &adj,
            root,
            cap,
        };
        on_path[root] = true;
        let go_on = walk(&d, root, 0, &mut on_path, &mut stats, &mut work);
        on_path[root] = false;
        if !go_on {
            break;
        }
    }
    stats
}

/// Structural properties of a model, mirroring the instance table columns.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyReport {
    pub vertices: usize,
    pub edges: usize,
    pub cycles: usize,
    pub cycles_capped: bool,
    pub avg_cycle_length: f64,
    pub end_vertices: usize,
    pub parallel_edges: usize,
    pub parallel_edge_groups: usize,
    pub avg_in_degree: f64,
    pub avg_out_degree: f64,
    pub avg_degree: f64,
    pub test_starts: usize,
    pub test_ends: usize,
    pub overlap: usize,
    pub priority_vertices: usize,
    pub priority_edges: usize,
}

/// [`measure_properties_with`] using the default selection band.
pub fn measure_properties(graph: &Graph) -> PropertyReport {
    measure_properties_with(graph, &PrioritySelection::default())
}

pub fn measure_properties_with(graph: &Graph, selection: &PrioritySelection) -> PropertyReport {
    let cycles = count_cycles(graph, CYCLE_CAP);
    let mut groups: BTreeMap<(VertexId, VertexId), usize> = BTreeMap::new();
    for e in &graph.edges {
        *groups.entry((e.source, e.target)).or_default() += 1;
    }
    let parallel: Vec<usize> = groups.values().copied().filter(|&c| c > 1).collect();
    let n = graph.vertices.len();
    let per_vertex = if n == 0 {
        0.0
    } else {
        graph.edges.len() as f64 / n as f64
    };
    PropertyReport {
        vertices: n,
        edges: graph.edges.len(),
        cycles: cycles.count,
        cycles_capped: cycles.capped,
        avg_cycle_length: cycles.mean_length(),
        end_vertices: graph.end_vertices.len(),
        parallel_edges: parallel.iter().sum(),
        parallel_edge_groups: parallel.len(),
        avg_in_degree: per_vertex,
        avg_out_degree: per_vertex,
        avg_degree: 2.0 * per_vertex,
        test_starts: graph.test_starts.len(),
        test_ends: graph.test_ends.len(),
        overlap: graph.test_starts.intersection(&graph.test_ends).count(),
        priority_vertices: graph
            .vertices
            .iter()
            .filter(|v| selection.contains(v.priority))
            .count(),
        priority_edges: graph
            .edges
            .iter()
            .filter(|e| selection.contains(e.priority))
            .count(),
    }
}

/// Vertices reachable from the start vertex.
pub fn reachable_from_start(graph: &Graph) -> BTreeSet<VertexId> {
    let adj = graph.adjacency();
    let mut seen = BTreeSet::from([graph.start]);
    let mut stack = vec![graph.start];
    while let Some(v) = stack.pop() {
        for &e in adj.outgoing(v) {
            let t = graph.edge(e).target;
            if seen.insert(t) {
                stack.push(t);
            }
        }
    }
    seen
}
