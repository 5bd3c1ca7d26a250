#![allow(dead_code)]

use std::collections::BTreeSet;

use psmt::batch::{ensure_defects, BatchOptions, Instance};
use psmt::instance::{generate, InstanceSpec};
use psmt::model::{Edge, Vertex};
use psmt::reduction::CoverageMatrix;
use psmt::{DefectSet, EdgeId, Graph, Model, PriorityScale, Requirement, TestPath, VertexId};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random valid multigraph with 2..=max_vertices vertices. Self-loops and
/// parallel edges are allowed.
pub fn random_graph(rng: &mut ChaCha8Rng, max_vertices: usize) -> Graph {
    let n = rng.gen_range(2..=max_vertices);
    let m = rng.gen_range(1..=2 * n);
    let levels = [0.0, 1.0, 2.0, 2.5, 3.0];
    let vertices = (0..n)
        .map(|i| Vertex {
            name: format!("v{i}"),
            priority: *levels.choose(rng).unwrap(),
        })
        .collect();
    let edges = (0..m)
        .map(|i| Edge {
            name: format!("e{i}"),
            label: format!("e{i}"),
            source: VertexId(rng.gen_range(0..n)),
            target: VertexId(rng.gen_range(0..n)),
            priority: *levels.choose(rng).unwrap(),
        })
        .collect();
    let pick = |rng: &mut ChaCha8Rng, p: f64| -> BTreeSet<VertexId> {
        (0..n).filter(|_| rng.gen_bool(p)).map(VertexId).collect()
    };
    let mut test_starts = pick(rng, 0.3);
    test_starts.insert(VertexId(0));
    let mut test_ends = pick(rng, 0.3);
    test_ends.insert(VertexId(rng.gen_range(0..n)));
    let end_vertices = test_ends.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
    let g = Graph {
        name: "random".into(),
        vertices,
        edges,
        start: VertexId(0),
        end_vertices,
        test_starts,
        test_ends,
        priority_scale: PriorityScale::default(),
    };
    assert!(g.validate().is_valid());
    g
}

/// A vertex requirement, or a walk of one to three edges.
pub fn random_requirement(rng: &mut ChaCha8Rng, g: &Graph) -> Requirement {
    if rng.gen_bool(0.3) {
        return Requirement::VertexVisit(VertexId(rng.gen_range(0..g.vertices.len())));
    }
    let adj = g.adjacency();
    let mut body = vec![EdgeId(rng.gen_range(0..g.edges.len()))];
    let want = rng.gen_range(1..=3);
    while body.len() < want {
        let next = adj.outgoing(g.edge(*body.last().unwrap()).target);
        match next.choose(rng) {
            Some(e) => body.push(*e),
            None => break,
        }
    }
    Requirement::EdgeSequence(body)
}

fn vertices_of(g: &Graph, start: VertexId, edges: &[EdgeId]) -> Vec<VertexId> {
    let mut out = vec![start];
    out.extend(edges.iter().map(|e| g.edge(*e).target));
    out
}

/// Whether the walk `start, edges` contains `req`, checked directly.
pub fn walk_covers(g: &Graph, start: VertexId, edges: &[EdgeId], req: &Requirement) -> bool {
    match req {
        Requirement::VertexVisit(v) => vertices_of(g, start, edges).contains(v),
        Requirement::EdgeSequence(body) => edges.windows(body.len()).any(|w| w == body.as_slice()),
    }
}

/// Every walk from a test start with 1..=max edges, depth first.
pub fn all_walks(g: &Graph, max: usize, mut visit: impl FnMut(VertexId, &[EdgeId])) {
    fn go(g: &Graph, v: VertexId, max: usize, start: VertexId, stack: &mut Vec<EdgeId>, visit: &mut dyn FnMut(VertexId, &[EdgeId])) {
        if !stack.is_empty() {
            visit(start, stack);
        }
        if stack.len() == max {
            return;
        }
        for (i, e) in g.edges.iter().enumerate() {
            if e.source == v {
                stack.push(EdgeId(i));
                go(g, e.target, max, start, stack, visit);
                stack.pop();
            }
        }
    }
    let starts: BTreeSet<VertexId> = g.test_starts.iter().copied().chain([g.start]).collect();
    for s in starts {
        go(g, s, max, s, &mut Vec::new(), &mut visit);
    }
}

pub fn is_end(g: &Graph, v: VertexId) -> bool {
    g.test_ends.contains(&v) || g.end_vertices.contains(&v)
}

/// Length of the shortest valid test path of length `min..=max` that
/// contains `req`, by exhaustive enumeration.
pub fn brute_min_length(g: &Graph, req: &Requirement, min: usize, max: usize) -> Option<usize> {
    let mut best: Option<usize> = None;
    all_walks(g, max, |s, edges| {
        let end = g.edge(*edges.last().unwrap()).target;
        if edges.len() >= min.max(1) && is_end(g, end) && walk_covers(g, s, edges, req) {
            best = Some(best.map_or(edges.len(), |b| b.min(edges.len())));
        }
    });
    best
}

/// Checks a path returned by the search against the test-path rules.
pub fn valid_test_path(g: &Graph, p: &TestPath, req: &Requirement, min: usize, max: usize) -> bool {
    let e = p.edges();
    let connected = e.windows(2).all(|w| g.edge(w[0]).target == g.edge(w[1]).source)
        && e.first().is_some_and(|f| g.edge(*f).source == p.first_vertex());
    connected
        && (g.test_starts.contains(&p.first_vertex()) || p.first_vertex() == g.start)
        && is_end(g, p.last_vertex(g))
        && (min.max(1)..=max).contains(&e.len())
        && walk_covers(g, p.first_vertex(), e, req)
}

/// Random matrix; some requirements may be uncoverable.
pub fn random_matrix(rng: &mut ChaCha8Rng, max_paths: usize, max_reqs: usize) -> CoverageMatrix {
    let p = rng.gen_range(1..=max_paths);
    let r = rng.gen_range(1..=max_reqs);
    let density = rng.gen_range(0.1..0.5);
    let subsets = (0..p)
        .map(|_| (0..r).filter(|_| rng.gen_bool(density)).collect())
        .collect();
    CoverageMatrix::from_subsets(subsets, r)
}

/// Size of a minimum cover of the coverable requirements, by trying every
/// subset of paths in order of size.
pub fn exhaustive_min_cover(m: &CoverageMatrix) -> usize {
    let p = m.path_count();
    let masks: Vec<u32> = (0..p)
        .map(|i| m.covers(i).iter().fold(0u32, |acc, r| acc | 1 << r))
        .collect();
    let target = masks.iter().fold(0u32, |a, b| a | b);
    (0u32..1 << p)
        .filter(|s| {
            let hit = (0..p).filter(|i| s >> i & 1 == 1).fold(0u32, |a, i| a | masks[i]);
            hit == target
        })
        .map(|s| s.count_ones() as usize)
        .min()
        .unwrap()
}

pub fn harmonic(d: usize) -> f64 {
    (1..=d).map(|k| 1.0 / k as f64).sum()
}

/// The seeded evaluation corpus: |V| in 10..=30, |E| in 19..=60.
pub fn corpus(n: u64) -> Vec<Instance> {
    (0..n)
        .map(|seed| {
            let spec = InstanceSpec::sample(seed, 10..=30, 19..=60);
            let graph = generate(&spec).expect("sampled specs are satisfiable").graph;
            let mut model = Model {
                graph,
                defects: DefectSet::default(),
            };
            let name = format!("corpus_{seed:02}");
            ensure_defects(&mut model, &name, &BatchOptions::default());
            Instance::new(name, model)
        })
        .collect()
}
