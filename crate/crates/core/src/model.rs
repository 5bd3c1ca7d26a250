//! The system-under-test model: a prioritized directed multigraph with
//! designated start, end, test-start and test-end vertices, plus the test
//! paths walked over it.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

/// Index of a vertex in [`Graph::vertices`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

/// Index of an edge in [`Graph::edges`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// Closed range of legal priority values for a model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriorityScale {
    pub min: f64,
    pub max: f64,
}

impl PriorityScale {
    pub fn new(min: f64, max: f64) -> Option<Self> {
        (min < max).then_some(Self { min, max })
    }

    pub fn contains(&self, priority: f64) -> bool {
        self.min <= priority && priority <= self.max
    }
}

impl Default for PriorityScale {
    fn default() -> Self {
        Self { min: 0.0, max: 3.0 }
    }
}

/// Closed priority band deciding which vertices and edges generate
/// requirements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrioritySelection {
    pub min: f64,
    pub max: f64,
}

impl PrioritySelection {
    pub fn new(min: f64, max: f64) -> Option<Self> {
        (min <= max).then_some(Self { min, max })
    }

    pub fn contains(&self, priority: f64) -> bool {
        self.min <= priority && priority <= self.max
    }

    /// True when the band lies inside `scale`.
    pub fn fits(&self, scale: &PriorityScale) -> bool {
        scale.min <= self.min && self.max <= scale.max
    }
}

impl Default for PrioritySelection {
    fn default() -> Self {
        Self { min: 2.0, max: 3.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub name: String,
    pub priority: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub name: String,
    pub source: VertexId,
    pub target: VertexId,
    pub label: String,
    pub priority: f64,
}

/// Directed multigraph model of the system under test.
///
/// Fields are public so that models can be assembled freely; call
/// [`Graph::validate`] before handing a hand-built graph to the algorithms.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    pub name: String,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub start: VertexId,
    pub end_vertices: BTreeSet<VertexId>,
    pub test_starts: BTreeSet<VertexId>,
    pub test_ends: BTreeSet<VertexId>,
    pub priority_scale: PriorityScale,
}

/// A single broken structural constraint reported by [`Graph::validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    DanglingEdgeEndpoint { edge: String },
    UnknownVertex { role: &'static str, vertex: VertexId },
    StartNotTestStart,
    EndVerticesNotTestEnds,
    DuplicateVertexName(String),
    DuplicateEdgeName(String),
    VertexPriorityOutOfScale { vertex: String, priority: f64 },
    EdgePriorityOutOfScale { edge: String, priority: f64 },
    InvalidScale,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DanglingEdgeEndpoint { edge } => {
                write!(f, "dangling edge endpoint on edge '{edge}'")
            }
            Violation::UnknownVertex { role, vertex } => {
                write!(f, "{role} refers to unknown vertex {vertex}")
            }
            Violation::StartNotTestStart => write!(f, "start vertex not in test_starts"),
            Violation::EndVerticesNotTestEnds => write!(f, "end_vertices ⊄ test_ends"),
            Violation::DuplicateVertexName(n) => write!(f, "duplicate vertex id '{n}'"),
            Violation::DuplicateEdgeName(n) => write!(f, "duplicate edge id '{n}'"),
            Violation::VertexPriorityOutOfScale { vertex, priority } => {
                write!(f, "vertex '{vertex}' priority {priority} outside scale")
            }
            Violation::EdgePriorityOutOfScale { edge, priority } => {
                write!(f, "edge '{edge}' priority {priority} outside scale")
            }
            Violation::InvalidScale => write!(f, "priority scale min must be below max"),
        }
    }
}

/// Every structural violation found in a graph; empty means well formed.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Outgoing and incoming edge lists, each in edge declaration order.
#[derive(Debug, Clone)]
pub struct Adjacency {
    outgoing: Vec<Vec<EdgeId>>,
    incoming: Vec<Vec<EdgeId>>,
}

impl Adjacency {
    pub fn outgoing(&self, v: VertexId) -> &[EdgeId] {
        &self.outgoing[v.0]
    }

    pub fn incoming(&self, v: VertexId) -> &[EdgeId] {
        &self.incoming[v.0]
    }
}

impl Graph {
    pub fn vertex(&self, id: VertexId) -> &Vertex {
        &self.vertices[id.0]
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id.0]
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v.name == name).map(VertexId)
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edges.iter().position(|e| e.name == name).map(EdgeId)
    }

    pub fn labels(&self) -> BTreeSet<&str> {
        self.edges.iter().map(|e| e.label.as_str()).collect()
    }

    /// `{v_s} ∪ V_ts`: where a test path may begin.
    pub fn is_path_start(&self, v: VertexId) -> bool {
        v == self.start || self.test_starts.contains(&v)
    }

    /// `V_e ∪ V_te`: where a test path may finish.
    pub fn is_path_end(&self, v: VertexId) -> bool {
        self.end_vertices.contains(&v) || self.test_ends.contains(&v)
    }

    /// Builds adjacency lists. Panics if an edge endpoint is out of range;
    /// validate first.
    pub fn adjacency(&self) -> Adjacency {
        let n = self.vertices.len();
        let mut outgoing = vec![Vec::new(); n];
        let mut incoming = vec![Vec::new(); n];
        for (i, e) in self.edges.iter().enumerate() {
            outgoing[e.source.0].push(EdgeId(i));
            incoming[e.target.0].push(EdgeId(i));
        }
        Adjacency { outgoing, incoming }
    }

    pub fn validate(&self) -> ValidationReport {
        let n = self.vertices.len();
        let mut violations = Vec::new();
        let in_range = |v: &VertexId| v.0 < n;

        // Written negated so that NaN bounds are rejected too.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(self.priority_scale.min < self.priority_scale.max) {
            violations.push(Violation::InvalidScale);
        }

        let mut seen = HashSet::new();
        for v in &self.vertices {
            if !seen.insert(v.name.as_str()) {
                violations.push(Violation::DuplicateVertexName(v.name.clone()));
            }
            if !self.priority_scale.contains(v.priority) {
                violations.push(Violation::VertexPriorityOutOfScale {
                    vertex: v.name.clone(),
                    priority: v.priority,
                });
            }
        }

        let mut seen = HashSet::new();
        for e in &self.edges {
            if !seen.insert(e.name.as_str()) {
                violations.push(Violation::DuplicateEdgeName(e.name.clone()));
            }
            if !in_range(&e.source) || !in_range(&e.target) {
                violations.push(Violation::DanglingEdgeEndpoint {
                    edge: e.name.clone(),
                });
            }
            if !self.priority_scale.contains(e.priority) {
                violations.push(Violation::EdgePriorityOutOfScale {
                    edge: e.name.clone(),
                    priority: e.priority,
                });
            }
        }

        if !in_range(&self.start) {
            violations.push(Violation::UnknownVertex {
                role: "start",
                vertex: self.start,
            });
        }
        for (role, set) in [
            ("end_vertices", &self.end_vertices),
            ("test_starts", &self.test_starts),
            ("test_ends", &self.test_ends),
        ] {
            for v in set.iter().filter(|v| !in_range(v)) {
                violations.push(Violation::UnknownVertex { role, vertex: *v });
            }
        }

        if !self.test_starts.contains(&self.start) {
            violations.push(Violation::StartNotTestStart);
        }
        if !self.end_vertices.is_subset(&self.test_ends) {
            violations.push(Violation::EndVerticesNotTestEnds);
        }

        ValidationReport { violations }
    }
}

/// A walk through the graph: a start vertex followed by adjacent edges.
///
/// With no edges the path is the zero-length path sitting on `start`; this
/// form is used for vertex requirements, while test paths always have at
/// least one edge.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TestPath {
    start: VertexId,
    edges: Vec<EdgeId>,
}

impl TestPath {
    /// Path over `edges`, or `None` if the list is empty or not adjacent.
    pub fn from_edges(graph: &Graph, edges: Vec<EdgeId>) -> Option<Self> {
        let first = *edges.first()?;
        let adjacent = edges
            .windows(2)
            .all(|w| graph.edge(w[0]).target == graph.edge(w[1]).source);
        adjacent.then(|| Self {
            start: graph.edge(first).source,
            edges,
        })
    }

    pub fn at_vertex(v: VertexId) -> Self {
        Self {
            start: v,
            edges: Vec::new(),
        }
    }

    /// Construct without checking adjacency. The caller guarantees that
    /// `edges` are adjacent and begin at `start`.
    pub(crate) fn from_parts_unchecked(start: VertexId, edges: Vec<EdgeId>) -> Self {
        Self { start, edges }
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn first_vertex(&self) -> VertexId {
        self.start
    }

    pub fn last_vertex(&self, graph: &Graph) -> VertexId {
        self.edges
            .last()
            .map_or(self.start, |e| graph.edge(*e).target)
    }

    /// Vertices in visiting order: `len() + 1` entries.
    pub fn vertices(&self, graph: &Graph) -> Vec<VertexId> {
        std::iter::once(self.start)
            .chain(self.edges.iter().map(|e| graph.edge(*e).target))
            .collect()
    }

    pub fn visits(&self, graph: &Graph, v: VertexId) -> bool {
        self.start == v || self.edges.iter().any(|e| graph.edge(*e).target == v)
    }

    /// True iff `self` occurs inside `container`: a contiguous edge window
    /// for paths with edges, a visit for zero-length paths.
    pub fn is_subpath_of(&self, container: &TestPath, graph: &Graph) -> bool {
        if self.edges.is_empty() {
            return container.visits(graph, self.start);
        }
        contains_window(&container.edges, &self.edges)
    }

    /// Edge names joined by `,`, for messages.
    pub fn describe(&self, graph: &Graph) -> String {
        if self.edges.is_empty() {
            return format!("<{}>", graph.vertex(self.start).name);
        }
        let names: Vec<&str> = self.edges.iter().map(|e| graph.edge(*e).name.as_str()).collect();
        format!("[{}]", names.join(","))
    }
}

pub(crate) fn contains_window(haystack: &[EdgeId], needle: &[EdgeId]) -> bool {
    if needle.is_empty() {
        return true;
    }
    needle.len() <= haystack.len() && haystack.windows(needle.len()).any(|w| w == needle)
}

/// Free-function form of [`TestPath::is_subpath_of`].
pub fn is_subpath(candidate: &TestPath, container: &TestPath, graph: &Graph) -> bool {
    candidate.is_subpath_of(container, graph)
}

/// Free-function form of [`TestPath::vertices`].
pub fn path_vertices(path: &TestPath, graph: &Graph) -> Vec<VertexId> {
    path.vertices(graph)
}

/// Small builder that resolves vertex and edge names, used by tests, the
/// book and the instance generator.
#[derive(Debug, Clone)]
pub struct GraphBuilder {
    graph: Graph,
}

impl GraphBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            graph: Graph {
                name: name.into(),
                vertices: Vec::new(),
                edges: Vec::new(),
                start: VertexId(0),
                end_vertices: BTreeSet::new(),
                test_starts: BTreeSet::new(),
                test_ends: BTreeSet::new(),
                priority_scale: PriorityScale::default(),
            },
        }
    }

    pub fn scale(mut self, scale: PriorityScale) -> Self {
        self.graph.priority_scale = scale;
        self
    }

    pub fn vertex(mut self, name: &str, priority: f64) -> Self {
        self.graph.vertices.push(Vertex {
            name: name.to_owned(),
            priority,
        });
        self
    }

    /// Adds an edge labelled with its own name. Panics on unknown vertices.
    pub fn edge(self, name: &str, source: &str, target: &str, priority: f64) -> Self {
        self.labelled_edge(name, source, target, name, priority)
    }

    pub fn labelled_edge(
        mut self,
        name: &str,
        source: &str,
        target: &str,
        label: &str,
        priority: f64,
    ) -> Self {
        let source = self.id(source);
        let target = self.id(target);
        self.graph.edges.push(Edge {
            name: name.to_owned(),
            source,
            target,
            label: label.to_owned(),
            priority,
        });
        self
    }

    pub fn start(mut self, name: &str) -> Self {
        self.graph.start = self.id(name);
        self
    }

    pub fn test_starts(mut self, names: &[&str]) -> Self {
        self.graph.test_starts = names.iter().map(|n| self.id(n)).collect();
        self
    }

    pub fn test_ends(mut self, names: &[&str]) -> Self {
        self.graph.test_ends = names.iter().map(|n| self.id(n)).collect();
        self
    }

    pub fn end_vertices(mut self, names: &[&str]) -> Self {
        self.graph.end_vertices = names.iter().map(|n| self.id(n)).collect();
        self
    }

    pub fn build(self) -> Graph {
        self.graph
    }

    fn id(&self, name: &str) -> VertexId {
        self.graph
            .vertex_by_name(name)
            .unwrap_or_else(|| panic!("unknown vertex '{name}'"))
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn triangle_is_valid() {
        assert!(triangle().validate().is_valid());
    }

    #[test]
    fn end_vertices_outside_test_ends() {
        let mut g = triangle();
        g.end_vertices = [g.vertex_by_name("B").unwrap()].into();
        let report = g.validate();
        assert_eq!(report.violations, vec![Violation::EndVerticesNotTestEnds]);
        assert_eq!(report.violations[0].to_string(), "end_vertices ⊄ test_ends");
    }

    #[test]
    fn dangling_endpoint() {
        let mut g = triangle();
        g.edges.push(Edge {
            name: "d".into(),
            source: VertexId(0),
            target: VertexId(7),
            label: "d".into(),
            priority: 0.0,
        });
        let report = g.validate();
        assert_eq!(
            report.violations,
            vec![Violation::DanglingEdgeEndpoint { edge: "d".into() }]
        );
    }

    #[test]
    fn start_must_be_test_start() {
        let mut g = triangle();
        g.test_starts.clear();
        assert!(g.validate().violations.contains(&Violation::StartNotTestStart));
    }

    #[test]
    fn duplicate_names_and_priorities() {
        let g = GraphBuilder::new("dup")
            .vertex("A", 0.0)
            .vertex("A", 5.0)
            .edge("x", "A", "A", 0.0)
            .edge("x", "A", "A", -1.0)
            .start("A")
            .test_starts(&["A"])
            .build();
        let v = g.validate().violations;
        assert!(v.contains(&Violation::DuplicateVertexName("A".into())));
        assert!(v.contains(&Violation::DuplicateEdgeName("x".into())));
        assert!(v.iter().any(|x| matches!(x, Violation::VertexPriorityOutOfScale { .. })));
        assert!(v.iter().any(|x| matches!(x, Violation::EdgePriorityOutOfScale { .. })));
    }

    #[test]
    fn subpath_examples() {
        let g = triangle();
        let abc = path(&g, &["a", "b", "c"]);
        assert!(path(&g, &["b"]).is_subpath_of(&abc, &g));
        // [a,c] is not even a path; compare raw windows instead.
        let a = g.edge_by_name("a").unwrap();
        let c = g.edge_by_name("c").unwrap();
        assert!(!contains_window(abc.edges(), &[a, c]));
        let b_vertex = TestPath::at_vertex(g.vertex_by_name("B").unwrap());
        assert!(b_vertex.is_subpath_of(&path(&g, &["a", "b"]), &g));
        let c_vertex = TestPath::at_vertex(g.vertex_by_name("C").unwrap());
        assert!(!c_vertex.is_subpath_of(&path(&g, &["a"]), &g));
    }

    #[test]
    fn vertices_of_paths() {
        let g = triangle();
        let [a, b, c] = ["A", "B", "C"].map(|n| g.vertex_by_name(n).unwrap());
        assert_eq!(path_vertices(&path(&g, &["a", "b"]), &g), vec![a, b, c]);
        assert_eq!(path_vertices(&TestPath::at_vertex(a), &g), vec![a]);
        assert_eq!(path_vertices(&path(&g, &["a", "b", "c"]), &g), vec![a, b, c, a]);
    }

    #[test]
    fn non_adjacent_edges_rejected() {
        let g = triangle();
        let a = g.edge_by_name("a").unwrap();
        let c = g.edge_by_name("c").unwrap();
        assert!(TestPath::from_edges(&g, vec![a, c]).is_none());
        assert!(TestPath::from_edges(&g, vec![]).is_none());
    }

    fn walk(g: &Graph, start: usize, choices: &[usize]) -> TestPath {
        // Walk the triangle: every vertex has exactly one outgoing edge.
        let adj = g.adjacency();
        let mut v = VertexId(start % 3);
        let mut edges = Vec::new();
        for _ in choices {
            let e = adj.outgoing(v)[0];
            edges.push(e);
            v = g.edge(e).target;
        }
        TestPath::from_parts_unchecked(VertexId(start % 3), edges)
    }

    proptest! {
        #[test]
        fn subpath_antisymmetric(s1 in 0usize..3, l1 in proptest::collection::vec(0usize..1, 1..7),
                                 s2 in 0usize..3, l2 in proptest::collection::vec(0usize..1, 1..7)) {
            let g = triangle();
            let p = walk(&g, s1, &l1);
            let q = walk(&g, s2, &l2);
            if p.is_subpath_of(&q, &g) && q.is_subpath_of(&p, &g) {
                prop_assert_eq!(&p, &q);
            }
            prop_assert_eq!(p.vertices(&g).len(), p.len() + 1);
        }
    }
}
