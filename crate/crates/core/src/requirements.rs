//! Coverage requirements for the Basic and Extended prioritized criteria,
//! and the checker that decides whether a path set satisfies them.

use std::collections::BTreeSet;
use std::fmt;

use crate::model::{contains_window, EdgeId, Graph, PrioritySelection, TestPath, VertexId};
use crate::search::find_path_in_range;

/// Something a test path set must contain: a vertex to visit, or a run of
/// one or two adjacent edges.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Requirement {
    VertexVisit(VertexId),
    EdgeSequence(Vec<EdgeId>),
}

impl Requirement {
    pub fn first_vertex(&self, graph: &Graph) -> VertexId {
        match self {
            Requirement::VertexVisit(v) => *v,
            Requirement::EdgeSequence(es) => graph.edge(es[0]).source,
        }
    }

    pub fn last_vertex(&self, graph: &Graph) -> VertexId {
        match self {
            Requirement::VertexVisit(v) => *v,
            Requirement::EdgeSequence(es) => graph.edge(*es.last().expect("non-empty")).target,
        }
    }

    /// Edges the requirement contributes to a path; empty for vertex visits.
    pub fn body(&self) -> &[EdgeId] {
        match self {
            Requirement::VertexVisit(_) => &[],
            Requirement::EdgeSequence(es) => es,
        }
    }

    pub fn is_covered_by(&self, path: &TestPath, graph: &Graph) -> bool {
        match self {
            Requirement::VertexVisit(v) => path.visits(graph, *v),
            Requirement::EdgeSequence(es) => contains_window(path.edges(), es),
        }
    }

    /// True iff covering `other` always covers `self`.
    pub fn is_subpath_of(&self, other: &Requirement, graph: &Graph) -> bool {
        match (self, other) {
            (Requirement::VertexVisit(v), Requirement::VertexVisit(w)) => v == w,
            (Requirement::VertexVisit(v), Requirement::EdgeSequence(es)) => {
                graph.edge(es[0]).source == *v || es.iter().any(|e| graph.edge(*e).target == *v)
            }
            (Requirement::EdgeSequence(_), Requirement::VertexVisit(_)) => false,
            (Requirement::EdgeSequence(a), Requirement::EdgeSequence(b)) => contains_window(b, a),
        }
    }

    pub fn describe(&self, graph: &Graph) -> String {
        match self {
            Requirement::VertexVisit(v) => format!("visit {}", graph.vertex(*v).name),
            Requirement::EdgeSequence(es) => {
                let names: Vec<&str> = es.iter().map(|e| graph.edge(*e).name.as_str()).collect();
                format!("[{}]", names.join(","))
            }
        }
    }
}

/// Which prioritized criterion to generate requirements for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoverageCriterion {
    Basic,
    Extended,
}

impl CoverageCriterion {
    pub fn as_str(self) -> &'static str {
        match self {
            CoverageCriterion::Basic => "basic",
            CoverageCriterion::Extended => "extended",
        }
    }
}

impl fmt::Display for CoverageCriterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for CoverageCriterion {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "basic" => Ok(CoverageCriterion::Basic),
            "extended" => Ok(CoverageCriterion::Extended),
            other => Err(format!("unknown coverage criterion '{other}'")),
        }
    }
}

/// Builds the requirement set for `criterion`.
///
/// Basic: every vertex and edge whose priority falls inside `selection`.
/// Extended adds every edge entering or leaving a selected vertex, and every
/// adjacent edge pair in which at least one edge is selected. Selection is
/// the closed band, so elements above `selection.max` are not required.
pub fn generate_requirements(
    graph: &Graph,
    criterion: CoverageCriterion,
    selection: &PrioritySelection,
) -> BTreeSet<Requirement> {
    let hot_vertex = |v: VertexId| selection.contains(graph.vertex(v).priority);
    let hot_edge = |e: EdgeId| selection.contains(graph.edge(e).priority);

    let mut out = BTreeSet::new();
    for v in graph.vertex_ids().filter(|v| hot_vertex(*v)) {
        out.insert(Requirement::VertexVisit(v));
    }
    for e in graph.edge_ids().filter(|e| hot_edge(*e)) {
        out.insert(Requirement::EdgeSequence(vec![e]));
    }
    if criterion == CoverageCriterion::Basic {
        return out;
    }

    for e in graph.edge_ids() {
        let edge = graph.edge(e);
        if hot_vertex(edge.source) || hot_vertex(edge.target) {
            out.insert(Requirement::EdgeSequence(vec![e]));
        }
    }
    let adj = graph.adjacency();
    for e1 in graph.edge_ids() {
        for &e2 in adj.outgoing(graph.edge(e1).target) {
            if hot_edge(e1) || hot_edge(e2) {
                out.insert(Requirement::EdgeSequence(vec![e1, e2]));
            }
        }
    }
    out
}

/// Splits requirements into those some in-range test path can contain and
/// those none can.
pub fn filter_feasible<'a, I>(
    requirements: I,
    graph: &Graph,
    min_length: usize,
    max_length: usize,
) -> (Vec<Requirement>, Vec<Requirement>)
where
    I: IntoIterator<Item = &'a Requirement>,
{
    requirements
        .into_iter()
        .cloned()
        .partition(|r| find_path_in_range(r, graph, min_length, max_length).is_some())
}

#[derive(Debug, Clone, PartialEq)]
pub enum CoverageViolation {
    /// Rule 1: path does not start in a test start.
    BadStart { path: usize },
    /// Rule 1: path does not end in a test end.
    BadEnd { path: usize },
    /// Rule 2: length outside `[min_length, max_length]`.
    LengthOutOfRange { path: usize, length: usize },
    /// Rule 3: no path contains the requirement.
    Uncovered { requirement: Requirement },
    /// Rule 4: `inner` is a sub-path of `outer`.
    SubPath { inner: usize, outer: usize },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CoverageReport {
    pub violations: Vec<CoverageViolation>,
}

impl CoverageReport {
    pub fn is_satisfied(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn render(&self, graph: &Graph, paths: &[TestPath]) -> String {
        let mut out = String::new();
        for v in &self.violations {
            let line = match v {
                CoverageViolation::BadStart { path } => {
                    format!("path {} does not start in a test start", paths[*path].describe(graph))
                }
                CoverageViolation::BadEnd { path } => {
                    format!("path {} does not end in a test end", paths[*path].describe(graph))
                }
                CoverageViolation::LengthOutOfRange { path, length } => format!(
                    "path {} has length {length} outside the range",
                    paths[*path].describe(graph)
                ),
                CoverageViolation::Uncovered { requirement } => {
                    format!("requirement {} is not covered", requirement.describe(graph))
                }
                CoverageViolation::SubPath { inner, outer } => format!(
                    "path {} is a sub-path of {}",
                    paths[*inner].describe(graph),
                    paths[*outer].describe(graph)
                ),
            };
            out.push_str(&line);
            out.push('\n');
        }
        out
    }
}

/// Checks the four rules of the prioritized criteria against `paths`.
/// `requirements` should already be feasibility-filtered.
pub fn check_coverage<'a, I>(
    paths: &[TestPath],
    requirements: I,
    graph: &Graph,
    min_length: usize,
    max_length: usize,
) -> CoverageReport
where
    I: IntoIterator<Item = &'a Requirement>,
{
    let mut violations = Vec::new();
    for (i, p) in paths.iter().enumerate() {
        if !graph.is_path_start(p.first_vertex()) {
            violations.push(CoverageViolation::BadStart { path: i });
        }
        if !graph.is_path_end(p.last_vertex(graph)) {
            violations.push(CoverageViolation::BadEnd { path: i });
        }
        if p.len() < min_length || p.len() > max_length {
            violations.push(CoverageViolation::LengthOutOfRange {
                path: i,
                length: p.len(),
            });
        }
    }
    for r in requirements {
        if !paths.iter().any(|p| r.is_covered_by(p, graph)) {
            violations.push(CoverageViolation::Uncovered {
                requirement: r.clone(),
            });
        }
    }
    for (i, p) in paths.iter().enumerate() {
        // Equal paths contain each other; report the later copy only.
        if let Some(j) = paths
            .iter()
            .enumerate()
            .find(|(j, q)| *j != i && p.is_subpath_of(q, graph) && (p != *q || *j < i))
            .map(|(j, _)| j)
        {
            violations.push(CoverageViolation::SubPath { inner: i, outer: j });
        }
    }
    CoverageReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::{path, triangle, triangle_with};

    fn edge_req(g: &Graph, names: &[&str]) -> Requirement {
        Requirement::EdgeSequence(names.iter().map(|n| g.edge_by_name(n).unwrap()).collect())
    }

    #[test]
    fn basic_priority_edge_only() {
        let g = triangle_with(&[], &["b"]);
        let r = generate_requirements(&g, CoverageCriterion::Basic, &PrioritySelection::default());
        assert_eq!(r, [edge_req(&g, &["b"])].into());
    }

    #[test]
    fn extended_priority_vertex() {
        // Pairs are generated from edge priorities only, so the pair (a, b)
        // through B is not a requirement here.
        let g = triangle_with(&["B"], &[]);
        let r = generate_requirements(&g, CoverageCriterion::Extended, &PrioritySelection::default());
        let expected: BTreeSet<_> = [
            Requirement::VertexVisit(g.vertex_by_name("B").unwrap()),
            edge_req(&g, &["a"]),
            edge_req(&g, &["b"]),
        ]
        .into();
        assert_eq!(r, expected);
    }

    #[test]
    fn extended_priority_edge_pairs() {
        let g = triangle_with(&[], &["b"]);
        let r = generate_requirements(&g, CoverageCriterion::Extended, &PrioritySelection::default());
        let expected: BTreeSet<_> = [
            edge_req(&g, &["b"]),
            edge_req(&g, &["a", "b"]),
            edge_req(&g, &["b", "c"]),
        ]
        .into();
        assert_eq!(r, expected);
    }

    #[test]
    fn empty_band() {
        let g = triangle_with(&["A", "B"], &["a", "b", "c"]);
        let sel = PrioritySelection::new(4.0, 4.0).unwrap();
        for c in [CoverageCriterion::Basic, CoverageCriterion::Extended] {
            assert!(generate_requirements(&g, c, &sel).is_empty());
        }
    }

    #[test]
    fn extended_contains_basic() {
        let g = triangle_with(&["A"], &["c"]);
        let sel = PrioritySelection::default();
        let basic = generate_requirements(&g, CoverageCriterion::Basic, &sel);
        let ext = generate_requirements(&g, CoverageCriterion::Extended, &sel);
        assert!(basic.is_subset(&ext));
    }

    #[test]
    fn feasibility_split() {
        let g = triangle();
        let c = edge_req(&g, &["c"]);
        let (ok, bad) = filter_feasible([&c], &g, 1, 3);
        assert!(ok.is_empty());
        assert_eq!(bad, vec![c]);

        let b = edge_req(&g, &["b"]);
        let (ok, bad) = filter_feasible([&b], &g, 2, 3);
        assert_eq!(ok, vec![b]);
        assert!(bad.is_empty());

        let (ok, bad) = filter_feasible(std::iter::empty(), &g, 1, 3);
        assert!(ok.is_empty() && bad.is_empty());
    }

    #[test]
    fn coverage_satisfied() {
        let g = triangle();
        let reqs = [edge_req(&g, &["b"])];
        let report = check_coverage(&[path(&g, &["a", "b"])], &reqs, &g, 2, 6);
        assert!(report.is_satisfied(), "{report:?}");
    }

    #[test]
    fn coverage_subpath_and_length() {
        let g = triangle();
        let reqs = [edge_req(&g, &["b"])];
        let paths = [path(&g, &["a", "b"]), path(&g, &["b"])];
        let report = check_coverage(&paths, &reqs, &g, 2, 6);
        assert!(report
            .violations
            .contains(&CoverageViolation::SubPath { inner: 1, outer: 0 }));
        assert!(report
            .violations
            .contains(&CoverageViolation::LengthOutOfRange { path: 1, length: 1 }));
        assert!(report.violations.contains(&CoverageViolation::BadStart { path: 1 }));
    }

    #[test]
    fn coverage_empty_paths() {
        let g = triangle_with(&["B"], &[]);
        let reqs: Vec<_> =
            generate_requirements(&g, CoverageCriterion::Extended, &PrioritySelection::default())
                .into_iter()
                .collect();
        let report = check_coverage(&[], &reqs, &g, 1, 6);
        assert_eq!(report.violations.len(), reqs.len());
        assert!(report
            .violations
            .iter()
            .all(|v| matches!(v, CoverageViolation::Uncovered { .. })));
    }

    #[test]
    fn duplicate_paths_flagged_once() {
        let g = triangle();
        let p = path(&g, &["a", "b"]);
        let report = check_coverage(&[p.clone(), p], &[], &g, 1, 6);
        assert_eq!(report.violations, vec![CoverageViolation::SubPath { inner: 1, outer: 0 }]);
    }

    #[test]
    fn requirement_subsumption() {
        let g = triangle();
        let a = edge_req(&g, &["a"]);
        let ab = edge_req(&g, &["a", "b"]);
        let vb = Requirement::VertexVisit(g.vertex_by_name("B").unwrap());
        let va = Requirement::VertexVisit(g.vertex_by_name("A").unwrap());
        assert!(a.is_subpath_of(&ab, &g));
        assert!(!ab.is_subpath_of(&a, &g));
        assert!(vb.is_subpath_of(&a, &g));
        assert!(va.is_subpath_of(&ab, &g));
        assert!(!ab.is_subpath_of(&vb, &g));
    }
}
