//! JSON model and path files, CSV results.
//!
//! Model file layout:
//!
//! ```json
//! {
//!   "name": "G3",
//!   "priority_scale": {"min": 0, "max": 3},
//!   "vertices": [{"id": "A", "priority": 0}, ...],
//!   "edges": [{"id": "a", "source": "A", "target": "B", "label": "a", "priority": 3}, ...],
//!   "start": "A",
//!   "end_vertices": ["C"],
//!   "test_starts": ["A"],
//!   "test_ends": ["C"],
//!   "defects": {"type1": ["a"], "type2": [["a", "b"]]}
//! }
//! ```
//!
//! `priority_scale`, `label` and `defects` are optional.

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::defects::DefectSet;
use crate::model::{Edge, EdgeId, Graph, PriorityScale, TestPath, Vertex, VertexId};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: field `{field}` refers to unknown {kind} '{name}'")]
    UnknownReference {
        path: PathBuf,
        field: String,
        kind: &'static str,
        name: String,
    },
    #[error("{path}: {message}")]
    Invalid { path: PathBuf, message: String },
    #[error("{0}")]
    Csv(#[from] csv::Error),
}

/// A model together with its planted defects.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub graph: Graph,
    pub defects: DefectSet,
}

#[derive(Debug, Serialize, Deserialize)]
struct ScaleFile {
    min: f64,
    max: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct VertexFile {
    id: String,
    priority: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeFile {
    id: String,
    source: String,
    target: String,
    #[serde(default)]
    label: Option<String>,
    priority: f64,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct DefectsFile {
    #[serde(default)]
    type1: Vec<String>,
    #[serde(default)]
    type2: Vec<[String; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ModelFile {
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    priority_scale: Option<ScaleFile>,
    vertices: Vec<VertexFile>,
    edges: Vec<EdgeFile>,
    start: String,
    end_vertices: Vec<String>,
    test_starts: Vec<String>,
    test_ends: Vec<String>,
    #[serde(default)]
    defects: DefectsFile,
}

#[derive(Debug, Serialize, Deserialize)]
struct PathFile {
    start: String,
    edges: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct PathsFile {
    model: String,
    paths: Vec<PathFile>,
}

fn parse_error(path: &Path, e: serde_json::Error) -> FormatError {
    FormatError::Parse {
        path: path.to_owned(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

fn read(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), FormatError> {
    fs::write(path, text).map_err(|source| FormatError::Io {
        path: path.to_owned(),
        source,
    })
}

struct Names<'a> {
    origin: &'a Path,
    vertices: HashMap<&'a str, VertexId>,
    edges: HashMap<&'a str, EdgeId>,
}

impl Names<'_> {
    fn vertex(&self, field: impl Into<String>, name: &str) -> Result<VertexId, FormatError> {
        self.vertices
            .get(name)
            .copied()
            .ok_or_else(|| FormatError::UnknownReference {
                path: self.origin.to_owned(),
                field: field.into(),
                kind: "vertex",
                name: name.to_owned(),
            })
    }

    fn edge(&self, field: impl Into<String>, name: &str) -> Result<EdgeId, FormatError> {
        self.edges
            .get(name)
            .copied()
            .ok_or_else(|| FormatError::UnknownReference {
                path: self.origin.to_owned(),
                field: field.into(),
                kind: "edge",
                name: name.to_owned(),
            })
    }

    fn vertex_set(&self, field: &str, names: &[String]) -> Result<BTreeSet<VertexId>, FormatError> {
        names
            .iter()
            .enumerate()
            .map(|(i, n)| self.vertex(format!("{field}[{i}]"), n))
            .collect()
    }
}

/// Parses model JSON; `origin` only labels error messages.
pub fn parse_model(text: &str, origin: &Path) -> Result<Model, FormatError> {
    let file: ModelFile = serde_json::from_str(text).map_err(|e| parse_error(origin, e))?;
    let names = Names {
        origin,
        vertices: file
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id.as_str(), VertexId(i)))
            .collect(),
        edges: file
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| (e.id.as_str(), EdgeId(i)))
            .collect(),
    };

    let mut edges = Vec::with_capacity(file.edges.len());
    for (i, e) in file.edges.iter().enumerate() {
        edges.push(Edge {
            name: e.id.clone(),
            source: names.vertex(format!("edges[{i}].source"), &e.source)?,
            target: names.vertex(format!("edges[{i}].target"), &e.target)?,
            label: e.label.clone().unwrap_or_else(|| e.id.clone()),
            priority: e.priority,
        });
    }
    let priority_scale = match &file.priority_scale {
        Some(s) => PriorityScale::new(s.min, s.max).ok_or_else(|| FormatError::Invalid {
            path: origin.to_owned(),
            message: "priority_scale.min must be below priority_scale.max".into(),
        })?,
        None => PriorityScale::default(),
    };
    let graph = Graph {
        name: file.name.clone(),
        vertices: file
            .vertices
            .iter()
            .map(|v| Vertex {
                name: v.id.clone(),
                priority: v.priority,
            })
            .collect(),
        edges,
        start: names.vertex("start", &file.start)?,
        end_vertices: names.vertex_set("end_vertices", &file.end_vertices)?,
        test_starts: names.vertex_set("test_starts", &file.test_starts)?,
        test_ends: names.vertex_set("test_ends", &file.test_ends)?,
        priority_scale,
    };

    let type1 = file
        .defects
        .type1
        .iter()
        .enumerate()
        .map(|(i, n)| names.edge(format!("defects.type1[{i}]"), n))
        .collect::<Result<_, _>>()?;
    let type2 = file
        .defects
        .type2
        .iter()
        .enumerate()
        .map(|(i, [a, b])| {
            Ok((
                names.edge(format!("defects.type2[{i}][0]"), a)?,
                names.edge(format!("defects.type2[{i}][1]"), b)?,
            ))
        })
        .collect::<Result<_, FormatError>>()?;

    Ok(Model {
        graph,
        defects: DefectSet { type1, type2 },
    })
}

pub fn model_to_json(model: &Model) -> String {
    let g = &model.graph;
    let vname = |v: &VertexId| g.vertex(*v).name.clone();
    let ename = |e: &EdgeId| g.edge(*e).name.clone();
    let file = ModelFile {
        name: g.name.clone(),
        priority_scale: Some(ScaleFile {
            min: g.priority_scale.min,
            max: g.priority_scale.max,
        }),
        vertices: g
            .vertices
            .iter()
            .map(|v| VertexFile {
                id: v.name.clone(),
                priority: v.priority,
            })
            .collect(),
        edges: g
            .edges
            .iter()
            .map(|e| EdgeFile {
                id: e.name.clone(),
                source: vname(&e.source),
                target: vname(&e.target),
                label: Some(e.label.clone()),
                priority: e.priority,
            })
            .collect(),
        start: vname(&g.start),
        end_vertices: g.end_vertices.iter().map(vname).collect(),
        test_starts: g.test_starts.iter().map(vname).collect(),
        test_ends: g.test_ends.iter().map(vname).collect(),
        defects: DefectsFile {
            type1: model.defects.type1.iter().map(ename).collect(),
            type2: model
                .defects
                .type2
                .iter()
                .map(|(a, b)| [ename(a), ename(b)])
                .collect(),
        },
    };
    serde_json::to_string_pretty(&file).expect("model serializes")
}

pub fn read_model(path: impl AsRef<Path>) -> Result<Model, FormatError> {
    let path = path.as_ref();
    parse_model(&read(path)?, path)
}

pub fn write_model(model: &Model, path: impl AsRef<Path>) -> Result<(), FormatError> {
    write(path.as_ref(), &model_to_json(model))
}

pub fn paths_to_json(paths: &[TestPath], graph: &Graph) -> String {
    let file = PathsFile {
        model: graph.name.clone(),
        paths: paths
            .iter()
            .map(|p| PathFile {
                start: graph.vertex(p.first_vertex()).name.clone(),
                edges: p.edges().iter().map(|e| graph.edge(*e).name.clone()).collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("paths serialize")
}

pub fn parse_paths(text: &str, graph: &Graph, origin: &Path) -> Result<Vec<TestPath>, FormatError> {
    let file: PathsFile = serde_json::from_str(text).map_err(|e| parse_error(origin, e))?;
    let names = Names {
        origin,
        vertices: graph
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.name.as_str(), VertexId(i)))
            .collect(),
        edges: graph
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| (e.name.as_str(), EdgeId(i)))
            .collect(),
    };
    file.paths
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let start = names.vertex(format!("paths[{i}].start"), &p.start)?;
            let edges = p
                .edges
                .iter()
                .enumerate()
                .map(|(j, e)| names.edge(format!("paths[{i}].edges[{j}]"), e))
                .collect::<Result<Vec<_>, _>>()?;
            if edges.is_empty() {
                return Ok(TestPath::at_vertex(start));
            }
            TestPath::from_edges(graph, edges)
                .filter(|tp| tp.first_vertex() == start)
                .ok_or_else(|| FormatError::Invalid {
                    path: origin.to_owned(),
                    message: format!("paths[{i}] is not a walk starting at '{}'", p.start),
                })
        })
        .collect()
}

pub fn write_paths(paths: &[TestPath], graph: &Graph, path: impl AsRef<Path>) -> Result<(), FormatError> {
    write(path.as_ref(), &paths_to_json(paths, graph))
}

pub fn read_paths(path: impl AsRef<Path>, graph: &Graph) -> Result<Vec<TestPath>, FormatError> {
    let path = path.as_ref();
    parse_paths(&read(path)?, graph, path)
}
