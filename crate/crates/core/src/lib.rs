//! Prioritized test path generation for models of systems under test.
//!
//! A model is a directed multigraph with prioritized vertices and edges.
//! [`generate_paths`] turns the high-priority parts of a model into test
//! requirements, finds a shortest in-range path for each one, and shrinks
//! the result with a set-cover reduction.
//!
//! ```
//! use psmt::{generate_paths, GraphBuilder, RunConfig};
//!
//! let g = GraphBuilder::new("door")
//!     .vertex("closed", 0.0)
//!     .vertex("open", 3.0)
//!     .edge("open_it", "closed", "open", 0.0)
//!     .edge("close_it", "open", "closed", 0.0)
//!     .start("closed")
//!     .test_starts(&["closed"])
//!     .test_ends(&["closed"])
//!     .build();
//! let out = generate_paths(&g, &RunConfig::default()).unwrap();
//! assert_eq!(out.paths.len(), 1);
//! assert_eq!(out.paths[0].describe(&g), "[open_it,close_it]");
//! ```

pub mod batch;
pub mod defects;
pub mod dot;
pub mod instance;
pub mod io;
pub mod model;
pub mod nswitch;
pub mod pipeline;
pub mod reduction;
pub mod requirements;
pub mod search;

pub use defects::{activate_defects, compute_metrics, DefectSet, MetricsReport};
pub use dot::export_dot;
pub use io::{read_model, read_paths, write_model, write_paths, FormatError, Model};
pub use model::{EdgeId, Graph, GraphBuilder, PriorityScale, PrioritySelection, TestPath, VertexId};
pub use pipeline::{generate_paths, Algorithm, GenerationOutcome, PipelineError, RunConfig};
pub use reduction::{CoverageMatrix, Reduction};
pub use requirements::{check_coverage, generate_requirements, CoverageCriterion, Requirement};
pub use search::{find_path_in_range, PathSearch};
