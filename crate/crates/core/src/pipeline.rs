//! End-to-end generation: requirements, one shortest in-range path per
//! requirement, set-cover reduction, sub-path normalization.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::model::{Graph, PrioritySelection, TestPath, ValidationReport};
use crate::nswitch::{nswitch_reduce_requirements, NSwitchError, DEFAULT_ENUM_CAP};
use crate::reduction::{enforce_no_subpath_rule, CoverageMatrix, GaConfig, Reduction, SaConfig};
use crate::requirements::{check_coverage, generate_requirements, CoverageCriterion, CoverageReport, Requirement};
use crate::search::PathSearch;

/// A generation strategy: one of the reductions, or the N-switch baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Reduce(Reduction),
    NSwitch,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::Reduce(Reduction::None),
        Algorithm::Reduce(Reduction::Random),
        Algorithm::Reduce(Reduction::Sorted),
        Algorithm::Reduce(Reduction::Chvatal),
        Algorithm::Reduce(Reduction::Genetic),
        Algorithm::Reduce(Reduction::Annealing),
        Algorithm::NSwitch,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Reduce(r) => r.as_str(),
            Algorithm::NSwitch => "nswitch",
        }
    }

    pub fn is_stochastic(self) -> bool {
        matches!(self, Algorithm::Reduce(r) if r.is_stochastic())
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("nswitch") {
            return Ok(Algorithm::NSwitch);
        }
        s.parse().map(Algorithm::Reduce)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub coverage: CoverageCriterion,
    pub min_length: usize,
    pub max_length: usize,
    pub selection: PrioritySelection,
    pub algorithm: Algorithm,
    pub seed: u64,
    /// Runs averaged per batch cell.
    pub repetitions: usize,
    pub ga: GaConfig,
    pub sa: SaConfig,
    pub enum_cap: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            coverage: CoverageCriterion::Basic,
            min_length: 2,
            max_length: 6,
            selection: PrioritySelection::default(),
            algorithm: Algorithm::Reduce(Reduction::Sorted),
            seed: 0,
            repetitions: 3,
            ga: GaConfig::default(),
            sa: SaConfig::default(),
            enum_cap: DEFAULT_ENUM_CAP,
        }
    }
}

impl RunConfig {
    pub fn check(&self) -> Result<(), String> {
        if self.min_length < 1 || self.min_length > self.max_length {
            return Err(format!(
                "length range {}..={} must satisfy 1 ≤ min ≤ max",
                self.min_length, self.max_length
            ));
        }
        if self.repetitions == 0 {
            return Err("repetitions must be at least 1".into());
        }
        if !self.ga.is_valid() {
            return Err("genetic algorithm configuration out of range".into());
        }
        if !self.sa.is_valid() {
            return Err("annealing configuration out of range".into());
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("model is not well formed: {}", render_validation(.0))]
    InvalidModel(ValidationReport),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("no test path can satisfy any of the {} requirements; widen the length range or add test starts/ends", .infeasible.len())]
    NoPathsPossible { infeasible: Vec<Requirement> },
    #[error(transparent)]
    EnumerationOverflow(#[from] NSwitchError),
}

fn render_validation(r: &ValidationReport) -> String {
    r.violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationOutcome {
    pub paths: Vec<TestPath>,
    pub report: CoverageReport,
    pub feasible: Vec<Requirement>,
    pub infeasible: Vec<Requirement>,
}

/// Generates a prioritized test path set for `graph`.
///
/// Infeasible requirements are returned alongside the paths; the coverage
/// report is computed over the feasible ones.
pub fn generate_paths(graph: &Graph, config: &RunConfig) -> Result<GenerationOutcome, PipelineError> {
    let validation = graph.validate();
    if !validation.is_valid() {
        return Err(PipelineError::InvalidModel(validation));
    }
    config.check().map_err(PipelineError::InvalidConfig)?;
    let (min, max) = (config.min_length, config.max_length);

    let requirements: Vec<Requirement> =
        generate_requirements(graph, config.coverage, &config.selection)
            .into_iter()
            .collect();

    let search = PathSearch::new(graph);
    let mut initial = Vec::new();
    let mut feasible = Vec::new();
    let mut infeasible = Vec::new();
    for r in &requirements {
        match search.find(r, min, max) {
            Some(p) => {
                initial.push(p);
                feasible.push(r.clone());
            }
            None => infeasible.push(r.clone()),
        }
    }
    if feasible.is_empty() && !infeasible.is_empty() {
        return Err(PipelineError::NoPathsPossible { infeasible });
    }

    let paths = match config.algorithm {
        Algorithm::Reduce(reduction) => {
            let matrix = CoverageMatrix::build(initial, feasible.clone(), graph);
            let chosen = reduction.apply(&matrix, config.seed, &config.ga, &config.sa);
            matrix.paths_of(&chosen)
        }
        Algorithm::NSwitch => {
            nswitch_reduce_requirements(graph, min, max, &requirements, config.enum_cap)?
        }
    };
    let paths = enforce_no_subpath_rule(paths, graph);
    let report = check_coverage(&paths, &feasible, graph, min, max);
    Ok(GenerationOutcome {
        paths,
        report,
        feasible,
        infeasible,
    })
}
