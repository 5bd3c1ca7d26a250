//! Batch experiments: every configuration on every model, repeated and
//! averaged, with the cross-algorithm exclusion rule and CSV export.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use crate::defects::{compute_metrics, connected_pairs, plant_random_defects, MetricsReport};
use crate::instance::{measure_properties_with, PropertyReport};
use crate::io::{read_model, FormatError, Model};
use crate::model::TestPath;
use crate::pipeline::{generate_paths, Algorithm, PipelineError, RunConfig};
use crate::requirements::CoverageCriterion;

/// A loaded model ready for batch runs.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub model: Model,
    pub properties: PropertyReport,
    pub pair_distance: f64,
}

impl Instance {
    pub fn new(name: impl Into<String>, model: Model) -> Self {
        let properties = measure_properties_with(&model.graph, &Default::default());
        let pair_distance = model.defects.mean_pair_distance(&model.graph);
        Self {
            name: name.into(),
            model,
            properties,
            pair_distance,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchOptions {
    /// Seed for defects planted into models that carry none.
    pub defect_seed: u64,
    pub type1_defects: usize,
    pub type2_defects: usize,
}

impl Default for BatchOptions {
    fn default() -> Self {
        Self {
            defect_seed: 0,
            type1_defects: 7,
            type2_defects: 6,
        }
    }
}

fn name_hash(name: &str) -> u64 {
    // FNV-1a
    name.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

/// Plants defects into a model that has none, as many as the model can
/// host up to the requested counts.
pub fn ensure_defects(model: &mut Model, name: &str, options: &BatchOptions) {
    if !model.defects.type1.is_empty() || !model.defects.type2.is_empty() {
        return;
    }
    let g = &model.graph;
    let t1 = options.type1_defects.min(g.edges.len());
    let t2 = options.type2_defects.min(connected_pairs(g).len());
    let seed = options.defect_seed ^ name_hash(name);
    model.defects = plant_random_defects(g, t1, t2, seed).expect("counts clamped to candidates");
}

/// Files that could not be used, with the reason.
pub type LoadFailures = Vec<(PathBuf, String)>;

/// Loads every `*.json` model in `dir` (sorted by file name). Files that
/// fail to parse or validate are returned separately.
pub fn load_instances(
    dir: &Path,
    options: &BatchOptions,
) -> Result<(Vec<Instance>, LoadFailures), FormatError> {
    let entries = std::fs::read_dir(dir).map_err(|source| FormatError::Io {
        path: dir.to_owned(),
        source,
    })?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();

    let mut instances = Vec::new();
    let mut failures = Vec::new();
    for file in files {
        let name = file
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        match read_model(&file) {
            Ok(mut model) => {
                let report = model.graph.validate();
                if !report.is_valid() {
                    let msg = report.violations.iter().map(ToString::to_string).collect::<Vec<_>>();
                    failures.push((file, msg.join("; ")));
                    continue;
                }
                let problems = model.defects.check(&model.graph);
                if !problems.is_empty() {
                    failures.push((file, problems.join("; ")));
                    continue;
                }
                ensure_defects(&mut model, &name, options);
                instances.push(Instance::new(name, model));
            }
            Err(e) => failures.push((file, e.to_string())),
        }
    }
    Ok((instances, failures))
}

/// Seed for repetition `rep`; repetition 0 uses the configured seed as is.
pub fn repetition_seed(seed: u64, rep: usize) -> u64 {
    seed ^ (rep as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Metric means over the repetitions of one cell.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MeanMetrics {
    pub steps: f64,
    pub path_count: f64,
    pub avg_steps: f64,
    pub unique_steps: f64,
    pub ut: f64,
    pub type1_activated: f64,
    pub type2_activated: f64,
    pub eff1: f64,
    pub eff2: f64,
}

fn mean(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    let n = xs.clone().count();
    if n == 0 {
        0.0
    } else {
        xs.sum::<f64>() / n as f64
    }
}

/// Population variance, shifted by the first value so that identical
/// samples give exactly 0.
fn variance(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    let Some(k) = xs.clone().next() else {
        return 0.0;
    };
    let m = mean(xs.clone().map(|x| x - k));
    let sq = mean(xs.map(|x| (x - k) * (x - k)));
    (sq - m * m).max(0.0)
}

impl MeanMetrics {
    pub fn of(runs: &[MetricsReport]) -> Self {
        let f = |g: fn(&MetricsReport) -> f64| mean(runs.iter().map(g));
        Self {
            steps: f(|m| m.steps as f64),
            path_count: f(|m| m.path_count as f64),
            avg_steps: f(|m| m.avg_steps),
            unique_steps: f(|m| m.unique_steps as f64),
            ut: f(|m| m.ut),
            type1_activated: f(|m| m.type1_activated as f64),
            type2_activated: f(|m| m.type2_activated as f64),
            eff1: f(|m| m.eff1),
            eff2: f(|m| m.eff2),
        }
    }
}

/// One (instance, configuration) cell.
#[derive(Debug, Clone)]
pub struct ResultRow {
    pub instance: String,
    pub coverage: CoverageCriterion,
    pub min_length: usize,
    pub max_length: usize,
    pub algorithm: Algorithm,
    pub metrics: MeanMetrics,
    pub steps_var: f64,
    pub eff1_var: f64,
    pub eff2_var: f64,
    pub runtime_ms: f64,
    pub properties: PropertyReport,
    pub type1_defects: usize,
    pub type2_defects: usize,
    pub pair_distance: f64,
    /// Path set of every repetition.
    pub runs: Vec<Vec<TestPath>>,
    /// Whether every repetition satisfied the coverage checks.
    pub coverage_ok: bool,
    pub infeasible_requirements: usize,
}

/// Why a group of cells was left out of the results.
#[derive(Debug, Clone, PartialEq)]
pub struct Exclusion {
    pub instance: String,
    pub coverage: CoverageCriterion,
    pub min_length: usize,
    pub max_length: usize,
    pub algorithm: Algorithm,
    pub reason: String,
}

#[derive(Debug, Clone, Default)]
pub struct BatchResult {
    pub rows: Vec<ResultRow>,
    pub excluded: Vec<Exclusion>,
    pub failures: LoadFailures,
}

enum Cell {
    Done(Box<ResultRow>),
    Failed(String),
}

fn run_cell(instance: &Instance, config: &RunConfig) -> Cell {
    let graph = &instance.model.graph;
    let mut runs = Vec::with_capacity(config.repetitions);
    let mut metrics = Vec::with_capacity(config.repetitions);
    let mut coverage_ok = true;
    let mut infeasible = 0;
    let started = Instant::now();
    for rep in 0..config.repetitions {
        let cfg = RunConfig {
            seed: repetition_seed(config.seed, rep),
            ..config.clone()
        };
        match generate_paths(graph, &cfg) {
            Ok(out) if out.paths.is_empty() => return Cell::Failed("no test paths returned".into()),
            Ok(out) => {
                coverage_ok &= out.report.is_satisfied();
                infeasible = out.infeasible.len();
                metrics.push(compute_metrics(&out.paths, &instance.model.defects));
                runs.push(out.paths);
            }
            Err(e @ (PipelineError::NoPathsPossible { .. } | PipelineError::EnumerationOverflow(_))) => {
                return Cell::Failed(e.to_string())
            }
            Err(e) => return Cell::Failed(e.to_string()),
        }
    }
    let elapsed = started.elapsed().as_secs_f64() * 1000.0 / config.repetitions as f64;
    let steps = metrics.iter().map(|m| m.steps as f64);
    let eff1 = metrics.iter().map(|m| m.eff1);
    let eff2 = metrics.iter().map(|m| m.eff2);
    Cell::Done(Box::new(ResultRow {
        instance: instance.name.clone(),
        coverage: config.coverage,
        min_length: config.min_length,
        max_length: config.max_length,
        algorithm: config.algorithm,
        steps_var: variance(steps),
        eff1_var: variance(eff1),
        eff2_var: variance(eff2),
        metrics: MeanMetrics::of(&metrics),
        runtime_ms: elapsed,
        properties: instance.properties.clone(),
        type1_defects: instance.model.defects.type1.len(),
        type2_defects: instance.model.defects.type2.len(),
        pair_distance: instance.pair_distance,
        runs,
        coverage_ok,
        infeasible_requirements: infeasible,
    }))
}

/// Runs every configuration on every instance. Cells run in parallel; rows
/// come back in (instance, configuration) order.
///
/// If any algorithm returns no path set for an instance under a given
/// coverage criterion and length range, that instance is dropped for all
/// algorithms under that criterion and range.
pub fn run_instances(instances: &[Instance], configs: &[RunConfig]) -> BatchResult {
    let jobs: Vec<(usize, usize)> = (0..instances.len())
        .flat_map(|i| (0..configs.len()).map(move |c| (i, c)))
        .collect();
    let cells: Vec<Cell> = jobs
        .par_iter()
        .map(|&(i, c)| run_cell(&instances[i], &configs[c]))
        .collect();

    type GroupKey = (usize, CoverageCriterion, usize, usize);
    let key = |(i, c): (usize, usize)| -> GroupKey {
        let cfg = &configs[c];
        (i, cfg.coverage, cfg.min_length, cfg.max_length)
    };
    let mut excluded = Vec::new();
    let mut dead: BTreeSet<GroupKey> = BTreeSet::new();
    for (&job, cell) in jobs.iter().zip(&cells) {
        if let Cell::Failed(reason) = cell {
            dead.insert(key(job));
            let cfg = &configs[job.1];
            excluded.push(Exclusion {
                instance: instances[job.0].name.clone(),
                coverage: cfg.coverage,
                min_length: cfg.min_length,
                max_length: cfg.max_length,
                algorithm: cfg.algorithm,
                reason: reason.clone(),
            });
        }
    }
    let rows = jobs
        .into_iter()
        .zip(cells)
        .filter(|(job, _)| !dead.contains(&key(*job)))
        .filter_map(|(_, cell)| match cell {
            Cell::Done(row) => Some(*row),
            Cell::Failed(_) => None,
        })
        .collect();
    BatchResult {
        rows,
        excluded,
        failures: Vec::new(),
    }
}

/// Loads the models in `model_dir` and runs the batch. Unreadable models
/// are reported in [`BatchResult::failures`].
pub fn run_batch(
    model_dir: &Path,
    configs: &[RunConfig],
    options: &BatchOptions,
) -> Result<BatchResult, FormatError> {
    let (instances, failures) = load_instances(model_dir, options)?;
    let mut result = run_instances(&instances, configs);
    result.failures = failures;
    Ok(result)
}

pub const RESULT_COLUMNS: [&str; 36] = [
    "instance",
    "coverage",
    "min_len",
    "max_len",
    "reduction",
    "steps",
    "path_count",
    "avg_steps",
    "unique_steps",
    "ut",
    "type1_activated",
    "type2_activated",
    "eff1",
    "eff2",
    "runtime_ms",
    "steps_var",
    "eff1_var",
    "eff2_var",
    "vertices",
    "edges",
    "cycles",
    "avg_cycle_length",
    "end_vertices",
    "parallel_edges",
    "parallel_edge_groups",
    "avg_in_degree",
    "avg_out_degree",
    "avg_degree",
    "test_starts",
    "test_ends",
    "test_start_end_overlap",
    "priority_vertices",
    "priority_edges",
    "type1_defects",
    "type2_defects",
    "e1_e2_avg_distance",
];

fn two(x: f64) -> String {
    format!("{x:.2}")
}

impl ResultRow {
    /// CSV fields in [`RESULT_COLUMNS`] order, reals rounded to two
    /// decimals.
    pub fn record(&self) -> Vec<String> {
        let m = &self.metrics;
        let p = &self.properties;
        vec![
            self.instance.clone(),
            self.coverage.to_string(),
            self.min_length.to_string(),
            self.max_length.to_string(),
            self.algorithm.to_string(),
            two(m.steps),
            two(m.path_count),
            two(m.avg_steps),
            two(m.unique_steps),
            two(m.ut),
            two(m.type1_activated),
            two(m.type2_activated),
            two(m.eff1),
            two(m.eff2),
            two(self.runtime_ms),
            two(self.steps_var),
            two(self.eff1_var),
            two(self.eff2_var),
            p.vertices.to_string(),
            p.edges.to_string(),
            p.cycles.to_string(),
            two(p.avg_cycle_length),
            p.end_vertices.to_string(),
            p.parallel_edges.to_string(),
            p.parallel_edge_groups.to_string(),
            two(p.avg_in_degree),
            two(p.avg_out_degree),
            two(p.avg_degree),
            p.test_starts.to_string(),
            p.test_ends.to_string(),
            p.overlap.to_string(),
            p.priority_vertices.to_string(),
            p.priority_edges.to_string(),
            self.type1_defects.to_string(),
            self.type2_defects.to_string(),
            two(self.pair_distance),
        ]
    }
}

pub fn write_results_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<(), FormatError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RESULT_COLUMNS)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Configurations for every algorithm under each coverage criterion and
/// length range.
pub fn experiment_grid(
    coverages: &[CoverageCriterion],
    ranges: &[(usize, usize)],
    algorithms: &[Algorithm],
    base: &RunConfig,
) -> Vec<RunConfig> {
    let mut out = Vec::new();
    for &coverage in coverages {
        for &(min_length, max_length) in ranges {
            for &algorithm in algorithms {
                out.push(RunConfig {
                    coverage,
                    min_length,
                    max_length,
                    algorithm,
                    ..base.clone()
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::defects::DefectSet;
    use crate::instance::{generate, InstanceSpec};
    use crate::reduction::Reduction;

    fn corpus(n: u64) -> Vec<Instance> {
        (0..n)
            .map(|s| {
                let spec = InstanceSpec::sample(s, 10..=14, 19..=24);
                let g = generate(&spec).unwrap().graph;
                let mut model = Model {
                    graph: g,
                    defects: DefectSet::default(),
                };
                let name = format!("gen{s}");
                ensure_defects(&mut model, &name, &BatchOptions::default());
                Instance::new(name, model)
            })
            .collect()
    }

    #[test]
    fn cell_count_and_order() {
        let inst = corpus(2);
        let configs = experiment_grid(
            &[CoverageCriterion::Basic],
            &[(2, 6)],
            &[Algorithm::Reduce(Reduction::Sorted), Algorithm::Reduce(Reduction::Chvatal)],
            &RunConfig::default(),
        );
        let res = run_instances(&inst, &configs);
        let groups: BTreeSet<&str> = res.excluded.iter().map(|e| e.instance.as_str()).collect();
        assert_eq!(res.rows.len() + 2 * groups.len(), 4);
        for row in &res.rows {
            assert!(row.coverage_ok);
        }
    }

    #[test]
    fn exclusion_applies_to_all_algorithms() {
        let inst = corpus(1);
        let base = RunConfig {
            enum_cap: 1,
            ..RunConfig::default()
        };
        let configs = experiment_grid(
            &[CoverageCriterion::Basic],
            &[(2, 6)],
            &[Algorithm::Reduce(Reduction::Sorted), Algorithm::NSwitch],
            &base,
        );
        let res = run_instances(&inst, &configs);
        assert!(res.rows.is_empty());
        assert!(res
            .excluded
            .iter()
            .any(|e| e.algorithm == Algorithm::NSwitch && e.reason.contains("cap")));
    }

    #[test]
    fn deterministic_repetitions_have_zero_variance() {
        let inst = corpus(3);
        let configs = experiment_grid(
            &[CoverageCriterion::Basic],
            &[(2, 6)],
            &[Algorithm::Reduce(Reduction::Sorted)],
            &RunConfig::default(),
        );
        for row in run_instances(&inst, &configs).rows {
            assert_eq!(row.runs.len(), 3);
            assert!(row.runs.windows(2).all(|w| w[0] == w[1]));
            assert_eq!((row.steps_var, row.eff1_var, row.eff2_var), (0.0, 0.0, 0.0));
        }
    }

    #[test]
    fn csv_layout() {
        let inst = corpus(2);
        let configs = experiment_grid(
            &[CoverageCriterion::Basic],
            &[(2, 6)],
            &[Algorithm::Reduce(Reduction::Sorted)],
            &RunConfig::default(),
        );
        let res = run_instances(&inst, &configs);
        let mut buf = Vec::new();
        write_results_csv(&res.rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), RESULT_COLUMNS.join(","));
        assert_eq!(lines.count(), res.rows.len());
    }

    #[test]
    fn variance_helpers() {
        assert_eq!(variance([1.0, 1.0, 1.0].into_iter()), 0.0);
        assert_eq!(variance([1.0, 3.0].into_iter()), 1.0);
        assert_eq!(repetition_seed(5, 0), 5);
        assert_ne!(repetition_seed(5, 1), repetition_seed(5, 2));
    }
}
