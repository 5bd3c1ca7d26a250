use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use psmt::batch::{experiment_grid, run_batch, write_results_csv, BatchOptions};
use psmt::defects::plant_random_defects;
use psmt::instance::{generate, measure_properties, InstanceSpec};
use psmt::io::{model_to_json, paths_to_json};
use psmt::reduction::{GaConfig, SaConfig};
use psmt::{
    compute_metrics, export_dot, generate_paths, read_model, read_paths, Algorithm, CoverageCriterion,
    FormatError, Model, PipelineError, PrioritySelection, RunConfig,
};

#[derive(Parser)]
#[command(name = "psmt", version, about = "Prioritized test path generation for system models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a test path set for a model.
    Generate(GenerateArgs),
    /// Compute metrics of a path set against the model's defects.
    Evaluate(EvaluateArgs),
    /// Run every configuration on every model in a directory.
    Batch(BatchArgs),
    /// Generate a random model.
    GenInstance(GenInstanceArgs),
    /// Render a model and optional paths as Graphviz DOT.
    ExportDot(ExportDotArgs),
}

#[derive(Args)]
struct Selection {
    /// Lower bound of the priority selection band.
    #[arg(long, default_value_t = 2.0)]
    select_min: f64,
    /// Upper bound of the priority selection band.
    #[arg(long, default_value_t = 3.0)]
    select_max: f64,
}

impl Selection {
    fn band(&self) -> Result<PrioritySelection, Failure> {
        PrioritySelection::new(self.select_min, self.select_max)
            .ok_or_else(|| Failure::invalid(format!("bad selection band {}..{}", self.select_min, self.select_max)))
    }
}

#[derive(Args)]
struct GenerateArgs {
    model: PathBuf,
    #[arg(long, default_value = "basic")]
    coverage: CoverageCriterion,
    #[arg(long = "min", default_value_t = 2)]
    min_length: usize,
    #[arg(long = "max", default_value_t = 6)]
    max_length: usize,
    /// none, random, sorted, chvatal, ga, sa or nswitch.
    #[arg(long, default_value = "sorted")]
    algorithm: Algorithm,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Limit on partial paths enumerated by the nswitch baseline.
    #[arg(long, default_value_t = psmt::nswitch::DEFAULT_ENUM_CAP)]
    enum_cap: u64,
    #[command(flatten)]
    selection: Selection,
    /// Write paths here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    model: PathBuf,
    paths: PathBuf,
    /// Seed for defects planted when the model has none.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 7)]
    type1: usize,
    #[arg(long, default_value_t = 6)]
    type2: usize,
}

#[derive(Args)]
struct BatchArgs {
    /// Directory of model files.
    models: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "basic,extended")]
    coverage: Vec<CoverageCriterion>,
    /// Length ranges as MIN-MAX.
    #[arg(long, value_delimiter = ',', default_value = "2-6,4-8", value_parser = parse_range)]
    ranges: Vec<(usize, usize)>,
    /// Algorithms to run; all seven by default.
    #[arg(long, value_delimiter = ',')]
    algorithms: Vec<Algorithm>,
    #[arg(long, default_value_t = 3)]
    repetitions: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Seed for defects planted into models that carry none.
    #[arg(long, default_value_t = 0)]
    defect_seed: u64,
    #[arg(long, default_value_t = psmt::nswitch::DEFAULT_ENUM_CAP)]
    enum_cap: u64,
    #[command(flatten)]
    selection: Selection,
    /// Write the CSV here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenInstanceArgs {
    #[arg(long, default_value_t = 10)]
    vertices: usize,
    #[arg(long, default_value_t = 19)]
    edges: usize,
    #[arg(long, default_value_t = 2)]
    cycles: usize,
    #[arg(long, default_value_t = 2)]
    test_starts: usize,
    #[arg(long, default_value_t = 2)]
    test_ends: usize,
    #[arg(long, default_value_t = 1)]
    overlap: usize,
    #[arg(long, default_value_t = 1)]
    end_vertices: usize,
    #[arg(long, default_value_t = 3)]
    priority_vertices: usize,
    #[arg(long, default_value_t = 5)]
    priority_edges: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Plant this many Type 1 defects.
    #[arg(long, default_value_t = 0)]
    type1: usize,
    /// Plant this many Type 2 defects.
    #[arg(long, default_value_t = 0)]
    type2: usize,
    /// Instead of one model, write this many sampled models into --out-dir.
    #[arg(long, requires = "out_dir")]
    corpus: Option<usize>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Vertex range for corpus sampling, MIN-MAX.
    #[arg(long, default_value = "10-30", value_parser = parse_range)]
    vertex_range: (usize, usize),
    /// Edge range for corpus sampling, MIN-MAX.
    #[arg(long, default_value = "19-60", value_parser = parse_range)]
    edge_range: (usize, usize),
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ExportDotArgs {
    model: PathBuf,
    /// Path set to draw over the model.
    #[arg(long)]
    paths: Option<PathBuf>,
    /// Unused; accepted for uniformity with the other verbs.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once('-').ok_or_else(|| format!("expected MIN-MAX, got '{s}'"))?;
    let a = a.trim().parse().map_err(|e| format!("{a}: {e}"))?;
    let b = b.trim().parse().map_err(|e| format!("{b}: {e}"))?;
    if a > b {
        return Err(format!("empty range {a}-{b}"));
    }
    Ok((a, b))
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::invalid(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::invalid(e.to_string())
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        let code = match e {
            PipelineError::InvalidModel(_) | PipelineError::InvalidConfig(_) => 1,
            PipelineError::NoPathsPossible { .. } => 2,
            PipelineError::EnumerationOverflow(_) => 3,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::invalid(format!("{}: {e}", p.display()))),
        None => Ok(io::stdout().write_all(text.as_bytes())?),
    }
}

fn load_valid(path: &Path) -> Result<Model, Failure> {
    let model = read_model(path)?;
    let report = model.graph.validate();
    if !report.is_valid() {
        let lines: Vec<String> = report.violations.iter().map(|v| format!("  {v}")).collect();
        return Err(Failure::invalid(format!("{}: invalid model\n{}", path.display(), lines.join("\n"))));
    }
    let problems = model.defects.check(&model.graph);
    if !problems.is_empty() {
        return Err(Failure::invalid(format!("{}: {}", path.display(), problems.join("; "))));
    }
    Ok(model)
}

fn cmd_generate(a: GenerateArgs) -> Result<(), Failure> {
    let model = load_valid(&a.model)?;
    let g = &model.graph;
    let config = RunConfig {
        coverage: a.coverage,
        min_length: a.min_length,
        max_length: a.max_length,
        selection: a.selection.band()?,
        algorithm: a.algorithm,
        seed: a.seed,
        repetitions: 1,
        ga: GaConfig::default(),
        sa: SaConfig::default(),
        enum_cap: a.enum_cap,
    };
    let out = generate_paths(g, &config)?;
    for r in &out.infeasible {
        eprintln!("warning: no test path of length {}..={} covers {}", a.min_length, a.max_length, r.describe(g));
    }
    if !out.report.is_satisfied() {
        return Err(Failure::invalid(format!("coverage check failed:\n{}", out.report.render(g, &out.paths))));
    }
    eprintln!(
        "{} requirements, {} paths, {} steps",
        out.feasible.len() + out.infeasible.len(),
        out.paths.len(),
        out.paths.iter().map(|p| p.len()).sum::<usize>()
    );
    emit(&paths_to_json(&out.paths, g), a.output.as_deref())
}

fn cmd_evaluate(a: EvaluateArgs) -> Result<(), Failure> {
    let mut model = load_valid(&a.model)?;
    let paths = read_paths(&a.paths, &model.graph)?;
    if model.defects.type1.is_empty() && model.defects.type2.is_empty() {
        model.defects = plant_random_defects(&model.graph, a.type1, a.type2, a.seed)
            .map_err(|e| Failure::invalid(e.to_string()))?;
    }
    let m = compute_metrics(&paths, &model.defects);
    let json = serde_json::json!({
        "steps": m.steps,
        "path_count": m.path_count,
        "avg_steps": m.avg_steps,
        "unique_steps": m.unique_steps,
        "ut": m.ut,
        "type1_activated": m.type1_activated,
        "type2_activated": m.type2_activated,
        "eff1": m.eff1,
        "eff2": m.eff2,
    });
    emit(&format!("{}\n", serde_json::to_string_pretty(&json).expect("plain values")), None)
}

fn cmd_batch(a: BatchArgs) -> Result<(), Failure> {
    let algorithms = if a.algorithms.is_empty() {
        Algorithm::ALL.to_vec()
    } else {
        a.algorithms
    };
    let base = RunConfig {
        selection: a.selection.band()?,
        seed: a.seed,
        repetitions: a.repetitions,
        enum_cap: a.enum_cap,
        ..RunConfig::default()
    };
    let configs = experiment_grid(&a.coverage, &a.ranges, &algorithms, &base);
    for c in &configs {
        c.check().map_err(Failure::invalid)?;
    }
    let options = BatchOptions {
        defect_seed: a.defect_seed,
        ..BatchOptions::default()
    };
    let result = run_batch(&a.models, &configs, &options)?;
    for (file, why) in &result.failures {
        eprintln!("skipped {}: {why}", file.display());
    }
    for e in &result.excluded {
        eprintln!(
            "excluded {} {} {}-{}: {} ({})",
            e.instance, e.coverage, e.min_length, e.max_length, e.algorithm, e.reason
        );
    }
    let mut buf = Vec::new();
    write_results_csv(&result.rows, &mut buf)?;
    emit(&String::from_utf8(buf).expect("csv is utf-8"), a.output.as_deref())
}

fn cmd_gen_instance(a: GenInstanceArgs) -> Result<(), Failure> {
    let build = |spec: &InstanceSpec, t1: usize, t2: usize| -> Result<String, Failure> {
        let inst = generate(spec).map_err(|e| Failure::invalid(e.to_string()))?;
        let defects = plant_random_defects(&inst.graph, t1, t2, spec.seed)
            .map_err(|e| Failure::invalid(e.to_string()))?;
        Ok(model_to_json(&Model {
            graph: inst.graph,
            defects,
        }))
    };
    if let (Some(n), Some(dir)) = (a.corpus, a.out_dir.as_deref()) {
        fs::create_dir_all(dir)?;
        let (v0, v1) = a.vertex_range;
        let (e0, e1) = a.edge_range;
        for i in 0..n {
            let seed = a.seed.wrapping_add(i as u64);
            let mut spec = InstanceSpec::sample(seed, v0..=v1, e0..=e1);
            spec.seed = seed;
            let text = build(&spec, 0, 0)?;
            fs::write(dir.join(format!("instance_{i:03}.json")), text)?;
        }
        eprintln!("wrote {n} models to {}", dir.display());
        return Ok(());
    }
    let spec = InstanceSpec {
        vertex_count: a.vertices,
        edge_count: a.edges,
        cycle_count: a.cycles,
        test_start_count: a.test_starts,
        test_end_count: a.test_ends,
        overlap_count: a.overlap,
        end_vertex_count: a.end_vertices,
        priority_vertex_count: a.priority_vertices,
        priority_edge_count: a.priority_edges,
        seed: a.seed,
        ..InstanceSpec::default()
    };
    let text = build(&spec, a.type1, a.type2)?;
    if a.output.is_some() {
        let model = psmt::io::parse_model(&text, Path::new("<generated>"))?;
        let p = measure_properties(&model.graph);
        eprintln!(
            "{} vertices, {} edges, {} cycles{}",
            p.vertices,
            p.edges,
            p.cycles,
            if p.cycles_capped { " (capped)" } else { "" }
        );
    }
    emit(&text, a.output.as_deref())
}

fn cmd_export_dot(a: ExportDotArgs) -> Result<(), Failure> {
    let model = load_valid(&a.model)?;
    let paths = match &a.paths {
        Some(p) => read_paths(p, &model.graph)?,
        None => Vec::new(),
    };
    emit(&export_dot(&model.graph, &paths), a.output.as_deref())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Keep 2 and 3 for generation outcomes; usage errors are 1.
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::Batch(a) => cmd_batch(a),
        Command::GenInstance(a) => cmd_gen_instance(a),
        Command::ExportDot(a) => cmd_export_dot(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
