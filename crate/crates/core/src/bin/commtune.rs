use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commtune::experiment::{
    default_grid, parse_grid, run_experiment, stability, Dataset, ExperimentSpec, RunPreset,
    KNOWN_DATASETS,
};
use commtune::io::{read_edge_list, read_labels, write_edge_list, write_labels};
use commtune::powerlaw::{estimate_community_params, estimate_graph_params, LfrParams};
use commtune::{detect, generate_lfr, tune, Error, LfrConfig, Metric, ObjectiveKind, TuneConfig};

#[derive(Parser)]
#[command(name = "commtune", version, about = "Community detection with label-free parameter tuning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Detect communities and write the partition as a label file
    Detect(DetectArgs),
    /// Choose the algorithm parameter on synthetic graphs shaped like the input
    Tune(TuneArgs),
    /// Compare default and tuned parameters against ground-truth labels
    Experiment(ExperimentArgs),
    /// Histogram of per-graph best parameters
    Stability(TuneArgs),
    /// Generate an LFR instance
    Generate(GenerateArgs),
    /// Print LFR parameters estimated from a graph
    Estimate(EstimateArgs),
    /// List the reference datasets and the file names the loader expects
    Datasets,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Args)]
struct AlgorithmArgs {
    #[arg(long, default_value = "louvain", value_parser = parse_kind)]
    algorithm: ObjectiveKind,
    /// Algorithm parameter (γ for louvain/ppm, μ for ilfr); defaults to 1, 1, 0.3
    #[arg(long)]
    param: Option<f64>,
}

impl AlgorithmArgs {
    fn param(&self) -> f64 {
        self.param
            .unwrap_or_else(|| self.algorithm.default_parameter())
    }
}

#[derive(Args)]
struct DetectArgs {
    #[arg(long)]
    edges: PathBuf,
    #[command(flatten)]
    algorithm: AlgorithmArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory for `<stem>.labels`; labels go to stdout otherwise
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    algorithm: AlgorithmArgs,
    /// Preset (real-gamma, synthetic-gamma, ilfr-mu), start:stop:step or a list
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    n_graphs: Option<usize>,
    #[arg(long)]
    n_runs: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

impl SearchArgs {
    fn candidates(&self) -> commtune::Result<Vec<f64>> {
        match &self.grid {
            Some(g) => parse_grid(g),
            None => Ok(default_grid(self.algorithm.algorithm)),
        }
    }

    fn preset(&self, n: usize) -> RunPreset {
        let mut p = RunPreset::for_size(n);
        if let Some(g) = self.n_graphs {
            p.n_graphs = g;
        }
        if let Some(r) = self.n_runs {
            p.n_runs = r;
        }
        p
    }
}

#[derive(Args)]
struct TuneArgs {
    #[arg(long)]
    edges: PathBuf,
    #[arg(long, default_value = "nmi", value_parser = parse_metric)]
    metric: Metric,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Edge list; repeat together with --labels for several datasets
    #[arg(long, required = true)]
    edges: Vec<PathBuf>,
    #[arg(long, required = true)]
    labels: Vec<PathBuf>,
    /// Metrics to report; all three by default
    #[arg(long, value_parser = parse_metric)]
    metric: Vec<Metric>,
    /// Evaluation runs per arm
    #[arg(long)]
    n_runs_eval: Option<usize>,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, default_value_t = 0.5)]
    mixing: f64,
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    #[arg(long, default_value_t = 20.0)]
    mean_degree: f64,
    #[arg(long, default_value_t = 200)]
    max_degree: usize,
    #[arg(long, default_value_t = 2.5)]
    degree_exponent: f64,
    #[arg(long, default_value_t = 1.5)]
    size_exponent: f64,
    #[arg(long, default_value_t = 50)]
    min_community: usize,
    #[arg(long, default_value_t = 500)]
    max_community: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory for `lfr.edges` and `lfr.labels`
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EstimateArgs {
    #[arg(long)]
    edges: PathBuf,
    /// Community parameters come from these labels instead of a detection run
    #[arg(long)]
    labels: Option<PathBuf>,
    #[command(flatten)]
    algorithm: AlgorithmArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_kind(s: &str) -> Result<ObjectiveKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_metric(s: &str) -> Result<Metric, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Exit status for a failed command: 1 usage, 2 data, 3 infeasible generation.
fn exit_code(e: &Error) -> u8 {
    match e {
        _ if e.is_infeasible_generation() => 3,
        Error::InvalidParameter(_) => 1,
        _ => 2,
    }
}

fn output(out: Option<&Path>, file_name: &str) -> commtune::Result<Box<dyn Write>> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            Ok(Box::new(BufWriter::new(File::create(dir.join(file_name))?)))
        }
        None => Ok(Box::new(io::stdout().lock())),
    }
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "graph".into())
}

fn cmd_detect(args: &DetectArgs) -> commtune::Result<()> {
    let graph = read_edge_list(&args.edges)?;
    let objective = args.algorithm.algorithm.objective(args.algorithm.param())?;
    let result = detect(&graph, &objective, args.seed)?;
    let summary = format!(
        "objective={} communities={} levels={}",
        result.objective_value,
        result.partition.nonempty_communities(),
        result.levels
    );
    match &args.out {
        Some(dir) => {
            let name = format!("{}.labels", file_stem(&args.edges));
            let mut w = output(Some(dir), &name)?;
            write_labels(&mut w, &graph, &result.partition)?;
            w.flush()?;
            println!("{summary}");
            println!("labels: {}", dir.join(name).display());
        }
        None => {
            let mut w = io::stdout().lock();
            writeln!(w, "# {summary}")?;
            write_labels(&mut w, &graph, &result.partition)?;
        }
    }
    Ok(())
}

fn tune_config(args: &TuneArgs, n: usize) -> commtune::Result<TuneConfig> {
    let preset = args.search.preset(n);
    Ok(TuneConfig {
        candidates: args.search.candidates()?,
        default_param: args.search.algorithm.param(),
        metric: args.metric,
        n_graphs: preset.n_graphs,
        n_runs: preset.n_runs,
        master_seed: args.search.seed,
        lfr: LfrConfig::default(),
    })
}

fn cmd_tune(args: &TuneArgs) -> commtune::Result<()> {
    let graph = read_edge_list(&args.edges)?;
    let config = tune_config(args, graph.n())?;
    let report = tune(&graph, args.search.algorithm.algorithm, &config)?;
    let mut w = output(args.search.out.as_deref(), "tune.txt")?;
    match args.search.format {
        Format::Json => writeln!(w, "{}", report.to_json())?,
        _ => write!(w, "{}", report.to_text())?,
    }
    w.flush()?;
    Ok(())
}

fn cmd_stability(args: &TuneArgs) -> commtune::Result<()> {
    let graph = read_edge_list(&args.edges)?;
    let config = tune_config(args, graph.n())?;
    let report = tune(&graph, args.search.algorithm.algorithm, &config)?;
    let hist = stability(&report);
    let (name, body) = match args.search.format {
        Format::Csv => ("stability.csv", hist.to_csv()),
        Format::Json => (
            "stability.json",
            serde_json::to_string_pretty(&hist).expect("histogram serializes") + "\n",
        ),
        Format::Text => ("stability.txt", hist.to_text()),
    };
    let mut w = output(args.search.out.as_deref(), name)?;
    w.write_all(body.as_bytes())?;
    w.flush()?;
    Ok(())
}

fn cmd_experiment(args: &ExperimentArgs) -> commtune::Result<()> {
    if args.edges.len() != args.labels.len() {
        return Err(Error::InvalidParameter(format!(
            "{} edge files but {} label files",
            args.edges.len(),
            args.labels.len()
        )));
    }
    let datasets = args
        .edges
        .iter()
        .zip(&args.labels)
        .map(|(e, l)| Dataset::load(e, l))
        .collect::<commtune::Result<Vec<_>>>()?;
    let largest = datasets.iter().map(|d| d.graph.n()).max().unwrap_or(0);
    let preset = args.search.preset(largest);
    let metrics = if args.metric.is_empty() {
        Metric::ALL.to_vec()
    } else {
        args.metric.clone()
    };
    let spec = ExperimentSpec {
        algorithm: args.search.algorithm.algorithm,
        default_param: args.search.algorithm.param(),
        candidates: args.search.candidates()?,
        metrics,
        n_runs_eval: args.n_runs_eval.unwrap_or(preset.n_runs_eval),
        n_runs: preset.n_runs,
        n_graphs: preset.n_graphs,
        master_seed: args.search.seed,
    };
    let results = run_experiment(&spec, &datasets)?;
    match &args.search.out {
        Some(dir) => {
            let mut w = output(Some(dir), "results.csv")?;
            w.write_all(results.to_csv().as_bytes())?;
            w.flush()?;
            let mut w = output(Some(dir), "results.txt")?;
            w.write_all(results.to_text().as_bytes())?;
            w.flush()?;
            print!("{}", results.to_text());
        }
        None => match args.search.format {
            Format::Csv => print!("{}", results.to_csv()),
            Format::Json => println!(
                "{}",
                serde_json::to_string_pretty(&results).expect("results serialize")
            ),
            Format::Text => print!("{}", results.to_text()),
        },
    }
    Ok(())
}

fn cmd_generate(args: &GenerateArgs) -> commtune::Result<()> {
    let params = LfrParams {
        n: args.n,
        mean_degree: args.mean_degree,
        max_degree: args.max_degree,
        degree_exponent: args.degree_exponent,
        mixing: args.mixing,
        size_exponent: args.size_exponent,
        min_community: args.min_community,
        max_community: args.max_community,
    };
    let inst = generate_lfr(&params, &LfrConfig::default(), args.seed)?;
    println!(
        "n={} m={} communities={} achieved_mixing={:.4}",
        inst.graph.n(),
        inst.graph.edge_count(),
        inst.ground_truth.nonempty_communities(),
        inst.achieved_mixing
    );
    if let Some(dir) = &args.out {
        let mut w = output(Some(dir), "lfr.edges")?;
        write_edge_list(&mut w, &inst.graph)?;
        w.flush()?;
        let mut w = output(Some(dir), "lfr.labels")?;
        write_labels(&mut w, &inst.graph, &inst.ground_truth)?;
        w.flush()?;
    }
    Ok(())
}

fn cmd_estimate(args: &EstimateArgs) -> commtune::Result<()> {
    let graph = read_edge_list(&args.edges)?;
    let graph_params = estimate_graph_params(&graph)?;
    let partition = match &args.labels {
        Some(path) => read_labels(path, &graph)?,
        None => {
            let objective = args.algorithm.algorithm.objective(args.algorithm.param())?;
            detect(&graph, &objective, args.seed)?.partition
        }
    };
    let community = estimate_community_params(&graph, &partition)?;
    println!("{}", LfrParams::from_parts(graph_params, community));
    if community.size_exponent_fallback {
        println!("note: size exponent is the fallback value");
    }
    Ok(())
}

fn cmd_datasets() {
    println!("name       n      m      clusters  mixing  files");
    for d in KNOWN_DATASETS {
        println!(
            "{:<9}  {:<5}  {:<5}  {:<8}  {:<6}  {}.edges {}.labels",
            d.name, d.n, d.m, d.clusters, d.mixing, d.name, d.name
        );
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Detect(a) => cmd_detect(a),
        Command::Tune(a) => cmd_tune(a),
        Command::Experiment(a) => cmd_experiment(a),
        Command::Stability(a) => cmd_stability(a),
        Command::Generate(a) => cmd_generate(a),
        Command::Estimate(a) => cmd_estimate(a),
        Command::Datasets => {
            cmd_datasets();
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Error::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
