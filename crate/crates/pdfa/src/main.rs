use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pdfa::bench::{self, Axis, BenchConfig, Stage};
use pdfa::io::{self, Model, RadiusSetting, RunConfig};
use pdfa::pipeline;
use pdfa::sim::{enumerate_demos, generate_demos, Preset, Schedule, SimEnvironment, TaskScript};
use pdfa_core::{execute, export_dot, greedy_plan, language_size, Availability, DotOptions, PlannerOptions, StopRule};

#[derive(Parser)]
#[command(name = "pdfa", version, about = "Learn task automata from demonstrations and plan with them")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cluster sub-goals, extract words and learn the automaton.
    Infer(InferArgs),
    /// Greedy plan from the initial state, optionally executed in simulation.
    Plan(PlanArgs),
    /// Graphviz rendering of a learned automaton.
    Export(ExportArgs),
    /// Time clustering and automaton inference over a scaling axis.
    Bench(BenchArgs),
    /// Write simulated demonstrations for a preset or a task script.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct InferArgs {
    /// Demonstration file, `demo,time,f0,f1,...` per line.
    #[arg(long)]
    demos: PathBuf,
    /// Run configuration; defaults to the demo file with a .toml extension
    /// when that exists.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Neighbourhood radius in normalized units.
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    min_pts: Option<usize>,
    /// Ball radius in feature units, or `max-member`.
    #[arg(long)]
    radius: Option<RadiusSetting>,
}

#[derive(Args)]
struct PlanArgs {
    /// Automaton written by `infer`.
    #[arg(long)]
    pdfa: PathBuf,
    /// Availability schedule; runs the plan in simulation and writes the
    /// execution trace.
    #[arg(long, visible_alias = "simulate")]
    schedule: Option<PathBuf>,
    /// Trace destination; defaults to trace.tsv in the output directory.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Continue past an accepting state while a transition beats stopping.
    #[arg(long)]
    prefer_terminal: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long)]
    pdfa: PathBuf,
    #[arg(long, value_enum, default_value = "on")]
    probabilities: Switch,
    /// Write here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// demos, subgoals, language or objects.
    #[arg(long)]
    axis: Axis,
    /// Comma-separated, strictly increasing; the axis defaults otherwise.
    #[arg(long, value_delimiter = ',')]
    levels: Option<Vec<usize>>,
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated subset of clustering, pdfa.
    #[arg(long, value_delimiter = ',')]
    stages: Option<Vec<Stage>>,
    /// Also write bench-<axis>.tsv here.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    /// four-blocks, two-stacks, language-N, stack-unstack-N, objects-N,
    /// drone or reacher.
    #[arg(long, conflicts_with = "script", required_unless_present = "script")]
    preset: Option<Preset>,
    /// Task script in TOML.
    #[arg(long)]
    script: Option<PathBuf>,
    /// Number of demonstrations, orderings drawn by weight.
    #[arg(long, conflicts_with = "enumerate", required_unless_present = "enumerate")]
    count: Option<usize>,
    /// One demonstration per unit of weight of every admissible ordering.
    #[arg(long)]
    enumerate: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Gaussian observation noise, overriding the script.
    #[arg(long)]
    sigma: Option<f64>,
    /// Probability that an object goes unseen in a state, overriding the
    /// script.
    #[arg(long)]
    dropout: Option<f64>,
}

enum Failure {
    Config(String),
    Data(String),
    Stuck(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 1,
            Failure::Data(_) => 2,
            Failure::Stuck(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Data(m) | Failure::Stuck(m) => m,
        }
    }
}

fn config_err(e: impl ToString) -> Failure {
    Failure::Config(e.to_string())
}

fn data_err(e: impl ToString) -> Failure {
    Failure::Data(e.to_string())
}

/// A missing or unreadable file is a configuration problem, bad contents a
/// data problem.
fn io_err(e: io::Error) -> Failure {
    match e {
        io::Error::Io { .. } => config_err(e),
        e => data_err(e),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Infer(a) => infer(a),
        Command::Plan(a) => plan(a),
        Command::Export(a) => export(a),
        Command::Bench(a) => run_bench(a),
        Command::Generate(a) => generate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn infer(a: InferArgs) -> Result<(), Failure> {
    let sidecar = a.demos.with_extension("toml");
    let config_path = a.config.or_else(|| sidecar.is_file().then_some(sidecar));
    let mut config = match &config_path {
        Some(p) => RunConfig::load(p).map_err(config_err)?,
        None => RunConfig::default(),
    };
    let declared = config_path.is_some().then(|| config.num_features());
    let corpus = io::load_demos(&a.demos, declared).map_err(io_err)?;
    if config_path.is_none() {
        config.features = (0..corpus.num_features()).map(|i| format!("f{i}")).collect();
    }
    if a.eps.is_some() {
        config.dbscan.eps = a.eps;
    }
    if a.min_pts.is_some() {
        config.dbscan.min_pts = a.min_pts;
    }
    if a.radius.is_some() {
        config.radius = a.radius;
    }
    let candidates = config.candidate_subsets().map_err(config_err)?;
    let settings = config.subgoal_config(&corpus).map_err(config_err)?;

    let learned = pipeline::learn(&corpus, &candidates, &settings).map_err(data_err)?;
    let model = Model { pdfa: learned.pdfa, goals: learned.subgoals.goals.clone() };
    write(&a.out_dir.join("subgoals.toml"), &io::format_subgoals(&learned.subgoals))?;
    write(&a.out_dir.join("words.txt"), &io::format_words(&learned.words))?;
    write(&a.out_dir.join("model.toml"), &io::format_model(&model))?;

    let dfa = model.pdfa.dfa();
    println!("|G| = {}", learned.subgoals.len());
    println!("|Q| = {}", dfa.num_states());
    println!("|F| = {}", dfa.accepting_states().count());
    println!("|L| = {}", language_size(dfa));
    Ok(())
}

fn plan(a: PlanArgs) -> Result<(), Failure> {
    let model = io::load_model(&a.pdfa).map_err(io_err)?;
    let options = PlannerOptions {
        stop_rule: if a.prefer_terminal { StopRule::PreferTerminal } else { StopRule::FirstAccepting },
        ..PlannerOptions::default()
    };
    let pdfa = &model.pdfa;
    let plan = greedy_plan(pdfa, pdfa.dfa().initial(), &Availability::all(), &options)
        .map_err(|e| Failure::Stuck(e.to_string()))?;
    print!("{}", io::format_plan(&plan));

    let Some(schedule_path) = a.schedule else {
        return Ok(());
    };
    let schedule = Schedule::load(&schedule_path).map_err(io_err)?;
    let mut env = if model.goals.is_empty() {
        SimEnvironment::for_symbols(pdfa.dfa().alphabet_size(), schedule)
    } else {
        SimEnvironment::for_goals(model.goals.clone(), schedule)
    };
    let trace = execute(pdfa, &mut env, &options);
    let trace_path = a.trace.unwrap_or_else(|| a.out_dir.join("trace.tsv"));
    write(&trace_path, &io::format_trace(&trace))?;
    println!("achieved = \"{}\"", trace.achieved_word());
    println!("replans = {}", trace.replans());
    if trace.is_stuck() {
        return Err(Failure::Stuck(format!(
            "execution stuck after {} commands; trace in {}",
            env.step(),
            trace_path.display()
        )));
    }
    Ok(())
}

fn export(a: ExportArgs) -> Result<(), Failure> {
    let model = io::load_model(&a.pdfa).map_err(io_err)?;
    let options = DotOptions { probabilities: matches!(a.probabilities, Switch::On) };
    let dot = export_dot(&model.pdfa, options);
    match a.out {
        Some(path) => write(&path, &dot),
        None => {
            print!("{dot}");
            Ok(())
        }
    }
}

fn run_bench(a: BenchArgs) -> Result<(), Failure> {
    let mut config = BenchConfig::new(a.axis);
    if let Some(levels) = a.levels {
        config.levels = levels;
    }
    if let Some(stages) = a.stages {
        config.stages = stages;
    }
    config.reps = a.reps;
    config.seed = a.seed;
    if a.reps == 1 {
        eprintln!("warning: a single repetition gives no spread; the MAD column is zero");
    }
    let rows = bench::scaling_bench(&config).map_err(|e| match e {
        bench::BenchError::Script(_) | bench::BenchError::Pipeline(_) => data_err(e),
        e => config_err(e),
    })?;
    print!("{}", bench::format_table(a.axis, &rows));
    if let Some(dir) = a.out_dir {
        write(&dir.join(format!("bench-{}.tsv", a.axis.name())), &bench::format_tsv(a.axis, &rows))?;
    }
    Ok(())
}

fn generate(a: GenerateArgs) -> Result<(), Failure> {
    let mut script = match (a.preset, &a.script) {
        (Some(p), _) => p.script(),
        (None, Some(path)) => TaskScript::load(path).map_err(config_err)?,
        (None, None) => unreachable!("clap requires one of them"),
    };
    if let Some(sigma) = a.sigma {
        script.noise.sigma = sigma;
    }
    if let Some(dropout) = a.dropout {
        script.noise.dropout = dropout;
    }
    script.validate().map_err(config_err)?;
    let corpus = if a.enumerate {
        enumerate_demos(&script, a.seed)
    } else {
        generate_demos(&script, a.count.unwrap_or_default(), a.seed)
    }
    .map_err(config_err)?;
    write(&a.out_dir.join("demos.csv"), &io::format_demos(&corpus))?;
    let config = script.run_config(corpus.len(), Some(a.seed));
    write(&a.out_dir.join("demos.toml"), &config.to_toml())?;
    println!("{} demonstrations, {} states", corpus.len(), corpus.total_states());
    Ok(())
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    io::write_text(path, text).map_err(data_err)
}
