//! `ramf` — plan maximum flows that survive budgeted edge failures.
//!
//! Subcommands:
//! * `gen` draws a seeded random instance and writes it in the native format.
//! * `solve` runs the iterative administrator-vs-adversary game and emits
//!   the full trace.
//! * `baseline` commits one of the four reference strategies and scores it
//!   against its worst attack.
//! * `attack` searches for the worst attack on the plain min-cost max-flow
//!   commitment.
//! * `experiment` sweeps instances x seeds x approaches from a JSON config
//!   into CSV/JSON tables.
//! * `verify` re-solves an instance and checks the maximin certificate,
//!   exiting nonzero when any check fails.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ramf_cli::experiment::{render_csv, run_experiment, AdversaryChoice, ExperimentConfig, Row};
use ramf_cli::formats::{load_instance, write_native, InstanceFormat, LoadOptions};
use ramf_cli::metrics::{evaluate_flow, method_label};
use ramf_core::adversary::{
    accelerated_greedy_attack, best_attack, exact_attack, greedy_attack, partitioning_attack,
    AdversaryConfig, AdversaryMode, AttackResult,
};
use ramf_core::engines::max_flow_min_cost;
use ramf_core::game::{solve_game, verify_maximin, GameConfig};
use ramf_core::model::{generate_random, Attack, Network, RandomNetParams};
use ramf_core::{round_objective, DEFAULT_MAX_GAME_ITERATIONS, EPS_CONVERGENCE};

#[derive(Parser)]
#[command(
    name = "ramf",
    version,
    about = "Robust and adaptive maximum flow under budgeted edge failures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded random instance in the native format.
    Gen(GenArgs),
    /// Run the iterative game and emit its trace.
    Solve(SolveArgs),
    /// Commit one reference strategy and score it against its worst attack.
    Baseline(BaselineArgs),
    /// Find the worst attack against the min-cost max-flow commitment.
    Attack(AttackArgs),
    /// Run a config-driven sweep into CSV/JSON tables.
    Experiment(ExperimentArgs),
    /// Re-solve and check the maximin certificate; nonzero exit on failure.
    Verify(VerifyArgs),
}

/// Flags shared by every subcommand that reads an instance.
#[derive(Args)]
struct InstanceArgs {
    /// Instance file (native, SNDlib or DIMACS).
    instance: PathBuf,
    /// Adversary budget: how many edges one attack may destroy.
    #[arg(long, default_value_t = 1)]
    gamma: usize,
    /// Seed for drawn capacities/costs, connectivity repair and partition
    /// sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Post-attack residual capacity applied to every attackable edge.
    #[arg(long)]
    me: Option<f64>,
    /// Source node override, by name.
    #[arg(long)]
    source: Option<String>,
    /// Terminal node override, by name.
    #[arg(long)]
    sink: Option<String>,
    /// Parse the instance as this format instead of sniffing.
    #[arg(long = "format-in", value_enum)]
    format_in: Option<InstanceFormat>,
}

impl InstanceArgs {
    fn load(&self) -> anyhow::Result<Network> {
        let options = LoadOptions {
            format: self.format_in,
            source: self.source.clone(),
            sink: self.sink.clone(),
            seed: self.seed,
            post_attack_capacity: self.me,
        };
        load_instance(&self.instance, &options)
    }

    fn adversary_config(&self) -> AdversaryConfig {
        AdversaryConfig { seed: self.seed, ..AdversaryConfig::default() }
    }
}

/// Where and how a subcommand's document is written.
#[derive(Args)]
struct OutputArgs {
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Document format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

impl OutputArgs {
    fn emit(&self, text: &str) -> anyhow::Result<()> {
        match &self.out {
            Some(path) => fs::write(path, text)
                .with_context(|| format!("cannot write {}", path.display())),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

#[derive(Args)]
struct GenArgs {
    /// Number of nodes.
    #[arg(long)]
    nodes: usize,
    /// Probability of each ordered node pair carrying an edge.
    #[arg(long)]
    density: f64,
    /// Seed for all draws.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Capacity range, drawn uniformly (integer-valued for integer bounds).
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], default_values_t = [1.0, 20.0])]
    capacity_range: Vec<f64>,
    /// Unit routing-cost range, drawn uniformly.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], default_values_t = [0.01, 0.1])]
    cost_range: Vec<f64>,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// How the adversary searches for best responses.
    #[arg(long, value_enum, default_value_t = AdversaryChoice::Exact)]
    adversary: AdversaryChoice,
    /// Bounds within this distance count as converged.
    #[arg(long, default_value_t = EPS_CONVERGENCE)]
    tol: f64,
    /// Hard stop on game iterations.
    #[arg(long, default_value_t = DEFAULT_MAX_GAME_ITERATIONS)]
    max_iterations: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct BaselineArgs {
    /// Which reference strategy to commit.
    #[arg(long, value_enum)]
    method: BaselineMethod,
    #[command(flatten)]
    instance: InstanceArgs,
    /// How the worst attack on the committed flow is searched.
    #[arg(long, value_enum, default_value_t = AdversaryChoice::Exact)]
    adversary: AdversaryChoice,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BaselineMethod {
    /// Plain max-flow/min-cost, adversary ignored.
    Mf,
    /// Observe the worst attack on the naive plan, then re-plan.
    Osp,
    /// Robust flow hedging against losing its fullest edges.
    Rf,
    /// Adjustable robust flow bounded by the committed levels.
    Aamf,
}

#[derive(Args)]
struct AttackArgs {
    /// Which search to run.
    #[arg(long, value_enum, default_value_t = AttackSearch::Best)]
    mode: AttackSearch,
    #[command(flatten)]
    instance: InstanceArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AttackSearch {
    /// Exhaustive enumeration; fails when the attack space is too large.
    Exact,
    /// One edge per round, best marginal damage.
    Greedy,
    /// Lazy greedy: same attacks, fewer evaluations.
    Accel,
    /// Candidates from random two-way network splits.
    Partition,
    /// Exact if affordable, else the stronger of the two heuristics.
    Best,
}

#[derive(Args)]
struct ExperimentArgs {
    /// JSON experiment description.
    #[arg(long)]
    config: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Adversary used for the re-solve (verification itself prefers
    /// enumeration whenever affordable).
    #[arg(long, value_enum, default_value_t = AdversaryChoice::Exact)]
    adversary: AdversaryChoice,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// What `attack` reports.
#[derive(Serialize)]
struct AttackReport {
    instance: String,
    gamma: usize,
    method: String,
    /// Edge ids of the attack.
    attack: Attack,
    /// The same edges as `tail->head` node names.
    attack_edges: Vec<String>,
    /// Adaptive value of the committed flow under the attack.
    value: f64,
    /// Net value of the committed flow before any attack.
    committed_value: f64,
    /// Adjustment-engine evaluations the search spent.
    evaluations: usize,
}

fn main() -> ExitCode {
    env_logger::init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Gen(args) => gen(args),
        Command::Solve(args) => solve(args),
        Command::Baseline(args) => baseline(args),
        Command::Attack(args) => attack(args),
        Command::Experiment(args) => experiment(args),
        Command::Verify(args) => verify(args),
    }
}

fn gen(args: GenArgs) -> anyhow::Result<ExitCode> {
    let params = RandomNetParams {
        nodes: args.nodes,
        density: args.density,
        capacity_range: (args.capacity_range[0], args.capacity_range[1]),
        cost_range: (args.cost_range[0], args.cost_range[1]),
        seed: args.seed,
    };
    let net = generate_random(&params)?;
    let text = write_native(&net);
    match &args.out {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn solve(args: SolveArgs) -> anyhow::Result<ExitCode> {
    let net = args.instance.load()?;
    let config = GameConfig {
        mode: AdversaryMode::from(args.adversary),
        adversary: args.instance.adversary_config(),
        max_iterations: args.max_iterations,
        convergence_tolerance: args.tol,
        ..GameConfig::new(args.instance.gamma)
    };
    let trace = solve_game(&net, &config)?;
    log::info!(
        "{}: {:?} after {} iterations, objective {}",
        trace.instance,
        trace.convergence_reason,
        trace.iterations.len(),
        trace.final_objective
    );
    let text = match args.output.format {
        OutputFormat::Json => {
            let mut text = serde_json::to_string_pretty(&trace)?;
            text.push('\n');
            text
        }
        OutputFormat::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            writer.write_record(["k", "V_U", "V_L", "attack"])?;
            for it in &trace.iterations {
                writer.write_record(&[
                    it.index.to_string(),
                    format!("{:.9}", round_objective(it.upper_value)),
                    format!("{:.9}", round_objective(it.lower_value)),
                    join_edges(&it.attack),
                ])?;
            }
            let bytes =
                writer.into_inner().map_err(|e| anyhow::anyhow!("csv flush failed: {e}"))?;
            String::from_utf8(bytes)?
        }
    };
    args.output.emit(&text)?;
    Ok(ExitCode::SUCCESS)
}

fn baseline(args: BaselineArgs) -> anyhow::Result<ExitCode> {
    use ramf_core::admin::{aamf_flow, osp_flow, rf_flow};

    let net = args.instance.load()?;
    let gamma = args.instance.gamma;
    let mode = AdversaryMode::from(args.adversary);
    let adversary = args.instance.adversary_config();
    let (label, committed) = match args.method {
        BaselineMethod::Mf => ("mf", max_flow_min_cost(&net)),
        BaselineMethod::Osp => ("osp", osp_flow(&net, gamma, mode, &adversary).recovered),
        BaselineMethod::Rf => ("rf", rf_flow(&net, gamma)?.flow),
        BaselineMethod::Aamf => ("aamf", aamf_flow(&net, gamma)?.flow),
    };
    let eval = evaluate_flow(&net, &committed, gamma, mode, &adversary);
    let row = Row {
        instance: net.name().to_string(),
        seed: args.instance.seed.to_string(),
        approach: label.to_string(),
        objective: Some(eval.objective),
        lost_flow: Some(eval.lost_flow),
        gain_pct: None,
        iterations: None,
        runtime_ms: None,
        note: method_label(eval.method).to_string(),
        attacked_mean_flow: eval.attacked_mean_flow,
        intermediate_residual: eval.intermediate_residual,
        flow: Some(committed),
        attack: Some(eval.attack),
    };
    let text = match args.output.format {
        OutputFormat::Json => {
            let mut text = serde_json::to_string_pretty(&row)?;
            text.push('\n');
            text
        }
        OutputFormat::Csv => render_csv(std::slice::from_ref(&row))?,
    };
    args.output.emit(&text)?;
    Ok(ExitCode::SUCCESS)
}

fn attack(args: AttackArgs) -> anyhow::Result<ExitCode> {
    let net = args.instance.load()?;
    let gamma = args.instance.gamma;
    let adversary = args.instance.adversary_config();
    let committed = max_flow_min_cost(&net);
    let result: AttackResult = match args.mode {
        AttackSearch::Exact => exact_attack(&net, &committed, gamma, adversary.enumeration_cap)?,
        AttackSearch::Greedy => greedy_attack(&net, &committed, gamma),
        AttackSearch::Accel => accelerated_greedy_attack(&net, &committed, gamma),
        AttackSearch::Partition => partitioning_attack(&net, &committed, gamma, &adversary),
        AttackSearch::Best => {
            best_attack(&net, &committed, gamma, AdversaryMode::Exact, &adversary)
        }
    };
    let report = AttackReport {
        instance: net.name().to_string(),
        gamma,
        method: method_label(result.method).to_string(),
        attack_edges: result
            .attack
            .edges()
            .iter()
            .map(|&e| {
                let edge = net.edge(e);
                format!("{}->{}", net.node_name(edge.tail), net.node_name(edge.head))
            })
            .collect(),
        value: result.value,
        committed_value: round_objective(committed.net_value(&net)),
        evaluations: result.evaluations,
        attack: result.attack,
    };
    let text = match args.output.format {
        OutputFormat::Json => {
            let mut text = serde_json::to_string_pretty(&report)?;
            text.push('\n');
            text
        }
        OutputFormat::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            writer.write_record([
                "instance",
                "gamma",
                "method",
                "attack",
                "value",
                "committed_value",
                "evaluations",
            ])?;
            writer.write_record(&[
                report.instance.clone(),
                report.gamma.to_string(),
                report.method.clone(),
                join_edges(&report.attack),
                format!("{:.9}", report.value),
                format!("{:.9}", report.committed_value),
                report.evaluations.to_string(),
            ])?;
            let bytes =
                writer.into_inner().map_err(|e| anyhow::anyhow!("csv flush failed: {e}"))?;
            String::from_utf8(bytes)?
        }
    };
    args.output.emit(&text)?;
    Ok(ExitCode::SUCCESS)
}

fn experiment(args: ExperimentArgs) -> anyhow::Result<ExitCode> {
    let text = fs::read_to_string(&args.config)
        .with_context(|| format!("cannot read {}", args.config.display()))?;
    let config: ExperimentConfig = serde_json::from_str(&text)
        .with_context(|| format!("invalid experiment config {}", args.config.display()))?;
    let outcome = run_experiment(&config)?;
    if config.csv_out.is_none() && config.json_out.is_none() {
        print!("{}", outcome.csv);
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(args: VerifyArgs) -> anyhow::Result<ExitCode> {
    let net = args.instance.load()?;
    let config = GameConfig {
        mode: AdversaryMode::from(args.adversary),
        adversary: args.instance.adversary_config(),
        ..GameConfig::new(args.instance.gamma)
    };
    let trace = solve_game(&net, &config)?;
    let report = verify_maximin(
        &net,
        args.instance.gamma,
        &trace.final_flow,
        trace.final_objective,
        &config.adversary,
    )?;
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    match &args.out {
        Some(path) => fs::write(path, &text)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(if report.maximin_optimal {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

/// Joins attack edge ids as `0;3;7` for CSV cells.
fn join_edges(attack: &Attack) -> String {
    attack
        .edges()
        .iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join(";")
}
