//! The experiment runner: sweep instances x seeds x approaches, score every
//! committed flow against the same adversary, and render the results as CSV
//! and JSON tables.
//!
//! Output is deterministic: rows follow config order, every numeric cell is
//! rounded to the shared 1e-9 grid before formatting, and wall-clock timings
//! stay out of the files unless explicitly requested. Rerunning a config
//! must reproduce its output files byte for byte.

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use ramf_core::admin::{aamf_flow, osp_flow, rf_flow};
use ramf_core::adversary::{AdversaryConfig, AdversaryMode};
use ramf_core::engines::max_flow_min_cost;
use ramf_core::game::{solve_game, ConvergenceReason, GameConfig};
use ramf_core::model::{generate_random, Attack, FlowScenario, Network, RandomNetParams};
use ramf_core::round_objective;

use crate::formats::{load_instance, InstanceFormat, LoadOptions};
use crate::metrics::{evaluate_flow, gain_pct, method_label};

/// A whole experiment: which instances to run, under what adversary, and
/// where the tables go.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Instances in the order their rows should appear.
    pub instances: Vec<InstanceSpec>,
    /// Adversary budget.
    pub gamma: usize,
    /// How flows are attacked when scored.
    #[serde(default)]
    pub adversary: AdversaryChoice,
    /// Post-attack residual capacity override for every attackable edge.
    #[serde(default)]
    pub me: Option<f64>,
    /// One full pass per seed; generated instances and drawn capacities
    /// change with it.
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    /// Strategies to evaluate, in row order.
    #[serde(default = "default_approaches")]
    pub approaches: Vec<Approach>,
    /// Write the CSV table here.
    #[serde(default)]
    pub csv_out: Option<PathBuf>,
    /// Write the JSON rows (with flows and attacks) here.
    #[serde(default)]
    pub json_out: Option<PathBuf>,
    /// Record wall-clock runtimes. Off by default because timings vary
    /// between runs and would break byte-identical output.
    #[serde(default)]
    pub timings: bool,
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

fn default_approaches() -> Vec<Approach> {
    vec![Approach::Mf, Approach::Osp, Approach::Rf, Approach::Aamf, Approach::Ramf]
}

/// One instance source: either a file on disk or generator parameters.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum InstanceSpec {
    /// Identified by a required `path` key.
    File(FileSpec),
    /// Identified by required `nodes` and `density` keys.
    Generated(GeneratorSpec),
}

/// An instance read from disk.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileSpec {
    pub path: PathBuf,
    /// Parse as this format instead of sniffing.
    #[serde(default)]
    pub format: Option<InstanceFormat>,
    /// Source node override, by name.
    #[serde(default)]
    pub source: Option<String>,
    /// Terminal node override, by name.
    #[serde(default)]
    pub sink: Option<String>,
}

/// An instance drawn from the random generator.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub nodes: usize,
    pub density: f64,
    /// Row label; defaults to `n<nodes>-d<density>`.
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default = "default_capacity_range")]
    pub capacity_range: (f64, f64),
    #[serde(default = "default_cost_range")]
    pub cost_range: (f64, f64),
}

fn default_capacity_range() -> (f64, f64) {
    (1.0, 20.0)
}

fn default_cost_range() -> (f64, f64) {
    (0.01, 0.1)
}

/// Adversary mode, as spelled in config files and on the command line.
#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum AdversaryChoice {
    #[default]
    Exact,
    Heuristic,
}

impl From<AdversaryChoice> for AdversaryMode {
    fn from(choice: AdversaryChoice) -> AdversaryMode {
        match choice {
            AdversaryChoice::Exact => AdversaryMode::Exact,
            AdversaryChoice::Heuristic => AdversaryMode::Heuristic,
        }
    }
}

/// The five flow strategies the harness can score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Approach {
    /// Plain max-flow/min-cost, adversary ignored.
    Mf,
    /// Observe the worst attack on the naive plan, then re-plan.
    Osp,
    /// Robust flow hedging against losing its fullest edges.
    Rf,
    /// Adjustable robust flow bounded by the committed levels.
    Aamf,
    /// The iterative-game solution.
    Ramf,
}

impl Approach {
    pub fn label(self) -> &'static str {
        match self {
            Approach::Mf => "mf",
            Approach::Osp => "osp",
            Approach::Rf => "rf",
            Approach::Aamf => "aamf",
            Approach::Ramf => "ramf",
        }
    }
}

/// One table row. CSV carries the scalar columns; JSON additionally logs the
/// committed flow and the attack it was scored against so results can be
/// re-checked offline.
#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub instance: String,
    /// Seed number, or `avg` for per-instance averages.
    pub seed: String,
    pub approach: String,
    pub objective: Option<f64>,
    pub lost_flow: Option<f64>,
    pub gain_pct: Option<f64>,
    pub iterations: Option<usize>,
    pub runtime_ms: Option<u128>,
    /// Convergence reason, attack method, or error message.
    pub note: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attacked_mean_flow: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intermediate_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flow: Option<FlowScenario>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attack: Option<Attack>,
}

impl Row {
    fn error(instance: &str, seed: &str, approach: &str, message: String) -> Row {
        Row {
            instance: instance.to_string(),
            seed: seed.to_string(),
            approach: approach.to_string(),
            objective: None,
            lost_flow: None,
            gain_pct: None,
            iterations: None,
            runtime_ms: None,
            note: message,
            attacked_mean_flow: None,
            intermediate_residual: None,
            flow: None,
            attack: None,
        }
    }
}

/// Everything a run produces: the rows plus both rendered tables.
#[derive(Debug)]
pub struct ExperimentOutcome {
    pub rows: Vec<Row>,
    pub csv: String,
    pub json: String,
}

/// Runs the whole sweep and writes any configured output files.
pub fn run_experiment(config: &ExperimentConfig) -> anyhow::Result<ExperimentOutcome> {
    let mut rows = Vec::new();
    for spec in &config.instances {
        let start = rows.len();
        for &seed in &config.seeds {
            run_cell(config, spec, seed, &mut rows);
        }
        if config.seeds.len() > 1 {
            append_averages(&mut rows, start, config);
        }
    }

    let csv = render_csv(&rows)?;
    let json = {
        let mut text = serde_json::to_string_pretty(&rows)?;
        text.push('\n');
        text
    };
    if let Some(path) = &config.csv_out {
        fs::write(path, &csv)
            .map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))?;
    }
    if let Some(path) = &config.json_out {
        fs::write(path, &json)
            .map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))?;
    }
    Ok(ExperimentOutcome { rows, csv, json })
}

/// Computes every requested approach for one (instance, seed) pair.
fn run_cell(config: &ExperimentConfig, spec: &InstanceSpec, seed: u64, rows: &mut Vec<Row>) {
    let seed_label = seed.to_string();
    let net = match realize_instance(spec, seed, config.me) {
        Ok(net) => net,
        Err(err) => {
            let name = spec_label(spec);
            rows.push(Row::error(&name, &seed_label, "error", err.to_string()));
            return;
        }
    };

    let mode = AdversaryMode::from(config.adversary);
    let adversary = AdversaryConfig { seed, ..AdversaryConfig::default() };
    let gamma = config.gamma;

    // The game solution is computed first so baseline rows can report their
    // gain against it, whatever the configured row order.
    let ramf = if config.approaches.contains(&Approach::Ramf) {
        let game = GameConfig {
            mode,
            adversary: adversary.clone(),
            ..GameConfig::new(gamma)
        };
        let clock = Instant::now();
        match solve_game(&net, &game) {
            Ok(trace) => Some((trace, clock.elapsed().as_millis())),
            Err(err) => {
                rows.push(Row::error(net.name(), &seed_label, "ramf", err.to_string()));
                None
            }
        }
    } else {
        None
    };
    let ramf_objective = ramf.as_ref().map(|(trace, _)| {
        evaluate_flow(&net, &trace.final_flow, gamma, mode, &adversary).objective
    });

    for &approach in &config.approaches {
        let clock = Instant::now();
        let (committed, iterations, note) = match approach {
            Approach::Mf => (max_flow_min_cost(&net), None, None),
            Approach::Osp => {
                let osp = osp_flow(&net, gamma, mode, &adversary);
                (osp.recovered, None, None)
            }
            Approach::Rf => match rf_flow(&net, gamma) {
                Ok(rf) => (rf.flow, None, None),
                Err(err) => {
                    rows.push(Row::error(net.name(), &seed_label, "rf", err.to_string()));
                    continue;
                }
            },
            Approach::Aamf => match aamf_flow(&net, gamma) {
                Ok(aamf) => (aamf.flow, None, None),
                Err(err) => {
                    rows.push(Row::error(net.name(), &seed_label, "aamf", err.to_string()));
                    continue;
                }
            },
            Approach::Ramf => match &ramf {
                Some((trace, _)) => (
                    trace.final_flow.clone(),
                    Some(trace.iterations.len()),
                    Some(reason_label(trace.convergence_reason).to_string()),
                ),
                None => continue, // its error row is already recorded
            },
        };

        let eval = evaluate_flow(&net, &committed, gamma, mode, &adversary);
        let gain = match (approach, ramf_objective) {
            (Approach::Ramf, _) | (_, None) => None,
            (_, Some(best)) => {
                gain_pct(best, eval.objective, net.max_attackable_capacity(), gamma)
            }
        };
        let mut runtime = clock.elapsed().as_millis();
        if let (Approach::Ramf, Some((_, solve_ms))) = (approach, &ramf) {
            runtime += solve_ms;
        }
        rows.push(Row {
            instance: net.name().to_string(),
            seed: seed_label.clone(),
            approach: approach.label().to_string(),
            objective: Some(eval.objective),
            lost_flow: Some(eval.lost_flow),
            gain_pct: gain,
            iterations,
            runtime_ms: config.timings.then_some(runtime),
            note: note.unwrap_or_else(|| method_label(eval.method).to_string()),
            attacked_mean_flow: eval.attacked_mean_flow,
            intermediate_residual: eval.intermediate_residual,
            flow: Some(committed),
            attack: Some(eval.attack),
        });
    }
}

/// Appends one `avg` row per approach over the seed rows pushed since
/// `start`. Error rows are left out of the means.
fn append_averages(rows: &mut Vec<Row>, start: usize, config: &ExperimentConfig) {
    for &approach in &config.approaches {
        let cells: Vec<&Row> = rows[start..]
            .iter()
            .filter(|r| r.approach == approach.label() && r.objective.is_some())
            .collect();
        if cells.is_empty() {
            continue;
        }
        let instance = cells[0].instance.clone();
        let mean = |extract: fn(&Row) -> Option<f64>| -> Option<f64> {
            let picked: Vec<f64> = cells.iter().filter_map(|r| extract(r)).collect();
            (picked.len() == cells.len())
                .then(|| round_objective(picked.iter().sum::<f64>() / picked.len() as f64))
        };
        rows.push(Row {
            instance,
            seed: "avg".to_string(),
            approach: approach.label().to_string(),
            objective: mean(|r| r.objective),
            lost_flow: mean(|r| r.lost_flow),
            gain_pct: mean(|r| r.gain_pct),
            iterations: None,
            runtime_ms: None,
            note: format!("avg of {} seeds", cells.len()),
            attacked_mean_flow: None,
            intermediate_residual: None,
            flow: None,
            attack: None,
        });
    }
}

/// Builds the network for one (spec, seed) cell.
fn realize_instance(spec: &InstanceSpec, seed: u64, me: Option<f64>) -> anyhow::Result<Network> {
    match spec {
        InstanceSpec::File(file) => {
            let options = LoadOptions {
                format: file.format,
                source: file.source.clone(),
                sink: file.sink.clone(),
                seed,
                post_attack_capacity: me,
            };
            load_instance(&file.path, &options)
        }
        InstanceSpec::Generated(gen) => {
            let params = RandomNetParams {
                nodes: gen.nodes,
                density: gen.density,
                capacity_range: gen.capacity_range,
                cost_range: gen.cost_range,
                seed,
            };
            let net = generate_random(&params)?.with_name(&spec_label(spec));
            Ok(match me {
                Some(m) => net.with_residual_capacity(m),
                None => net,
            })
        }
    }
}

/// Stable instance label used in rows (also for load failures, where the
/// network name is unavailable).
fn spec_label(spec: &InstanceSpec) -> String {
    match spec {
        InstanceSpec::File(file) => file
            .path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("instance")
            .to_string(),
        InstanceSpec::Generated(gen) => gen
            .name
            .clone()
            .unwrap_or_else(|| format!("n{}-d{}", gen.nodes, gen.density)),
    }
}

fn reason_label(reason: ConvergenceReason) -> &'static str {
    match reason {
        ConvergenceReason::BoundsMet => "bounds_met",
        ConvergenceReason::FlowRepeated => "flow_repeated",
        ConvergenceReason::AttackRepeated => "attack_repeated",
        ConvergenceReason::IterationCap => "iteration_cap",
    }
}

/// Renders rows in the frozen CSV layout. Blank cells stand for absent
/// values; decimals print with nine digits, which re-parse to the exact
/// stored value because every number lives on the 1e-9 rounding grid.
pub fn render_csv(rows: &[Row]) -> anyhow::Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record([
        "instance",
        "seed",
        "approach",
        "objective",
        "lost_flow",
        "gain_pct",
        "iterations",
        "runtime_ms",
        "note",
    ])?;
    for row in rows {
        let cells: [String; 9] = [
            row.instance.clone(),
            row.seed.clone(),
            row.approach.clone(),
            decimal(row.objective),
            decimal(row.lost_flow),
            decimal(row.gain_pct),
            row.iterations.map(|i| i.to_string()).unwrap_or_default(),
            row.runtime_ms.map(|ms| ms.to_string()).unwrap_or_default(),
            row.note.clone(),
        ];
        writer.write_record(&cells)?;
    }
    let bytes = writer.into_inner().map_err(|e| anyhow::anyhow!("csv flush failed: {e}"))?;
    Ok(String::from_utf8(bytes)?)
}

fn decimal(value: Option<f64>) -> String {
    value.map(|v| format!("{:.9}", round_objective(v))).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_defaults_fill_in_seeds_and_approaches() {
        let config: ExperimentConfig = serde_json::from_str(
            r#"{ "instances": [ { "nodes": 5, "density": 0.5 } ], "gamma": 1 }"#,
        )
        .unwrap();
        assert_eq!(config.seeds, vec![0]);
        assert_eq!(config.approaches.len(), 5);
        assert_eq!(config.adversary, AdversaryChoice::Exact);
        assert!(!config.timings);
    }

    #[test]
    fn unknown_approaches_are_rejected_at_parse_time() {
        let err = serde_json::from_str::<ExperimentConfig>(
            r#"{ "instances": [], "gamma": 1, "approaches": ["mf", "bogus"] }"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("bogus"), "got: {err}");
    }

    #[test]
    fn a_missing_file_becomes_an_error_row_and_the_run_continues() {
        let config: ExperimentConfig = serde_json::from_str(
            r#"{
                "instances": [
                    { "path": "/nonexistent/net.txt" },
                    { "nodes": 4, "density": 0.9, "name": "tiny" }
                ],
                "gamma": 1,
                "approaches": ["mf"]
            }"#,
        )
        .unwrap();
        let outcome = run_experiment(&config).unwrap();
        assert_eq!(outcome.rows.len(), 2);
        assert_eq!(outcome.rows[0].approach, "error");
        assert_eq!(outcome.rows[0].objective, None);
        assert!(outcome.rows[0].note.contains("cannot read"));
        assert_eq!(outcome.rows[1].instance, "tiny");
        assert!(outcome.rows[1].objective.is_some());
    }

    #[test]
    fn rows_follow_config_order_and_average_after_each_instance() {
        let config: ExperimentConfig = serde_json::from_str(
            r#"{
                "instances": [ { "nodes": 5, "density": 0.8, "name": "a" } ],
                "gamma": 1,
                "seeds": [1, 2],
                "approaches": ["mf", "ramf"]
            }"#,
        )
        .unwrap();
        let outcome = run_experiment(&config).unwrap();
        let labels: Vec<(String, String)> = outcome
            .rows
            .iter()
            .map(|r| (r.seed.clone(), r.approach.clone()))
            .collect();
        assert_eq!(
            labels,
            vec![
                ("1".into(), "mf".into()),
                ("1".into(), "ramf".into()),
                ("2".into(), "mf".into()),
                ("2".into(), "ramf".into()),
                ("avg".into(), "mf".into()),
                ("avg".into(), "ramf".into()),
            ]
        );
        // The single-instance game dominates its baseline on both seeds, so
        // the averaged objectives keep the same order.
        let avg_mf = outcome.rows[4].objective.unwrap();
        let avg_ramf = outcome.rows[5].objective.unwrap();
        assert!(avg_ramf >= avg_mf - 1e-9, "ramf {avg_ramf} vs mf {avg_mf}");
        // Baseline rows carry the gain against the game's flow. The game row
        // leaves it blank.
        assert!(outcome.rows[0].gain_pct.is_some());
        assert!(outcome.rows[1].gain_pct.is_none());
    }

    #[test]
    fn reruns_render_byte_identical_tables() {
        let config_text = r#"{
            "instances": [ { "nodes": 6, "density": 0.6 } ],
            "gamma": 2,
            "seeds": [3, 4],
            "approaches": ["mf", "rf", "ramf"]
        }"#;
        let first = run_experiment(&serde_json::from_str(config_text).unwrap()).unwrap();
        let second = run_experiment(&serde_json::from_str(config_text).unwrap()).unwrap();
        assert_eq!(first.csv, second.csv);
        assert_eq!(first.json, second.json);
        assert!(first.csv.starts_with("instance,seed,approach,"));
    }

    #[test]
    fn decimal_cells_reparse_to_the_stored_value() {
        let config: ExperimentConfig = serde_json::from_str(
            r#"{ "instances": [ { "nodes": 5, "density": 0.7 } ], "gamma": 1 }"#,
        )
        .unwrap();
        let outcome = run_experiment(&config).unwrap();
        let mut reader = csv::Reader::from_reader(outcome.csv.as_bytes());
        for (record, row) in reader.records().map(|r| r.unwrap()).zip(&outcome.rows) {
            let objective: f64 = record[3].parse().unwrap();
            assert_eq!(objective, row.objective.unwrap());
        }
    }
}
