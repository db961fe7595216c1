//! The ten acceptance checks for this workspace, run in order with one
//! PASS/FAIL line printed per criterion. They cover: agreement between the
//! combinatorial adjustment engine and its LP twin, maximin dominance of the
//! iterated game's flow over the four baselines, convergence behaviour of
//! the game loop, heuristic attack quality against exact enumeration,
//! equivalence of the lazy and plain greedy searches plus the single-edge
//! gain bound, the modularity counterexamples, the sorting identity behind
//! the regret formulation's anticipated loss, closed-form edge cases,
//! parsing and solving the bundled reference datasets, and byte-stable
//! experiment output.
//!
//! The dataset criterion alone runs two full heuristic games (one on a
//! 96-node grid) and dominates the runtime at roughly twelve minutes; use
//! `--nocapture` to watch the lines appear as each criterion finishes.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use ramf_cli::experiment::{run_experiment, ExperimentConfig};
use ramf_cli::formats::{load_instance, LoadOptions};
use ramf_core::admin::{aamf_flow, osp_flow, rf_flow};
use ramf_core::adversary::{
    accelerated_greedy_attack, attack_value, best_attack, exact_attack, greedy_attack,
    AdversaryConfig, AdversaryMode,
};
use ramf_core::engines::{adjusted_flow, max_flow_min_cost, reference_adjusted_flow_value};
use ramf_core::game::{solve_game, ConvergenceReason, GameConfig, GameTrace};
use ramf_core::model::{generate_random, Attack, Network, RandomNetParams};
use ramf_core::{samples, DEFAULT_ENUMERATION_CAP};

type Verdict = Result<String, String>;

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn random_net(nodes: usize, density: f64, seed: u64) -> Result<Network, String> {
    generate_random(&RandomNetParams {
        nodes,
        density,
        capacity_range: (1.0, 20.0),
        cost_range: (0.005, 0.05),
        seed,
    })
    .map_err(|err| format!("generator failed for seed {seed}: {err}"))
}

/// Worst-case value of a committed flow under full enumeration.
fn exact_value(net: &Network, flow: &ramf_core::model::FlowScenario, gamma: usize) -> Result<f64, String> {
    exact_attack(net, flow, gamma, DEFAULT_ENUMERATION_CAP)
        .map(|result| result.value)
        .map_err(|err| format!("exact search failed on {}: {err}", net.name()))
}

/// Criterion 1: the augmenting-path adjustment engine and the LP oracle
/// agree (within 1e-6) on the post-attack objective across 50 seeded
/// networks and a spread of attacks, inside a minute.
fn criterion_1() -> Verdict {
    let started = Instant::now();
    let mut compared = 0usize;
    for i in 0..50u64 {
        let nodes = 6 + (i as usize % 7);
        let density = 0.4 + 0.008 * i as f64;
        let net = random_net(nodes, density, 100 + i)?;
        let committed = max_flow_min_cost(&net);

        let edges = net.attackable_edges();
        let mut attacks = vec![Attack::empty()];
        attacks.extend(edges.iter().take(3).map(|&e| Attack::new([e])));
        if edges.len() >= 2 {
            attacks.push(Attack::new([edges[0], edges[1]]));
        }

        for attack in &attacks {
            let engine = adjusted_flow(&net, &committed, attack).objective;
            let oracle = reference_adjusted_flow_value(&net, &committed, attack);
            if (engine - oracle).abs() > 1e-6 {
                return Err(format!(
                    "engine {engine} vs LP {oracle} on {} under {attack:?}",
                    net.name()
                ));
            }
            compared += 1;
        }
    }
    let elapsed = started.elapsed();
    if elapsed > Duration::from_secs(60) {
        return Err(format!("50 networks took {elapsed:?}, budget is one minute"));
    }
    Ok(format!("{compared} adjustments agreed within 1e-6 in {elapsed:.2?}"))
}

/// One exact-mode game run kept around so the dominance and convergence
/// criteria share the same 20 instances.
struct ExactCase {
    net: Network,
    gamma: usize,
    trace: GameTrace,
}

/// 20 seeded instances of at most 15 nodes. The budget cycles through
/// {1, 2, 3}, scaled down on edge-heavy networks so full enumeration stays
/// cheap: every instance is still solved by the exact adversary.
fn build_exact_cases() -> Result<Vec<ExactCase>, String> {
    let densities = [0.4, 0.5, 0.6, 0.7, 0.8];
    (0..20u64)
        .map(|i| {
            let nodes = 6 + (i as usize % 10);
            let net = random_net(nodes, densities[i as usize % 5], 1000 + i)?;
            let edges = net.attackable_edges().len();
            let gamma = if edges <= 30 {
                3
            } else if edges <= 70 {
                2
            } else {
                1
            };
            let trace = solve_game(&net, &GameConfig::new(gamma))
                .map_err(|err| format!("game failed on {}: {err}", net.name()))?;
            Ok(ExactCase { net, gamma, trace })
        })
        .collect()
}

/// Criterion 2: on every shared instance the game's final flow is worth at
/// least as much under exact worst-case attack as each baseline's flow
/// (margin no worse than -1e-6), inside ten minutes including the solves.
fn criterion_2(cases: &[ExactCase], solve_time: Duration) -> Verdict {
    let started = Instant::now();
    let mut budgets = [0usize; 3];
    for case in cases {
        budgets[case.gamma - 1] += 1;
        let net = &case.net;
        let gamma = case.gamma;
        let ours = exact_value(net, &case.trace.final_flow, gamma)?;

        let adversary = AdversaryConfig::default();
        let baselines = [
            ("mf", max_flow_min_cost(net)),
            ("osp", osp_flow(net, gamma, AdversaryMode::Exact, &adversary).recovered),
            (
                "rf",
                rf_flow(net, gamma)
                    .map_err(|err| format!("rf failed on {}: {err}", net.name()))?
                    .flow,
            ),
            (
                "aamf",
                aamf_flow(net, gamma)
                    .map_err(|err| format!("aamf failed on {}: {err}", net.name()))?
                    .flow,
            ),
        ];
        for (label, flow) in &baselines {
            let theirs = exact_value(net, flow, gamma)?;
            if ours - theirs < -1e-6 {
                return Err(format!(
                    "{label} beats the game flow on {} (gamma {gamma}): {theirs} vs {ours}",
                    net.name()
                ));
            }
        }
    }
    let elapsed = solve_time + started.elapsed();
    if elapsed > Duration::from_secs(600) {
        return Err(format!("dominance sweep took {elapsed:?}, budget is ten minutes"));
    }
    Ok(format!(
        "game flow dominated all four baselines on 20 instances (budgets 1/2/3 used {}x/{}x/{}x) in {elapsed:.2?}",
        budgets[0], budgets[1], budgets[2]
    ))
}

/// Criterion 3: every shared instance converges (no iteration-cap stop)
/// within 25 rounds, the guarantee never increases between rounds, and the
/// final bounds agree to 1e-6.
fn criterion_3(cases: &[ExactCase]) -> Verdict {
    let mut total_rounds = 0usize;
    for case in cases {
        let trace = &case.trace;
        let name = case.net.name();
        if trace.convergence_reason == ConvergenceReason::IterationCap {
            return Err(format!("{name} stopped on the iteration cap"));
        }
        if trace.iterations.len() > 25 {
            return Err(format!("{name} needed {} rounds", trace.iterations.len()));
        }
        for pair in trace.iterations.windows(2) {
            if pair[1].upper_value > pair[0].upper_value + 1e-9 {
                return Err(format!(
                    "guarantee rose on {name}: {} then {}",
                    pair[0].upper_value, pair[1].upper_value
                ));
            }
        }
        let last = trace.iterations.last().expect("games run at least one round");
        let gap = (last.upper_value - last.lower_value).abs();
        if gap > 1e-6 + 1e-9 {
            return Err(format!("final gap {gap:.3e} on {name}"));
        }
        total_rounds += trace.iterations.len();
    }
    Ok(format!(
        "20 games converged in {total_rounds} rounds total, monotone guarantees, final gaps <= 1e-6"
    ))
}

/// Criterion 4: across 20 instances the heuristic attack's mean relative
/// shortfall against exact enumeration is at most 10%, inside ten minutes.
fn criterion_4() -> Verdict {
    let started = Instant::now();
    let mut gaps = Vec::with_capacity(20);
    for i in 0..20u64 {
        let nodes = 6 + (i as usize % 7);
        let density = 0.45 + 0.015 * i as f64;
        let gamma = 1 + (i as usize % 3);
        let net = random_net(nodes, density, 2000 + i)?;
        let committed = max_flow_min_cost(&net);

        let exact = exact_value(&net, &committed, gamma)?;
        let config = AdversaryConfig { seed: 2000 + i, ..AdversaryConfig::default() };
        let heuristic = best_attack(&net, &committed, gamma, AdversaryMode::Heuristic, &config).value;

        if heuristic < exact - 1e-9 {
            return Err(format!(
                "heuristic found a stronger attack than enumeration on {}: {heuristic} vs {exact}",
                net.name()
            ));
        }
        let scale = exact.abs().max(1e-9);
        gaps.push((heuristic - exact).max(0.0) / scale);
    }
    let mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
    let elapsed = started.elapsed();
    if mean > 0.10 {
        return Err(format!("mean relative gap {:.2}% exceeds 10%", mean * 100.0));
    }
    if elapsed > Duration::from_secs(600) {
        return Err(format!("gap sweep took {elapsed:?}, budget is ten minutes"));
    }
    Ok(format!(
        "mean heuristic gap {:.2}% (worst {:.2}%) over 20 instances in {elapsed:.2?}",
        mean * 100.0,
        gaps.iter().fold(0.0f64, |a, &b| a.max(b)) * 100.0
    ))
}

/// Criterion 5: on 100 seeded instances the lazy greedy returns exactly the
/// plain greedy's attack with no more evaluations, and every candidate's
/// marginal gain stays within the current flow on that edge (the single-edge
/// bound the lazy variant relies on).
fn criterion_5() -> Verdict {
    let started = Instant::now();
    let mut saved = 0usize;
    let mut spent = 0usize;
    for i in 0..100u64 {
        let nodes = 6 + (i as usize % 5);
        let density = 0.5 + 0.003 * i as f64;
        let gamma = 1 + (i as usize % 3);
        let net = random_net(nodes, density, 3000 + i)?;
        let committed = max_flow_min_cost(&net);

        let plain = greedy_attack(&net, &committed, gamma);
        let lazy = accelerated_greedy_attack(&net, &committed, gamma);
        if lazy.attack != plain.attack {
            return Err(format!(
                "lazy greedy picked {:?} but plain picked {:?} on {}",
                lazy.attack,
                plain.attack,
                net.name()
            ));
        }
        if (lazy.value - plain.value).abs() > 1e-9 {
            return Err(format!(
                "greedy values diverge on {}: {} vs {}",
                net.name(),
                lazy.value,
                plain.value
            ));
        }
        if lazy.evaluations > plain.evaluations {
            return Err(format!(
                "lazy greedy spent {} evaluations vs plain {} on {}",
                lazy.evaluations,
                plain.evaluations,
                net.name()
            ));
        }
        saved += plain.evaluations - lazy.evaluations;
        spent += plain.evaluations;

        // Re-walk the greedy path and check the bound the laziness rests on:
        // removing one more edge can cost at most what currently flows on it.
        let mut chosen = Vec::new();
        for _ in 0..gamma {
            let current = Attack::new(chosen.iter().copied());
            let adjusted = adjusted_flow(&net, &committed, &current);
            let current_value = attack_value(&net, &committed, &current);
            let mut best: Option<(f64, ramf_core::model::EdgeId)> = None;
            for &e in net.attackable_edges() {
                if chosen.contains(&e) {
                    continue;
                }
                let mut next = chosen.clone();
                next.push(e);
                let value = attack_value(&net, &committed, &Attack::new(next));
                let gain = current_value - value;
                let cap = adjusted.flow.get(e);
                if gain > cap + 1e-6 {
                    return Err(format!(
                        "gain {gain} from cutting edge {e} exceeds its flow {cap} on {}",
                        net.name()
                    ));
                }
                if best.map(|(bv, _)| value < bv).unwrap_or(true) {
                    best = Some((value, e));
                }
            }
            match best {
                Some((_, e)) => chosen.push(e),
                None => break,
            }
        }
    }
    let elapsed = started.elapsed();
    Ok(format!(
        "lazy greedy matched plain greedy 100/100 saving {saved}/{spent} evaluations, gain bound never violated, in {elapsed:.2?}"
    ))
}

/// Criterion 6: the damage function is neither submodular nor supermodular;
/// the bundled witness network violates each strictly.
fn criterion_6() -> Verdict {
    let (net, committed) = samples::modularity_witness();
    let value = |edges: &[usize]| attack_value(&net, &committed, &Attack::new(edges.iter().copied()));

    // Marginal damage of cutting edge 4 on top of growing attack sets.
    let on_empty = value(&[]) - value(&[4]);
    let on_three = value(&[3]) - value(&[3, 4]);
    let on_three_five = value(&[3, 5]) - value(&[3, 4, 5]);

    // Submodularity would force the marginal to shrink as the set grows.
    if on_three + 1e-9 >= on_three_five {
        return Err(format!(
            "no submodularity violation: gain {on_three} on {{3}} vs {on_three_five} on {{3,5}}"
        ));
    }
    // Supermodularity would force it to grow.
    if on_empty <= on_three + 1e-9 {
        return Err(format!(
            "no supermodularity violation: gain {on_empty} on {{}} vs {on_three} on {{3}}"
        ));
    }
    Ok(format!(
        "marginal damage of edge 4: {on_empty} on {{}}, {on_three} on {{3}}, {on_three_five} on {{3,5}} — both directions strictly violated"
    ))
}

/// Criterion 7: the regret formulation's anticipated loss equals the sum of
/// the budget's largest committed edge flows (its dual reading) to 1e-6 on
/// 20 instances.
fn criterion_7() -> Verdict {
    for i in 0..20u64 {
        let nodes = 6 + (i as usize % 9);
        let density = 0.4 + 0.02 * i as f64;
        let gamma = 1 + (i as usize % 3);
        let net = random_net(nodes, density, 4000 + i)?;
        let rf = rf_flow(&net, gamma).map_err(|err| format!("rf failed on {}: {err}", net.name()))?;

        let mut flows: Vec<f64> = net
            .attackable_edges()
            .iter()
            .map(|&e| rf.flow.get(e))
            .collect();
        flows.sort_by(|a, b| b.total_cmp(a));
        let top: f64 = flows.iter().take(gamma).sum();
        if (rf.anticipated_loss - top).abs() > 1e-6 {
            return Err(format!(
                "anticipated loss {} vs top-{gamma} flow sum {top} on {}",
                rf.anticipated_loss,
                net.name()
            ));
        }
    }
    Ok("anticipated loss matched the sorted top-flow sum on 20 instances".to_string())
}

/// Criterion 8: closed-form cases. A lone fully-removable edge is worth
/// exactly zero against any positive budget; a zero budget reproduces the
/// plain max-flow objective exactly; and the documented diamond fixture's
/// committed flow is worth exactly 4.67 against one removal.
fn criterion_8() -> Verdict {
    let lone = samples::single_edge(5.0, 0.05);
    let trace = solve_game(&lone, &GameConfig::new(1))
        .map_err(|err| format!("single-edge game failed: {err}"))?;
    if trace.final_objective != 0.0 {
        return Err(format!("single-edge value under budget 1 is {}, not 0", trace.final_objective));
    }

    let unattacked = solve_game(&lone, &GameConfig::new(0))
        .map_err(|err| format!("budget-0 game failed: {err}"))?;
    let plain = attack_value(&lone, &max_flow_min_cost(&lone), &Attack::empty());
    if unattacked.final_objective != plain {
        return Err(format!(
            "budget-0 game returned {} but the plain max flow is worth {plain}",
            unattacked.final_objective
        ));
    }

    let diamond = samples::small_diamond();
    let committed = samples::small_diamond_committed_flow(&diamond);
    let worst = exact_value(&diamond, &committed, 1)?;
    if (worst - 4.67).abs() > 1e-9 {
        return Err(format!("diamond fixture is worth {worst} under one removal, expected 4.67"));
    }
    Ok(format!(
        "single edge -> 0 exactly, budget 0 -> {plain} exactly, diamond fixture -> {worst}"
    ))
}

/// Criterion 9: both bundled datasets parse to their documented sizes and a
/// full heuristic game completes on each within a combined 15 minutes.
fn criterion_9() -> Verdict {
    let started = Instant::now();
    let options = LoadOptions::default();

    let abilene = load_instance(&data_dir().join("abilene.txt"), &options)
        .map_err(|err| format!("abilene failed to load: {err}"))?;
    // The loader appends the terminal-to-source return arc, hence the -1.
    if abilene.node_count() != 14 || abilene.edge_count() - 1 != 22 {
        return Err(format!(
            "abilene parsed to {} nodes / {} links, expected 14 / 22",
            abilene.node_count(),
            abilene.edge_count() - 1
        ));
    }
    let elist = load_instance(&data_dir().join("elist96.max"), &options)
        .map_err(|err| format!("elist96 failed to load: {err}"))?;
    if elist.node_count() != 96 || elist.edge_count() - 1 != 348 {
        return Err(format!(
            "elist96 parsed to {} nodes / {} edges, expected 96 / 348",
            elist.node_count(),
            elist.edge_count() - 1
        ));
    }

    let abilene_trace = solve_game(&abilene, &GameConfig::heuristic(2))
        .map_err(|err| format!("abilene game failed: {err}"))?;
    let elist_trace = solve_game(&elist, &GameConfig::heuristic(3))
        .map_err(|err| format!("elist96 game failed: {err}"))?;

    let elapsed = started.elapsed();
    if elapsed > Duration::from_secs(900) {
        return Err(format!("dataset games took {elapsed:?}, budget is 15 minutes"));
    }
    Ok(format!(
        "abilene 14/22 solved to {} in {} rounds, elist96 96/348 solved to {} in {} rounds, {elapsed:.2?} total",
        abilene_trace.final_objective,
        abilene_trace.iterations.len(),
        elist_trace.final_objective,
        elist_trace.iterations.len()
    ))
}

/// Criterion 10: rerunning an experiment configuration reproduces the CSV
/// and JSON tables byte for byte.
fn criterion_10() -> Verdict {
    let config: ExperimentConfig = serde_json::from_value(serde_json::json!({
        "instances": [ { "nodes": 8, "density": 0.5 } ],
        "gamma": 1,
        "seeds": [0, 1]
    }))
    .map_err(|err| format!("config failed to parse: {err}"))?;

    let first = run_experiment(&config).map_err(|err| format!("first run failed: {err}"))?;
    let second = run_experiment(&config).map_err(|err| format!("second run failed: {err}"))?;
    if first.csv != second.csv {
        return Err("CSV output differed between reruns".to_string());
    }
    if first.json != second.json {
        return Err("JSON output differed between reruns".to_string());
    }
    Ok(format!(
        "two runs produced identical tables ({} bytes CSV, {} bytes JSON)",
        first.csv.len(),
        first.json.len()
    ))
}

#[test]
fn acceptance() {
    let mut results: Vec<(usize, &str, Verdict)> = Vec::new();

    results.push((1, "adjustment engine matches the LP oracle", criterion_1()));

    let solve_clock = Instant::now();
    let cases = build_exact_cases();
    let solve_time = solve_clock.elapsed();
    match &cases {
        Ok(cases) => {
            results.push((2, "game flow dominates the baselines", criterion_2(cases, solve_time)));
            results.push((3, "exact games converge cleanly", criterion_3(cases)));
        }
        Err(err) => {
            results.push((2, "game flow dominates the baselines", Err(err.clone())));
            results.push((3, "exact games converge cleanly", Err(err.clone())));
        }
    }

    results.push((4, "heuristic attacks stay near exact", criterion_4()));
    results.push((5, "lazy greedy is exact and never over-gains", criterion_5()));
    results.push((6, "damage is neither sub- nor supermodular", criterion_6()));
    results.push((7, "anticipated loss equals the top-flow sum", criterion_7()));
    results.push((8, "closed-form edge cases hold exactly", criterion_8()));
    results.push((9, "reference datasets parse and solve in time", criterion_9()));
    results.push((10, "experiment output is byte-stable", criterion_10()));

    let mut failures = 0usize;
    for (number, label, verdict) in &results {
        match verdict {
            Ok(detail) => println!("criterion {number:>2} ({label}): PASS — {detail}"),
            Err(detail) => {
                failures += 1;
                println!("criterion {number:>2} ({label}): FAIL — {detail}");
            }
        }
    }
    assert_eq!(failures, 0, "{failures} acceptance criteria failed");
}
