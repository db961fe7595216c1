//! The iterative administrator-versus-adversary game.
//!
//! Each iteration the administrator commits the flow that is robust against
//! every attack pooled so far (an upper bound on the achievable guarantee),
//! and the adversary answers with its best attack on that flow (a lower
//! bound). New attacks join the pool and the bounds squeeze together. The
//! loop stops when the bounds meet, when a player repeats itself, or at an
//! iteration cap.

use std::time::Instant;

use serde::Serialize;

use crate::admin::{aamf_flow, osp_flow, rf_flow, robust_flow, AdminError, AttackPool};
use crate::adversary::{
    best_attack, exact_attack, AdversaryConfig, AdversaryMode, AttackMethod,
};
use crate::engines::{adaptive_value, max_flow_min_cost};
use crate::model::{attack_space_size, Attack, FlowScenario, Network};
use crate::{DEFAULT_MAX_GAME_ITERATIONS, EPS_CONVERGENCE, EPS_FLOW_REPEAT};

/// Tuning for one game run.
#[derive(Debug, Clone)]
pub struct GameConfig {
    /// Adversary budget: the maximum number of edges one attack destroys.
    pub gamma: usize,
    /// How the adversary searches for its best response.
    pub mode: AdversaryMode,
    /// Knobs passed through to the attack searches.
    pub adversary: AdversaryConfig,
    /// Hard stop on the number of iterations.
    pub max_iterations: usize,
    /// The bounds count as met when they are within this tolerance.
    pub convergence_tolerance: f64,
    /// Two committed flows within this max-norm distance count as repeats.
    pub flow_repeat_tolerance: f64,
}

impl GameConfig {
    /// An exact-adversary game with default tolerances and caps.
    pub fn new(gamma: usize) -> GameConfig {
        GameConfig {
            gamma,
            mode: AdversaryMode::Exact,
            adversary: AdversaryConfig::default(),
            max_iterations: DEFAULT_MAX_GAME_ITERATIONS,
            convergence_tolerance: EPS_CONVERGENCE,
            flow_repeat_tolerance: EPS_FLOW_REPEAT,
        }
    }

    /// Same defaults but with the heuristic adversary.
    pub fn heuristic(gamma: usize) -> GameConfig {
        GameConfig { mode: AdversaryMode::Heuristic, ..GameConfig::new(gamma) }
    }
}

/// Why the game stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvergenceReason {
    /// Upper and lower bounds met within the tolerance.
    BoundsMet,
    /// The administrator re-committed a flow already executed earlier.
    FlowRepeated,
    /// The adversary repeated its immediately preceding attack.
    AttackRepeated,
    /// The iteration cap was reached; the result is the best seen so far.
    IterationCap,
}

/// One round of the game.
#[derive(Debug, Clone, Serialize)]
pub struct IterationRecord {
    /// 1-based iteration index.
    #[serde(rename = "k")]
    pub index: usize,
    /// The administrator's guarantee against the pool before this round's
    /// attack joined it.
    #[serde(rename = "V_U")]
    pub upper_value: f64,
    /// What the adversary's best response actually held the flow to.
    #[serde(rename = "V_L")]
    pub lower_value: f64,
    /// The adversary's best response this round.
    pub attack: Attack,
    /// The flow the administrator committed this round.
    pub flow: FlowScenario,
    /// Which search produced the attack.
    #[serde(skip)]
    pub method: AttackMethod,
    /// Adjustment-engine evaluations the attack search spent.
    #[serde(skip)]
    pub evaluations: usize,
    /// Wall time of the whole round in milliseconds.
    #[serde(skip)]
    pub wall_time_ms: f64,
}

/// Full record of a game run.
#[derive(Debug, Clone, Serialize)]
pub struct GameTrace {
    /// Name of the instance the game ran on.
    pub instance: String,
    /// Adversary budget.
    pub gamma: usize,
    /// Every round in order.
    pub iterations: Vec<IterationRecord>,
    /// Why the run stopped.
    pub convergence_reason: ConvergenceReason,
    /// The certified worst-case value of the final flow.
    pub final_objective: f64,
    /// The flow the run settled on.
    #[serde(skip)]
    pub final_flow: FlowScenario,
    /// The worst attack found against the final flow.
    #[serde(skip)]
    pub final_attack: Attack,
    /// Total adjustment-engine evaluations across all rounds.
    #[serde(skip)]
    pub total_evaluations: usize,
}

/// Errors from the game loop.
#[derive(Debug, thiserror::Error)]
pub enum GameError {
    #[error(transparent)]
    Admin(#[from] AdminError),
}

/// Runs the iterative game and returns its full trace.
///
/// Against an exact adversary, every termination reason certifies the final
/// objective: met bounds do so directly; a repeated attack means the
/// administrator already defends it optimally; and a repeated flow inherits
/// the certificate of the iteration it repeats. Against heuristics the
/// bounds may stay apart, and the final objective is only as good as the
/// attacks the heuristics discovered.
pub fn solve_game(net: &Network, config: &GameConfig) -> Result<GameTrace, GameError> {
    assert!(config.max_iterations >= 1, "the game needs at least one iteration");
    let mut pool = AttackPool::new();
    let mut iterations: Vec<IterationRecord> = Vec::new();
    let mut reason = ConvergenceReason::IterationCap;

    for index in 1..=config.max_iterations {
        let started = Instant::now();
        let admin = robust_flow(net, &pool)?;

        // A re-committed flow would draw the same best response as before,
        // so replay that iteration's attack instead of searching again.
        if let Some(earlier) = iterations
            .iter()
            .position(|it| it.flow.linf_distance(&admin.flow) <= config.flow_repeat_tolerance)
        {
            let repeat = &iterations[earlier];
            iterations.push(IterationRecord {
                index,
                upper_value: admin.value,
                lower_value: repeat.lower_value,
                attack: repeat.attack.clone(),
                flow: admin.flow,
                method: repeat.method,
                evaluations: 0,
                wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
            });
            reason = ConvergenceReason::FlowRepeated;
            break;
        }

        let response = best_attack(net, &admin.flow, config.gamma, config.mode, &config.adversary);
        iterations.push(IterationRecord {
            index,
            upper_value: admin.value,
            lower_value: response.value,
            attack: response.attack,
            flow: admin.flow,
            method: response.method,
            evaluations: response.evaluations,
            wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
        });
        let latest = iterations.last().expect("just pushed");

        if (latest.upper_value - latest.lower_value).abs() <= config.convergence_tolerance {
            reason = ConvergenceReason::BoundsMet;
            break;
        }
        if iterations.len() >= 2
            && iterations[iterations.len() - 2].attack == latest.attack
        {
            reason = ConvergenceReason::AttackRepeated;
            break;
        }
        pool.insert(latest.attack.clone());
    }

    // Terminal reasons certify the last round; hitting the cap falls back to
    // the round with the best guaranteed value.
    let chosen = match reason {
        ConvergenceReason::IterationCap => iterations
            .iter()
            .enumerate()
            .max_by(|(i, a), (j, b)| {
                a.lower_value.total_cmp(&b.lower_value).then(j.cmp(i))
            })
            .map(|(i, _)| i)
            .expect("at least one iteration ran"),
        _ => iterations.len() - 1,
    };

    Ok(GameTrace {
        instance: net.name().to_string(),
        gamma: config.gamma,
        final_objective: iterations[chosen].lower_value,
        final_flow: iterations[chosen].flow.clone(),
        final_attack: iterations[chosen].attack.clone(),
        total_evaluations: iterations.iter().map(|it| it.evaluations).sum(),
        iterations,
        convergence_reason: reason,
    })
}

/// How one baseline's committed flow fares against its own worst attack.
#[derive(Debug, Clone, Serialize)]
pub struct BaselineComparison {
    /// Baseline name: `mf`, `osp`, `rf` or `aamf`.
    pub name: &'static str,
    /// Worst-case adaptive value of the baseline's committed flow.
    pub worst_value: f64,
    /// Whether the verified flow does at least as well.
    pub dominated: bool,
}

/// Outcome of [`verify_maximin`].
#[derive(Debug, Clone, Serialize)]
pub struct MaximinReport {
    /// The verified flow satisfies capacities and conservation.
    pub flow_valid: bool,
    /// Whether the worst attacks were found by exhaustive enumeration. When
    /// the attack space exceeds the enumeration cap the report relies on
    /// heuristics and only refutes, never certifies.
    pub certified_exact: bool,
    /// The worst attack found against the verified flow — the counterexample
    /// when the claim fails.
    pub worst_attack: Attack,
    /// Adaptive value of the verified flow under that attack.
    pub worst_value: f64,
    /// The value the caller claimed for the flow.
    pub claimed_value: f64,
    /// `|worst_value - claimed_value|` within the convergence tolerance.
    pub value_consistent: bool,
    /// Worst-case values of the four baseline strategies.
    pub baselines: Vec<BaselineComparison>,
    /// All checks passed: valid flow, consistent value, every baseline
    /// dominated.
    pub maximin_optimal: bool,
}

/// Checks that `flow` is a maximin-optimal commitment worth `claimed_value`:
/// its exact worst-case adaptive value must match the claim, and no baseline
/// strategy (max-flow, observe-and-re-plan, discounted flow, balanced cut
/// flow) may guarantee more. Falls back to heuristic attack search — and
/// says so in the report — when the attack space exceeds the enumeration
/// cap.
pub fn verify_maximin(
    net: &Network,
    gamma: usize,
    flow: &FlowScenario,
    claimed_value: f64,
    config: &AdversaryConfig,
) -> Result<MaximinReport, GameError> {
    let certified_exact = attack_space_size(net, gamma) <= config.enumeration_cap;
    let worst = |candidate: &FlowScenario| {
        if certified_exact {
            let result = exact_attack(net, candidate, gamma, config.enumeration_cap)
                .expect("space size was checked against the cap");
            (result.attack, result.value)
        } else {
            let result = best_attack(net, candidate, gamma, AdversaryMode::Heuristic, config);
            (result.attack, result.value)
        }
    };

    let flow_valid = crate::model::validate_flow(net, flow).is_valid();
    let (worst_attack, worst_value) = worst(flow);
    let value_consistent = (worst_value - claimed_value).abs() <= EPS_CONVERGENCE;

    let mf = max_flow_min_cost(net);
    let osp = osp_flow(net, gamma, config_mode(certified_exact), config);
    let rf = rf_flow(net, gamma)?;
    let aamf = aamf_flow(net, gamma)?;
    let baselines: Vec<BaselineComparison> = [
        ("mf", mf),
        ("osp", osp.recovered),
        ("rf", rf.flow),
        ("aamf", aamf.flow),
    ]
    .into_iter()
    .map(|(name, committed)| {
        let (_, value) = worst(&committed);
        BaselineComparison {
            name,
            worst_value: value,
            dominated: worst_value >= value - EPS_CONVERGENCE,
        }
    })
    .collect();

    let maximin_optimal =
        flow_valid && value_consistent && baselines.iter().all(|b| b.dominated);
    Ok(MaximinReport {
        flow_valid,
        certified_exact,
        worst_attack,
        worst_value,
        claimed_value,
        value_consistent,
        baselines,
        maximin_optimal,
    })
}

fn config_mode(exact: bool) -> AdversaryMode {
    if exact {
        AdversaryMode::Exact
    } else {
        AdversaryMode::Heuristic
    }
}

/// Re-scores `flow` against `attack` with the adjustment engine; exposed so
/// callers can sanity-check trace rows without reaching into the engines.
pub fn score_attack(net: &Network, flow: &FlowScenario, attack: &Attack) -> f64 {
    adaptive_value(net, flow, attack)
}
