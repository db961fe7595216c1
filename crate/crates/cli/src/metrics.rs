//! Post-hoc scoring of a committed flow: its worst discovered attack, the
//! value that survives, and the behavioral measurements reported alongside
//! (how much flow the attacked edges carried, how much slack the plan left
//! on intermediate edges).

use ramf_core::adversary::{best_attack, AdversaryConfig, AdversaryMode, AttackMethod};
use ramf_core::engines::adjusted_flow;
use ramf_core::model::{Attack, FlowScenario, Network};
use ramf_core::{round_objective, EPS_FLOW};

/// Everything measured about one committed flow under one adversary budget.
#[derive(Debug, Clone)]
pub struct Evaluation {
    /// The worst attack the configured search found.
    pub attack: Attack,
    /// Which search produced it.
    pub method: AttackMethod,
    /// Adaptive value of the flow under that attack (delivery minus
    /// rerouting toll minus the committed routing cost).
    pub objective: f64,
    /// Units sent from the source that no longer reach the terminal once the
    /// flow is adjusted to the attack. Never negative.
    pub lost_flow: f64,
    /// Mean committed flow on the attacked edges; absent when the best
    /// attack destroys nothing.
    pub attacked_mean_flow: Option<f64>,
    /// Mean spare capacity on flow-carrying edges not incident to the source
    /// or terminal; absent when no edge qualifies.
    pub intermediate_residual: Option<f64>,
    /// Adjustment-engine evaluations the attack search spent.
    pub evaluations: usize,
}

/// Scores `committed` against its worst attack under `gamma` failures.
pub fn evaluate_flow(
    net: &Network,
    committed: &FlowScenario,
    gamma: usize,
    mode: AdversaryMode,
    config: &AdversaryConfig,
) -> Evaluation {
    let found = best_attack(net, committed, gamma, mode, config);
    let adjusted = adjusted_flow(net, committed, &found.attack);
    let lost = committed.sent_from_source(net) - adjusted.flow.throughput(net);
    Evaluation {
        objective: found.value,
        lost_flow: round_objective(lost.max(0.0)),
        attacked_mean_flow: attacked_mean_flow(committed, &found.attack),
        intermediate_residual: intermediate_residual(net, committed),
        attack: found.attack,
        method: found.method,
        evaluations: found.evaluations,
    }
}

/// Percentage gain of one objective over another, normalised by the largest
/// attackable capacity times the budget. Undefined (None) for a zero budget.
pub fn gain_pct(objective: f64, baseline: f64, max_capacity: f64, gamma: usize) -> Option<f64> {
    if gamma == 0 || max_capacity <= 0.0 {
        return None;
    }
    Some(round_objective(
        (objective - baseline) * 100.0 / (max_capacity * gamma as f64),
    ))
}

/// Short machine-friendly name for an attack-search method, used in report
/// notes.
pub fn method_label(method: AttackMethod) -> &'static str {
    match method {
        AttackMethod::Exact => "exact",
        AttackMethod::Greedy => "greedy",
        AttackMethod::LazyGreedy => "lazy_greedy",
        AttackMethod::Partitioned => "partitioned",
    }
}

fn attacked_mean_flow(committed: &FlowScenario, attack: &Attack) -> Option<f64> {
    if attack.is_empty() {
        return None;
    }
    let total: f64 = attack.edges().iter().map(|&e| committed.get(e)).sum();
    Some(round_objective(total / attack.len() as f64))
}

fn intermediate_residual(net: &Network, committed: &FlowScenario) -> Option<f64> {
    let (source, terminal) = (net.source(), net.terminal());
    let mut total = 0.0;
    let mut count = 0usize;
    for e in 0..net.return_edge() {
        let edge = net.edge(e);
        let endpoints = [edge.tail, edge.head];
        if endpoints.contains(&source) || endpoints.contains(&terminal) {
            continue;
        }
        if committed.get(e) <= EPS_FLOW {
            continue;
        }
        total += edge.capacity - committed.get(e);
        count += 1;
    }
    (count > 0).then(|| round_objective(total / count as f64))
}
