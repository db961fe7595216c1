//! Baseline commitment strategies the robust flow is measured against.

use super::AdminError;
use crate::adversary::{best_attack, AdversaryConfig, AdversaryMode};
use crate::engines::{max_flow_min_cost, min_cut, MinCut};
use crate::lp::{solve_lp, LpProblem, Relation, VarId};
use crate::model::{Attack, FlowScenario, Network};
use crate::round_objective;

/// Result of [`osp_flow`]: observe the worst attack, then re-plan.
#[derive(Debug, Clone)]
pub struct OspResult {
    /// The naive commitment: a max-flow/min-cost plan for the intact
    /// network.
    pub committed: FlowScenario,
    /// The worst attack found against that commitment.
    pub attack: Attack,
    /// A fresh max-flow/min-cost plan on the damaged network.
    pub recovered: FlowScenario,
    /// Net value (delivery minus routing cost) of the recovery.
    pub value: f64,
    /// Adjustment-engine evaluations the attack search spent.
    pub evaluations: usize,
}

/// Commits the plain max-flow/min-cost plan, lets the adversary pick its
/// worst attack against it, and then re-optimises from scratch on whatever
/// capacity survives. This models an operator with perfect hindsight but no
/// foresight, so it bounds what pure reaction can achieve.
pub fn osp_flow(
    net: &Network,
    gamma: usize,
    mode: AdversaryMode,
    config: &AdversaryConfig,
) -> OspResult {
    let committed = max_flow_min_cost(net);
    let found = best_attack(net, &committed, gamma, mode, config);
    let damaged = net.with_attack_applied(found.attack.edges());
    let recovered = max_flow_min_cost(&damaged);
    let value = round_objective(recovered.net_value(&damaged));
    OspResult {
        committed,
        attack: found.attack,
        recovered,
        value,
        evaluations: found.evaluations,
    }
}

/// Result of [`rf_flow`].
#[derive(Debug, Clone)]
pub struct RfResult {
    /// The committed flow (routing costs are ignored by this strategy).
    pub flow: FlowScenario,
    /// The anticipated loss term: what an adversary removing the `gamma`
    /// highest-flow edges would take.
    pub anticipated_loss: f64,
    /// Throughput minus anticipated loss at the optimum.
    pub objective: f64,
}

/// Commits a flow that maximises throughput minus the flow an adversary
/// would erase by destroying the `gamma` fullest edges. The erased amount is
/// modelled by its linear dual — a per-edge overflow variable plus a shared
/// threshold paid `gamma` times — so the whole trade-off stays one linear
/// program. With `gamma = 0` the loss term vanishes and the program is plain
/// max-flow.
pub fn rf_flow(net: &Network, gamma: usize) -> Result<RfResult, AdminError> {
    let ret = net.return_edge();
    let mut lp = LpProblem::new();
    let flow_vars: Vec<VarId> = (0..net.edge_count())
        .map(|e| {
            let upper = if e == ret { f64::INFINITY } else { net.edge(e).capacity };
            let objective = if e == ret { 1.0 } else { 0.0 };
            lp.add_var_named(format!("x{e}"), objective, 0.0, upper)
        })
        .collect();
    let overflow_vars: Vec<VarId> = net
        .attackable_edges()
        .iter()
        .map(|&e| lp.add_var_named(format!("over{e}"), -1.0, 0.0, f64::INFINITY))
        .collect();
    let threshold = lp.add_var_named("threshold".to_string(), -(gamma as f64), 0.0, f64::INFINITY);

    for v in 0..net.node_count() {
        if v == net.source() {
            continue;
        }
        let mut coeffs: Vec<(VarId, f64)> = Vec::new();
        coeffs.extend(net.in_edges(v).iter().map(|&e| (flow_vars[e], 1.0)));
        coeffs.extend(net.out_edges(v).iter().map(|&e| (flow_vars[e], -1.0)));
        lp.add_row(Relation::Eq, 0.0, &coeffs);
    }
    for (&e, &over) in net.attackable_edges().iter().zip(&overflow_vars) {
        lp.add_row(Relation::Ge, 0.0, &[(over, 1.0), (threshold, 1.0), (flow_vars[e], -1.0)]);
    }

    let solution = solve_lp(&lp);
    if !solution.is_optimal() {
        return Err(AdminError::LpFailed { program: "discounted flow", status: solution.status });
    }
    let flow = FlowScenario::from_values(flow_vars.iter().map(|&v| solution.values[v]).collect());
    let overflow_total: f64 = overflow_vars.iter().map(|&v| solution.values[v]).sum();
    let anticipated_loss =
        round_objective(overflow_total + gamma as f64 * solution.values[threshold]);
    Ok(RfResult {
        flow,
        anticipated_loss,
        objective: round_objective(solution.objective),
    })
}

/// Result of [`aamf_flow`].
#[derive(Debug, Clone)]
pub struct AamfResult {
    /// The committed flow, with the return edge carrying the terminal's
    /// surplus.
    pub flow: FlowScenario,
    /// The minimum cut the flow is balanced across.
    pub cut: MinCut,
    /// Net cut throughput minus `gamma` times the largest edge flow.
    pub objective: f64,
}

/// Commits a flow that pushes value across a minimum cut while keeping every
/// edge's flow under a common ceiling that is charged `gamma` times — so
/// spreading flow thinly across the cut beats concentrating it on edges an
/// adversary would pick off. Routing costs are ignored.
pub fn aamf_flow(net: &Network, gamma: usize) -> Result<AamfResult, AdminError> {
    let cut = min_cut(net);
    let ret = net.return_edge();
    let mut source_side = vec![false; net.node_count()];
    for &v in &cut.source_side {
        source_side[v] = true;
    }

    let mut lp = LpProblem::new();
    let flow_vars: Vec<VarId> = (0..ret)
        .map(|e| {
            let edge = net.edge(e);
            let objective = if source_side[edge.tail] && !source_side[edge.head] {
                1.0
            } else if !source_side[edge.tail] && source_side[edge.head] {
                -1.0
            } else {
                0.0
            };
            lp.add_var_named(format!("x{e}"), objective, 0.0, edge.capacity)
        })
        .collect();
    let ceiling = lp.add_var_named("ceiling".to_string(), -(gamma as f64), 0.0, f64::INFINITY);

    for v in 0..net.node_count() {
        if v == net.source() || v == net.terminal() {
            continue;
        }
        let mut coeffs: Vec<(VarId, f64)> = Vec::new();
        coeffs.extend(
            net.in_edges(v).iter().filter(|&&e| e != ret).map(|&e| (flow_vars[e], 1.0)),
        );
        coeffs.extend(
            net.out_edges(v).iter().filter(|&&e| e != ret).map(|&e| (flow_vars[e], -1.0)),
        );
        lp.add_row(Relation::Eq, 0.0, &coeffs);
    }
    for &e in net.attackable_edges() {
        lp.add_row(Relation::Le, 0.0, &[(flow_vars[e], 1.0), (ceiling, -1.0)]);
    }

    let solution = solve_lp(&lp);
    if !solution.is_optimal() {
        return Err(AdminError::LpFailed { program: "balanced cut flow", status: solution.status });
    }
    let mut values: Vec<f64> = flow_vars.iter().map(|&v| solution.values[v]).collect();
    let terminal_surplus: f64 = net
        .in_edges(net.terminal())
        .iter()
        .filter(|&&e| e != ret)
        .map(|&e| values[e])
        .sum::<f64>()
        - net
            .out_edges(net.terminal())
            .iter()
            .filter(|&&e| e != ret)
            .map(|&e| values[e])
            .sum::<f64>();
    values.push(terminal_surplus.max(0.0));
    Ok(AamfResult {
        flow: FlowScenario::from_values(values),
        cut,
        objective: round_objective(solution.objective),
    })
}
