//! Linear-program formulation of the post-attack adjustment, kept as an
//! independent reference implementation.
//!
//! [`super::adjusted_flow`] solves the same problem combinatorially; the
//! test-suite checks both routes against each other on fixtures and on
//! randomized instances. Production code paths use the combinatorial engine;
//! this one exists so a disagreement is loud and diagnosable.

use crate::lp::{solve_lp, LpProblem, Relation, VarId};
use crate::model::{reroute_eligibility, Attack, FlowScenario, Network};
use crate::round_objective;

/// The assembled program plus the variable handles needed to read it back.
pub struct ReferenceAdjustedLp {
    pub problem: LpProblem,
    pub flow_vars: Vec<VarId>,
    pub excess_vars: Vec<VarId>,
}

/// Builds the adjustment LP: maximize delivered value minus tolls on units
/// above committed levels, over weakly conserved flows bounded by both the
/// post-attack capacity and the rerouting relaxation.
pub fn reference_adjusted_flow_lp(
    net: &Network,
    committed: &FlowScenario,
    attack: &Attack,
) -> ReferenceAdjustedLp {
    let ret = net.return_edge();
    let eligible = reroute_eligibility(net, attack);
    let mut lp = LpProblem::new();

    let mut flow_vars = Vec::with_capacity(ret + 1);
    for (e, &may_reroute) in eligible.iter().enumerate().take(ret) {
        let edge = net.edge(e);
        let cap_limit = if attack.contains(e) { edge.post_attack_capacity } else { edge.capacity };
        let reroute_limit = if may_reroute { edge.capacity } else { committed.get(e) };
        flow_vars.push(lp.add_var_named(
            format!("y{e}"),
            0.0,
            0.0,
            cap_limit.min(reroute_limit),
        ));
    }
    // Return edge: delivery is worth 1 per unit and capped at the committed
    // throughput (it is never attackable and never a reroute target).
    flow_vars.push(lp.add_var_named("y_ret".into(), 1.0, 0.0, committed.throughput(net)));

    let mut excess_vars = Vec::with_capacity(ret);
    for e in 0..ret {
        let edge = net.edge(e);
        excess_vars.push(lp.add_var_named(format!("z{e}"), -edge.cost, 0.0, f64::INFINITY));
    }

    // Weak conservation everywhere but the source: inflow >= outflow.
    for v in 0..net.node_count() {
        if v == net.source() {
            continue;
        }
        let mut coeffs = Vec::new();
        for &e in net.in_edges(v) {
            coeffs.push((flow_vars[e], 1.0));
        }
        for &e in net.out_edges(v) {
            coeffs.push((flow_vars[e], -1.0));
        }
        lp.add_row(Relation::Ge, 0.0, &coeffs);
    }

    // Excess above the committed level pays the toll: z_e >= y_e - committed.
    for e in 0..ret {
        lp.add_row(
            Relation::Ge,
            -committed.get(e),
            &[(excess_vars[e], 1.0), (flow_vars[e], -1.0)],
        );
    }

    ReferenceAdjustedLp { problem: lp, flow_vars, excess_vars }
}

/// Solves the reference LP and returns the rounded objective.
pub fn reference_adjusted_flow_value(
    net: &Network,
    committed: &FlowScenario,
    attack: &Attack,
) -> f64 {
    let lp = reference_adjusted_flow_lp(net, committed, attack);
    let sol = solve_lp(&lp.problem);
    debug_assert!(sol.is_optimal(), "adjustment LP must be feasible and bounded");
    round_objective(sol.objective)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engines::adjusted_flow;
    use crate::samples;

    #[test]
    fn lp_matches_engine_on_diamond_singletons() {
        let net = samples::small_diamond();
        let committed = samples::small_diamond_committed_flow(&net);
        for e in 0..net.return_edge() {
            let attack = Attack::new([e]);
            let via_lp = reference_adjusted_flow_value(&net, &committed, &attack);
            let via_engine = adjusted_flow(&net, &committed, &attack).objective;
            assert!(
                (via_lp - via_engine).abs() < 1e-7,
                "edge {e}: lp {via_lp} vs engine {via_engine}"
            );
        }
    }

    #[test]
    fn lp_matches_engine_on_witness_pairs() {
        let (net, committed) = samples::modularity_witness();
        let ids: Vec<usize> = (0..net.return_edge()).collect();
        for &a in &ids {
            for &b in &ids {
                if a >= b {
                    continue;
                }
                let attack = Attack::new([a, b]);
                let via_lp = reference_adjusted_flow_value(&net, &committed, &attack);
                let via_engine = adjusted_flow(&net, &committed, &attack).objective;
                assert!(
                    (via_lp - via_engine).abs() < 1e-7,
                    "attack {{{a},{b}}}: lp {via_lp} vs engine {via_engine}"
                );
            }
        }
    }
}
