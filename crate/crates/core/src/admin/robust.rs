//! The robust committed-flow program: maximise the worst-case adaptive
//! value over a pool of known attacks.

use super::{AdminError, AttackPool};
use crate::lp::{solve_lp, LpProblem, Relation, VarId};
use crate::model::{reroute_eligibility, Attack, FlowScenario, Network};
use crate::round_objective;

/// The adjustment the robust program plans for one pooled attack.
#[derive(Debug, Clone)]
pub struct RobustScenario {
    /// The pooled attack this scenario defends against.
    pub attack: Attack,
    /// Adaptive value of the committed flow under this attack: delivery
    /// minus rerouting tolls minus the committed routing cost.
    pub value: f64,
    /// The planned post-attack flow (including its delivery on the return
    /// edge).
    pub flow: FlowScenario,
    /// Flow sent above the committed amount per physical edge; only
    /// reroute-eligible edges can be positive.
    pub rerouted: Vec<f64>,
}

/// Result of [`robust_flow`].
#[derive(Debug, Clone)]
pub struct RobustFlowResult {
    /// The committed flow.
    pub flow: FlowScenario,
    /// The guaranteed adaptive value: no pooled attack can push the
    /// committed flow below this. With an empty pool this is simply the
    /// committed net value.
    pub value: f64,
    /// One planned adjustment per pooled attack, in pool order.
    pub scenarios: Vec<RobustScenario>,
}

/// Commits the flow that maximises the worst-case adaptive value across all
/// pooled attacks.
///
/// One linear program couples the committed flow with an adjustment plan per
/// pooled attack: the plan may keep flow anywhere below the committed level
/// for free, while flow above it is limited to reroute-eligible edges and
/// pays the edge cost again. The objective lifts a floor variable under
/// every plan's value. An empty pool degenerates to the max-flow/min-cost
/// program.
///
/// At the optimum the floor equals the exact adaptive value of the worst
/// pooled attack — binding scenarios cannot be adjusted any better, or the
/// floor would rise.
pub fn robust_flow(net: &Network, pool: &AttackPool) -> Result<RobustFlowResult, AdminError> {
    let ret = net.return_edge();
    let mut lp = LpProblem::new();

    // Committed flow variables, one per edge including the return edge. With
    // an empty pool they carry the whole objective (delivery minus routing
    // cost); otherwise the floor variable below is the only objective term.
    let committed_vars: Vec<VarId> = (0..net.edge_count())
        .map(|e| {
            let upper = if e == ret { f64::INFINITY } else { net.edge(e).capacity };
            let objective = if !pool.is_empty() {
                0.0
            } else if e == ret {
                1.0
            } else {
                -net.edge(e).cost
            };
            lp.add_var_named(format!("x{e}"), objective, 0.0, upper)
        })
        .collect();
    for v in 0..net.node_count() {
        if v == net.source() {
            continue;
        }
        let mut coeffs: Vec<(VarId, f64)> = Vec::new();
        coeffs.extend(net.in_edges(v).iter().map(|&e| (committed_vars[e], 1.0)));
        coeffs.extend(net.out_edges(v).iter().map(|&e| (committed_vars[e], -1.0)));
        lp.add_row(Relation::Eq, 0.0, &coeffs);
    }

    if pool.is_empty() {
        let solution = solve_lp(&lp);
        if !solution.is_optimal() {
            return Err(AdminError::LpFailed { program: "robust flow", status: solution.status });
        }
        let flow = FlowScenario::from_values(
            committed_vars.iter().map(|&v| solution.values[v]).collect(),
        );
        return Ok(RobustFlowResult {
            flow,
            value: round_objective(solution.objective),
            scenarios: Vec::new(),
        });
    }

    // One adjustment plan per pooled attack, tied to the committed flow.
    let floor = lp.add_var_named("floor".to_string(), 1.0, 0.0, f64::INFINITY);
    let mut scenario_vars: Vec<(Vec<VarId>, Vec<Option<VarId>>)> = Vec::new();
    for (k, attack) in pool.attacks().iter().enumerate() {
        let eligible = reroute_eligibility(net, attack);
        let adjusted_vars: Vec<VarId> = (0..net.edge_count())
            .map(|e| {
                let upper = if e == ret {
                    f64::INFINITY
                } else if attack.contains(e) {
                    net.edge(e).post_attack_capacity
                } else {
                    net.edge(e).capacity
                };
                lp.add_var_named(format!("y{k}_{e}"), 0.0, 0.0, upper)
            })
            .collect();
        let rerouted_vars: Vec<Option<VarId>> = (0..net.edge_count())
            .map(|e| {
                eligible[e].then(|| lp.add_var_named(format!("z{k}_{e}"), 0.0, 0.0, f64::INFINITY))
            })
            .collect();

        // Post-attack flow may pool at a node but never appear from nowhere.
        for v in 0..net.node_count() {
            if v == net.source() {
                continue;
            }
            let mut coeffs: Vec<(VarId, f64)> = Vec::new();
            coeffs.extend(net.in_edges(v).iter().map(|&e| (adjusted_vars[e], 1.0)));
            coeffs.extend(net.out_edges(v).iter().map(|&e| (adjusted_vars[e], -1.0)));
            lp.add_row(Relation::Ge, 0.0, &coeffs);
        }
        // Ineligible edges (and the return edge, capping delivery) stay at or
        // below the committed flow; eligible edges pay for the excess.
        for e in 0..net.edge_count() {
            match rerouted_vars[e] {
                None => {
                    lp.add_row(
                        Relation::Le,
                        0.0,
                        &[(adjusted_vars[e], 1.0), (committed_vars[e], -1.0)],
                    );
                }
                Some(z) => {
                    lp.add_row(
                        Relation::Ge,
                        0.0,
                        &[(z, 1.0), (adjusted_vars[e], -1.0), (committed_vars[e], 1.0)],
                    );
                }
            }
        }

        // The floor sits below this scenario's value: delivery minus the
        // committed routing cost minus rerouting tolls.
        let mut coeffs: Vec<(VarId, f64)> = vec![(adjusted_vars[ret], 1.0), (floor, -1.0)];
        for e in 0..ret {
            coeffs.push((committed_vars[e], -net.edge(e).cost));
            if let Some(z) = rerouted_vars[e] {
                coeffs.push((z, -net.edge(e).cost));
            }
        }
        lp.add_row(Relation::Ge, 0.0, &coeffs);

        scenario_vars.push((adjusted_vars, rerouted_vars));
    }

    let solution = solve_lp(&lp);
    if !solution.is_optimal() {
        return Err(AdminError::LpFailed { program: "robust flow", status: solution.status });
    }

    let flow =
        FlowScenario::from_values(committed_vars.iter().map(|&v| solution.values[v]).collect());
    let routing_cost = flow.routing_cost(net);
    let scenarios = pool
        .attacks()
        .iter()
        .zip(&scenario_vars)
        .map(|(attack, (adjusted_vars, rerouted_vars))| {
            let adjusted = FlowScenario::from_values(
                adjusted_vars.iter().map(|&v| solution.values[v]).collect(),
            );
            let rerouted: Vec<f64> = rerouted_vars[..ret]
                .iter()
                .map(|z| z.map_or(0.0, |v| solution.values[v]))
                .collect();
            let toll: f64 =
                rerouted.iter().zip(net.edges()).map(|(r, edge)| r * edge.cost).sum();
            RobustScenario {
                attack: attack.clone(),
                value: round_objective(adjusted.throughput(net) - routing_cost - toll),
                flow: adjusted,
                rerouted,
            }
        })
        .collect();

    Ok(RobustFlowResult {
        flow,
        value: round_objective(solution.objective),
        scenarios,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engines::adaptive_value;
    use crate::model::validate_flow;
    use crate::samples;

    fn diamond() -> Network {
        samples::small_diamond()
    }

    #[test]
    fn empty_pool_is_plain_max_flow_min_cost() {
        let net = diamond();
        let result = robust_flow(&net, &AttackPool::new()).unwrap();
        assert!((result.value - 13.69).abs() < 1e-9);
        assert!(validate_flow(&net, &result.flow).is_valid());
        assert!(result.scenarios.is_empty());
    }

    #[test]
    fn pool_of_only_the_empty_attack_changes_nothing() {
        let net = diamond();
        let pool: AttackPool = [Attack::empty()].into_iter().collect();
        let result = robust_flow(&net, &pool).unwrap();
        assert!((result.value - 13.69).abs() < 1e-6);
        assert_eq!(result.scenarios.len(), 1);
        assert!((result.scenarios[0].value - result.value).abs() < 1e-6);
    }

    #[test]
    fn defending_the_big_source_edge_moves_value_onto_the_bypass() {
        let net = diamond();
        let pool: AttackPool = [Attack::new([0])].into_iter().collect();
        let result = robust_flow(&net, &pool).unwrap();
        // Losing s->a leaves the s->b->t path; rerouting is free to plan, so
        // the guaranteed value is 5 minus the 0.1 routing cost of the path.
        assert!((result.value - 4.9).abs() < 1e-6, "value {}", result.value);
        assert!(validate_flow(&net, &result.flow).is_valid());
    }

    #[test]
    fn the_floor_matches_the_adjustment_engine_on_every_pooled_attack() {
        let net = diamond();
        let pool: AttackPool =
            [Attack::empty(), Attack::new([0]), Attack::new([4]), Attack::new([1, 3])]
                .into_iter()
                .collect();
        let result = robust_flow(&net, &pool).unwrap();
        let worst = pool
            .attacks()
            .iter()
            .map(|attack| adaptive_value(&net, &result.flow, attack))
            .fold(f64::INFINITY, f64::min);
        assert!(
            (result.value - worst).abs() < 1e-6,
            "floor {} vs engine worst {}",
            result.value,
            worst
        );
    }

    #[test]
    fn scenario_values_never_undercut_the_floor() {
        let net = diamond();
        let pool: AttackPool = [Attack::new([2]), Attack::new([4]), Attack::new([0, 1])]
            .into_iter()
            .collect();
        let result = robust_flow(&net, &pool).unwrap();
        for scenario in &result.scenarios {
            assert!(scenario.value >= result.value - 1e-6);
            // Rerouted flow only ever sits on eligible edges.
            let eligible = reroute_eligibility(&net, &scenario.attack);
            for (e, &extra) in scenario.rerouted.iter().enumerate() {
                assert!(extra <= 1e-7 || eligible[e], "edge {e} rerouted while ineligible");
            }
        }
    }

    #[test]
    fn growing_the_pool_never_raises_the_guarantee() {
        let net = diamond();
        let small: AttackPool = [Attack::new([0])].into_iter().collect();
        let large: AttackPool =
            [Attack::new([0]), Attack::new([4]), Attack::new([2])].into_iter().collect();
        let a = robust_flow(&net, &small).unwrap();
        let b = robust_flow(&net, &large).unwrap();
        assert!(b.value <= a.value + 1e-9);
    }

    #[test]
    fn a_doomed_network_commits_nothing() {
        let net = samples::single_edge(10.0, 0.01);
        let pool: AttackPool = [Attack::new([0])].into_iter().collect();
        let result = robust_flow(&net, &pool).unwrap();
        assert!(result.value.abs() < 1e-9);
        assert!(result.flow.throughput(&net).abs() < 1e-7);
    }
}
