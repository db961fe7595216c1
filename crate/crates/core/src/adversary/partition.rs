//! Partition-based candidate search: split the network in two around a
//! random node sample, solve each half exactly with half the budget, and
//! remember which original edges the halves chose to destroy. After a few
//! rounds the accumulated candidates form a small universe that can be
//! enumerated exhaustively even when the full attack space cannot.

use std::collections::{BTreeMap, BTreeSet};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::exact::{evaluate_attacks, subsets_up_to};
use super::{exact_attack, AdversaryConfig, AttackMethod, AttackResult};
use crate::engines::adaptive_value;
use crate::model::{Attack, EdgeId, FlowScenario, Network, NetError, NodeId};

/// One half of a partition: a standalone network whose artificial endpoint
/// stands in for the other half, the committed flow induced on it, and a map
/// from each sub-network edge back to the original edges it represents.
#[derive(Debug, Clone)]
pub struct SubNetwork {
    pub net: Network,
    /// Committed flow induced on the sub-network. Cross flows accumulate on
    /// the artificial edges; interior conservation may not hold, which the
    /// adjustment engine tolerates.
    pub flow: FlowScenario,
    /// For sub-network edge `e`, `origin[e]` lists the original edge ids it
    /// carries: one id for an interior edge, several for a merged artificial
    /// edge, none for the return edge.
    pub origin: Vec<Vec<EdgeId>>,
}

/// The two halves produced by [`partition_network`].
#[derive(Debug, Clone)]
pub struct PartitionPair {
    /// Contains the original source; cut edges lead to an artificial
    /// terminal.
    pub source_side: SubNetwork,
    /// Contains the original terminal; cut edges arrive from an artificial
    /// source.
    pub terminal_side: SubNetwork,
}

#[derive(Clone, Copy, PartialEq)]
enum SideKind {
    Source,
    Terminal,
}

#[derive(Default)]
struct CrossBundle {
    capacity: f64,
    post_attack_capacity: f64,
    flow: f64,
    origin: Vec<EdgeId>,
}

/// Splits `net` into two sub-networks around a random sample of interior
/// nodes (the sample plus the source on one side, everything else plus the
/// terminal on the other). Edges crossing from the source side to the
/// terminal side are replaced by merged artificial edges — one per boundary
/// node, carrying the summed capacity and committed flow of its bundle at
/// zero cost — while edges crossing backwards are dropped. Side nodes left
/// without any edge are omitted.
///
/// Requires at least four nodes so that both sides get at least one interior
/// node candidate. The same seed always produces the same split.
pub fn partition_network(
    net: &Network,
    committed: &FlowScenario,
    seed: u64,
) -> Result<PartitionPair, NetError> {
    assert!(
        net.node_count() >= 4,
        "partitioning needs at least four nodes"
    );
    let interior: Vec<NodeId> = (0..net.node_count())
        .filter(|&v| v != net.source() && v != net.terminal())
        .collect();
    let take = net.node_count().div_ceil(2) - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picked = rand::seq::index::sample(&mut rng, interior.len(), take);

    let mut on_source_side = vec![false; net.node_count()];
    on_source_side[net.source()] = true;
    for i in picked {
        on_source_side[interior[i]] = true;
    }

    Ok(PartitionPair {
        source_side: build_side(net, committed, &on_source_side, SideKind::Source)?,
        terminal_side: build_side(net, committed, &on_source_side, SideKind::Terminal)?,
    })
}

fn build_side(
    net: &Network,
    committed: &FlowScenario,
    on_source_side: &[bool],
    kind: SideKind,
) -> Result<SubNetwork, NetError> {
    let in_side = |v: NodeId| match kind {
        SideKind::Source => on_source_side[v],
        SideKind::Terminal => !on_source_side[v],
    };

    // Interior edges stay as they are; forward cross edges merge into one
    // artificial edge per boundary node on this side.
    let mut interior_edges: Vec<EdgeId> = Vec::new();
    let mut bundles: BTreeMap<NodeId, CrossBundle> = BTreeMap::new();
    for e in 0..net.return_edge() {
        let edge = net.edge(e);
        if in_side(edge.tail) && in_side(edge.head) {
            interior_edges.push(e);
        } else if on_source_side[edge.tail] && !on_source_side[edge.head] {
            let anchor = match kind {
                SideKind::Source => edge.tail,
                SideKind::Terminal => edge.head,
            };
            let bundle = bundles.entry(anchor).or_default();
            bundle.capacity += edge.capacity;
            bundle.post_attack_capacity += edge.post_attack_capacity;
            bundle.flow += committed.get(e);
            bundle.origin.push(e);
        }
    }

    let mut used: BTreeSet<NodeId> = BTreeSet::new();
    used.insert(match kind {
        SideKind::Source => net.source(),
        SideKind::Terminal => net.terminal(),
    });
    for &e in &interior_edges {
        used.insert(net.edge(e).tail);
        used.insert(net.edge(e).head);
    }
    used.extend(bundles.keys().copied());

    let mut builder = Network::builder();
    builder.name(&format!(
        "{}#{}",
        net.name(),
        match kind {
            SideKind::Source => "source-side",
            SideKind::Terminal => "terminal-side",
        }
    ));
    let mut sub_id = vec![usize::MAX; net.node_count()];
    for &v in &used {
        sub_id[v] = builder.add_node(net.node_name(v))?;
    }
    let artificial = match kind {
        SideKind::Source => {
            let t = builder.add_node("@cut-terminal")?;
            builder.add_source(sub_id[net.source()])?;
            builder.add_terminal(t)?;
            t
        }
        SideKind::Terminal => {
            let s = builder.add_node("@cut-source")?;
            builder.add_source(s)?;
            builder.add_terminal(sub_id[net.terminal()])?;
            s
        }
    };

    let mut origin: Vec<Vec<EdgeId>> = Vec::new();
    let mut flows: Vec<f64> = Vec::new();
    for &e in &interior_edges {
        let edge = net.edge(e);
        builder.add_edge(
            sub_id[edge.tail],
            sub_id[edge.head],
            edge.capacity,
            edge.cost,
            edge.post_attack_capacity,
        )?;
        origin.push(vec![e]);
        flows.push(committed.get(e));
    }
    for (&anchor, bundle) in &bundles {
        match kind {
            SideKind::Source => builder.add_edge(
                sub_id[anchor],
                artificial,
                bundle.capacity,
                0.0,
                bundle.post_attack_capacity,
            )?,
            SideKind::Terminal => builder.add_edge(
                artificial,
                sub_id[anchor],
                bundle.capacity,
                0.0,
                bundle.post_attack_capacity,
            )?,
        };
        origin.push(bundle.origin.clone());
        flows.push(bundle.flow);
    }

    let sub = builder.build()?;
    let terminal_inflow: f64 = sub
        .in_edges(sub.terminal())
        .iter()
        .filter(|&&e| e != sub.return_edge())
        .map(|&e| flows[e])
        .sum();
    flows.push(terminal_inflow);
    origin.push(Vec::new());

    Ok(SubNetwork {
        net: sub,
        flow: FlowScenario::from_values(flows),
        origin,
    })
}

/// Heuristic attack search for budgets whose full attack space is out of
/// reach. Random partitions are solved exactly with budget `ceil(gamma/2)`
/// per side; the original edges behind their chosen attacks accumulate as
/// candidates. Rounds stop once the candidate target (default `5 * gamma`)
/// is met or the round cap is hit, after which only subsets of the candidate
/// set are enumerated.
///
/// Networks too small to partition (or a candidate target of zero) yield no
/// candidates, and the search degrades to scoring the empty attack.
pub fn partitioning_attack(
    net: &Network,
    committed: &FlowScenario,
    gamma: usize,
    config: &AdversaryConfig,
) -> AttackResult {
    let target = config.partition_candidate_target.unwrap_or(5 * gamma);
    let sub_budget = gamma.div_ceil(2);
    let mut candidates: BTreeSet<EdgeId> = BTreeSet::new();
    let mut evaluations = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut round = 0;
    while candidates.len() < target && round < config.partition_max_rounds && net.node_count() >= 4
    {
        round += 1;
        let pair = match partition_network(net, committed, rng.next_u64()) {
            Ok(pair) => pair,
            Err(err) => {
                log::debug!("partition round failed ({err}); resampling");
                continue;
            }
        };
        for side in [&pair.source_side, &pair.terminal_side] {
            match exact_attack(&side.net, &side.flow, sub_budget, config.enumeration_cap) {
                Ok(result) => {
                    evaluations += result.evaluations;
                    for &sub_edge in result.attack.edges() {
                        candidates.extend(side.origin[sub_edge].iter().copied());
                    }
                }
                Err(err) => {
                    log::warn!("skipping one partition side: {err}");
                }
            }
        }
    }

    let universe: Vec<EdgeId> = candidates.into_iter().collect();
    if universe.len() <= gamma {
        let attack = Attack::new(universe);
        let value = adaptive_value(net, committed, &attack);
        AttackResult {
            attack,
            value,
            evaluations: evaluations + 1,
            method: AttackMethod::Partitioned,
        }
    } else {
        let subsets = subsets_up_to(&universe, gamma);
        let mut result = evaluate_attacks(net, committed, subsets, AttackMethod::Partitioned);
        result.evaluations += evaluations;
        result
    }
}
