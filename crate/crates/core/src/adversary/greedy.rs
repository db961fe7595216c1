//! Greedy attack searches: one destroyed edge per round, re-adjusting the
//! flow after every pick so later rounds attack what actually survives.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use super::{AttackMethod, AttackResult};
use crate::engines::{adaptive_value, AdjustedFlowResult, AdjustedFlowSolver};
use crate::model::{Attack, EdgeId, FlowScenario, Network};

/// State threaded through the greedy rounds: the attack picked so far plus
/// the adjusted flow (and its objective) the next round measures gains
/// against.
struct GreedyState {
    attack: Attack,
    base_flow: FlowScenario,
    base_objective: f64,
}

impl GreedyState {
    fn start(net: &Network, committed: &FlowScenario) -> GreedyState {
        let baseline = AdjustedFlowSolver::new().solve(net, committed, &Attack::empty());
        GreedyState {
            attack: Attack::empty(),
            base_flow: baseline.flow,
            base_objective: baseline.objective,
        }
    }

    fn candidates(&self, net: &Network) -> Vec<EdgeId> {
        net.attackable_edges()
            .iter()
            .copied()
            .filter(|&e| !self.attack.contains(e))
            .collect()
    }

    fn commit(&mut self, edge: EdgeId, adjusted: AdjustedFlowResult) {
        self.attack = self.attack.with_edge(edge);
        self.base_flow = adjusted.flow;
        self.base_objective = adjusted.objective;
    }
}

/// Picks up to `gamma` edges, one per round, each time destroying the edge
/// whose loss costs the current adjusted flow the most (ties go to the
/// lowest edge id). Every candidate is re-scored against the flow that
/// survives the edges already destroyed, so the search tracks how the
/// network actually degrades. Gains are counted even when they are zero, so
/// exactly `gamma` edges are returned whenever the budget fits.
///
/// The evaluation count covers candidate scoring only; the baseline
/// adjustment and the final re-score of the finished attack are excluded.
pub fn greedy_attack(net: &Network, committed: &FlowScenario, gamma: usize) -> AttackResult {
    let mut state = GreedyState::start(net, committed);
    let rounds = gamma.min(net.attackable_edges().len());
    let mut evaluations = 0;

    for _ in 0..rounds {
        let candidates = state.candidates(net);
        evaluations += candidates.len();
        let (_, edge, adjusted) = candidates
            .into_par_iter()
            .map_init(AdjustedFlowSolver::new, |solver, edge| {
                let trial = state.attack.with_edge(edge);
                let adjusted = solver.solve(net, &state.base_flow, &trial);
                let gain = state.base_objective - adjusted.objective;
                (gain, edge, adjusted)
            })
            .reduce_with(|a, b| match a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)) {
                Ordering::Less => b,
                _ => a,
            })
            .expect("every round has at least one candidate");
        state.commit(edge, adjusted);
    }

    let value = adaptive_value(net, committed, &state.attack);
    AttackResult {
        attack: state.attack,
        value,
        evaluations,
        method: AttackMethod::Greedy,
    }
}

/// A heap key for the lazy greedy search. Ordered so that the highest value
/// pops first and, among equal values, the lowest edge id — matching the
/// plain greedy tie-break.
struct HeapEntry {
    value: f64,
    edge: EdgeId,
    fresh: bool,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for HeapEntry {}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then_with(|| other.edge.cmp(&self.edge))
    }
}

/// Same picks as [`greedy_attack`], fewer evaluations.
///
/// Destroying an edge can cost the adjusted flow at most the flow the edge
/// currently carries, so that flow is a valid upper bound on the edge's
/// gain. Each round seeds a max-heap with those bounds, then repeatedly pops
/// the top entry: a stale bound is replaced by the edge's freshly evaluated
/// gain, while popping an already-fresh entry proves no unevaluated edge can
/// beat it and the round selects it immediately. Because the heap breaks
/// value ties towards lower edge ids, stale ties are evaluated in the same
/// order the plain greedy would inspect them and the selected sets coincide
/// exactly — only the evaluation count shrinks.
pub fn accelerated_greedy_attack(
    net: &Network,
    committed: &FlowScenario,
    gamma: usize,
) -> AttackResult {
    let mut state = GreedyState::start(net, committed);
    let rounds = gamma.min(net.attackable_edges().len());
    let mut evaluations = 0;
    let mut solver = AdjustedFlowSolver::new();
    let mut scored: Vec<Option<AdjustedFlowResult>> = vec![None; net.edge_count()];

    for _ in 0..rounds {
        let mut heap: BinaryHeap<HeapEntry> = state
            .candidates(net)
            .into_iter()
            .map(|edge| HeapEntry {
                value: state.base_flow.get(edge),
                edge,
                fresh: false,
            })
            .collect();
        for slot in scored.iter_mut() {
            *slot = None;
        }

        let selected = loop {
            let top = heap.pop().expect("candidate heap cannot drain");
            if top.fresh {
                break top.edge;
            }
            let trial = state.attack.with_edge(top.edge);
            let adjusted = solver.solve(net, &state.base_flow, &trial);
            let gain = state.base_objective - adjusted.objective;
            evaluations += 1;
            debug_assert!(
                gain <= top.value + 1e-9,
                "flow bound {} must dominate gain {gain} on edge {}",
                top.value,
                top.edge
            );
            scored[top.edge] = Some(adjusted);
            heap.push(HeapEntry {
                value: gain,
                edge: top.edge,
                fresh: true,
            });
        };

        let adjusted = scored[selected].take().expect("fresh entries are scored");
        state.commit(selected, adjusted);
    }

    let value = adaptive_value(net, committed, &state.attack);
    AttackResult {
        attack: state.attack,
        value,
        evaluations,
        method: AttackMethod::LazyGreedy,
    }
}
