//! Exhaustive attack search by enumeration of the attack space.

use rayon::prelude::*;

use super::{AdversaryError, AttackMethod, AttackResult};
use crate::engines::AdjustedFlowSolver;
use crate::model::attack::advance;
use crate::model::{attack_space, attack_space_size, Attack, EdgeId, FlowScenario, Network};
use crate::round_objective;

/// Enumerates every attack of size at most `gamma` and returns the one with
/// the lowest adaptive value, breaking value ties towards the
/// lexicographically smallest edge set (so the empty attack wins when
/// destroying edges gains the adversary nothing).
///
/// Fails with [`AdversaryError::SpaceTooLarge`] when the attack space holds
/// more than `enumeration_cap` attacks; callers should fall back to a
/// heuristic search in that case.
pub fn exact_attack(
    net: &Network,
    committed: &FlowScenario,
    gamma: usize,
    enumeration_cap: u128,
) -> Result<AttackResult, AdversaryError> {
    let size = attack_space_size(net, gamma);
    if size > enumeration_cap {
        return Err(AdversaryError::SpaceTooLarge {
            size,
            cap: enumeration_cap,
        });
    }
    let attacks: Vec<Attack> = attack_space(net, gamma).collect();
    Ok(evaluate_attacks(net, committed, attacks, AttackMethod::Exact))
}

/// Scores each attack in parallel and keeps the minimiser. The reduction
/// orders candidates by `(value, attack)` under a total order, so the result
/// does not depend on how rayon schedules the chunks.
pub(crate) fn evaluate_attacks(
    net: &Network,
    committed: &FlowScenario,
    attacks: Vec<Attack>,
    method: AttackMethod,
) -> AttackResult {
    assert!(!attacks.is_empty(), "at least one attack must be scored");
    let evaluations = attacks.len();
    let routing_cost = committed.routing_cost(net);
    let (value, attack) = attacks
        .into_par_iter()
        .map_init(AdjustedFlowSolver::new, |solver, attack| {
            let adjusted = solver.solve(net, committed, &attack);
            let value = round_objective(adjusted.objective - routing_cost);
            (value, attack)
        })
        .reduce_with(|a, b| {
            match a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)) {
                std::cmp::Ordering::Greater => b,
                _ => a,
            }
        })
        .expect("attack list is non-empty");
    AttackResult {
        attack,
        value,
        evaluations,
        method,
    }
}

/// All subsets of `universe` with at most `gamma` elements, smallest sizes
/// first and lexicographic within a size — the same order the full attack
/// space uses. `universe` must be sorted and duplicate-free.
pub(crate) fn subsets_up_to(universe: &[EdgeId], gamma: usize) -> Vec<Attack> {
    let mut subsets = vec![Attack::empty()];
    for size in 1..=gamma.min(universe.len()) {
        let mut indices: Vec<usize> = (0..size).collect();
        loop {
            subsets.push(Attack::new(indices.iter().map(|&i| universe[i])));
            if !advance(&mut indices, universe.len()) {
                break;
            }
        }
    }
    subsets
}
