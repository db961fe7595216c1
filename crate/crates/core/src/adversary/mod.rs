//! Adversary side of the game: search for the attack (a set of at most
//! `gamma` edges to destroy) that hurts a committed flow the most.
//!
//! Four search strategies are provided, all scoring candidate attacks with
//! the adjustment engine from [`crate::engines`]:
//!
//! * [`exact_attack`] enumerates every attack of size at most `gamma`.
//! * [`greedy_attack`] destroys one edge per round, always the edge whose
//!   removal loses the adjusted objective the most.
//! * [`accelerated_greedy_attack`] returns the same attacks as the greedy
//!   search but skips evaluations using a lazy upper-bound heap.
//! * [`partitioning_attack`] collects candidate edges from exact solves on
//!   random two-way splits of the network, then enumerates only those.
//!
//! [`best_attack`] picks the strategy for a requested [`AdversaryMode`] and
//! is what the game loop calls.

mod exact;
mod greedy;
mod partition;

pub use exact::exact_attack;
pub use greedy::{accelerated_greedy_attack, greedy_attack};
pub use partition::{partition_network, partitioning_attack, PartitionPair, SubNetwork};

use crate::engines::adaptive_value;
use crate::model::{Attack, FlowScenario, Network};

/// How [`best_attack`] should search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdversaryMode {
    /// Full enumeration; falls back to [`AdversaryMode::Heuristic`] with a
    /// warning when the attack space exceeds the configured cap.
    Exact,
    /// Run both the lazy greedy and the partitioning search, keep the
    /// stronger (lower-value) attack.
    Heuristic,
}

/// Which search produced an [`AttackResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttackMethod {
    Exact,
    Greedy,
    LazyGreedy,
    Partitioned,
}

/// Outcome of an attack search.
#[derive(Debug, Clone)]
pub struct AttackResult {
    /// The attack found (edges are sorted; may be smaller than the budget).
    pub attack: Attack,
    /// Adaptive value of the committed flow under `attack`: adjusted
    /// objective minus the committed routing cost.
    pub value: f64,
    /// Number of adjustment-engine evaluations spent on candidate attacks.
    pub evaluations: usize,
    /// Which search produced this result.
    pub method: AttackMethod,
}

/// Tuning knobs shared by the attack searches.
#[derive(Debug, Clone)]
pub struct AdversaryConfig {
    /// Hard cap on the number of attacks [`exact_attack`] may enumerate.
    pub enumeration_cap: u128,
    /// Stop collecting partition candidates once this many distinct edges
    /// are known. `None` uses `5 * gamma`.
    pub partition_candidate_target: Option<usize>,
    /// Maximum number of partition rounds.
    pub partition_max_rounds: usize,
    /// Seed for the partition sampler.
    pub seed: u64,
}

impl Default for AdversaryConfig {
    fn default() -> Self {
        AdversaryConfig {
            enumeration_cap: crate::DEFAULT_ENUMERATION_CAP,
            partition_candidate_target: None,
            partition_max_rounds: crate::DEFAULT_PARTITION_MAX_ROUNDS,
            seed: 0,
        }
    }
}

/// Errors from the adversary searches.
#[derive(Debug, thiserror::Error)]
pub enum AdversaryError {
    /// The exact search would enumerate more attacks than the cap allows.
    #[error(
        "attack space holds {size} candidate attacks, above the cap of {cap}; \
         use a heuristic mode or raise the cap"
    )]
    SpaceTooLarge { size: u128, cap: u128 },
}

/// Runs the attack search requested by `mode` and returns the best attack it
/// finds against `committed`.
///
/// In exact mode an oversized attack space triggers a logged fallback to the
/// heuristic pair instead of an error, so callers always get an attack. In
/// heuristic mode ties between the two searches go to the lexicographically
/// smaller edge set, and the reported evaluation count is the total spent by
/// both searches.
pub fn best_attack(
    net: &Network,
    committed: &FlowScenario,
    gamma: usize,
    mode: AdversaryMode,
    config: &AdversaryConfig,
) -> AttackResult {
    if mode == AdversaryMode::Exact {
        match exact_attack(net, committed, gamma, config.enumeration_cap) {
            Ok(result) => return result,
            Err(err) => {
                log::warn!("exact attack search unavailable ({err}); using heuristics");
            }
        }
    }

    let lazy = accelerated_greedy_attack(net, committed, gamma);
    let partitioned = partitioning_attack(net, committed, gamma, config);
    let evaluations = lazy.evaluations + partitioned.evaluations;
    let mut best = match lazy
        .value
        .total_cmp(&partitioned.value)
        .then_with(|| lazy.attack.cmp(&partitioned.attack))
    {
        std::cmp::Ordering::Greater => partitioned,
        _ => lazy,
    };
    best.evaluations = evaluations;
    best
}

/// Scores `attack` against `committed`: a convenience wrapper so callers of
/// the search functions can re-score attacks consistently.
pub fn attack_value(net: &Network, committed: &FlowScenario, attack: &Attack) -> f64 {
    adaptive_value(net, committed, attack)
}
