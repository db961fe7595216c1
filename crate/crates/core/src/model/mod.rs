pub mod attack;
pub mod flow;
pub mod generate;
pub mod network;
pub mod reach;

pub use attack::{attack_space, attack_space_size, reroute_eligibility, Attack, AttackSpace};
pub use flow::{validate_flow, FlowScenario, FlowViolation, ValidationReport};
pub use generate::{generate_random, repair_connectivity, RandomNetParams, RawEdge};
pub use network::{
    transform_multi_terminal, Edge, EdgeId, NetError, Network, NetworkBuilder, NodeId,
};
pub use reach::ReachabilityIndex;
