//! Flow engines: committed-flow construction, minimum cuts, and post-attack
//! adjustment. Each engine has a deterministic combinatorial implementation;
//! the adjustment additionally has an LP twin in [`reference`] used by tests
//! to cross-validate results.

mod adjust;
mod cut;
mod mcf;
mod reference;

pub use adjust::{
    adaptive_value, adaptive_value_from, adjusted_flow, AdjustedFlowResult, AdjustedFlowSolver,
};
pub use cut::{min_cut, MinCut};
pub use mcf::max_flow_min_cost;
pub use reference::{
    reference_adjusted_flow_lp, reference_adjusted_flow_value, ReferenceAdjustedLp,
};
