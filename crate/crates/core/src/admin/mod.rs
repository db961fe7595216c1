//! Administrator side of the game: committing a flow before the adversary
//! strikes.
//!
//! The centrepiece is [`robust_flow`], which maximises the worst-case
//! adaptive value of the committed flow over a pool of known attacks by
//! solving one linear program with an adjustment scenario per attack.
//! Three simpler commitment strategies serve as baselines:
//!
//! * [`osp_flow`] — commit the plain max-flow/min-cost plan, then recompute
//!   a fresh flow on whatever the worst attack leaves standing.
//! * [`rf_flow`] — discount each edge's flow by how much a budget-limited
//!   adversary could remove, via the dual of the "take the largest flows"
//!   problem.
//! * [`aamf_flow`] — spread flow evenly across a minimum cut so that no
//!   single destroyed edge carries a disproportionate share.

mod baselines;
mod pool;
mod robust;

pub use baselines::{aamf_flow, osp_flow, rf_flow, AamfResult, OspResult, RfResult};
pub use pool::AttackPool;
pub use robust::{robust_flow, RobustFlowResult, RobustScenario};

use crate::lp::LpStatus;

/// Errors from the administrator strategies.
#[derive(Debug, thiserror::Error)]
pub enum AdminError {
    /// An internal linear program failed to solve. The committed-flow
    /// programs are feasible and bounded by construction, so this signals a
    /// malformed network or a solver defect rather than a user mistake.
    #[error("the {program} program ended {status:?} instead of optimal")]
    LpFailed {
        program: &'static str,
        status: LpStatus,
    },
}
