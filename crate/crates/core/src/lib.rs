//! Robust and adaptive maximum-flow strategies for directed networks whose
//! edges can be destroyed by a budgeted adversary.
//!
//! The library revolves around an iterative two-player game: the network
//! administrator commits a flow that maximises value against every attack
//! seen so far, the adversary answers with the most damaging attack against
//! that flow, and the two bounds squeeze until they meet. Supporting pieces:
//!
//! - [`model`] — networks, flows, attacks, reachability, random instances
//! - [`lp`] — a self-contained bounded-variable simplex solver
//! - [`engines`] — max-flow/min-cost, min-cut and post-attack flow adjustment
//! - [`adversary`] — exact and heuristic worst-case attack search
//! - [`admin`] — robust flow against an attack pool, plus baseline strategies
//! - [`game`] — the iterative game loop and maximin verification

pub mod admin;
pub mod adversary;
pub mod engines;
pub mod game;
pub mod lp;
pub mod model;
pub mod samples;

/// Tolerance for flow feasibility checks (conservation, capacity).
pub const EPS_FLOW: f64 = 1e-6;
/// Feasibility tolerance inside the LP solver.
pub const EPS_LP_FEAS: f64 = 1e-7;
/// Objective / reduced-cost tolerance inside the LP solver.
pub const EPS_LP_OBJ: f64 = 1e-9;
/// Convergence tolerance on the game's upper/lower value bounds.
pub const EPS_CONVERGENCE: f64 = 1e-6;
/// Two flows closer than this in the max norm count as the same strategy.
pub const EPS_FLOW_REPEAT: f64 = 1e-6;
/// Refuse exhaustive attack enumeration beyond this many candidate sets.
pub const DEFAULT_ENUMERATION_CAP: u128 = 2_000_000;
/// Iteration cap for the game loop.
pub const DEFAULT_MAX_GAME_ITERATIONS: usize = 50;
/// Round limit for the partitioning heuristic.
pub const DEFAULT_PARTITION_MAX_ROUNDS: usize = 20;

/// Snaps an objective value onto a 1e-9 grid so that values produced by
/// different algorithmic routes compare and print stably.
pub fn round_objective(x: f64) -> f64 {
    (x * 1e9).round() / 1e9
}
