//! A small self-contained linear-programming toolkit.
//!
//! [`LpProblem`] collects variables (with box bounds) and linear rows, and
//! [`solve_lp`] runs a bounded-variable revised simplex over them. The
//! solver is deterministic: the same program yields the same pivot sequence
//! and therefore bit-identical answers across runs and platforms with IEEE
//! doubles.

mod problem;
mod simplex;

pub use problem::{LpProblem, LpSolution, LpStatus, Relation, VarId};

/// Solves `problem`, never panicking on pathological inputs: infeasible and
/// unbounded programs come back as their respective statuses.
pub fn solve_lp(problem: &LpProblem) -> LpSolution {
    simplex::Simplex::solve(problem)
}
