//! Bounded-variable revised simplex with an explicitly maintained basis
//! inverse.
//!
//! The solver targets the dense-but-modest programs produced elsewhere in
//! this crate (network design and interdiction models with up to a few
//! thousand rows). Design choices, in brief:
//!
//! * columns are stored sparsely; the basis inverse is a dense column-major
//!   matrix updated by elementary row eliminations on each pivot;
//! * every structural and slack variable carries box bounds, so ranged and
//!   equality rows need no row surgery and bound flips are cheap;
//! * all of the production programs built by this crate have zero right-hand
//!   sides, which makes the all-slack starting basis feasible; a classical
//!   phase with artificial variables is still included so arbitrary programs
//!   (tests, tooling) solve correctly;
//! * pricing is steepest-of-the-reduced-costs (Dantzig) with incrementally
//!   maintained reduced costs, periodically recomputed from scratch to shed
//!   floating-point drift; after a long run of degenerate pivots the solver
//!   drops to Bland's rule, which cannot cycle;
//! * the ratio test runs in two passes: a relaxed pass fixes the step, a
//!   second pass picks the largest pivot element among the rows that fit,
//!   trading a bounded sliver of bound slack for a well-conditioned basis;
//! * each periodic refresh checks the basic solution against the original
//!   basis columns and rebuilds the inverse by Gauss-Jordan elimination
//!   when the elementary updates have drifted;
//! * every tie (entering, leaving, equal ratios) is broken by the lowest
//!   column index, so identical inputs pivot identically on every run.

use super::problem::{LpProblem, LpSolution, LpStatus, Relation};

/// Smallest magnitude accepted for a pivot element.
const PIVOT_TOL: f64 = 1e-8;
/// A tableau entry below this is treated as zero in the ratio test.
const ENTRY_TOL: f64 = 1e-10;
/// Ratio-test entries also count as zero below this fraction of the
/// column's largest entry: products with the inverse leave noise that
/// scales with the basis conditioning, not with any fixed absolute cutoff,
/// and pivoting on such noise is what corrupts the basis.
const ENTRY_REL: f64 = 1e-9;
/// Reduced-cost threshold for declaring a column attractive.
const DUAL_TOL: f64 = 1e-9;
/// Step lengths below this count as degenerate.
const STEP_TOL: f64 = 1e-10;
/// Phase-one objective must come this close to zero for feasibility.
const FEAS_TOL: f64 = 1e-7;
/// Full recomputation of duals and basic values every this many pivots.
const REFRESH_EVERY: usize = 256;
/// Bound slack the relaxed ratio-test pass may hand out per pivot.
const RATIO_MARGIN: f64 = 1e-9;
/// Scale of the anti-degeneracy bound perturbation.
const PERTURB_EPS: f64 = 1e-9;
/// Residual of `B * beta = b` beyond which the inverse gets rebuilt.
const REFACTOR_TOL: f64 = 1e-7;
/// Partial-pivot magnitude below which a basis counts as singular.
const SINGULAR_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VarState {
    Basic(usize),
    AtLower,
    AtUpper,
    /// Free variable resting at zero.
    FreeAtZero,
}

#[derive(Debug, Clone, Copy)]
enum StepLimit {
    /// Row index whose basic variable leaves, and whether it leaves at its
    /// upper bound.
    Leaving { row: usize, at_upper: bool, ratio: f64 },
    /// The entering variable runs from one of its own bounds to the other.
    BoundFlip,
    Unbounded,
}

enum RunOutcome {
    Converged,
    Unbounded,
}

pub(super) struct Simplex {
    rows: usize,
    n_struct: usize,
    /// Sparse columns (structural, then slack, then any artificials).
    cols: Vec<Vec<(usize, f64)>>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    artificial: Vec<bool>,
    rhs: Vec<f64>,
    state: Vec<VarState>,
    basis: Vec<usize>,
    /// Dense basis inverse, column-major: entry (i, c) at `binv[c * rows + i]`.
    binv: Vec<f64>,
    /// Values of the basic variables, by row.
    beta: Vec<f64>,
    /// Reduced costs for the active phase (entries for basic columns are 0).
    reduced: Vec<f64>,
    /// Objective of the active phase, per column.
    cost: Vec<f64>,
    pivots: usize,
    degenerate_run: usize,
    bland: bool,
    scratch_w: Vec<f64>,
    scratch_rho: Vec<f64>,
}

impl Simplex {
    pub(super) fn solve(problem: &LpProblem) -> LpSolution {
        for j in 0..problem.num_vars() {
            if problem.lower[j] > problem.upper[j] {
                return LpSolution::infeasible();
            }
        }

        let mut s = Simplex::build(problem);
        if !s.ensure_feasible() {
            return LpSolution::infeasible();
        }

        let n_cols = s.cols.len();
        let mut phase2 = vec![0.0; n_cols];
        phase2[..s.n_struct].copy_from_slice(&problem.objective);
        s.cost = phase2;
        s.refresh();

        // The scenario-per-attack programs this crate builds are massively
        // degenerate (parallel blocks with identical structure), which can
        // stall the simplex on zero-length steps indefinitely. Solving with
        // tiny perturbed bounds breaks the ties; restoring the exact bounds
        // afterwards leaves a (near-)optimal basis that a final clean run
        // polishes in a handful of pivots.
        let exact_bounds = s.perturb_bounds();
        if matches!(s.optimize(), RunOutcome::Unbounded) {
            return LpSolution::unbounded();
        }
        s.restore_bounds(exact_bounds);
        s.refresh();
        match s.optimize() {
            RunOutcome::Unbounded => LpSolution::unbounded(),
            RunOutcome::Converged => s.extract(problem),
        }
    }

    /// Expands bounds by tiny, index-dependent amounts: both sides for basic
    /// variables (so degenerate bound-hugging rows stop tying at step zero),
    /// only the far side for nonbasic ones (so their resting values — and
    /// with them the current vertex — do not move). Pinned variables stay
    /// pinned. Returns the exact bounds for later restoration.
    fn perturb_bounds(&mut self) -> (Vec<f64>, Vec<f64>) {
        let exact = (self.lower.clone(), self.upper.clone());
        const GOLDEN_FRAC: f64 = 0.618_033_988_749_894_8;
        for j in 0..self.cols.len() {
            if self.lower[j] == self.upper[j] {
                continue;
            }
            let delta = PERTURB_EPS * (1.0 + (j as f64 * GOLDEN_FRAC).fract());
            let (stretch_lower, stretch_upper) = match self.state[j] {
                VarState::Basic(_) => (true, true),
                VarState::AtLower => (false, true),
                VarState::AtUpper => (true, false),
                VarState::FreeAtZero => (false, false),
            };
            if stretch_lower && self.lower[j].is_finite() {
                self.lower[j] -= delta * (1.0 + self.lower[j].abs());
            }
            if stretch_upper && self.upper[j].is_finite() {
                self.upper[j] += delta * (1.0 + self.upper[j].abs());
            }
        }
        exact
    }

    fn restore_bounds(&mut self, exact: (Vec<f64>, Vec<f64>)) {
        (self.lower, self.upper) = exact;
    }

    fn build(problem: &LpProblem) -> Simplex {
        let rows = problem.num_rows();
        let n_struct = problem.num_vars();
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n_struct];
        let mut lower = problem.lower.clone();
        let mut upper = problem.upper.clone();
        let mut rhs = Vec::with_capacity(rows);

        for (i, row) in problem.rows.iter().enumerate() {
            for &(v, c) in &row.coeffs {
                cols[v].push((i, c));
            }
            rhs.push(row.rhs);
        }
        // One slack per row turns every relation into an equality.
        for row in &problem.rows {
            let (lo, hi) = match row.relation {
                Relation::Le => (0.0, f64::INFINITY),
                Relation::Ge => (f64::NEG_INFINITY, 0.0),
                Relation::Eq => (0.0, 0.0),
            };
            let i = cols.len() - n_struct;
            cols.push(vec![(i, 1.0)]);
            lower.push(lo);
            upper.push(hi);
        }

        let n_cols = cols.len();
        let mut state = Vec::with_capacity(n_cols);
        for j in 0..n_struct {
            state.push(initial_state(lower[j], upper[j]));
        }
        let mut basis = Vec::with_capacity(rows);
        for i in 0..rows {
            state.push(VarState::Basic(i));
            basis.push(n_struct + i);
        }

        let mut binv = vec![0.0; rows * rows];
        for i in 0..rows {
            binv[i * rows + i] = 1.0;
        }

        let mut s = Simplex {
            rows,
            n_struct,
            cols,
            lower,
            upper,
            artificial: vec![false; n_cols],
            rhs,
            state,
            basis,
            binv,
            beta: vec![0.0; rows],
            reduced: vec![0.0; n_cols],
            cost: vec![0.0; n_cols],
            pivots: 0,
            degenerate_run: 0,
            bland: false,
            scratch_w: vec![0.0; rows],
            scratch_rho: vec![0.0; rows],
        };
        s.recompute_beta();
        s
    }

    /// Restores primal feasibility, introducing artificial variables for the
    /// rows whose slack starts outside its bounds. Returns false when the
    /// program is infeasible.
    fn ensure_feasible(&mut self) -> bool {
        let mut violated = Vec::new();
        for i in 0..self.rows {
            let slack = self.basis[i];
            if self.beta[i] < self.lower[slack] - FEAS_TOL
                || self.beta[i] > self.upper[slack] + FEAS_TOL
            {
                violated.push(i);
            }
        }
        if violated.is_empty() {
            return true;
        }

        for &i in &violated {
            let slack = self.basis[i];
            // The slack's violated bound is zero in every case, so parking it
            // there leaves the artificial carrying |beta|.
            self.state[slack] =
                if self.beta[i] < self.lower[slack] { VarState::AtLower } else { VarState::AtUpper };
            let sign = if self.beta[i] >= 0.0 { 1.0 } else { -1.0 };
            let art = self.cols.len();
            self.cols.push(vec![(i, sign)]);
            self.lower.push(0.0);
            self.upper.push(f64::INFINITY);
            self.artificial.push(true);
            self.state.push(VarState::Basic(i));
            self.reduced.push(0.0);
            self.cost.push(0.0);
            self.basis[i] = art;
            self.binv[i * self.rows + i] = sign;
        }

        // Phase objective: drive the artificial total to zero.
        let mut cost = vec![0.0; self.cols.len()];
        for (j, c) in cost.iter_mut().enumerate() {
            if self.artificial[j] {
                *c = -1.0;
            }
        }
        self.cost = cost;
        self.recompute_beta();
        self.refresh();
        if matches!(self.optimize(), RunOutcome::Unbounded) {
            // The phase objective is bounded above by zero; reaching here
            // means numerics went badly wrong. Treat as infeasible.
            log::warn!("phase-one reported unbounded; declaring infeasible");
            return false;
        }
        let residue: f64 =
            (0..self.cols.len()).filter(|&j| self.artificial[j]).map(|j| self.value_of(j)).sum();
        if residue > FEAS_TOL {
            return false;
        }
        self.evict_artificials();
        true
    }

    /// Pivots basic artificials out where possible and pins every artificial
    /// at zero so phase two cannot disturb feasibility.
    fn evict_artificials(&mut self) {
        for r in 0..self.rows {
            let b = self.basis[r];
            if !self.artificial[b] {
                continue;
            }
            self.compute_rho(r);
            let mut entering = None;
            for j in 0..self.cols.len() {
                if self.artificial[j] || matches!(self.state[j], VarState::Basic(_)) {
                    continue;
                }
                let tau = self.tableau_entry(j);
                if tau.abs() > PIVOT_TOL {
                    entering = Some(j);
                    break;
                }
            }
            if let Some(q) = entering {
                self.ftran(q);
                let sigma = match self.state[q] {
                    VarState::AtUpper => -1.0,
                    _ => 1.0,
                };
                self.pivot(q, r, sigma, 0.0, false);
            }
            // Either replaced or the row is redundant; in both cases the
            // artificial is at zero and must stay there.
        }
        for j in 0..self.cols.len() {
            if self.artificial[j] {
                self.lower[j] = 0.0;
                self.upper[j] = 0.0;
            }
        }
    }

    fn optimize(&mut self) -> RunOutcome {
        let iteration_cap = 20_000 + 50 * (self.rows + self.cols.len());
        let mut iterations = 0;
        self.bland = false;
        self.degenerate_run = 0;
        // Incrementally maintained quantities drift, so a terminal verdict
        // (optimal or unbounded) is only trusted right after a refresh; the
        // first sighting triggers one and the loop looks again.
        let mut verified = false;
        loop {
            iterations += 1;
            if iterations > iteration_cap {
                log::warn!("simplex hit its iteration cap ({iteration_cap}); returning best basis");
                return RunOutcome::Converged;
            }
            let Some(q) = self.price() else {
                if verified {
                    log::debug!(
                        "optimize converged after {iterations} iterations ({} pivots total)",
                        self.pivots
                    );
                    return RunOutcome::Converged;
                }
                self.refresh();
                verified = true;
                continue;
            };
            let sigma = match self.state[q] {
                VarState::AtLower | VarState::FreeAtZero => {
                    if self.reduced[q] > 0.0 {
                        1.0
                    } else {
                        -1.0
                    }
                }
                VarState::AtUpper => -1.0,
                VarState::Basic(_) => unreachable!("basic column priced"),
            };
            self.ftran(q);
            match self.ratio_test(q, sigma) {
                StepLimit::Unbounded => {
                    if verified {
                        return RunOutcome::Unbounded;
                    }
                    self.refresh();
                    verified = true;
                    continue;
                }
                StepLimit::BoundFlip => {
                    let span = self.upper[q] - self.lower[q];
                    for i in 0..self.rows {
                        self.beta[i] -= sigma * span * self.scratch_w[i];
                    }
                    self.state[q] = match self.state[q] {
                        VarState::AtLower => VarState::AtUpper,
                        VarState::AtUpper => VarState::AtLower,
                        other => other,
                    };
                    self.note_step(span);
                    verified = false;
                }
                StepLimit::Leaving { row, at_upper, ratio } => {
                    self.pivot(q, row, sigma, ratio, at_upper);
                    self.note_step(ratio);
                    verified = false;
                }
            }
        }
    }

    /// Bookkeeping for the anti-cycling escalation. Bland's rule, once
    /// engaged, stays on for the rest of the run: a stalling basis tends to
    /// mix occasional tiny-but-nonzero steps into its zero-step runs, and
    /// flapping back to Dantzig pricing on those re-enters the stall.
    fn note_step(&mut self, step: f64) {
        if step > STEP_TOL {
            self.degenerate_run = 0;
        } else {
            self.degenerate_run += 1;
            if self.degenerate_run > 1000 {
                self.bland = true;
            }
        }
    }

    /// Chooses the entering column, or None when the basis is optimal.
    fn price(&self) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for j in 0..self.cols.len() {
            if self.lower[j] == self.upper[j] {
                continue;
            }
            let attractive = match self.state[j] {
                VarState::Basic(_) => false,
                VarState::AtLower => self.reduced[j] > DUAL_TOL,
                VarState::AtUpper => self.reduced[j] < -DUAL_TOL,
                VarState::FreeAtZero => self.reduced[j].abs() > DUAL_TOL,
            };
            if !attractive {
                continue;
            }
            if self.bland {
                return Some(j);
            }
            let score = self.reduced[j].abs();
            if best.is_none_or(|(_, s)| score > s) {
                best = Some((j, score));
            }
        }
        best.map(|(j, _)| j)
    }

    /// Finds how far the entering variable can move in direction `sigma`.
    ///
    /// Two passes. The first relaxes every bound by [`RATIO_MARGIN`] and
    /// takes the smallest ratio; the second picks, among the rows whose
    /// exact ratio fits under that cap, the one with the largest pivot
    /// element. Tiny pivots are what blow up the maintained inverse, and on
    /// heavily degenerate programs many rows tie at (nearly) the same
    /// ratio, so the freedom to choose costs at most [`RATIO_MARGIN`] of
    /// bound slack per pivot while keeping the basis well conditioned.
    /// Under Bland's rule the margin is dropped and ties go to the lowest
    /// basis index, preserving the anti-cycling guarantee.
    fn ratio_test(&self, q: usize, sigma: f64) -> StepLimit {
        let span = self.upper[q] - self.lower[q];
        let margin = if self.bland { 0.0 } else { RATIO_MARGIN };
        let wmax = self.scratch_w.iter().fold(0.0f64, |acc, w| acc.max(w.abs()));
        let entry_tol = ENTRY_TOL.max(ENTRY_REL * wmax);

        // beta[i] moves at rate -sigma * w per unit of entering step, toward
        // the basic variable's lower bound when the rate is negative.
        let mut cap = span; // may be infinite
        for i in 0..self.rows {
            let w = self.scratch_w[i];
            if w.abs() <= entry_tol {
                continue;
            }
            let b = self.basis[i];
            let rate = -sigma * w;
            let limit = if rate < 0.0 { self.lower[b] } else { self.upper[b] };
            if !limit.is_finite() {
                continue;
            }
            let relaxed = ((limit - self.beta[i]) / rate + margin / rate.abs()).max(0.0);
            cap = cap.min(relaxed);
        }
        if cap.is_infinite() {
            return StepLimit::Unbounded;
        }

        let mut leaving: Option<(usize, bool, f64, f64)> = None; // row, at_upper, |pivot|, ratio
        for i in 0..self.rows {
            let w = self.scratch_w[i];
            if w.abs() <= entry_tol {
                continue;
            }
            let b = self.basis[i];
            let rate = -sigma * w;
            let (limit, at_upper) = if rate < 0.0 {
                (self.lower[b], false)
            } else {
                (self.upper[b], true)
            };
            if !limit.is_finite() {
                continue;
            }
            let ratio = ((limit - self.beta[i]) / rate).max(0.0);
            if ratio > cap {
                continue;
            }
            let better = match leaving {
                None => true,
                Some((prev_row, _, prev_abs, _)) => {
                    if self.bland {
                        self.basis[i] < self.basis[prev_row]
                    } else {
                        w.abs() > prev_abs + 1e-12
                            || (w.abs() >= prev_abs - 1e-12 && self.basis[i] < self.basis[prev_row])
                    }
                }
            };
            if better {
                leaving = Some((i, at_upper, w.abs(), ratio));
            }
        }
        match leaving {
            Some((row, at_upper, _, ratio)) => StepLimit::Leaving { row, at_upper, ratio },
            None => StepLimit::BoundFlip,
        }
    }

    /// Applies the basis change: `q` enters with step `ratio` in direction
    /// `sigma`, the variable basic in `row` leaves to the bound indicated by
    /// `at_upper`. `scratch_w` must hold the entering column's tableau image.
    fn pivot(&mut self, q: usize, row: usize, sigma: f64, ratio: f64, at_upper: bool) {
        let alpha = self.scratch_w[row];
        debug_assert!(alpha.abs() > ENTRY_TOL, "pivot on a zero element");
        if alpha.abs() < PIVOT_TOL {
            log::debug!("small pivot element {alpha:.3e} accepted");
        }

        let leaving = self.basis[row];
        let entering_value = self.value_of(q) + sigma * ratio;

        // Update basic values.
        for i in 0..self.rows {
            self.beta[i] -= sigma * ratio * self.scratch_w[i];
        }

        // Reduced costs: d_j -= (d_q / alpha) * (row `row` of B^-1 A)_j.
        self.compute_rho(row);
        let dq_over_alpha = self.reduced[q] / alpha;
        if dq_over_alpha != 0.0 {
            for j in 0..self.cols.len() {
                if matches!(self.state[j], VarState::Basic(_)) && j != q {
                    continue;
                }
                let tau = self.tableau_entry(j);
                if tau != 0.0 {
                    self.reduced[j] -= dq_over_alpha * tau;
                }
            }
        }
        self.reduced[leaving] = -dq_over_alpha;
        self.reduced[q] = 0.0;

        // Elementary transformation of the inverse: eliminate the entering
        // column from every row but `row`, scale `row` by 1/alpha.
        let m = self.rows;
        for c in 0..m {
            let base = c * m;
            let pr = self.binv[base + row];
            if pr == 0.0 {
                continue;
            }
            let f = pr / alpha;
            let col = &mut self.binv[base..base + m];
            for (i, entry) in col.iter_mut().enumerate() {
                *entry -= f * self.scratch_w[i];
            }
            col[row] = f;
        }

        self.state[leaving] = if at_upper { VarState::AtUpper } else { VarState::AtLower };
        self.state[q] = VarState::Basic(row);
        self.basis[row] = q;
        self.beta[row] = entering_value;

        self.pivots += 1;
        if self.pivots.is_multiple_of(REFRESH_EVERY) || alpha.abs() < PIVOT_TOL {
            self.refresh();
        }
    }

    /// `scratch_w = B^-1 * column(q)`.
    fn ftran(&mut self, q: usize) {
        let m = self.rows;
        self.scratch_w[..m].fill(0.0);
        for &(i, a) in &self.cols[q] {
            let col = &self.binv[i * m..(i + 1) * m];
            for (w, &e) in self.scratch_w.iter_mut().zip(col) {
                *w += a * e;
            }
        }
    }

    /// `scratch_rho = row r of B^-1` (strided gather).
    fn compute_rho(&mut self, r: usize) {
        let m = self.rows;
        for c in 0..m {
            self.scratch_rho[c] = self.binv[c * m + r];
        }
    }

    /// Dot of the prepared `scratch_rho` with original column `j`.
    fn tableau_entry(&self, j: usize) -> f64 {
        self.cols[j].iter().map(|&(i, a)| self.scratch_rho[i] * a).sum()
    }

    fn value_of(&self, j: usize) -> f64 {
        match self.state[j] {
            VarState::Basic(row) => self.beta[row],
            VarState::AtLower => self.lower[j],
            VarState::AtUpper => self.upper[j],
            VarState::FreeAtZero => 0.0,
        }
    }

    /// Recomputes duals, reduced costs and basic values from the inverse,
    /// rebuilding the inverse first when it has drifted.
    fn refresh(&mut self) {
        self.recompute_beta();
        if self.beta_residual() > REFACTOR_TOL && self.refactorize() {
            self.recompute_beta();
        }
        let m = self.rows;
        let mut y = vec![0.0; m];
        for (c, yc) in y.iter_mut().enumerate() {
            let col = &self.binv[c * m..(c + 1) * m];
            *yc = self.basis.iter().zip(col).map(|(&b, &e)| self.cost[b] * e).sum();
        }
        for j in 0..self.cols.len() {
            if matches!(self.state[j], VarState::Basic(_)) {
                self.reduced[j] = 0.0;
            } else {
                let ya: f64 = self.cols[j].iter().map(|&(i, a)| y[i] * a).sum();
                self.reduced[j] = self.cost[j] - ya;
            }
        }
    }

    fn recompute_beta(&mut self) {
        let m = self.rows;
        let b_eff = self.effective_rhs();
        self.beta[..m].fill(0.0);
        for (c, &bv) in b_eff.iter().enumerate() {
            if bv == 0.0 {
                continue;
            }
            let col = &self.binv[c * m..(c + 1) * m];
            for (t, &e) in self.beta.iter_mut().zip(col) {
                *t += bv * e;
            }
        }
    }

    /// Right-hand side net of the non-basic variables parked at their bounds:
    /// the vector the basic values must solve `B * beta = b_eff` against.
    fn effective_rhs(&self) -> Vec<f64> {
        let mut b_eff = self.rhs.clone();
        for j in 0..self.cols.len() {
            let v = match self.state[j] {
                VarState::Basic(_) => continue,
                VarState::AtLower => self.lower[j],
                VarState::AtUpper => self.upper[j],
                VarState::FreeAtZero => 0.0,
            };
            if v != 0.0 {
                for &(i, a) in &self.cols[j] {
                    b_eff[i] -= a * v;
                }
            }
        }
        b_eff
    }

    /// Largest violation of `B * beta = b_eff`, a cheap gauge of how far the
    /// incrementally updated inverse has strayed from the true one.
    fn beta_residual(&self) -> f64 {
        let mut residual = self.effective_rhs();
        for (r, &b) in self.basis.iter().enumerate() {
            let v = self.beta[r];
            if v == 0.0 {
                continue;
            }
            for &(i, a) in &self.cols[b] {
                residual[i] -= a * v;
            }
        }
        residual.iter().fold(0.0f64, |acc, r| acc.max(r.abs()))
    }

    /// Rebuilds the basis inverse from the original basis columns by
    /// Gauss-Jordan elimination with partial pivoting, shedding whatever
    /// error the elementary updates in `pivot` have accumulated.
    ///
    /// A pivot sequence that accepted a noise-level element can leave a
    /// linearly dependent column in the basis. When elimination exposes one,
    /// the column is swapped out for a unit column on a row no pivot has
    /// claimed yet — the slack already basic on such a row if there is one,
    /// otherwise the row's nonbasic slack, with the dependent variable
    /// parked at a bound. Returns false, leaving the old inverse in place,
    /// only when even that repair cannot produce a usable pivot.
    fn refactorize(&mut self) -> bool {
        let m = self.rows;
        if m == 0 {
            return true;
        }
        let started = std::time::Instant::now();
        // Row-major working copies: row-reduce [mat | inv] to [I | B^-1].
        let mut mat = vec![0.0; m * m];
        for (r, &b) in self.basis.iter().enumerate() {
            for &(i, a) in &self.cols[b] {
                mat[i * m + r] = a;
            }
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        // Original row sitting at each (row-swapped) position, and the basis
        // position of the unit column (slack or artificial) on each original
        // row, if that column is basic.
        let mut perm: Vec<usize> = (0..m).collect();
        let mut unit_basic_at: Vec<Option<usize>> = vec![None; m];
        for (j, &b) in self.basis.iter().enumerate() {
            if b >= self.n_struct {
                unit_basic_at[self.cols[b][0].0] = Some(j);
            }
        }

        let mut pivot_mat = vec![0.0; m];
        let mut pivot_inv = vec![0.0; m];
        for k in 0..m {
            let mut repaired = false;
            let (p, best) = loop {
                let mut p = k;
                let mut best = mat[k * m + k].abs();
                for i in (k + 1)..m {
                    let v = mat[i * m + k].abs();
                    if v > best {
                        best = v;
                        p = i;
                    }
                }
                if best >= SINGULAR_TOL || repaired {
                    break (p, best);
                }
                repaired = true;
                if !self.repair_dependent_column(k, &mut mat, &inv, &perm, &mut unit_basic_at) {
                    break (p, best);
                }
            };
            if best < SINGULAR_TOL {
                log::error!("basis refactorization failed: no pivot for column {k}");
                return false;
            }
            if p != k {
                perm.swap(k, p);
                for j in k..m {
                    mat.swap(k * m + j, p * m + j);
                }
                for j in 0..m {
                    inv.swap(k * m + j, p * m + j);
                }
            }
            let scale = 1.0 / mat[k * m + k];
            for j in k..m {
                mat[k * m + j] *= scale;
            }
            for j in 0..m {
                inv[k * m + j] *= scale;
            }
            pivot_mat[k..m].copy_from_slice(&mat[k * m + k..k * m + m]);
            pivot_inv.copy_from_slice(&inv[k * m..(k + 1) * m]);
            for i in 0..m {
                if i == k {
                    continue;
                }
                let f = mat[i * m + k];
                if f == 0.0 {
                    continue;
                }
                for (x, &pv) in mat[i * m + k..i * m + m].iter_mut().zip(&pivot_mat[k..m]) {
                    *x -= f * pv;
                }
                for (x, &pv) in inv[i * m..(i + 1) * m].iter_mut().zip(&pivot_inv) {
                    *x -= f * pv;
                }
                mat[i * m + k] = 0.0;
            }
        }
        for c in 0..m {
            for i in 0..m {
                self.binv[c * m + i] = inv[i * m + c];
            }
        }
        log::debug!("refactorized a {m}-row basis in {:?}", started.elapsed());
        true
    }

    /// Replaces the dependent basis column at position `k` with a unit
    /// column on one of the rows elimination has not claimed (the originals
    /// at positions `k..`). `inv` holds the row operations applied so far,
    /// so column `u` of it is exactly the reduced image of a fresh unit
    /// column on row `u`; the candidate with the strongest entry in the
    /// unclaimed rows becomes the replacement. Returns false when no
    /// candidate clears the singularity threshold.
    fn repair_dependent_column(
        &mut self,
        k: usize,
        mat: &mut [f64],
        inv: &[f64],
        perm: &[usize],
        unit_basic_at: &mut [Option<usize>],
    ) -> bool {
        let m = self.rows;
        let mut choice: Option<(usize, f64)> = None;
        for &u in &perm[k..m] {
            // A unit column already consumed by an earlier pivot cannot be
            // reused, and a duplicate of one still waiting would make the
            // basis singular again.
            if unit_basic_at[u].is_some_and(|j| j < k) {
                continue;
            }
            let mut score = 0.0f64;
            for i in k..m {
                score = score.max(inv[i * m + u].abs());
            }
            if choice.is_none_or(|(_, s)| score > s) {
                choice = Some((u, score));
            }
        }
        let Some((u, score)) = choice else {
            return false;
        };
        if score < SINGULAR_TOL {
            return false;
        }

        match unit_basic_at[u] {
            // The unit column on row `u` is already basic at a later
            // position: swap the two basis positions so it lands at `k`.
            Some(j) => {
                debug_assert!(j > k, "consumed unit columns were filtered out");
                self.basis.swap(k, j);
                self.state[self.basis[k]] = VarState::Basic(k);
                self.state[self.basis[j]] = VarState::Basic(j);
                self.beta.swap(k, j);
                unit_basic_at[u] = Some(k);
                if self.basis[j] >= self.n_struct {
                    unit_basic_at[self.cols[self.basis[j]][0].0] = Some(j);
                }
                for i in 0..m {
                    mat.swap(i * m + k, i * m + j);
                }
                log::warn!("basis repair: moved the unit column of row {u} to position {k}");
            }
            // Bring in the row's slack and park the dependent variable.
            None => {
                let out = self.basis[k];
                self.state[out] = initial_state(self.lower[out], self.upper[out]);
                if out >= self.n_struct {
                    unit_basic_at[self.cols[out][0].0] = None;
                }
                let slack = self.n_struct + u;
                self.basis[k] = slack;
                self.state[slack] = VarState::Basic(k);
                unit_basic_at[u] = Some(k);
                for i in 0..m {
                    mat[i * m + k] = inv[i * m + u];
                }
                log::warn!("basis repair: replaced a dependent column with the slack of row {u}");
            }
        }
        true
    }

    fn extract(&mut self, problem: &LpProblem) -> LpSolution {
        // One clean refresh (with the drift check) before reading values off.
        self.refresh();
        let mut values = vec![0.0; self.n_struct];
        for (j, v) in values.iter_mut().enumerate() {
            let mut x = self.value_of(j);
            if self.lower[j].is_finite() {
                x = x.max(self.lower[j]);
            }
            if self.upper[j].is_finite() {
                x = x.min(self.upper[j]);
            }
            *v = x;
        }
        let objective = values.iter().zip(&problem.objective).map(|(v, c)| v * c).sum();

        let mut worst = 0.0f64;
        for row in &problem.rows {
            let lhs: f64 = row.coeffs.iter().map(|&(v, c)| values[v] * c).sum();
            let gap = match row.relation {
                Relation::Le => lhs - row.rhs,
                Relation::Ge => row.rhs - lhs,
                Relation::Eq => (lhs - row.rhs).abs(),
            };
            worst = worst.max(gap);
        }
        if worst > 1e-5 {
            log::warn!("solution violates a row by {worst:.3e} after extraction");
        }
        LpSolution { status: LpStatus::Optimal, objective, values }
    }
}

fn initial_state(lo: f64, hi: f64) -> VarState {
    if lo.is_finite() {
        VarState::AtLower
    } else if hi.is_finite() {
        VarState::AtUpper
    } else {
        VarState::FreeAtZero
    }
}
