use std::fmt::Write as _;

/// Column index of a variable in an [`LpProblem`].
pub type VarId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub(crate) struct Row {
    pub coeffs: Vec<(VarId, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

/// A linear program in maximisation form: maximise `c.x` subject to rows of
/// `a.x (<=|=|>=) b` and per-variable bounds (infinities allowed).
#[derive(Debug, Clone, Default)]
pub struct LpProblem {
    pub(crate) objective: Vec<f64>,
    pub(crate) lower: Vec<f64>,
    pub(crate) upper: Vec<f64>,
    pub(crate) names: Vec<String>,
    pub(crate) rows: Vec<Row>,
}

impl LpProblem {
    pub fn new() -> Self {
        LpProblem::default()
    }

    pub fn add_var(&mut self, objective: f64, lower: f64, upper: f64) -> VarId {
        let id = self.objective.len();
        self.add_var_named(format!("x{id}"), objective, lower, upper)
    }

    pub fn add_var_named(&mut self, name: String, objective: f64, lower: f64, upper: f64) -> VarId {
        debug_assert!(!lower.is_nan() && !upper.is_nan());
        self.objective.push(objective);
        self.lower.push(lower);
        self.upper.push(upper);
        self.names.push(name);
        self.objective.len() - 1
    }

    /// Adds `coeffs . x (relation) rhs`. Repeated mentions of one variable are
    /// summed.
    pub fn add_row(&mut self, relation: Relation, rhs: f64, coeffs: &[(VarId, f64)]) {
        let mut merged: Vec<(VarId, f64)> = Vec::with_capacity(coeffs.len());
        let mut sorted = coeffs.to_vec();
        sorted.sort_by_key(|&(v, _)| v);
        for (v, c) in sorted {
            debug_assert!(v < self.objective.len(), "row references unknown variable");
            match merged.last_mut() {
                Some((lv, lc)) if *lv == v => *lc += c,
                _ => merged.push((v, c)),
            }
        }
        merged.retain(|&(_, c)| c != 0.0);
        self.rows.push(Row { coeffs: merged, relation, rhs });
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Renders the program in the conventional LP interchange text format,
    /// handy for eyeballing or feeding to an external solver when debugging.
    pub fn to_lp_format(&self) -> String {
        let mut out = String::new();
        out.push_str("Maximize\n obj:");
        for (j, &c) in self.objective.iter().enumerate() {
            if c != 0.0 {
                let _ = write!(out, " {:+} {}", c, self.names[j]);
            }
        }
        out.push_str("\nSubject To\n");
        for (i, row) in self.rows.iter().enumerate() {
            let _ = write!(out, " c{i}:");
            for &(v, c) in &row.coeffs {
                let _ = write!(out, " {:+} {}", c, self.names[v]);
            }
            let rel = match row.relation {
                Relation::Le => "<=",
                Relation::Eq => "=",
                Relation::Ge => ">=",
            };
            let _ = writeln!(out, " {rel} {}", row.rhs);
        }
        out.push_str("Bounds\n");
        for j in 0..self.num_vars() {
            let (lo, hi) = (self.lower[j], self.upper[j]);
            match (lo.is_finite(), hi.is_finite()) {
                (true, true) => {
                    let _ = writeln!(out, " {} <= {} <= {}", lo, self.names[j], hi);
                }
                (true, false) => {
                    let _ = writeln!(out, " {} <= {}", lo, self.names[j]);
                }
                (false, true) => {
                    let _ = writeln!(out, " -inf <= {} <= {}", self.names[j], hi);
                }
                (false, false) => {
                    let _ = writeln!(out, " {} free", self.names[j]);
                }
            }
        }
        out.push_str("End\n");
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solver outcome. `objective` and `values` are meaningful only when
/// `status == LpStatus::Optimal`.
#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub objective: f64,
    pub values: Vec<f64>,
}

impl LpSolution {
    pub(crate) fn infeasible() -> Self {
        LpSolution { status: LpStatus::Infeasible, objective: f64::NAN, values: Vec::new() }
    }

    pub(crate) fn unbounded() -> Self {
        LpSolution { status: LpStatus::Unbounded, objective: f64::NAN, values: Vec::new() }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}
