//! Cross-validates the floating-point simplex against an exact oracle.
//!
//! The oracle is a deliberately naive dense two-phase tableau simplex over
//! `BigRational`, with Bland's rule for both the entering and the leaving
//! choice, so it cannot cycle and cannot suffer rounding error. It shares no
//! code with the production solver. Programs are generated with integer data
//! around a known feasible point, so every one is feasible and bounded and
//! the two solvers must report the same optimum.

use num::rational::BigRational;
use num::{BigInt, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ramf_core::lp::{solve_lp, LpProblem, Relation};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// A generated program: boxed variables, integer data, known-feasible rows.
struct ProgramSpec {
    objective: Vec<i64>,
    upper: Vec<i64>,
    rows: Vec<(Vec<i64>, Relation, i64)>,
}

impl ProgramSpec {
    /// Draws a random boxed program together with an interior certificate:
    /// each row's right-hand side is set so a pre-drawn point satisfies it.
    fn random(rng: &mut ChaCha8Rng) -> ProgramSpec {
        let vars = rng.gen_range(2..=7);
        let upper: Vec<i64> = (0..vars).map(|_| rng.gen_range(1..=10)).collect();
        let objective: Vec<i64> = (0..vars).map(|_| rng.gen_range(-5..=5)).collect();
        let witness: Vec<i64> = upper.iter().map(|&u| rng.gen_range(0..=u)).collect();

        let rows = (0..rng.gen_range(1..=5))
            .map(|_| {
                let coeffs: Vec<i64> = (0..vars)
                    .map(|_| if rng.gen::<f64>() < 0.6 { rng.gen_range(-4..=4) } else { 0 })
                    .collect();
                let at_witness: i64 =
                    coeffs.iter().zip(&witness).map(|(c, x)| c * x).sum();
                let pad = rng.gen_range(0..=3);
                match rng.gen_range(0..3) {
                    0 => (coeffs, Relation::Le, at_witness + pad),
                    1 => (coeffs, Relation::Ge, at_witness - pad),
                    _ => (coeffs, Relation::Eq, at_witness),
                }
            })
            .collect();
        ProgramSpec { objective, upper, rows }
    }

    fn to_problem(&self) -> LpProblem {
        let mut lp = LpProblem::new();
        let vars: Vec<_> = self
            .objective
            .iter()
            .zip(&self.upper)
            .map(|(&c, &u)| lp.add_var(c as f64, 0.0, u as f64))
            .collect();
        for (coeffs, relation, rhs) in &self.rows {
            let terms: Vec<_> = coeffs
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(j, &c)| (vars[j], c as f64))
                .collect();
            lp.add_row(*relation, *rhs as f64, &terms);
        }
        lp
    }
}

/// Dense rational tableau: `rows` of coefficients with the right-hand side
/// in the last column, one basic column per row.
struct Tableau {
    rows: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    columns: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &BigRational {
        &self.rows[r][self.columns]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let factor = self.rows[r][c].clone();
        assert!(!factor.is_zero(), "pivot on a zero entry");
        for cell in self.rows[r].iter_mut() {
            *cell /= factor.clone();
        }
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let scale = self.rows[i][c].clone();
            for j in 0..=self.columns {
                let delta = scale.clone() * self.rows[r][j].clone();
                self.rows[i][j] -= delta;
            }
        }
        self.basis[r] = c;
    }

    /// Runs simplex to optimality under Bland's rule (smallest eligible
    /// entering column, smallest basic column among ratio ties). Boxed
    /// programs cannot be unbounded, so a missing leaving row is a panic.
    fn maximize(&mut self, costs: &[BigRational], enterable: &[bool]) {
        loop {
            let reduced = |j: usize| -> BigRational {
                let mut r = costs[j].clone();
                for (i, row) in self.rows.iter().enumerate() {
                    r -= costs[self.basis[i]].clone() * row[j].clone();
                }
                r
            };
            let Some(entering) = (0..self.columns)
                .find(|&j| enterable[j] && reduced(j).is_positive())
            else {
                return;
            };
            let leaving = (0..self.rows.len())
                .filter(|&i| self.rows[i][entering].is_positive())
                .min_by(|&a, &b| {
                    let ra = self.rhs(a) / &self.rows[a][entering];
                    let rb = self.rhs(b) / &self.rows[b][entering];
                    ra.cmp(&rb).then(self.basis[a].cmp(&self.basis[b]))
                })
                .expect("boxed program cannot be unbounded");
            self.pivot(leaving, entering);
        }
    }
}

/// Solves a generated program exactly and returns the optimal objective.
fn rational_optimum(spec: &ProgramSpec) -> BigRational {
    let vars = spec.objective.len();

    // Gather every constraint — upper bounds included — as coefficients over
    // the original variables, a slack sign (+1 slack, -1 surplus, 0 for an
    // equality) and a non-negative right-hand side.
    let mut standard: Vec<(Vec<BigRational>, i64, BigRational)> = Vec::new();
    for (j, &u) in spec.upper.iter().enumerate() {
        let mut coeffs = vec![BigRational::zero(); vars];
        coeffs[j] = rat(1);
        standard.push((coeffs, 1, rat(u)));
    }
    for (coeffs, relation, rhs) in &spec.rows {
        let mut row: Vec<BigRational> = coeffs.iter().map(|&c| rat(c)).collect();
        let mut rhs = rat(*rhs);
        let mut slack_sign = match relation {
            Relation::Le => 1,
            Relation::Ge => -1,
            Relation::Eq => 0,
        };
        if rhs.is_negative() {
            for c in row.iter_mut() {
                *c = -c.clone();
            }
            rhs = -rhs;
            slack_sign = -slack_sign;
        }
        standard.push((row, slack_sign, rhs));
    }

    // Column layout: originals, one slack column per row (all-zero and thus
    // inert for equalities), one artificial per row. The artificials form
    // the starting identity basis.
    let m = standard.len();
    let width = vars + m;
    let columns = width + m;
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for (i, (coeffs, slack_sign, rhs)) in standard.into_iter().enumerate() {
        let mut row = coeffs;
        row.resize(columns, BigRational::zero());
        row[vars + i] = rat(slack_sign);
        row[width + i] = rat(1);
        row.push(rhs);
        rows.push(row);
    }
    let mut tableau =
        Tableau { rows, basis: (width..width + m).collect(), columns };

    // Phase one: drive the artificials to zero.
    let mut phase_one = vec![BigRational::zero(); columns];
    for cost in phase_one.iter_mut().skip(width) {
        *cost = rat(-1);
    }
    let enterable_all = vec![true; columns];
    tableau.maximize(&phase_one, &enterable_all);
    let infeasibility: BigRational =
        (0..m).filter(|&i| tableau.basis[i] >= width).map(|i| tableau.rhs(i).clone()).sum();
    assert!(infeasibility.is_zero(), "generated program lost its feasibility certificate");

    // Degenerate artificials still in the basis either pivot out onto a real
    // column or sit on a redundant row that can be ignored.
    for r in 0..m {
        if tableau.basis[r] < width {
            continue;
        }
        if let Some(c) = (0..width).find(|&c| !tableau.rows[r][c].is_zero()) {
            tableau.pivot(r, c);
        }
    }

    // Phase two on the real objective, artificial columns locked out.
    let mut phase_two = vec![BigRational::zero(); columns];
    for (j, &c) in spec.objective.iter().enumerate() {
        phase_two[j] = rat(c);
    }
    let mut enterable = vec![true; columns];
    for flag in enterable.iter_mut().skip(width) {
        *flag = false;
    }
    tableau.maximize(&phase_two, &enterable);

    (0..m)
        .filter(|&i| tableau.basis[i] < vars)
        .map(|i| phase_two[tableau.basis[i]].clone() * tableau.rhs(i).clone())
        .sum()
}

fn check(spec: &ProgramSpec, label: &str) {
    let exact = rational_optimum(spec);
    let solution = solve_lp(&spec.to_problem());
    assert!(solution.is_optimal(), "{label}: float solver returned {:?}", solution.status);
    let exact_f64 = exact.numer().to_string().parse::<f64>().unwrap()
        / exact.denom().to_string().parse::<f64>().unwrap();
    assert!(
        (solution.objective - exact_f64).abs() <= 1e-6 * (1.0 + exact_f64.abs()),
        "{label}: float {} vs exact {exact_f64}",
        solution.objective
    );
}

#[test]
fn float_simplex_matches_the_rational_oracle_on_random_programs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for case in 0..150 {
        let spec = ProgramSpec::random(&mut rng);
        check(&spec, &format!("case {case}"));
    }
}

#[test]
fn oracle_agrees_on_a_degenerate_transportation_shape() {
    // Equalities that intersect in many ties force degenerate pivots.
    let spec = ProgramSpec {
        objective: vec![3, 1, 4, 1],
        upper: vec![5, 5, 5, 5],
        rows: vec![
            (vec![1, 1, 0, 0], Relation::Eq, 5),
            (vec![0, 0, 1, 1], Relation::Eq, 5),
            (vec![1, 0, 1, 0], Relation::Le, 5),
            (vec![0, 1, 0, 1], Relation::Ge, 5),
        ],
    };
    check(&spec, "transportation");
}

#[test]
fn oracle_agrees_when_the_objective_is_indifferent() {
    let spec = ProgramSpec {
        objective: vec![0, 0, 0],
        upper: vec![7, 3, 9],
        rows: vec![(vec![1, -1, 2], Relation::Le, 4)],
    };
    check(&spec, "zero objective");
}
