//! Dense two-phase simplex: Dantzig pricing, a Harris ratio test with a lexicographic
//! anti-cycling tie-break, and a final recomputation of the basic solution.
//!
//! Problems are minimizations over non-negative variables with optional upper bounds.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("non-finite coefficient in {0}")]
    NonFinite(String),
    #[error("iteration limit of {limit} pivots exceeded")]
    IterationLimit { limit: usize },
    #[error("malformed LP dump at line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpConstraint {
    pub coeffs: Vec<f64>,
    pub sense: Sense,
    pub rhs: f64,
}

/// `minimize objective·x` subject to the constraints, `0 <= x <= upper`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub constraints: Vec<LpConstraint>,
    pub upper_bounds: Vec<Option<f64>>,
}

impl LpProblem {
    pub fn new(num_vars: usize) -> Self {
        LpProblem {
            objective: vec![0.0; num_vars],
            constraints: Vec::new(),
            upper_bounds: vec![None; num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_constraint(&mut self, coeffs: Vec<f64>, sense: Sense, rhs: f64) {
        self.constraints.push(LpConstraint { coeffs, sense, rhs });
    }

    fn validate(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        if self.upper_bounds.len() != n {
            return Err(LpError::DimensionMismatch(format!(
                "{} upper bounds for {n} variables",
                self.upper_bounds.len()
            )));
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(LpError::NonFinite("objective".into()));
        }
        for (i, row) in self.constraints.iter().enumerate() {
            if row.coeffs.len() != n {
                return Err(LpError::DimensionMismatch(format!(
                    "constraint {i} has {} coefficients for {n} variables",
                    row.coeffs.len()
                )));
            }
            if !row.rhs.is_finite() || row.coeffs.iter().any(|c| !c.is_finite()) {
                return Err(LpError::NonFinite(format!("constraint {i}")));
            }
        }
        if let Some(j) = self.upper_bounds.iter().position(|u| matches!(u, Some(v) if !v.is_finite())) {
            return Err(LpError::NonFinite(format!("upper bound of x{j}")));
        }
        Ok(())
    }

    /// Largest violation of any constraint or bound at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst = x.iter().map(|v| -v).fold(0.0, f64::max);
        for (v, u) in x.iter().zip(&self.upper_bounds) {
            if let Some(u) = u {
                worst = worst.max(v - u);
            }
        }
        for row in &self.constraints {
            let lhs: f64 = row.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
            let gap = match row.sense {
                Sense::Le => lhs - row.rhs,
                Sense::Ge => row.rhs - lhs,
                Sense::Eq => (lhs - row.rhs).abs(),
            };
            worst = worst.max(gap);
        }
        worst
    }

    /// Textual dump: `min c0 c1 ..`, then `row a0 a1 .. <=|>=|= b` per constraint,
    /// then `ub j u` per bounded variable.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let join = |v: &[f64]| v.iter().map(|c| format!("{c:?}")).collect::<Vec<_>>().join(" ");
        let _ = writeln!(out, "min {}", join(&self.objective));
        for row in &self.constraints {
            let _ = writeln!(out, "row {} {} {:?}", join(&row.coeffs), row.sense.symbol(), row.rhs);
        }
        for (j, u) in self.upper_bounds.iter().enumerate() {
            if let Some(u) = u {
                let _ = writeln!(out, "ub {j} {u:?}");
            }
        }
        out
    }

    /// Parses the format written by [`LpProblem::dump`].
    pub fn parse_dump(text: &str) -> Result<Self, LpError> {
        let err = |line: usize, message: &str| LpError::Parse {
            line,
            message: message.to_string(),
        };
        let num = |line: usize, tok: &str| tok.parse::<f64>().map_err(|_| err(line, &format!("bad number {tok:?}")));
        let mut problem: Option<LpProblem> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let mut tokens = raw.split_whitespace();
            let Some(head) = tokens.next() else { continue };
            let rest: Vec<&str> = tokens.collect();
            match head {
                "min" => {
                    if problem.is_some() {
                        return Err(err(line, "duplicate objective"));
                    }
                    let objective = rest.iter().map(|t| num(line, t)).collect::<Result<Vec<_>, _>>()?;
                    let mut p = LpProblem::new(objective.len());
                    p.objective = objective;
                    problem = Some(p);
                }
                "row" => {
                    let p = problem.as_mut().ok_or_else(|| err(line, "row before objective"))?;
                    let n = p.num_vars();
                    if rest.len() != n + 2 {
                        return Err(err(line, "wrong number of tokens"));
                    }
                    let coeffs = rest[..n].iter().map(|t| num(line, t)).collect::<Result<Vec<_>, _>>()?;
                    let sense = match rest[n] {
                        "<=" => Sense::Le,
                        ">=" => Sense::Ge,
                        "=" => Sense::Eq,
                        other => return Err(err(line, &format!("unknown sense {other:?}"))),
                    };
                    p.add_constraint(coeffs, sense, num(line, rest[n + 1])?);
                }
                "ub" => {
                    let p = problem.as_mut().ok_or_else(|| err(line, "bound before objective"))?;
                    if rest.len() != 2 {
                        return Err(err(line, "wrong number of tokens"));
                    }
                    let j: usize = rest[0].parse().map_err(|_| err(line, "bad variable index"))?;
                    if j >= p.num_vars() {
                        return Err(err(line, "variable index out of range"));
                    }
                    p.upper_bounds[j] = Some(num(line, rest[1])?);
                }
                other => return Err(err(line, &format!("unknown record {other:?}"))),
            }
        }
        let p = problem.ok_or_else(|| err(0, "missing objective"))?;
        p.validate().map_err(|e| err(0, &e.to_string()))?;
        Ok(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub objective: f64,
    pub x: Vec<f64>,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOptions {
    pub pivot_tol: f64,
    pub feasibility_tol: f64,
    pub max_iterations: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            pivot_tol: 1e-10,
            feasibility_tol: 1e-7,
            max_iterations: 200_000,
        }
    }
}

pub fn solve_lp(problem: &LpProblem) -> Result<LpSolution, LpError> {
    solve_lp_with(problem, &SimplexOptions::default())
}

pub fn solve_lp_with(problem: &LpProblem, options: &SimplexOptions) -> Result<LpSolution, LpError> {
    problem.validate()?;
    let mut tableau = Tableau::build(problem);
    let mut iterations = 0;

    // Phase 1: minimize the sum of artificials.
    let phase1 = tableau.run(options, &mut iterations, true)?;
    debug_assert!(phase1, "phase 1 is bounded below by zero");
    if -tableau.objective_rhs() > options.feasibility_tol {
        return Ok(LpSolution {
            status: LpStatus::Infeasible,
            objective: f64::NAN,
            x: Vec::new(),
            iterations,
        });
    }
    tableau.drive_out_artificials(options.pivot_tol);

    // Phase 2: original objective, artificial columns barred from entering.
    tableau.load_objective(&problem.objective);
    if !tableau.run(options, &mut iterations, false)? {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            objective: f64::NEG_INFINITY,
            x: Vec::new(),
            iterations,
        });
    }
    let x = tableau.primal(problem.num_vars());
    let objective = problem.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(LpSolution {
        status: LpStatus::Optimal,
        objective,
        x,
        iterations,
    })
}

/// Entries smaller than this after a pivot are treated as exact zeros.
const ROUNDOFF: f64 = 1e-13;

/// Pivots below this fraction of the largest tied pivot are not taken.
const PIVOT_RATIO: f64 = 1e-3;

/// Entries closer than this compare equal in the lexicographic tie-break.
const LEX_TOL: f64 = 1e-11;

/// Largest accepted change of a basic value by the final recomputation.
const REFINE_TOL: f64 = 1e-6;

/// Primal slack allowed in the first pass of the ratio test.
const HARRIS_RELAX: f64 = 1e-10;

/// Row-major tableau; the last row holds reduced costs and `−z` in its last column.
struct Tableau {
    rows: usize,
    width: usize,
    first_artificial: usize,
    data: Vec<f64>,
    basis: Vec<usize>,
    initial_basis: Vec<usize>,
    /// Constraint rows as built, before any pivot.
    original: Vec<f64>,
}

impl Tableau {
    fn build(problem: &LpProblem) -> Self {
        let n = problem.num_vars();
        let mut rows: Vec<(Vec<f64>, Sense, f64)> = problem
            .constraints
            .iter()
            .map(|c| (c.coeffs.clone(), c.sense, c.rhs))
            .collect();
        for (j, u) in problem.upper_bounds.iter().enumerate() {
            if let Some(u) = u {
                let mut coeffs = vec![0.0; n];
                coeffs[j] = 1.0;
                rows.push((coeffs, Sense::Le, *u));
            }
        }
        for (coeffs, sense, rhs) in rows.iter_mut() {
            if *rhs < 0.0 {
                coeffs.iter_mut().for_each(|c| *c = -*c);
                *rhs = -*rhs;
                *sense = match sense {
                    Sense::Le => Sense::Ge,
                    Sense::Ge => Sense::Le,
                    Sense::Eq => Sense::Eq,
                };
            }
        }
        let m = rows.len();
        let slacks = rows.iter().filter(|r| r.1 != Sense::Eq).count();
        let artificials = rows.iter().filter(|r| r.1 != Sense::Le).count();
        let first_slack = n;
        let first_artificial = n + slacks;
        let width = first_artificial + artificials + 1;
        let mut data = vec![0.0; (m + 1) * width];
        let mut basis = vec![0; m];
        let (mut slack, mut artificial) = (first_slack, first_artificial);
        for (i, (coeffs, sense, rhs)) in rows.iter().enumerate() {
            let row = &mut data[i * width..(i + 1) * width];
            row[..n].copy_from_slice(coeffs);
            row[width - 1] = *rhs;
            match sense {
                Sense::Le => {
                    row[slack] = 1.0;
                    basis[i] = slack;
                    slack += 1;
                }
                Sense::Ge => {
                    row[slack] = -1.0;
                    slack += 1;
                    row[artificial] = 1.0;
                    basis[i] = artificial;
                    artificial += 1;
                }
                Sense::Eq => {
                    row[artificial] = 1.0;
                    basis[i] = artificial;
                    artificial += 1;
                }
            }
        }
        let original = data[..m * width].to_vec();
        let mut t = Tableau {
            rows: m,
            width,
            first_artificial,
            data,
            initial_basis: basis.clone(),
            basis,
            original,
        };
        let mut phase1 = vec![0.0; width - 1];
        phase1[first_artificial..].iter_mut().for_each(|c| *c = 1.0);
        t.load_objective(&phase1);
        t
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.width + j]
    }

    fn objective_rhs(&self) -> f64 {
        self.at(self.rows, self.width - 1)
    }

    /// Writes reduced costs for `costs` (missing entries are 0) given the current basis.
    fn load_objective(&mut self, costs: &[f64]) {
        let w = self.width;
        let cost = |j: usize| costs.get(j).copied().unwrap_or(0.0);
        let mut obj = vec![0.0; w];
        for (j, o) in obj.iter_mut().enumerate().take(w - 1) {
            *o = cost(j);
        }
        for i in 0..self.rows {
            let cb = cost(self.basis[i]);
            if cb != 0.0 {
                let row = &self.data[i * w..(i + 1) * w];
                for (o, a) in obj.iter_mut().zip(row) {
                    *o -= cb * a;
                }
            }
        }
        self.data[self.rows * w..].copy_from_slice(&obj);
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width;
        let p = self.at(r, c);
        {
            let row = &mut self.data[r * w..(r + 1) * w];
            row.iter_mut().for_each(|v| *v /= p);
            row[c] = 1.0;
        }
        let pivot_row: Vec<f64> = self.data[r * w..(r + 1) * w].to_vec();
        for i in 0..=self.rows {
            if i == r {
                continue;
            }
            let factor = self.data[i * w + c];
            if factor != 0.0 {
                let row = &mut self.data[i * w..(i + 1) * w];
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= factor * pv;
                    if v.abs() < ROUNDOFF {
                        *v = 0.0;
                    }
                }
                row[c] = 0.0;
            }
        }
        // degenerate rows drift below zero through round-off; keep the basis primal feasible
        for i in 0..self.rows {
            let rhs = &mut self.data[i * w + w - 1];
            if *rhs < 0.0 && *rhs > -1e-9 {
                *rhs = 0.0;
            }
        }
        self.basis[r] = c;
    }

    /// Pivots to optimality with Dantzig pricing. Returns `false` when unbounded.
    fn run(&mut self, options: &SimplexOptions, iterations: &mut usize, allow_artificial: bool) -> Result<bool, LpError> {
        let entering_limit = if allow_artificial { self.width - 1 } else { self.first_artificial };
        loop {
            let obj = self.rows * self.width;
            let entering = self.data[obj..obj + entering_limit]
                .iter()
                .enumerate()
                .filter(|(_, &d)| d < -options.pivot_tol)
                .min_by(|a, b| a.1.total_cmp(b.1))
                .map(|(j, _)| j);
            let Some(c) = entering else {
                return Ok(true);
            };
            let Some(r) = self.leaving_row(c, options) else {
                return Ok(false);
            };
            if *iterations >= options.max_iterations {
                return Err(LpError::IterationLimit {
                    limit: options.max_iterations,
                });
            }
            self.pivot(r, c);
            *iterations += 1;
        }
    }

    /// Ratio test. A relaxed first pass (Harris) bounds the step; among rows reaching
    /// the bound, pivots much smaller than the largest are discarded and the remaining
    /// tie is broken lexicographically on the initial-basis columns, which rules out cycling.
    fn leaving_row(&self, c: usize, options: &SimplexOptions) -> Option<usize> {
        let rhs = self.width - 1;
        let candidates: Vec<usize> = (0..self.rows).filter(|&i| self.at(i, c) > options.pivot_tol).collect();
        let bound = candidates
            .iter()
            .map(|&i| (self.at(i, rhs).max(0.0) + HARRIS_RELAX) / self.at(i, c))
            .fold(f64::INFINITY, f64::min);
        if !bound.is_finite() {
            return None;
        }
        let ties: Vec<usize> = candidates
            .into_iter()
            .filter(|&i| self.at(i, rhs).max(0.0) / self.at(i, c) <= bound)
            .collect();
        let largest = ties.iter().map(|&i| self.at(i, c)).fold(0.0, f64::max);
        ties.into_iter()
            .filter(|&i| self.at(i, c) >= PIVOT_RATIO * largest)
            .min_by(|&i, &j| self.lex_cmp(i, j, c))
    }

    fn lex_cmp(&self, i: usize, j: usize, c: usize) -> std::cmp::Ordering {
        let (ai, aj) = (self.at(i, c), self.at(j, c));
        for &col in &self.initial_basis {
            let (u, v) = (self.at(i, col) / ai, self.at(j, col) / aj);
            if (u - v).abs() > LEX_TOL {
                return u.total_cmp(&v);
            }
        }
        self.basis[i].cmp(&self.basis[j])
    }

    /// Pivots basic artificials (at level zero) out on any usable structural or slack column.
    fn drive_out_artificials(&mut self, pivot_tol: f64) {
        for r in 0..self.rows {
            if self.basis[r] >= self.first_artificial {
                if let Some(c) = (0..self.first_artificial).find(|&j| self.at(r, j).abs() > pivot_tol) {
                    self.pivot(r, c);
                }
                // otherwise the row is redundant and its artificial stays basic at zero
            }
        }
    }

    fn primal(&self, n: usize) -> Vec<f64> {
        let values = self.refined_basic_values().unwrap_or_else(|| (0..self.rows).map(|i| self.at(i, self.width - 1)).collect());
        let mut x = vec![0.0; n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < n {
                x[b] = values[i].max(0.0);
            }
        }
        x
    }

    /// Solves `B x_B = b` against the original rows, removing round-off accumulated over
    /// many pivots. `None` if the basis is numerically singular or the result strays
    /// from the tableau values.
    fn refined_basic_values(&self) -> Option<Vec<f64>> {
        let (m, w) = (self.rows, self.width);
        if m == 0 {
            return Some(Vec::new());
        }
        let basis = DMatrix::from_fn(m, m, |i, k| self.original[i * w + self.basis[k]]);
        let rhs = DVector::from_fn(m, |i, _| self.original[i * w + w - 1]);
        let solved = basis.lu().solve(&rhs)?;
        let consistent = solved
            .iter()
            .enumerate()
            .all(|(i, v)| v.is_finite() && (v - self.at(i, w - 1)).abs() <= REFINE_TOL);
        consistent.then(|| solved.iter().copied().collect())
    }
}
