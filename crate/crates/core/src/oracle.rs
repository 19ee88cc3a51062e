//! Optimal distortion over all non-negative split combinations, by linear programming.
//!
//! For a diversity `δ` the program is
//! `min c  s.t.  δ(A) <= Σ_B w_B δ_B(A) <= c·δ(A)  (|A| >= 2),  w >= 0,  c >= 1`.
//!
//! It is solved in the equivalent form `max t  s.t.  t·δ(A) <= Σ_B v_B δ_B(A) <= δ(A),
//! t <= 1`, whose all-slack basis is feasible, and mapped back by `c = 1/t`, `w = v/t`.

use crate::binomial::binomial_u128;
use crate::diversity::{FiniteDiversity, SetFunction};
use crate::error::{Error, Result};
use crate::lp::{solve_lp, LpProblem, LpSolution, LpStatus, Sense};
use crate::phi::PhiTable;
use crate::profile::SymmetricProfile;
use crate::split::SplitWeighting;
use crate::subset;

/// Largest ground set handled by the full split LP.
pub const ORACLE_CAP: usize = 8;

/// Largest ground set handled by the symmetry-reduced LP.
pub const SYMMETRIC_ORACLE_CAP: usize = 63;

#[derive(Debug, Clone)]
pub struct OptimalSplit {
    pub distortion: f64,
    pub witness: SplitWeighting,
    pub iterations: usize,
    /// Largest constraint violation of the LP solution, in the normalized scale.
    pub max_violation: f64,
}

/// Canonical split sides in increasing mask order.
pub fn canonical_splits(n: usize) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    (1..subset::full(n)).filter(|m| m & 1 == 0).collect()
}

/// Builds the split LP with variables ordered as `splits` followed by `c`. Values are
/// rescaled so the largest is 1; `c` is scale-free.
pub fn split_lp(div: &FiniteDiversity, splits: &[u64]) -> (LpProblem, f64) {
    let n = div.n();
    let scale = div.values().iter().copied().fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let vars = splits.len() + 1;
    let mut p = LpProblem::new(vars);
    p.objective[vars - 1] = 1.0;
    for a in (0..1u64 << n).filter(|a| a.count_ones() >= 2) {
        let target = div.value(a) / scale;
        let mut row: Vec<f64> = splits.iter().map(|&b| subset::cuts(b, a) as u8 as f64).collect();
        row.push(0.0);
        p.add_constraint(row.clone(), Sense::Ge, target);
        row[vars - 1] = -target;
        p.add_constraint(row, Sense::Le, 0.0);
    }
    let mut floor = vec![0.0; vars];
    floor[vars - 1] = 1.0;
    p.add_constraint(floor, Sense::Ge, 1.0);
    (p, scale)
}

fn expect_optimal(solution: &LpSolution) -> Result<()> {
    match solution.status {
        LpStatus::Optimal => Ok(()),
        other => Err(Error::Internal(format!("split LP reported {other:?}; it is always feasible and bounded"))),
    }
}

/// Builds `max t  s.t.  t·target_r <= row_r·v <= target_r,  t <= 1` for rows `(row, target)`.
fn reciprocal_lp(rows: impl Iterator<Item = (Vec<f64>, f64)>, vars: usize) -> LpProblem {
    let mut p = LpProblem::new(vars + 1);
    p.objective[vars] = -1.0;
    for (mut row, target) in rows {
        row.push(0.0);
        p.add_constraint(row.clone(), Sense::Le, target);
        row.iter_mut().for_each(|v| *v = -*v);
        row[vars] = target;
        p.add_constraint(row, Sense::Le, 0.0);
    }
    p.upper_bounds[vars] = Some(1.0);
    p
}

/// Solves the reciprocal form and returns `(c, w)` in the scale of the rows.
fn solve_reciprocal(p: &LpProblem) -> Result<(f64, Vec<f64>, usize)> {
    let solution = solve_lp(p)?;
    expect_optimal(&solution)?;
    let vars = p.num_vars() - 1;
    let t = solution.x[vars];
    if t <= 0.0 {
        return Err(Error::Internal("split LP optimum has zero contraction".into()));
    }
    let w = solution.x[..vars].iter().map(|v| v / t).collect();
    Ok((1.0 / t, w, solution.iterations))
}

/// Optimal split-embedding distortion of `div` and a witness weighting.
pub fn optimal_split_distortion(div: &FiniteDiversity) -> Result<OptimalSplit> {
    optimal_split_distortion_ordered(div, &canonical_splits(div.n()))
}

/// Same as [`optimal_split_distortion`] with a caller-chosen order of split variables.
pub fn optimal_split_distortion_ordered(div: &FiniteDiversity, splits: &[u64]) -> Result<OptimalSplit> {
    let n = div.n();
    if n > ORACLE_CAP {
        return Err(Error::CapExceeded {
            operation: "split distortion LP",
            n,
            cap: ORACLE_CAP,
        });
    }
    if n < 2 {
        return Ok(OptimalSplit {
            distortion: 1.0,
            witness: SplitWeighting::new(n),
            iterations: 0,
            max_violation: 0.0,
        });
    }
    let (problem, scale) = split_lp(div, splits);
    let rows = (0..1u64 << n).filter(|a| a.count_ones() >= 2).map(|a| {
        let row = splits.iter().map(|&b| subset::cuts(b, a) as u8 as f64).collect();
        (row, div.value(a) / scale)
    });
    let (distortion, w, iterations) = solve_reciprocal(&reciprocal_lp(rows, splits.len()))?;
    let mut witness = SplitWeighting::new(n);
    for (&b, &v) in splits.iter().zip(&w) {
        if v > 0.0 {
            witness.add(b, v * scale)?;
        }
    }
    let mut x = w;
    x.push(distortion);
    Ok(OptimalSplit {
        distortion,
        witness,
        iterations,
        max_violation: problem.max_violation(&x),
    })
}

/// Optimal split distortion of a symmetric diversity, using weights that depend only on
/// the size of a split's smaller side.
///
/// A symmetric diversity always has such an optimal witness: averaging any feasible
/// weighting over all permutations of the ground set stays feasible with the same `c`.
/// The variables are coefficients `ν_s` of `φ_s`, `1 <= s <= ⌊n/2⌋`.
pub fn optimal_symmetric_split_distortion(f: &SymmetricProfile) -> Result<(f64, Vec<f64>)> {
    let n = f.n();
    if n > SYMMETRIC_ORACLE_CAP {
        return Err(Error::CapExceeded {
            operation: "symmetric split distortion LP",
            n,
            cap: SYMMETRIC_ORACLE_CAP,
        });
    }
    if n < 2 {
        return Ok((1.0, Vec::new()));
    }
    let table = PhiTable::new(n)?;
    let classes = n / 2;
    let scale = f.at(n - 1);
    let rows = (1..n).map(|k| ((1..=classes).map(|s| table.get(s, k)).collect(), f.at(k) / scale));
    let (distortion, nu, _) = solve_reciprocal(&reciprocal_lp(rows, classes))?;
    Ok((distortion, nu.iter().map(|v| v * scale).collect()))
}

/// Expands `φ_s` coefficients into per-split weights: `ν_s / (2·C(n−2, s−1))` on every side of size `s`.
pub fn weighting_from_phi_coefficients(n: usize, nu: &[f64]) -> Result<SplitWeighting> {
    let mut w = SplitWeighting::new(n);
    for (idx, &coef) in nu.iter().enumerate() {
        let s = idx + 1;
        if coef <= 0.0 {
            continue;
        }
        let count = binomial_u128(n as i64 - 2, s as i64 - 1).ok_or_else(|| Error::Internal("binomial overflow".into()))?;
        let per_subset = coef / (2.0 * count as f64);
        for side in subset::with_cardinality(n, s) {
            w.add(side, per_subset)?;
        }
    }
    Ok(w)
}
