//! Finite diversities: evaluation, axiom checks, induced metric, skewness and symmetrization.

use crate::error::{Error, Result};
use crate::metric::Metric;
use crate::profile::SymmetricProfile;
use crate::subset;

/// Largest ground set for which a diversity is stored densely (one value per subset).
pub const DENSE_CAP: usize = 24;

/// Default cap for the exhaustive `8^n` axiom check.
pub const EXHAUSTIVE_CAP: usize = 8;

/// Slack applied to the set-triangle inequality so that exact-boundary cases pass.
pub const AXIOM_SLACK: f64 = 1e-12;

/// Anything that assigns a value to each subset of a finite ground set.
pub trait SetFunction {
    fn ground_size(&self) -> usize;

    /// Value of the subset `mask`. Callers guarantee `mask` lies inside the ground set.
    fn value(&self, mask: u64) -> f64;

    /// Values of all `2^n` subsets indexed by mask.
    fn tabulate(&self) -> Vec<f64> {
        (0..1u64 << self.ground_size()).map(|m| self.value(m)).collect()
    }
}

/// A diversity on `{0..n-1}` with one stored value per subset.
///
/// Construction enforces (D1): values are finite and non-negative, vanish on
/// subsets of size at most one and are positive elsewhere. The set-triangle
/// inequality (D2) is checked on demand with [`FiniteDiversity::check_axioms_exhaustive`]
/// or [`FiniteDiversity::check_axioms_reduced`].
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteDiversity {
    n: usize,
    values: Vec<f64>,
}

/// Outcome of an axiom check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AxiomVerdict {
    Pass,
    Fail(Violation),
}

impl AxiomVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, AxiomVerdict::Pass)
    }
}

/// A witness that a set function is not a diversity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Violation {
    /// `δ(A∪B) + δ(B∪C) < δ(A∪C)` with `B` non-empty.
    Triangle {
        a: u64,
        b: u64,
        c: u64,
        lhs: f64,
        rhs: f64,
    },
    /// `δ(smaller) > δ(larger)` although `smaller ⊆ larger`.
    Monotonicity { smaller: u64, larger: u64 },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            Violation::Triangle { a, b, c, lhs, rhs } => write!(
                f,
                "A={:?} B={:?} C={:?}: d(A∪B)+d(B∪C) = {lhs} < d(A∪C) = {rhs}",
                subset::to_indices(a),
                subset::to_indices(b),
                subset::to_indices(c)
            ),
            Violation::Monotonicity { smaller, larger } => write!(
                f,
                "monotonicity fails: d({:?}) > d({:?})",
                subset::to_indices(smaller),
                subset::to_indices(larger)
            ),
        }
    }
}

impl FiniteDiversity {
    /// Builds a diversity from a dense table of `2^n` values indexed by mask.
    pub fn from_values(n: usize, values: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDiversity("ground set must be non-empty".into()));
        }
        if n > DENSE_CAP {
            return Err(Error::CapExceeded {
                operation: "dense diversity storage",
                n,
                cap: DENSE_CAP,
            });
        }
        if values.len() != 1usize << n {
            return Err(Error::DimensionMismatch(format!(
                "expected {} values for n = {n}, got {}",
                1usize << n,
                values.len()
            )));
        }
        for (mask, &v) in values.iter().enumerate() {
            let size = (mask as u64).count_ones();
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidDiversity(format!(
                    "value {v} on {:?} is not finite and non-negative",
                    subset::to_indices(mask as u64)
                )));
            }
            if size <= 1 && v != 0.0 {
                return Err(Error::InvalidDiversity(format!(
                    "value on {:?} must be 0",
                    subset::to_indices(mask as u64)
                )));
            }
            if size >= 2 && v == 0.0 {
                return Err(Error::InvalidDiversity(format!(
                    "value on {:?} must be positive",
                    subset::to_indices(mask as u64)
                )));
            }
        }
        Ok(FiniteDiversity { n, values })
    }

    /// Tabulates `value` on every subset of size at least two; smaller subsets get 0.
    pub fn from_fn(n: usize, value: impl Fn(u64) -> f64) -> Result<Self> {
        if n > DENSE_CAP {
            return Err(Error::CapExceeded {
                operation: "dense diversity storage",
                n,
                cap: DENSE_CAP,
            });
        }
        let values = (0..1u64 << n)
            .map(|m| if m.count_ones() <= 1 { 0.0 } else { value(m) })
            .collect();
        Self::from_values(n, values)
    }

    /// Tabulates any set function, e.g. a split weighting or a point configuration.
    pub fn from_set_function(f: &impl SetFunction) -> Result<Self> {
        Self::from_values(f.ground_size(), f.tabulate())
    }

    /// Builds a diversity from explicit `(subset, value)` entries. Every subset of
    /// size at least two must appear exactly once.
    pub fn from_entries(n: usize, entries: impl IntoIterator<Item = (u64, f64)>) -> Result<Self> {
        if n == 0 || n > DENSE_CAP {
            return Err(Error::CapExceeded {
                operation: "dense diversity storage",
                n,
                cap: DENSE_CAP,
            });
        }
        let mut values = vec![f64::NAN; 1usize << n];
        values[0] = 0.0;
        for i in 0..n {
            values[1 << i] = 0.0;
        }
        for (mask, v) in entries {
            subset::check_within(n, mask)?;
            if mask.count_ones() < 2 {
                return Err(Error::InvalidDiversity(format!(
                    "entry for {:?} has fewer than two elements",
                    subset::to_indices(mask)
                )));
            }
            if !values[mask as usize].is_nan() {
                return Err(Error::InvalidDiversity(format!(
                    "duplicate entry for {:?}",
                    subset::to_indices(mask)
                )));
            }
            if v.is_nan() {
                return Err(Error::InvalidDiversity(format!(
                    "value on {:?} is NaN",
                    subset::to_indices(mask)
                )));
            }
            values[mask as usize] = v;
        }
        if let Some(missing) = values.iter().position(|v| v.is_nan()) {
            return Err(Error::InvalidDiversity(format!(
                "missing entry for {:?}",
                subset::to_indices(missing as u64)
            )));
        }
        Self::from_values(n, values)
    }

    /// The symmetric diversity `δ(A) = f(|A| - 1)`.
    pub fn from_profile(profile: &SymmetricProfile) -> Result<Self> {
        Self::from_set_function(profile)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value of the subset `mask`; fails when `mask` leaves the ground set.
    pub fn evaluate(&self, mask: u64) -> Result<f64> {
        subset::check_within(self.n, mask)?;
        Ok(self.values[mask as usize])
    }

    /// Checks (D2) on every triple `(A, B, C)` with `B` non-empty, `8^n` work.
    pub fn check_axioms_exhaustive(&self) -> Result<AxiomVerdict> {
        self.check_axioms_exhaustive_with_cap(EXHAUSTIVE_CAP)
    }

    pub fn check_axioms_exhaustive_with_cap(&self, cap: usize) -> Result<AxiomVerdict> {
        if self.n > cap {
            return Err(Error::CapExceeded {
                operation: "exhaustive axiom check",
                n: self.n,
                cap,
            });
        }
        let size = 1u64 << self.n;
        let v = &self.values;
        for a in 0..size {
            for b in 1..size {
                let ab = v[(a | b) as usize];
                for c in 0..size {
                    let lhs = ab + v[(b | c) as usize];
                    let rhs = v[(a | c) as usize];
                    if lhs < rhs - AXIOM_SLACK {
                        return Ok(AxiomVerdict::Fail(Violation::Triangle { a, b, c, lhs, rhs }));
                    }
                }
            }
        }
        Ok(AxiomVerdict::Pass)
    }

    /// Checks monotonicity plus (D2) restricted to singleton `B`, `n·4^n` work.
    pub fn check_axioms_reduced(&self) -> AxiomVerdict {
        let n = self.n;
        let size = 1u64 << n;
        let v = &self.values;
        for a in 0..size {
            for x in 0..n {
                let larger = a | 1 << x;
                if larger != a && v[a as usize] > v[larger as usize] + AXIOM_SLACK {
                    return AxiomVerdict::Fail(Violation::Monotonicity { smaller: a, larger });
                }
            }
        }
        for x in 0..n {
            let b = 1u64 << x;
            for a in 0..size {
                let ab = v[(a | b) as usize];
                for c in 0..size {
                    let lhs = ab + v[(b | c) as usize];
                    let rhs = v[(a | c) as usize];
                    if lhs < rhs - AXIOM_SLACK {
                        return AxiomVerdict::Fail(Violation::Triangle { a, b, c, lhs, rhs });
                    }
                }
            }
        }
        AxiomVerdict::Pass
    }

    /// The metric `d(a, b) = δ({a, b})`.
    pub fn induced_metric(&self) -> Metric {
        let n = self.n;
        let mut d = vec![0.0; n * n];
        for a in 0..n {
            for b in 0..n {
                if a != b {
                    d[a * n + b] = self.values[(1usize << a) | (1usize << b)];
                }
            }
        }
        Metric::new_unchecked(n, d)
    }

    /// Largest ratio `δ(A)/δ(B)` over subsets with `|A| = |B| ≥ 2`.
    pub fn skewness(&self) -> Result<f64> {
        if self.n < 2 {
            return Err(Error::OutOfRange("skewness needs n >= 2".into()));
        }
        let (max, min) = self.cardinality_extremes();
        Ok((2..=self.n)
            .map(|k| max[k] / min[k])
            .fold(1.0, f64::max))
    }

    /// The profile `f(k) = max{δ(A) : |A| = k + 1}`.
    ///
    /// Satisfies `δ(A) ≤ f(|A|-1) ≤ γ·δ(A)` where `γ` is the skewness.
    pub fn symmetrize(&self) -> Result<SymmetricProfile> {
        let (max, _) = self.cardinality_extremes();
        SymmetricProfile::new(max[1..].to_vec())
    }

    /// Per-cardinality maxima and minima, indexed by subset size.
    fn cardinality_extremes(&self) -> (Vec<f64>, Vec<f64>) {
        let mut max = vec![0.0f64; self.n + 1];
        let mut min = vec![f64::INFINITY; self.n + 1];
        for (mask, &v) in self.values.iter().enumerate() {
            let k = (mask as u64).count_ones() as usize;
            max[k] = max[k].max(v);
            min[k] = min[k].min(v);
        }
        (max, min)
    }

    /// Whether every subset of equal size carries the same value (within `tol`).
    pub fn is_symmetric(&self, tol: f64) -> bool {
        let (max, min) = self.cardinality_extremes();
        (2..=self.n).all(|k| max[k] - min[k] <= tol)
    }
}

impl SetFunction for FiniteDiversity {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn value(&self, mask: u64) -> f64 {
        self.values[mask as usize]
    }

    fn tabulate(&self) -> Vec<f64> {
        self.values.clone()
    }
}
