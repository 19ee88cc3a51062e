//! Symmetric profiles, their least concave majorant and the truncation basis `ψ_i(j) = min(i, j)`.

use crate::diversity::SetFunction;
use crate::error::{Error, Result};

/// Slack used when checking the profile axioms.
pub const PROFILE_SLACK: f64 = 1e-12;

/// Tolerance for concavity and reconstruction checks.
pub const CONCAVE_TOL: f64 = 1e-9;

/// The first profile axiom a sequence violates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileViolation {
    Empty,
    /// `f(0) != 0` (k = 0) or `f(k) <= 0` for some `k >= 1`.
    S1 { k: usize },
    /// `f(k) > f(k + 1)`.
    S2 { k: usize },
    /// `f(j + k) > f(j) + f(k)`.
    S3 { j: usize, k: usize },
}

impl std::fmt::Display for ProfileViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ProfileViolation::Empty => write!(f, "empty profile"),
            ProfileViolation::S1 { k: 0 } => write!(f, "S1: f(0) must be 0"),
            ProfileViolation::S1 { k } => write!(f, "S1: f({k}) must be positive"),
            ProfileViolation::S2 { k } => write!(f, "S2: f({k}) > f({})", k + 1),
            ProfileViolation::S3 { j, k } => write!(f, "S3: f({}) > f({j}) + f({k})", j + k),
        }
    }
}

/// Checks that `f` is zero at 0, positive after, non-decreasing and subadditive.
pub fn validate_profile(f: &[f64]) -> std::result::Result<(), ProfileViolation> {
    if f.is_empty() {
        return Err(ProfileViolation::Empty);
    }
    if f[0] != 0.0 {
        return Err(ProfileViolation::S1 { k: 0 });
    }
    if let Some(k) = (1..f.len()).find(|&k| !(f[k].is_finite() && f[k] > 0.0)) {
        return Err(ProfileViolation::S1 { k });
    }
    if let Some(k) = (0..f.len() - 1).find(|&k| f[k] > f[k + 1] + PROFILE_SLACK) {
        return Err(ProfileViolation::S2 { k });
    }
    let n = f.len();
    for j in 1..n {
        for k in j..n - j {
            if f[j + k] > f[j] + f[k] + PROFILE_SLACK {
                return Err(ProfileViolation::S3 { j, k });
            }
        }
    }
    Ok(())
}

/// The function `f` of a symmetric diversity `δ(A) = f(|A| - 1)` on `n = f.len()` points.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricProfile {
    f: Vec<f64>,
}

impl SymmetricProfile {
    pub fn new(f: Vec<f64>) -> Result<Self> {
        validate_profile(&f).map_err(|v| Error::InvalidProfile(v.to_string()))?;
        Ok(SymmetricProfile { f })
    }

    pub fn n(&self) -> usize {
        self.f.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.f
    }

    pub fn at(&self, k: usize) -> f64 {
        self.f[k]
    }
}

impl SetFunction for SymmetricProfile {
    fn ground_size(&self) -> usize {
        self.f.len()
    }

    fn value(&self, mask: u64) -> f64 {
        match mask.count_ones() as usize {
            0 => 0.0,
            k => self.f[k - 1],
        }
    }
}

/// A concave, non-decreasing profile with `g(0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcaveProfile {
    g: Vec<f64>,
}

impl ConcaveProfile {
    pub fn new(g: Vec<f64>) -> Result<Self> {
        if g.is_empty() || g[0] != 0.0 {
            return Err(Error::InvalidProfile("concave profile must start at 0".into()));
        }
        if g.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidProfile("concave profile entries must be finite and non-negative".into()));
        }
        if let Some(k) = (0..g.len() - 1).find(|&k| g[k] > g[k + 1] + CONCAVE_TOL) {
            return Err(Error::InvalidProfile(format!("g({k}) > g({})", k + 1)));
        }
        if let Some(k) = (1..g.len().saturating_sub(1)).find(|&k| 2.0 * g[k] < g[k - 1] + g[k + 1] - CONCAVE_TOL) {
            return Err(Error::InvalidProfile(format!("g is not concave at {k}")));
        }
        Ok(ConcaveProfile { g })
    }

    pub fn n(&self) -> usize {
        self.g.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.g
    }
}

/// Coefficients `λ_1..λ_{n-1}` of a profile in the basis `ψ_i`. `lambda()[i - 1]` is `λ_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisCoefficients {
    n: usize,
    lambda: Vec<f64>,
}

impl BasisCoefficients {
    pub fn new(n: usize, lambda: Vec<f64>) -> Result<Self> {
        if lambda.len() != n.saturating_sub(1) {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for n = {n}",
                lambda.len()
            )));
        }
        if lambda.iter().any(|l| !l.is_finite() || *l < 0.0) {
            return Err(Error::InvalidProfile("basis coefficients must be non-negative".into()));
        }
        Ok(BasisCoefficients { n, lambda })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    /// `λ_i` for `1 <= i <= n - 1`.
    pub fn get(&self, i: usize) -> f64 {
        self.lambda[i - 1]
    }

    /// `(i, λ_i)` pairs in increasing `i`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.lambda.iter().enumerate().map(|(idx, &l)| (idx + 1, l))
    }
}

/// `ψ_i(j) = min(i, j)` for `1 <= i <= n - 1` and `0 <= j <= n - 1`.
pub fn psi(n: usize, i: usize, j: usize) -> Result<usize> {
    if i == 0 || i >= n || j >= n {
        return Err(Error::OutOfRange(format!("psi({i}, {j}) on n = {n}")));
    }
    Ok(i.min(j))
}

/// Least concave majorant of a profile, clamped to be non-decreasing.
///
/// Built from the upper hull of the points `(k, f(k))`; guarantees `f <= g <= 2f`.
pub fn concave_majorant(f: &SymmetricProfile) -> ConcaveProfile {
    let g = upper_envelope(f.values());
    ConcaveProfile::new(g).expect("upper envelope of a valid profile is concave")
}

/// Like [`concave_majorant`] but validates a raw sequence first.
pub fn concave_majorant_of(f: &[f64]) -> Result<ConcaveProfile> {
    let profile = SymmetricProfile::new(f.to_vec())?;
    Ok(concave_majorant(&profile))
}

/// Upper concave envelope of `(k, f[k])` sampled back on the integers, then clamped by `g[n-1]`.
fn upper_envelope(f: &[f64]) -> Vec<f64> {
    let n = f.len();
    let mut hull: Vec<usize> = Vec::with_capacity(n);
    for k in 0..n {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b when it lies on or below the chord a -> k
            let cross = (b - a) as f64 * (f[k] - f[a]) - (k - a) as f64 * (f[b] - f[a]);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(k);
    }
    let mut g = vec![0.0; n];
    for w in hull.windows(2) {
        let (a, b) = (w[0], w[1]);
        for (k, gk) in g.iter_mut().enumerate().take(b + 1).skip(a) {
            *gk = if k == a {
                f[a]
            } else if k == b {
                f[b]
            } else {
                let t = (k - a) as f64 / (b - a) as f64;
                f[a] + t * (f[b] - f[a])
            };
        }
    }
    if n == 1 {
        g[0] = f[0];
    }
    let last = g[n - 1];
    for gk in g.iter_mut() {
        *gk = gk.min(last);
    }
    g
}

/// `λ_i = 2g(i) - g(i+1) - g(i-1)` for `i <= n-2` and `λ_{n-1} = g(n-1) - g(n-2)`.
pub fn basis_coefficients(g: &ConcaveProfile) -> Result<BasisCoefficients> {
    let g = g.values();
    let n = g.len();
    let mut lambda = Vec::with_capacity(n.saturating_sub(1));
    for i in 1..n {
        let raw = if i + 1 < n {
            2.0 * g[i] - g[i + 1] - g[i - 1]
        } else {
            g[i] - g[i - 1]
        };
        if raw < -CONCAVE_TOL {
            return Err(Error::InvalidProfile(format!("negative basis coefficient at i = {i}")));
        }
        lambda.push(raw.max(0.0));
    }
    BasisCoefficients::new(n, lambda)
}

/// `Σ_i λ_i·min(i, j)`.
pub fn reconstruct_from_basis(lambda: &BasisCoefficients, j: usize) -> Result<f64> {
    if j >= lambda.n() {
        return Err(Error::OutOfRange(format!("j = {j} on n = {}", lambda.n())));
    }
    Ok(lambda.iter().map(|(i, l)| l * i.min(j) as f64).sum())
}
