//! Split diversities, non-negative split combinations and the Möbius inversion that
//! recovers split weights from a diversity.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::diversity::{FiniteDiversity, SetFunction};
use crate::error::{Error, Result};
use crate::subset;

/// Default cap on `n` for floating-point Möbius inversion.
pub const MOBIUS_CAP: usize = 16;

/// Cap on `n` for exact-rational Möbius inversion.
pub const MOBIUS_EXACT_CAP: usize = 12;

/// Tolerance for the embeddability verdict.
pub const EMBED_TOL: f64 = 1e-9;

/// `δ_U(A)`: 1 when `U` cuts `A` into two non-empty parts.
pub fn split_diversity_eval(n: usize, u: u64, a: u64) -> Result<u8> {
    subset::check_within(n, u)?;
    subset::check_within(n, a)?;
    if u == 0 || u == subset::full(n) {
        return Err(Error::InvalidWeighting("split side must be a non-empty proper subset".into()));
    }
    Ok(subset::cuts(u, a) as u8)
}

/// Non-negative weights on bipartitions of `{0..n-1}`.
///
/// Each split is stored once, under the side that does not contain element 0.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SplitWeighting {
    n: usize,
    weights: BTreeMap<u64, f64>,
}

impl SplitWeighting {
    pub fn new(n: usize) -> Self {
        SplitWeighting {
            n,
            weights: BTreeMap::new(),
        }
    }

    /// Builds a weighting from explicit canonical entries; rejects duplicates.
    pub fn from_entries(n: usize, entries: impl IntoIterator<Item = (u64, f64)>) -> Result<Self> {
        if n == 0 || n > subset::MAX_GROUND_SET {
            return Err(Error::InvalidWeighting(format!("ground set size {n} unsupported")));
        }
        let mut w = SplitWeighting::new(n);
        for (mask, weight) in entries {
            w.check_split(mask)?;
            if mask & 1 == 1 {
                return Err(Error::InvalidWeighting(format!(
                    "split {:?} is not canonical (contains element 0)",
                    subset::to_indices(mask)
                )));
            }
            if !weight.is_finite() || weight < 0.0 {
                return Err(Error::InvalidWeighting(format!("weight {weight} must be finite and non-negative")));
            }
            if w.weights.insert(mask, weight).is_some() {
                return Err(Error::InvalidWeighting(format!(
                    "duplicate split {:?}",
                    subset::to_indices(mask)
                )));
            }
        }
        Ok(w)
    }

    fn check_split(&self, mask: u64) -> Result<()> {
        subset::check_within(self.n, mask)?;
        if mask == 0 || mask == subset::full(self.n) {
            return Err(Error::InvalidWeighting("split side must be a non-empty proper subset".into()));
        }
        Ok(())
    }

    /// Adds `weight` to the split `side | complement`; either side may be given.
    pub fn add(&mut self, side: u64, weight: f64) -> Result<()> {
        self.check_split(side)?;
        if !weight.is_finite() || weight < 0.0 {
            return Err(Error::InvalidWeighting(format!("weight {weight} must be finite and non-negative")));
        }
        *self.weights.entry(subset::canonical_split(self.n, side)).or_insert(0.0) += weight;
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn get(&self, side: u64) -> f64 {
        self.weights
            .get(&subset::canonical_split(self.n, side))
            .copied()
            .unwrap_or(0.0)
    }

    /// Canonical `(split, weight)` pairs in increasing mask order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.weights.iter().map(|(&m, &w)| (m, w))
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.values().sum()
    }

    /// `Σ_B w_B δ_B(A)`.
    pub fn eval(&self, a: u64) -> f64 {
        self.weights
            .iter()
            .filter(|(&split, _)| subset::cuts(split, a))
            .map(|(_, &w)| w)
            .sum()
    }
}

impl SetFunction for SplitWeighting {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn value(&self, mask: u64) -> f64 {
        self.eval(mask)
    }

    /// All subset values at once: a split fails to cut a non-empty `A` exactly when one
    /// of its sides contains `A`, so `δ(A) = total − Σ_{S ⊇ A} w(S)` over both sides `S`.
    fn tabulate(&self) -> Vec<f64> {
        let n = self.n;
        let full = subset::full(n);
        let mut side = vec![0.0f64; 1usize << n];
        for (split, w) in self.iter() {
            side[split as usize] += w;
            side[(full & !split) as usize] += w;
        }
        superset_sums(n, &mut side);
        let total = self.total_weight();
        let mut out: Vec<f64> = side.iter().map(|s| (total - s).max(0.0)).collect();
        out[0] = 0.0;
        for i in 0..n {
            out[1 << i] = 0.0;
        }
        out
    }
}

/// In-place superset-sum transform: `h[B] ← Σ_{A ⊇ B} h[A]`.
fn superset_sums<T: for<'a> std::ops::AddAssign<&'a T> + Clone>(n: usize, h: &mut [T]) {
    for bit in 0..n {
        let step = 1usize << bit;
        for mask in 0..h.len() {
            if mask & step == 0 {
                let upper = h[mask | step].clone();
                h[mask] += &upper;
            }
        }
    }
}

/// Arithmetic used by [`split_weights_from_diversity`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MobiusMode {
    #[default]
    Float,
    /// Weights summed in exact rationals (each `f64` converted exactly) before rounding,
    /// for `n <= MOBIUS_EXACT_CAP`. The verdict uses the same tolerance as `Float`.
    Exact,
}

/// Signed split weights recovered from a diversity, with an embeddability verdict.
#[derive(Debug, Clone)]
pub struct MobiusDecomposition {
    pub n: usize,
    /// Canonical split → summed signed weight `w_B + w_{X−B}`.
    pub signed: BTreeMap<u64, f64>,
    /// The same weights with negatives clamped to zero.
    pub clamped: SplitWeighting,
    pub min_weight: f64,
    /// Largest `|δ(A) − Σ_B max(w_B, 0) δ_B(A)|`.
    pub max_reconstruction_error: f64,
    pub embeddable: bool,
}

/// Recovers split weights via `w_B = ½ Σ_{A ⊇ B} (−1)^{|A|+|B|+1} δ(A)` and decides
/// whether the diversity is a non-negative split combination.
pub fn split_weights_from_diversity(div: &FiniteDiversity, mode: MobiusMode) -> Result<MobiusDecomposition> {
    split_weights_with_cap(div, mode, MOBIUS_CAP)
}

pub fn split_weights_with_cap(div: &FiniteDiversity, mode: MobiusMode, cap: usize) -> Result<MobiusDecomposition> {
    let n = div.n();
    let cap = match mode {
        MobiusMode::Float => cap,
        MobiusMode::Exact => cap.min(MOBIUS_EXACT_CAP),
    };
    if n > cap {
        return Err(Error::CapExceeded {
            operation: "Möbius split inversion",
            n,
            cap,
        });
    }
    match mode {
        MobiusMode::Float => Ok(mobius_float(div)),
        MobiusMode::Exact => mobius_exact(div),
    }
}

fn alternating(mask: u64) -> f64 {
    if mask.count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Summed signed weights per canonical split from per-side weights.
fn canonical_pairs<T: Clone>(n: usize, per_side: &[T], add: impl Fn(&T, &T) -> T) -> BTreeMap<u64, T> {
    let full = subset::full(n);
    (1..full)
        .filter(|m| m & 1 == 0)
        .map(|m| (m, add(&per_side[m as usize], &per_side[(full & !m) as usize])))
        .collect()
}

fn mobius_float(div: &FiniteDiversity) -> MobiusDecomposition {
    let n = div.n();
    let mut h: Vec<f64> = div
        .values()
        .iter()
        .enumerate()
        .map(|(m, &v)| alternating(m as u64) * v)
        .collect();
    superset_sums(n, &mut h);
    // w_B = ½ (−1)^{|B|+1} Σ_{A ⊇ B} (−1)^{|A|} δ(A)
    let per_side: Vec<f64> = h
        .iter()
        .enumerate()
        .map(|(b, &s)| -0.5 * alternating(b as u64) * s)
        .collect();
    let signed = canonical_pairs(n, &per_side, |a, b| a + b);
    finish(div, signed)
}

fn mobius_exact(div: &FiniteDiversity) -> Result<MobiusDecomposition> {
    let n = div.n();
    let mut h: Vec<BigRational> = div
        .values()
        .iter()
        .enumerate()
        .map(|(m, &v)| {
            let r = BigRational::from_float(v).ok_or_else(|| Error::Internal("non-finite value".into()))?;
            Ok(if m.count_ones() % 2 == 0 { r } else { -r })
        })
        .collect::<Result<_>>()?;
    superset_sums(n, &mut h);
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let per_side: Vec<BigRational> = h
        .into_iter()
        .enumerate()
        .map(|(b, s)| {
            let w = &half * s;
            if b.count_ones() % 2 == 0 {
                -w
            } else {
                w
            }
        })
        .collect();
    let exact = canonical_pairs(n, &per_side, |a, b| a + b);
    let signed: BTreeMap<u64, f64> = exact
        .iter()
        .map(|(&m, w)| (m, w.to_f64().unwrap_or(f64::NAN)))
        .collect();
    Ok(finish(div, signed))
}

fn finish(div: &FiniteDiversity, signed: BTreeMap<u64, f64>) -> MobiusDecomposition {
    let n = div.n();
    let min_weight = signed.values().copied().fold(f64::INFINITY, f64::min);
    let clamped = SplitWeighting {
        n,
        weights: signed
            .iter()
            .filter(|(_, &w)| w > 0.0)
            .map(|(&m, &w)| (m, w))
            .collect(),
    };
    let rebuilt = clamped.tabulate();
    let max_reconstruction_error = div
        .values()
        .iter()
        .zip(&rebuilt)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let embeddable = (signed.is_empty() || min_weight >= -EMBED_TOL) && max_reconstruction_error <= EMBED_TOL;
    MobiusDecomposition {
        n,
        signed,
        clamped,
        min_weight: if min_weight.is_finite() { min_weight } else { 0.0 },
        max_reconstruction_error,
        embeddable,
    }
}
