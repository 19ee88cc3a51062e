//! Constant-distortion L1 embedding of symmetric diversities and distortion measurement.

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::binomial::{binomial_u128, Binomials};
use crate::diversity::SetFunction;
use crate::error::{Error, Result};
use crate::phi::{choose_ell, PhiTable};
use crate::points::PointConfiguration;
use crate::profile::{basis_coefficients, concave_majorant, BasisCoefficients, ConcaveProfile, SymmetricProfile};
use crate::split::SplitWeighting;
use crate::subset;

/// Distortion the construction is certified to stay below: factor 2 for the concave
/// majorant, 2 each way between `ψ_i` and its capped stand-in, and 5 between that and `φ_ℓ`.
pub const CERTIFIED_DISTORTION: f64 = 40.0;

/// Relative tolerance accepting an exact `φ` decomposition.
const EXACT_TOL: f64 = 1e-9;

/// Largest `n` for which the split weighting of an embedding is materialized.
pub const MATERIALIZE_CAP: usize = 20;

/// One subset's original and embedded values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioEntry {
    pub set: u64,
    pub original: f64,
    pub embedded: f64,
    /// `embedded / original`.
    pub ratio: f64,
}

/// Basis index `i` mapped to split cardinality `ℓ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllAssignment {
    /// `None` when the weight comes from an exact `φ` decomposition.
    pub i: Option<usize>,
    pub ell: usize,
    /// Coefficient of `φ_ℓ` in the embedded profile.
    pub lambda: f64,
    /// Weight added to every split with a side of size `ℓ`.
    pub weight_per_subset: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingReport {
    pub entries: Vec<RatioEntry>,
    /// `c_1 = max δ(A)/δ̂(A)`.
    pub contraction: f64,
    /// `c_2 = max δ̂(A)/δ(A)`.
    pub expansion: f64,
    /// `c_1 · c_2`.
    pub distortion: f64,
    pub assignments: Vec<EllAssignment>,
    pub certified_bound: Option<f64>,
}

impl EmbeddingReport {
    fn from_pairs(pairs: impl Iterator<Item = (u64, f64, f64)>) -> Result<Self> {
        let mut entries = Vec::new();
        let mut contraction: f64 = 1.0;
        let mut expansion: f64 = 1.0;
        let mut first = true;
        for (set, original, embedded) in pairs {
            if original.is_nan() || original <= 0.0 {
                return Err(Error::InvalidDiversity(format!(
                    "original value on {:?} must be positive",
                    subset::to_indices(set)
                )));
            }
            if embedded.is_nan() || embedded <= 0.0 {
                return Err(Error::InfiniteDistortion { mask: set });
            }
            let ratio = embedded / original;
            if first {
                contraction = 1.0 / ratio;
                expansion = ratio;
                first = false;
            } else {
                contraction = contraction.max(1.0 / ratio);
                expansion = expansion.max(ratio);
            }
            entries.push(RatioEntry {
                set,
                original,
                embedded,
                ratio,
            });
        }
        let distortion = if entries.is_empty() { 1.0 } else { (contraction * expansion).max(1.0) };
        Ok(EmbeddingReport {
            entries,
            contraction,
            expansion,
            distortion,
            assignments: Vec::new(),
            certified_bound: None,
        })
    }
}

/// Distortion between two set functions on the same ground set, over subsets of size at least two.
pub fn distortion(original: &impl SetFunction, embedded: &impl SetFunction) -> Result<EmbeddingReport> {
    let n = original.ground_size();
    if embedded.ground_size() != n {
        return Err(Error::DimensionMismatch(format!(
            "ground sets differ: {n} vs {}",
            embedded.ground_size()
        )));
    }
    let a = original.tabulate();
    let b = embedded.tabulate();
    EmbeddingReport::from_pairs(
        (0..1u64 << n)
            .filter(|m| m.count_ones() >= 2)
            .map(|m| (m, a[m as usize], b[m as usize])),
    )
}

/// Distortion between two symmetric profiles, one entry per cardinality.
///
/// Entry `k` is reported on the representative set `{0, .., k}`.
pub fn profile_distortion(original: &[f64], embedded: &[f64]) -> Result<EmbeddingReport> {
    if original.len() != embedded.len() {
        return Err(Error::DimensionMismatch(format!(
            "profiles have lengths {} and {}",
            original.len(),
            embedded.len()
        )));
    }
    if original.len() > subset::MAX_GROUND_SET {
        return Err(Error::CapExceeded {
            operation: "profile distortion",
            n: original.len(),
            cap: subset::MAX_GROUND_SET,
        });
    }
    EmbeddingReport::from_pairs((1..original.len()).map(|k| (subset::full(k + 1), original[k], embedded[k])))
}

/// The split-weight embedding of a symmetric diversity, kept in closed form.
/// How a symmetric embedding was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmbeddingMethod {
    /// Concave majorant, truncation basis and `φ_ℓ` substitution.
    Construction,
    /// The profile is itself a non-negative combination of `φ` rows.
    Exact,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricEmbedding {
    pub n: usize,
    pub method: EmbeddingMethod,
    pub majorant: ConcaveProfile,
    pub basis: BasisCoefficients,
    pub assignments: Vec<EllAssignment>,
    /// `δ̂` as a function of `|A| − 1`.
    pub embedded_profile: Vec<f64>,
    pub report: EmbeddingReport,
}

impl SymmetricEmbedding {
    /// Splits with a side of size `ℓ(i)`, each weighted `λ_i / (2·C(n−2, ℓ(i)−1))`, summed.
    pub fn split_weighting(&self) -> Result<SplitWeighting> {
        if self.n > MATERIALIZE_CAP {
            return Err(Error::CapExceeded {
                operation: "split weighting materialization",
                n: self.n,
                cap: MATERIALIZE_CAP,
            });
        }
        let mut w = SplitWeighting::new(self.n);
        for a in &self.assignments {
            for side in subset::with_cardinality(self.n, a.ell) {
                w.add(side, a.weight_per_subset)?;
            }
        }
        Ok(w)
    }
}

/// Embeds the symmetric diversity of `f` into L1 as a non-negative split combination.
pub fn build_symmetric_embedding(f: &SymmetricProfile) -> Result<SymmetricEmbedding> {
    let n = f.n();
    if n > subset::MAX_GROUND_SET {
        return Err(Error::CapExceeded {
            operation: "symmetric embedding",
            n,
            cap: subset::MAX_GROUND_SET,
        });
    }
    let majorant = concave_majorant(f);
    let basis = basis_coefficients(&majorant)?;
    if n == 1 {
        let mut report = profile_distortion(f.values(), &[0.0])?;
        report.certified_bound = Some(CERTIFIED_DISTORTION);
        return Ok(SymmetricEmbedding {
            n,
            method: EmbeddingMethod::Construction,
            majorant,
            basis,
            assignments: Vec::new(),
            embedded_profile: vec![0.0],
            report,
        });
    }
    let table = PhiTable::new(n)?;
    let mut assignments = Vec::new();
    let mut embedded_profile = vec![0.0; n];
    for (i, lambda) in basis.iter().filter(|(_, l)| *l > 0.0) {
        let ell = choose_ell(n, i)?;
        let count = binomial_u128(n as i64 - 2, ell as i64 - 1)
            .ok_or_else(|| Error::Internal("binomial overflow".into()))?;
        assignments.push(EllAssignment {
            i: Some(i),
            ell,
            lambda,
            weight_per_subset: lambda / (2.0 * count as f64),
        });
        for (k, v) in embedded_profile.iter_mut().enumerate() {
            *v += lambda * table.get(ell, k);
        }
    }
    let mut report = profile_distortion(f.values(), &embedded_profile)?;
    report.assignments = assignments.clone();
    report.certified_bound = Some(CERTIFIED_DISTORTION);
    if report.distortion > CERTIFIED_DISTORTION {
        return Err(Error::Internal(format!(
            "measured distortion {} exceeds the certified bound",
            report.distortion
        )));
    }
    Ok(SymmetricEmbedding {
        n,
        method: EmbeddingMethod::Construction,
        majorant,
        basis,
        assignments,
        embedded_profile,
        report,
    })
}

/// Coefficients `ν_s >= 0`, `1 <= s <= ⌊n/2⌋`, with `f = Σ ν_s φ_s`, if they exist.
///
/// Split weights of a diversity are unique when they exist, so the candidate comes from
/// the Möbius formula evaluated exactly on the input values. For a symmetric diversity the
/// weight of a side `B` depends only on `b = |B|`:
/// `u_b = ½(−1)^{b+1} Σ_{j >= max(b,2)} C(n−b, j−b)(−1)^j f(j−1)`.
/// Slightly negative coefficients from rounded inputs are clamped; the result is accepted
/// when it reproduces `f` within a relative `1e−9`.
pub fn phi_decomposition(f: &SymmetricProfile) -> Result<Option<Vec<f64>>> {
    let n = f.n();
    if n < 2 {
        return Ok(None);
    }
    if n > subset::MAX_GROUND_SET {
        return Err(Error::CapExceeded {
            operation: "phi decomposition",
            n,
            cap: subset::MAX_GROUND_SET,
        });
    }
    let binomials = Binomials::new(n);
    let exact = |v: f64| BigRational::from_float(v).ok_or_else(|| Error::InvalidProfile(format!("non-finite value {v}")));
    let values = f.values().iter().map(|&v| exact(v)).collect::<Result<Vec<_>>>()?;
    let half = BigRational::new(1.into(), 2.into());
    let u = |b: usize| -> BigRational {
        let mut sum = BigRational::zero();
        for j in b.max(2)..=n {
            let term = BigRational::from_integer(binomials.get((n - b) as i64, (j - b) as i64).into()) * &values[j - 1];
            if j % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
        }
        if b % 2 == 1 {
            sum * &half
        } else {
            -sum * &half
        }
    };
    let scale = f.at(n - 1);
    let mut nu = Vec::with_capacity(n / 2);
    for s in 1..=n / 2 {
        // canonical weight of one split with a side of size s, spread over the s-subsets
        let per_subset = if 2 * s == n { u(s) } else { u(s) + u(n - s) };
        let normalizer = BigRational::from_integer((binomials.get(n as i64 - 2, s as i64 - 1) * 2u32).into());
        let coefficient = (per_subset * normalizer).to_f64().unwrap_or(f64::NAN);
        if coefficient.is_nan() || coefficient < -EXACT_TOL * scale {
            return Ok(None);
        }
        nu.push(coefficient.max(0.0));
    }
    let table = PhiTable::new(n)?;
    for k in 1..n {
        let rebuilt: f64 = nu.iter().enumerate().map(|(idx, c)| c * table.get(idx + 1, k)).sum();
        if (rebuilt - f.at(k)).abs() > EXACT_TOL * f.at(k) {
            return Ok(None);
        }
    }
    Ok(Some(nu))
}

/// Exact embedding when `f` is a non-negative combination of `φ` rows, otherwise
/// [`build_symmetric_embedding`].
pub fn embed_symmetric(f: &SymmetricProfile) -> Result<SymmetricEmbedding> {
    let Some(nu) = phi_decomposition(f)? else {
        return build_symmetric_embedding(f);
    };
    let n = f.n();
    let majorant = concave_majorant(f);
    let basis = basis_coefficients(&majorant)?;
    let table = PhiTable::new(n)?;
    let mut assignments = Vec::new();
    let mut embedded_profile = vec![0.0; n];
    for (idx, &lambda) in nu.iter().enumerate().filter(|(_, c)| **c > 0.0) {
        let ell = idx + 1;
        let count = binomial_u128(n as i64 - 2, ell as i64 - 1)
            .ok_or_else(|| Error::Internal("binomial overflow".into()))?;
        assignments.push(EllAssignment {
            i: None,
            ell,
            lambda,
            weight_per_subset: lambda / (2.0 * count as f64),
        });
        for (k, v) in embedded_profile.iter_mut().enumerate() {
            *v += lambda * table.get(ell, k);
        }
    }
    let mut report = profile_distortion(f.values(), &embedded_profile)?;
    report.assignments = assignments.clone();
    report.certified_bound = Some(CERTIFIED_DISTORTION);
    Ok(SymmetricEmbedding {
        n,
        method: EmbeddingMethod::Exact,
        majorant,
        basis,
        assignments,
        embedded_profile,
        report,
    })
}

/// One coordinate per positively weighted split: point `p` sits at `w_B` when `p ∈ B`, else 0.
pub fn coordinates_from_weights(w: &SplitWeighting) -> PointConfiguration {
    let n = w.n();
    let active: Vec<(u64, f64)> = w.iter().filter(|(_, wt)| *wt > 0.0).collect();
    let dim = active.len();
    let mut coords = vec![0.0; n * dim];
    for (axis, &(split, weight)) in active.iter().enumerate() {
        for p in subset::elements(split) {
            coords[p * dim + axis] = weight;
        }
    }
    PointConfiguration::new(n, dim, coords).expect("weights are finite")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diversity::FiniteDiversity;

    #[test]
    fn distortion_examples() {
        let a = SymmetricProfile::new(vec![0.0, 1.0, 1.0]).unwrap();
        assert_eq!(distortion(&a, &a).unwrap().distortion, 1.0);
        let d = FiniteDiversity::from_profile(&a).unwrap();
        let tripled = FiniteDiversity::from_fn(3, |m| 3.0 * d.value(m)).unwrap();
        assert!((distortion(&d, &tripled).unwrap().distortion - 1.0).abs() < 1e-15);
        let b = SymmetricProfile::new(vec![0.0, 1.0, 2.0]).unwrap();
        let r = distortion(&a, &b).unwrap();
        assert_eq!((r.contraction, r.expansion, r.distortion), (1.0, 2.0, 2.0));
        assert_eq!(profile_distortion(a.values(), b.values()).unwrap().distortion, 2.0);
    }

    #[test]
    fn zero_embedded_value_is_infinite_distortion() {
        let a = SymmetricProfile::new(vec![0.0, 1.0, 1.0]).unwrap();
        let mut w = SplitWeighting::new(3);
        w.add(0b100, 1.0).unwrap();
        assert!(matches!(distortion(&a, &w), Err(Error::InfiniteDistortion { mask: 0b011 })));
    }

    #[test]
    fn single_split_coordinates() {
        let mut w = SplitWeighting::new(4);
        w.add(0b0110, 3.0).unwrap();
        let p = coordinates_from_weights(&w);
        assert_eq!((p.n(), p.dim()), (4, 1));
        assert_eq!((0..4).map(|i| p.coord(i, 0)).collect::<Vec<_>>(), vec![0.0, 3.0, 3.0, 0.0]);
    }

    #[test]
    fn empty_weighting_coordinates() {
        let p = coordinates_from_weights(&SplitWeighting::new(5));
        assert_eq!((p.n(), p.dim()), (5, 0));
        assert!(p.tabulate().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn phi_rows_decompose_exactly() {
        for n in 2..=12 {
            let table = PhiTable::new(n).unwrap();
            for ell in 1..=n / 2 {
                let f = SymmetricProfile::new(table.row(ell).to_vec()).unwrap();
                let nu = phi_decomposition(&f).unwrap().expect("phi row");
                for (idx, c) in nu.iter().enumerate() {
                    let expected = if idx + 1 == ell { 1.0 } else { 0.0 };
                    assert!((c - expected).abs() < 1e-9, "n={n} ell={ell} nu={nu:?}");
                }
                let e = embed_symmetric(&f).unwrap();
                assert_eq!(e.method, EmbeddingMethod::Exact);
                assert!((e.report.distortion - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn non_embeddable_profile_falls_back_to_construction() {
        let f = SymmetricProfile::new(vec![0.0, 1.0, 1.0, 1.0]).unwrap();
        assert_eq!(phi_decomposition(&f).unwrap(), None);
        let e = embed_symmetric(&f).unwrap();
        assert_eq!(e.method, EmbeddingMethod::Construction);
        assert_eq!(e, build_symmetric_embedding(&f).unwrap());
    }

    #[test]
    fn mixed_phi_rows_decompose() {
        let table = PhiTable::new(7).unwrap();
        let f: Vec<f64> = (0..7).map(|k| 2.0 * table.get(1, k) + 0.5 * table.get(3, k)).collect();
        let nu = phi_decomposition(&SymmetricProfile::new(f).unwrap()).unwrap().unwrap();
        assert!((nu[0] - 2.0).abs() < 1e-9 && nu[1].abs() < 1e-9 && (nu[2] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn truncation_one_uses_half_cardinality() {
        let f = SymmetricProfile::new(vec![0.0, 1.0, 1.0, 1.0]).unwrap();
        let e = build_symmetric_embedding(&f).unwrap();
        assert_eq!(e.assignments.len(), 1);
        assert_eq!(e.assignments[0].ell, 2);
        let w = e.split_weighting().unwrap();
        assert!(w.iter().all(|(m, _)| m.count_ones() == 2));
        // δ̂ = φ_2 on n = 4: (0, 1, 1.5, 1.5)
        assert_eq!(e.embedded_profile, vec![0.0, 1.0, 1.5, 1.5]);
        assert_eq!(e.report.distortion, 1.5);
    }

    #[test]
    fn two_point_profile_is_one_split() {
        let f = SymmetricProfile::new(vec![0.0, 2.5]).unwrap();
        let e = build_symmetric_embedding(&f).unwrap();
        let w = e.split_weighting().unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(e.report.distortion, 1.0);
        assert_eq!(w.eval(0b11), 2.5);
    }

    #[test]
    fn singleton_profile_embeds_trivially() {
        let f = SymmetricProfile::new(vec![0.0]).unwrap();
        let e = build_symmetric_embedding(&f).unwrap();
        assert!(e.split_weighting().unwrap().is_empty());
        assert_eq!(e.report.distortion, 1.0);
    }
}
