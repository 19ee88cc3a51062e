//! Diversity gallery (diameter, ℓ1, travelling-salesman, Steiner tree) and seeded
//! random families used by the tests and the sweep harness.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diversity::FiniteDiversity;
use crate::error::{Error, Result};
use crate::metric::Metric;
use crate::phi::PhiTable;
use crate::points::PointSet;
use crate::profile::{validate_profile, SymmetricProfile};
use crate::subset;

/// Cap for the travelling-salesman diversity.
pub const TSP_CAP: usize = 13;

/// Cap for the Steiner-tree diversity.
pub const STEINER_CAP: usize = 10;

/// `δ(A) = max_{a,b∈A} d(a,b)`.
pub fn diameter_diversity(m: &Metric) -> Result<FiniteDiversity> {
    FiniteDiversity::from_fn(m.n(), |a| {
        let pts = subset::to_indices(a);
        let mut best: f64 = 0.0;
        for (x, &p) in pts.iter().enumerate() {
            for &q in &pts[x + 1..] {
                best = best.max(m.dist(p, q));
            }
        }
        best
    })
}

/// Euclidean metric of a point set.
pub fn euclidean_metric(ps: &PointSet) -> Result<Metric> {
    Metric::from_fn(ps.n(), |a, b| ps.euclidean(a, b))
}

/// Diameter diversity of a point set under the Euclidean metric.
pub fn diameter_diversity_of_points(ps: &PointSet) -> Result<FiniteDiversity> {
    diameter_diversity(&euclidean_metric(ps)?)
}

/// `δ_1(A) = Σ_i max{|a_i − b_i| : a, b ∈ A}`.
pub fn l1_box_diversity(ps: &PointSet) -> Result<FiniteDiversity> {
    FiniteDiversity::from_set_function(ps)
}

/// Half the length of the shortest closed tour through `A`.
///
/// One Held–Karp table serves every subset: `paths[S][v]` is the shortest path that
/// starts at the smallest element of `S`, visits all of `S` and ends at `v`.
pub fn tsp_diversity(m: &Metric) -> Result<FiniteDiversity> {
    let n = m.n();
    if n > TSP_CAP {
        return Err(Error::CapExceeded {
            operation: "TSP diversity",
            n,
            cap: TSP_CAP,
        });
    }
    let size = 1usize << n;
    let mut paths = vec![f64::INFINITY; size * n];
    for s in 0..n {
        paths[(1 << s) * n + s] = 0.0;
    }
    for mask in 1..size {
        let start = mask.trailing_zeros() as usize;
        for v in subset::elements(mask as u64) {
            let here = paths[mask * n + v];
            if !here.is_finite() {
                continue;
            }
            for u in start + 1..n {
                if mask >> u & 1 == 0 {
                    let next = (mask | 1 << u) * n + u;
                    let cand = here + m.dist(v, u);
                    if cand < paths[next] {
                        paths[next] = cand;
                    }
                }
            }
        }
    }
    FiniteDiversity::from_fn(n, |a| {
        let start = a.trailing_zeros() as usize;
        let tour = subset::elements(a)
            .filter(|&v| v != start)
            .map(|v| paths[a as usize * n + v] + m.dist(v, start))
            .fold(f64::INFINITY, f64::min);
        tour / 2.0
    })
}

/// Weight of the minimum Steiner tree on terminals `A`, Steiner points drawn from the ground set.
///
/// Dreyfus–Wagner over all terminal subsets at once: `tree[S][v]` is the cheapest tree
/// spanning `S ∪ {v}`.
pub fn steiner_diversity(m: &Metric) -> Result<FiniteDiversity> {
    let n = m.n();
    if n > STEINER_CAP {
        return Err(Error::CapExceeded {
            operation: "Steiner diversity",
            n,
            cap: STEINER_CAP,
        });
    }
    let size = 1usize << n;
    let mut tree = vec![f64::INFINITY; size * n];
    for t in 0..n {
        for v in 0..n {
            tree[(1 << t) * n + v] = m.dist(t, v);
        }
    }
    let mut merged = vec![f64::INFINITY; n];
    for s in 1..size {
        if s.count_ones() < 2 {
            continue;
        }
        merged.iter_mut().for_each(|x| *x = f64::INFINITY);
        // proper non-empty sub-splits of S, each unordered pair visited once
        let low = s & s.wrapping_neg();
        let mut part = (s - 1) & s;
        while part > 0 {
            if part & low != 0 {
                let other = s & !part;
                for (v, best) in merged.iter_mut().enumerate() {
                    let c = tree[part * n + v] + tree[other * n + v];
                    if c < *best {
                        *best = c;
                    }
                }
            }
            part = (part - 1) & s;
        }
        for v in 0..n {
            // metric distances are already shortest paths, so one relaxation suffices
            let best = (0..n).map(|u| merged[u] + m.dist(u, v)).fold(f64::INFINITY, f64::min);
            tree[s * n + v] = best;
        }
    }
    FiniteDiversity::from_fn(n, |a| {
        let root = a.trailing_zeros() as usize;
        let rest = a & !(1 << root);
        tree[rest as usize * n + root]
    })
}

/// `f(k) = min(i, k)`.
pub fn truncation_diversity(n: usize, i: usize) -> Result<SymmetricProfile> {
    if n < 2 || i == 0 || i >= n {
        return Err(Error::OutOfRange(format!("truncation psi_{i} on n = {n}")));
    }
    SymmetricProfile::new((0..n).map(|k| k.min(i) as f64).collect())
}

/// The profile `f(0) = 0, f(1) = f(2) = 1, f(k) = 2` for `k > 2`: subadditive but not concave.
pub fn plateau_fixture(n: usize) -> Result<SymmetricProfile> {
    if n == 0 {
        return Err(Error::OutOfRange("plateau fixture needs n >= 1".into()));
    }
    SymmetricProfile::new(
        (0..n)
            .map(|k| match k {
                0 => 0.0,
                1 | 2 => 1.0,
                _ => 2.0,
            })
            .collect(),
    )
}

/// Row `φ_ℓ` as a profile.
pub fn phi_row_profile(n: usize, ell: usize) -> Result<SymmetricProfile> {
    if ell == 0 || ell >= n {
        return Err(Error::OutOfRange(format!("phi row ell = {ell} on n = {n}")));
    }
    SymmetricProfile::new(PhiTable::new(n)?.row(ell).to_vec())
}

/// Seeded subadditive profile: a random concave profile with interior values pushed
/// down by up to 50%, keeping only perturbations that preserve the profile axioms.
pub fn random_subadditive_profile(n: usize, seed: u64) -> Result<SymmetricProfile> {
    if n < 2 {
        return Err(Error::OutOfRange("random profile needs n >= 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut increments: Vec<f64> = (1..n)
        .map(|_| {
            if rng.gen_bool(0.2) {
                0.0
            } else {
                rng.gen_range(0.05..1.0)
            }
        })
        .collect();
    increments.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    if increments[0] == 0.0 {
        increments[0] = 1.0;
    }
    let mut f = vec![0.0; n];
    for k in 1..n {
        f[k] = f[k - 1] + increments[k - 1];
    }
    for k in 1..n.saturating_sub(1) {
        let old = f[k];
        f[k] = old * (1.0 - 0.5 * rng.gen::<f64>());
        if validate_profile(&f).is_err() {
            f[k] = old;
        }
    }
    SymmetricProfile::new(f)
}

/// `n` points drawn uniformly from the unit cube `[0, 1]^dim`.
pub fn random_point_set(n: usize, dim: usize, seed: u64) -> Result<PointSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coords = (0..n * dim).map(|_| rng.gen::<f64>()).collect();
    PointSet::new(n, dim, coords)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_metric(xs: &[f64]) -> Metric {
        Metric::from_fn(xs.len(), |a, b| (xs[a] - xs[b]).abs()).unwrap()
    }

    #[test]
    fn diameter_of_collinear_points() {
        let d = diameter_diversity(&path_metric(&[0.0, 1.0, 3.0])).unwrap();
        assert_eq!(d.evaluate(0b111).unwrap(), 3.0);
        assert_eq!(d.evaluate(0b010).unwrap(), 0.0);
    }

    #[test]
    fn equally_spaced_diameter_is_not_symmetric() {
        let d = diameter_diversity(&path_metric(&[0.0, 1.0, 2.0, 3.0])).unwrap();
        assert!(!d.is_symmetric(1e-12));
        assert_eq!(d.evaluate(0b0011).unwrap(), 1.0);
        assert_eq!(d.evaluate(0b1001).unwrap(), 3.0);
    }

    #[test]
    fn l1_box_examples() {
        let ps = PointSet::from_rows(2, &[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 2.0]]).unwrap();
        let d = l1_box_diversity(&ps).unwrap();
        assert_eq!(d.evaluate(0b111).unwrap(), 3.0);
        assert_eq!(d.evaluate(0b001).unwrap(), 0.0);
        let m = d.induced_metric();
        assert_eq!((m.dist(0, 1), m.dist(0, 2), m.dist(1, 2)), (1.0, 2.0, 3.0));
    }

    #[test]
    fn tsp_examples() {
        let unit = Metric::from_fn(3, |_, _| 1.0).unwrap();
        let d = tsp_diversity(&unit).unwrap();
        assert_eq!(d.evaluate(0b011).unwrap(), 1.0);
        assert_eq!(d.evaluate(0b111).unwrap(), 1.5);
        let square = PointSet::from_rows(2, &[vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let d = tsp_diversity(&euclidean_metric(&square).unwrap()).unwrap();
        assert!((d.evaluate(0b1111).unwrap() - 2.0).abs() < 1e-12);
        assert!(matches!(
            tsp_diversity(&Metric::from_fn(14, |_, _| 1.0).unwrap()),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn steiner_examples() {
        let path = path_metric(&[0.0, 1.0, 2.0]);
        let d = steiner_diversity(&path).unwrap();
        assert_eq!(d.evaluate(0b101).unwrap(), 2.0);
        assert_eq!(d.evaluate(0b011).unwrap(), 1.0);
        // star: centre 0, leaves 1..=3 at distance 1, leaves pairwise 2
        let star = Metric::from_fn(4, |a, b| if a == 0 || b == 0 { 1.0 } else { 2.0 }).unwrap();
        let d = steiner_diversity(&star).unwrap();
        assert_eq!(d.evaluate(0b1110).unwrap(), 3.0);
        assert_eq!(d.evaluate(0b0110).unwrap(), 2.0);
    }

    #[test]
    fn truncation_examples() {
        assert_eq!(truncation_diversity(5, 1).unwrap().values(), &[0.0, 1.0, 1.0, 1.0, 1.0]);
        assert_eq!(truncation_diversity(5, 4).unwrap().values(), &[0.0, 1.0, 2.0, 3.0, 4.0]);
        assert_eq!(truncation_diversity(5, 2).unwrap().values(), &[0.0, 1.0, 2.0, 2.0, 2.0]);
        assert!(truncation_diversity(5, 5).is_err());
    }

    #[test]
    fn random_profiles_are_valid_and_deterministic() {
        for seed in 0..50 {
            let f = random_subadditive_profile(9, seed).unwrap();
            assert_eq!(validate_profile(f.values()), Ok(()));
            assert_eq!(f, random_subadditive_profile(9, seed).unwrap());
        }
    }

    #[test]
    fn plateau_fixture_values() {
        assert_eq!(plateau_fixture(6).unwrap().values(), &[0.0, 1.0, 1.0, 2.0, 2.0, 2.0]);
    }
}
