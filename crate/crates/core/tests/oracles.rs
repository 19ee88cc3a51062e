//! Cross-checks of each fast routine against a slow, independent computation.

use diversity_l1::generators::{
    euclidean_metric, random_point_set, random_subadditive_profile, steiner_diversity, truncation_diversity,
    tsp_diversity,
};
use diversity_l1::split::{split_weights_from_diversity, MobiusMode};
use diversity_l1::{
    concave_majorant, phi, phi_decomposition, subset, FiniteDiversity, PhiTable, Metric, SetFunction, SplitWeighting, SymmetricProfile,
};

/// Number of `ℓ`-subsets that cut a fixed `(k+1)`-subset, by enumeration.
fn cutting_subsets(n: usize, ell: usize, k: usize) -> usize {
    let a = subset::full(k + 1);
    subset::with_cardinality(n, ell).filter(|&b| subset::cuts(b, a)).count()
}

fn binomial(a: usize, b: usize) -> usize {
    subset::with_cardinality(a, b).count()
}

#[test]
fn phi_matches_subset_counting() {
    for n in 2..=10 {
        for ell in 1..n {
            let weight = 1.0 / (2.0 * binomial(n - 2, ell - 1) as f64);
            for k in 0..n {
                let counted = cutting_subsets(n, ell, k) as f64 * weight;
                let formula = phi(n, ell, k).unwrap();
                assert!((counted - formula).abs() < 1e-12, "n={n} ell={ell} k={k}: {counted} vs {formula}");
            }
        }
    }
}

#[test]
fn uniform_split_weights_reproduce_phi() {
    for n in 2..=10 {
        for ell in 1..n {
            let weight = 1.0 / (2.0 * binomial(n - 2, ell - 1) as f64);
            let mut w = SplitWeighting::new(n);
            for b in subset::with_cardinality(n, ell) {
                w.add(b, weight).unwrap();
            }
            for a in 0..1u64 << n {
                let k = (a.count_ones() as usize).saturating_sub(1);
                let expected = if a == 0 { 0.0 } else { phi(n, ell, k).unwrap() };
                assert!((w.eval(a) - expected).abs() < 1e-12);
            }
        }
    }
}

/// `w_B = ½ Σ_{A ⊇ B} (−1)^{|A|+|B|+1} δ(A)`, summed directly over supersets.
fn direct_mobius(div: &FiniteDiversity, b: u64) -> f64 {
    let n = div.n();
    let rest = subset::full(n) & !b;
    subset::subsets_of(rest)
        .map(|extra| {
            let a = b | extra;
            let sign = if (a.count_ones() + b.count_ones() + 1).is_multiple_of(2) { 1.0 } else { -1.0 };
            sign * div.value(a)
        })
        .sum::<f64>()
        / 2.0
}

#[test]
fn mobius_transform_matches_direct_sum() {
    for seed in 0..6 {
        let ps = random_point_set(7, 3, seed).unwrap();
        let div = diversity_l1::generators::tsp_diversity(&euclidean_metric(&ps).unwrap()).unwrap();
        let dec = split_weights_from_diversity(&div, MobiusMode::Float).unwrap();
        let full = subset::full(7);
        for (&b, &w) in &dec.signed {
            let direct = direct_mobius(&div, b) + direct_mobius(&div, full & !b);
            assert!((w - direct).abs() < 1e-9, "split {b:#b}: {w} vs {direct}");
        }
    }
}

#[test]
fn exact_and_float_mobius_agree() {
    for seed in 0..5 {
        let ps = random_point_set(8, 2, 100 + seed).unwrap();
        let div = diversity_l1::generators::l1_box_diversity(&ps).unwrap();
        let float = split_weights_from_diversity(&div, MobiusMode::Float).unwrap();
        let exact = split_weights_from_diversity(&div, MobiusMode::Exact).unwrap();
        assert!(float.embeddable);
        assert!(exact.embeddable);
        for (b, w) in &exact.signed {
            assert!((w - float.signed[b]).abs() < 1e-9);
        }
    }
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

fn brute_tsp(m: &Metric, a: u64) -> f64 {
    let pts = subset::to_indices(a);
    if pts.len() < 2 {
        return 0.0;
    }
    let (first, rest) = pts.split_first().unwrap();
    permutations(rest)
        .into_iter()
        .map(|perm| {
            let mut tour = vec![*first];
            tour.extend(perm);
            tour.push(*first);
            tour.windows(2).map(|w| m.dist(w[0], w[1])).sum::<f64>()
        })
        .fold(f64::INFINITY, f64::min)
        / 2.0
}

#[test]
fn held_karp_matches_permutations() {
    for seed in 0..4 {
        let m = euclidean_metric(&random_point_set(7, 2, seed).unwrap()).unwrap();
        let d = tsp_diversity(&m).unwrap();
        for a in 0..1u64 << 7 {
            assert!((d.value(a) - brute_tsp(&m, a)).abs() < 1e-9);
        }
    }
}

fn mst(m: &Metric, nodes: &[usize]) -> f64 {
    let mut in_tree = vec![false; nodes.len()];
    let mut best = vec![f64::INFINITY; nodes.len()];
    best[0] = 0.0;
    let mut total = 0.0;
    for _ in 0..nodes.len() {
        let (i, _) = best
            .iter()
            .enumerate()
            .filter(|(i, _)| !in_tree[*i])
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap();
        in_tree[i] = true;
        total += best[i];
        for j in 0..nodes.len() {
            if !in_tree[j] {
                best[j] = best[j].min(m.dist(nodes[i], nodes[j]));
            }
        }
    }
    total
}

/// Minimum over all Steiner-point sets of the spanning tree of terminals plus Steiner points.
fn brute_steiner(m: &Metric, a: u64) -> f64 {
    if a.count_ones() < 2 {
        return 0.0;
    }
    let others = subset::full(m.n()) & !a;
    subset::subsets_of(others)
        .map(|extra| mst(m, &subset::to_indices(a | extra)))
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn dreyfus_wagner_matches_mst_enumeration() {
    for seed in 0..4 {
        let m = euclidean_metric(&random_point_set(7, 2, 50 + seed).unwrap()).unwrap();
        let d = steiner_diversity(&m).unwrap();
        for a in 0..1u64 << 7 {
            assert!((d.value(a) - brute_steiner(&m, a)).abs() < 1e-9, "seed {seed} set {a:#b}");
        }
    }
}

/// Least concave majorant on the integers: the largest chord value over every `a <= k <= b`.
fn chord_envelope(f: &[f64]) -> Vec<f64> {
    let n = f.len();
    (0..n)
        .map(|k| {
            let mut best = f[k];
            for a in 0..=k {
                for b in k..n {
                    if a < b {
                        let t = (k - a) as f64 / (b - a) as f64;
                        best = best.max(f[a] + t * (f[b] - f[a]));
                    }
                }
            }
            best
        })
        .collect()
}

#[test]
fn hull_majorant_matches_chord_envelope() {
    for seed in 0..200 {
        let n = 2 + (seed as usize % 25);
        let f = random_subadditive_profile(n, seed).unwrap();
        let g = concave_majorant(&f);
        let brute = chord_envelope(f.values());
        for (x, y) in g.values().iter().zip(&brute) {
            assert!((x - y).abs() < 1e-9);
        }
    }
    let f = SymmetricProfile::new(vec![0.0, 1.0, 1.0, 2.0, 2.0]).unwrap();
    assert_eq!(chord_envelope(f.values()), vec![0.0, 1.0, 1.5, 2.0, 2.0]);
}

#[test]
fn phi_decomposition_matches_full_mobius() {
    let mut profiles: Vec<SymmetricProfile> = Vec::new();
    for n in 2..=9 {
        let table = PhiTable::new(n).unwrap();
        profiles.extend((1..n).map(|i| truncation_diversity(n, i).unwrap()));
        profiles.extend((0..6).map(|seed| random_subadditive_profile(n, 300 + seed).unwrap()));
        for (a, b) in [(1, n / 2), (1, 1), (n / 2, n / 2)] {
            let f = (0..n).map(|k| 1.5 * table.get(a, k) + 0.25 * table.get(b, k)).collect();
            profiles.push(SymmetricProfile::new(f).unwrap());
        }
    }
    let mut exact_count = 0;
    for f in &profiles {
        let div = FiniteDiversity::from_profile(f).unwrap();
        let full = split_weights_from_diversity(&div, MobiusMode::Exact).unwrap();
        let nu = phi_decomposition(f).unwrap();
        assert_eq!(nu.is_some(), full.embeddable, "{:?}", f.values());
        if let Some(nu) = nu {
            exact_count += 1;
            let n = f.n();
            for (side, w) in full.clamped.iter() {
                let s = side.count_ones().min(n as u32 - side.count_ones()) as usize;
                let per_subset = nu[s - 1] / (2.0 * binomial(n - 2, s - 1) as f64);
                let expected = if 2 * s == n { 2.0 * per_subset } else { per_subset };
                assert!((w - expected).abs() <= 1e-9 * f.at(n - 1), "side {side:b}");
            }
        }
    }
    assert!(exact_count >= 24);
}
