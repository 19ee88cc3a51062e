//! Entry points shared by the fuzz targets and the corpus regression test. Each takes
//! raw bytes, exercises one decoder and panics only on a broken invariant.

use crate::diversity::SetFunction;
use crate::embed::{coordinates_from_weights, embed_symmetric, CERTIFIED_DISTORTION};
use crate::io;
use crate::lp::{solve_lp_with, LpProblem, LpStatus, SimplexOptions};
use crate::profile::concave_majorant;

/// Ground sets up to this size also get the exponential checks.
const SMALL: usize = 8;

fn text(data: &[u8]) -> Option<&str> {
    std::str::from_utf8(data).ok()
}

pub fn diversity(data: &[u8]) {
    let Some(Ok(div)) = text(data).map(io::parse_diversity) else { return };
    let again = io::parse_diversity(&io::diversity_to_json(&div)).expect("serialized diversity parses");
    assert_eq!(div, again);
    let reduced = div.check_axioms_reduced().passed();
    if div.n() <= 6 {
        assert_eq!(reduced, div.check_axioms_exhaustive().expect("small n").passed());
    }
    if div.n() >= 2 {
        let gamma = div.skewness().expect("n >= 2");
        assert!(gamma >= 1.0 || gamma.is_nan());
        let _ = div.symmetrize();
    }
}

pub fn profile(data: &[u8]) {
    let Some(Ok(f)) = text(data).map(io::parse_profile) else { return };
    let again = io::parse_profile(&io::profile_to_json(&f)).expect("serialized profile parses");
    assert_eq!(f, again);
    let g = concave_majorant(&f);
    assert_eq!(g.n(), f.n());
    if let Ok(e) = embed_symmetric(&f) {
        let d = e.report.distortion;
        assert!(d.is_nan() || d <= CERTIFIED_DISTORTION, "distortion {d} above the certified bound");
    }
}

pub fn weights(data: &[u8]) {
    let Some(Ok(w)) = text(data).map(io::parse_weights) else { return };
    let again = io::parse_weights(&io::weights_to_json(&w)).expect("serialized weighting parses");
    assert_eq!(w, again);
    if w.n() <= SMALL && w.total_weight() < 1e300 {
        let table = w.tabulate();
        let coords = coordinates_from_weights(&w).tabulate();
        for a in 0..table.len() as u64 {
            let direct = w.eval(a);
            assert_eq!(coords[a as usize], direct, "coordinates disagree on {a:b}");
            assert!((table[a as usize] - direct).abs() <= 1e-9 * (1.0 + direct.abs()));
        }
    }
}

pub fn point_set(data: &[u8]) {
    let Some(Ok(ps)) = text(data).map(io::parse_point_set) else { return };
    let again = io::parse_point_set(&io::point_set_to_json(&ps)).expect("serialized point set parses");
    assert_eq!(ps, again);
    if ps.n() <= SMALL && ps.dim() <= 16 {
        let table = ps.tabulate();
        for a in 0..table.len() as u64 {
            let v = ps.value(a);
            assert!(table[a as usize] == v || (table[a as usize].is_nan() && v.is_nan()));
        }
    }
}

pub fn lp_dump(data: &[u8]) {
    let Some(Ok(p)) = text(data).map(LpProblem::parse_dump) else { return };
    let again = LpProblem::parse_dump(&p.dump()).expect("dumped problem parses");
    assert_eq!(p, again);
    if p.num_vars() <= 16 && p.constraints.len() <= 32 {
        let options = SimplexOptions {
            max_iterations: 10_000,
            ..SimplexOptions::default()
        };
        if let Ok(solution) = solve_lp_with(&p, &options) {
            if solution.status == LpStatus::Optimal {
                assert_eq!(solution.x.len(), p.num_vars());
                assert!(solution.x.iter().all(|v| *v >= 0.0));
            }
        }
    }
}
