//! Replays the checked-in fuzz corpus through the fuzz harness, then feeds it mutated
//! seeds. Runs on the stable toolchain; `cargo fuzz` drives the same entry points.

use std::fs;
use std::path::PathBuf;

use diversity_l1::harness;
use proptest::prelude::*;

type Target = fn(&[u8]);

const TARGETS: [(&str, Target); 5] = [
    ("parse_diversity", harness::diversity),
    ("parse_profile", harness::profile),
    ("parse_weights", harness::weights),
    ("parse_point_set", harness::point_set),
    ("lp_dump", harness::lp_dump),
];

fn seeds(target: &str) -> Vec<Vec<u8>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut paths: Vec<PathBuf> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("corpus {}: {e}", dir.display()))
        .map(|entry| entry.unwrap().path())
        .collect();
    paths.sort();
    paths.into_iter().map(|p| fs::read(p).unwrap()).collect()
}

#[test]
fn corpus_replays_cleanly() {
    for (name, run) in TARGETS {
        let corpus = seeds(name);
        assert!(corpus.len() >= 4, "{name} has {} seeds", corpus.len());
        for seed in &corpus {
            run(seed);
        }
    }
}

#[derive(Debug, Clone)]
enum Edit {
    Replace(usize, u8),
    Insert(usize, u8),
    Delete(usize),
}

/// Bytes that keep mutated inputs close to the grammar.
const ALPHABET: &[u8] = b"0123456789.-e,[]{}\": \nminrowub<>=";

fn edit() -> impl Strategy<Value = Edit> {
    let byte = prop::sample::select(ALPHABET);
    prop_oneof![
        (any::<usize>(), byte.clone()).prop_map(|(i, b)| Edit::Replace(i, b)),
        (any::<usize>(), byte).prop_map(|(i, b)| Edit::Insert(i, b)),
        any::<usize>().prop_map(Edit::Delete),
    ]
}

fn apply(mut data: Vec<u8>, edits: &[Edit]) -> Vec<u8> {
    for e in edits {
        let len = data.len();
        match *e {
            Edit::Replace(i, b) if len > 0 => data[i % len] = b,
            Edit::Insert(i, b) => data.insert(i % (len + 1), b),
            Edit::Delete(i) if len > 0 => {
                data.remove(i % len);
            }
            _ => {}
        }
    }
    data
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn mutated_seeds_never_break_invariants(
        target in 0..TARGETS.len(),
        pick in any::<usize>(),
        edits in prop::collection::vec(edit(), 1..6),
    ) {
        let (name, run) = TARGETS[target];
        let corpus = seeds(name);
        run(&apply(corpus[pick % corpus.len()].clone(), &edits));
    }
}
