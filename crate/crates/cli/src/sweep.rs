//! Distortion sweeps over generated families.

use clap::ValueEnum;
use rayon::prelude::*;

use diversity_l1::generators::{
    diameter_diversity, euclidean_metric, l1_box_diversity, phi_row_profile, random_point_set,
    random_subadditive_profile, steiner_diversity, truncation_diversity, tsp_diversity, STEINER_CAP, TSP_CAP,
};
use diversity_l1::io::format_g12;
use diversity_l1::oracle::ORACLE_CAP;
use diversity_l1::{
    build_symmetric_embedding, distortion, embed_symmetric, optimal_split_distortion,
    optimal_symmetric_split_distortion, EmbeddingMethod, FiniteDiversity, Result, SymmetricProfile,
    CERTIFIED_DISTORTION,
};

use crate::{method_name, Failure};

pub const NMAX: usize = 30;
pub const NMAX_LP: usize = 12;

/// Instances per ground-set size for the seeded families.
const SEEDED_INSTANCES: u64 = 5;

/// Largest ground set for families measured on every subset.
const MEASURE_CAP: usize = diversity_l1::embed::MATERIALIZE_CAP;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Truncation,
    RandomSubadditive,
    PhiRows,
    Diameter,
    L1,
    Tsp,
    Steiner,
}

impl Family {
    fn name(self) -> &'static str {
        match self {
            Family::Truncation => "truncation",
            Family::RandomSubadditive => "random-subadditive",
            Family::PhiRows => "phi-rows",
            Family::Diameter => "diameter",
            Family::L1 => "l1",
            Family::Tsp => "tsp",
            Family::Steiner => "steiner",
        }
    }

    fn is_symmetric(self) -> bool {
        matches!(self, Family::Truncation | Family::RandomSubadditive | Family::PhiRows)
    }

    /// Largest ground set the generator and measurement support.
    fn cap(self, lp: bool) -> usize {
        let base = match self {
            Family::Truncation | Family::RandomSubadditive | Family::PhiRows => NMAX,
            Family::Diameter | Family::L1 => MEASURE_CAP,
            Family::Tsp => TSP_CAP,
            Family::Steiner => STEINER_CAP,
        };
        match (lp, self.is_symmetric()) {
            (false, _) => base,
            (true, true) => base.min(NMAX_LP),
            (true, false) => base.min(ORACLE_CAP),
        }
    }
}

enum Input {
    Symmetric(SymmetricProfile),
    General(FiniteDiversity),
}

struct Instance {
    n: usize,
    label: String,
    seed: u64,
}

struct Row {
    skewness: f64,
    method: EmbeddingMethod,
    /// Distortion of the embedding `embed` would output.
    measured: f64,
    /// Distortion of the construction alone, without the exact shortcut.
    construction: f64,
    lp: Option<f64>,
}

fn instance_seed(seed: u64, n: usize, r: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ ((n as u64) << 32) ^ r
}

fn instances(family: Family, nmax: usize, seed: u64) -> Vec<Instance> {
    let mut out = Vec::new();
    for n in 2..=nmax {
        match family {
            Family::Truncation => out.extend((1..n).map(|i| Instance {
                n,
                label: format!("i={i}"),
                seed: i as u64,
            })),
            Family::PhiRows => out.extend((1..=n / 2).map(|ell| Instance {
                n,
                label: format!("ell={ell}"),
                seed: ell as u64,
            })),
            _ => out.extend((0..SEEDED_INSTANCES).map(|r| Instance {
                n,
                label: format!("r={r}"),
                seed: instance_seed(seed, n, r),
            })),
        }
    }
    out
}

fn generate(family: Family, inst: &Instance) -> Result<Input> {
    let n = inst.n;
    let points = || random_point_set(n, 2, inst.seed);
    Ok(match family {
        Family::Truncation => Input::Symmetric(truncation_diversity(n, inst.seed as usize)?),
        Family::PhiRows => Input::Symmetric(phi_row_profile(n, inst.seed as usize)?),
        Family::RandomSubadditive => Input::Symmetric(random_subadditive_profile(n, inst.seed)?),
        Family::Diameter => Input::General(diameter_diversity(&euclidean_metric(&points()?)?)?),
        Family::L1 => Input::General(l1_box_diversity(&points()?)?),
        Family::Tsp => Input::General(tsp_diversity(&euclidean_metric(&points()?)?)?),
        Family::Steiner => Input::General(steiner_diversity(&euclidean_metric(&points()?)?)?),
    })
}

fn measure(input: &Input, lp: bool) -> Result<Row> {
    match input {
        Input::Symmetric(f) => {
            let chosen = embed_symmetric(f)?;
            let construction = match chosen.method {
                EmbeddingMethod::Construction => chosen.report.distortion,
                EmbeddingMethod::Exact => build_symmetric_embedding(f)?.report.distortion,
            };
            Ok(Row {
                skewness: 1.0,
                method: chosen.method,
                measured: chosen.report.distortion,
                construction,
                lp: if lp { Some(optimal_symmetric_split_distortion(f)?.0) } else { None },
            })
        }
        Input::General(div) => {
            let f = div.symmetrize()?;
            let chosen = embed_symmetric(&f)?;
            let measured = distortion(div, &chosen.split_weighting()?)?.distortion;
            let construction = match chosen.method {
                EmbeddingMethod::Construction => measured,
                EmbeddingMethod::Exact => distortion(div, &build_symmetric_embedding(&f)?.split_weighting()?)?.distortion,
            };
            Ok(Row {
                skewness: div.skewness()?,
                method: chosen.method,
                measured,
                construction,
                lp: if lp { Some(optimal_split_distortion(div)?.distortion) } else { None },
            })
        }
    }
}

/// CSV with one row per instance, ordered by `n` and then instance.
pub fn run(family: Family, nmax: usize, seed: u64, lp: bool) -> std::result::Result<String, Failure> {
    let cap = family.cap(lp);
    if nmax < 2 || nmax > cap {
        return Err(Failure::usage(format!(
            "family {} needs 2 <= nmax <= {cap}{}, got {nmax}",
            family.name(),
            if lp { " with --lp" } else { "" }
        )));
    }
    let list = instances(family, nmax, seed);
    let rows: Vec<Result<Row>> = list
        .par_iter()
        .map(|inst| generate(family, inst).and_then(|input| measure(&input, lp)))
        .collect();
    let mut csv = String::from(
        "n,family,instance,skewness,method,measured_distortion,construction_distortion,lp_distortion,certified_bound\n",
    );
    for (inst, row) in list.iter().zip(rows) {
        let row = row?;
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            inst.n,
            family.name(),
            inst.label,
            format_g12(row.skewness),
            method_name(row.method),
            format_g12(row.measured),
            format_g12(row.construction),
            row.lp.map(format_g12).unwrap_or_default(),
            format_g12(CERTIFIED_DISTORTION * row.skewness),
        ));
    }
    Ok(csv)
}
