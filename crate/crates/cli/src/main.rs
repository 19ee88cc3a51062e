//! `divl1`: check diversities, embed symmetric ones into L1, compute optimal split
//! distortion and reproduce tables.
//!
//! Exit codes: 0 success, 1 mathematical failure, 2 I/O, format or range error.

mod sweep;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use diversity_l1::io::{
    coordinates_csv, format_g12, parse_diversity, parse_profile, tables_csv, weights_to_json,
};
use diversity_l1::oracle::split_lp;
use diversity_l1::{
    coordinates_from_weights, distortion, embed_symmetric, optimal_split_distortion, AxiomVerdict, EmbeddingMethod,
    Error,
};

use crate::sweep::Family;

#[derive(Parser)]
#[command(name = "divl1", version, about = "Finite diversities and their L1 embeddings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the diversity axioms for a diversity JSON file.
    Check {
        #[arg(long)]
        input: PathBuf,
        /// Test every triple of subsets instead of the reduced criterion.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Embed a symmetric diversity given by its profile.
    Embed {
        #[arg(long)]
        input: PathBuf,
        /// Output split weighting (JSON).
        #[arg(long)]
        weights: PathBuf,
        /// Output coordinates (CSV).
        #[arg(long)]
        coords: PathBuf,
    },
    /// Optimal distortion over all split combinations (n <= 8).
    Optimal {
        #[arg(long)]
        input: PathBuf,
        /// Output witness weighting (JSON).
        #[arg(long)]
        witness: PathBuf,
        /// Also write the linear program in text form.
        #[arg(long)]
        dump_lp: Option<PathBuf>,
    },
    /// Write phi, capped-truncation and truncation tables as CSV.
    Tables {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Measure pipeline distortion over a generated family.
    Sweep {
        #[arg(long)]
        nmax: usize,
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also solve for the optimal split distortion.
        #[arg(long)]
        lp: bool,
        #[arg(long)]
        out: PathBuf,
    },
}

/// A command failure with its exit code.
#[derive(Debug)]
pub(crate) struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub(crate) fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidDiversity(_) | Error::InvalidProfile(_) | Error::InvalidWeighting(_) => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
}

fn check(input: &Path, exhaustive: bool) -> CmdResult {
    let div = parse_diversity(&read(input)?)?;
    let verdict = if exhaustive {
        div.check_axioms_exhaustive()?
    } else {
        div.check_axioms_reduced()
    };
    let mode = if exhaustive { "exhaustive" } else { "reduced" };
    match verdict {
        AxiomVerdict::Pass => {
            println!("pass: n = {}, {mode} check", div.n());
            Ok(0)
        }
        AxiomVerdict::Fail(v) => {
            println!("fail: n = {}, {mode} check", div.n());
            println!("counterexample: {v}");
            Ok(1)
        }
    }
}

fn embed(input: &Path, weights: &Path, coords: &Path) -> CmdResult {
    let f = parse_profile(&read(input)?)?;
    let embedding = embed_symmetric(&f)?;
    let w = embedding.split_weighting()?;
    let measured = distortion(&f, &w)?;
    write(weights, &weights_to_json(&w))?;
    write(coords, &coordinates_csv(&coordinates_from_weights(&w)))?;
    println!("n = {}", f.n());
    println!("method = {}", method_name(embedding.method));
    for a in &embedding.assignments {
        let source = a.i.map_or_else(|| "exact".to_owned(), |i| format!("lambda_{i}"));
        println!(
            "{source}: phi_{} coefficient {}, weight {} per split",
            a.ell,
            format_g12(a.lambda),
            format_g12(a.weight_per_subset)
        );
    }
    println!("splits = {}", w.len());
    println!("contraction = {}", format_g12(measured.contraction));
    println!("expansion = {}", format_g12(measured.expansion));
    println!("measured distortion = {}", format_g12(measured.distortion));
    println!("certified bound = {}", format_g12(diversity_l1::CERTIFIED_DISTORTION));
    Ok(0)
}

pub(crate) fn method_name(m: EmbeddingMethod) -> &'static str {
    match m {
        EmbeddingMethod::Construction => "construction",
        EmbeddingMethod::Exact => "exact",
    }
}

fn optimal(input: &Path, witness: &Path, dump_lp: Option<&Path>) -> CmdResult {
    let div = parse_diversity(&read(input)?)?;
    let result = optimal_split_distortion(&div)?;
    if let Some(path) = dump_lp {
        let splits = diversity_l1::oracle::canonical_splits(div.n());
        write(path, &split_lp(&div, &splits).0.dump())?;
    }
    write(witness, &weights_to_json(&result.witness))?;
    println!("n = {}", div.n());
    println!("optimal distortion = {}", format_g12(result.distortion));
    println!("witness splits = {}", result.witness.len());
    println!("pivots = {}", result.iterations);
    println!("max constraint violation = {}", format_g12(result.max_violation));
    Ok(0)
}

fn tables(n: usize, out: &Path) -> CmdResult {
    if !(2..=64).contains(&n) {
        return Err(Failure::usage(format!("tables need 2 <= n <= 64, got {n}")));
    }
    write(out, &tables_csv(n)?)?;
    println!("wrote {} rows to {}", n * (n - 1), out.display());
    Ok(0)
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Check { input, exhaustive } => check(&input, exhaustive),
        Command::Embed { input, weights, coords } => embed(&input, &weights, &coords),
        Command::Optimal {
            input,
            witness,
            dump_lp,
        } => optimal(&input, &witness, dump_lp.as_deref()),
        Command::Tables { n, out } => tables(n, &out),
        Command::Sweep {
            nmax,
            family,
            seed,
            lp,
            out,
        } => {
            let csv = sweep::run(family, nmax, seed, lp)?;
            write(&out, &csv)?;
            println!("wrote {} rows to {}", csv.lines().count() - 1, out.display());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
