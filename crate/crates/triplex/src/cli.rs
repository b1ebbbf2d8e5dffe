//! Command-line interface.
//!
//! Exit codes: 0 success, 1 infeasible or not found (certificate JSON on
//! stdout), 2 invalid input, 3 search cap reached.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use triplex_core::cube::{self, DEFAULT_CAP};
use triplex_core::detach::{detach_with, verify_detachment, DetachOptions};
use triplex_core::evans::evans_embed;
use triplex_core::extension::extend;
use triplex_core::factorize::{chromatic_index, min_coloring};
use triplex_core::hypergraph::{verify_one_factorization, verify_proper};
use triplex_core::oracle::{brute_extend, enumerate_factorizations, Limits};
use triplex_core::Error;

use crate::formats::{
    read_json, CertificateJson, ColoringJson, CubeJson, DetachTaskJson, InstanceJson, MixedJson,
    PartialInstanceJson, VerdictJson,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "triplex",
    version,
    about = "Colorings and one-factorizations of complete triple systems"
)]
pub struct Cli {
    /// Seed for randomized tie-breaking in the detachment search.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Extend a coloring of λ·C(X,3) to a one-factorization of λ·C(Y,3).
    Extend {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Embed a partial q-coloring when |Y| ≥ 3|X|.
    Evans {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Minimum coloring of λ·C(n,3).
    Factorize(SizeArgs),
    /// Print the chromatic index of λ·C(n,3).
    ChromaticIndex(SizeArgs),
    /// Symmetric layer-rainbow latin cubes.
    Cube {
        #[command(subcommand)]
        command: CubeCommand,
    },
    /// Split an amalgamated vertex.
    Detach {
        #[arg(long)]
        task: PathBuf,
        /// Skip the even splitter and use the backtracking search.
        #[arg(long)]
        search_only: bool,
        #[arg(long, default_value_t = 20_000_000)]
        max_nodes: u64,
    },
    /// Brute-force oracles for tiny instances.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
    /// Check that a coloring is proper.
    Verify {
        #[arg(long)]
        coloring: PathBuf,
        /// Also require every class to cover every vertex once.
        #[arg(long)]
        factorization: bool,
    },
}

#[derive(Args, Debug)]
pub struct SizeArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long, default_value_t = 1)]
    pub lambda: u32,
}

#[derive(Subcommand, Debug)]
pub enum CubeCommand {
    /// Build a cube from a mixed one-factorization.
    Build {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Check the layer and symmetry conditions of a cube.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Search for a mixed one-factorization of order n.
    Search {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u32,
        #[arg(long, default_value_t = 10_000_000)]
        max_nodes: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum OracleCommand {
    /// Exhaustive search for an extension.
    Extend {
        #[arg(long)]
        instance: PathBuf,
        /// Largest host size, counted with multiplicity.
        #[arg(long, default_value_t = 60)]
        limit: u64,
    },
    /// All one-factorizations of λ·C(n,3).
    Enumerate {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        lambda: u32,
        /// Most factorizations to return.
        #[arg(long, default_value_t = 1000)]
        limit: usize,
        /// One factorization per color permutation.
        #[arg(long)]
        canonical: bool,
    },
}

enum Outcome {
    Ok(serde_json::Value),
    Infeasible(serde_json::Value),
}

fn ok<T: Serialize>(v: T) -> Result<Outcome> {
    Ok(Outcome::Ok(serde_json::to_value(v)?))
}

fn infeasible<T: Serialize>(v: T) -> Result<Outcome> {
    Ok(Outcome::Infeasible(serde_json::to_value(v)?))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            let (value, code) = match outcome {
                Outcome::Ok(v) => (v, EXIT_OK),
                Outcome::Infeasible(v) => (v, EXIT_INFEASIBLE),
            };
            match emit(&cli, &value) {
                Ok(()) => code,
                Err(e) => {
                    eprintln!("error: {e:#}");
                    EXIT_INVALID
                }
            }
        }
        Err(e) => match e.downcast_ref::<Error>() {
            Some(Error::Infeasible(why)) => {
                let cert = CertificateJson::from(why);
                match serde_json::to_value(cert)
                    .map_err(anyhow::Error::from)
                    .and_then(|v| emit(&cli, &v))
                {
                    Ok(()) => EXIT_INFEASIBLE,
                    Err(e) => {
                        eprintln!("error: {e:#}");
                        EXIT_INVALID
                    }
                }
            }
            Some(Error::NotFound) => {
                let v = serde_json::to_value(CertificateJson::NotFound).expect("plain enum");
                if emit(&cli, &v).is_ok() {
                    EXIT_INFEASIBLE
                } else {
                    EXIT_INVALID
                }
            }
            Some(Error::CapExceeded(msg)) => {
                eprintln!("inconclusive: {msg}");
                EXIT_CAP
            }
            _ => {
                eprintln!("error: {e:#}");
                EXIT_INVALID
            }
        },
    }
}

fn emit(cli: &Cli, value: &serde_json::Value) -> Result<()> {
    let text = match value {
        serde_json::Value::Number(n) => n.to_string(),
        other => serde_json::to_string_pretty(other)?,
    };
    match &cli.out {
        Some(path) => std::fs::write(path, text + "\n")?,
        None => writeln!(std::io::stdout(), "{text}")?,
    }
    Ok(())
}

fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Extend { instance } => {
            let inst = read_json::<InstanceJson>(instance)?.to_core()?;
            ok(ColoringJson::from(&extend(&inst)?))
        }
        Command::Evans { instance } => {
            let inst = read_json::<PartialInstanceJson>(instance)?.to_core()?;
            ok(ColoringJson::from(&evans_embed(&inst)?))
        }
        Command::Factorize(SizeArgs { n, lambda }) => {
            ok(ColoringJson::from(&min_coloring(*n, *lambda)?))
        }
        Command::ChromaticIndex(SizeArgs { n, lambda }) => {
            anyhow::ensure!(*n >= 3 && *lambda >= 1, "need n ≥ 3 and λ ≥ 1");
            ok(chromatic_index(*n, *lambda))
        }
        Command::Cube { command } => match command {
            CubeCommand::Build { input } => {
                let mf = read_json::<MixedJson>(input)?.to_core()?;
                ok(CubeJson::from(&cube::build_cube(&mf)?))
            }
            CubeCommand::Verify { input } => {
                let c = read_json::<CubeJson>(input)?.to_core()?;
                let verdict = VerdictJson::from_result(&cube::verify(&c));
                if verdict.ok {
                    ok(verdict)
                } else {
                    infeasible(verdict)
                }
            }
            CubeCommand::Search { n, cap, max_nodes } => {
                let mf = cube::find_mixed_factorization(*n, *cap, *max_nodes)?;
                ok(MixedJson::from(&mf))
            }
        },
        Command::Detach {
            task,
            search_only,
            max_nodes,
        } => {
            let task = read_json::<DetachTaskJson>(task)?.to_core()?;
            let opts = DetachOptions {
                seed: cli.seed,
                max_nodes: *max_nodes,
                search_only: *search_only,
            };
            let out = detach_with(&task, &opts)?;
            verify_detachment(&task, &out)
                .map_err(|r| Error::Internal(format!("detachment failed its own check: {r}")))?;
            ok(ColoringJson::from(&out))
        }
        Command::Oracle { command } => match command {
            OracleCommand::Extend { instance, limit } => {
                let inst = read_json::<InstanceJson>(instance)?.to_core()?;
                let limits = Limits {
                    max_edges: *limit,
                    ..Limits::default()
                };
                match brute_extend(&inst, limits)? {
                    Some(w) => ok(ColoringJson::from(&w)),
                    None => infeasible(CertificateJson::NoWitness),
                }
            }
            OracleCommand::Enumerate {
                n,
                lambda,
                limit,
                canonical,
            } => {
                let limits = Limits {
                    max_results: *limit,
                    ..Limits::default()
                };
                let all = enumerate_factorizations(*n, *lambda, limits, *canonical)?;
                ok(all.iter().map(ColoringJson::from).collect::<Vec<_>>())
            }
        },
        Command::Verify {
            coloring,
            factorization,
        } => {
            let c = read_json::<ColoringJson>(coloring)?.to_core()?;
            let mut result = match verify_proper(&c) {
                Ok(()) => Ok(()),
                Err(Error::InvalidColoring(report)) => Err(report),
                Err(e) => return Err(e.into()),
            };
            if *factorization && result.is_ok() {
                result = verify_one_factorization(&c);
            }
            let verdict = VerdictJson::from_result(&result);
            if verdict.ok {
                ok(verdict)
            } else {
                infeasible(verdict)
            }
        }
    }
}
