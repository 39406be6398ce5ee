mod demos;
mod error;
mod input;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use orbitset::{APSet, Recurrence, SmlSolver};

use error::CliError;
use input::{FileOptions, Overrides, ProblemFile};
use report::{mismatches, render, Format};

/// Return times of endomorphism orbits to cosets, computed exactly.
#[derive(Parser)]
#[command(name = "orbitset", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct SolverFlags {
    /// Primes tried by the modular sieves, comma separated.
    #[arg(long, value_delimiter = ',')]
    sieve_primes: Option<Vec<u64>>,
    /// Largest torsion subgroup to enumerate.
    #[arg(long)]
    torsion_cap: Option<u64>,
    /// Certifiers to run, in order, comma separated.
    #[arg(long, value_delimiter = ',')]
    certifiers: Option<Vec<String>>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

impl SolverFlags {
    fn overrides(&self, search_bound: Option<u64>) -> Overrides {
        Overrides {
            search_bound,
            sieve_primes: self.sieve_primes.clone(),
            torsion_cap: self.torsion_cap,
            certifiers: self.certifiers.clone(),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve a problem file and print the return-time set.
    Solve {
        file: PathBuf,
        /// Search bound for the bounded scan.
        #[arg(long)]
        bound: Option<u64>,
        #[command(flatten)]
        flags: SolverFlags,
    },
    /// Compare the solver with direct iteration for every k up to the bound.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 2000)]
        bound: u64,
        /// Also check a previously recorded output against direct iteration.
        #[arg(long)]
        expected: Option<PathBuf>,
        #[command(flatten)]
        flags: SolverFlags,
    },
    /// Questions about a single integer linear recurrence.
    Recurrence {
        #[command(subcommand)]
        command: RecurrenceCommand,
    },
    /// Run a built-in example, or list them when no name is given.
    Demo {
        name: Option<String>,
        /// Print the example's input instead of solving it.
        #[arg(long)]
        show: bool,
        #[arg(long)]
        bound: Option<u64>,
        #[command(flatten)]
        flags: SolverFlags,
    },
}

#[derive(Subcommand)]
enum RecurrenceCommand {
    /// Indices k with u(k) = target, where u(k+n) = c1 u(k+n-1) + ... + cn u(k).
    ZeroSet {
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        coeffs: Vec<BigInt>,
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        init: Vec<BigInt>,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        target: BigInt,
        #[arg(long)]
        bound: Option<u64>,
        #[command(flatten)]
        flags: SolverFlags,
    },
}

pub(crate) fn recurrence_zero_set(
    coeffs: Vec<BigInt>,
    init: Vec<BigInt>,
    target: BigInt,
    overrides: &Overrides,
) -> Result<APSet, CliError> {
    let rec = Recurrence::new(coeffs, init)?;
    let solver = SmlSolver::new(overrides.apply(&FileOptions::default()).sml)?;
    Ok(solver.solve_linear_condition(&[(1.into(), rec)], &target)?)
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn listed(ks: &[u64]) -> String {
    ks.iter().map(u64::to_string).collect::<Vec<_>>().join(", ")
}

fn verify(
    file: &Path,
    bound: u64,
    expected: Option<&Path>,
    flags: &SolverFlags,
) -> Result<(), CliError> {
    let problem = ProblemFile::parse(&read(file)?)?;
    let mut settings = flags.overrides(None).apply(&problem.options);
    // members past the search bound may be missing unless it covers the check
    settings.sml.search_bound = settings.sml.search_bound.max(bound);
    let set = problem.problem.solve(&settings.pipeline()?)?;
    let truth = problem.problem.oracle(bound);

    let mut failures = Vec::new();
    let bad = mismatches(&set, &truth, bound);
    if !bad.is_empty() {
        failures.push(format!(
            "solver and direct iteration differ at k = {}",
            listed(&bad)
        ));
    }
    if let Some(path) = expected {
        let recorded: APSet = serde_json::from_str(&read(path)?)
            .map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))?;
        let bad = mismatches(&recorded, &truth, bound);
        if !bad.is_empty() {
            failures.push(format!(
                "recorded output and direct iteration differ at k = {}",
                listed(&bad)
            ));
        }
    }
    if failures.is_empty() {
        println!("AGREE up to {bound}");
        return Ok(());
    }
    println!("MISMATCH up to {bound}");
    for f in &failures {
        println!("  {f}");
    }
    Err(CliError::Mismatch(format!(
        "verification failed up to {bound}"
    )))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve { file, bound, flags } => {
            let problem = ProblemFile::parse(&read(&file)?)?;
            let pipeline = flags.overrides(bound).apply(&problem.options).pipeline()?;
            println!(
                "{}",
                render(&problem.problem.solve(&pipeline)?, flags.format)
            );
        }
        Command::Verify {
            file,
            bound,
            expected,
            flags,
        } => verify(&file, bound, expected.as_deref(), &flags)?,
        Command::Recurrence {
            command:
                RecurrenceCommand::ZeroSet {
                    coeffs,
                    init,
                    target,
                    bound,
                    flags,
                },
        } => {
            let set = recurrence_zero_set(coeffs, init, target, &flags.overrides(bound))?;
            println!("{}", render(&set, flags.format));
        }
        Command::Demo { name: None, .. } => {
            for d in demos::registry() {
                println!("{:<16}{}", d.name(), d.summary());
            }
        }
        Command::Demo {
            name: Some(name),
            show,
            bound,
            flags,
        } => {
            let demo = demos::find(&name).ok_or_else(|| {
                let names: Vec<_> = demos::registry().iter().map(|d| d.name()).collect();
                CliError::Malformed(format!(
                    "no demo named {name:?} (try one of: {})",
                    names.join(", ")
                ))
            })?;
            if show {
                println!("{}", demo.source());
            } else {
                println!(
                    "{}",
                    render(&demo.run(&flags.overrides(bound))?, flags.format)
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
