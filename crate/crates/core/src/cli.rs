//! Command-line interface: `bernmass <subcommand> ...`.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::bernstein::mass_matrix;
use crate::conditioning::condition_table;
use crate::dense::Matrix;
use crate::error::Error;
use crate::experiments::{
    conditioning_table, projection_table, random_table, run_projection_with, run_random_with,
    FuncTag, RandomConfig, RhsMode,
};
use crate::inverse_exact::inverse_matrix;
use crate::parallel::Execution;
use crate::solvers::{parse_methods, Method, SolverRegistry, DEFAULT_MAX_DEGREE};
use crate::spectral::{build_q, eigenvalues};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "bernmass",
    version,
    about = "Bernstein mass matrix experiments"
)]
pub struct Cli {
    /// Run degree sweeps on the calling thread only.
    #[arg(long, global = true)]
    sequential: bool,

    /// Largest degree the solvers accept.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_DEGREE)]
    degree_ceiling: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// L² projection of f1 or f2 with each solver.
    Project {
        #[arg(long = "func")]
        func: FuncTag,
        #[arg(long)]
        max_degree: usize,
        /// Comma list of direct, dft, eig, cho.
        #[arg(long, default_value = "direct,dft,eig,cho")]
        methods: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random right-hand sides in [-0.5, 0.5]^(n+1).
    Random {
        #[arg(long)]
        max_degree: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest degree solved exactly for the reference solution.
        #[arg(long, default_value_t = RandomConfig::default().oracle_ceiling)]
        oracle_ceiling: usize,
        /// Draw a random solution x and set b = Mx instead of drawing b.
        #[arg(long)]
        rhs_from_solution: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Condition numbers κ₂ and κ_{M→2}.
    Conditioning {
        #[arg(long)]
        max_degree: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dump one matrix or the eigenvalues.
    Matrix {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        what: What,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum What {
    Mass,
    Inverse,
    Q,
    Eigenvalues,
}

enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownMethod(_)
            | Error::UnsupportedDegree { .. }
            | Error::Parse(_)
            | Error::LengthMismatch { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

fn matrix_csv(m: &Matrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|v| v.to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn emit(out: Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(&path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Usage(format!("cannot write to stdout: {e}"))),
    }
}

fn check_degree(n: usize, ceiling: usize) -> Result<(), Failure> {
    if n > ceiling {
        Err(Error::UnsupportedDegree { n, max: ceiling }.into())
    } else {
        Ok(())
    }
}

fn execute(cli: Cli) -> Result<(), Failure> {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let ceiling = cli.degree_ceiling;
    match cli.command {
        Command::Project {
            func,
            max_degree,
            methods,
            out,
        } => {
            let methods = parse_methods(&methods)?;
            let registry = SolverRegistry::with_max_degree(ceiling);
            let recs =
                run_projection_with(&registry, &|x| func.eval(x), max_degree, &methods, exec)?;
            emit(out, &projection_table(&recs, &methods).to_csv())
        }
        Command::Random {
            max_degree,
            seed,
            oracle_ceiling,
            rhs_from_solution,
            out,
        } => {
            let registry = SolverRegistry::with_max_degree(ceiling);
            let rhs = if rhs_from_solution {
                RhsMode::FromSolution
            } else {
                RhsMode::Uniform
            };
            let config = RandomConfig {
                oracle_ceiling,
                rhs,
            };
            let recs = run_random_with(&registry, max_degree, seed, &Method::ALL, config, exec)?;
            emit(out, &random_table(&recs, &Method::ALL).to_csv())
        }
        Command::Conditioning { max_degree, out } => emit(
            out,
            &conditioning_table(&condition_table(max_degree)).to_csv(),
        ),
        Command::Matrix { n, what, out } => {
            check_degree(n, ceiling)?;
            let text = match what {
                What::Mass => matrix_csv(mass_matrix(n)?.entries()),
                What::Inverse => matrix_csv(inverse_matrix(n).entries()),
                What::Q => matrix_csv(build_q(n).q()),
                What::Eigenvalues => eigenvalues(n).iter().map(|v| format!("{v}\n")).collect(),
            };
            let bad = text
                .split(['\n', ','])
                .filter(|s| !s.is_empty())
                .any(|s| !s.parse::<f64>().is_ok_and(f64::is_finite));
            if bad {
                return Err(Failure::Numerical(format!(
                    "non-finite entries in the {what:?} output at degree {n}"
                )));
            }
            emit(out, &text)
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code: 0 on success, 2 for usage errors, 3 for numerical failures.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            EXIT_NUMERICAL
        }
    }
}
