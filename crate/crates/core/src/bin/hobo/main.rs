//! `hobo` command-line interface.
//!
//! Results go to stdout, diagnostics to stderr. Exit status is 0 on
//! success, 2 for usage or input errors and 1 for anything else.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hobo_core::annealer::{anneal, AnnealConfig};
use hobo_core::compressor::{compression_report, SvdFactors};
use hobo_core::graph::polynomial_dot;
use hobo_core::polynomial::{random_instance, Assignment, Polynomial, RandomInstance};
use hobo_core::tensor::build_hobo_tensor;
use hobo_core::{brute_force_min, contract, HoboError};

const BITSTRING_HELP: &str = "Bitstrings are read left to right: character i is x_i.";

#[derive(Parser)]
#[command(name = "hobo", version, about = "Higher-order binary optimization toolkit", after_help = BITSTRING_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimize an instance with simulated annealing
    Solve(SolveArgs),
    /// Evaluate the cost of one assignment
    Eval {
        file: PathBuf,
        /// Assignment bitstring, character i is x_i
        #[arg(long)]
        assign: String,
        /// Contract the dense coefficient tensor instead of summing terms
        #[arg(long)]
        dense: bool,
    },
    /// Write the dense coefficient tensor as JSON
    BuildTensor {
        file: PathBuf,
        /// Tensor order, defaults to the polynomial degree
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report a truncated-SVD compression of the coefficient tensor
    Compress {
        file: PathBuf,
        #[arg(long)]
        rank: usize,
        /// Tensor order, defaults to max(degree, 2)
        #[arg(long)]
        order: Option<usize>,
        /// Also write the truncated factors as JSON
        #[arg(long)]
        factors: Option<PathBuf>,
    },
    /// Exhaustively find the minimum (up to 24 variables)
    Brute {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Generate a random instance
    Gen(GenArgs),
    /// Write the tensor-network graph in DOT format
    Graph {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SolveArgs {
    file: PathBuf,
    #[arg(long, default_value_t = 1000)]
    sweeps: usize,
    #[arg(long, default_value_t = 8)]
    restarts: usize,
    /// Initial temperature, derived from the coefficients when omitted
    #[arg(long)]
    t0: Option<f64>,
    #[arg(long = "t-end", default_value_t = 1e-3)]
    t_end: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads for restarts; output does not depend on it
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    degree: usize,
    #[arg(long)]
    terms: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = -10.0, allow_hyphen_values = true)]
    coef_min: f64,
    #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
    coef_max: f64,
    /// Draw integer coefficients
    #[arg(long)]
    integer: bool,
    /// Output path; `.json` selects JSON, anything else the text format
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<HoboError> for Failure {
    fn from(e: HoboError) -> Self {
        Failure::Input(e.to_string())
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn load(path: &Path) -> CliResult<Polynomial> {
    let source = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    Polynomial::parse_any(&source).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, content: &str) -> CliResult {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| Failure::Internal(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn solve(args: SolveArgs) -> CliResult {
    let p = load(&args.file)?;
    let cfg = AnnealConfig {
        sweeps: args.sweeps,
        restarts: args.restarts,
        t_initial: args.t0,
        t_final: args.t_end,
        seed: args.seed,
        ..Default::default()
    };
    let result = match args.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Failure::Internal(e.to_string()))?
            .install(|| anneal(&p, &cfg))?,
        None => anneal(&p, &cfg)?,
    };
    if args.json {
        println!("{}", result.to_json());
    } else {
        println!("cost {}", result.best_cost);
        println!("assignment {}", result.best_assignment);
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Solve(args) => solve(args),
        Command::Eval { file, assign, dense } => {
            let p = load(&file)?;
            let x = Assignment::from_bitstring(&assign)?;
            let cost = if dense {
                if x.len() != p.num_vars() {
                    return Err(HoboError::LengthMismatch {
                        expected: p.num_vars(),
                        actual: x.len(),
                    }
                    .into());
                }
                contract(&build_hobo_tensor(&p, None)?, &x)? + p.offset()
            } else {
                p.evaluate(&x)?
            };
            println!("{cost}");
            Ok(())
        }
        Command::BuildTensor { file, order, out } => {
            let p = load(&file)?;
            let t = build_hobo_tensor(&p, order)?;
            emit(out.as_deref(), &format!("{}\n", t.to_json()))
        }
        Command::Compress {
            file,
            rank,
            order,
            factors,
        } => {
            let p = load(&file)?;
            let t = build_hobo_tensor(&p, Some(order.unwrap_or(p.degree().max(2))))?;
            let report = compression_report(&t, rank)?;
            if let Some(path) = factors {
                let f = hobo_core::truncate(&SvdFactors::of_tensor(&t)?, rank)?;
                emit(Some(&path), &format!("{}\n", f.to_json()))?;
            }
            let json = serde_json::to_string(&report).map_err(|e| Failure::Internal(e.to_string()))?;
            println!("{json}");
            Ok(())
        }
        Command::Brute { file, json } => {
            let p = load(&file)?;
            let (x, cost) = brute_force_min(&p)?;
            if json {
                println!("{}", serde_json::json!({ "assignment": x.bits(), "cost": cost }));
            } else {
                println!("min {cost} at {x}");
            }
            Ok(())
        }
        Command::Gen(args) => {
            let cfg = RandomInstance {
                n: args.n,
                max_degree: args.degree,
                terms: args.terms,
                coef_min: args.coef_min,
                coef_max: args.coef_max,
                integer: args.integer,
                seed: args.seed,
            };
            let p = random_instance(&cfg)?;
            let as_json = args
                .out
                .as_deref()
                .and_then(Path::extension)
                .is_some_and(|e| e == "json");
            let body = if as_json {
                format!("{}\n", p.to_json())
            } else {
                p.to_text()
            };
            emit(args.out.as_deref(), &body)
        }
        Command::Graph { file, out } => {
            let p = load(&file)?;
            emit(out.as_deref(), &polynomial_dot(&p))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
    }
}
