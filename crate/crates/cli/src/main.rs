use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use pcsf_core::format::{parse_instance, parse_solution, serialize_instance, serialize_solution};
use pcsf_core::generate::{generate_instance, GenParams};
use pcsf_core::harness::{run_ratio_test, RatioTestConfig};
use pcsf_core::ipcsf::ipcsf_solve_with;
use pcsf_core::oracle::{exact_solve, verify_solution, Violation};
use pcsf_core::pcsf3::{pcsf3_solve_with, SolverOptions};
use pcsf_core::{Error, Instance, Pair};

#[derive(Parser)]
#[command(
    name = "pcsf",
    version,
    about = "Prize-collecting Steiner forest solver"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algorithm {
    Ipcsf,
    Pcsf3,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance and print the solution
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Algorithm::Ipcsf)]
        algorithm: Algorithm,
        /// Write the growth and iteration log here
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Solve exactly by enumeration (small instances only)
    Exact { file: PathBuf },
    /// Check a solution against an instance
    Verify {
        instance: PathBuf,
        solution: PathBuf,
    },
    /// Print a random instance
    Gen {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        edges: usize,
        #[arg(long)]
        pairs: usize,
        #[arg(long, default_value_t = 10)]
        max_cost: u64,
        #[arg(long, default_value_t = 10)]
        max_penalty: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compare the solver with the exact optimum on random instances
    RatioTest {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 8)]
        max_nodes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 12)]
        max_edges: usize,
        #[arg(long, default_value_t = 6)]
        max_pairs: usize,
    },
}

enum Failure {
    /// Infeasible solution or failed check.
    Violation(String),
    Usage(String),
    OracleLimit(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Violation(_) => 1,
            Failure::Usage(_) => 2,
            Failure::OracleLimit(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Violation(m) | Failure::Usage(m) | Failure::OracleLimit(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::OracleLimit { .. } => Failure::OracleLimit(e.to_string()),
            Error::Argument(_) => Failure::Usage(e.to_string()),
            _ => Failure::Violation(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    parse_instance(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn pair_label(p: &Pair) -> String {
    format!("{} {}", p.lo() + 1, p.hi() + 1)
}

/// Violation text in file numbering (1-based vertices).
fn describe(inst: &Instance, v: &Violation) -> String {
    let edge = |e: usize| match inst.edges().get(e) {
        Some(x) => format!("{} {}", x.u + 1, x.v + 1),
        None => format!("#{e}"),
    };
    match v {
        Violation::DanglingEdge(e) => format!("edge {} does not exist", edge(*e)),
        Violation::UnknownPair(p) => format!("paid pair {} has no positive penalty", pair_label(p)),
        Violation::Cycle(e) => format!("edge {} closes a cycle", edge(*e)),
        Violation::Unserved(p) => format!("pair {} is neither connected nor paid", pair_label(p)),
        Violation::CostMismatch { .. } => v.to_string(),
    }
}

fn solve(file: &Path, algorithm: Algorithm, trace: Option<&Path>) -> Result<String, Failure> {
    let inst = load_instance(file)?;
    let opts = SolverOptions::default();
    let mut log = String::new();
    let sol = match algorithm {
        Algorithm::Pcsf3 => {
            let out = pcsf3_solve_with(&inst, &opts)?;
            log += &out.trace.to_string();
            out.solution
        }
        Algorithm::Ipcsf => {
            let out = ipcsf_solve_with(&inst, &opts)?;
            for (d, level) in out.levels.iter().enumerate() {
                let _ = writeln!(log, "# level {d}");
                log += &level.trace.to_string();
            }
            log += "# iterations\n";
            for rec in &out.records {
                let _ = writeln!(log, "{rec}");
            }
            out.solution
        }
    };
    if let Some(path) = trace {
        fs::write(path, log).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    Ok(serialize_solution(&inst, &sol))
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Solve {
            file,
            algorithm,
            trace,
        } => solve(&file, algorithm, trace.as_deref()),
        Command::Exact { file } => {
            let inst = load_instance(&file)?;
            Ok(serialize_solution(&inst, &exact_solve(&inst)?))
        }
        Command::Verify { instance, solution } => {
            let inst = load_instance(&instance)?;
            let sol = parse_solution(&read(&solution)?, &inst)
                .map_err(|e| Failure::Usage(format!("{}: {e}", solution.display())))?;
            let violations = verify_solution(&inst, &sol);
            if violations.is_empty() {
                Ok(format!("ok cost {}\n", sol.cost))
            } else {
                let lines: Vec<String> = violations
                    .iter()
                    .map(|v| format!("violation: {}", describe(&inst, v)))
                    .collect();
                Err(Failure::Violation(lines.join("\n")))
            }
        }
        Command::Gen {
            nodes,
            edges,
            pairs,
            max_cost,
            max_penalty,
            seed,
        } => {
            let params = GenParams {
                nodes,
                edges,
                pairs,
                max_cost,
                max_penalty,
            };
            let inst = generate_instance(&params, seed)?;
            serialize_instance(&inst).map_err(Failure::Violation)
        }
        Command::RatioTest {
            trials,
            max_nodes,
            seed,
            max_edges,
            max_pairs,
        } => {
            let cfg = RatioTestConfig {
                trials,
                max_nodes,
                max_edges,
                max_pairs,
                seed,
                ..RatioTestConfig::default()
            };
            let report = run_ratio_test(&cfg)?;
            if report.passed() {
                Ok(report.to_string())
            } else {
                Err(Failure::Violation(
                    report.to_string().trim_end().to_string(),
                ))
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("pcsf: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
