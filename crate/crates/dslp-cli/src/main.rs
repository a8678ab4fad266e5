//! `dslp` — spectra of self-adjoint discrete Sturm-Liouville problems and
//! verification suites for the eigenvalue interlacing catalog.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input,
//! 3 numerical inconsistency, 64 usage error.

mod example;
mod problem;
mod sweep;

use clap::{Parser, Subcommand, ValueEnum};
use dslp_core::ineq::{run_suite, TheoremId, DEFAULT_TOL};
use dslp_core::spectrum::SpectrumError;
use std::path::PathBuf;
use std::process::ExitCode;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAIL: u8 = 1;
pub const EXIT_INVALID_INPUT: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;
pub const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "dslp", version, about = "Discrete Sturm-Liouville spectra and eigenvalue-inequality verification")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolveFormat {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve the complete spectrum of a problem file.
    Solve {
        /// JSON problem file.
        path: PathBuf,
        #[arg(long, value_enum, default_value = "table")]
        format: SolveFormat,
    },
    /// Run the inequality verification suite.
    Verify {
        /// Comma-separated theorem ids, or "all".
        #[arg(long, default_value = "all")]
        theorems: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Base seed; the DSLP_SEED environment variable overrides this.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Write the full JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Parameter sweeps emitting CSV eigenvalue curves.
    Sweep(sweep::SweepArgs),
    /// Reproduce a built-in worked example against hard-coded values.
    Example {
        #[arg(long)]
        id: String,
        /// Perturb the computed coefficients (negative control for tests).
        #[arg(long, hide = true, default_value_t = 0.0)]
        perturb: f64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let kind = e.kind();
            let _ = e.print();
            return if matches!(kind, ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                ExitCode::from(EXIT_OK)
            } else {
                ExitCode::from(EXIT_USAGE)
            };
        }
    };
    let code = match cli.cmd {
        Cmd::Solve { path, format } => cmd_solve(&path, format),
        Cmd::Verify {
            theorems,
            trials,
            seed,
            tol,
            report,
        } => cmd_verify(&theorems, trials, seed, tol, report.as_deref()),
        Cmd::Sweep(args) => sweep::cmd_sweep(&args),
        Cmd::Example { id, perturb } => example::cmd_example(&id, perturb),
    };
    ExitCode::from(code)
}

fn cmd_solve(path: &std::path::Path, format: SolveFormat) -> u8 {
    let problem = match problem::load_problem(path) {
        Ok(p) => p,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_INVALID_INPUT;
        }
    };
    let spectrum = match dslp_core::spectrum::solve_spectrum(&problem.eq, &problem.bc) {
        Ok(s) => s,
        Err(e @ SpectrumError::Poly(_)) => {
            eprintln!("error: {e}");
            return EXIT_NUMERICAL;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_NUMERICAL;
        }
    };
    match format {
        SolveFormat::Json => {
            let out = problem::SolveOutput::new(&problem.bc, &spectrum);
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
        }
        SolveFormat::Table => {
            println!("k = {}  r = {}", spectrum.k, spectrum.r);
            match problem.bc {
                dslp_core::CanonicalBC::Separated { alpha, beta } => {
                    println!("bc: separated  alpha = {alpha:.12}  beta = {beta:.12}");
                }
                dslp_core::CanonicalBC::Coupled { gamma, k } => {
                    println!(
                        "bc: coupled  gamma = {gamma:.12}  K = [[{}, {}], [{}, {}]]",
                        k[0][0], k[0][1], k[1][0], k[1][1]
                    );
                }
            }
            println!("{:<24} multiplicity", "eigenvalue");
            for &(value, m) in spectrum.eigenvalues.roots() {
                println!("{value:<24.15e} {m}");
            }
        }
    }
    EXIT_OK
}

fn parse_theorem_list(s: &str) -> Result<Vec<TheoremId>, String> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(TheoremId::ALL.to_vec());
    }
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        match TheoremId::parse(part) {
            Some(id) => out.push(id),
            None => return Err(format!("unknown theorem id {part:?}")),
        }
    }
    if out.is_empty() {
        return Err("empty theorem list".into());
    }
    Ok(out)
}

fn cmd_verify(
    theorems: &str,
    trials: usize,
    seed: u64,
    tol: f64,
    report: Option<&std::path::Path>,
) -> u8 {
    let ids = match parse_theorem_list(theorems) {
        Ok(ids) => ids,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };
    if trials == 0 {
        eprintln!("error: --trials must be at least 1");
        return EXIT_USAGE;
    }
    let seed = match std::env::var("DSLP_SEED") {
        Ok(v) => match v.parse::<u64>() {
            Ok(s) => s,
            Err(_) => {
                eprintln!("error: DSLP_SEED is not a valid integer: {v:?}");
                return EXIT_USAGE;
            }
        },
        Err(_) => seed,
    };
    let summary = run_suite(&ids, trials, seed, tol);
    println!(
        "{:<10} {:>7} {:>7} {:>7} {:>7}",
        "theorem", "trials", "pass", "tight", "fail"
    );
    for t in &summary.theorems {
        println!(
            "{:<10} {:>7} {:>7} {:>7} {:>7}",
            t.id.as_str(),
            t.trials,
            t.passed,
            t.tight_links,
            t.failed
        );
    }
    let all_passed = summary.all_passed();
    println!(
        "result: {} (seed {}, tol {:e})",
        if all_passed { "PASS" } else { "FAIL" },
        summary.seed,
        summary.tol
    );
    if let Some(path) = report {
        match std::fs::write(path, serde_json::to_string_pretty(&summary).unwrap()) {
            Ok(()) => {}
            Err(e) => {
                eprintln!("error: cannot write report {}: {e}", path.display());
                return EXIT_INVALID_INPUT;
            }
        }
    }
    if all_passed {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAIL
    }
}
