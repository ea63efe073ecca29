use std::fs::File;
use std::io::{self, BufReader, Write};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use hlzeta::{Complex64, EvalPoint, ParameterSet};
use hlzeta_cli::batch::{run_batch, BatchDefaults, InputError, OutputFormat};
use hlzeta_cli::complex::parse_complex;
use hlzeta_cli::eval::{evaluate, exit_code, max_diagonal_from_env, ErrorInfo, EvalRecord, MethodChoice, Request};
use hlzeta_cli::table::{render_table, TableSpec};
use hlzeta_cli::verify::{exit_status, run_verify, Grid};
use serde::Serialize;

/// Evaluate the extended Hurwitz–Lerch zeta function and check its identities.
#[derive(Parser)]
#[command(name = "hlzeta", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate at one point and print a JSON record.
    Eval {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Evaluate every row of a CSV file (columns z,t,s,a and optionally the
    /// parameters, method and tol).
    Batch {
        input: String,
        #[arg(long, value_enum, default_value = "jsonl")]
        format: OutputFormat,
        #[command(flatten)]
        solver: SolverArgs,
        /// Worker threads; defaults to the number of cores.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Run the identity suite and print one JSON line per checked instance.
    Verify {
        #[arg(long, value_enum, default_value = "small")]
        grid: Grid,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Absolute tolerance replacing every per-identity tolerance.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Print a grid of values over lists of z (rows) and t (columns).
    Table {
        #[command(flatten)]
        params: ParamArgs,
        /// Comma-separated z values.
        #[arg(long = "z", allow_hyphen_values = true, value_delimiter = ',', required = true, value_parser = parse_complex)]
        zs: Vec<Complex64>,
        /// Comma-separated t values.
        #[arg(long = "t", allow_hyphen_values = true, value_delimiter = ',', required = true, value_parser = parse_complex)]
        ts: Vec<Complex64>,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        s: Complex64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        a: Complex64,
        #[command(flatten)]
        solver: SolverArgs,
    },
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long, default_value = "1", allow_hyphen_values = true, value_parser = parse_complex)]
    mu: Complex64,
    #[arg(long, default_value = "1", allow_hyphen_values = true, value_parser = parse_complex)]
    eta: Complex64,
    #[arg(long = "eta-p", default_value = "1", allow_hyphen_values = true, value_parser = parse_complex)]
    eta_p: Complex64,
    #[arg(long, default_value = "1", allow_hyphen_values = true, value_parser = parse_complex)]
    delta: Complex64,
    #[arg(long = "delta-p", default_value = "1", allow_hyphen_values = true, value_parser = parse_complex)]
    delta_p: Complex64,
    #[arg(long, default_value = "1", allow_hyphen_values = true, value_parser = parse_complex)]
    nu: Complex64,
    #[arg(long, default_value = "1", allow_hyphen_values = true, value_parser = parse_complex)]
    xi: Complex64,
    #[arg(long = "xi-p", default_value = "1", allow_hyphen_values = true, value_parser = parse_complex)]
    xi_p: Complex64,
}

impl ParamArgs {
    fn get(&self) -> ParameterSet {
        ParameterSet {
            mu: self.mu,
            eta: self.eta,
            eta_p: self.eta_p,
            delta: self.delta,
            delta_p: self.delta_p,
            nu: self.nu,
            xi: self.xi,
            xi_p: self.xi_p,
        }
    }
}

#[derive(Args)]
struct PointArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    z: Complex64,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    t: Complex64,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    s: Complex64,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    a: Complex64,
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, value_enum, default_value = "auto")]
    method: MethodChoice,
    /// Requested tolerance; the default depends on the method.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Serialize)]
struct ErrorLine {
    error: ErrorInfo,
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer(&mut out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}

fn usage_error(message: String) -> Result<ExitCode> {
    print_json(&ErrorLine { error: ErrorInfo { kind: "invalid-parameter".into(), message, partial: None } })?;
    Ok(ExitCode::from(2))
}

fn install_pool(jobs: Option<usize>) -> Result<()> {
    if let Some(n) = jobs {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("building the thread pool")?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    let max_diagonal = match max_diagonal_from_env() {
        Ok(n) => n,
        Err(msg) => return usage_error(msg),
    };
    match cli.command {
        Command::Eval { params, point, solver } => {
            let p = params.get();
            let pt = EvalPoint { z: point.z, t: point.t, s: point.s, a: point.a };
            if let Err(e) = p.validate().and_then(|_| pt.validate()) {
                print_json(&ErrorLine { error: ErrorInfo::new(&e, None) })?;
                return Ok(ExitCode::from(exit_code(&e) as u8));
            }
            let req = Request { params: p, point: pt, method: solver.method, tol: solver.tol, max_diagonal };
            match evaluate(&req) {
                (tag, Ok(r)) => {
                    print_json(&EvalRecord::new(&r, tag))?;
                    Ok(ExitCode::SUCCESS)
                }
                (tag, Err(e)) => {
                    print_json(&ErrorLine { error: ErrorInfo::new(&e, Some(tag)) })?;
                    Ok(ExitCode::from(exit_code(&e) as u8))
                }
            }
        }
        Command::Batch { input, format, solver, jobs } => {
            install_pool(jobs)?;
            let file = match File::open(&input) {
                Ok(f) => f,
                Err(e) => return usage_error(format!("cannot open {input}: {e}")),
            };
            let defaults = BatchDefaults { method: solver.method, tol: solver.tol, max_diagonal };
            let out = io::BufWriter::new(io::stdout().lock());
            match run_batch(BufReader::new(file), out, format, &defaults) {
                Ok(()) => Ok(ExitCode::SUCCESS),
                Err(e) if e.is::<InputError>() => {
                    eprintln!("hlzeta: {e}");
                    Ok(ExitCode::from(2))
                }
                Err(e) => Err(anyhow::anyhow!("{e}")),
            }
        }
        Command::Verify { grid, seed, tol, jobs } => {
            install_pool(jobs)?;
            let reports = run_verify(grid, seed, tol);
            let mut out = io::BufWriter::new(io::stdout().lock());
            for r in &reports {
                serde_json::to_writer(&mut out, r)?;
                out.write_all(b"\n")?;
            }
            out.flush()?;
            Ok(ExitCode::from(exit_status(&reports) as u8))
        }
        Command::Table { params, zs, ts, s, a, solver } => {
            let spec = TableSpec {
                params: params.get(),
                zs,
                ts,
                s,
                a,
                method: solver.method,
                tol: solver.tol,
                max_diagonal,
            };
            print!("{}", render_table(&spec));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("hlzeta: {e:#}");
            ExitCode::from(1)
        }
    }
}
