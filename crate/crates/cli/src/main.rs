use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qhj_cli::{parse_config, run_command, CliError, Command, Format, Status};

/// Propagators of quadratic Lagrangians from the quantum Hamilton-Jacobi equation.
#[derive(Debug, Parser)]
#[command(name = "qhj", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Evaluate K(xB,tB|xA,tA) at the configured boundary.
    Propagate(Args),
    /// Check the kernel against the independent oracles.
    Verify(Args),
    /// Time-sliced kernel against the propagator for several slice counts.
    SliceConverge(Args),
    /// Evolve a Gaussian packet on a grid.
    Evolve(Args),
    /// Kernel on a grid of final points.
    Table(Args),
}

#[derive(Debug, clap::Args)]
struct Args {
    /// JSON configuration file, or `-` for stdin.
    #[arg(long)]
    config: PathBuf,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Integrator and quadrature tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Largest slice count; counts double from 8 up to it.
    #[arg(long)]
    slices: Option<usize>,
    /// Crank-Nicolson time steps.
    #[arg(long)]
    steps: Option<usize>,
}

impl Cmd {
    fn split(&self) -> (Command, &Args) {
        match self {
            Cmd::Propagate(a) => (Command::Propagate, a),
            Cmd::Verify(a) => (Command::Verify, a),
            Cmd::SliceConverge(a) => (Command::SliceConverge, a),
            Cmd::Evolve(a) => (Command::Evolve, a),
            Cmd::Table(a) => (Command::Table, a),
        }
    }
}

fn read_config(path: &PathBuf) -> Result<String, CliError> {
    let io_err = |e: io::Error| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    if path.as_os_str() == "-" {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text).map_err(io_err)?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(io_err)
    }
}

fn execute(command: Command, args: &Args) -> Result<(String, Status), CliError> {
    let mut cfg = parse_config(&read_config(&args.config)?)?;
    if let Some(tol) = args.tol {
        cfg.set_tolerance(tol);
    }
    if let Some(n) = args.slices {
        cfg.set_max_slices(n);
    }
    if let Some(steps) = args.steps {
        cfg.steps = steps;
    }
    let format = args.format.or(cfg.format).unwrap_or(Format::Csv);
    let outcome = run_command(&cfg, command, format)?;
    Ok((outcome.document, outcome.status))
}

fn emit(out: Option<&PathBuf>, text: &str) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let (command, args) = cli.command.split();
    let (text, code) = match execute(command, args) {
        Ok((doc, status)) => (doc, status.exit_code()),
        Err(e) => {
            eprintln!("qhj {}: {e}", command.name());
            let mut doc = serde_json::to_string(&e.document()).expect("error documents serialize");
            doc.push('\n');
            (doc, 1)
        }
    };
    if let Err(e) = emit(args.out.as_ref(), &text) {
        eprintln!("qhj: cannot write output: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
