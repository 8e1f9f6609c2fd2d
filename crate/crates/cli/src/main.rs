//! `cutfeec` command line: run one of the four experiments against a config
//! file and emit CSV.
//!
//! Exit codes: 0 success, 2 configuration error, 3 solver/assembly failure,
//! 4 geometry failure.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cutfeec::error::Error;
use cutfeec_cli::config::ExperimentConfig;
use cutfeec_cli::csv::CsvDoc;
use cutfeec_cli::experiments;

#[derive(Parser)]
#[command(
    name = "cutfeec",
    about = "Unfitted finite-element exterior calculus experiments on level-set geometries"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Convergence study over the configured mesh resolutions.
    Converge(RunArgs),
    /// Condition numbers and pencil extremes across the level-set offsets.
    SweepCut(RunArgs),
    /// Norm-equivalence eigenvalue sweep over degrees, meshes and offsets.
    NormEquiv(RunArgs),
    /// Solve once and optionally dump the solution on a uniform grid.
    Solve(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Path to the experiment configuration.
    #[arg(long)]
    config: PathBuf,
    /// Write the CSV here instead of the config's output.path (or stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::Form(_) => 2,
        Error::Geometry(_) => 4,
        _ => 3,
    }
}

fn emit(doc: &CsvDoc, target: Option<&PathBuf>) -> std::io::Result<()> {
    match target {
        Some(path) => {
            let mut f = fs::File::create(path)?;
            doc.write_to(&mut f)
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            doc.write_to(&mut lock)?;
            lock.flush()
        }
    }
}

fn run(cli: Cli) -> Result<(), (u8, String)> {
    if let Ok(threads) = std::env::var("CUTFEEC_THREADS") {
        let n: usize = threads
            .parse()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or((2u8, format!("CUTFEEC_THREADS must be a positive integer, got '{threads}'")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| (3u8, format!("thread pool: {e}")))?;
    }
    let args = match &cli.cmd {
        Cmd::Converge(a) | Cmd::SweepCut(a) | Cmd::NormEquiv(a) | Cmd::Solve(a) => a,
    };
    let text = fs::read_to_string(&args.config)
        .map_err(|e| (2u8, format!("cannot read config {}: {e}", args.config.display())))?;
    let cfg = ExperimentConfig::parse(&text).map_err(|e| (exit_code_for(&e), e.to_string()))?;
    let fail = |e: Error| (exit_code_for(&e), e.to_string());
    let (doc, dump, dofs) = match cli.cmd {
        Cmd::Converge(_) => (experiments::run_converge(&cfg).map_err(fail)?, None, None),
        Cmd::SweepCut(_) => (experiments::run_sweep_cut(&cfg).map_err(fail)?, None, None),
        Cmd::NormEquiv(_) => (experiments::run_norm_equiv(&cfg).map_err(fail)?, None, None),
        Cmd::Solve(_) => experiments::run_solve(&cfg).map_err(fail)?,
    };
    let target = args.out.clone().or(cfg.output.clone());
    emit(&doc, target.as_ref()).map_err(|e| (2u8, format!("cannot write output: {e}")))?;
    for (extra, path) in [(dump, cfg.field_dump.as_ref()), (dofs, cfg.dof_dump.as_ref())] {
        if let (Some(doc), Some(path)) = (extra, path) {
            let mut f = fs::File::create(path)
                .map_err(|e| (2u8, format!("cannot write {}: {e}", path.display())))?;
            doc.write_to(&mut f)
                .map_err(|e| (2u8, format!("cannot write {}: {e}", path.display())))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => {
            eprintln!("cutfeec: {msg}");
            ExitCode::from(code)
        }
    }
}
