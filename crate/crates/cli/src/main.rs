//! Scenario front end for the DS II / quintic NLS solver.
//!
//! Exit codes: 0 run completed, 2 run halted on overflow, 64 usage or
//! configuration error, 1 runtime failure (I/O, solver contract).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ds2_cli::config::{self, FileConfig, FlagOverrides};
use ds2_cli::runner::{self, Outcome};

const EXIT_OVERFLOW: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "ds2", about = "Split-step DS II / quintic NLS scenario runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its artifacts.
    Run(RunArgs),
    /// List the named scenario presets.
    Scenarios,
}

#[derive(Args)]
struct RunArgs {
    /// Scenario preset key (see `ds2 scenarios`).
    #[arg(long)]
    scenario: Option<String>,
    /// TOML config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    ny: Option<usize>,
    #[arg(long)]
    lx: Option<f64>,
    #[arg(long)]
    ly: Option<f64>,
    /// Number of time steps.
    #[arg(long)]
    nt: Option<usize>,
    #[arg(long = "t-start")]
    t_start: Option<f64>,
    #[arg(long = "t-end")]
    t_end: Option<f64>,
    /// Worker count for the slab decomposition (default: $DS_WORKERS
    /// or 1).
    #[arg(short = 'p', long)]
    workers: Option<usize>,
    /// Sample diagnostics every this many steps.
    #[arg(long)]
    cadence: Option<usize>,
    /// Output directory.
    #[arg(long, short = 'o')]
    out: Option<PathBuf>,
    /// Snapshot time; repeatable.
    #[arg(long = "snapshot")]
    snapshots: Vec<f64>,
    /// Absolute ΔE jump threshold for the blowup detector.
    #[arg(long = "jump-abs")]
    jump_abs: Option<f64>,
    /// Relative (multiple-of-baseline) ΔE jump threshold.
    #[arg(long = "jump-rel")]
    jump_rel: Option<f64>,
}

fn workers_from_env() -> Option<usize> {
    std::env::var("DS_WORKERS").ok()?.parse().ok()
}

fn run(args: RunArgs) -> ExitCode {
    let file = match &args.config {
        Some(path) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read config {}: {e}", path.display());
                    return ExitCode::from(EXIT_USAGE);
                }
            };
            match toml::from_str::<FileConfig>(&text) {
                Ok(f) => f,
                Err(e) => {
                    eprintln!("error: invalid config {}: {e}", path.display());
                    return ExitCode::from(EXIT_USAGE);
                }
            }
        }
        None => FileConfig::default(),
    };
    let flags = FlagOverrides {
        scenario: args.scenario,
        nx: args.nx,
        ny: args.ny,
        lx: args.lx,
        ly: args.ly,
        nt: args.nt,
        t_start: args.t_start,
        t_end: args.t_end,
        workers: args.workers.or_else(workers_from_env),
        cadence: args.cadence,
        out_dir: args.out,
        snapshots: args.snapshots,
        jump_abs: args.jump_abs,
        jump_rel: args.jump_rel,
    };
    let cfg = match config::resolve(file, flags) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match runner::run_scenario(&cfg) {
        Ok(Outcome::Completed) => ExitCode::SUCCESS,
        Ok(Outcome::OverflowHalt) => ExitCode::from(EXIT_OVERFLOW),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn list_scenarios() -> ExitCode {
    for p in ds2::solutions::presets::<f64>() {
        println!(
            "{key:<18} {nx}x{ny} lx={lx} ly={ly} nt={nt} t=[{t0}, {t1}]",
            key = p.key,
            nx = p.nx,
            ny = p.ny,
            lx = p.lx,
            ly = p.ly,
            nt = p.nt,
            t0 = p.scenario.t_start,
            t1 = p.t_end,
        );
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are not usage errors
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Run(args) => run(args),
        Command::Scenarios => list_scenarios(),
    }
}
