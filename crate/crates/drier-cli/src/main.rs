//! Command-line entry point: run or validate scenario configs, or batch a
//! directory of them.

use clap::{Parser, Subcommand};
use drier_cli::{run_config_file, validate_config_file, CliError, RunOptions};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "drier",
    about = "Transport models and adjoint-based heat-source control for continuous driers",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write outputs under this directory instead of the config's choice.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Override the optimizer's iteration budget.
    #[arg(long, global = true)]
    max_iters: Option<usize>,

    /// Suppress progress output.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario config (TOML).
    Run { config: PathBuf },
    /// Check a scenario config without running it.
    Validate { config: PathBuf },
    /// Run every *.toml scenario in a directory, one worker per scenario.
    Batch { dir: PathBuf },
}

fn main() {
    let cli = Cli::parse();
    let opts = RunOptions {
        max_iters: cli.max_iters,
        quiet: cli.quiet,
        output_dir: cli.out.clone(),
        base_dir: PathBuf::from("."),
    };
    let status = match cli.command {
        Command::Run { config } => run_one(&config, &opts),
        Command::Validate { config } => match validate_config_file(&config, &opts) {
            Ok(kind) => {
                opts.log(format!("{}: valid '{kind}' scenario", config.display()));
                0
            }
            Err(e) => report(&config, &e),
        },
        Command::Batch { dir } => batch(&dir, &opts),
    };
    std::process::exit(status);
}

fn run_one(config: &std::path::Path, opts: &RunOptions) -> i32 {
    match run_config_file(config, opts) {
        Ok(_) => 0,
        Err(e) => report(config, &e),
    }
}

fn report(config: &std::path::Path, error: &CliError) -> i32 {
    eprintln!("{}: {error}", config.display());
    error.exit_code()
}

fn batch(dir: &PathBuf, opts: &RunOptions) -> i32 {
    let mut configs: Vec<PathBuf> = match std::fs::read_dir(dir) {
        Ok(entries) => entries
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| p.extension().map(|x| x == "toml").unwrap_or(false))
            .collect(),
        Err(e) => {
            eprintln!("{}: {e}", dir.display());
            return 4;
        }
    };
    configs.sort();
    if configs.is_empty() {
        eprintln!("{}: no scenario configs found", dir.display());
        return 2;
    }
    // One worker per scenario; runs share no mutable state. Separate output
    // dirs come from each config, so --out is rejected to avoid collisions.
    if opts.output_dir.is_some() {
        eprintln!("--out cannot be combined with batch (scenarios would collide)");
        return 2;
    }
    let handles: Vec<_> = configs
        .into_iter()
        .map(|path| {
            let opts = opts.clone();
            std::thread::spawn(move || match run_config_file(&path, &opts) {
                Ok(out) => {
                    opts.log(format!("{}: ok -> {}", path.display(), out.display()));
                    0
                }
                Err(e) => report(&path, &e),
            })
        })
        .collect();
    handles
        .into_iter()
        .map(|h| h.join().unwrap_or(3))
        .max()
        .unwrap_or(0)
}
